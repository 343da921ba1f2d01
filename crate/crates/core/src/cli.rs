//! The `fqmap` command line: map operator files through a chosen network,
//! print the sector tables, and run the verification suite.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::algebra::FermionMonomial;
use crate::encoder::{
    assemble, charge_sector, kw_dual_record, map_operator_with, twist, BoundaryCondition,
    DefectPlacement, InsertionOp, LoopChoice, LoopKind, MappingNetwork, RuleSet,
};
use crate::graded::Side;
use crate::graph::{cycle_graph, parse_graph_file, torus_graph, MappingGraph, Preset};
use crate::oracle::{network_label, verify_network, VerificationReport};

#[derive(Parser)]
#[command(
    name = "fqmap",
    about = "Exact fermion-to-qubit operator compiler on graphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Map fermionic monomials from a file (or stdin) to Pauli strings.
    Map(MapArgs),
    /// Print the sector table of a preset graph.
    Table(NetArgs),
    /// Run the exact verification suite for the configured network.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct NetArgs {
    /// Graph: `cycle`, `torus`, or a path to a graph file.
    #[arg(long)]
    graph: String,
    /// Cycle length (with --graph cycle).
    #[arg(long)]
    n: Option<u32>,
    /// Torus width (with --graph torus).
    #[arg(long)]
    lx: Option<u32>,
    /// Torus height (with --graph torus).
    #[arg(long)]
    ly: Option<u32>,
    /// Boundary condition: chain `I|Z|X|ZX`; torus any of `I`, `ZH`, `ZV`,
    /// `ZHZV`, optionally suffixed `X` for the defect (e.g. `ZHX`).
    #[arg(long, default_value = "I")]
    bc: String,
    /// Place the odd defect; optionally at `EDGE_LABEL` (preset position
    /// when the value is omitted).
    #[arg(long, value_name = "EDGE", num_args = 0..=1, default_missing_value = "")]
    defect: Option<String>,
    /// Non-contractible loop representatives relative to the defect.
    #[arg(long, value_enum, default_value_t = LoopArg::Intersect)]
    loops: LoopArg,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Realization budget: maximum edge count contracted exactly
    /// (env `FQMAP_MAX_EDGES` overrides the default of 20).
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Args)]
struct MapArgs {
    #[command(flatten)]
    net: NetArgs,
    /// Operator file: one monomial per line, e.g. `Z[2]` or
    /// `-1 * X[0] X[1]`; `-` reads stdin.
    file: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    net: NetArgs,
    /// Corrupt the derived rule table on one edge (test hook; requires
    /// FQMAP_TEST_HOOKS=1).
    #[arg(long, hide = true)]
    corrupt_rule_edge: Option<u32>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LoopArg {
    Intersect,
    Avoid,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Run the CLI; returns the process exit code (0 pass, 1 verification
/// failure, 2 usage error).
pub fn run() -> i32 {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Map(args) => cmd_map(&args),
        Command::Table(args) => cmd_table(&args),
        Command::Verify(args) => cmd_verify(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn build_network(args: &NetArgs) -> Result<(MappingNetwork, LoopChoice), String> {
    let graph: MappingGraph = match args.graph.as_str() {
        "cycle" => {
            let n = args.n.ok_or("--graph cycle needs --n")?;
            cycle_graph(n).map_err(|e| e.to_string())?
        }
        "torus" => {
            let lx = args.lx.ok_or("--graph torus needs --lx")?;
            let ly = args.ly.ok_or("--graph torus needs --ly")?;
            torus_graph(lx, ly).map_err(|e| e.to_string())?
        }
        path => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read graph file {path}: {e}"))?;
            parse_graph_file(&text).map_err(|e| e.to_string())?
        }
    };
    let is_cycle = matches!(graph.preset, Some(Preset::Cycle { .. }));
    let is_torus = matches!(graph.preset, Some(Preset::Torus { .. }));
    let (bc, bc_defect) = parse_bc(&args.bc, is_cycle, is_torus)?;
    let mut defect = DefectPlacement::none();
    if let Some(spec) = &args.defect {
        if bc_defect {
            return Err("the boundary condition already includes the defect".into());
        }
        let edge = if spec.is_empty() {
            match graph.preset {
                Some(Preset::Cycle { n }) => n - 1,
                Some(Preset::Torus { .. }) => 0,
                None => return Err("--defect on a custom graph needs an edge label".into()),
            }
        } else {
            graph
                .edge_by_label(spec)
                .ok_or_else(|| format!("unknown edge {spec:?}"))?
        };
        defect = DefectPlacement::at(edge, Side::R);
    }
    if bc_defect {
        defect = DefectPlacement::at(0, Side::R);
    }
    let net = if is_cycle {
        // the chain boundary carries its own odd part
        let d = if bc_defect { DefectPlacement::none() } else { defect };
        assemble(graph, chain_with_defect(&args.bc)?, d).map_err(|e| e.to_string())?
    } else {
        assemble(graph, bc, defect).map_err(|e| e.to_string())?
    };
    let loops = match args.loops {
        LoopArg::Intersect => LoopChoice::Intersect,
        LoopArg::Avoid => LoopChoice::Avoid,
    };
    if args.loops == LoopArg::Avoid && is_cycle {
        return Err("the chain has a single loop class; --loops avoid applies to the torus".into());
    }
    if let Some(b) = args.budget {
        if net.graph().edges().len() > b {
            return Err(format!(
                "graph has {} edges, over the budget {b}",
                net.graph().edges().len()
            ));
        }
    }
    Ok((net, loops))
}

fn chain_with_defect(s: &str) -> Result<BoundaryCondition, String> {
    let sigma = match s {
        "I" => InsertionOp::I,
        "Z" => InsertionOp::Z,
        "X" => InsertionOp::X,
        "ZX" => InsertionOp::ZX,
        _ => return Err(format!("chain boundary {s:?} is not one of I, Z, X, ZX")),
    };
    Ok(BoundaryCondition::chain(sigma))
}

/// Parse a boundary-condition name; the bool reports whether it carries the
/// odd defect (torus form).
fn parse_bc(s: &str, is_cycle: bool, is_torus: bool) -> Result<(BoundaryCondition, bool), String> {
    if is_cycle {
        return Ok((chain_with_defect(s)?, false));
    }
    if is_torus {
        let (body, defect) = match s.strip_suffix('X') {
            Some(b) => (b, true),
            None => (s.as_ref(), false),
        };
        let (z_h, z_v) = match body {
            "I" | "" => (false, false),
            "ZH" => (true, false),
            "ZV" => (false, true),
            "ZHZV" | "ZVZH" => (true, true),
            _ => {
                return Err(format!(
                    "torus boundary {s:?} is not one of I, ZH, ZV, ZHZV (with optional X suffix)"
                ))
            }
        };
        return Ok((BoundaryCondition::torus(z_h, z_v), defect));
    }
    if s == "I" {
        Ok((BoundaryCondition::trivial(), false))
    } else {
        Err("custom graphs take --bc I plus an optional --defect".into())
    }
}

#[derive(Serialize)]
struct MappedLine {
    input: String,
    phase: String,
    letters: String,
    weight: usize,
}

#[derive(Serialize)]
struct MapDocument {
    network: String,
    sites: Vec<String>,
    sector: crate::encoder::SectorRecord,
    lines: Vec<MappedLine>,
}

fn cmd_map(args: &MapArgs) -> Result<i32, String> {
    let (net, loops) = build_network(&args.net)?;
    let rules = RuleSet::derive(&net);
    let text = if args.file.as_os_str() == "-" {
        use std::io::Read;
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| e.to_string())?;
        s
    } else {
        std::fs::read_to_string(&args.file).map_err(|e| format!("{}: {e}", args.file.display()))?
    };
    let sector = charge_sector(&net, loops).map_err(|e| e.to_string())?;
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let m = FermionMonomial::parse(line, net.mode_universe().clone())
            .map_err(|e| format!("line {}: {e}", idx + 1))?;
        let p = map_operator_with(&net, &rules, &m).map_err(|e| format!("line {}: {e}", idx + 1))?;
        let full = p.canonical_text();
        let (phase, letters) = split_phase(&full);
        lines.push(MappedLine {
            input: line.to_string(),
            phase,
            letters,
            weight: p.weight(),
        });
    }
    let doc = MapDocument {
        network: network_label(&net),
        sites: net.site_universe().sites().to_vec(),
        sector,
        lines,
    };
    match args.net.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&doc).unwrap()),
        Format::Text => {
            println!("# network: {}", doc.network);
            println!("# sites: {}", doc.sites.join(" "));
            println!(
                "# sector: parity={} loops={:?}",
                fmt_sign(doc.sector.fermion_parity),
                doc.sector.spin_eigenvalues
            );
            for l in &doc.lines {
                println!("{} {} w={}", l.phase, l.letters, l.weight);
            }
        }
    }
    Ok(0)
}

fn split_phase(canonical: &str) -> (String, String) {
    for (prefix, phase) in [("+i", "+i"), ("-i", "-i"), ("+", "+1"), ("-", "-1")] {
        if let Some(rest) = canonical.strip_prefix(prefix) {
            return (phase.to_string(), rest.to_string());
        }
    }
    ("+1".to_string(), canonical.to_string())
}

fn fmt_sign(v: i8) -> String {
    if v >= 0 {
        format!("+{v}")
    } else {
        format!("{v}")
    }
}

#[derive(Serialize)]
struct TableDocument {
    network: String,
    loops: String,
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

/// A rendered sector table.
pub struct TableText {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl TableText {
    pub fn to_text(&self) -> String {
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                widths[i] = widths[i].max(cell.len());
            }
        }
        let mut out = String::new();
        let mut fmt_row = |cells: &[String]| {
            let mut line = String::new();
            for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
                if i > 0 {
                    line.push_str("  ");
                }
                let _ = write!(line, "{cell:<w$}");
            }
            out.push_str(line.trim_end());
            out.push('\n');
        };
        fmt_row(&self.columns);
        for row in &self.rows {
            fmt_row(row);
        }
        out
    }
}

/// Render the sector table of a preset: the chain table includes the
/// dual-spin and unified columns; the torus table the loop sectors and
/// twists of all eight boundary conditions.
pub fn render_table(graph: &MappingGraph, loops: LoopChoice) -> Result<TableText, String> {
    match graph.preset {
        Some(Preset::Cycle { .. }) => {
            let mut rows = Vec::new();
            for sigma in [InsertionOp::I, InsertionOp::Z, InsertionOp::X, InsertionOp::ZX] {
                let net = assemble(
                    graph.clone(),
                    BoundaryCondition::chain(sigma),
                    DefectPlacement::none(),
                )
                .map_err(|e| e.to_string())?;
                let rec = charge_sector(&net, loops).map_err(|e| e.to_string())?;
                let dual = kw_dual_record(&net).map_err(|e| e.to_string())?;
                let unified = if net.is_odd() { "Z~X~" } else { "Z~" };
                rows.push(vec![
                    fmt_sign(rec.fermion_parity),
                    rec.fermion_twists[0].label().to_string(),
                    rec.bc_label.clone(),
                    fmt_sign(rec.spin_eigenvalues[0]),
                    rec.spin_twists[0].label().to_string(),
                    dual.bc2.label().to_string(),
                    fmt_sign(dual.dual_parity),
                    dual.dual_twist.label().to_string(),
                    unified.to_string(),
                ]);
            }
            Ok(TableText {
                columns: [
                    "prodZ~", "f.twist", "BC1", "prodX", "s.twist", "BC2", "prodZ", "d.twist",
                    "unified",
                ]
                .iter()
                .map(|s| s.to_string())
                .collect(),
                rows,
            })
        }
        Some(Preset::Torus { .. }) => {
            let mut rows = Vec::new();
            for (z_h, z_v, defect) in [
                (false, false, false),
                (true, false, false),
                (false, true, false),
                (true, true, false),
                (false, false, true),
                (true, false, true),
                (false, true, true),
                (true, true, true),
            ] {
                let d = if defect {
                    DefectPlacement::at(0, Side::R)
                } else {
                    DefectPlacement::none()
                };
                let net = assemble(graph.clone(), BoundaryCondition::torus(z_h, z_v), d)
                    .map_err(|e| e.to_string())?;
                let rec = charge_sector(&net, loops).map_err(|e| e.to_string())?;
                let h = twist(&net, LoopKind::Horizontal).map_err(|e| e.to_string())?;
                let v = twist(&net, LoopKind::Vertical).map_err(|e| e.to_string())?;
                let hv = if net.is_odd() {
                    format!("{}/{}", h.1.label(), v.1.label())
                } else {
                    "I".to_string()
                };
                rows.push(vec![
                    fmt_sign(rec.fermion_parity),
                    h.0.label().to_string(),
                    v.0.label().to_string(),
                    rec.bc_label.clone(),
                    fmt_sign(rec.spin_eigenvalues[0]),
                    fmt_sign(rec.spin_eigenvalues[1]),
                    hv,
                ]);
            }
            Ok(TableText {
                columns: ["prodZ~", "H.twist", "V.twist", "BC", "X_H", "X_V", "HV.twist"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
                rows,
            })
        }
        None => Err("the sector table needs a preset graph".into()),
    }
}

fn cmd_table(args: &NetArgs) -> Result<i32, String> {
    let (net, loops) = build_network(args)?;
    let table = render_table(net.graph(), loops)?;
    match args.format {
        Format::Text => print!("{}", table.to_text()),
        Format::Json => {
            let doc = TableDocument {
                network: network_label(&net),
                loops: match loops {
                    LoopChoice::Intersect => "intersect".into(),
                    LoopChoice::Avoid => "avoid".into(),
                },
                columns: table.columns,
                rows: table.rows,
            };
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct VerifyDocument {
    network: String,
    report: VerificationReport,
    pass: bool,
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32, String> {
    let (net, loops) = build_network(&args.net)?;
    let mut rules = RuleSet::derive(&net);
    if let Some(edge) = args.corrupt_rule_edge {
        if std::env::var("FQMAP_TEST_HOOKS").as_deref() == Ok("1") {
            rules.corrupt_edge_for_test(edge);
        } else {
            return Err("--corrupt-rule-edge requires FQMAP_TEST_HOOKS=1".into());
        }
    }
    let report = verify_network(&net, loops, &rules).map_err(|e| e.to_string())?;
    let pass = report.all_pass();
    match args.net.format {
        Format::Text => print!("{report}"),
        Format::Json => {
            let doc = VerifyDocument {
                network: network_label(&net),
                report: report.clone(),
                pass,
            };
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
    }
    Ok(if pass { 0 } else { 1 })
}
