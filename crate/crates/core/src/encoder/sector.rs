use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{PauliString, Phase};
use crate::graded::LocalOp;
use crate::graph::{cycle_basis, EdgeId, Preset, VertexId};

use super::map::reduce_word;
use super::network::LoopKind;
use super::{assemble, BoundaryCondition, DefectPlacement, EncoderError, MappingNetwork, RuleSet};

/// Which representatives to use for the non-contractible loop constraints
/// on the torus: passing through the defect edge or avoiding it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LoopChoice {
    #[default]
    Intersect,
    Avoid,
}

/// Twist descriptors appearing in the sector tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TwistKind {
    /// no twist
    I,
    /// fermionic Z on one physical leg (chain)
    FermionZ,
    /// horizontal loop of fermionic Z on the physical fermions
    FermionZLoopH,
    /// vertical loop of fermionic Z on the physical fermions
    FermionZLoopV,
    /// spin X twist (chain)
    SpinX,
    /// one unit cell of the horizontal spin loop: Z on a vertical leg, X on
    /// a horizontal leg
    SpinCellH,
    /// one unit cell of the vertical spin loop: Z on a horizontal leg, X on
    /// a vertical leg
    SpinCellV,
    /// spin Z twist (dual chain)
    SpinZ,
}

impl TwistKind {
    pub fn label(self) -> &'static str {
        match self {
            TwistKind::I => "I",
            TwistKind::FermionZ => "Z~",
            TwistKind::FermionZLoopH => "Z~_pH",
            TwistKind::FermionZLoopV => "Z~_pV",
            TwistKind::SpinX => "X",
            TwistKind::SpinCellH => "ZvXh",
            TwistKind::SpinCellV => "ZhXv",
            TwistKind::SpinZ => "Z",
        }
    }
}

/// One row of the sector tables: how a boundary condition selects charge
/// sectors and twists on both sides of the duality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SectorRecord {
    pub bc_label: String,
    pub fermion_parity: i8,
    pub fermion_twists: Vec<TwistKind>,
    pub spin_eigenvalues: Vec<i8>,
    pub spin_twists: Vec<TwistKind>,
}

/// The gauge constraints of a network: one Pauli string per independent
/// cycle, each absorbed by the network with eigenvalue +1 exactly as
/// returned (phase included).
pub fn gauge_constraints(
    net: &MappingNetwork,
    choice: LoopChoice,
) -> Result<Vec<PauliString>, EncoderError> {
    let rules = RuleSet::derive(net);
    let mut out = Vec::new();
    for cycle in constraint_cycles(net, choice)? {
        out.push(loop_string(net, &rules, &cycle)?);
    }
    Ok(out)
}

/// The cycle sets used for the constraints, with torus loop representatives
/// selected per `choice`.
pub fn constraint_cycles(
    net: &MappingNetwork,
    choice: LoopChoice,
) -> Result<Vec<Vec<EdgeId>>, EncoderError> {
    let g = net.graph();
    let basis = cycle_basis(g)?;
    match g.preset {
        Some(Preset::Torus { lx, ly }) => {
            let mut cycles: Vec<Vec<EdgeId>> = basis
                .cycles
                .iter()
                .take(basis.rank - 2)
                .map(|c| c.iter().copied().collect())
                .collect();
            let (h, v) = torus_loop_representatives(net, choice, lx, ly)?;
            cycles.push(h);
            cycles.push(v);
            Ok(cycles)
        }
        _ => Ok(basis
            .cycles
            .iter()
            .map(|c| c.iter().copied().collect())
            .collect()),
    }
}

fn torus_h_edges(lx: u32, y: u32) -> Vec<EdgeId> {
    (0..lx).map(|x| y * lx + x).collect()
}

fn torus_v_edges(lx: u32, ly: u32, x: u32) -> Vec<EdgeId> {
    (0..ly).map(|y| lx * ly + y * lx + x).collect()
}

/// Pick the horizontal and vertical loop representatives. With a defect,
/// `Intersect` picks loops whose derived strings act non-trivially on the
/// defect edge and `Avoid` picks ones that do not; the choice is made by
/// inspecting the derived letters, not by assumption.
fn torus_loop_representatives(
    net: &MappingNetwork,
    choice: LoopChoice,
    lx: u32,
    ly: u32,
) -> Result<(Vec<EdgeId>, Vec<EdgeId>), EncoderError> {
    let defect = net.defect();
    if !defect.present {
        return Ok((torus_h_edges(lx, 0), torus_v_edges(lx, ly, 0)));
    }
    let bare = bare_network(net)?;
    let rules = RuleSet::derive(&bare);
    let defect_label = net.graph().edge_label(defect.edge).to_string();
    let want_hit = choice == LoopChoice::Intersect;
    let pick = |candidates: Vec<Vec<EdgeId>>| -> Result<Vec<EdgeId>, EncoderError> {
        for c in &candidates {
            let s = loop_string(&bare, &rules, c)?;
            let hit = s
                .letter(&defect_label)
                .map(|l| l != crate::algebra::PauliLetter::I)
                .unwrap_or(false);
            if hit == want_hit {
                return Ok(c.clone());
            }
        }
        Err(EncoderError::Internal(
            "no loop representative with the requested defect intersection".into(),
        ))
    };
    let h = pick((0..ly).map(|y| torus_h_edges(lx, y)).collect())?;
    let v = pick((0..lx).map(|x| torus_v_edges(lx, ly, x)).collect())?;
    Ok((h, v))
}

fn bare_network(net: &MappingNetwork) -> Result<MappingNetwork, EncoderError> {
    assemble(
        net.graph().clone(),
        BoundaryCondition::trivial(),
        DefectPlacement::none(),
    )
}

/// Derive the spin string absorbed by the network when the identity is
/// routed around the given cycle. The returned string satisfies
/// `U · P(s) = U` exactly.
fn loop_string(
    net: &MappingNetwork,
    rules: &RuleSet,
    cycle: &[EdgeId],
) -> Result<PauliString, EncoderError> {
    let g = net.graph();
    let local = vec![LocalOp::IDENT; g.vertices().len()];
    let mut toggles: BTreeMap<VertexId, Vec<u8>> = BTreeMap::new();
    for &e in cycle {
        let edge = g.edge(e);
        for v in [edge.tail, edge.head] {
            let slot = g.slot_of(v, e).expect("incident");
            let list = toggles.entry(v).or_default();
            if let Some(p) = list.iter().position(|&s| s == slot) {
                list.remove(p);
            } else {
                list.push(slot);
            }
        }
    }
    for list in toggles.values_mut() {
        list.sort();
    }
    toggles.retain(|_, l| !l.is_empty());
    let mut neg = false;
    let (phase, letters) = reduce_word(net, rules, &local, &toggles, false, &mut neg)?;
    let mut out = PauliString::identity(net.site_universe().clone());
    for (e, letter) in letters {
        out.set(g.edge_label(e), letter)?;
    }
    out.mul_phase(phase);
    if neg {
        out.mul_phase(Phase::MINUS_ONE);
    }
    Ok(out)
}

/// Eigenvalue of the positive-phase form of a derived loop string.
fn loop_eigenvalue(s: &PauliString) -> Result<i8, EncoderError> {
    match s.phase() {
        Phase::PLUS_ONE => Ok(1),
        Phase::MINUS_ONE => Ok(-1),
        _ => Err(EncoderError::Internal(format!(
            "loop absorption phase {} is not ±1",
            s.phase()
        ))),
    }
}

/// The charge sectors and twists selected by the network's boundary
/// condition, as one row of the sector table.
pub fn charge_sector(
    net: &MappingNetwork,
    choice: LoopChoice,
) -> Result<SectorRecord, EncoderError> {
    let rules = RuleSet::derive(net);
    let parity = if net.is_odd() { -1 } else { 1 };
    match net.graph().preset {
        Some(Preset::Cycle { .. }) => {
            let cycles = constraint_cycles(net, choice)?;
            let s = loop_string(net, &rules, &cycles[0])?;
            let sigma = chain_sigma_label(net);
            Ok(SectorRecord {
                bc_label: sigma.clone(),
                fermion_parity: parity,
                fermion_twists: vec![twist_fermion_chain(net)],
                spin_eigenvalues: vec![loop_eigenvalue(&s)?],
                spin_twists: vec![twist_spin_chain(net)],
            })
        }
        Some(Preset::Torus { .. }) => {
            let cycles = constraint_cycles(net, choice)?;
            let n = cycles.len();
            let h = loop_string(net, &rules, &cycles[n - 2])?;
            let v = loop_string(net, &rules, &cycles[n - 1])?;
            Ok(SectorRecord {
                bc_label: torus_bc_label(net),
                fermion_parity: parity,
                fermion_twists: vec![
                    twist(net, LoopKind::Horizontal)?.0,
                    twist(net, LoopKind::Vertical)?.0,
                ],
                spin_eigenvalues: vec![loop_eigenvalue(&h)?, loop_eigenvalue(&v)?],
                spin_twists: vec![
                    twist(net, LoopKind::Horizontal)?.1,
                    twist(net, LoopKind::Vertical)?.1,
                ],
            })
        }
        None => {
            let cycles = constraint_cycles(net, choice)?;
            let mut eigs = Vec::new();
            for c in &cycles {
                eigs.push(loop_eigenvalue(&loop_string(net, &rules, c)?)?);
            }
            Ok(SectorRecord {
                bc_label: "custom".into(),
                fermion_parity: parity,
                fermion_twists: Vec::new(),
                spin_eigenvalues: eigs,
                spin_twists: Vec::new(),
            })
        }
    }
}

pub(crate) fn chain_sigma_label(net: &MappingNetwork) -> String {
    let has_z = !net.z_edges().is_empty();
    let has_x = net.is_odd();
    match (has_z, has_x) {
        (false, false) => "I",
        (true, false) => "Z~",
        (false, true) => "X~",
        (true, true) => "Z~X~",
    }
    .to_string()
}

pub(crate) fn torus_bc_label(net: &MappingNetwork) -> String {
    let g = net.graph();
    let Some(Preset::Torus { lx, ly }) = g.preset else {
        return "custom".into();
    };
    let has_h = (0..lx).all(|x| net.has_z_insertion(lx * ly + x));
    let has_v = (0..ly).all(|y| net.has_z_insertion(y * lx));
    let mut s = String::new();
    if has_h {
        s.push_str("Z~_H");
    }
    if has_v {
        s.push_str("Z~_V");
    }
    if net.is_odd() {
        s.push_str("X~");
    }
    if s.is_empty() {
        s.push('I');
    }
    s
}

fn twist_fermion_chain(net: &MappingNetwork) -> TwistKind {
    if net.z_edges().is_empty() {
        TwistKind::I
    } else {
        TwistKind::FermionZ
    }
}

fn twist_spin_chain(net: &MappingNetwork) -> TwistKind {
    if net.is_odd() {
        TwistKind::SpinX
    } else {
        TwistKind::I
    }
}

/// The twist picked up when the network is translated one unit in the given
/// direction: the fermion-side and spin-side descriptors.
///
/// Translating moves the boundary insertions across one line of vertices:
/// a perpendicular fermionic Z string deposits Z on each physical fermion
/// it crosses, and moving the defect deposits one unit cell of the spin
/// loop that runs through it.
pub fn twist(
    net: &MappingNetwork,
    direction: LoopKind,
) -> Result<(TwistKind, TwistKind), EncoderError> {
    match (net.graph().preset, direction) {
        (Some(Preset::Cycle { .. }), LoopKind::Chain) => {
            Ok((twist_fermion_chain(net), twist_spin_chain(net)))
        }
        (Some(Preset::Torus { lx, .. }), LoopKind::Horizontal) => {
            // translating in +x moves the vertical Z string across a column
            let has_v = (0..net.graph().vertices().len() as u32 / lx).all(|y| net.has_z_insertion(y * lx));
            let f = if has_v {
                TwistKind::FermionZLoopV
            } else {
                TwistKind::I
            };
            let s = if net.is_odd() {
                TwistKind::SpinCellH
            } else {
                TwistKind::I
            };
            Ok((f, s))
        }
        (Some(Preset::Torus { lx, ly }), LoopKind::Vertical) => {
            let has_h = (0..lx).all(|x| net.has_z_insertion(lx * ly + x));
            let f = if has_h {
                TwistKind::FermionZLoopH
            } else {
                TwistKind::I
            };
            let s = if net.is_odd() {
                TwistKind::SpinCellV
            } else {
                TwistKind::I
            };
            Ok((f, s))
        }
        _ => Err(EncoderError::PresetRequired),
    }
}
