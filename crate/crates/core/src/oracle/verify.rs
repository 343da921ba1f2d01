use crate::algebra::{ExactMatrix, FermionMonomial, FermionOp, GInt, PauliString};
use crate::encoder::{
    charge_sector, gauge_constraints, LoopChoice, MappingNetwork, SectorRecord,
};
use crate::graph::Preset;

use super::{mul_fermion_left, mul_pauli_right, realize, solve_image, OracleError};
use super::VerificationReport;

/// Exact intertwining check: `F(m) · U_even = U · P(p)`, where the fermion
/// side acts through the defect-stripped network for parity-odd monomials.
pub fn verify_intertwiner(
    net: &MappingNetwork,
    m: &FermionMonomial,
    p: &PauliString,
) -> Result<bool, OracleError> {
    let u = realize(net)?;
    let canon = m.canonicalize().map_err(crate::encoder::EncoderError::from)?;
    let lhs_net = if canon.parity() == 1 {
        realize(&net.sans_defect())?
    } else {
        u.clone()
    };
    let lhs = mul_fermion_left(&canon, &lhs_net.matrix, u.n_modes);
    let rhs = mul_pauli_right(&u.matrix, p);
    Ok(lhs == rhs)
}

/// Outcome of an exact unitarity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnitaryVerdict {
    /// `M†M = MM† = s·1` exactly.
    Unitary { scale: GInt },
    /// `M†M = s·1` but the co-Gram is not a scalar: an isometry up to
    /// normalization (or the transpose situation).
    IsometryOnly { scale: GInt, from_left: bool },
    /// Neither Gram matrix is a scalar identity (the zero map lands here).
    No,
}

pub fn verify_unitary(m: &ExactMatrix) -> UnitaryVerdict {
    let gram = m.adjoint().mul(m);
    let co = m.mul(&m.adjoint());
    match (gram.as_scalar_identity(), co.as_scalar_identity()) {
        (Some(a), Some(b)) if a == b => UnitaryVerdict::Unitary { scale: a },
        (Some(a), _) => UnitaryVerdict::IsometryOnly {
            scale: a,
            from_left: true,
        },
        (_, Some(b)) => UnitaryVerdict::IsometryOnly {
            scale: b,
            from_left: false,
        },
        _ => UnitaryVerdict::No,
    }
}

/// Sector data measured directly on the realized matrix: fermion parity
/// from the row support, loop eigenvalues from exact absorption.
pub fn verify_sector(
    net: &MappingNetwork,
    choice: LoopChoice,
) -> Result<SectorRecord, OracleError> {
    let symbolic = charge_sector(net, choice).map_err(OracleError::from)?;
    let u = realize(net)?;
    // parity from the row support
    let mut parity: Option<i8> = None;
    for (r, _, _) in u.matrix.iter() {
        let p = if r.count_ones() % 2 == 0 { 1 } else { -1 };
        match parity {
            None => parity = Some(p),
            Some(q) => {
                if q != p {
                    return Err(OracleError::Internal(
                        "network mixes fermion parity sectors".into(),
                    ));
                }
            }
        }
    }
    let parity = parity.ok_or_else(|| OracleError::Internal("zero network".into()))?;
    if parity != symbolic.fermion_parity {
        return Err(OracleError::Internal(format!(
            "symbolic parity {} disagrees with realized parity {parity}",
            symbolic.fermion_parity
        )));
    }
    // loop eigenvalues by absorption of the positive-phase constraint
    let constraints = gauge_constraints(net, choice).map_err(OracleError::from)?;
    let loops: Vec<&PauliString> = match net.graph().preset {
        Some(Preset::Cycle { .. }) => vec![&constraints[0]],
        Some(Preset::Torus { .. }) => {
            let n = constraints.len();
            vec![&constraints[n - 2], &constraints[n - 1]]
        }
        None => constraints.iter().collect(),
    };
    let mut eigenvalues = Vec::new();
    for s in loops {
        let mut positive = s.clone();
        positive.set_phase(crate::algebra::Phase::PLUS_ONE);
        let moved = mul_pauli_right(&u.matrix, &positive);
        let eig = if moved == u.matrix {
            1
        } else if moved == u.matrix.scale(-GInt::ONE) {
            -1
        } else {
            return Err(OracleError::Internal(
                "loop operator is not absorbed with a sign".into(),
            ));
        };
        eigenvalues.push(eig);
    }
    if eigenvalues != symbolic.spin_eigenvalues {
        return Err(OracleError::Internal(format!(
            "symbolic eigenvalues {:?} disagree with realized {:?}",
            symbolic.spin_eigenvalues, eigenvalues
        )));
    }
    Ok(SectorRecord {
        spin_eigenvalues: eigenvalues,
        fermion_parity: parity,
        ..symbolic
    })
}

/// `U · Π(1 + g) = 2^k · U` over the contractible (plaquette) constraints.
pub fn verify_gauge_projector(net: &MappingNetwork, choice: LoopChoice) -> Result<bool, OracleError> {
    let u = realize(net)?;
    let constraints = gauge_constraints(net, choice).map_err(OracleError::from)?;
    let plaquettes: Vec<&PauliString> = match net.graph().preset {
        Some(Preset::Torus { .. }) => {
            let n = constraints.len();
            constraints[..n - 2].iter().collect()
        }
        _ => return Err(OracleError::Internal("plaquettes need a torus".into())),
    };
    let mut acc = u.matrix.clone();
    for g in &plaquettes {
        acc = acc.add(&mul_pauli_right(&acc, g));
    }
    let scale = GInt::from(1i64 << plaquettes.len());
    Ok(acc == u.matrix.scale(scale))
}

/// The generator set the verification suites sweep: every vertex `Z`, one
/// hopping `X_u X_v` per edge, and (on odd networks) every single `X_v`.
pub fn generator_sweep(net: &MappingNetwork) -> Vec<(String, FermionMonomial)> {
    let g = net.graph();
    let modes = net.mode_universe();
    let mut out = Vec::new();
    for &v in g.vertices() {
        let label = g.vertex_label(v).to_string();
        out.push((
            format!("Z[{label}]"),
            FermionMonomial::new(1, vec![(label.clone(), FermionOp::Z)], modes.clone()).unwrap(),
        ));
    }
    for e in g.edges() {
        let lu = g.vertex_label(e.tail).to_string();
        let lv = g.vertex_label(e.head).to_string();
        out.push((
            format!("X[{lu}]X[{lv}] (edge {})", g.edge_label(e.id)),
            FermionMonomial::new(
                1,
                vec![(lu.clone(), FermionOp::X), (lv.clone(), FermionOp::X)],
                modes.clone(),
            )
            .unwrap(),
        ));
    }
    if net.is_odd() {
        for &v in g.vertices() {
            let label = g.vertex_label(v).to_string();
            out.push((
                format!("X[{label}]"),
                FermionMonomial::new(1, vec![(label.clone(), FermionOp::X)], modes.clone())
                    .unwrap(),
            ));
        }
    }
    out
}

/// Run the full verification suite for one network: intertwining and
/// locality for every generator, gauge structure, sector data against the
/// symbolic table, oracle independence of the symbolic rules, and defect
/// anticommutation.
pub fn verify_network(
    net: &MappingNetwork,
    choice: LoopChoice,
    rules: &crate::encoder::RuleSet,
) -> Result<VerificationReport, OracleError> {
    let mut report = VerificationReport::default();
    let label = network_label(net);
    let g = net.graph();

    // gauge structure
    let constraints = gauge_constraints(net, choice).map_err(OracleError::from)?;
    let rank = crate::graph::circuit_rank(g);
    report.push(
        "constraint count = circuit rank",
        &label,
        rank.to_string(),
        constraints.len().to_string(),
        None,
    );
    for (i, a) in constraints.iter().enumerate() {
        for b in constraints.iter().skip(i + 1) {
            if !a.commutes(b).map_err(crate::encoder::EncoderError::from)? {
                report.push(
                    "constraints mutually commute",
                    &label,
                    "commute",
                    "anticommute",
                    None,
                );
            }
        }
    }
    let u = realize(net)?;
    for s in &constraints {
        let absorbed = mul_pauli_right(&u.matrix, s) == u.matrix;
        report.push(
            "constraint absorbed with +1",
            &label,
            "absorbed",
            if absorbed { "absorbed" } else { "not absorbed" },
            None,
        );
    }

    // generator sweep
    let delta = g
        .vertices()
        .iter()
        .map(|&v| g.degree(v))
        .max()
        .unwrap_or(0);
    let weight_bound = 2 * delta - 1;
    for (name, m) in generator_sweep(net) {
        let image =
            crate::encoder::map_operator_with(net, rules, &m).map_err(OracleError::from)?;
        let ok = verify_intertwiner(net, &m, &image)?;
        report.push(
            format!("intertwine {name}"),
            &label,
            "exact",
            if ok { "exact" } else { "mismatch" },
            None,
        );
        if name.contains("edge") {
            report.push(
                format!("weight bound {name}"),
                &label,
                format!("<= {weight_bound}"),
                if image.weight() <= weight_bound {
                    format!("<= {weight_bound}")
                } else {
                    format!("{}", image.weight())
                },
                None,
            );
        }
        if m.parity() == 0 {
            for s in &constraints {
                if !image.commutes(s).map_err(crate::encoder::EncoderError::from)? {
                    report.push(
                        format!("gauge commutation {name}"),
                        &label,
                        "commutes",
                        "anticommutes",
                        None,
                    );
                }
            }
        }
        match solve_image(net, &m) {
            Ok(solved) => {
                report.push(
                    format!("oracle independence {name}"),
                    &label,
                    image.to_string(),
                    solved.to_string(),
                    None,
                );
            }
            Err(OracleError::BudgetExceeded(a, b)) => {
                report.skip(format!("solve_image {name}: budget {a} > {b}"));
            }
            Err(e) => return Err(e),
        }
    }

    // defect anticommutation
    if net.is_odd() {
        let singles: Vec<(String, PauliString)> = g
            .vertices()
            .iter()
            .map(|&v| {
                let lv = g.vertex_label(v).to_string();
                let m = FermionMonomial::new(
                    1,
                    vec![(lv.clone(), FermionOp::X)],
                    net.mode_universe().clone(),
                )
                .unwrap();
                crate::encoder::map_operator_with(net, rules, &m)
                    .map(|p| (lv, p))
                    .map_err(OracleError::from)
            })
            .collect::<Result<_, _>>()?;
        for (i, (lu, pu)) in singles.iter().enumerate() {
            for (lv, pv) in singles.iter().skip(i + 1) {
                let anti = !pu.commutes(pv).map_err(crate::encoder::EncoderError::from)?;
                report.push(
                    format!("defect anticommutation X[{lu}] vs X[{lv}]"),
                    &label,
                    "anticommute",
                    if anti { "anticommute" } else { "commute" },
                    None,
                );
            }
        }
    }

    // sector table
    if g.preset.is_some() {
        let record = verify_sector(net, choice)?;
        report.push(
            "sector record (symbolic == oracle)",
            &label,
            format!("{record:?}"),
            format!("{record:?}"),
            Some(record.bc_label.clone()),
        );
    }
    Ok(report)
}

/// Exact translation matrices for preset graphs: the spin side permutes
/// edge labels, the fermion side permutes modes with the reordering signs
/// of the occupied set.
pub(crate) fn translation_permutations(
    net: &MappingNetwork,
    direction: crate::encoder::LoopKind,
) -> Result<(ExactMatrix, ExactMatrix), OracleError> {
    use crate::encoder::LoopKind;
    let g = net.graph();
    let (vmap, emap): (Box<dyn Fn(u32) -> u32>, Box<dyn Fn(u32) -> u32>) =
        match (g.preset, direction) {
            (Some(Preset::Cycle { n }), LoopKind::Chain) => (
                Box::new(move |v| (v + 1) % n),
                Box::new(move |e| (e + 1) % n),
            ),
            (Some(Preset::Torus { lx, ly }), LoopKind::Horizontal) => (
                Box::new(move |v| {
                    let (x, y) = (v % lx, v / lx);
                    y * lx + (x + 1) % lx
                }),
                Box::new(move |e| {
                    let (base, xy) = if e < lx * ly { (0, e) } else { (lx * ly, e - lx * ly) };
                    let (x, y) = (xy % lx, xy / lx);
                    base + y * lx + (x + 1) % lx
                }),
            ),
            (Some(Preset::Torus { lx, ly }), LoopKind::Vertical) => (
                Box::new(move |v| {
                    let (x, y) = (v % lx, v / lx);
                    ((y + 1) % ly) * lx + x
                }),
                Box::new(move |e| {
                    let (base, xy) = if e < lx * ly { (0, e) } else { (lx * ly, e - lx * ly) };
                    let (x, y) = (xy % lx, xy / lx);
                    base + ((y + 1) % ly) * lx + x
                }),
            ),
            _ => return Err(OracleError::Internal("translation needs a preset".into())),
        };
    let n = g.vertices().len();
    let m = g.edges().len();
    let mut t_f = ExactMatrix::zeros(1 << n, 1 << n);
    for b in 0..(1u64 << n) {
        // occupied modes in ascending order, relabeled, then resorted
        let occupied: Vec<u32> = (0..n as u32)
            .filter(|&v| (b >> (n as u32 - 1 - v)) & 1 == 1)
            .collect();
        let mapped: Vec<u32> = occupied.iter().map(|&v| vmap(v)).collect();
        let mut inversions = 0u32;
        for i in 0..mapped.len() {
            for j in i + 1..mapped.len() {
                if mapped[i] > mapped[j] {
                    inversions += 1;
                }
            }
        }
        let mut b2 = 0u64;
        for &v in &mapped {
            b2 |= 1 << (n as u32 - 1 - v);
        }
        let sign = if inversions % 2 == 0 { GInt::ONE } else { -GInt::ONE };
        t_f.add_entry(b2, b, sign);
    }
    let mut t_s = ExactMatrix::zeros(1 << m, 1 << m);
    for s in 0..(1u64 << m) {
        let mut s2 = 0u64;
        for e in 0..m as u32 {
            if (s >> (m as u32 - 1 - e)) & 1 == 1 {
                s2 |= 1 << (m as u32 - 1 - emap(e));
            }
        }
        t_s.add_entry(s2, s, GInt::ONE);
    }
    Ok((t_f, t_s))
}

/// Verify a twist descriptor pair by exact translation comparison: the
/// bodily translated network must equal the original dressed by the twist
/// operators on the physical legs,
/// `T_f · U · T_s† = F(D_f) · U · P(D_s)`,
/// where `D_f` runs over the placements of the claimed fermionic twist and
/// `D_s` over the claimed spin twist with a free fourth-root phase. Exactly
/// one candidate placement must satisfy the identity.
pub fn verify_twist(
    net: &MappingNetwork,
    direction: crate::encoder::LoopKind,
    claim: (crate::encoder::TwistKind, crate::encoder::TwistKind),
) -> Result<bool, OracleError> {
    use crate::algebra::{FermionOp, PauliLetter, PauliString, Phase};
    use crate::encoder::TwistKind;
    let g = net.graph();
    let u = realize(net)?;
    let (t_f, t_s) = translation_permutations(net, direction)?;
    let translated = t_f.mul(&u.matrix).mul(&t_s.adjoint());

    let modes = net.mode_universe().clone();
    let fermion_candidates: Vec<FermionMonomial> = match claim.0 {
        TwistKind::I => vec![FermionMonomial::identity(modes.clone())],
        TwistKind::FermionZ => g
            .vertices()
            .iter()
            .map(|&v| {
                FermionMonomial::new(
                    1,
                    vec![(g.vertex_label(v).to_string(), FermionOp::Z)],
                    modes.clone(),
                )
                .unwrap()
            })
            .collect(),
        TwistKind::FermionZLoopH | TwistKind::FermionZLoopV => {
            let Some(Preset::Torus { lx, ly }) = g.preset else {
                return Err(OracleError::Internal("loop twist needs a torus".into()));
            };
            let mut out = Vec::new();
            if claim.0 == TwistKind::FermionZLoopH {
                for y in 0..ly {
                    let factors = (0..lx)
                        .map(|x| (g.vertex_label(y * lx + x).to_string(), FermionOp::Z))
                        .collect();
                    out.push(FermionMonomial::new(1, factors, modes.clone()).unwrap());
                }
            } else {
                for x in 0..lx {
                    let factors = (0..ly)
                        .map(|y| (g.vertex_label(y * lx + x).to_string(), FermionOp::Z))
                        .collect();
                    out.push(FermionMonomial::new(1, factors, modes.clone()).unwrap());
                }
            }
            out
        }
        _ => return Err(OracleError::Internal("not a fermionic twist kind".into())),
    };

    let sites = net.site_universe().clone();
    let mut spin_candidates: Vec<PauliString> = Vec::new();
    match claim.1 {
        TwistKind::I => spin_candidates.push(PauliString::identity(sites.clone())),
        TwistKind::SpinX => {
            for e in g.edges() {
                spin_candidates
                    .push(PauliString::single(sites.clone(), g.edge_label(e.id), PauliLetter::X).unwrap());
            }
        }
        TwistKind::SpinCellH | TwistKind::SpinCellV => {
            let Some(Preset::Torus { lx, ly }) = g.preset else {
                return Err(OracleError::Internal("cell twist needs a torus".into()));
            };
            // one unit cell: X on a leg along the loop direction, Z on a
            // transversal leg
            let h_ids: Vec<u32> = (0..lx * ly).collect();
            let v_ids: Vec<u32> = (0..lx * ly).map(|i| lx * ly + i).collect();
            let (x_set, z_set) = if claim.1 == TwistKind::SpinCellH {
                (&h_ids, &v_ids)
            } else {
                (&v_ids, &h_ids)
            };
            for &xe in x_set {
                for &ze in z_set {
                    let mut p = PauliString::identity(sites.clone());
                    p.set(g.edge_label(xe), PauliLetter::X).unwrap();
                    p.set(g.edge_label(ze), PauliLetter::Z).unwrap();
                    spin_candidates.push(p);
                }
            }
        }
        _ => return Err(OracleError::Internal("not a spin twist kind".into())),
    }

    // placements related by absorbed symmetries (total parity, gauge
    // strings) match simultaneously, so any match verifies the claim
    for fm in &fermion_candidates {
        let lhs_base = mul_fermion_left(fm, &u.matrix, u.n_modes);
        for sp in &spin_candidates {
            let with_spin = mul_pauli_right(&lhs_base, sp);
            for k in 0..4u8 {
                let candidate = with_spin.scale(Phase::from_i_pow(k).to_gint());
                if candidate == translated {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

pub fn network_label(net: &MappingNetwork) -> String {
    let g = net.graph();
    let base = match g.preset {
        Some(Preset::Cycle { n }) => format!("cycle n={n}"),
        Some(Preset::Torus { lx, ly }) => format!("torus {lx}x{ly}"),
        None => "custom graph".into(),
    };
    format!("{base}, bc {}", bc_label(net))
}

pub fn bc_label(net: &MappingNetwork) -> String {
    match net.graph().preset {
        Some(Preset::Cycle { .. }) => crate::encoder::sector_chain_label(net),
        Some(Preset::Torus { .. }) => crate::encoder::sector_torus_label(net),
        None => "custom".into(),
    }
}

