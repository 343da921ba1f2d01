//! Acceptance suite: every criterion is exact (no tolerances) and prints
//! one pass/fail line. Run with `cargo test --test acceptance`; the slow
//! 3x3 repeat of the torus table is `--ignored`.

use std::time::Instant;

use fqmap::algebra::{
    fermion_matrix, FermionMonomial, FermionOp, GInt, PauliLetter, PauliString,
};
use fqmap::encoder::{
    assemble, charge_sector, gauge_constraints, kw_compose, kw_dual_record, map_operator_with,
    twist, unified_boundary, unified_unitary, BoundaryCondition, DefectPlacement, InsertionOp,
    KwBoundary, LoopChoice, LoopKind, MappingNetwork, RuleSet, TwistKind,
};
use fqmap::graded::Side;
use fqmap::graph::{circuit_rank, cycle_graph, parse_graph_file, torus_graph};
use fqmap::oracle::{
    generator_sweep, mul_pauli_right, realize, solve_image, verify_gauge_projector,
    verify_intertwiner, verify_sector, verify_twist,
};

fn chain(n: u32, sigma: InsertionOp) -> MappingNetwork {
    assemble(
        cycle_graph(n).unwrap(),
        BoundaryCondition::chain(sigma),
        DefectPlacement::none(),
    )
    .unwrap()
}

fn torus22(z_h: bool, z_v: bool, defect: bool) -> MappingNetwork {
    let d = if defect {
        DefectPlacement::at(0, Side::R)
    } else {
        DefectPlacement::none()
    };
    assemble(
        torus_graph(2, 2).unwrap(),
        BoundaryCondition::torus(z_h, z_v),
        d,
    )
    .unwrap()
}

const CHAIN_SIGMAS: [InsertionOp; 4] = [
    InsertionOp::I,
    InsertionOp::Z,
    InsertionOp::X,
    InsertionOp::ZX,
];

const TORUS_ROWS: [(bool, bool, bool); 8] = [
    (false, false, false),
    (true, false, false),
    (false, true, false),
    (true, true, false),
    (false, false, true),
    (true, false, true),
    (false, true, true),
    (true, true, true),
];

/// Criterion 1: the chain sector table, every cell, for n = 2..6, checked
/// symbolically and against the realized matrices. Budget 10 s.
#[test]
fn criterion_01_chain_table() {
    let started = Instant::now();
    // rows: parity, fermion twist, prodX, spin twist, bc2, dual parity,
    // dual twist, unified label
    let rows = [
        (InsertionOp::I, 1i8, TwistKind::I, -1i8, TwistKind::I, KwBoundary::Z, 1i8, TwistKind::SpinZ, "Z~"),
        (InsertionOp::Z, 1, TwistKind::FermionZ, 1, TwistKind::I, KwBoundary::I, 1, TwistKind::I, "Z~"),
        (InsertionOp::X, -1, TwistKind::I, 1, TwistKind::SpinX, KwBoundary::X, -1, TwistKind::I, "Z~X~"),
        (InsertionOp::ZX, -1, TwistKind::FermionZ, -1, TwistKind::SpinX, KwBoundary::ZX, -1, TwistKind::SpinZ, "Z~X~"),
    ];
    for n in 2..=6u32 {
        for (sigma, parity, ftw, prod_x, stw, bc2, dual_p, dual_tw, unified) in rows {
            let net = chain(n, sigma);
            let rec = charge_sector(&net, LoopChoice::Intersect).unwrap();
            assert_eq!(rec.fermion_parity, parity, "n={n} {sigma:?} parity");
            assert_eq!(rec.fermion_twists, vec![ftw], "n={n} {sigma:?} fermion twist");
            assert_eq!(rec.spin_eigenvalues, vec![prod_x], "n={n} {sigma:?} prodX");
            assert_eq!(rec.spin_twists, vec![stw], "n={n} {sigma:?} spin twist");
            // oracle side: parity and loop eigenvalues off the matrix
            let oracle = verify_sector(&net, LoopChoice::Intersect).unwrap();
            assert_eq!(oracle, rec, "n={n} {sigma:?} oracle sector");
            // oracle side: the twist by exact translation comparison
            assert!(
                verify_twist(&net, LoopKind::Chain, (ftw, stw)).unwrap(),
                "n={n} {sigma:?} twist translation identity"
            );
            // dual-spin columns from the composed duality
            let dual = kw_dual_record(&net).unwrap();
            assert_eq!(dual.bc2, bc2, "n={n} {sigma:?} matching duality boundary");
            assert_eq!(dual.dual_parity, dual_p, "n={n} {sigma:?} dual parity");
            assert_eq!(dual.dual_twist, dual_tw, "n={n} {sigma:?} dual twist");
            let unified_label = if net.is_odd() { "Z~X~" } else { "Z~" };
            assert_eq!(unified_label, unified, "n={n} {sigma:?} unified label");
        }
    }
    let dt = started.elapsed();
    assert!(dt.as_secs_f64() < 10.0, "budget: {dt:?} >= 10 s");
    println!("ACCEPTANCE 1 PASS: chain table, all cells, n = 2..6, symbolic + oracle ({dt:?})");
}

/// Criterion 2: the torus sector table on 2x2, all eight boundary
/// conditions, sectors and twists, oracle verified. Budget 60 s.
#[test]
fn criterion_02_torus_table() {
    let started = Instant::now();
    torus_table_checks(2, 2);
    let dt = started.elapsed();
    assert!(dt.as_secs_f64() < 60.0, "budget: {dt:?} >= 60 s");
    println!("ACCEPTANCE 2 PASS: torus table, all 8 boundary conditions on 2x2, symbolic + oracle ({dt:?})");
}

/// Optional slow repeat of criterion 2 on the 3x3 torus (sector columns).
#[test]
#[ignore = "slow: exact 3x3 realization"]
fn criterion_02_torus_table_3x3() {
    let started = Instant::now();
    let expected = [
        (1i8, -1i8, -1i8),
        (1, -1, 1),
        (1, 1, -1),
        (1, 1, 1),
        (-1, 1, 1),
        (-1, 1, -1),
        (-1, -1, 1),
        (-1, -1, -1),
    ];
    for ((z_h, z_v, defect), (parity, x_h, x_v)) in TORUS_ROWS.iter().zip(expected) {
        let d = if *defect {
            DefectPlacement::at(0, Side::R)
        } else {
            DefectPlacement::none()
        };
        let net = assemble(
            torus_graph(3, 3).unwrap(),
            BoundaryCondition::torus(*z_h, *z_v),
            d,
        )
        .unwrap();
        let rec = verify_sector(&net, LoopChoice::Intersect).unwrap();
        assert_eq!(rec.fermion_parity, parity);
        assert_eq!(rec.spin_eigenvalues, vec![x_h, x_v]);
    }
    println!(
        "ACCEPTANCE 2 (slow) PASS: torus sector columns on 3x3 ({:?})",
        started.elapsed()
    );
}

fn torus_table_checks(lx: u32, ly: u32) {
    let expected = [
        (1i8, -1i8, -1i8, TwistKind::I, TwistKind::I),
        (1, -1, 1, TwistKind::I, TwistKind::FermionZLoopH),
        (1, 1, -1, TwistKind::FermionZLoopV, TwistKind::I),
        (1, 1, 1, TwistKind::FermionZLoopV, TwistKind::FermionZLoopH),
        (-1, 1, 1, TwistKind::I, TwistKind::I),
        (-1, 1, -1, TwistKind::I, TwistKind::FermionZLoopH),
        (-1, -1, 1, TwistKind::FermionZLoopV, TwistKind::I),
        (-1, -1, -1, TwistKind::FermionZLoopV, TwistKind::FermionZLoopH),
    ];
    for ((z_h, z_v, defect), (parity, x_h, x_v, h_f, v_f)) in TORUS_ROWS.iter().zip(expected) {
        let d = if *defect {
            DefectPlacement::at(0, Side::R)
        } else {
            DefectPlacement::none()
        };
        let net = assemble(
            torus_graph(lx, ly).unwrap(),
            BoundaryCondition::torus(*z_h, *z_v),
            d,
        )
        .unwrap();
        let tag = format!("bc=({z_h},{z_v},{defect})");
        let rec = charge_sector(&net, LoopChoice::Intersect).unwrap();
        assert_eq!(rec.fermion_parity, parity, "{tag} parity");
        assert_eq!(rec.spin_eigenvalues, vec![x_h, x_v], "{tag} loop sectors");
        let oracle = verify_sector(&net, LoopChoice::Intersect).unwrap();
        assert_eq!(oracle, rec, "{tag} oracle sector");
        // twists: table cells and the exact translation identities
        let h = twist(&net, LoopKind::Horizontal).unwrap();
        let v = twist(&net, LoopKind::Vertical).unwrap();
        assert_eq!(h.0, h_f, "{tag} H fermion twist");
        assert_eq!(v.0, v_f, "{tag} V fermion twist");
        let h_s = if *defect { TwistKind::SpinCellH } else { TwistKind::I };
        let v_s = if *defect { TwistKind::SpinCellV } else { TwistKind::I };
        assert_eq!(h.1, h_s, "{tag} H spin twist");
        assert_eq!(v.1, v_s, "{tag} V spin twist");
        assert!(
            verify_twist(&net, LoopKind::Horizontal, h).unwrap(),
            "{tag} H translation identity"
        );
        assert!(
            verify_twist(&net, LoopKind::Vertical, v).unwrap(),
            "{tag} V translation identity"
        );
    }
}

/// Criterion 3: the worked chain images, including signs, at every
/// position, under the fermionic Z boundary.
#[test]
fn criterion_03_chain_images() {
    for n in 4..=6u32 {
        let net = chain(n, InsertionOp::Z);
        let rules = RuleSet::derive(&net);
        let sites = net.site_universe().clone();
        let modes = net.mode_universe().clone();
        for i in 0..n {
            // Z at site i maps to Z Z on the two adjacent spins
            let m = FermionMonomial::new(1, vec![(i.to_string(), FermionOp::Z)], modes.clone())
                .unwrap();
            let image = map_operator_with(&net, &rules, &m).unwrap();
            let mut expect = PauliString::identity(sites.clone());
            expect.set(&format!("e{}", (i + n - 1) % n), PauliLetter::Z).unwrap();
            expect.set(&format!("e{i}"), PauliLetter::Z).unwrap();
            assert_eq!(image, expect, "n={n} Z[{i}]");
            // X_(i-1) X_(i+1) maps to Z X (XZ) on three consecutive spins
            let (a, b) = ((i + n - 1) % n, (i + 1) % n);
            let m = FermionMonomial::new(
                1,
                vec![(a.to_string(), FermionOp::X), (b.to_string(), FermionOp::X)],
                modes.clone(),
            )
            .unwrap();
            let image = map_operator_with(&net, &rules, &m).unwrap();
            let mut expect = PauliString::identity(sites.clone());
            expect.set(&format!("e{}", (i + n + n - 2) % n), PauliLetter::Z).unwrap();
            expect.set(&format!("e{}", (i + n - 1) % n), PauliLetter::X).unwrap();
            let x = PauliString::single(sites.clone(), &format!("e{i}"), PauliLetter::X).unwrap();
            let z = PauliString::single(sites.clone(), &format!("e{i}"), PauliLetter::Z).unwrap();
            let mut expect = expect.mul(&x).unwrap().mul(&z).unwrap();
            // at the wrap the written factor order crosses the declared
            // mode ordering; the sign follows the reordering convention
            if m.canonicalize().unwrap().sign() < 0 {
                expect.mul_phase(fqmap::algebra::Phase::MINUS_ONE);
            }
            assert_eq!(image, expect, "n={n} X[{a}] X[{b}]");
        }
    }
    println!("ACCEPTANCE 3 PASS: chain worked images with signs, all positions, n = 4..6");
}

/// Criteria 4, 5, 9: exact intertwining for every generator on every
/// preset boundary condition, the locality bound on hopping images, and
/// pairwise anticommutation of the single-X images on odd networks.
#[test]
fn criterion_04_05_09_intertwining_weight_anticommutation() {
    let mut nets: Vec<MappingNetwork> = Vec::new();
    for n in 2..=6u32 {
        for sigma in CHAIN_SIGMAS {
            nets.push(chain(n, sigma));
        }
    }
    for (z_h, z_v, defect) in TORUS_ROWS {
        nets.push(torus22(z_h, z_v, defect));
    }
    for net in &nets {
        let rules = RuleSet::derive(net);
        let delta = net
            .graph()
            .vertices()
            .iter()
            .map(|&v| net.graph().degree(v))
            .max()
            .unwrap();
        let bound = 2 * delta - 1;
        let tag = fqmap::oracle::network_label(net);
        let mut singles: Vec<PauliString> = Vec::new();
        for (name, m) in generator_sweep(net) {
            let image = map_operator_with(net, &rules, &m).unwrap();
            assert!(
                verify_intertwiner(net, &m, &image).unwrap(),
                "{tag}: {name} intertwining"
            );
            if name.contains("edge") {
                assert!(image.weight() <= bound, "{tag}: {name} weight {}", image.weight());
            }
            if m.parity() == 1 && m.factors().len() == 1 {
                singles.push(image);
            }
        }
        for i in 0..singles.len() {
            for j in i + 1..singles.len() {
                assert!(
                    !singles[i].commutes(&singles[j]).unwrap(),
                    "{tag}: single-X images {i},{j} must anticommute"
                );
            }
        }
    }
    println!("ACCEPTANCE 4 PASS: exact intertwining sweep, cycles n = 2..6 and torus 2x2, all boundary conditions");
    println!("ACCEPTANCE 5 PASS: hopping images within Pauli weight 2Δ-1 (3 on cycles, 7 on the torus)");
    println!("ACCEPTANCE 9 PASS: single-X images pairwise anticommute on every odd network");
}

/// Criterion 6: gauge structure: one constraint per independent cycle,
/// commutation with every even image, and the exact plaquette projector
/// identity on the 2x2 torus.
#[test]
fn criterion_06_gauge_structure() {
    // constraint count on cycles, tori, and a custom multigraph
    let theta = parse_graph_file(
        "vertex a b\nedge e0 a b\nedge e1 b a\nedge e2 a b\norder a e0 e1 e2\norder b e0 e1 e2\n",
    )
    .unwrap();
    let mut nets: Vec<MappingNetwork> = vec![assemble(
        theta,
        BoundaryCondition::trivial(),
        DefectPlacement::none(),
    )
    .unwrap()];
    for n in 2..=6u32 {
        for sigma in CHAIN_SIGMAS {
            nets.push(chain(n, sigma));
        }
    }
    for (z_h, z_v, defect) in TORUS_ROWS {
        nets.push(torus22(z_h, z_v, defect));
    }
    for net in &nets {
        let tag = fqmap::oracle::network_label(net);
        let constraints = gauge_constraints(net, LoopChoice::Intersect).unwrap();
        assert_eq!(
            constraints.len(),
            circuit_rank(net.graph()),
            "{tag}: constraint count"
        );
        for (i, a) in constraints.iter().enumerate() {
            for b in constraints.iter().skip(i + 1) {
                assert!(a.commutes(b).unwrap(), "{tag}: constraints commute");
            }
        }
        // absorbed exactly as emitted
        let u = realize(net).unwrap().matrix;
        for c in &constraints {
            assert_eq!(mul_pauli_right(&u, c), u, "{tag}: constraint absorbed");
        }
        let rules = RuleSet::derive(net);
        for (name, m) in generator_sweep(net) {
            if m.parity() != 0 {
                continue;
            }
            let image = map_operator_with(net, &rules, &m).unwrap();
            for c in &constraints {
                assert!(
                    image.commutes(c).unwrap(),
                    "{tag}: {name} commutes with constraints"
                );
            }
        }
    }
    for (z_h, z_v, defect) in TORUS_ROWS {
        let net = torus22(z_h, z_v, defect);
        assert!(
            verify_gauge_projector(&net, LoopChoice::Intersect).unwrap(),
            "plaquette projector identity on 2x2"
        );
    }
    println!("ACCEPTANCE 6 PASS: constraint count = circuit rank, commutation, and the exact plaquette projector identity");
}

/// Criterion 7: the spin-duality composition on n = 4: table pairings are
/// canonical, mismatched charge sectors vanish exactly, and the unified
/// rank-1 boundary operator is exactly unitary. Budget 10 s.
#[test]
fn criterion_07_duality_composition() {
    let started = Instant::now();
    let pairing = [
        (InsertionOp::I, KwBoundary::Z),
        (InsertionOp::Z, KwBoundary::I),
        (InsertionOp::X, KwBoundary::X),
        (InsertionOp::ZX, KwBoundary::ZX),
    ];
    // charge sectors: prodX of bc1 must match the sector the duality
    // boundary absorbs (I, Z absorb +1, -1; X, ZX flip the twist)
    let spin_sector = |bc2: KwBoundary| match bc2 {
        KwBoundary::I | KwBoundary::X => 1i8,
        KwBoundary::Z | KwBoundary::ZX => -1,
    };
    for (sigma, partner) in pairing {
        let net = chain(4, sigma);
        let own = charge_sector(&net, LoopChoice::Intersect).unwrap().spin_eigenvalues[0];
        for bc2 in [KwBoundary::I, KwBoundary::Z, KwBoundary::X, KwBoundary::ZX] {
            let c = kw_compose(&net, bc2).unwrap();
            if bc2 == partner {
                assert!(c.canonical, "{sigma:?} with {bc2:?} must be canonical");
            } else if spin_sector(bc2) != own {
                assert!(c.is_zero, "{sigma:?} with {bc2:?} must vanish");
            } else {
                assert!(!c.is_zero, "{sigma:?} with {bc2:?} twist mismatch is non-zero");
                assert!(!c.canonical, "{sigma:?} with {bc2:?} is not canonical");
            }
        }
    }
    for n in 3..=5u32 {
        let ub = unified_boundary(&chain(n, InsertionOp::I)).unwrap();
        assert_eq!(
            ub.unitary_scale,
            Some(GInt::ONE),
            "unified boundary on n={n} is exactly unitary"
        );
    }
    let dt = started.elapsed();
    assert!(dt.as_secs_f64() < 10.0, "budget: {dt:?} >= 10 s");
    println!("ACCEPTANCE 7 PASS: duality pairings canonical, mismatches exactly zero, unified boundary exactly unitary ({dt:?})");
}

/// Criterion 8: the two-ancilla unified torus operator: exact projector
/// identities on both sides with one scale, and ancilla blocks equal to
/// the fixed-boundary networks. Budget 120 s.
#[test]
fn criterion_08_unified_torus() {
    let started = Instant::now();
    let g = torus_graph(2, 2).unwrap();
    for odd in [false, true] {
        let u = unified_unitary(&g, 2, odd).unwrap();
        // blocks: ancilla (high bit controls the horizontal string)
        for (anc, z_h, z_v) in [(0u64, false, false), (1, false, true), (2, true, false), (3, true, true)] {
            let fixed = realize(&torus22(z_h, z_v, odd)).unwrap().matrix;
            assert_eq!(u.block(anc), fixed, "odd={odd} block {anc}");
        }
        // U U† = s · (parity projector ⊗ ancilla identity): here expressed
        // as a constant diagonal on the parity-allowed rows
        // U U† = s · (parity projector ⊗ ancilla identity): constant
        // diagonal over all rows whose fermion part has the fixed parity
        let co = u.matrix.mul(&u.matrix.adjoint());
        let mut scale = None;
        for (r, c, v) in co.iter() {
            assert_eq!(r, c, "odd={odd}: co-gram diagonal");
            let fermion_part = r >> u.n_ancillas;
            assert_eq!((fermion_part.count_ones() % 2 == 1), odd, "odd={odd}: parity support");
            match scale {
                None => scale = Some(v),
                Some(s) => assert_eq!(s, v, "odd={odd}: one scale"),
            }
        }
        let s = scale.expect("non-zero");
        assert_eq!(co.nnz() as u64, 8 * 4, "odd={odd}: (sector ⊗ ancilla) covered");
        // U†U = s · P with P the exact projector onto the direct sum of
        // the four image sectors
        let gram = u.matrix.adjoint().mul(&u.matrix);
        assert_eq!(gram.mul(&gram), gram.scale(s), "odd={odd}: projector identity");
        assert_eq!(gram.adjoint(), gram, "odd={odd}: hermitian");
        let trace: GInt = (0..gram.rows()).fold(GInt::ZERO, |acc, d| acc + gram.get(d, d));
        assert_eq!(trace, GInt::from(32) * s, "odd={odd}: rank 32 on both sides");
        // so U/sqrt(s) is exactly unitary between the 32-dimensional
        // (sector ⊗ ancilla) space and the gauge-invariant spin subspace
        assert_eq!(s, GInt::from(32), "odd={odd}: normalization 2^5");
    }
    let dt = started.elapsed();
    assert!(dt.as_secs_f64() < 120.0, "budget: {dt:?} >= 120 s");
    println!("ACCEPTANCE 8 PASS: unified torus operator: exact projector identities, rank 32 = 32, blocks equal fixed networks ({dt:?})");
}

/// Criterion 10: the matrix-projection oracle agrees with the symbolic
/// rules for every generator on every preset network within budget.
#[test]
fn criterion_10_oracle_independence() {
    let mut nets: Vec<MappingNetwork> = Vec::new();
    for n in 2..=6u32 {
        for sigma in CHAIN_SIGMAS {
            nets.push(chain(n, sigma));
        }
    }
    for (z_h, z_v, defect) in TORUS_ROWS {
        nets.push(torus22(z_h, z_v, defect));
    }
    let mut total = 0usize;
    for net in &nets {
        let rules = RuleSet::derive(net);
        let tag = fqmap::oracle::network_label(net);
        for (name, m) in generator_sweep(net) {
            let image = map_operator_with(net, &rules, &m).unwrap();
            let solved = solve_image(net, &m).unwrap();
            assert_eq!(image, solved, "{tag}: {name}");
            total += 1;
        }
    }
    println!("ACCEPTANCE 10 PASS: solve_image == map_operator for {total}/{total} generators on all preset networks");
}

/// The fermionic matrices behind every check: a spot-check that the
/// intertwining convention matches the declared mode ordering.
#[test]
fn fermion_side_convention() {
    let net = chain(3, InsertionOp::Z);
    let m = FermionMonomial::new(
        1,
        vec![("1".into(), FermionOp::X), ("2".into(), FermionOp::X)],
        net.mode_universe().clone(),
    )
    .unwrap();
    let f = fermion_matrix(&m, net.mode_universe()).unwrap();
    // X[1] X[2] = (Z X ⊗ X) on modes 1, 2 under the string convention
    assert_eq!(f.get(0b011, 0b000), GInt::ONE);
    assert_eq!(f.get(0b111, 0b100), GInt::ONE);
    assert_eq!(f.get(0b001, 0b010), -GInt::ONE);
}
