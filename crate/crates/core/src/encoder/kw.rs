use crate::algebra::{ExactMatrix, GInt};
use crate::graded::{ghz_tensor, LegName, Op2, Side};
use crate::graph::Preset;

use super::{EncoderError, MappingNetwork};

/// Boundary condition of the spin duality operator on the chain: the bond
/// insertion closing its matrix product form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KwBoundary {
    I,
    Z,
    X,
    ZX,
}

impl KwBoundary {
    pub fn label(self) -> &'static str {
        match self {
            KwBoundary::I => "I",
            KwBoundary::Z => "Z",
            KwBoundary::X => "X",
            KwBoundary::ZX => "ZX",
        }
    }

    /// Bond matrix element `<b_out| σ |b_in>`.
    fn weight(self, b_out: u64, b_in: u64) -> GInt {
        let same = b_out == b_in;
        let flip = b_out != b_in;
        match self {
            KwBoundary::I => {
                if same {
                    GInt::ONE
                } else {
                    GInt::ZERO
                }
            }
            KwBoundary::Z => {
                if same {
                    if b_in == 1 {
                        -GInt::ONE
                    } else {
                        GInt::ONE
                    }
                } else {
                    GInt::ZERO
                }
            }
            KwBoundary::X => {
                if flip {
                    GInt::ONE
                } else {
                    GInt::ZERO
                }
            }
            KwBoundary::ZX => {
                // X then Z on the bond: <b|XZ|c> = (-1)^c [b = c+1]
                if flip {
                    if b_in == 1 {
                        -GInt::ONE
                    } else {
                        GInt::ONE
                    }
                } else {
                    GInt::ZERO
                }
            }

        }
    }
}

/// The spin duality operator on `n` sites as an exact matrix from spin
/// configurations (edge sites) to dual configurations (vertex sites).
///
/// The dual bit at vertex `v` is the domain wall `s_(v-1) + s_v` of the two
/// adjacent edge spins; the boundary insertion acts on the wrap bond
/// carrying `s_(n-1)` into vertex 0.
pub fn kw_matrix(n: u32, bc: KwBoundary) -> ExactMatrix {
    let n = n as usize;
    let dim = 1u64 << n;
    let mut out = ExactMatrix::zeros(dim, dim);
    let edge_bit = |s: u64, j: usize| (s >> (n - 1 - j)) & 1;
    for s in 0..dim {
        let wrap = edge_bit(s, n - 1);
        for b in 0..2u64 {
            let w = bc.weight(b, wrap);
            if w.is_zero() {
                continue;
            }
            // dual bit at vertex 0 uses the bond value b
            let mut d = 0u64;
            let d0 = b ^ edge_bit(s, 0);
            d |= d0 << (n - 1);
            for v in 1..n {
                let dv = edge_bit(s, v - 1) ^ edge_bit(s, v);
                d |= dv << (n - 1 - v);
            }
            out.add_entry(d, s, w);
        }
    }
    out
}

/// Result of composing the mapping network with the spin duality.
#[derive(Debug, Clone)]
pub struct KwComposition {
    /// Composite operator from dual-spin configurations to fermions.
    pub matrix: ExactMatrix,
    /// Exactly zero: the charge sectors of the two factors do not match.
    pub is_zero: bool,
    /// Non-zero, diagonal with one constant coefficient, and intertwining
    /// every even generator the ordering-string way: the canonical
    /// transformation on the matched sector.
    pub canonical: bool,
}

/// Compose a chain network with the spin duality closed by `bc2`:
/// `C = U · K†`.
pub fn kw_compose(
    net: &MappingNetwork,
    bc2: KwBoundary,
) -> Result<KwComposition, EncoderError> {
    let Some(Preset::Cycle { n }) = net.graph().preset else {
        return Err(EncoderError::ChainRequired);
    };
    let u = crate::oracle::realize(net)
        .map_err(|e| EncoderError::Internal(e.to_string()))?
        .matrix;
    let k = kw_matrix(n, bc2);
    let c = u.mul(&k.adjoint());
    let is_zero = c.is_zero();
    let canonical = !is_zero && is_canonical_jw(net, &c, n);
    Ok(KwComposition {
        matrix: c,
        is_zero,
        canonical,
    })
}

/// Canonical-transformation test: diagonal support with one constant
/// coefficient, and the composite intertwines every parity-even generator
/// with its ordering-string image.
fn is_canonical_jw(net: &MappingNetwork, c: &ExactMatrix, n: u32) -> bool {
    use crate::algebra::{
        fermion_matrix, FermionMonomial, FermionOp, PauliLetter, PauliString, SiteUniverse,
    };
    let mut constant: Option<GInt> = None;
    for (r, col, v) in c.iter() {
        if r != col {
            return false;
        }
        match constant {
            None => constant = Some(v),
            Some(cv) => {
                if cv != v {
                    return false;
                }
            }
        }
    }
    // dual sites named after the vertices, in mode order
    let dual_universe = SiteUniverse::new(
        net.graph()
            .vertex_labels()
            .iter()
            .map(|l| format!("d{l}"))
            .collect(),
    );
    let modes = net.mode_universe().clone();
    let fm = |factors: Vec<(u32, FermionOp)>| {
        FermionMonomial::new(
            1,
            factors
                .into_iter()
                .map(|(v, op)| (net.graph().vertex_label(v).to_string(), op))
                .collect(),
            modes.clone(),
        )
        .expect("valid monomial")
    };
    let mut checks: Vec<(FermionMonomial, PauliString)> = Vec::new();
    for v in 0..n {
        // Z at v maps to the dual Z at v
        let mut p = PauliString::identity(dual_universe.clone());
        p.set(&format!("d{v}"), PauliLetter::Z).unwrap();
        checks.push((fm(vec![(v, FermionOp::Z)]), p));
        // X at v maps to the ordering string: Z on 0..v, X at v
        let mut p = PauliString::identity(dual_universe.clone());
        for w in 0..v {
            p.set(&format!("d{w}"), PauliLetter::Z).unwrap();
        }
        p.set(&format!("d{v}"), PauliLetter::X).unwrap();
        let w = (v + 1) % n;
        let mut q = PauliString::identity(dual_universe.clone());
        for x in 0..w {
            q.set(&format!("d{x}"), PauliLetter::Z).unwrap();
        }
        q.set(&format!("d{w}"), PauliLetter::X).unwrap();
        let hop = fm(vec![(v, FermionOp::X), (w, FermionOp::X)]);
        let image = p.mul(&q).expect("same universe");
        checks.push((hop, image));
    }
    for (m, p) in checks {
        let f = fermion_matrix(&m, &modes).expect("valid");
        let lhs = f.mul(c);
        let rhs = crate::oracle::mul_pauli_right(c, &p);
        if lhs != rhs {
            return false;
        }
    }
    true
}

/// Dual-side columns of the chain sector table: the matching duality
/// boundary, the dual-spin parity sector, and the dual twist under
/// translation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualRecord {
    pub bc2: KwBoundary,
    pub dual_parity: i8,
    pub dual_twist: super::TwistKind,
}

/// Compute the dual columns for a chain network: find the unique duality
/// boundary with a canonical composition, read the dual parity off the
/// composite's support, and fix the dual twist by exact translation
/// comparison of the composite operator.
pub fn kw_dual_record(net: &MappingNetwork) -> Result<DualRecord, EncoderError> {
    use super::{LoopKind, TwistKind};
    use crate::algebra::{fermion_matrix, FermionMonomial, FermionOp, PauliLetter, PauliString};
    let Some(Preset::Cycle { n }) = net.graph().preset else {
        return Err(EncoderError::ChainRequired);
    };
    let mut found = None;
    for bc2 in [KwBoundary::I, KwBoundary::Z, KwBoundary::X, KwBoundary::ZX] {
        let c = kw_compose(net, bc2)?;
        if c.canonical {
            if found.is_some() {
                return Err(EncoderError::Internal(
                    "two duality boundaries compose canonically".into(),
                ));
            }
            found = Some((bc2, c.matrix));
        }
    }
    let (bc2, c) =
        found.ok_or_else(|| EncoderError::Internal("no canonical duality boundary".into()))?;
    let mut dual_parity = None;
    for (_, col, _) in c.iter() {
        let p = if col.count_ones() % 2 == 0 { 1 } else { -1 };
        match dual_parity {
            None => dual_parity = Some(p),
            Some(q) if q != p => {
                return Err(EncoderError::Internal("mixed dual parity".into()))
            }
            _ => {}
        }
    }
    let dual_parity = dual_parity.ok_or_else(|| EncoderError::Internal("zero composite".into()))?;

    // translation comparison: T_f · C · T_dual† = F(twist_f) · C · P(twist_d)
    let (t_f, _) = crate::oracle::translation_permutations(net, LoopKind::Chain)
        .map_err(|e| EncoderError::Internal(e.to_string()))?;
    let dim = 1u64 << n;
    let mut t_d = crate::algebra::ExactMatrix::zeros(dim, dim);
    for d in 0..dim {
        // dual site v -> v+1
        let mut d2 = 0u64;
        for v in 0..n {
            if (d >> (n - 1 - v)) & 1 == 1 {
                d2 |= 1 << (n - 1 - (v + 1) % n);
            }
        }
        t_d.add_entry(d2, d, GInt::ONE);
    }
    let translated = t_f.mul(&c).mul(&t_d.adjoint());
    let modes = net.mode_universe().clone();
    let fermion_twist = super::twist(net, LoopKind::Chain)?.0;
    let fermion_candidates: Vec<FermionMonomial> = match fermion_twist {
        TwistKind::I => vec![FermionMonomial::identity(modes.clone())],
        TwistKind::FermionZ => (0..n)
            .map(|v| {
                FermionMonomial::new(1, vec![(v.to_string(), FermionOp::Z)], modes.clone()).unwrap()
            })
            .collect(),
        _ => return Err(EncoderError::Internal("unexpected chain twist".into())),
    };
    let dual_universe = crate::algebra::SiteUniverse::new((0..n).map(|v| format!("d{v}")).collect());
    for kind in [TwistKind::I, TwistKind::SpinZ] {
        let spin_candidates: Vec<PauliString> = match kind {
            TwistKind::I => vec![PauliString::identity(dual_universe.clone())],
            _ => (0..n)
                .map(|v| {
                    PauliString::single(dual_universe.clone(), &format!("d{v}"), PauliLetter::Z)
                        .unwrap()
                })
                .collect(),
        };
        for fm in &fermion_candidates {
            let f = fermion_matrix(fm, &modes)?;
            let base = f.mul(&c);
            for sp in &spin_candidates {
                let cand = crate::oracle::mul_pauli_right(&base, sp);
                for k in 0..4u8 {
                    if cand.scale(crate::algebra::Phase::from_i_pow(k).to_gint()) == translated {
                        return Ok(DualRecord {
                            bc2,
                            dual_parity,
                            dual_twist: kind,
                        });
                    }
                }
            }
        }
    }
    Err(EncoderError::Internal(
        "no dual twist candidate matches the translated composite".into(),
    ))
}

/// The unified chain operator: rank-1 boundary `(|0)+|1))(0|` on the
/// network side composed with the matching rank-1 duality boundary.
#[derive(Debug, Clone)]
pub struct UnifiedBoundary {
    pub matrix: ExactMatrix,
    /// `s` with `C†C = CC† = s·1` when the operator is exactly unitary up
    /// to normalization.
    pub unitary_scale: Option<GInt>,
}

/// Build the unified chain operator and check its exact unitarity.
pub fn unified_boundary(net: &MappingNetwork) -> Result<UnifiedBoundary, EncoderError> {
    let Some(Preset::Cycle { n }) = net.graph().preset else {
        return Err(EncoderError::ChainRequired);
    };
    if net.is_odd() || !net.z_edges().is_empty() {
        return Err(EncoderError::BadBoundary(
            "the unified boundary replaces the ordinary boundary condition; assemble with \
             the trivial one"
                .into(),
        ));
    }
    let g = net.graph();
    let wrap = n - 1;
    // the two rank-1 boundaries |0)(0| and |1)(0| on the network side,
    // each closed by its matching rank-1 duality boundary
    let net_boundary = |b: Op2| -> Result<crate::algebra::ExactMatrix, EncoderError> {
        let mut order: Vec<LegName> =
            g.vertices().iter().map(|&v| LegName::VertexPhys(v)).collect();
        order.extend(g.edges().iter().map(|e| LegName::EdgeSpin(e.id)));
        let tensor = crate::oracle::contract_with(
            g,
            &|e| {
                let t = ghz_tensor(e);
                if e == wrap {
                    t.apply_op(LegName::EdgeEnd(e, Side::R), &b).expect("leg")
                } else {
                    t
                }
            },
            &[],
            &order,
        )
        .map_err(|e| EncoderError::Internal(e.to_string()))?;
        Ok(crate::oracle::tensor_to_matrix_parts(
            g.vertices().len(),
            g.edges().len(),
            0,
            &tensor,
        ))
    };
    // |0)(0| closes through the even-sector duality boundary and |1)(0|
    // through the odd one; the twist-mismatched halves of each pair
    // evaluate to zero, so the sums stay rank-1 on the network side
    let p0 = Op2::new([[GInt::ONE, GInt::ZERO], [GInt::ZERO, GInt::ZERO]]);
    let raise = Op2::new([[GInt::ZERO, GInt::ZERO], [GInt::ONE, GInt::ZERO]]);
    let even = net_boundary(p0)?.mul(&kw_matrix(n, KwBoundary::I).adjoint());
    let odd = net_boundary(raise)?.mul(&kw_matrix(n, KwBoundary::ZX).adjoint());
    let c = even.add(&odd);
    let gram = c.adjoint().mul(&c);
    let co_gram = c.mul(&c.adjoint());
    let unitary_scale = match (gram.as_scalar_identity(), co_gram.as_scalar_identity()) {
        (Some(a), Some(b2)) if a == b2 => Some(a),
        _ => None,
    };
    Ok(UnifiedBoundary {
        matrix: c,
        unitary_scale,
    })
}
