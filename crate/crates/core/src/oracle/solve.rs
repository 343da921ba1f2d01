use std::collections::BTreeSet;

use crate::algebra::{FermionMonomial, PauliLetter, PauliString, Phase};
use crate::encoder::{EncoderError, MappingNetwork};
use crate::graph::EdgeId;

use super::{mul_fermion_left, realize, OracleError};

/// Find the Pauli image of a monomial directly from the realized matrices,
/// independently of the symbolic rule tables.
///
/// The intertwining equation alone determines the image only up to
/// absorbed constraint strings. The canonical image is pinned down by pure
/// graph data shared with the compiler: the X/Y letters must sit exactly on
/// the canonical route edges (plus optionally the defect edge), and all
/// letters within the edges at touched vertices. Since the network absorbs
/// no non-trivial Z-only string (every spin column of the realization is
/// non-zero), at most one Pauli string per X-pattern can intertwine, so the
/// search returns a unique solution or fails loudly.
pub fn solve_image(
    net: &MappingNetwork,
    m: &FermionMonomial,
) -> Result<PauliString, OracleError> {
    let canon = m.canonicalize().map_err(EncoderError::from)?;
    let odd = canon.parity() == 1;
    if odd && !net.is_odd() {
        return Err(EncoderError::OddWithoutDefect.into());
    }

    let u = realize(net)?;
    let lhs = if odd {
        realize(&net.sans_defect())?.matrix
    } else {
        u.matrix.clone()
    };
    let fu = mul_fermion_left(&canon, &lhs, u.n_modes);

    let g = net.graph();
    let m_sites = g.edges().len();
    let bit_of = |e: EdgeId| 1u64 << (m_sites - 1 - e as usize);

    // canonical route structure (graph + defect placement only)
    let local = local_ops(net, &canon)?;
    let toggles = crate::encoder::plan_routes_pub(net, &local).map_err(OracleError::from)?;
    let mut touched: BTreeSet<u32> = toggles.keys().copied().collect();
    for (mode, _) in canon.factors() {
        let v = net
            .mode_universe()
            .position(mode)
            .ok_or_else(|| EncoderError::UnknownMode(mode.clone()))? as u32;
        touched.insert(v);
    }
    let mut region = 0u64;
    for &v in &touched {
        for &e in g.slot_list(v) {
            region |= bit_of(e);
        }
    }
    // mandatory X-support: edges with both endpoint slots toggled
    let mut x_mask = 0u64;
    for (&v, slots) in &toggles {
        for &s in slots {
            let e = g.slot_list(v)[s as usize - 1];
            let other = {
                let edge = g.edge(e);
                if edge.tail == v { edge.head } else { edge.tail }
            };
            let other_slot = g.slot_of(other, e).expect("incident");
            if toggles
                .get(&other)
                .map(|l| l.contains(&other_slot))
                .unwrap_or(false)
            {
                x_mask |= bit_of(e);
            }
        }
    }
    // the defect edge may or may not keep a letter, depending on whether
    // the terminating operator cancels the insertion
    let defect_optional = if odd {
        let e = net.defect().edge;
        region |= bit_of(e);
        let edge = g.edge(e);
        let one_sided = {
            let tails = toggles
                .get(&edge.tail)
                .map(|l| l.contains(&g.slot_of(edge.tail, e).unwrap()))
                .unwrap_or(false);
            let heads = toggles
                .get(&edge.head)
                .map(|l| l.contains(&g.slot_of(edge.head, e).unwrap()))
                .unwrap_or(false);
            tails ^ heads
        };
        if one_sided {
            Some(bit_of(e))
        } else {
            None
        }
    } else {
        None
    };

    let universe = net.site_universe().clone();
    let mut solutions: Vec<PauliString> = Vec::new();
    let x_patterns: Vec<u64> = match defect_optional {
        Some(bit) => vec![x_mask, x_mask | bit],
        None => vec![x_mask],
    };
    for &x in &x_patterns {
        for z_bits in subsets_of(region) {
            for k in 0..4u8 {
                let mut p = PauliString::identity(universe.clone());
                p.mul_phase(Phase::from_i_pow(k));
                for e in g.edges() {
                    let bit = bit_of(e.id);
                    let letter = match (x & bit != 0, z_bits & bit != 0) {
                        (false, false) => continue,
                        (true, false) => PauliLetter::X,
                        (true, true) => PauliLetter::Y,
                        (false, true) => PauliLetter::Z,
                    };
                    p.set(g.edge_label(e.id), letter)
                        .map_err(EncoderError::from)?;
                }
                if intertwines(&fu, &u.matrix, &p) {
                    solutions.push(p);
                }
            }
        }
    }
    match solutions.len() {
        0 => Err(OracleError::NoSolution),
        1 => Ok(solutions.pop().unwrap()),
        _ => Err(OracleError::NonUniqueSolution(
            solutions
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(", "),
        )),
    }
}

/// Column-by-column test of `fu == U·P(p)` with early exit; both sides
/// have at most one entry per column.
fn intertwines(fu: &crate::algebra::ExactMatrix, u: &crate::algebra::ExactMatrix, p: &PauliString) -> bool {
    for col in 0..u.cols() {
        let (src, coeff) = p.apply_to_basis(col);
        let mut expect = u.column(src).map(|(r, v)| (r, v * coeff)).peekable();
        let mut actual = fu.column(col).peekable();
        loop {
            match (expect.peek(), actual.peek()) {
                (None, None) => break,
                (Some(&(re, ve)), Some(&(ra, va))) if re == ra && ve == va => {
                    expect.next();
                    actual.next();
                }
                _ => return false,
            }
        }
    }
    true
}

fn local_ops(
    net: &MappingNetwork,
    canon: &FermionMonomial,
) -> Result<Vec<crate::graded::LocalOp>, OracleError> {
    use crate::graded::LocalOp;
    let mut local = vec![LocalOp::IDENT; net.graph().vertices().len()];
    for (mode, op) in canon.factors() {
        let v = net
            .mode_universe()
            .position(mode)
            .ok_or_else(|| EncoderError::UnknownMode(mode.clone()))? as usize;
        let l = match op {
            crate::algebra::FermionOp::X => LocalOp::X,
            crate::algebra::FermionOp::Z => LocalOp::Z,
            _ => return Err(EncoderError::NonPauliFactor.into()),
        };
        local[v] = local[v].mul(l);
    }
    Ok(local)
}

/// All subsets of a bitmask.
fn subsets_of(mask: u64) -> impl Iterator<Item = u64> {
    let mut cur = 0u64;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = cur;
        if cur == mask {
            done = true;
        } else {
            cur = cur.wrapping_sub(mask) & mask;
        }
        Some(out)
    })
}
