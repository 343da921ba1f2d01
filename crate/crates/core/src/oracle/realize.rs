use crate::algebra::ExactMatrix;
use crate::encoder::MappingNetwork;
use crate::graded::{vertex_tensor, GradedTensor, LegName};

use super::OracleError;

/// Exact matrix of a mapping network.
///
/// Rows are indexed by fermionic occupation states (mode at position `p`
/// owns bit `n-1-p`), columns by spin configurations on the edges (site at
/// position `q` owns bit `m-1-q`), so an even network `U` satisfies
/// `fermion_matrix(m) · U = U · pauli_matrix(map_operator(m))`.
#[derive(Debug, Clone)]
pub struct NetworkMatrix {
    pub matrix: ExactMatrix,
    pub n_modes: usize,
    pub n_sites: usize,
}

/// Default realization budget: highest edge count contracted exactly.
pub fn default_budget() -> usize {
    std::env::var("FQMAP_MAX_EDGES")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(20)
}

pub fn realize(net: &MappingNetwork) -> Result<NetworkMatrix, OracleError> {
    realize_with_budget(net, default_budget())
}

/// Contract the network exactly: edge tensors in id order, then vertex
/// tensors in id order, bonds evaluated as soon as both ends are present;
/// all signs come from the graded swap machinery.
pub fn realize_with_budget(
    net: &MappingNetwork,
    max_edges: usize,
) -> Result<NetworkMatrix, OracleError> {
    let g = net.graph();
    if g.edges().len() > max_edges {
        return Err(OracleError::BudgetExceeded(g.edges().len(), max_edges));
    }
    let tensor = contract_network(net)?;
    tensor_to_matrix(net, &tensor)
}

/// The fully contracted network tensor with legs in canonical order:
/// physical fermion kets by vertex id, then spin bras by edge id.
pub fn contract_network(net: &MappingNetwork) -> Result<GradedTensor, OracleError> {
    let g = net.graph();
    let mut order: Vec<LegName> = g.vertices().iter().map(|&v| LegName::VertexPhys(v)).collect();
    order.extend(g.edges().iter().map(|e| LegName::EdgeSpin(e.id)));
    contract_with(g, &|e| net.edge_tensor(e, true), &[], &order)
}

/// Fold edge tensors in id order, then vertex tensors in id order (bonds
/// evaluated as soon as both ends are present), then any trailing tensors
/// (ancilla fan-outs), and reorder the result to `final_order`.
pub(crate) fn contract_with(
    g: &crate::graph::MappingGraph,
    edge_fn: &dyn Fn(crate::graph::EdgeId) -> GradedTensor,
    tails: &[(GradedTensor, Vec<LegName>)],
    final_order: &[LegName],
) -> Result<GradedTensor, OracleError> {
    let mut acc: Option<GradedTensor> = None;
    for e in g.edges() {
        let t = edge_fn(e.id);
        acc = Some(match acc {
            None => t,
            Some(a) => a.outer(&t)?,
        });
    }
    for &v in g.vertices() {
        let d = g.degree(v) as u8;
        let vt = vertex_tensor(v, d)?;
        let a = match acc {
            None => vt,
            Some(a) => {
                // contract the first bond tensor-to-tensor, the rest within
                let slots = g.slot_list(v).to_vec();
                let first_edge = slots[0];
                let side = g.side_at(v, first_edge);
                let mut joined =
                    a.contract(LegName::EdgeEnd(first_edge, side), &vt, LegName::VertexSlot(v, 1))?;
                for (k, &e) in slots.iter().enumerate().skip(1) {
                    let side = g.side_at(v, e);
                    joined = joined.contract_self(
                        LegName::EdgeEnd(e, side),
                        LegName::VertexSlot(v, k as u8 + 1),
                    )?;
                }
                joined
            }
        };
        acc = Some(a);
    }
    for (tail, bonds) in tails {
        let a = acc.ok_or_else(|| OracleError::Internal("empty graph".into()))?;
        let mut joined = a.contract(bonds[0], tail, bonds[0])?;
        for &b in &bonds[1..] {
            joined = joined.contract_self(b, b)?;
        }
        acc = Some(joined);
    }
    let tensor = acc.ok_or_else(|| OracleError::Internal("empty graph".into()))?;
    Ok(tensor.reorder(final_order)?)
}

fn tensor_to_matrix(
    net: &MappingNetwork,
    tensor: &GradedTensor,
) -> Result<NetworkMatrix, OracleError> {
    let n = net.graph().vertices().len();
    let m = net.graph().edges().len();
    Ok(NetworkMatrix {
        matrix: tensor_to_matrix_parts(n, m, 0, tensor),
        n_modes: n,
        n_sites: m,
    })
}

/// Read a contracted tensor in canonical leg order (fermion kets, spin
/// bras, ancilla bras) into a matrix. Ancilla bits are the low bits of the
/// column index.
pub(crate) fn tensor_to_matrix_parts(
    n_modes: usize,
    n_sites: usize,
    n_anc: usize,
    tensor: &GradedTensor,
) -> ExactMatrix {
    let total_cols = n_sites + n_anc;
    let mut matrix = ExactMatrix::zeros(1 << n_modes, 1 << total_cols);
    for (key, val) in tensor.entries() {
        let mut row = 0u64;
        for p in 0..n_modes {
            row |= ((key >> p) & 1) << (n_modes - 1 - p);
        }
        let mut col = 0u64;
        for q in 0..total_cols {
            col |= ((key >> (n_modes + q)) & 1) << (total_cols - 1 - q);
        }
        matrix.add_entry(row, col, val);
    }
    matrix
}

/// Apply a Pauli string on the spin side: `U · P(p)`, without materializing
/// the Pauli matrix.
pub fn mul_pauli_right(u: &ExactMatrix, p: &crate::algebra::PauliString) -> ExactMatrix {
    let mut out = ExactMatrix::zeros(u.rows(), u.cols());
    for col in 0..u.cols() {
        // column `col` of U·P is U's column `row_p` scaled, where
        // P|col> = coeff |row_p>
        let (target, coeff) = p.apply_to_basis(col);
        for (r, v) in u.column(target) {
            out.add_entry(r, col, v * coeff);
        }
    }
    out
}

/// Apply a fermionic monomial on the mode side: `F(m) · U`.
pub fn mul_fermion_left(
    m: &crate::algebra::FermionMonomial,
    u: &ExactMatrix,
    n_modes: usize,
) -> ExactMatrix {
    let mut out = ExactMatrix::zeros(u.rows(), u.cols());
    for (r, c, v) in u.iter() {
        if let Some((target, coeff)) = crate::algebra::apply_monomial_to_basis(m, r, n_modes) {
            out.add_entry(target, c, v * coeff);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GInt;
    use crate::encoder::{assemble, BoundaryCondition, DefectPlacement, InsertionOp};
    use crate::graph::cycle_graph;

    /// Hand-contracted two-site chain with trivial boundary: each spin
    /// configuration (c0, c1) maps to the fermion state with occupation
    /// (c0+c1, c0+c1), and the graded bookkeeping fixes the signs.
    #[test]
    fn two_site_chain_matches_hand_contraction() {
        let net = assemble(
            cycle_graph(2).unwrap(),
            BoundaryCondition::chain(InsertionOp::I),
            DefectPlacement::none(),
        )
        .unwrap();
        let u = realize(&net).unwrap().matrix;
        assert_eq!(u.nnz(), 4);
        assert_eq!(u.get(0b00, 0b00), GInt::ONE);
        assert_eq!(u.get(0b11, 0b01), -GInt::ONE);
        assert_eq!(u.get(0b11, 0b10), GInt::ONE);
        assert_eq!(u.get(0b00, 0b11), -GInt::ONE);
    }

    /// Columns land on a single fermion state; only even-occupation rows
    /// appear without a defect, only odd ones with it.
    #[test]
    fn parity_structure() {
        for sigma in [InsertionOp::I, InsertionOp::Z, InsertionOp::X, InsertionOp::ZX] {
            let net = assemble(
                cycle_graph(3).unwrap(),
                BoundaryCondition::chain(sigma),
                DefectPlacement::none(),
            )
            .unwrap();
            let odd = net.is_odd();
            let u = realize(&net).unwrap().matrix;
            assert_eq!(u.nnz(), 8, "one entry per spin column");
            for (r, _, _) in u.iter() {
                assert_eq!(
                    (r.count_ones() % 2 == 1),
                    odd,
                    "sigma {sigma:?} row parity"
                );
            }
        }
    }

    /// A boundary Z insertion multiplies columns with an occupied wrap edge
    /// by -1 and changes nothing else.
    #[test]
    fn z_insertion_is_diagonal_factor() {
        let base = assemble(
            cycle_graph(3).unwrap(),
            BoundaryCondition::chain(InsertionOp::I),
            DefectPlacement::none(),
        )
        .unwrap();
        let with_z = assemble(
            cycle_graph(3).unwrap(),
            BoundaryCondition::chain(InsertionOp::Z),
            DefectPlacement::none(),
        )
        .unwrap();
        let u0 = realize(&base).unwrap().matrix;
        let u1 = realize(&with_z).unwrap().matrix;
        for (r, c, v) in u0.iter() {
            // wrap edge is e2 = lowest bit of the column index
            let expect = if c & 1 == 1 { -v } else { v };
            assert_eq!(u1.get(r, c), expect);
        }
    }
}
