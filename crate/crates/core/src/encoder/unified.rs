use crate::algebra::ExactMatrix;
use crate::graded::{
    ancilla_copy_tensor, cx_gate_tensor, cz_gate_tensor, ghz_tensor, GradedTensor, LegName,
    LocalOp, Side,
};
use crate::graph::{EdgeId, MappingGraph, Preset};

use super::EncoderError;

/// A network whose boundary conditions are quantum degrees of freedom:
/// ancilla qubits control the boundary insertions, so one operator carries
/// every charge sector at once.
///
/// Rows are indexed by (fermion occupation, ancilla configuration) with the
/// ancilla bits lowest — the ancillas live on the fermion side of the
/// duality, so the operator maps the spin space onto (sector ⊗ ancilla)
/// pairs. Fixing the ancillas recovers the corresponding fixed-boundary
/// network block by block.
#[derive(Debug, Clone)]
pub struct UnifiedNetwork {
    pub matrix: ExactMatrix,
    pub n_modes: usize,
    pub n_sites: usize,
    pub n_ancillas: usize,
}

impl UnifiedNetwork {
    /// The fixed-boundary block selected by an ancilla basis state.
    pub fn block(&self, anc: u64) -> ExactMatrix {
        let a = self.n_ancillas as u64;
        let mask = (1u64 << a) - 1;
        let mut out = ExactMatrix::zeros(1 << self.n_modes, self.matrix.cols());
        for (r, c, v) in self.matrix.iter() {
            if r & mask == anc {
                out.add_entry(r >> a, c, v);
            }
        }
        out
    }
}

/// Lift the boundary conditions of a preset network into ancilla qubits.
///
/// On the chain one ancilla controls the odd part of the boundary on top of
/// a fixed fermionic `Z` insertion, so the blocks run over the two charge
/// sectors. On the torus two ancillas control the `Z` strings of the two
/// directions; `odd` fixes the fermion parity by placing (or not) the
/// defect, and the four blocks run over the four loop sectors of that
/// parity.
pub fn unified_unitary(
    graph: &MappingGraph,
    ancillas: usize,
    odd: bool,
) -> Result<UnifiedNetwork, EncoderError> {
    match graph.preset {
        Some(Preset::Cycle { n }) => {
            if ancillas != 1 {
                return Err(EncoderError::BadBoundary(
                    "the chain unification takes exactly 1 ancilla".into(),
                ));
            }
            if odd {
                return Err(EncoderError::BadBoundary(
                    "the chain unification spans both parities; there is no parity choice".into(),
                ));
            }
            let wrap = n - 1;
            build(graph, 1, &|e| {
                let t = ghz_tensor(e);
                if e != wrap {
                    return t;
                }
                // ancilla-controlled odd insertion, then the fixed Z
                let target = LegName::EdgeEnd(e, Side::R);
                let tmp = LegName::Aux(1000);
                let cx = cx_gate_tensor(tmp, target, LegName::Ancilla(0));
                let t = t.contract(target, &cx, tmp).expect("bond");
                t.apply_op(target, &LocalOp::Z.to_op2()).expect("leg")
            })
        }
        Some(Preset::Torus { lx, ly }) => {
            if ancillas != 2 {
                return Err(EncoderError::BadBoundary(
                    "the torus unification takes exactly 2 ancillas".into(),
                ));
            }
            // the controlled Z strings sit on the same seams as the fixed
            // boundary insertions: Z_H crosses v(x,0), Z_V crosses h(0,y)
            let h_edges: Vec<EdgeId> = (0..lx).map(|x| lx * ly + x).collect();
            let v_edges: Vec<EdgeId> = (0..ly).map(|y| y * lx).collect();
            let defect_edge = 0;
            build_with_tails(
                graph,
                2,
                &|e| {
                    let mut t = ghz_tensor(e);
                    let target = LegName::EdgeEnd(e, Side::R);
                    if odd && e == defect_edge {
                        t = t.apply_op(target, &LocalOp::X.to_op2()).expect("leg");
                    }
                    let controlled_by = if h_edges.contains(&e) {
                        Some(LegName::Aux(e))
                    } else if v_edges.contains(&e) {
                        Some(LegName::Aux(e))
                    } else {
                        None
                    };
                    if let Some(ctrl) = controlled_by {
                        let tmp = LegName::Aux(1000 + e);
                        let cz = cz_gate_tensor(tmp, target, ctrl);
                        t = t.contract(target, &cz, tmp).expect("bond");
                    }
                    t
                },
                vec![
                    (
                        ancilla_copy_tensor(
                            LegName::Ancilla(0),
                            &h_edges.iter().map(|&e| LegName::Aux(e)).collect::<Vec<_>>(),
                        ),
                        h_edges.iter().map(|&e| LegName::Aux(e)).collect(),
                    ),
                    (
                        ancilla_copy_tensor(
                            LegName::Ancilla(1),
                            &v_edges.iter().map(|&e| LegName::Aux(e)).collect::<Vec<_>>(),
                        ),
                        v_edges.iter().map(|&e| LegName::Aux(e)).collect(),
                    ),
                ],
            )
        }
        None => Err(EncoderError::PresetRequired),
    }
}

fn build(
    graph: &MappingGraph,
    n_anc: usize,
    edge_fn: &dyn Fn(EdgeId) -> GradedTensor,
) -> Result<UnifiedNetwork, EncoderError> {
    build_with_tails(graph, n_anc, edge_fn, Vec::new())
}

fn build_with_tails(
    graph: &MappingGraph,
    n_anc: usize,
    edge_fn: &dyn Fn(EdgeId) -> GradedTensor,
    tails: Vec<(GradedTensor, Vec<LegName>)>,
) -> Result<UnifiedNetwork, EncoderError> {
    let mut order: Vec<LegName> = graph
        .vertices()
        .iter()
        .map(|&v| LegName::VertexPhys(v))
        .collect();
    order.extend(graph.edges().iter().map(|e| LegName::EdgeSpin(e.id)));
    order.extend((0..n_anc).map(|a| LegName::Ancilla(a as u8)));
    let tensor = crate::oracle::contract_with(graph, edge_fn, &tails, &order)
        .map_err(|e| EncoderError::Internal(e.to_string()))?;
    let raw = crate::oracle::tensor_to_matrix_parts(
        graph.vertices().len(),
        graph.edges().len(),
        n_anc,
        &tensor,
    );
    // move the ancilla index from the column side to the row side: the
    // ancillas are spin legs (no grading), so this is pure bookkeeping
    let anc_mask = (1u64 << n_anc) - 1;
    let mut matrix = ExactMatrix::zeros(raw.rows() << n_anc, raw.cols() >> n_anc);
    for (r, c, v) in raw.iter() {
        matrix.add_entry((r << n_anc) | (c & anc_mask), c >> n_anc, v);
    }
    Ok(UnifiedNetwork {
        matrix,
        n_modes: graph.vertices().len(),
        n_sites: graph.edges().len(),
        n_ancillas: n_anc,
    })
}
