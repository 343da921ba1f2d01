use std::sync::Arc;

use crate::algebra::{ModeUniverse, SiteUniverse};
use crate::graded::{ghz_tensor, GradedTensor, LocalOp, Side};
use crate::graph::{EdgeId, MappingGraph, Preset};

use super::EncoderError;

/// The non-contractible cycle an insertion runs along.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoopKind {
    /// The single cycle of a 1D chain (insertion on the wrap edge).
    Chain,
    /// Horizontal direction of a torus (insertions on row-0 horizontal edges).
    Horizontal,
    /// Vertical direction of a torus (insertions on column-0 vertical edges).
    Vertical,
}

/// Operator inserted along a non-contractible cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsertionOp {
    I,
    Z,
    X,
    ZX,
}

impl InsertionOp {
    pub fn has_z(self) -> bool {
        matches!(self, InsertionOp::Z | InsertionOp::ZX)
    }

    pub fn has_x(self) -> bool {
        matches!(self, InsertionOp::X | InsertionOp::ZX)
    }

    pub fn label(self) -> &'static str {
        match self {
            InsertionOp::I => "I",
            InsertionOp::Z => "Z",
            InsertionOp::X => "X",
            InsertionOp::ZX => "ZX",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoopInsertion {
    pub cycle: LoopKind,
    pub op: InsertionOp,
}

/// Boundary condition: operator insertions along non-contractible cycles.
///
/// On the chain there is exactly one insertion, acting on the wrap edge just
/// left of the vertex tensor at site 0. On the torus the insertions are
/// fermionic `Z` strings along the horizontal and/or vertical direction; the
/// odd part of a boundary condition is always a defect placement.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BoundaryCondition {
    pub insertions: Vec<LoopInsertion>,
}

impl BoundaryCondition {
    pub fn trivial() -> BoundaryCondition {
        BoundaryCondition::default()
    }

    /// 1D boundary condition `sigma`.
    pub fn chain(sigma: InsertionOp) -> BoundaryCondition {
        BoundaryCondition {
            insertions: vec![LoopInsertion {
                cycle: LoopKind::Chain,
                op: sigma,
            }],
        }
    }

    /// 2D boundary condition: fermionic Z strings along the chosen
    /// directions.
    pub fn torus(z_h: bool, z_v: bool) -> BoundaryCondition {
        let mut insertions = Vec::new();
        if z_h {
            insertions.push(LoopInsertion {
                cycle: LoopKind::Horizontal,
                op: InsertionOp::Z,
            });
        }
        if z_v {
            insertions.push(LoopInsertion {
                cycle: LoopKind::Vertical,
                op: InsertionOp::Z,
            });
        }
        BoundaryCondition { insertions }
    }

    fn chain_sigma(&self) -> Option<InsertionOp> {
        match self.insertions.as_slice() {
            [] => Some(InsertionOp::I),
            [LoopInsertion {
                cycle: LoopKind::Chain,
                op,
            }] => Some(*op),
            _ => None,
        }
    }
}

/// Where the single odd defect sits: which edge and which virtual side of
/// its edge tensor takes the fermionic `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DefectPlacement {
    pub edge: EdgeId,
    pub side: Side,
    pub present: bool,
}

impl DefectPlacement {
    pub fn none() -> DefectPlacement {
        DefectPlacement {
            edge: 0,
            side: Side::R,
            present: false,
        }
    }

    pub fn at(edge: EdgeId, side: Side) -> DefectPlacement {
        DefectPlacement {
            edge,
            side,
            present: true,
        }
    }
}

/// A fully specified intertwining network: graph, boundary condition,
/// defect, and the derived tensor placements.
#[derive(Debug, Clone)]
pub struct MappingNetwork {
    graph: MappingGraph,
    bc: BoundaryCondition,
    defect: DefectPlacement,
    /// per-edge fermionic Z insertion (parity of Z count), side R
    z_edges: Vec<EdgeId>,
    mode_universe: Arc<ModeUniverse>,
    site_universe: Arc<SiteUniverse>,
}

/// Assemble a network, validating boundary and defect placement against the
/// graph. The network is parity-odd exactly when a defect is present (on
/// the chain, an odd boundary condition is the defect).
pub fn assemble(
    graph: MappingGraph,
    bc: BoundaryCondition,
    defect: DefectPlacement,
) -> Result<MappingNetwork, EncoderError> {
    let mut z_edges: Vec<EdgeId> = Vec::new();
    let mut defect = defect;
    match graph.preset {
        Some(Preset::Cycle { n }) => {
            let sigma = bc.chain_sigma().ok_or_else(|| {
                EncoderError::BadBoundary("the chain takes exactly one insertion".into())
            })?;
            let wrap = n - 1;
            if sigma.has_z() {
                z_edges.push(wrap);
            }
            if sigma.has_x() {
                if defect.present {
                    return Err(EncoderError::BadDefect(
                        "odd boundary condition already places the defect".into(),
                    ));
                }
                defect = DefectPlacement::at(wrap, Side::R);
            }
        }
        Some(Preset::Torus { lx, ly }) => {
            for ins in &bc.insertions {
                match (ins.cycle, ins.op) {
                    (_, InsertionOp::I) => {}
                    // a horizontal string crosses the vertical legs of one
                    // dual row; a vertical string crosses the horizontal
                    // legs of one dual column
                    (LoopKind::Horizontal, InsertionOp::Z) => {
                        z_edges.extend((0..lx).map(|x| lx * ly + x /* v(x,0) */));
                    }
                    (LoopKind::Vertical, InsertionOp::Z) => {
                        z_edges.extend((0..ly).map(|y| y * lx /* h(0,y) */));
                    }
                    _ => {
                        return Err(EncoderError::BadBoundary(
                            "torus insertions are fermionic Z strings; odd parts go through \
                             the defect"
                                .into(),
                        ));
                    }
                }
            }
            if defect.present {
                // horizontal virtual legs to the right of the edge tensor
                if defect.edge >= lx * ly {
                    return Err(EncoderError::BadDefect(
                        "defect must sit on a horizontal edge".into(),
                    ));
                }
                if defect.side != Side::R {
                    return Err(EncoderError::BadDefect(
                        "defect must sit on the R side of its edge tensor".into(),
                    ));
                }
            }
        }
        None => {
            if !bc.insertions.iter().all(|i| i.op == InsertionOp::I) {
                return Err(EncoderError::BadBoundary(
                    "loop insertions are defined for preset graphs only".into(),
                ));
            }
        }
    }
    if defect.present && graph.edges().iter().all(|e| e.id != defect.edge) {
        return Err(EncoderError::BadDefect(format!(
            "edge {} does not exist",
            defect.edge
        )));
    }
    let mode_universe = ModeUniverse::new(graph.vertex_labels());
    let site_universe = SiteUniverse::new(graph.edge_labels());
    Ok(MappingNetwork {
        graph,
        bc,
        defect,
        z_edges,
        mode_universe,
        site_universe,
    })
}

impl MappingNetwork {
    pub fn graph(&self) -> &MappingGraph {
        &self.graph
    }

    pub fn bc(&self) -> &BoundaryCondition {
        &self.bc
    }

    pub fn defect(&self) -> DefectPlacement {
        self.defect
    }

    /// Parity of the network: odd networks intertwine the odd fermionic
    /// sector.
    pub fn is_odd(&self) -> bool {
        self.defect.present
    }

    pub fn mode_universe(&self) -> &Arc<ModeUniverse> {
        &self.mode_universe
    }

    pub fn site_universe(&self) -> &Arc<SiteUniverse> {
        &self.site_universe
    }

    /// Z-insertion parity on an edge.
    pub fn has_z_insertion(&self, e: EdgeId) -> bool {
        self.z_edges.iter().filter(|&&x| x == e).count() % 2 == 1
    }

    pub fn z_edges(&self) -> &[EdgeId] {
        &self.z_edges
    }

    /// The edge tensor actually placed on edge `e`, with the fermionic `X`
    /// defect applied first (when present and requested) and the boundary
    /// `Z` insertion after it, both on their conventional sides.
    pub fn edge_tensor(&self, e: EdgeId, with_defect: bool) -> GradedTensor {
        let mut t = ghz_tensor(e);
        if with_defect && self.defect.present && self.defect.edge == e {
            t = t
                .apply_op(
                    crate::graded::LegName::EdgeEnd(e, self.defect.side),
                    &LocalOp::X.to_op2(),
                )
                .expect("edge leg exists");
        }
        if self.has_z_insertion(e) {
            t = t
                .apply_op(
                    crate::graded::LegName::EdgeEnd(e, Side::R),
                    &LocalOp::Z.to_op2(),
                )
                .expect("edge leg exists");
        }
        t
    }

    /// The same network with the odd defect stripped: the even counterpart
    /// used on the fermion side of odd-operator intertwining relations.
    pub fn sans_defect(&self) -> MappingNetwork {
        let mut net = self.clone();
        net.defect.present = false;
        net
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle_graph, torus_graph};

    #[test]
    fn chain_bc_lowering() {
        let net = assemble(
            cycle_graph(4).unwrap(),
            BoundaryCondition::chain(InsertionOp::Z),
            DefectPlacement::none(),
        )
        .unwrap();
        assert!(!net.is_odd());
        assert!(net.has_z_insertion(3));
        assert!(!net.has_z_insertion(0));

        let odd = assemble(
            cycle_graph(4).unwrap(),
            BoundaryCondition::chain(InsertionOp::ZX),
            DefectPlacement::none(),
        )
        .unwrap();
        assert!(odd.is_odd());
        assert_eq!(odd.defect().edge, 3);
        assert_eq!(odd.defect().side, Side::R);
    }

    #[test]
    fn torus_bc_lowering() {
        // the horizontal Z string crosses the vertical legs of dual row 0
        let net = assemble(
            torus_graph(2, 2).unwrap(),
            BoundaryCondition::torus(true, false),
            DefectPlacement::at(0, Side::R),
        )
        .unwrap();
        assert!(net.is_odd());
        assert!(net.has_z_insertion(4));
        assert!(net.has_z_insertion(5));
        assert!(!net.has_z_insertion(0));
        // the vertical Z string crosses the horizontal legs of dual column 0
        let net = assemble(
            torus_graph(2, 2).unwrap(),
            BoundaryCondition::torus(false, true),
            DefectPlacement::none(),
        )
        .unwrap();
        assert!(net.has_z_insertion(0));
        assert!(net.has_z_insertion(2));
        assert!(!net.has_z_insertion(4));
    }

    #[test]
    fn defect_on_vertical_leg_rejected() {
        let err = assemble(
            torus_graph(2, 2).unwrap(),
            BoundaryCondition::trivial(),
            DefectPlacement::at(5, Side::R),
        );
        assert!(matches!(err, Err(EncoderError::BadDefect(_))));
        let err = assemble(
            torus_graph(2, 2).unwrap(),
            BoundaryCondition::trivial(),
            DefectPlacement::at(0, Side::L),
        );
        assert!(matches!(err, Err(EncoderError::BadDefect(_))));
    }

    #[test]
    fn double_defect_rejected() {
        let err = assemble(
            cycle_graph(4).unwrap(),
            BoundaryCondition::chain(InsertionOp::X),
            DefectPlacement::at(0, Side::R),
        );
        assert!(matches!(err, Err(EncoderError::BadDefect(_))));
    }
}
