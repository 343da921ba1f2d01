//! The compiler core: assemble a mapping network for a graph, boundary
//! condition and defect choice; map fermionic monomials to Pauli strings;
//! emit gauge constraints; compute sector and twist tables; compose with
//! the spin duality in 1D; lift boundary conditions to ancilla qubits.

mod kw;
mod map;
mod network;
mod rules;
mod sector;
mod unified;

pub use kw::{kw_compose, kw_dual_record, kw_matrix, unified_boundary, DualRecord, KwBoundary, KwComposition, UnifiedBoundary};
pub use map::{map_operator, map_operator_with};
pub use network::{
    assemble, BoundaryCondition, DefectPlacement, InsertionOp, LoopInsertion, LoopKind,
    MappingNetwork,
};
pub use rules::RuleSet;
pub use sector::{charge_sector, gauge_constraints, twist, LoopChoice, SectorRecord, TwistKind};

/// Route planning for the canonical support region (oracle use).
pub fn plan_routes_pub(
    net: &MappingNetwork,
    local: &[crate::graded::LocalOp],
) -> Result<std::collections::BTreeMap<crate::graph::VertexId, Vec<u8>>, EncoderError> {
    map::plan_routes(net, local)
}

/// Boundary-condition label of a chain network (table form).
pub fn sector_chain_label(net: &MappingNetwork) -> String {
    sector::chain_sigma_label(net)
}

/// Boundary-condition label of a torus network (table form).
pub fn sector_torus_label(net: &MappingNetwork) -> String {
    sector::torus_bc_label(net)
}
pub use unified::{unified_unitary, UnifiedNetwork};

use thiserror::Error;

/// Errors from network assembly and symbolic mapping.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncoderError {
    #[error("graph error: {0}")]
    Graph(#[from] crate::graph::GraphError),
    #[error("algebra error: {0}")]
    Algebra(#[from] crate::algebra::AlgebraError),
    #[error("tensor error: {0}")]
    Graded(#[from] crate::graded::GradedError),
    #[error("boundary condition invalid: {0}")]
    BadBoundary(String),
    #[error("defect invalid: {0}")]
    BadDefect(String),
    #[error("odd operator needs a defect (or an odd boundary condition)")]
    OddWithoutDefect,
    #[error("operator touches mode {0:?} not present in the graph")]
    UnknownMode(String),
    #[error("raise/lower factors are not single Pauli images; decompose into X/Z monomials first")]
    NonPauliFactor,
    #[error("operation requires a preset graph (cycle or torus)")]
    PresetRequired,
    #[error("operation requires a 1D cycle network")]
    ChainRequired,
    #[error("{0}")]
    Internal(String),
}
