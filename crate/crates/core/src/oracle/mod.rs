//! Exact brute-force realization of small mapping networks as explicit
//! matrices, and the verification suites that anchor every symbolic rule.

mod realize;
mod report;
mod solve;
mod verify;

pub use realize::{
    default_budget, mul_fermion_left, mul_pauli_right, realize, realize_with_budget, NetworkMatrix,
};
pub(crate) use realize::{contract_with, tensor_to_matrix_parts};
pub(crate) use verify::translation_permutations;
pub use report::{CheckOutcome, VerificationReport};
pub use solve::solve_image;
pub use verify::{
    bc_label, generator_sweep, network_label, verify_gauge_projector, verify_intertwiner,
    verify_network, verify_sector, verify_twist, verify_unitary, UnitaryVerdict,
};

use thiserror::Error;

/// Errors from the oracle layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("realization budget exceeded: {0} edges > {1}")]
    BudgetExceeded(usize, usize),
    #[error("encoder error: {0}")]
    Encoder(#[from] crate::encoder::EncoderError),
    #[error("tensor error: {0}")]
    Graded(#[from] crate::graded::GradedError),
    #[error("algebra error: {0}")]
    Algebra(#[from] crate::algebra::AlgebraError),
    #[error("no Pauli string intertwines the operator")]
    NoSolution,
    #[error("intertwining Pauli string is not unique: {0}")]
    NonUniqueSolution(String),
    #[error("{0}")]
    Internal(String),
}
