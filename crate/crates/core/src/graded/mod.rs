//! Z2-graded tensors with exact sign bookkeeping.
//!
//! A graded tensor is an ordered word of bra/ket factors with coefficients.
//! Exchanging two adjacent fermionic factors with indices `a`, `b`
//! multiplies the coefficient by `(-1)^(a·b)`, and closing a ket-bra loop
//! picks up the supertrace sign `(-1)^a`. Every operation here reduces to
//! those two primitives; no sign is ever computed by a shortcut formula.

mod ops;
mod tensor;

pub use ops::{solve_spin_letter, vertex_rule, vertex_symmetry_push, LocalOp, Op2};
pub use tensor::{
    ancilla_copy_tensor, cx_gate_tensor, cz_gate_tensor, ghz_tensor, vertex_tensor, GradedLeg,
    GradedTensor, LegKind, LegName, Polarity, Side,
};

use thiserror::Error;

/// Errors from the graded tensor engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error("leg {0:?} not found")]
    LegNotFound(String),
    #[error("leg position {0} out of range")]
    PositionOutOfRange(usize),
    #[error("cannot contract: {0}")]
    ContractionMismatch(String),
    #[error("vertex tensor needs degree >= 1")]
    DegenerateVertex,
    #[error("tensor has more than 64 legs")]
    TooManyLegs,
    #[error("no operator assignment satisfies the tensor identity: {0}")]
    NoRule(String),
    #[error("operator assignment is not unique: {0}")]
    AmbiguousRule(String),
}
