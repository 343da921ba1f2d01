//! Exact symbolic and matrix algebra for Pauli strings and fermionic
//! monomials.
//!
//! All scalars live in the Gaussian integers; phases of Pauli strings are
//! restricted to the fourth roots of unity. Operations that would leave
//! either set are errors, never approximations.

mod fermion;
mod gaussian;
mod matrix;
mod pauli;

pub use fermion::{
    apply_monomial_to_basis, fermion_matrix, FermionMonomial, FermionOp, ModeId, ModeUniverse,
};
pub use gaussian::GInt;
pub use matrix::ExactMatrix;
pub use pauli::{PauliLetter, PauliString, Phase, SiteId, SiteUniverse};

use thiserror::Error;

/// Errors from the exact algebra layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    /// Two operands were declared over different site/mode universes.
    #[error("universe mismatch: {0}")]
    UniverseMismatch(String),
    /// A mode or site id is not part of the declared universe.
    #[error("unknown id {0:?} in universe")]
    UnknownId(String),
    /// Canonicalization produced the zero operator (e.g. `a†_i a†_i`).
    #[error("monomial is the zero operator: {0}")]
    ZeroOperator(String),
    /// Parse failure for the canonical text form.
    #[error("parse error: {0}")]
    Parse(String),
}
