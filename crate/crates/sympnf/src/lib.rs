//! Canonical symplectic matrices for prime-order mapping classes.
//!
//! Given a prime `p` and the rotation data of a prime-order conjugacy class
//! of surface mapping classes, this crate builds the adapted one-relator
//! presentation of the surface group, reduces its surface symbol to a
//! product of commutators, and carries the action on homology to a unique
//! canonical representative in `Sp(2g, Z)` — all in exact integer
//! arithmetic. It also enumerates the admissible classes of a given genus
//! and screens arbitrary prime-order symplectic matrices for finite-order
//! preimages.

pub mod class_data;
pub mod intersection;
pub mod matrix;
pub mod normal_form;
pub mod presentation;
pub mod reduction;
pub mod render;

use num_bigint::BigInt;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Rejected input.
    #[error("validation: {0}")]
    Validation(String),
    /// A matrix expected to be a change of integral basis is not.
    #[error("not unimodular: determinant {0}")]
    NotUnimodular(BigInt),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// An internal certification failed; indicates a bug, never bad input.
    #[error("invariant violation in {stage}: {detail}")]
    Invariant { stage: &'static str, detail: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("no power up to {0} is the identity")]
    OrderNotFound(usize),
    #[error("matrix order {0} is not prime")]
    OrderNotPrime(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code: 2 for rejected input, 3 for internal failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_)
            | Error::Parse(_)
            | Error::OrderNotFound(_)
            | Error::OrderNotPrime(_) => 2,
            Error::NotUnimodular(_) | Error::Dimension(_) | Error::Invariant { .. } => 3,
        }
    }
}
