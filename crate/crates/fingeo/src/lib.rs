//! Point-line incidence geometry over finite fields.
//!
//! The objects here are the affine space `P = GF(q)^n` together with the
//! hyperplane at infinity `H = PG(n-1, q)`, a chosen set `K` of directions
//! in `H`, and the set `L` of affine lines whose direction lies in `K`.
//! The point-line incidence matrix `N` (rows = points, columns = lines)
//! is the parity-check matrix of two LDPC codes: `C = ker N` on line-indexed
//! vectors and `D = ker N^T` on point-indexed vectors.
//!
//! The crate computes exact ranks of `N` over any prime characteristic and
//! over the rationals, cross-checks them against closed-form counts, builds
//! the structured low-weight codewords that realize the minimum distances,
//! and runs one-step majority-logic decoding on both codes.

pub mod characters;
pub mod codes;
pub mod decoder;
pub mod geometry;
pub mod gf;
pub mod incidence;
pub mod ksets;
pub mod linalg;
pub mod util;
pub mod verify;
pub mod wenger;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field size {0} exceeds budget {1}")]
    FieldTooLarge(u64, u64),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("dimension must be at least 2, got {0}")]
    BadDimension(usize),
    #[error("invalid direction set: {0}")]
    InvalidKSet(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
