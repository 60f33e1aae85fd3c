//! Lengths of generating systems of matrix algebras and matrix Lie algebras,
//! and their applications to quantum channels and tensor networks.
//!
//! The central quantities are the *length* of a generating system
//! `S ⊂ M_n(C)` (minimal `ℓ` such that words of length at most `ℓ`, with the
//! identity allowed as a letter, span the full matrix algebra) and the
//! *Wie-length* (minimal `k` such that words of length exactly `k` span).
//! Built on top of these are
//!
//! - [`liespan`]: the analogous Lie-length of subsets of `su(n)` via a
//!   breadth-first search over right-nested commutators, together with
//!   Witt's formula for the counting lower bound,
//! - [`channels`]: Kraus/Choi machinery for quantum channels, the index of
//!   eventual full Kraus rank, strong irreducibility and the zero-error
//!   capacity dichotomy,
//! - [`tensornets`]: injectivity of the boundary-to-physical map for
//!   translation-invariant MPS and small PEPS grids,
//! - [`ensembles`]: seeded random samplers (Ginibre, Haar-isometry Kraus
//!   tuples, random `su(n)` elements, random PEPS tensors),
//! - [`lab`]: experiment harness, matrix JSON I/O, CSV and SVG emission.
//!
//! All floating-point rank and span decisions go through an explicit
//! [`numkernel::Tolerance`].

pub mod channels;
pub mod ensembles;
pub mod lab;
pub mod liespan;
pub mod numkernel;
pub mod tensornets;
pub mod wordspan;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("non-finite entry encountered: {0}")]
    NonFinite(String),
    #[error("eigendecomposition did not converge: {0}")]
    EigenConvergence(String),
    #[error("search cap {cap} exhausted (dims so far {dims:?}); this signals a numerical-tolerance problem, not a mathematical outcome")]
    CapExceeded { cap: usize, dims: Vec<usize> },
    #[error("integer overflow: {0}")]
    Overflow(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("internal cross-check failed: {0}")]
    Inconsistent(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {msg}")]
    Parse { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
