//! Primitive prime divisor elements in finite classical groups.
//!
//! A prime `r` is a *primitive prime divisor* (ppd) of `b^e - 1` when `r`
//! divides `b^e - 1` but divides none of `b^i - 1` for `1 <= i < e`.  An
//! element of `GL(d, q)` whose order is divisible by a ppd of `q^e - 1` for
//! some `e > d/2` leaves a unique `e`-dimensional subspace invariant and is
//! called a ppd element.  Such elements are plentiful in the classical
//! groups and scarce in their proper subgroups, which makes them the engine
//! of a fast one-sided Monte Carlo test for whether a matrix group between
//! `Omega` and `Delta` (the full group of similitudes) actually contains the
//! classical subgroup `Omega`.
//!
//! The crate provides
//!
//! * exact arithmetic for small Galois fields and polynomials over them
//!   ([`field`]),
//! * dense matrix algebra including characteristic polynomials ([`matrix`]),
//! * ppd bookkeeping: Zsigmondy exceptions, the primitive parts `phi`,
//!   `phi_large`, `phi_basic` of `q^e - 1` ([`ppd`]),
//! * classification of a single matrix as a ppd element with its large and
//!   basic refinements ([`classify`]),
//! * constructions of the classical groups, their forms and similitude
//!   scalars ([`groups`]),
//! * a Norton-style irreducibility certificate and centralizer dimensions
//!   ([`meataxe`]),
//! * a seeded product-replacement ("rattle") element sampler ([`sampler`]),
//! * the three-stage recognition algorithm with explicit sample budgets
//!   ([`recognize`]),
//! * a breadth-first enumeration oracle for small groups giving exact ppd
//!   proportions ([`enumerate`]), and
//! * the on-disk group file format shared with the CLI ([`format`]).

pub mod classify;
pub mod enumerate;
pub mod field;
pub mod format;
pub mod groups;
pub mod matrix;
pub mod meataxe;
pub mod ppd;
pub mod recognize;
pub mod sampler;

use thiserror::Error;

/// Crate-wide error type.  Variant names mirror the failure conditions of
/// the individual operations; each carries enough context to be actionable.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a prime: {0}")]
    NotPrime(u64),
    #[error("magnitude cap exceeded: {0}")]
    Overflow(String),
    #[error("zero modulus in polynomial operation")]
    ZeroModulus,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("matrix is singular")]
    Singular,
    #[error("input matrix is singular")]
    SingularInput,
    #[error("inconsistent parameters: {0}")]
    Inconsistent(String),
    #[error("invalid group case: {0}")]
    InvalidCase(String),
    #[error("unsupported group case: {0}")]
    UnsupportedCase(String),
    #[error("generator does not preserve the form up to a scalar")]
    NotSimilitude,
    #[error("enumeration cap exceeded ({0} elements reached)")]
    CapExceeded(u64),
    #[error("e = {e} is not an allowed degree for this case (allowed: {allowed:?})")]
    ENotAllowed { e: u32, allowed: Vec<u32> },
    #[error("unsupported dimension for recognition: {0}")]
    UnsupportedDimension(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("no ppd exists at e = d for this (d, q)")]
    NoPpdAtD,
    #[error("epsilon must lie strictly between 0 and 1")]
    BadEpsilon,
}

pub type Result<T> = std::result::Result<T, Error>;
