//! Noncrossing parking functions for the complex reflection groups G(d,1,n)
//! and G(d,d,n).
//!
//! The crate builds these groups as colored permutations, computes reflection
//! length and the noncrossing partition lattice NC(W,c) by exhaustive search,
//! realizes noncrossing partitions as d-symmetric circular set partitions, and
//! implements the explicit bijections between noncrossing parking functions
//! and vectors of formal roots of unity, including all Fuss generalizations
//! (multichains, the shuffle/Kreweras construction on circles, and the annular
//! model for G(d,d,n)). A verification harness re-derives the counting
//! theorems exactly, and a renderer emits deterministic SVG pictures of the
//! models.
//!
//! Start with [`group::GroupContext`]; the `examples/` directory contains one
//! runnable walkthrough per capability.

pub mod absolute;
pub mod bijection;
pub mod cli;
pub mod fuss;
pub mod group;
pub mod model;
pub mod parking;
pub mod render;
pub mod verify;

/// Errors shared by every module of the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Rejected group parameters (d = 0, DDN with n < 2 or d < 2, ...).
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    /// An enumeration would exceed the configured size cap.
    #[error("enumeration size {needed} exceeds cap {cap}")]
    CapExceeded { needed: u128, cap: u128 },

    /// Malformed text input (element, partition, or vector form).
    #[error("parse error: {0}")]
    Parse(String),

    /// A structural assumption failed at runtime. These guard the finite
    /// "exactly one choice" searches and the largest-gap opener rule; a
    /// breach means an input outside the verified domain, and is reported
    /// rather than silently repaired.
    #[error("invariant violation: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
