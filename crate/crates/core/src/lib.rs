//! Query-efficient label recovery viewed as locally encodable source coding.
//!
//! `n` elements carry hidden labels drawn i.i.d. from a prior `p`. An oracle
//! answers simple queries (same-cluster/XOR, AND, k-ary AND) over at most a
//! constant number of elements per query, possibly corrupting each answer
//! independently. This crate builds the nonadaptive query designs, simulates
//! the oracle, runs the matching decoders, and evaluates the closed-form
//! rate and distortion bounds for each regime.
//!
//! The crate is `no_std`-compatible (with `alloc`); all IO, file formats and
//! the command-line front end live in the companion `lesc-cli` crate.
//!
//! Modules map onto the pipeline:
//!
//! - [`math`] — numerically stable entropy/divergence/combinatorial kernels
//! - [`model`] — label vectors, priors, query graphs, noise channels
//! - [`schemes`] — the four nonadaptive query designs
//! - [`oracle`] — noiseless answers and the independent-noise channel
//! - [`decoders`] — the four label-recovery procedures
//! - [`bounds`] — closed-form bounds and exact error formulas
//! - [`sim`] — seeded Monte Carlo harness and sweeps

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bounds;
pub mod decoders;
pub mod math;
pub mod model;
pub mod oracle;
pub mod schemes;
pub mod sim;

mod float;

use alloc::string::String;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A scalar parameter fell outside its documented domain.
    #[error("{name} = {value} violates `{constraint}`")]
    Domain {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },
    /// Bernoulli divergence D(a||b) with b on the boundary and a != b.
    #[error("D({a}||{b}) is infinite")]
    InfiniteDivergence { a: f64, b: f64 },
    /// Summation range is not 0 <= lo <= hi <= n.
    #[error("invalid summation range [{lo}, {hi}] for n = {n}")]
    InvalidRange { n: u64, lo: u64, hi: u64 },
    /// Prior vector failed validation.
    #[error("invalid prior: {0}")]
    InvalidPrior(String),
    /// Two sequences that must agree in length do not.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    /// Label or answer alphabets disagree.
    #[error("alphabet mismatch: expected k = {expected}, found k = {found}")]
    AlphabetMismatch { expected: u32, found: u32 },
    /// An element index escaped `[0, n)`.
    #[error("index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    /// A query repeats an earlier query's index multiset.
    #[error("duplicate query at position {position}")]
    DuplicateQuery { position: usize },
    /// A query's arity is outside `[2, delta_max]` (or != 2 for AND kinds).
    #[error("query {position} has arity {len}, allowed 2..={max}")]
    QueryArity {
        position: usize,
        len: usize,
        max: usize,
    },
    /// Scheme parameters violate a construction precondition.
    #[error("invalid scheme parameters: {0}")]
    SchemeParams(String),
    /// A decoder received a graph without the shape it requires.
    #[error("graph shape: {0}")]
    GraphShape(String),
    /// No candidate satisfied the decoding constraints.
    #[error("decode failure: {0}")]
    DecodeFailure(&'static str),
    /// A simulation configuration pairs incompatible pieces.
    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),
}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
