//! Memory-metered graph streaming testbed.
//!
//! The crate is organized around a single contract: a [`stream::Processor`]
//! consumes a graph stream token by token, can be snapshotted into an opaque
//! [`stream::Transcript`] at any point, and can be reconstituted from such a
//! transcript in a fresh instance. The bit length of the transcript is both
//! the space meter and the unit of communication cost, so the same number
//! shows up when a processor is metered standalone and when it is wrapped
//! into a multi-player communication protocol.
//!
//! - [`stream`]: tokens, streams, the processor contract, transcript
//!   accounting, and the line-oriented stream file format.
//! - [`problems`]: communication problems (INDEX, pointer chasing, set
//!   chasing, set-chasing intersection) as plain data with exact referees
//!   and seeded generators.
//! - [`oracles`]: non-streaming ground-truth solvers, each paired with an
//!   exhaustive counterpart so nothing validates against itself.
//! - [`processors`]: reference store-and-solve streaming processors for
//!   tree depth, s-t distance, weighted min s-t cut, negative-cycle
//!   detection, and SCC co-membership.
//! - [`reductions`]: deterministic computation-graph builders, protocol
//!   simulations that pass transcripts between players, and the
//!   transcript-forking procedures.
//! - [`bounds`]: computable forms of the bound formulas and counting
//!   arguments, for measured-vs-formula reporting.
//! - [`suites`]: the verification suites behind `spacebound verify` and the
//!   acceptance tests.

#![forbid(unsafe_code)]

pub mod bench;
pub mod bounds;
pub mod oracles;
pub mod problems;
pub mod processors;
pub mod reductions;
pub mod stream;
pub mod suites;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A stream or instance file could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// A stream violates its structural invariants.
    #[error("invalid stream: {0}")]
    InvalidStream(String),
    /// Bad parameters to a generator or builder.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A processor was driven outside its contract (e.g. finish before all
    /// passes were consumed, or a pass mark out of order).
    #[error("processor protocol violation: {0}")]
    Protocol(String),
    /// A transcript could not be decoded back into processor state.
    #[error("corrupt transcript: {0}")]
    Transcript(String),
    /// Input rejected by a processor or oracle (not a tree, nonpositive
    /// capacity, missing query, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A protocol answer could not be decoded back to a problem answer.
    #[error("decode failed: {0}")]
    Decode(String),
    /// A simulated protocol produced an answer the reduction cannot accept.
    #[error("reduction failed: {0}")]
    ReductionFailure(String),
    /// Transcript-fork extraction failed.
    #[error("extraction failed: {0}")]
    Extraction(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
