//! Fingerprinting codes that resist averaging collusion.
//!
//! Users receive binary codewords embedded as spread-spectrum watermarks.
//! When a coalition averages its copies, the detector recovers the exact
//! average of the colluders' codewords (the *generated word*). This crate
//! provides:
//!
//! - exact generated-word arithmetic ([`attack`]),
//! - descendant codes and suspect filtering ([`descend`]),
//! - soft, multiset and two-stage tracing ([`trace`]),
//! - brute-force verifiers for frameproof, separable, secure-list-decoding,
//!   strongly separable, SMIPPC and uniqueness-descendant codes ([`props`]),
//! - concatenated codes ([`concat`]),
//! - a floating-point spread-spectrum simulator ([`specsim`]),
//! - small-parameter code search ([`search`]) and timing helpers ([`scaling`]).
//!
//! Codeword indices are 1-based throughout.

pub mod attack;
pub mod code;
pub mod concat;
pub mod descend;
pub mod error;
pub mod props;
pub mod rational;
pub mod samples;
pub mod scaling;
pub mod search;
pub mod sets;
pub mod specsim;
mod subsets;
pub mod trace;
pub mod word;

/// Library version, embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use code::{parse_code, serialize_code, Code};
pub use error::{Error, Result};
pub use rational::Rational;
pub use sets::{CodewordMultiset, IndexSet, PositionSets};
pub use trace::{TraceOutcome, TraceStatus};
pub use word::GeneratedWord;
