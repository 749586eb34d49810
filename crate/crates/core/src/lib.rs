//! Full total independent sets of (sub)cubic and even-regular graphs.
//!
//! The crate covers the level recurrence driving the randomized sampler,
//! sparse boundary decompositions of oriented 2-factors, the sampler itself,
//! assembly of fractional total colourings from sampled weights, and an
//! exact rational LP for fractional total chromatic numbers of small graphs.

pub mod assembler;
pub mod cli;
pub mod error;
pub mod factor;
pub mod generate;
pub mod graph;
pub mod lp;
pub mod matching;
pub mod meanfield;
pub mod ode;
pub mod recurrence;
pub mod sampler;
pub mod sparse;

pub use error::{Error, Result};
pub use factor::OrientedTwoFactor;
pub use graph::{Graph, TotalElement};
pub use matching::Matching;
