//! Mechanisms for the pairwise kidney exchange game.
//!
//! Hospitals ("agents") pool incompatible patient-donor pairs into one
//! compatibility graph; a central mechanism picks a matching; each agent
//! then matches whatever it kept back privately. This crate provides:
//!
//! * [`graph`]: instances, matchings, the KEX file format, symmetric
//!   differences and vertex hiding.
//! * [`matching`]: exact maximum matching and the tiered matching behind
//!   Mix-and-Match, with a brute-force oracle.
//! * [`combiner`]: re-splitting two matchings into a pair whose per-agent
//!   utilities differ by at most two.
//! * [`mechanisms`]: Mix-and-Match, its pairwise-independent variant, the
//!   multi-layer low-variance mechanism and the deterministic layered one.
//! * [`analysis`]: exact utility distributions, Monte Carlo moments,
//!   deviation search and approximation ratios.
//! * [`harness`]: instance generators and the command-line front end.

pub mod analysis;
pub mod combiner;
pub mod error;
pub mod graph;
pub mod harness;
pub mod matching;
pub mod mechanisms;

pub use error::{Error, Result};
pub use graph::{AgentId, Edge, Instance, Matching, VertexId};
