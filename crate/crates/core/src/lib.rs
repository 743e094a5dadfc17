//! Edge coloring of multigraphs with hard-core matching distributions and
//! flaw-driven local search.
//!
//! * [`multigraph`]: the graph model, balls, matchings, coloring validation.
//! * [`fractional`]: exact fractional chromatic index and odd-set search.
//! * [`hardcore`]: partition functions, marginals, samplers, calibration.
//! * [`lll`]: generic local-search engine and charge bookkeeping.
//! * [`gs`]: round-based coloring by repeated matching deletion.
//! * [`list`]: iterated partial list coloring with greedy completion.
//! * [`oracle`]: brute-force ground truth for tiny instances.

pub mod error;
pub mod fractional;
pub mod gs;
pub mod hardcore;
pub mod list;
pub mod lll;
pub mod multigraph;
pub mod oracle;
pub mod rng;

pub use error::{Error, Result};
pub use multigraph::{Matching, Multigraph, PartialColoring};
