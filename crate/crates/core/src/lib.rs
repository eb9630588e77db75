//! Cotree toolkit for cographs.
//!
//! - [`cotree`]: parse, print, normalize, complement and materialize cotrees.
//! - [`graph`]: the materialized graphs the oracles work on.
//! - [`oracles`]: exact definitional checks (dominating sets, secure
//!   domination, label R, property P).
//! - [`annotate`]: the linear bottom-up pass, including the published and the
//!   corrected property-P rules.
//! - [`generators`]: the G_k counterexample family, random cotrees and an
//!   exhaustive enumerator.
//! - [`verify`] and [`bench`]: corpus cross-checks and timing.
//! - [`cli`]: the `cosec` command line.

pub mod annotate;
pub mod bench;
pub mod cli;
pub mod cotree;
pub mod generators;
pub mod graph;
pub mod oracles;
pub mod verify;

pub use annotate::{annotate, AnnotatedCotree, NodeAnnotations};
pub use cotree::{parse_cotree, Cotree, Kind, NodeId};
pub use graph::{Graph, VertexSet};
pub use oracles::OracleBudget;
