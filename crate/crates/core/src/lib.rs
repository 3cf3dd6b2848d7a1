//! Parking-space recommendation on a lot graph.
//!
//! The pipeline computes, for every vacant space, the A* driving distance from
//! the entrance, the walking distance to the nearest exit and a 1-3 parking
//! difficulty from the neighboring stalls. The three factors are normalized to
//! `[0, 1]`, weighted by the entropy method and combined into a composite
//! index; the space with the smallest index is recommended.
//!
//! - [`lot`]: lot graph, layout loading, occupancy, difficulty
//! - [`pathfind`]: A* shortest paths
//! - [`factors`]: factor extraction and fuzzy normalization
//! - [`entropy`]: entropy weighting
//! - [`recommend`]: composite index and selection
//! - [`evaluate`]: scenario comparison against fixed-weight baselines
//! - [`render`]: SVG output
//! - [`cli`]: command-line front end

pub mod cli;
pub mod entropy;
pub mod evaluate;
pub mod factors;
pub mod lot;
pub mod output;
pub mod pathfind;
pub mod recommend;
pub mod render;

pub use entropy::{EntropyReport, WeightVector};
pub use factors::{FactorMatrix, RawFactors};
pub use lot::{load_lot, LotGraph, NodeKind, OccupancyState};
pub use pathfind::{astar, Path};
pub use recommend::{recommend, Recommendation, WeightMode};
