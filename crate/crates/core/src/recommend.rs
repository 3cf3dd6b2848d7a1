//! Composite index and space selection.
//!
//! `H = w1 * x + w2 * l + w3 * s` over normalized factors; the vacant space
//! with the smallest `H` is recommended, ties going to the smallest space id.

use serde::Serialize;
use thiserror::Error;

use crate::entropy::{entropy_weights, EntropyError, EntropyReport, WeightVector};
use crate::factors::{FactorError, FactorMatrix, SpaceDistances};
use crate::lot::{LotGraph, OccupancyState};

/// Fixed-weight comparison vectors: equal, driving-, walking- and
/// difficulty-leaning.
pub const BASELINE_I: WeightVector = WeightVector::new(1.0, 1.0, 1.0);
pub const BASELINE_II: WeightVector = WeightVector::new(10.0, 1.0, 1.0);
pub const BASELINE_III: WeightVector = WeightVector::new(1.0, 10.0, 1.0);
pub const BASELINE_IV: WeightVector = WeightVector::new(1.0, 1.0, 10.0);

#[derive(Debug, Error)]
pub enum RecommendError {
    #[error("lot is full")]
    LotFull,
    #[error("weights {0:?} must be nonnegative and not all zero")]
    InvalidWeights(WeightVector),
    #[error(transparent)]
    Factor(FactorError),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
}

impl From<FactorError> for RecommendError {
    fn from(err: FactorError) -> Self {
        match err {
            FactorError::NoVacantSpaces => RecommendError::LotFull,
            other => RecommendError::Factor(other),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightMode {
    /// Derive weights from the current candidates with the entropy method.
    Entropy,
    Fixed(WeightVector),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Recommendation {
    pub space: String,
    pub h_value: f64,
    /// `(space, H)` for every vacant space, canonical order.
    pub per_space_indices: Vec<(String, f64)>,
    pub weights_used: WeightVector,
    /// Set when the entropy method could not run (a single candidate) or
    /// carried no information (equal weights substituted).
    pub fallback_flag: bool,
    #[serde(skip)]
    pub entropy: Option<EntropyReport>,
}

pub fn composite_index(row: [f64; 3], w: &WeightVector) -> Result<f64, RecommendError> {
    if !w.is_valid() {
        return Err(RecommendError::InvalidWeights(*w));
    }
    Ok(w.w1 * row[0] + w.w2 * row[1] + w.w3 * row[2])
}

/// Picks the minimum-H row of an already built factor matrix.
pub fn recommend_from_matrix(
    matrix: &FactorMatrix,
    mode: WeightMode,
) -> Result<Recommendation, RecommendError> {
    if matrix.is_empty() {
        return Err(RecommendError::LotFull);
    }
    let (weights, fallback, entropy) = match mode {
        WeightMode::Fixed(w) => {
            if !w.is_valid() {
                return Err(RecommendError::InvalidWeights(w));
            }
            (w, matrix.len() == 1, None)
        }
        WeightMode::Entropy if matrix.len() == 1 => (WeightVector::EQUAL, true, None),
        WeightMode::Entropy => {
            let report = entropy_weights(matrix)?;
            (report.w, report.fallback, Some(report))
        }
    };

    let per_space_indices = matrix
        .rows
        .iter()
        .map(|row| {
            Ok((
                row.space().to_string(),
                composite_index(row.values(), &weights)?,
            ))
        })
        .collect::<Result<Vec<_>, RecommendError>>()?;

    let (best, h_value) =
        per_space_indices
            .iter()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |(bi, bh), (i, (_, h))| {
                    if *h < bh {
                        (i, *h)
                    } else {
                        (bi, bh)
                    }
                },
            );

    Ok(Recommendation {
        space: per_space_indices[best].0.clone(),
        h_value,
        per_space_indices,
        weights_used: weights,
        fallback_flag: fallback,
        entropy,
    })
}

/// Recommendation with precomputed per-space distances.
pub fn recommend_with(
    graph: &LotGraph,
    state: &OccupancyState,
    distances: &SpaceDistances,
    mode: WeightMode,
) -> Result<Recommendation, RecommendError> {
    let matrix = distances.factor_matrix(graph, state)?;
    recommend_from_matrix(&matrix, mode)
}

pub fn recommend<S: AsRef<str>>(
    graph: &LotGraph,
    state: &OccupancyState,
    entrance: &str,
    exits: &[S],
    mode: WeightMode,
) -> Result<Recommendation, RecommendError> {
    if let WeightMode::Fixed(w) = mode {
        if !w.is_valid() {
            return Err(RecommendError::InvalidWeights(w));
        }
    }
    if crate::lot::vacant_spaces(graph, state).is_empty() {
        return Err(RecommendError::LotFull);
    }
    let distances = SpaceDistances::compute(graph, entrance, exits)?;
    recommend_with(graph, state, &distances, mode)
}
