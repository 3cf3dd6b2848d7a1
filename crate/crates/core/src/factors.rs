//! Per-space factors and their fuzzy normalization.
//!
//! Each vacant space gets a raw triple: driving distance X from the entrance,
//! walking distance L to the nearest exit, and difficulty S from its
//! neighbors. Each factor is mapped onto `[0, 1]` with a linear ascending
//! membership curve that reaches 1 at the factor's maximum. Smaller is better
//! for all three.
//!
//! Distance maxima are taken over *all* spaces, vacant or not, so a space's
//! normalized distances never move when other spaces fill up.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::lot::{space_difficulty, vacant_spaces, Difficulty, LotError, LotGraph, OccupancyState};
use crate::pathfind::{driving_distance, walking_distance, PathError};

/// Largest difficulty value, used to normalize S.
pub const DIFFICULTY_MAX: f64 = 3.0;

#[derive(Debug, Error)]
pub enum FactorError {
    #[error(transparent)]
    Lot(#[from] LotError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error("{0} reference distance is zero; cannot normalize")]
    DegenerateReference(&'static str),
    #[error("value {value} outside [0, {max}]")]
    OutOfRange { value: f64, max: f64 },
    #[error("membership maximum must be positive, got {0}")]
    NonPositiveMax(f64),
    #[error("no vacant spaces")]
    NoVacantSpaces,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawFactors {
    pub space: String,
    /// Driving distance from the entrance, meters.
    pub x: f64,
    /// Walking distance to the nearest exit, meters.
    pub l: f64,
    pub s: Difficulty,
}

/// One normalized row. All three entries lie in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorRow {
    pub raw: RawFactors,
    pub x: f64,
    pub l: f64,
    pub s: f64,
}

impl FactorRow {
    pub fn space(&self) -> &str {
        &self.raw.space
    }

    pub fn values(&self) -> [f64; 3] {
        [self.x, self.l, self.s]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorMatrix {
    /// One row per vacant space, canonical order.
    pub rows: Vec<FactorRow>,
    pub x_max: f64,
    pub l_max: f64,
}

impl FactorMatrix {
    pub fn values(&self) -> Vec<[f64; 3]> {
        self.rows.iter().map(FactorRow::values).collect()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Linear membership: `value / max`.
pub fn fuzzy_normalize(value: f64, max: f64) -> Result<f64, FactorError> {
    if !max.is_finite() || max <= 0.0 {
        return Err(FactorError::NonPositiveMax(max));
    }
    if !(0.0..=max).contains(&value) {
        return Err(FactorError::OutOfRange { value, max });
    }
    Ok(value / max)
}

/// X and L for every space of a lot, for one entrance and exit set.
/// Independent of occupancy, so it can be computed once and reused.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceDistances {
    driving: BTreeMap<String, f64>,
    walking: BTreeMap<String, f64>,
}

impl SpaceDistances {
    pub fn compute<S: AsRef<str>>(
        graph: &LotGraph,
        entrance: &str,
        exits: &[S],
    ) -> Result<Self, FactorError> {
        let mut driving = BTreeMap::new();
        let mut walking = BTreeMap::new();
        for space in graph.space_ids() {
            driving.insert(space.to_string(), driving_distance(graph, entrance, space)?);
            walking.insert(space.to_string(), walking_distance(graph, space, exits)?);
        }
        Ok(SpaceDistances { driving, walking })
    }

    pub fn driving(&self, space: &str) -> Option<f64> {
        self.driving.get(space).copied()
    }

    pub fn walking(&self, space: &str) -> Option<f64> {
        self.walking.get(space).copied()
    }

    /// `(x_max, l_max)` over all spaces.
    pub fn maxima(&self) -> Result<(f64, f64), FactorError> {
        let max = |m: &BTreeMap<String, f64>| m.values().copied().fold(0.0, f64::max);
        let (x_max, l_max) = (max(&self.driving), max(&self.walking));
        if x_max <= 0.0 {
            return Err(FactorError::DegenerateReference("driving"));
        }
        if l_max <= 0.0 {
            return Err(FactorError::DegenerateReference("walking"));
        }
        Ok((x_max, l_max))
    }

    pub fn raw_factors(
        &self,
        graph: &LotGraph,
        state: &OccupancyState,
        space: &str,
    ) -> Result<RawFactors, FactorError> {
        let unknown = || FactorError::Lot(LotError::UnknownSpace(space.to_string()));
        Ok(RawFactors {
            space: space.to_string(),
            x: self.driving(space).ok_or_else(unknown)?,
            l: self.walking(space).ok_or_else(unknown)?,
            s: space_difficulty(graph, state, space)?,
        })
    }

    pub fn factor_matrix(
        &self,
        graph: &LotGraph,
        state: &OccupancyState,
    ) -> Result<FactorMatrix, FactorError> {
        let vacant = vacant_spaces(graph, state);
        if vacant.is_empty() {
            return Err(FactorError::NoVacantSpaces);
        }
        let (x_max, l_max) = self.maxima()?;
        let rows = vacant
            .iter()
            .map(|space| {
                let raw = self.raw_factors(graph, state, space)?;
                Ok(FactorRow {
                    x: fuzzy_normalize(raw.x, x_max)?,
                    l: fuzzy_normalize(raw.l, l_max)?,
                    s: fuzzy_normalize(f64::from(raw.s.value()), DIFFICULTY_MAX)?,
                    raw,
                })
            })
            .collect::<Result<_, FactorError>>()?;
        Ok(FactorMatrix { rows, x_max, l_max })
    }
}

/// Farthest driving and walking distances over all spaces.
pub fn reference_distances<S: AsRef<str>>(
    graph: &LotGraph,
    entrance: &str,
    exits: &[S],
) -> Result<(f64, f64), FactorError> {
    SpaceDistances::compute(graph, entrance, exits)?.maxima()
}

pub fn raw_factors<S: AsRef<str>>(
    graph: &LotGraph,
    state: &OccupancyState,
    entrance: &str,
    exits: &[S],
    space: &str,
) -> Result<RawFactors, FactorError> {
    Ok(RawFactors {
        space: space.to_string(),
        x: driving_distance(graph, entrance, space)?,
        l: walking_distance(graph, space, exits)?,
        s: space_difficulty(graph, state, space)?,
    })
}

pub fn build_factor_matrix<S: AsRef<str>>(
    graph: &LotGraph,
    state: &OccupancyState,
    entrance: &str,
    exits: &[S],
) -> Result<FactorMatrix, FactorError> {
    if vacant_spaces(graph, state).is_empty() {
        return Err(FactorError::NoVacantSpaces);
    }
    SpaceDistances::compute(graph, entrance, exits)?.factor_matrix(graph, state)
}
