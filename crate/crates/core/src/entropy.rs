//! Entropy weighting of the three factors.
//!
//! Columns of the factor matrix are first scaled to proportions
//! `y_ij = x_ij / sum_i x_ij`, then each column gets the normalized entropy
//! `e_j = -k * sum_i y_ij ln y_ij` with `k = 1 / ln m`. The information utility
//! `h_j = 1 - e_j` measures how well a factor separates the candidates, and the
//! weights are `w_j = h_j / sum_j h_j`.
//!
//! `0 ln 0` is taken as 0. When no factor carries information (every `h_j` is
//! zero) or a column sums to zero, the weights fall back to `(1/3, 1/3, 1/3)`
//! and the report is flagged.

use serde::Serialize;
use thiserror::Error;

use crate::factors::FactorMatrix;

pub const FACTOR_COUNT: usize = 3;

/// Entropies within this distance of 0 or 1 are snapped onto the bound.
pub const ENTROPY_SNAP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EntropyError {
    #[error("entropy weighting needs at least two candidates, got {0}")]
    TooFewRows(usize),
    #[error("factor column {0} sums to zero")]
    DegenerateColumn(usize),
    #[error("column sums to zero")]
    ZeroColumnSum,
    #[error("entry ({row}, {col}) = {value} is not a finite nonnegative number")]
    InvalidEntry { row: usize, col: usize, value: f64 },
    #[error("empty matrix")]
    Empty,
}

/// Weights for (X, L, S). Entropy-derived vectors sum to 1; fixed baseline
/// vectors need not.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightVector {
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
}

impl WeightVector {
    pub const EQUAL: WeightVector = WeightVector {
        w1: 1.0 / 3.0,
        w2: 1.0 / 3.0,
        w3: 1.0 / 3.0,
    };

    pub const fn new(w1: f64, w2: f64, w3: f64) -> Self {
        WeightVector { w1, w2, w3 }
    }

    pub fn from_array([w1, w2, w3]: [f64; 3]) -> Self {
        WeightVector { w1, w2, w3 }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.w1, self.w2, self.w3]
    }

    pub fn sum(&self) -> f64 {
        self.w1 + self.w2 + self.w3
    }

    pub fn scaled(&self, c: f64) -> Self {
        WeightVector::new(self.w1 * c, self.w2 * c, self.w3 * c)
    }

    /// Nonnegative, finite and not all zero.
    pub fn is_valid(&self) -> bool {
        let w = self.as_array();
        w.iter().all(|v| v.is_finite() && *v >= 0.0) && w.iter().any(|v| *v > 0.0)
    }
}

/// Column proportions `y_ij`. Every column sums to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedMatrix {
    y: Vec<[f64; FACTOR_COUNT]>,
}

impl NormalizedMatrix {
    pub fn rows(&self) -> &[[f64; FACTOR_COUNT]] {
        &self.y
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.y.iter().map(|row| row[j]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub k: f64,
    pub e: [f64; FACTOR_COUNT],
    pub h: [f64; FACTOR_COUNT],
    pub w: WeightVector,
    /// Equal weights were substituted because the matrix carried no information.
    pub fallback: bool,
}

/// Scales one column to proportions of its sum.
pub fn normalize_column(column: &[f64]) -> Result<Vec<f64>, EntropyError> {
    let sum: f64 = column.iter().sum();
    if sum.is_nan() || sum <= 0.0 {
        return Err(EntropyError::ZeroColumnSum);
    }
    Ok(column.iter().map(|x| x / sum).collect())
}

pub fn column_normalize(rows: &[[f64; FACTOR_COUNT]]) -> Result<NormalizedMatrix, EntropyError> {
    if rows.is_empty() {
        return Err(EntropyError::Empty);
    }
    for (i, row) in rows.iter().enumerate() {
        for (j, &value) in row.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(EntropyError::InvalidEntry {
                    row: i,
                    col: j,
                    value,
                });
            }
        }
    }
    let mut y = vec![[0.0; FACTOR_COUNT]; rows.len()];
    for j in 0..FACTOR_COUNT {
        let column: Vec<f64> = rows.iter().map(|r| r[j]).collect();
        let scaled = normalize_column(&column).map_err(|_| EntropyError::DegenerateColumn(j))?;
        for (out, v) in y.iter_mut().zip(scaled) {
            out[j] = v;
        }
    }
    Ok(NormalizedMatrix { y })
}

/// `k = 1 / ln m`.
pub fn entropy_coefficient(m: usize) -> Result<f64, EntropyError> {
    if m < 2 {
        return Err(EntropyError::TooFewRows(m));
    }
    Ok((m as f64).ln().recip())
}

/// `-k * sum y ln y`, with `0 ln 0 = 0`, clamped to `[0, 1]`.
pub fn column_entropy(column: &[f64], k: f64) -> f64 {
    let sum: f64 = column
        .iter()
        .filter(|&&y| y > 0.0)
        .map(|&y| y * y.ln())
        .sum();
    let e = (-k * sum).clamp(0.0, 1.0);
    if 1.0 - e <= ENTROPY_SNAP {
        1.0
    } else if e <= ENTROPY_SNAP {
        0.0
    } else {
        e
    }
}

/// `w_j = h_j / sum h`. `None` when every utility is zero.
pub fn weights_from_utility(h: [f64; FACTOR_COUNT]) -> Option<WeightVector> {
    let total: f64 = h.iter().sum();
    (total > 0.0).then(|| WeightVector::from_array(h.map(|v| v / total)))
}

pub fn entropy_weights(matrix: &FactorMatrix) -> Result<EntropyReport, EntropyError> {
    entropy_weights_from_rows(&matrix.values())
}

pub fn entropy_weights_from_rows(
    rows: &[[f64; FACTOR_COUNT]],
) -> Result<EntropyReport, EntropyError> {
    let k = entropy_coefficient(rows.len())?;
    let normalized = match column_normalize(rows) {
        Ok(n) => n,
        Err(EntropyError::DegenerateColumn(_)) => {
            // A zero column carries no information; treat it like a uniform one.
            let mut e = [1.0; FACTOR_COUNT];
            for (j, slot) in e.iter_mut().enumerate() {
                let column: Vec<f64> = rows.iter().map(|r| r[j]).collect();
                if let Ok(y) = normalize_column(&column) {
                    *slot = column_entropy(&y, k);
                }
            }
            return Ok(EntropyReport {
                k,
                e,
                h: e.map(|v| 1.0 - v),
                w: WeightVector::EQUAL,
                fallback: true,
            });
        }
        Err(other) => return Err(other),
    };

    let e: [f64; FACTOR_COUNT] = std::array::from_fn(|j| column_entropy(&normalized.column(j), k));
    let h = e.map(|v| 1.0 - v);
    let (w, fallback) = match weights_from_utility(h) {
        Some(w) => (w, false),
        None => (WeightVector::EQUAL, true),
    };
    Ok(EntropyReport {
        k,
        e,
        h,
        w,
        fallback,
    })
}
