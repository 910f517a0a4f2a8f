//! TOPSIS ranking by relative closeness to the ideal solution.
//!
//! Criterion weights are signed: a positive weight marks a benefit criterion
//! (larger is better), a negative weight a cost criterion. Only the
//! magnitude scales the normalized column.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::CriteriaVector;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TopsisError {
    #[error("decision matrix has no rows")]
    EmptyMatrix,
    #[error("row {row} has {found} values but {expected} criteria were given")]
    DimensionMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("criterion weights are all zero")]
    ZeroWeights,
    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionSpec {
    pub name: String,
    /// Positive for benefit criteria, negative for cost criteria.
    pub weight: f64,
}

impl CriterionSpec {
    pub fn new(name: impl Into<String>, weight: f64) -> Self {
        CriterionSpec {
            name: name.into(),
            weight,
        }
    }

    pub fn is_benefit(&self) -> bool {
        self.weight >= 0.0
    }
}

/// The five layout criteria AC, LSP, ASP, CF, IC with the given signed weights.
pub fn layout_criteria(weights: [f64; 5]) -> Vec<CriterionSpec> {
    CriteriaVector::NAMES
        .iter()
        .zip(weights)
        .map(|(name, w)| CriterionSpec::new(*name, w))
        .collect()
}

/// `Σ|w|`, which should be 1 for a well-formed weight set.
pub fn weight_mass(criteria: &[CriterionSpec]) -> f64 {
    criteria.iter().map(|c| c.weight.abs()).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedRow<I> {
    pub id: I,
    pub values: Vec<f64>,
    /// Relative closeness `C*` in `[0, 1]`.
    pub closeness: f64,
    /// Position of this row in the input matrix.
    pub index: usize,
}

/// Rows sorted by closeness, best first; ties keep input order.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedPopulation<I> {
    pub rows: Vec<RankedRow<I>>,
}

impl<I> RankedPopulation<I> {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn best(&self) -> Option<&RankedRow<I>> {
        self.rows.first()
    }

    pub fn max_closeness(&self) -> f64 {
        self.rows.first().map_or(0.0, |r| r.closeness)
    }

    /// `C* / max(C*)`, or 0 when every closeness is 0.
    pub fn rescaled(&self, row: &RankedRow<I>) -> f64 {
        let max = self.max_closeness();
        if max > 0.0 {
            row.closeness / max
        } else {
            0.0
        }
    }

    /// Input indices in ranked order.
    pub fn order(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.index).collect()
    }

    /// 1-based rank of the row with input index `index`.
    pub fn position_of(&self, index: usize) -> Option<usize> {
        self.rows
            .iter()
            .position(|r| r.index == index)
            .map(|p| p + 1)
    }
}

/// Relative closeness of every row, in input order.
pub fn closeness<V: AsRef<[f64]>>(
    matrix: &[V],
    criteria: &[CriterionSpec],
) -> Result<Vec<f64>, TopsisError> {
    if matrix.is_empty() {
        return Err(TopsisError::EmptyMatrix);
    }
    let n = criteria.len();
    for (row, values) in matrix.iter().enumerate() {
        let values = values.as_ref();
        if values.len() != n {
            return Err(TopsisError::DimensionMismatch {
                row,
                expected: n,
                found: values.len(),
            });
        }
        if let Some(col) = values.iter().position(|v| !v.is_finite()) {
            return Err(TopsisError::NonFinite { row, col });
        }
    }
    let mass = weight_mass(criteria);
    if mass == 0.0 || !mass.is_finite() {
        return Err(TopsisError::ZeroWeights);
    }

    // vector normalization per column, then weighting by |w|
    let mut weighted: Vec<Vec<f64>> = matrix.iter().map(|r| r.as_ref().to_vec()).collect();
    for (j, crit) in criteria.iter().enumerate() {
        let norm = matrix
            .iter()
            .map(|r| r.as_ref()[j].powi(2))
            .sum::<f64>()
            .sqrt();
        let w = crit.weight.abs() / mass;
        for row in weighted.iter_mut() {
            row[j] = if norm > 0.0 { w * row[j] / norm } else { 0.0 };
        }
    }

    let mut ideal = vec![0.0; n];
    let mut anti = vec![0.0; n];
    for (j, crit) in criteria.iter().enumerate() {
        let col = weighted.iter().map(|r| r[j]);
        let max = col.clone().fold(f64::NEG_INFINITY, f64::max);
        let min = col.fold(f64::INFINITY, f64::min);
        if crit.is_benefit() {
            ideal[j] = max;
            anti[j] = min;
        } else {
            ideal[j] = min;
            anti[j] = max;
        }
    }

    let dist = |row: &[f64], target: &[f64]| {
        row.iter()
            .zip(target)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt()
    };
    Ok(weighted
        .iter()
        .map(|row| {
            let s_plus = dist(row, &ideal);
            let s_minus = dist(row, &anti);
            let total = s_plus + s_minus;
            // S+ = S- = 0 only when every row sits at the ideal
            if total > 0.0 {
                s_minus / total
            } else {
                1.0
            }
        })
        .collect())
}

/// Ranks alternatives by descending closeness. Ties keep input order.
pub fn rank<I, V: AsRef<[f64]>>(
    alternatives: Vec<(I, V)>,
    criteria: &[CriterionSpec],
) -> Result<RankedPopulation<I>, TopsisError> {
    let scores = {
        let matrix: Vec<&[f64]> = alternatives.iter().map(|(_, v)| v.as_ref()).collect();
        closeness(&matrix, criteria)?
    };
    let mut rows: Vec<RankedRow<I>> = alternatives
        .into_iter()
        .zip(scores)
        .enumerate()
        .map(|(index, ((id, values), closeness))| RankedRow {
            id,
            values: values.as_ref().to_vec(),
            closeness,
            index,
        })
        .collect();
    rows.sort_by(|a, b| b.closeness.total_cmp(&a.closeness));
    Ok(RankedPopulation { rows })
}
