//! Tree-ensemble learners over plain `f64` feature matrices.
//!
//! Three models, all deterministic for a fixed seed and worker count:
//!
//! - [`DecisionTree`] — single CART-style classification tree, Gini splits.
//! - [`RandomForest`] — bagged trees with per-split feature sampling;
//!   per-tree randomness is derived from the master seed, so training is
//!   reproducible under any `rayon` thread count.
//! - [`GradientBoost`] — additive regression trees with a softmax
//!   multiclass objective and Newton leaf values.
//!
//! Rows are `&[Vec<f64>]`, labels are `usize` class indices in
//! `0..n_classes`. No missing-value handling: callers encode absence
//! explicitly (the feature pipeline uses presence flags).

mod boost;
mod forest;
mod tree;

pub use boost::{GbtParams, GradientBoost};
pub use forest::{FeatureSubset, RandomForest, RfParams};
pub use tree::{DecisionTree, TreeParams};

use thiserror::Error;

/// Training-time validation failures.
#[derive(Debug, Error)]
pub enum TrainError {
    #[error("training set is empty")]
    EmptyDataset,
    #[error("row {row} has {got} features, expected {expected}")]
    RaggedRows {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("{labels} labels for {rows} rows")]
    LabelMismatch { labels: usize, rows: usize },
    #[error("label {label} out of range for {n_classes} classes")]
    LabelOutOfRange { label: usize, n_classes: usize },
    #[error("all rows carry the same class; at least two distinct classes are required")]
    SingleClass,
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },
}

/// Checks the shared (rows, labels, n_classes) contract.
fn validate_dataset(
    rows: &[Vec<f64>],
    labels: &[usize],
    n_classes: usize,
) -> Result<usize, TrainError> {
    if rows.is_empty() {
        return Err(TrainError::EmptyDataset);
    }
    if labels.len() != rows.len() {
        return Err(TrainError::LabelMismatch {
            labels: labels.len(),
            rows: rows.len(),
        });
    }
    let width = rows[0].len();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != width {
            return Err(TrainError::RaggedRows {
                row: i,
                got: row.len(),
                expected: width,
            });
        }
    }
    if let Some(&bad) = labels.iter().find(|&&l| l >= n_classes) {
        return Err(TrainError::LabelOutOfRange {
            label: bad,
            n_classes,
        });
    }
    let first = labels[0];
    if labels.iter().all(|&l| l == first) {
        return Err(TrainError::SingleClass);
    }
    Ok(width)
}

/// Normalizes raw importance mass to sum to 1; uniform when no split
/// contributed any gain.
fn normalize_importances(raw: &[f64]) -> Vec<f64> {
    let total: f64 = raw.iter().sum();
    if total > 0.0 {
        raw.iter().map(|&v| v / total).collect()
    } else {
        vec![1.0 / raw.len() as f64; raw.len()]
    }
}
