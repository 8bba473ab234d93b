//! Gradient-boosted trees with a softmax multiclass objective.
//!
//! Each round fits one regression tree per class to the cross-entropy
//! gradient/hessian and applies Newton leaf values scaled by the learning
//! rate. Training is deterministic: no row or feature subsampling.

use serde::{Deserialize, Serialize};

use crate::tree::{GradParams, GradientTree};
use crate::{validate_dataset, TrainError};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GbtParams {
    pub rounds: usize,
    pub learning_rate: f64,
    pub max_depth: usize,
    pub min_leaf: usize,
    /// L2 regularization on leaf values.
    pub lambda: f64,
    /// Kept for interface parity; the boosting path draws no randomness.
    pub seed: u64,
}

impl Default for GbtParams {
    fn default() -> Self {
        Self {
            rounds: 300,
            learning_rate: 0.1,
            max_depth: 4,
            min_leaf: 1,
            lambda: 1.0,
            seed: 0,
        }
    }
}

/// A fitted boosted ensemble: `rounds x n_classes` regression trees plus
/// the training-loss trace.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GradientBoost {
    rounds: Vec<Vec<GradientTree>>,
    learning_rate: f64,
    n_features: usize,
    n_classes: usize,
    /// Mean multiclass log-loss on the training set after each round.
    train_loss: Vec<f64>,
}

impl GradientBoost {
    pub fn fit(
        rows: &[Vec<f64>],
        labels: &[usize],
        n_classes: usize,
        params: &GbtParams,
    ) -> Result<Self, TrainError> {
        let width = validate_dataset(rows, labels, n_classes)?;
        if params.rounds == 0 {
            return Err(TrainError::InvalidParam {
                name: "rounds",
                reason: "must be at least 1".into(),
            });
        }
        if !(params.learning_rate > 0.0) || params.learning_rate > 1.0 {
            return Err(TrainError::InvalidParam {
                name: "learning_rate",
                reason: "must lie in (0, 1]".into(),
            });
        }
        if params.max_depth == 0 {
            return Err(TrainError::InvalidParam {
                name: "max_depth",
                reason: "must be at least 1".into(),
            });
        }
        if params.min_leaf == 0 {
            return Err(TrainError::InvalidParam {
                name: "min_leaf",
                reason: "must be at least 1".into(),
            });
        }
        if !(params.lambda >= 0.0) {
            return Err(TrainError::InvalidParam {
                name: "lambda",
                reason: "must be non-negative".into(),
            });
        }

        let n = rows.len();
        let grad_params = GradParams {
            max_depth: params.max_depth,
            min_leaf: params.min_leaf,
            lambda: params.lambda,
        };

        // scores[i][k] = raw additive score F_k(x_i), initialized to 0.
        let mut scores = vec![vec![0.0f64; n_classes]; n];
        let mut rounds = Vec::with_capacity(params.rounds);
        let mut train_loss = Vec::with_capacity(params.rounds);

        let mut grad = vec![0.0f64; n];
        let mut hess = vec![0.0f64; n];

        for _ in 0..params.rounds {
            let probs: Vec<Vec<f64>> = scores.iter().map(|s| softmax(s)).collect();
            let mut class_trees = Vec::with_capacity(n_classes);
            for k in 0..n_classes {
                for i in 0..n {
                    let p = probs[i][k];
                    let y = if labels[i] == k { 1.0 } else { 0.0 };
                    grad[i] = p - y;
                    hess[i] = (p * (1.0 - p)).max(1e-16);
                }
                let tree = GradientTree::fit(rows, &grad, &hess, &grad_params);
                for (i, row) in rows.iter().enumerate() {
                    scores[i][k] += params.learning_rate * tree.predict(row);
                }
                class_trees.push(tree);
            }
            rounds.push(class_trees);
            train_loss.push(mean_log_loss(&scores, labels));
        }

        Ok(Self {
            rounds,
            learning_rate: params.learning_rate,
            n_features: width,
            n_classes,
            train_loss,
        })
    }

    /// Raw additive scores for one row, before softmax.
    pub fn decision_scores(&self, row: &[f64]) -> Vec<f64> {
        let mut scores = vec![0.0f64; self.n_classes];
        for round in &self.rounds {
            for (k, tree) in round.iter().enumerate() {
                scores[k] += self.learning_rate * tree.predict(row);
            }
        }
        scores
    }

    pub fn predict(&self, row: &[f64]) -> usize {
        let scores = self.decision_scores(row);
        let mut best = 0;
        for (k, &s) in scores.iter().enumerate() {
            if s > scores[best] {
                best = k;
            }
        }
        best
    }

    pub fn n_rounds(&self) -> usize {
        self.rounds.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    /// Per-round training log-loss; non-increasing for sane learning rates.
    pub fn train_loss(&self) -> &[f64] {
        &self.train_loss
    }

    /// Split-gain importances summed over every tree, normalized to 1.
    pub fn feature_importances(&self) -> Vec<f64> {
        let mut raw = vec![0.0; self.n_features];
        for round in &self.rounds {
            for tree in round {
                for (slot, v) in raw.iter_mut().zip(&tree.importances_raw) {
                    *slot += v;
                }
            }
        }
        crate::normalize_importances(&raw)
    }
}

fn softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores.iter().map(|&s| (s - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.iter().map(|&e| e / sum).collect()
}

fn mean_log_loss(scores: &[Vec<f64>], labels: &[usize]) -> f64 {
    let total: f64 = scores
        .iter()
        .zip(labels)
        .map(|(s, &y)| -softmax(s)[y].max(1e-15).ln())
        .sum();
    total / labels.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_blobs() -> (Vec<Vec<f64>>, Vec<usize>) {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..20 {
            let t = i as f64 / 20.0;
            rows.push(vec![t, t * 0.5]);
            labels.push(0);
            rows.push(vec![t + 5.0, t * 0.5 + 5.0]);
            labels.push(1);
        }
        (rows, labels)
    }

    #[test]
    fn learns_separable_data() {
        let (rows, labels) = two_blobs();
        let params = GbtParams {
            rounds: 20,
            ..GbtParams::default()
        };
        let model = GradientBoost::fit(&rows, &labels, 2, &params).unwrap();
        for (row, &want) in rows.iter().zip(&labels) {
            assert_eq!(model.predict(row), want);
        }
    }

    #[test]
    fn loss_non_increasing() {
        let (rows, labels) = two_blobs();
        let params = GbtParams {
            rounds: 30,
            ..GbtParams::default()
        };
        let model = GradientBoost::fit(&rows, &labels, 2, &params).unwrap();
        let loss = model.train_loss();
        assert_eq!(loss.len(), 30);
        for w in loss.windows(2) {
            assert!(
                w[1] <= w[0] + 1e-12,
                "loss increased: {} -> {}",
                w[0],
                w[1]
            );
        }
    }

    #[test]
    fn zero_learning_rate_rejected() {
        let (rows, labels) = two_blobs();
        let params = GbtParams {
            learning_rate: 0.0,
            ..GbtParams::default()
        };
        let err = GradientBoost::fit(&rows, &labels, 2, &params).unwrap_err();
        assert!(matches!(
            err,
            TrainError::InvalidParam {
                name: "learning_rate",
                ..
            }
        ));
    }

    #[test]
    fn deterministic_given_params() {
        let (rows, labels) = two_blobs();
        let params = GbtParams {
            rounds: 10,
            ..GbtParams::default()
        };
        let a = GradientBoost::fit(&rows, &labels, 2, &params).unwrap();
        let b = GradientBoost::fit(&rows, &labels, 2, &params).unwrap();
        assert_eq!(a.train_loss(), b.train_loss());
        for row in &rows {
            assert_eq!(a.decision_scores(row), b.decision_scores(row));
        }
    }

    #[test]
    fn serde_round_trip_preserves_predictions() {
        let (rows, labels) = two_blobs();
        let params = GbtParams {
            rounds: 5,
            ..GbtParams::default()
        };
        let model = GradientBoost::fit(&rows, &labels, 2, &params).unwrap();
        let json = serde_json::to_string(&model).unwrap();
        let back: GradientBoost = serde_json::from_str(&json).unwrap();
        for row in &rows {
            assert_eq!(model.predict(row), back.predict(row));
        }
    }
}
