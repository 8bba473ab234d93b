//! Random forest: bootstrap-bagged Gini trees with per-split feature
//! sampling and majority-vote prediction.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::tree::{DecisionTree, TreeParams};
use crate::{validate_dataset, TrainError};

/// How many candidate features each split examines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FeatureSubset {
    /// `floor(sqrt(d))`, the usual forest default.
    Sqrt,
    /// All features (turns bagging into plain bootstrap aggregation).
    All,
    /// A fixed count, clamped to `1..=d`.
    Count(usize),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RfParams {
    pub trees: usize,
    pub max_depth: usize,
    pub min_leaf: usize,
    pub features_per_split: FeatureSubset,
    /// When false every tree sees the full dataset; a 1-tree forest then
    /// reproduces its decision tree exactly.
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for RfParams {
    fn default() -> Self {
        Self {
            trees: 200,
            max_depth: 12,
            min_leaf: 1,
            features_per_split: FeatureSubset::Sqrt,
            bootstrap: true,
            seed: 0,
        }
    }
}

/// A fitted forest. Votes are tallied per class; ties resolve to the
/// lowest class index, matching the single-tree convention.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RandomForest {
    trees: Vec<DecisionTree>,
    n_features: usize,
    n_classes: usize,
}

impl RandomForest {
    /// Trains `params.trees` trees in parallel. Tree `t` draws all of its
    /// randomness from a ChaCha stream keyed by `(seed, t)`, so the model
    /// is identical for any rayon worker count.
    pub fn fit(
        rows: &[Vec<f64>],
        labels: &[usize],
        n_classes: usize,
        params: &RfParams,
    ) -> Result<Self, TrainError> {
        let width = validate_dataset(rows, labels, n_classes)?;
        if params.trees == 0 {
            return Err(TrainError::InvalidParam {
                name: "trees",
                reason: "must be at least 1".into(),
            });
        }
        let tree_params = TreeParams {
            max_depth: params.max_depth,
            min_leaf: params.min_leaf,
            features_per_split: match params.features_per_split {
                FeatureSubset::Sqrt => Some((width as f64).sqrt().floor().max(1.0) as usize),
                FeatureSubset::All => None,
                FeatureSubset::Count(k) => Some(k.clamp(1, width)),
            },
        };
        tree_params.validate(width)?;

        let n = rows.len();
        let trees: Vec<DecisionTree> = (0..params.trees)
            .into_par_iter()
            .map(|t| {
                let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
                rng.set_stream(t as u64 + 1);
                let indices: Vec<usize> = if params.bootstrap {
                    (0..n).map(|_| rng.gen_range(0..n)).collect()
                } else {
                    (0..n).collect()
                };
                DecisionTree::fit_on_indices(
                    rows,
                    labels,
                    n_classes,
                    &indices,
                    &tree_params,
                    &mut rng,
                )
            })
            .collect();

        Ok(Self {
            trees,
            n_features: width,
            n_classes,
        })
    }

    pub fn predict(&self, row: &[f64]) -> usize {
        let mut votes = vec![0usize; self.n_classes];
        for tree in &self.trees {
            votes[tree.predict(row)] += 1;
        }
        let mut best = 0;
        for (c, &v) in votes.iter().enumerate() {
            if v > votes[best] {
                best = c;
            }
        }
        best
    }

    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    /// Gini-decrease importances summed over all trees, normalized to 1.
    pub fn feature_importances(&self) -> Vec<f64> {
        let mut raw = vec![0.0; self.n_features];
        for tree in &self.trees {
            for (slot, v) in raw.iter_mut().zip(tree.importances_raw()) {
                *slot += v;
            }
        }
        crate::normalize_importances(&raw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn blobs() -> (Vec<Vec<f64>>, Vec<usize>) {
        // Three well-separated 2-D clusters, 30 rows each, deterministic.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let centers = [(0.0, 0.0), (10.0, 0.0), (5.0, 10.0)];
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (c, &(cx, cy)) in centers.iter().enumerate() {
            for _ in 0..30 {
                rows.push(vec![
                    cx + rng.gen_range(-1.0..1.0),
                    cy + rng.gen_range(-1.0..1.0),
                ]);
                labels.push(c);
            }
        }
        (rows, labels)
    }

    #[test]
    fn separable_blobs_memorized() {
        let (rows, labels) = blobs();
        let params = RfParams {
            trees: 25,
            seed: 3,
            ..RfParams::default()
        };
        let forest = RandomForest::fit(&rows, &labels, 3, &params).unwrap();
        let correct = rows
            .iter()
            .zip(&labels)
            .filter(|(r, &l)| forest.predict(r) == l)
            .count();
        assert!(correct as f64 / rows.len() as f64 >= 0.99);
    }

    #[test]
    fn same_seed_same_predictions() {
        let (rows, labels) = blobs();
        let params = RfParams {
            trees: 15,
            seed: 11,
            ..RfParams::default()
        };
        let a = RandomForest::fit(&rows, &labels, 3, &params).unwrap();
        let b = RandomForest::fit(&rows, &labels, 3, &params).unwrap();
        for row in &rows {
            assert_eq!(a.predict(row), b.predict(row));
        }
    }

    #[test]
    fn single_tree_no_bootstrap_equals_decision_tree() {
        let (rows, labels) = blobs();
        let params = RfParams {
            trees: 1,
            bootstrap: false,
            features_per_split: FeatureSubset::All,
            seed: 5,
            ..RfParams::default()
        };
        let forest = RandomForest::fit(&rows, &labels, 3, &params).unwrap();

        let tree_params = crate::tree::TreeParams {
            max_depth: params.max_depth,
            min_leaf: params.min_leaf,
            features_per_split: None,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        rng.set_stream(1);
        let tree = DecisionTree::fit(&rows, &labels, 3, &tree_params, &mut rng).unwrap();

        for row in &rows {
            assert_eq!(forest.predict(row), tree.predict(row));
        }
    }

    #[test]
    fn zero_trees_rejected() {
        let (rows, labels) = blobs();
        let params = RfParams {
            trees: 0,
            ..RfParams::default()
        };
        let err = RandomForest::fit(&rows, &labels, 3, &params).unwrap_err();
        assert!(matches!(err, TrainError::InvalidParam { name: "trees", .. }));
    }

    #[test]
    fn importances_normalized() {
        let (rows, labels) = blobs();
        let forest = RandomForest::fit(
            &rows,
            &labels,
            3,
            &RfParams {
                trees: 10,
                seed: 2,
                ..RfParams::default()
            },
        )
        .unwrap();
        let imp = forest.feature_importances();
        assert_eq!(imp.len(), 2);
        assert!(imp.iter().all(|&v| v >= 0.0));
        assert!((imp.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
