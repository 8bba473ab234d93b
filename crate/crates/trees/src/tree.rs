//! CART-style trees: a Gini classification tree and the g/h regression
//! tree used as the boosting base learner.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{validate_dataset, TrainError};

/// Parameters for a single classification tree.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeParams {
    pub max_depth: usize,
    /// Minimum sample count in each child of a split.
    pub min_leaf: usize,
    /// Features examined per split; `None` examines all of them.
    pub features_per_split: Option<usize>,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self {
            max_depth: 12,
            min_leaf: 1,
            features_per_split: None,
        }
    }
}

impl TreeParams {
    pub(crate) fn validate(&self, n_features: usize) -> Result<(), TrainError> {
        if self.max_depth == 0 {
            return Err(TrainError::InvalidParam {
                name: "max_depth",
                reason: "must be at least 1".into(),
            });
        }
        if self.min_leaf == 0 {
            return Err(TrainError::InvalidParam {
                name: "min_leaf",
                reason: "must be at least 1".into(),
            });
        }
        if let Some(k) = self.features_per_split {
            if k == 0 || k > n_features {
                return Err(TrainError::InvalidParam {
                    name: "features_per_split",
                    reason: format!("must be in 1..={n_features}"),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
enum Node {
    Leaf {
        class: usize,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// A fitted classification tree. Prediction walks `value <= threshold ?
/// left : right`; leaves carry the majority class of their training rows
/// (ties resolve to the lowest class index).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecisionTree {
    nodes: Vec<Node>,
    n_features: usize,
    n_classes: usize,
    /// Unnormalized Gini decrease per feature, summed over splits.
    importances_raw: Vec<f64>,
}

impl DecisionTree {
    /// Fits a tree on the full dataset with no row sampling. The RNG only
    /// drives per-split feature sampling; with `features_per_split: None`
    /// training is fully deterministic.
    pub fn fit<R: Rng>(
        rows: &[Vec<f64>],
        labels: &[usize],
        n_classes: usize,
        params: &TreeParams,
        rng: &mut R,
    ) -> Result<Self, TrainError> {
        let width = validate_dataset(rows, labels, n_classes)?;
        params.validate(width)?;
        let indices: Vec<usize> = (0..rows.len()).collect();
        Ok(Self::fit_on_indices(
            rows, labels, n_classes, &indices, params, rng,
        ))
    }

    /// Fits on a preselected multiset of row indices (bootstrap samples).
    /// Validation is the caller's responsibility.
    pub(crate) fn fit_on_indices<R: Rng>(
        rows: &[Vec<f64>],
        labels: &[usize],
        n_classes: usize,
        indices: &[usize],
        params: &TreeParams,
        rng: &mut R,
    ) -> Self {
        let n_features = rows[0].len();
        let mut builder = TreeBuilder {
            rows,
            labels,
            n_classes,
            params,
            nodes: Vec::new(),
            importances_raw: vec![0.0; n_features],
        };
        let mut idx = indices.to_vec();
        builder.grow(&mut idx, 1, rng);
        DecisionTree {
            nodes: builder.nodes,
            n_features,
            n_classes,
            importances_raw: builder.importances_raw,
        }
    }

    pub fn predict(&self, row: &[f64]) -> usize {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { class } => return *class,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if row[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Normalized Gini-decrease importances; non-negative, sum to 1.
    pub fn feature_importances(&self) -> Vec<f64> {
        crate::normalize_importances(&self.importances_raw)
    }

    pub(crate) fn importances_raw(&self) -> &[f64] {
        &self.importances_raw
    }
}

struct TreeBuilder<'a, 'p> {
    rows: &'a [Vec<f64>],
    labels: &'a [usize],
    n_classes: usize,
    params: &'p TreeParams,
    nodes: Vec<Node>,
    importances_raw: Vec<f64>,
}

impl TreeBuilder<'_, '_> {
    /// Grows the subtree over `indices`, returning its root node id.
    fn grow<R: Rng>(&mut self, indices: &mut [usize], depth: usize, rng: &mut R) -> usize {
        let counts = self.class_counts(indices);
        let majority = argmax_count(&counts);
        let node_gini = gini(&counts, indices.len());

        let can_split = depth <= self.params.max_depth
            && indices.len() >= 2 * self.params.min_leaf
            && node_gini > 0.0;
        let best = if can_split {
            self.best_split(indices, &counts, node_gini, rng)
        } else {
            None
        };

        let Some(split) = best else {
            let id = self.nodes.len();
            self.nodes.push(Node::Leaf { class: majority });
            return id;
        };

        self.importances_raw[split.feature] += split.gain;
        // Partition in place; stable order within sides keeps growth
        // deterministic.
        let mid = partition_stable(indices, |i| {
            self.rows[i][split.feature] <= split.threshold
        });
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf { class: majority }); // placeholder
        let (left_idx, right_idx) = indices.split_at_mut(mid);
        let left = self.grow(left_idx, depth + 1, rng);
        let right = self.grow(right_idx, depth + 1, rng);
        self.nodes[id] = Node::Split {
            feature: split.feature,
            threshold: split.threshold,
            left,
            right,
        };
        id
    }

    fn class_counts(&self, indices: &[usize]) -> Vec<usize> {
        let mut counts = vec![0usize; self.n_classes];
        for &i in indices {
            counts[self.labels[i]] += 1;
        }
        counts
    }

    fn best_split<R: Rng>(
        &self,
        indices: &[usize],
        counts: &[usize],
        node_gini: f64,
        rng: &mut R,
    ) -> Option<BestSplit> {
        let n = indices.len();
        let features = sample_features(
            self.rows[0].len(),
            self.params.features_per_split,
            rng,
        );
        let mut best: Option<BestSplit> = None;

        let mut pairs: Vec<(f64, usize)> = Vec::with_capacity(n);
        for &feature in &features {
            pairs.clear();
            pairs.extend(indices.iter().map(|&i| (self.rows[i][feature], self.labels[i])));
            pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

            let mut left = vec![0usize; self.n_classes];
            for k in 0..n - 1 {
                left[pairs[k].1] += 1;
                let nl = k + 1;
                if pairs[k].0 == pairs[k + 1].0 {
                    continue; // no boundary between equal values
                }
                let nr = n - nl;
                if nl < self.params.min_leaf || nr < self.params.min_leaf {
                    continue;
                }
                let right: Vec<usize> =
                    counts.iter().zip(&left).map(|(&c, &l)| c - l).collect();
                let gain = n as f64 * node_gini
                    - nl as f64 * gini(&left, nl)
                    - nr as f64 * gini(&right, nr);
                if gain <= 0.0 {
                    continue;
                }
                if best.as_ref().is_none_or(|b| gain > b.gain) {
                    best = Some(BestSplit {
                        feature,
                        threshold: midpoint(pairs[k].0, pairs[k + 1].0),
                        gain,
                    });
                }
            }
        }
        best
    }
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    gain: f64,
}

/// Draws the per-split candidate feature set, sorted so that tie-breaking
/// by iteration order is independent of sampling order.
fn sample_features<R: Rng>(n_features: usize, k: Option<usize>, rng: &mut R) -> Vec<usize> {
    match k {
        None => (0..n_features).collect(),
        Some(k) if k >= n_features => (0..n_features).collect(),
        Some(k) => {
            let mut all: Vec<usize> = (0..n_features).collect();
            for i in 0..k {
                let j = rng.gen_range(i..n_features);
                all.swap(i, j);
            }
            let mut chosen = all[..k].to_vec();
            chosen.sort_unstable();
            chosen
        }
    }
}

fn gini(counts: &[usize], n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    1.0 - counts
        .iter()
        .map(|&c| {
            let p = c as f64 / n;
            p * p
        })
        .sum::<f64>()
}

fn argmax_count(counts: &[usize]) -> usize {
    let mut best = 0;
    for (c, &v) in counts.iter().enumerate() {
        if v > counts[best] {
            best = c;
        }
    }
    best
}

/// Midpoint threshold that always sends `lo` left and `hi` right under
/// `value <= threshold`, even for adjacent floats.
fn midpoint(lo: f64, hi: f64) -> f64 {
    let mid = lo + (hi - lo) / 2.0;
    if mid < hi {
        mid
    } else {
        lo
    }
}

/// Stable in-place partition; returns the number of elements satisfying
/// the predicate.
fn partition_stable<F: Fn(usize) -> bool>(indices: &mut [usize], pred: F) -> usize {
    let mut left: Vec<usize> = Vec::with_capacity(indices.len());
    let mut right: Vec<usize> = Vec::new();
    for &i in indices.iter() {
        if pred(i) {
            left.push(i);
        } else {
            right.push(i);
        }
    }
    let mid = left.len();
    indices[..mid].copy_from_slice(&left);
    indices[mid..].copy_from_slice(&right);
    mid
}

// ---------------------------------------------------------------------------
// Regression tree on gradient/hessian statistics (boosting base learner).
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
enum RegNode {
    Leaf {
        value: f64,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// Regression tree fitted to per-row gradients `g` and hessians `h`.
/// Leaves carry the Newton step `-G / (H + lambda)`; split gain is the
/// usual `G^2/(H+lambda)` reduction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct GradientTree {
    nodes: Vec<RegNode>,
    pub(crate) importances_raw: Vec<f64>,
}

pub(crate) struct GradParams {
    pub max_depth: usize,
    pub min_leaf: usize,
    pub lambda: f64,
}

impl GradientTree {
    pub(crate) fn fit(
        rows: &[Vec<f64>],
        grad: &[f64],
        hess: &[f64],
        params: &GradParams,
    ) -> Self {
        let n_features = rows[0].len();
        let mut builder = GradBuilder {
            rows,
            grad,
            hess,
            params,
            nodes: Vec::new(),
            importances_raw: vec![0.0; n_features],
        };
        let mut indices: Vec<usize> = (0..rows.len()).collect();
        builder.grow(&mut indices, 1);
        GradientTree {
            nodes: builder.nodes,
            importances_raw: builder.importances_raw,
        }
    }

    pub(crate) fn predict(&self, row: &[f64]) -> f64 {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                RegNode::Leaf { value } => return *value,
                RegNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if row[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }
}

struct GradBuilder<'a, 'p> {
    rows: &'a [Vec<f64>],
    grad: &'a [f64],
    hess: &'a [f64],
    params: &'p GradParams,
    nodes: Vec<RegNode>,
    importances_raw: Vec<f64>,
}

impl GradBuilder<'_, '_> {
    fn grow(&mut self, indices: &mut [usize], depth: usize) -> usize {
        let g: f64 = indices.iter().map(|&i| self.grad[i]).sum();
        let h: f64 = indices.iter().map(|&i| self.hess[i]).sum();
        let leaf_value = -g / (h + self.params.lambda);
        let parent_score = g * g / (h + self.params.lambda);

        let best = if depth <= self.params.max_depth
            && indices.len() >= 2 * self.params.min_leaf
        {
            self.best_split(indices, parent_score)
        } else {
            None
        };

        let Some(split) = best else {
            let id = self.nodes.len();
            self.nodes.push(RegNode::Leaf { value: leaf_value });
            return id;
        };

        self.importances_raw[split.feature] += split.gain;
        let mid = partition_stable(indices, |i| {
            self.rows[i][split.feature] <= split.threshold
        });
        let id = self.nodes.len();
        self.nodes.push(RegNode::Leaf { value: leaf_value });
        let (left_idx, right_idx) = indices.split_at_mut(mid);
        let left = self.grow(left_idx, depth + 1);
        let right = self.grow(right_idx, depth + 1);
        self.nodes[id] = RegNode::Split {
            feature: split.feature,
            threshold: split.threshold,
            left,
            right,
        };
        id
    }

    fn best_split(&self, indices: &[usize], parent_score: f64) -> Option<BestSplit> {
        let n = indices.len();
        let lambda = self.params.lambda;
        let mut best: Option<BestSplit> = None;
        let mut triples: Vec<(f64, f64, f64)> = Vec::with_capacity(n);

        let total_g: f64 = indices.iter().map(|&i| self.grad[i]).sum();
        let total_h: f64 = indices.iter().map(|&i| self.hess[i]).sum();

        for feature in 0..self.rows[0].len() {
            triples.clear();
            triples.extend(
                indices
                    .iter()
                    .map(|&i| (self.rows[i][feature], self.grad[i], self.hess[i])),
            );
            triples.sort_by(|a, b| a.0.total_cmp(&b.0));

            let mut gl = 0.0;
            let mut hl = 0.0;
            for k in 0..n - 1 {
                gl += triples[k].1;
                hl += triples[k].2;
                if triples[k].0 == triples[k + 1].0 {
                    continue;
                }
                let nl = k + 1;
                let nr = n - nl;
                if nl < self.params.min_leaf || nr < self.params.min_leaf {
                    continue;
                }
                let gr = total_g - gl;
                let hr = total_h - hl;
                let gain =
                    gl * gl / (hl + lambda) + gr * gr / (hr + lambda) - parent_score;
                if gain <= 1e-12 {
                    continue;
                }
                if best.as_ref().is_none_or(|b| gain > b.gain) {
                    best = Some(BestSplit {
                        feature,
                        threshold: midpoint(triples[k].0, triples[k + 1].0),
                        gain,
                    });
                }
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn xor_like() -> (Vec<Vec<f64>>, Vec<usize>) {
        // Two clusters per class, not linearly separable on either axis.
        let rows = vec![
            vec![0.0, 0.0],
            vec![0.1, 0.2],
            vec![1.0, 1.0],
            vec![0.9, 1.1],
            vec![0.0, 1.0],
            vec![0.1, 0.9],
            vec![1.0, 0.0],
            vec![1.1, 0.1],
        ];
        let labels = vec![0, 0, 0, 0, 1, 1, 1, 1];
        (rows, labels)
    }

    #[test]
    fn fits_xor_exactly() {
        let (rows, labels) = xor_like();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let tree =
            DecisionTree::fit(&rows, &labels, 2, &TreeParams::default(), &mut rng).unwrap();
        for (row, &want) in rows.iter().zip(&labels) {
            assert_eq!(tree.predict(row), want);
        }
    }

    #[test]
    fn importances_sum_to_one() {
        let (rows, labels) = xor_like();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let tree =
            DecisionTree::fit(&rows, &labels, 2, &TreeParams::default(), &mut rng).unwrap();
        let imp = tree.feature_importances();
        assert!(imp.iter().all(|&v| v >= 0.0));
        assert!((imp.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_class_rejected() {
        let rows = vec![vec![1.0], vec![2.0]];
        let labels = vec![1, 1];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let err = DecisionTree::fit(&rows, &labels, 2, &TreeParams::default(), &mut rng)
            .unwrap_err();
        assert!(matches!(err, TrainError::SingleClass));
    }

    #[test]
    fn ragged_rows_rejected() {
        let rows = vec![vec![1.0, 2.0], vec![2.0]];
        let labels = vec![0, 1];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let err = DecisionTree::fit(&rows, &labels, 2, &TreeParams::default(), &mut rng)
            .unwrap_err();
        assert!(matches!(err, TrainError::RaggedRows { row: 1, .. }));
    }

    #[test]
    fn min_leaf_respected() {
        let (rows, labels) = xor_like();
        let params = TreeParams {
            min_leaf: 5, // 8 rows cannot split into two sides of >= 5
            ..TreeParams::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let tree = DecisionTree::fit(&rows, &labels, 2, &params, &mut rng).unwrap();
        assert_eq!(tree.n_nodes(), 1);
    }

    #[test]
    fn midpoint_separates_adjacent_floats() {
        let lo = 1.0_f64;
        let hi = lo.next_up();
        let thr = midpoint(lo, hi);
        assert!(lo <= thr);
        assert!(hi > thr);
    }

    #[test]
    fn gradient_tree_newton_leaf() {
        // Single leaf: value must be -G/(H+lambda).
        let rows = vec![vec![0.0], vec![0.0]];
        let grad = vec![0.4, 0.6];
        let hess = vec![0.24, 0.24];
        let tree = GradientTree::fit(
            &rows,
            &grad,
            &hess,
            &GradParams {
                max_depth: 3,
                min_leaf: 1,
                lambda: 1.0,
            },
        );
        let want = -(0.4 + 0.6) / (0.24 + 0.24 + 1.0);
        assert!((tree.predict(&[0.0]) - want).abs() < 1e-12);
    }
}
