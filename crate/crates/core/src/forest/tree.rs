//! Single random-tree induction over numeric features.

use rand::Rng;
use serde::{Deserialize, Serialize};

/// Split impurity measure. Information gain over entropy is the default;
/// Gini is selectable by flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitCriterion {
    #[default]
    Entropy,
    Gini,
}

impl SplitCriterion {
    fn impurity(self, counts: &[u32], total: f64) -> f64 {
        match self {
            SplitCriterion::Entropy => {
                let mut h = 0.0;
                for &c in counts {
                    if c > 0 {
                        let p = c as f64 / total;
                        h -= p * p.log2();
                    }
                }
                h
            }
            SplitCriterion::Gini => {
                let mut g = 1.0;
                for &c in counts {
                    let p = c as f64 / total;
                    g -= p * p;
                }
                g
            }
        }
    }
}

/// A decision tree node: an internal numeric-threshold test or a leaf
/// storing the class counts of the training instances that reached it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeNode {
    Leaf {
        counts: Vec<u32>,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

impl TreeNode {
    /// Walk a row to its unique leaf. Rows with a feature value below the
    /// threshold go left.
    pub fn leaf_for(&self, row: &[f64]) -> &TreeNode {
        match self {
            TreeNode::Leaf { .. } => self,
            TreeNode::Split {
                feature,
                threshold,
                left,
                right,
            } => {
                if row[*feature] < *threshold {
                    left.leaf_for(row)
                } else {
                    right.leaf_for(row)
                }
            }
        }
    }

    pub fn leaf_counts(&self, row: &[f64]) -> &[u32] {
        match self.leaf_for(row) {
            TreeNode::Leaf { counts } => counts,
            TreeNode::Split { .. } => unreachable!("leaf_for returns leaves"),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Split { left, right, .. } => 1 + left.node_count() + right.node_count(),
        }
    }

    pub fn max_feature_index(&self) -> Option<usize> {
        match self {
            TreeNode::Leaf { .. } => None,
            TreeNode::Split {
                feature,
                left,
                right,
                ..
            } => [
                Some(*feature),
                left.max_feature_index(),
                right.max_feature_index(),
            ]
            .into_iter()
            .flatten()
            .max(),
        }
    }
}

pub struct TreeBuilder<'a> {
    pub data: &'a [Vec<f64>],
    pub labels: &'a [usize],
    pub n_classes: usize,
    pub k_features: usize,
    pub min_leaf: usize,
    pub criterion: SplitCriterion,
}

struct BestSplit {
    gain: f64,
    feature: usize,
    threshold: f64,
}

impl TreeBuilder<'_> {
    fn n_features(&self) -> usize {
        self.data.first().map_or(0, Vec::len)
    }

    fn class_counts(&self, indices: &[usize]) -> Vec<u32> {
        let mut counts = vec![0u32; self.n_classes];
        for &i in indices {
            counts[self.labels[i]] += 1;
        }
        counts
    }

    /// Grow a tree from the given bootstrap indices. Recursion stops at
    /// purity, below 2x`min_leaf` instances, or when no sampled feature
    /// offers a positive-gain split.
    pub fn build(&self, indices: Vec<usize>, rng: &mut impl Rng) -> TreeNode {
        let counts = self.class_counts(&indices);
        let n = indices.len();
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        if pure || n < 2 * self.min_leaf {
            return TreeNode::Leaf { counts };
        }

        match self.find_split(&indices, &counts, rng) {
            Some(best) => {
                let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = indices
                    .into_iter()
                    .partition(|&i| self.data[i][best.feature] < best.threshold);
                TreeNode::Split {
                    feature: best.feature,
                    threshold: best.threshold,
                    left: Box::new(self.build(left_idx, rng)),
                    right: Box::new(self.build(right_idx, rng)),
                }
            }
            None => TreeNode::Leaf { counts },
        }
    }

    /// Draw features without replacement in random order and keep the best
    /// split seen. At least `k_features` are examined; the draw continues
    /// past that budget until some feature yields positive gain (or the
    /// features run out), mirroring the reference toolkit's random tree.
    fn find_split(
        &self,
        indices: &[usize],
        parent_counts: &[u32],
        rng: &mut impl Rng,
    ) -> Option<BestSplit> {
        let d = self.n_features();
        let mut window: Vec<usize> = (0..d).collect();
        let mut remaining = d;
        let mut budget = self.k_features.min(d);
        let mut best: Option<BestSplit> = None;

        let n = indices.len() as f64;
        let parent_impurity = self.criterion.impurity(parent_counts, n);
        let mut column: Vec<(f64, usize)> = Vec::with_capacity(indices.len());

        while remaining > 0 && (budget > 0 || best.is_none()) {
            let chosen = rng.gen_range(0..remaining);
            let feature = window[chosen];
            window.swap(chosen, remaining - 1);
            remaining -= 1;
            budget = budget.saturating_sub(1);
            self.scan_feature(
                indices,
                parent_counts,
                parent_impurity,
                feature,
                &mut column,
                &mut best,
            );
        }
        best
    }

    /// Exhaustive threshold scan of one feature. Candidate thresholds sit
    /// at midpoints between consecutive distinct sorted values; both sides
    /// must keep at least `min_leaf` instances.
    #[allow(clippy::too_many_arguments)]
    fn scan_feature(
        &self,
        indices: &[usize],
        parent_counts: &[u32],
        parent_impurity: f64,
        feature: usize,
        column: &mut Vec<(f64, usize)>,
        best: &mut Option<BestSplit>,
    ) {
        let n = indices.len() as f64;
        {
            column.clear();
            column.extend(
                indices
                    .iter()
                    .map(|&i| (self.data[i][feature], self.labels[i])),
            );
            column.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite feature values"));

            let mut left_counts = vec![0u32; self.n_classes];
            let mut left_n = 0usize;
            for w in 0..column.len() - 1 {
                left_counts[column[w].1] += 1;
                left_n += 1;
                let (value, next_value) = (column[w].0, column[w + 1].0);
                if value == next_value {
                    continue;
                }
                let right_n = indices.len() - left_n;
                if left_n < self.min_leaf || right_n < self.min_leaf {
                    continue;
                }
                let mid = (value + next_value) / 2.0;
                // Guard against the midpoint rounding onto the lower value,
                // which would send both sides right.
                let threshold = if mid > value { mid } else { next_value };

                let mut right_counts = parent_counts.to_vec();
                for (r, l) in right_counts.iter_mut().zip(&left_counts) {
                    *r -= l;
                }
                let gain = parent_impurity
                    - (left_n as f64 / n) * self.criterion.impurity(&left_counts, left_n as f64)
                    - (right_n as f64 / n)
                        * self.criterion.impurity(&right_counts, right_n as f64);
                let better = match best {
                    Some(b) => gain > b.gain,
                    None => gain > 0.0,
                };
                if better {
                    *best = Some(BestSplit {
                        gain,
                        feature,
                        threshold,
                    });
                }
            }
        }
    }
}
