//! Bagged random-forest training and prediction.

mod io;
mod tree;

pub use io::{load_model, save_model, MODEL_VERSION};
pub use tree::{SplitCriterion, TreeNode};

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{Dataset, FeatureVector, ImputationStats, SchemaOptions};

/// Training configuration. The published run used 100000 trees, one
/// instance per leaf and a minimum variance proportion of 1e-3; the
/// defaults here trade tree count for test speed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub n_trees: usize,
    pub min_leaf: usize,
    /// Parsed and stored for fidelity with the reference toolkit; it only
    /// affects numeric-class trees and is inert for classification.
    pub min_variance_prop: f64,
    /// Feature-subset size per split; 0 selects floor(log2(d)) + 1.
    pub k_features: usize,
    pub seed: u64,
    pub criterion: SplitCriterion,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig {
            n_trees: 1000,
            min_leaf: 1,
            min_variance_prop: 1e-3,
            k_features: 0,
            seed: 42,
            criterion: SplitCriterion::Entropy,
        }
    }
}

impl ForestConfig {
    /// The paper's setup: 100000 trees, M=1.
    pub fn paper() -> Self {
        ForestConfig {
            n_trees: 100_000,
            ..Default::default()
        }
    }

    pub fn resolved_k(&self, n_features: usize) -> usize {
        if self.k_features == 0 {
            auto_k(n_features)
        } else {
            self.k_features.min(n_features)
        }
    }
}

/// Feature-subset size when unset: floor(log2(d)) + 1.
pub fn auto_k(n_features: usize) -> usize {
    if n_features == 0 {
        0
    } else {
        n_features.ilog2() as usize + 1
    }
}

/// SplitMix64; derives one independent stream per tree from the master
/// seed so parallel training stays reproducible.
pub fn mix_seed(master: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Training metadata carried for provenance.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ModelMetadata {
    /// RFC 3339 timestamp; `None` keeps training a pure function of its
    /// inputs (a flag opts in to wall-clock stamping).
    pub trained_at: Option<String>,
    pub corpus_digest: String,
}

/// A trained ensemble with everything needed to reproduce and apply it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub schema: Vec<String>,
    pub schema_options: SchemaOptions,
    pub classes: Vec<String>,
    pub config: ForestConfig,
    pub imputation_stats: ImputationStats,
    pub lexicon_digests: BTreeMap<String, String>,
    pub metadata: ModelMetadata,
    pub trees: Vec<TreeNode>,
}

/// Train with the default model-input schema.
pub fn train(dataset: &Dataset, config: &ForestConfig) -> Result<ForestModel> {
    train_with_options(dataset, config, SchemaOptions::default())
}

/// Train a bagged forest. Rows are canonicalized by document id before
/// any sampling, so the model is independent of dataset row order.
pub fn train_with_options(
    dataset: &Dataset,
    config: &ForestConfig,
    options: SchemaOptions,
) -> Result<ForestModel> {
    if dataset.rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let counts = dataset.class_counts();
    if counts.iter().filter(|&&c| c > 0).count() < 2 {
        return Err(Error::SingleClass);
    }

    let mut order: Vec<usize> = (0..dataset.rows.len()).collect();
    order.sort_by(|&a, &b| {
        dataset.rows[a]
            .doc_id
            .cmp(&dataset.rows[b].doc_id)
            .then(a.cmp(&b))
    });

    let schema = crate::features::schema(options);
    let mut data = Vec::with_capacity(order.len());
    let mut labels = Vec::with_capacity(order.len());
    for &i in &order {
        data.push(dataset.rows[i].row_for(&schema)?);
        labels.push(dataset.rows[i].label.index());
    }

    // Stats taken over canonical row order so float summation cannot
    // depend on how the dataset happened to be shuffled.
    let imputation_stats = if dataset.imputation_stats.is_empty() {
        crate::features::imputation_stats(order.iter().map(|&i| &dataset.rows[i]))?
    } else {
        dataset.imputation_stats.clone()
    };

    let n = data.len();
    let builder = tree::TreeBuilder {
        data: &data,
        labels: &labels,
        n_classes: dataset.label_names.len(),
        k_features: config.resolved_k(schema.len()),
        min_leaf: config.min_leaf,
        criterion: config.criterion,
    };

    let trees: Vec<TreeNode> = (0..config.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(config.seed, t as u64));
            let indices = bootstrap_indices(n, &mut rng);
            builder.build(indices, &mut rng)
        })
        .collect();

    Ok(ForestModel {
        schema,
        schema_options: options,
        classes: dataset.label_names.clone(),
        config: config.clone(),
        imputation_stats,
        lexicon_digests: dataset.lexicon_digests.clone(),
        metadata: ModelMetadata {
            trained_at: None,
            corpus_digest: dataset.corpus_digest.clone(),
        },
        trees,
    })
}

/// A bootstrap sample of size n drawn with replacement.
pub fn bootstrap_indices(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(0..n)).collect()
}

impl ForestModel {
    /// Model-input row for a feature vector, imputing missing AFINN
    /// statistics from the training means stored in the model.
    pub fn input_row(&self, fv: &FeatureVector) -> Result<Vec<f64>> {
        self.schema
            .iter()
            .map(|name| match name.as_str() {
                "afinn_mean" | "afinn_sd" => fv
                    .value(name)
                    .ok()
                    .or_else(|| self.imputation_stats.get(name).copied())
                    .ok_or_else(|| Error::NotImputed {
                        id: fv.doc_id.clone(),
                    }),
                _ => fv.value(name),
            })
            .collect()
    }

    /// Average of the per-tree normalized leaf distributions; class order
    /// follows `self.classes`.
    pub fn predict_proba(&self, fv: &FeatureVector) -> Result<Vec<f64>> {
        let row = self.input_row(fv)?;
        Ok(self.predict_proba_row(&row))
    }

    pub fn predict_proba_row(&self, row: &[f64]) -> Vec<f64> {
        let n_classes = self.classes.len();
        let mut acc = vec![0.0; n_classes];
        for tree in &self.trees {
            let counts = tree.leaf_counts(row);
            let total: u32 = counts.iter().sum();
            if total > 0 {
                for (a, &c) in acc.iter_mut().zip(counts) {
                    *a += c as f64 / total as f64;
                }
            }
        }
        for a in &mut acc {
            *a /= self.trees.len() as f64;
        }
        acc
    }

    /// Highest-probability class; ties break to the lowest class index.
    pub fn predict(&self, fv: &FeatureVector) -> Result<usize> {
        Ok(argmax(&self.predict_proba(fv)?))
    }

    pub fn predict_row(&self, row: &[f64]) -> usize {
        argmax(&self.predict_proba_row(row))
    }
}

/// First index of the maximum value.
pub fn argmax(probabilities: &[f64]) -> usize {
    let mut best = 0;
    for (i, &p) in probabilities.iter().enumerate().skip(1) {
        if p > probabilities[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Label, LabelMapping};

    pub(crate) fn synthetic_row(id: &str, x: f64, label: Label) -> FeatureVector {
        FeatureVector {
            doc_id: id.to_string(),
            label,
            n_words: 10,
            bing_pos_ratio: x,
            bing_neg_ratio: 0.0,
            afinn_mean: Some(x),
            afinn_sd: Some(0.5),
            afinn_missing: false,
            nrc_ratios: [0.0; 10],
            loughran_ratios: [0.0; 4],
        }
    }

    pub(crate) fn one_dim_dataset(n: usize) -> Dataset {
        let rows: Vec<FeatureVector> = (0..n)
            .map(|i| {
                let x = (i as f64 / n as f64) * 4.0 - 2.0;
                let label = if x > 0.0 { Label::Llm } else { Label::Human };
                synthetic_row(&format!("doc{i:04}"), x, label)
            })
            .collect();
        Dataset::new(rows, &LabelMapping::default())
    }

    #[test]
    fn separable_dataset_reaches_perfect_training_accuracy() {
        let ds = one_dim_dataset(20);
        let config = ForestConfig {
            n_trees: 10,
            ..Default::default()
        };
        let model = train(&ds, &config).unwrap();
        let correct = ds
            .rows
            .iter()
            .filter(|r| model.predict(r).unwrap() == r.label.index())
            .count();
        assert_eq!(correct, 20);
    }

    #[test]
    fn same_seed_trains_identical_models() {
        let ds = one_dim_dataset(30);
        let config = ForestConfig {
            n_trees: 25,
            ..Default::default()
        };
        let a = train(&ds, &config).unwrap();
        let b = train(&ds, &config).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn row_order_does_not_change_the_model() {
        let ds = one_dim_dataset(30);
        let mut reversed = ds.clone();
        reversed.rows.reverse();
        let config = ForestConfig {
            n_trees: 15,
            ..Default::default()
        };
        let a = train(&ds, &config).unwrap();
        let b = train(&reversed, &config).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn single_class_rejected() {
        let rows: Vec<FeatureVector> = (0..5)
            .map(|i| synthetic_row(&format!("d{i}"), i as f64, Label::Human))
            .collect();
        let ds = Dataset::new(rows, &LabelMapping::default());
        assert!(matches!(
            train(&ds, &ForestConfig::default()),
            Err(Error::SingleClass)
        ));
    }

    #[test]
    fn empty_dataset_rejected() {
        let ds = Dataset::new(Vec::new(), &LabelMapping::default());
        assert!(matches!(
            train(&ds, &ForestConfig::default()),
            Err(Error::EmptyDataset)
        ));
    }

    #[test]
    fn probabilities_normalize() {
        let ds = one_dim_dataset(40);
        let model = train(
            &ds,
            &ForestConfig {
                n_trees: 50,
                ..Default::default()
            },
        )
        .unwrap();
        for row in &ds.rows {
            let p = model.predict_proba(row).unwrap();
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            assert!(p.iter().all(|&x| x >= 0.0));
        }
    }

    #[test]
    fn single_leaf_forest_normalizes_counts() {
        let model = ForestModel {
            schema: vec!["bing_pos_ratio".into()],
            schema_options: SchemaOptions::default(),
            classes: vec!["A".into(), "B".into()],
            config: ForestConfig::default(),
            imputation_stats: ImputationStats::new(),
            lexicon_digests: BTreeMap::new(),
            metadata: ModelMetadata::default(),
            trees: vec![TreeNode::Leaf {
                counts: vec![3, 1],
            }],
        };
        assert_eq!(model.predict_proba_row(&[0.0]), vec![0.75, 0.25]);
    }

    #[test]
    fn hand_built_forest_averages_leaf_distributions() {
        let leaf = |a: u32, b: u32| TreeNode::Leaf { counts: vec![a, b] };
        let model = ForestModel {
            schema: vec!["bing_pos_ratio".into()],
            schema_options: SchemaOptions::default(),
            classes: vec!["A".into(), "B".into()],
            config: ForestConfig::default(),
            imputation_stats: ImputationStats::new(),
            lexicon_digests: BTreeMap::new(),
            metadata: ModelMetadata::default(),
            trees: vec![leaf(3, 1), leaf(1, 1), leaf(0, 2)],
        };
        // (0.75 + 0.5 + 0.0) / 3 and (0.25 + 0.5 + 1.0) / 3
        let p = model.predict_proba_row(&[0.1]);
        assert!((p[0] - 1.25 / 3.0).abs() < 1e-12);
        assert!((p[1] - 1.75 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn argmax_ties_break_low() {
        assert_eq!(argmax(&[0.75, 0.25]), 0);
        assert_eq!(argmax(&[0.5, 0.5]), 0);
        assert_eq!(argmax(&[0.2, 0.5, 0.3]), 1);
    }

    #[test]
    fn bootstrap_distinct_fraction_near_one_minus_inv_e() {
        let n = 1000;
        let mut total_distinct = 0usize;
        for t in 0..100 {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(7, t));
            let indices = bootstrap_indices(n, &mut rng);
            let distinct: std::collections::HashSet<_> = indices.into_iter().collect();
            total_distinct += distinct.len();
        }
        let fraction = total_distinct as f64 / (100.0 * n as f64);
        assert!(
            (fraction - (1.0 - (-1.0f64).exp())).abs() < 0.03,
            "distinct fraction {fraction}"
        );
    }

    #[test]
    fn auto_k_matches_floor_log2_plus_one() {
        assert_eq!(auto_k(1), 1);
        assert_eq!(auto_k(2), 2);
        assert_eq!(auto_k(17), 5);
        assert_eq!(auto_k(19), 5);
        assert_eq!(auto_k(32), 6);
    }

    #[test]
    fn missing_afinn_imputed_from_model_stats() {
        let ds = one_dim_dataset(20);
        let model = train(
            &ds,
            &ForestConfig {
                n_trees: 5,
                ..Default::default()
            },
        )
        .unwrap();
        let mut fv = synthetic_row("probe", 1.5, Label::Llm);
        fv.afinn_mean = None;
        fv.afinn_sd = None;
        fv.afinn_missing = true;
        let row = model.input_row(&fv).unwrap();
        assert_eq!(row[3], model.imputation_stats["afinn_mean"]);
        assert_eq!(row[4], model.imputation_stats["afinn_sd"]);
    }
}
