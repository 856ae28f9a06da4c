//! Stratified k-fold cross-validation and the metric suite.

pub mod metrics;
pub mod report;

pub use metrics::{
    metrics_from_confusion, prc_area, probabilistic_errors, relative_errors, roc_area,
    ClassMetrics, ConfusionMatrix, ProbabilisticErrors, ThresholdMetrics,
};
pub use report::{ClassReport, EvalReport};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::features::{self, Dataset, SchemaOptions};
use crate::forest::{self, ForestConfig, ForestModel};

/// One train/test index partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Stratified fold assignment: shuffle within class under the seed, then
/// deal instances across folds with a cursor that persists across
/// classes, keeping per-fold class counts within one of proportional.
pub fn stratified_folds(
    labels: &[usize],
    n_classes: usize,
    k: usize,
    seed: u64,
) -> Result<Vec<Fold>> {
    let n = labels.len();
    if k < 2 || k > n {
        return Err(Error::BadFoldCount { k, n });
    }
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for (i, &label) in labels.iter().enumerate() {
        by_class[label].push(i);
    }
    if by_class.iter().filter(|c| !c.is_empty()).count() < 2 {
        return Err(Error::UnstratifiableDataset);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut test_sets: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut cursor = 0usize;
    for class_indices in &mut by_class {
        class_indices.shuffle(&mut rng);
        for &index in class_indices.iter() {
            test_sets[cursor % k].push(index);
            cursor += 1;
        }
    }

    let mut folds = Vec::with_capacity(k);
    for test in &mut test_sets {
        test.sort_unstable();
        let mut in_test = vec![false; n];
        for &i in test.iter() {
            in_test[i] = true;
        }
        let train: Vec<usize> = (0..n).filter(|&i| !in_test[i]).collect();
        folds.push(Fold {
            train,
            test: std::mem::take(test),
        });
    }
    Ok(folds)
}

/// Where imputation means come from during cross-validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ImputationMode {
    /// Means computed from each fold's training split only.
    #[default]
    FoldLocal,
    /// One global pre-imputation pass before folding (`--paper-mode`).
    Global,
}

/// Train a model on the given rows of a dataset. With `impute_locally`
/// the imputation means come from exactly these rows.
pub fn fit_fold(
    dataset: &Dataset,
    train_indices: &[usize],
    config: &ForestConfig,
    options: SchemaOptions,
    impute_locally: bool,
) -> Result<ForestModel> {
    let mut sub = Dataset {
        schema: dataset.schema.clone(),
        rows: train_indices
            .iter()
            .map(|&i| dataset.rows[i].clone())
            .collect(),
        imputation_stats: dataset.imputation_stats.clone(),
        label_names: dataset.label_names.clone(),
        lexicon_digests: dataset.lexicon_digests.clone(),
        corpus_digest: dataset.corpus_digest.clone(),
    };
    if impute_locally {
        sub.imputation_stats.clear();
        sub = features::impute(sub)?;
    }
    forest::train_with_options(&sub, config, options)
}

/// Stratified k-fold cross-validation: per fold, impute from the training
/// split, train, and collect test-split probability vectors; all n pooled
/// predictions then feed one report.
pub fn cross_validate(
    dataset: &Dataset,
    config: &ForestConfig,
    k: usize,
    seed: u64,
    options: SchemaOptions,
    mode: ImputationMode,
) -> Result<EvalReport> {
    let started = std::time::Instant::now();
    let working = match mode {
        ImputationMode::Global => features::impute(dataset.clone())?,
        ImputationMode::FoldLocal => dataset.clone(),
    };
    let labels: Vec<usize> = working.rows.iter().map(|r| r.label.index()).collect();
    let folds = stratified_folds(&labels, working.label_names.len(), k, seed)?;

    let mut probas: Vec<Option<Vec<f64>>> = vec![None; working.len()];
    for (fold_index, fold) in folds.iter().enumerate() {
        let model = fit_fold(
            &working,
            &fold.train,
            config,
            options,
            mode == ImputationMode::FoldLocal,
        )
        .map_err(|e| Error::FoldTraining {
            fold: fold_index,
            source: Box::new(e),
        })?;
        for &i in &fold.test {
            let proba = model
                .predict_proba(&working.rows[i])
                .map_err(|e| Error::FoldTraining {
                    fold: fold_index,
                    source: Box::new(e),
                })?;
            probas[i] = Some(proba);
        }
    }

    let probas: Vec<Vec<f64>> = probas
        .into_iter()
        .map(|p| p.expect("every instance tested exactly once"))
        .collect();
    EvalReport::from_pool(
        &working.label_names,
        &labels,
        &probas,
        started.elapsed().as_secs_f64(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(counts: &[usize]) -> Vec<usize> {
        let mut out = Vec::new();
        for (class, &count) in counts.iter().enumerate() {
            out.extend(std::iter::repeat(class).take(count));
        }
        out
    }

    #[test]
    fn paper_shape_folds_are_balanced() {
        let labels = labels(&[73, 72]);
        let folds = stratified_folds(&labels, 2, 10, 42).unwrap();
        assert_eq!(folds.len(), 10);

        let mut seen = vec![0u32; 145];
        for fold in &folds {
            assert!(fold.test.len() == 14 || fold.test.len() == 15, "{}", fold.test.len());
            let c0 = fold.test.iter().filter(|&&i| labels[i] == 0).count();
            let c1 = fold.test.iter().filter(|&&i| labels[i] == 1).count();
            assert!(c0 == 7 || c0 == 8, "class 0 count {c0}");
            assert!(c1 == 7 || c1 == 8, "class 1 count {c1}");
            for &i in &fold.test {
                seen[i] += 1;
            }
            assert_eq!(fold.train.len() + fold.test.len(), 145);
        }
        assert!(seen.iter().all(|&s| s == 1), "each instance tested once");
    }

    #[test]
    fn leave_one_out_boundary() {
        let labels = labels(&[3, 2]);
        let folds = stratified_folds(&labels, 2, 5, 1).unwrap();
        assert_eq!(folds.len(), 5);
        assert!(folds.iter().all(|f| f.test.len() == 1));
    }

    #[test]
    fn single_class_is_unstratifiable() {
        let labels = labels(&[10]);
        assert!(matches!(
            stratified_folds(&labels, 2, 5, 0),
            Err(Error::UnstratifiableDataset)
        ));
    }

    #[test]
    fn bad_fold_counts_rejected() {
        let labels = labels(&[5, 5]);
        assert!(matches!(
            stratified_folds(&labels, 2, 1, 0),
            Err(Error::BadFoldCount { k: 1, .. })
        ));
        assert!(matches!(
            stratified_folds(&labels, 2, 11, 0),
            Err(Error::BadFoldCount { k: 11, .. })
        ));
    }

    #[test]
    fn folds_are_seed_deterministic() {
        let labels = labels(&[20, 30]);
        let a = stratified_folds(&labels, 2, 5, 9).unwrap();
        let b = stratified_folds(&labels, 2, 5, 9).unwrap();
        assert_eq!(a, b);
        let c = stratified_folds(&labels, 2, 5, 10).unwrap();
        assert_ne!(a, c);
    }
}
