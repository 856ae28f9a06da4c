//! Confusion-matrix metrics, probabilistic error measures and
//! threshold-free ranking areas.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rows are actual classes, columns predicted classes; class order fixed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub classes: Vec<String>,
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn new(classes: Vec<String>) -> Self {
        let c = classes.len();
        ConfusionMatrix {
            classes,
            counts: vec![vec![0; c]; c],
        }
    }

    pub fn from_counts(classes: Vec<String>, counts: Vec<Vec<u64>>) -> Self {
        assert_eq!(classes.len(), counts.len());
        assert!(counts.iter().all(|row| row.len() == classes.len()));
        ConfusionMatrix { classes, counts }
    }

    pub fn record(&mut self, actual: usize, predicted: usize) {
        self.counts[actual][predicted] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.classes.len()).map(|i| self.counts[i][i]).sum()
    }

    pub fn row_sum(&self, i: usize) -> u64 {
        self.counts[i].iter().sum()
    }

    pub fn col_sum(&self, j: usize) -> u64 {
        self.counts.iter().map(|row| row[j]).sum()
    }
}

/// Threshold metrics for one class (one-vs-rest).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub tp_rate: f64,
    pub fp_rate: f64,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    pub mcc: f64,
    /// Set when the class was never predicted and precision was reported
    /// as zero by convention.
    pub precision_defaulted: bool,
}

/// Everything derivable from a confusion matrix alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdMetrics {
    pub accuracy: f64,
    pub kappa: f64,
    pub per_class: Vec<ClassMetrics>,
    pub weighted: ClassMetrics,
}

/// Accuracy, Cohen's kappa and the per-class precision/recall family,
/// with weighted averages by actual-class frequency.
pub fn metrics_from_confusion(confusion: &ConfusionMatrix) -> Result<ThresholdMetrics> {
    let n = confusion.total();
    if n == 0 {
        return Err(Error::UndefinedMetric {
            what: "metrics of an empty confusion matrix".into(),
        });
    }
    let nf = n as f64;
    let c = confusion.classes.len();

    let accuracy = confusion.trace() as f64 / nf;
    let p_e: f64 = (0..c)
        .map(|i| (confusion.row_sum(i) as f64 / nf) * (confusion.col_sum(i) as f64 / nf))
        .sum();
    let kappa = if (1.0 - p_e).abs() < f64::EPSILON {
        return Err(Error::UndefinedMetric {
            what: "kappa with chance agreement of 1".into(),
        });
    } else {
        (accuracy - p_e) / (1.0 - p_e)
    };

    let mut per_class = Vec::with_capacity(c);
    for i in 0..c {
        let tp = confusion.counts[i][i] as f64;
        let fn_ = confusion.row_sum(i) as f64 - tp;
        let fp = confusion.col_sum(i) as f64 - tp;
        let tn = nf - tp - fn_ - fp;

        let recall = if tp + fn_ > 0.0 { tp / (tp + fn_) } else { 0.0 };
        let (precision, precision_defaulted) = if tp + fp > 0.0 {
            (tp / (tp + fp), false)
        } else {
            (0.0, true)
        };
        let fp_rate = if fp + tn > 0.0 { fp / (fp + tn) } else { 0.0 };
        let f_measure = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        let denominator = ((tp + fp) * (tp + fn_) * (tn + fp) * (tn + fn_)).sqrt();
        let mcc = if denominator > 0.0 {
            (tp * tn - fp * fn_) / denominator
        } else {
            0.0
        };
        per_class.push(ClassMetrics {
            tp_rate: recall,
            fp_rate,
            precision,
            recall,
            f_measure,
            mcc,
            precision_defaulted,
        });
    }

    let weighted = weighted_average(confusion, &per_class);
    Ok(ThresholdMetrics {
        accuracy,
        kappa,
        per_class,
        weighted,
    })
}

fn weighted_average(confusion: &ConfusionMatrix, per_class: &[ClassMetrics]) -> ClassMetrics {
    let n = confusion.total() as f64;
    let mut avg = ClassMetrics {
        tp_rate: 0.0,
        fp_rate: 0.0,
        precision: 0.0,
        recall: 0.0,
        f_measure: 0.0,
        mcc: 0.0,
        precision_defaulted: per_class.iter().any(|m| m.precision_defaulted),
    };
    for (i, m) in per_class.iter().enumerate() {
        let w = confusion.row_sum(i) as f64 / n;
        avg.tp_rate += w * m.tp_rate;
        avg.fp_rate += w * m.fp_rate;
        avg.precision += w * m.precision;
        avg.recall += w * m.recall;
        avg.f_measure += w * m.f_measure;
        avg.mcc += w * m.mcc;
    }
    avg
}

/// Per-instance probabilistic errors pooled over classes: MAE, RMSE and
/// their percentages relative to the prior-probability baseline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbabilisticErrors {
    pub mae: f64,
    pub rmse: f64,
    pub rae_percent: f64,
    pub rrse_percent: f64,
}

/// `truths[i]` is the actual class index, `probas[i]` the predicted
/// distribution. The baseline predicts the class frequencies of the
/// evaluated set for every instance.
pub fn probabilistic_errors(truths: &[usize], probas: &[Vec<f64>]) -> Result<ProbabilisticErrors> {
    assert_eq!(truths.len(), probas.len());
    if truths.is_empty() {
        return Err(Error::UndefinedMetric {
            what: "probabilistic errors of an empty pool".into(),
        });
    }
    let n_classes = probas[0].len();
    let mut priors = vec![0.0; n_classes];
    for &t in truths {
        priors[t] += 1.0;
    }
    let n = truths.len() as f64;
    for p in &mut priors {
        *p /= n;
    }
    if priors.iter().filter(|&&p| p > 0.0).count() < 2 {
        return Err(Error::UndefinedMetric {
            what: "relative errors with a single-class baseline".into(),
        });
    }

    let cells = n * n_classes as f64;
    let mut abs_sum = 0.0;
    let mut sq_sum = 0.0;
    let mut base_abs_sum = 0.0;
    let mut base_sq_sum = 0.0;
    for (&t, proba) in truths.iter().zip(probas) {
        for c in 0..n_classes {
            let y = if c == t { 1.0 } else { 0.0 };
            let e = proba[c] - y;
            abs_sum += e.abs();
            sq_sum += e * e;
            let be = priors[c] - y;
            base_abs_sum += be.abs();
            base_sq_sum += be * be;
        }
    }
    let mae = abs_sum / cells;
    let rmse = (sq_sum / cells).sqrt();
    let base_mae = base_abs_sum / cells;
    let base_rmse = (base_sq_sum / cells).sqrt();
    Ok(ProbabilisticErrors {
        mae,
        rmse,
        rae_percent: 100.0 * mae / base_mae,
        rrse_percent: 100.0 * rmse / base_rmse,
    })
}

/// Relative errors for already-computed MAE/RMSE against the priors of a
/// (count-per-class) evaluated set.
pub fn relative_errors(mae: f64, rmse: f64, class_counts: &[u64]) -> Result<(f64, f64)> {
    let n: u64 = class_counts.iter().sum();
    if class_counts.iter().filter(|&&c| c > 0).count() < 2 {
        return Err(Error::UndefinedMetric {
            what: "relative errors with a single-class baseline".into(),
        });
    }
    let nf = n as f64;
    let n_classes = class_counts.len() as f64;
    let priors: Vec<f64> = class_counts.iter().map(|&c| c as f64 / nf).collect();
    let mut base_abs = 0.0;
    let mut base_sq = 0.0;
    for (t, &count) in class_counts.iter().enumerate() {
        for (c, &p) in priors.iter().enumerate() {
            let y = if c == t { 1.0 } else { 0.0 };
            base_abs += count as f64 * (p - y).abs();
            base_sq += count as f64 * (p - y) * (p - y);
        }
    }
    let base_mae = base_abs / (nf * n_classes);
    let base_rmse = (base_sq / (nf * n_classes)).sqrt();
    Ok((100.0 * mae / base_mae, 100.0 * rmse / base_rmse))
}

/// ROC area by the Mann-Whitney rank statistic; tied scores contribute
/// one half.
pub fn roc_area(scores: &[f64], positives: &[bool]) -> Result<f64> {
    assert_eq!(scores.len(), positives.len());
    let n_pos = positives.iter().filter(|&&p| p).count();
    let n_neg = positives.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::UndefinedMetric {
            what: "ROC area with a single-class truth".into(),
        });
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).expect("finite scores"));

    // midranks over tied groups
    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        let midrank = (i + 1 + j) as f64 / 2.0;
        for &idx in &order[i..j] {
            if positives[idx] {
                rank_sum_pos += midrank;
            }
        }
        i = j;
    }
    let u = rank_sum_pos - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Ok(u / (n_pos as f64 * n_neg as f64))
}

/// Precision-recall area by interpolation-free step integration over the
/// distinct thresholds, in descending score order.
pub fn prc_area(scores: &[f64], positives: &[bool]) -> Result<f64> {
    assert_eq!(scores.len(), positives.len());
    let n_pos = positives.iter().filter(|&&p| p).count();
    let n_neg = positives.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::UndefinedMetric {
            what: "PRC area with a single-class truth".into(),
        });
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).expect("finite scores"));

    let mut area = 0.0;
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut prev_recall = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            if positives[order[j]] {
                tp += 1;
            } else {
                fp += 1;
            }
            j += 1;
        }
        let recall = tp as f64 / n_pos as f64;
        let precision = tp as f64 / (tp + fp) as f64;
        area += (recall - prev_recall) * precision;
        prev_recall = recall;
        i = j;
    }
    Ok(area)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paper_confusion() -> ConfusionMatrix {
        ConfusionMatrix::from_counts(
            vec!["ChatGPT".into(), "NewPhytologist".into()],
            vec![vec![62, 11], vec![12, 60]],
        )
    }

    #[test]
    fn published_confusion_reproduces_table_values() {
        let m = metrics_from_confusion(&paper_confusion()).unwrap();
        assert!((m.accuracy - 0.841379).abs() < 1e-6);
        assert!((m.kappa - 0.6827).abs() < 5e-4);
        let a = &m.per_class[0];
        assert!((a.precision - 0.838).abs() < 1e-3);
        assert!((a.recall - 0.849).abs() < 1e-3);
        assert!((a.f_measure - 0.844).abs() < 1e-3);
        assert!((a.fp_rate - 0.167).abs() < 1e-3);
        let b = &m.per_class[1];
        assert!((b.precision - 0.845).abs() < 1e-3);
        assert!((b.recall - 0.833).abs() < 1e-3);
        assert!((b.f_measure - 0.839).abs() < 1e-3);
        assert!((m.per_class[0].mcc - 0.683).abs() < 1e-3);
        assert!((m.per_class[1].mcc - 0.683).abs() < 1e-3);
        assert!((m.weighted.tp_rate - 0.841).abs() < 1e-3);
    }

    #[test]
    fn perfect_classifier_metrics() {
        let m = metrics_from_confusion(&ConfusionMatrix::from_counts(
            vec!["a".into(), "b".into()],
            vec![vec![10, 0], vec![0, 7]],
        ))
        .unwrap();
        assert_eq!(m.accuracy, 1.0);
        assert_eq!(m.kappa, 1.0);
    }

    #[test]
    fn never_predicted_class_reports_zero_precision_with_flag() {
        let m = metrics_from_confusion(&ConfusionMatrix::from_counts(
            vec!["a".into(), "b".into()],
            vec![vec![5, 0], vec![5, 0]],
        ))
        .unwrap();
        assert_eq!(m.per_class[1].precision, 0.0);
        assert!(m.per_class[1].precision_defaulted);
        assert!(!m.per_class[0].precision_defaulted);
    }

    #[test]
    fn weighted_recall_equals_accuracy() {
        let m = metrics_from_confusion(&ConfusionMatrix::from_counts(
            vec!["a".into(), "b".into()],
            vec![vec![50, 9], vec![21, 30]],
        ))
        .unwrap();
        assert!((m.weighted.recall - m.accuracy).abs() < 1e-12);
    }

    #[test]
    fn kappa_at_most_accuracy_and_swap_invariance() {
        let m = metrics_from_confusion(&paper_confusion()).unwrap();
        assert!(m.kappa <= m.accuracy);

        let swapped = metrics_from_confusion(&ConfusionMatrix::from_counts(
            vec!["NewPhytologist".into(), "ChatGPT".into()],
            vec![vec![60, 12], vec![11, 62]],
        ))
        .unwrap();
        assert!((swapped.accuracy - m.accuracy).abs() < 1e-12);
        assert!((swapped.kappa - m.kappa).abs() < 1e-12);
        assert!((swapped.per_class[0].mcc - m.per_class[1].mcc).abs() < 1e-12);
    }

    #[test]
    fn perfect_predictions_have_zero_errors() {
        let truths = vec![0, 1, 0];
        let probas = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0]];
        let e = probabilistic_errors(&truths, &probas).unwrap();
        assert_eq!(e.mae, 0.0);
        assert_eq!(e.rmse, 0.0);
        assert_eq!(e.rae_percent, 0.0);
    }

    #[test]
    fn prior_baseline_scores_exactly_100_percent() {
        let truths = vec![0, 0, 1, 1, 1];
        let priors = vec![2.0 / 5.0, 3.0 / 5.0];
        let probas: Vec<Vec<f64>> = truths.iter().map(|_| priors.clone()).collect();
        let e = probabilistic_errors(&truths, &probas).unwrap();
        assert!((e.rae_percent - 100.0).abs() < 1e-9);
        assert!((e.rrse_percent - 100.0).abs() < 1e-9);
    }

    #[test]
    fn published_relative_errors_from_published_absolute_errors() {
        let (rae, rrse) = relative_errors(0.3016, 0.3724, &[73, 72]).unwrap();
        assert!((rae - 60.31).abs() < 0.05, "rae {rae}");
        assert!((rrse - 74.48).abs() < 0.05, "rrse {rrse}");
    }

    #[test]
    fn single_class_relative_errors_undefined() {
        assert!(matches!(
            relative_errors(0.1, 0.1, &[10, 0]),
            Err(Error::UndefinedMetric { .. })
        ));
    }

    #[test]
    fn perfect_ranking_has_unit_roc_area() {
        let scores = vec![0.9, 0.8, 0.7, 0.2, 0.1];
        let positives = vec![true, true, true, false, false];
        assert_eq!(roc_area(&scores, &positives).unwrap(), 1.0);
    }

    #[test]
    fn all_tied_scores_give_half_roc_area() {
        let scores = vec![0.5; 6];
        let positives = vec![true, false, true, false, true, false];
        assert_eq!(roc_area(&scores, &positives).unwrap(), 0.5);
    }

    #[test]
    fn roc_matches_pairwise_counting_oracle() {
        // independent O(n^2) oracle over all (positive, negative) pairs
        let scores = vec![0.1, 0.4, 0.35, 0.8, 0.8, 0.5, 0.4, 0.9, 0.05, 0.6];
        let positives = vec![false, false, true, true, false, true, true, true, false, false];
        let mut wins = 0.0;
        let mut pairs = 0.0;
        for i in 0..scores.len() {
            for j in 0..scores.len() {
                if positives[i] && !positives[j] {
                    pairs += 1.0;
                    if scores[i] > scores[j] {
                        wins += 1.0;
                    } else if scores[i] == scores[j] {
                        wins += 0.5;
                    }
                }
            }
        }
        let oracle = wins / pairs;
        let fast = roc_area(&scores, &positives).unwrap();
        assert!((fast - oracle).abs() < 1e-12);
    }

    #[test]
    fn single_class_roc_undefined() {
        assert!(matches!(
            roc_area(&[0.1, 0.2], &[true, true]),
            Err(Error::UndefinedMetric { .. })
        ));
    }

    #[test]
    fn prc_area_on_hand_fixture() {
        // descending: 0.9+ (tp), 0.8- (fp), 0.7+ (tp), 0.1- (fp)
        // steps: r=1/2 p=1/1 -> .5; r=1/2 p=1/2 -> 0; r=1 p=2/3 -> .5*2/3; r=1 p=2/4 -> 0
        let scores = vec![0.9, 0.8, 0.7, 0.1];
        let positives = vec![true, false, true, false];
        let expected = 0.5 * 1.0 + 0.5 * (2.0 / 3.0);
        assert!((prc_area(&scores, &positives).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn perfect_ranking_has_unit_prc_area() {
        let scores = vec![0.9, 0.8, 0.2, 0.1];
        let positives = vec![true, true, false, false];
        assert_eq!(prc_area(&scores, &positives).unwrap(), 1.0);
    }
}
