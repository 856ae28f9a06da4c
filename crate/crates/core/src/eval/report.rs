//! The evaluation report: every summary statistic, the per-class table
//! and the confusion matrix, rendered as JSON or as plain text laid out
//! like the reference toolkit's output.

use serde::{Deserialize, Serialize};

use super::metrics::{
    metrics_from_confusion, probabilistic_errors, prc_area, roc_area, ClassMetrics,
    ConfusionMatrix,
};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub class: String,
    #[serde(flatten)]
    pub metrics: ClassMetrics,
    pub roc_area: f64,
    pub prc_area: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub n_instances: usize,
    pub correct: u64,
    pub incorrect: u64,
    pub accuracy: f64,
    pub kappa: f64,
    pub mae: f64,
    pub rmse: f64,
    pub rae_percent: f64,
    pub rrse_percent: f64,
    pub per_class: Vec<ClassReport>,
    pub weighted: ClassReport,
    pub confusion: ConfusionMatrix,
    /// Wall-clock seconds; excluded from the JSON form so reports stay
    /// byte-identical across runs.
    #[serde(skip)]
    pub runtime_seconds: f64,
}

impl EvalReport {
    /// Build the full report from pooled per-instance truths and
    /// probability vectors.
    pub fn from_pool(
        classes: &[String],
        truths: &[usize],
        probas: &[Vec<f64>],
        runtime_seconds: f64,
    ) -> Result<EvalReport> {
        let mut confusion = ConfusionMatrix::new(classes.to_vec());
        for (&t, proba) in truths.iter().zip(probas) {
            confusion.record(t, crate::forest::argmax(proba));
        }
        let threshold = metrics_from_confusion(&confusion)?;
        let errors = probabilistic_errors(truths, probas)?;

        let mut per_class = Vec::with_capacity(classes.len());
        for (c, class) in classes.iter().enumerate() {
            let scores: Vec<f64> = probas.iter().map(|p| p[c]).collect();
            let positives: Vec<bool> = truths.iter().map(|&t| t == c).collect();
            per_class.push(ClassReport {
                class: class.clone(),
                metrics: threshold.per_class[c],
                roc_area: roc_area(&scores, &positives)?,
                prc_area: prc_area(&scores, &positives)?,
            });
        }
        let n = truths.len() as f64;
        let mut weighted_roc = 0.0;
        let mut weighted_prc = 0.0;
        for (c, report) in per_class.iter().enumerate() {
            let w = truths.iter().filter(|&&t| t == c).count() as f64 / n;
            weighted_roc += w * report.roc_area;
            weighted_prc += w * report.prc_area;
        }

        let correct = confusion.trace();
        Ok(EvalReport {
            n_instances: truths.len(),
            correct,
            incorrect: confusion.total() - correct,
            accuracy: threshold.accuracy,
            kappa: threshold.kappa,
            mae: errors.mae,
            rmse: errors.rmse,
            rae_percent: errors.rae_percent,
            rrse_percent: errors.rrse_percent,
            per_class,
            weighted: ClassReport {
                class: "Weighted Avg.".to_string(),
                metrics: threshold.weighted,
                roc_area: weighted_roc,
                prc_area: weighted_prc,
            },
            confusion,
            runtime_seconds,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// Plain-text tables: results summary, detailed accuracy by class,
    /// confusion matrix.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let pct = |x: f64| format!("{:.4} %", x);

        out.push_str("=== Results Summary ===\n");
        out.push_str(&format!(
            "Correctly Classified Instances    {:<8} {}\n",
            self.correct,
            pct(100.0 * self.accuracy)
        ));
        out.push_str(&format!(
            "Incorrectly Classified Instances  {:<8} {}\n",
            self.incorrect,
            pct(100.0 * (1.0 - self.accuracy))
        ));
        out.push_str(&format!("Kappa statistic                   {:.4}\n", self.kappa));
        out.push_str(&format!("Mean absolute error               {:.4}\n", self.mae));
        out.push_str(&format!("Root mean squared error           {:.4}\n", self.rmse));
        out.push_str(&format!(
            "Relative absolute error           {}\n",
            pct(self.rae_percent)
        ));
        out.push_str(&format!(
            "Root relative squared error       {}\n",
            pct(self.rrse_percent)
        ));
        out.push_str(&format!(
            "Total Number of Instances         {}\n",
            self.n_instances
        ));

        out.push_str("\n=== Detailed Accuracy By Class ===\n");
        out.push_str(
            "TP Rate  FP Rate  Precision  Recall  F-Measure  MCC      ROC Area  PRC Area  Class\n",
        );
        for report in self.per_class.iter().chain([&self.weighted]) {
            let m = &report.metrics;
            out.push_str(&format!(
                "{:<8.3} {:<8.3} {:<10.3} {:<7.3} {:<10.3} {:<8.3} {:<9.3} {:<9.3} {}\n",
                m.tp_rate,
                m.fp_rate,
                m.precision,
                m.recall,
                m.f_measure,
                m.mcc,
                report.roc_area,
                report.prc_area,
                report.class
            ));
        }

        out.push_str("\n=== Confusion Matrix ===\n");
        let letters: Vec<char> = (0..self.confusion.classes.len())
            .map(|i| (b'a' + i as u8) as char)
            .collect();
        for letter in &letters {
            out.push_str(&format!("{letter:>6}"));
        }
        out.push_str("   <-- classified as\n");
        for (i, row) in self.confusion.counts.iter().enumerate() {
            for value in row {
                out.push_str(&format!("{value:>6}"));
            }
            out.push_str(&format!(
                " |  {} = {}\n",
                letters[i], self.confusion.classes[i]
            ));
        }

        out.push_str(&format!(
            "\nTime taken: {:.2} seconds\n",
            self.runtime_seconds
        ));
        out
    }
}
