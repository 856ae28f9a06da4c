//! Aggregation of sentiment hits into fixed-order feature vectors, mean
//! imputation for AFINN-empty documents, and the dataset container.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{Label, LabelMapping};
use crate::error::{Error, Result};
use crate::lexicon::{BingTag, LoughranTag, NrcTag, Sentiment, SentimentHit};
use crate::textprep::TokenizedDoc;

/// The four Loughran tags emitted as features, in schema order. Litigious
/// and superfluous hits are counted but not emitted.
pub const LOUGHRAN_EMITTED: [LoughranTag; 4] = [
    LoughranTag::Positive,
    LoughranTag::Negative,
    LoughranTag::Constraining,
    LoughranTag::Uncertainty,
];

/// Fixed-order numeric features for one document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub doc_id: String,
    pub label: Label,
    pub n_words: usize,
    pub bing_pos_ratio: f64,
    pub bing_neg_ratio: f64,
    /// `None` until imputed when the document had no AFINN hits.
    pub afinn_mean: Option<f64>,
    pub afinn_sd: Option<f64>,
    pub afinn_missing: bool,
    /// Ratios in [`NrcTag::ALL`] order.
    pub nrc_ratios: [f64; 10],
    /// Ratios in [`LOUGHRAN_EMITTED`] order.
    pub loughran_ratios: [f64; 4],
}

/// Which optional columns participate in the model input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SchemaOptions {
    /// Drop the cleaned-word count from the inputs.
    pub drop_n_words: bool,
    /// Expose the imputation flag as a 0/1 input.
    pub include_missing_flag: bool,
}

/// Ordered model-input feature names under the given options.
pub fn schema(options: SchemaOptions) -> Vec<String> {
    let mut names = Vec::with_capacity(20);
    if !options.drop_n_words {
        names.push("n_words".to_string());
    }
    names.push("bing_pos_ratio".to_string());
    names.push("bing_neg_ratio".to_string());
    names.push("afinn_mean".to_string());
    names.push("afinn_sd".to_string());
    if options.include_missing_flag {
        names.push("afinn_missing".to_string());
    }
    for tag in NrcTag::ALL {
        names.push(format!("nrc_{}_ratio", tag.name()));
    }
    for tag in LOUGHRAN_EMITTED {
        names.push(format!("loughran_{}_ratio", tag.name()));
    }
    names
}

/// The default on-disk schema: every feature, no flag column.
pub fn default_schema() -> Vec<String> {
    schema(SchemaOptions::default())
}

impl FeatureVector {
    /// Numeric value for a schema column; AFINN statistics must have been
    /// imputed (or present) by the time rows are materialized.
    pub fn value(&self, name: &str) -> Result<f64> {
        let missing = || Error::NotImputed {
            id: self.doc_id.clone(),
        };
        match name {
            "n_words" => Ok(self.n_words as f64),
            "bing_pos_ratio" => Ok(self.bing_pos_ratio),
            "bing_neg_ratio" => Ok(self.bing_neg_ratio),
            "afinn_mean" => self.afinn_mean.ok_or_else(missing),
            "afinn_sd" => self.afinn_sd.ok_or_else(missing),
            "afinn_missing" => Ok(if self.afinn_missing { 1.0 } else { 0.0 }),
            _ => {
                for (i, tag) in NrcTag::ALL.iter().enumerate() {
                    if name == format!("nrc_{}_ratio", tag.name()) {
                        return Ok(self.nrc_ratios[i]);
                    }
                }
                for (i, tag) in LOUGHRAN_EMITTED.iter().enumerate() {
                    if name == format!("loughran_{}_ratio", tag.name()) {
                        return Ok(self.loughran_ratios[i]);
                    }
                }
                Err(Error::SchemaMismatch {
                    expected: default_schema(),
                    got: vec![name.to_string()],
                })
            }
        }
    }

    /// Materialize the model-input row for a schema name list.
    pub fn row_for(&self, names: &[String]) -> Result<Vec<f64>> {
        names.iter().map(|n| self.value(n)).collect()
    }
}

/// Sample mean and sample (n-1) standard deviation; one observation gives
/// a standard deviation of zero.
fn mean_and_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = if values.len() < 2 {
        0.0
    } else {
        (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    (mean, sd)
}

/// Aggregate one document's hits into its feature vector. All hits must
/// belong to the document; documents with no cleaned tokens are rejected.
pub fn featurize(doc: &TokenizedDoc, label: Label, hits: &[SentimentHit]) -> Result<FeatureVector> {
    let n_words = doc.n_words();
    if n_words == 0 {
        return Err(Error::DocumentRejected {
            id: doc.doc_id.clone(),
        });
    }
    debug_assert!(hits.iter().all(|h| h.doc_id == doc.doc_id));
    let n = n_words as f64;

    let mut bing_pos = 0usize;
    let mut bing_neg = 0usize;
    let mut afinn_values = Vec::new();
    let mut nrc_counts = [0usize; 10];
    let mut loughran_counts = [0usize; 6];

    for hit in hits {
        match hit.sentiment {
            Sentiment::Bing(BingTag::Positive) => bing_pos += 1,
            Sentiment::Bing(BingTag::Negative) => bing_neg += 1,
            Sentiment::Afinn(v) => afinn_values.push(v as f64),
            Sentiment::Nrc(tag) => {
                let i = NrcTag::ALL.iter().position(|t| *t == tag).expect("nrc tag");
                nrc_counts[i] += 1;
            }
            Sentiment::Loughran(tag) => {
                let i = LoughranTag::ALL
                    .iter()
                    .position(|t| *t == tag)
                    .expect("loughran tag");
                loughran_counts[i] += 1;
            }
        }
    }

    let (afinn_mean, afinn_sd, afinn_missing) = if afinn_values.is_empty() {
        (None, None, true)
    } else {
        let (mean, sd) = mean_and_sd(&afinn_values);
        (Some(mean), Some(sd), false)
    };

    let mut nrc_ratios = [0.0; 10];
    for (ratio, count) in nrc_ratios.iter_mut().zip(nrc_counts) {
        *ratio = count as f64 / n;
    }
    let mut loughran_ratios = [0.0; 4];
    for (ratio, tag) in loughran_ratios.iter_mut().zip(LOUGHRAN_EMITTED) {
        let i = LoughranTag::ALL.iter().position(|t| *t == tag).expect("tag");
        *ratio = loughran_counts[i] as f64 / n;
    }

    Ok(FeatureVector {
        doc_id: doc.doc_id.clone(),
        label,
        n_words,
        bing_pos_ratio: bing_pos as f64 / n,
        bing_neg_ratio: bing_neg as f64 / n,
        afinn_mean,
        afinn_sd,
        afinn_missing,
        nrc_ratios,
        loughran_ratios,
    })
}

/// Count of Loughran hits whose tags are not emitted as features.
pub fn unemitted_loughran_hits(hits: &[SentimentHit]) -> usize {
    hits.iter()
        .filter(|h| {
            matches!(
                h.sentiment,
                Sentiment::Loughran(LoughranTag::Litigious)
                    | Sentiment::Loughran(LoughranTag::Superfluous)
            )
        })
        .count()
}

/// Training means used to fill AFINN statistics of flagged rows.
pub type ImputationStats = BTreeMap<String, f64>;

/// Compute imputation means over the unflagged rows of a training slice.
pub fn imputation_stats<'a>(
    rows: impl IntoIterator<Item = &'a FeatureVector>,
) -> Result<ImputationStats> {
    let mut means = 0.0;
    let mut sds = 0.0;
    let mut n = 0usize;
    for row in rows {
        if !row.afinn_missing {
            means += row.afinn_mean.ok_or_else(|| Error::NotImputed {
                id: row.doc_id.clone(),
            })?;
            sds += row.afinn_sd.ok_or_else(|| Error::NotImputed {
                id: row.doc_id.clone(),
            })?;
            n += 1;
        }
    }
    if n == 0 {
        return Err(Error::CannotImpute);
    }
    let mut stats = ImputationStats::new();
    stats.insert("afinn_mean".to_string(), means / n as f64);
    stats.insert("afinn_sd".to_string(), sds / n as f64);
    Ok(stats)
}

/// Fill a flagged row's AFINN statistics from training means. Unflagged
/// rows are left untouched.
pub fn apply_imputation(row: &mut FeatureVector, stats: &ImputationStats) {
    if row.afinn_missing {
        row.afinn_mean = Some(stats["afinn_mean"]);
        row.afinn_sd = Some(stats["afinn_sd"]);
    }
}

/// A dataset of feature vectors plus training metadata carried through to
/// models for provenance.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    pub schema: Vec<String>,
    pub rows: Vec<FeatureVector>,
    /// Populated by [`impute`]; empty beforehand.
    pub imputation_stats: ImputationStats,
    /// Ordered class names, LLM class first.
    pub label_names: Vec<String>,
    pub lexicon_digests: BTreeMap<String, String>,
    pub corpus_digest: String,
}

impl Dataset {
    pub fn new(rows: Vec<FeatureVector>, mapping: &LabelMapping) -> Self {
        Dataset {
            schema: default_schema(),
            rows,
            imputation_stats: ImputationStats::new(),
            label_names: mapping.class_names(),
            lexicon_digests: BTreeMap::new(),
            corpus_digest: String::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.rows.iter().map(|r| r.label).collect()
    }

    pub fn class_counts(&self) -> [usize; 2] {
        let mut counts = [0; 2];
        for row in &self.rows {
            counts[row.label.index()] += 1;
        }
        counts
    }
}

/// Replace the AFINN statistics of flagged rows with the means of the
/// unflagged rows, recording the means in the dataset.
pub fn impute(mut dataset: Dataset) -> Result<Dataset> {
    let stats = imputation_stats(dataset.rows.iter())?;
    for row in &mut dataset.rows {
        apply_imputation(row, &stats);
    }
    dataset.imputation_stats = stats;
    Ok(dataset)
}

/// Deterministic row permutation under the given seed.
pub fn shuffle_dataset(mut dataset: Dataset, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    dataset.rows.shuffle(&mut rng);
    dataset
}

const MISSING_CELL: &str = "";

fn format_float(x: f64) -> String {
    // `{}` on f64 prints the shortest representation that round-trips.
    format!("{x}")
}

/// Write the feature CSV: `doc_id`, the default schema columns, the
/// imputation flag, then the label (last).
pub fn write_features_csv<W: Write>(dataset: &Dataset, mapping: &LabelMapping, out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    let mut header = vec!["doc_id".to_string()];
    header.extend(default_schema());
    header.push("afinn_missing".to_string());
    header.push("label".to_string());
    writer.write_record(&header)?;

    for row in &dataset.rows {
        let mut record = vec![row.doc_id.clone()];
        for name in default_schema() {
            let cell = match name.as_str() {
                "afinn_mean" => row.afinn_mean.map(format_float),
                "afinn_sd" => row.afinn_sd.map(format_float),
                other => Some(format_float(row.value(other)?)),
            };
            record.push(cell.unwrap_or_else(|| MISSING_CELL.to_string()));
        }
        record.push(if row.afinn_missing { "1" } else { "0" }.to_string());
        record.push(mapping.name(row.label).to_string());
        writer.write_record(&record)?;
    }
    writer.flush().map_err(|e| Error::io("<writer>", e))?;
    Ok(())
}

/// Read a feature CSV produced by [`write_features_csv`].
pub fn read_features_csv<R: Read>(reader: R, mapping: &LabelMapping) -> Result<Dataset> {
    let mut csv_reader = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header: Vec<String> = csv_reader
        .headers()?
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut expected = vec!["doc_id".to_string()];
    expected.extend(default_schema());
    expected.push("afinn_missing".to_string());
    expected.push("label".to_string());
    if header != expected {
        return Err(Error::SchemaMismatch {
            expected,
            got: header,
        });
    }

    let names = default_schema();
    let mut rows = Vec::new();
    for (i, record) in csv_reader.records().enumerate() {
        let record = record?;
        let line = i + 2;
        let get = |idx: usize| -> &str { record.get(idx).unwrap_or("") };
        let parse_cell = |idx: usize| -> Result<f64> {
            get(idx).parse().map_err(|_| Error::MalformedRecord {
                path: PathBuf::from("<features csv>"),
                line,
                msg: format!("bad number {:?} in column {}", get(idx), expected[idx]),
            })
        };
        let parse_opt = |idx: usize| -> Result<Option<f64>> {
            if get(idx).is_empty() {
                Ok(None)
            } else {
                parse_cell(idx).map(Some)
            }
        };

        let doc_id = get(0).to_string();
        let mut nrc_ratios = [0.0; 10];
        let mut loughran_ratios = [0.0; 4];
        let mut n_words = 0usize;
        let mut bing_pos_ratio = 0.0;
        let mut bing_neg_ratio = 0.0;
        let mut afinn_mean = None;
        let mut afinn_sd = None;
        for (j, name) in names.iter().enumerate() {
            let idx = j + 1;
            match name.as_str() {
                "n_words" => n_words = parse_cell(idx)? as usize,
                "bing_pos_ratio" => bing_pos_ratio = parse_cell(idx)?,
                "bing_neg_ratio" => bing_neg_ratio = parse_cell(idx)?,
                "afinn_mean" => afinn_mean = parse_opt(idx)?,
                "afinn_sd" => afinn_sd = parse_opt(idx)?,
                other => {
                    if let Some(pos) = NrcTag::ALL
                        .iter()
                        .position(|t| other == format!("nrc_{}_ratio", t.name()))
                    {
                        nrc_ratios[pos] = parse_cell(idx)?;
                    } else if let Some(pos) = LOUGHRAN_EMITTED
                        .iter()
                        .position(|t| other == format!("loughran_{}_ratio", t.name()))
                    {
                        loughran_ratios[pos] = parse_cell(idx)?;
                    }
                }
            }
        }
        let flag_idx = names.len() + 1;
        let afinn_missing = match get(flag_idx) {
            "1" => true,
            "0" => false,
            other => {
                return Err(Error::MalformedRecord {
                    path: PathBuf::from("<features csv>"),
                    line,
                    msg: format!("bad afinn_missing flag {other:?}"),
                })
            }
        };
        let label = mapping.parse(get(flag_idx + 1))?;
        rows.push(FeatureVector {
            doc_id,
            label,
            n_words,
            bing_pos_ratio,
            bing_neg_ratio,
            afinn_mean,
            afinn_sd,
            afinn_missing,
            nrc_ratios,
            loughran_ratios,
        });
    }
    Ok(Dataset::new(rows, mapping))
}

/// Sidecar metadata written next to a feature CSV so later pipeline
/// stages keep the provenance digests.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct DatasetMeta {
    pub lexicon_digests: BTreeMap<String, String>,
    pub corpus_digest: String,
}

pub fn meta_path(csv_path: &Path) -> PathBuf {
    let mut name = csv_path.as_os_str().to_os_string();
    name.push(".meta.json");
    PathBuf::from(name)
}

/// Save the CSV plus its `.meta.json` sidecar.
pub fn save_dataset(dataset: &Dataset, path: &Path, mapping: &LabelMapping) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_features_csv(dataset, mapping, file)?;
    let meta = DatasetMeta {
        lexicon_digests: dataset.lexicon_digests.clone(),
        corpus_digest: dataset.corpus_digest.clone(),
    };
    let meta_path = meta_path(path);
    std::fs::write(&meta_path, serde_json::to_string_pretty(&meta)?)
        .map_err(|e| Error::io(&meta_path, e))?;
    Ok(())
}

/// Load a feature CSV; if `<path>.meta.json` exists the digests are
/// restored, otherwise the corpus digest is taken over the CSV bytes.
pub fn load_dataset(path: &Path, mapping: &LabelMapping) -> Result<Dataset> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let mut dataset = read_features_csv(bytes.as_slice(), mapping)?;
    let meta_path = meta_path(path);
    if meta_path.exists() {
        let meta: DatasetMeta = serde_json::from_str(
            &std::fs::read_to_string(&meta_path).map_err(|e| Error::io(&meta_path, e))?,
        )?;
        dataset.lexicon_digests = meta.lexicon_digests;
        dataset.corpus_digest = meta.corpus_digest;
    } else {
        use sha2::{Digest, Sha256};
        let mut hasher = Sha256::new();
        hasher.update(&bytes);
        dataset.corpus_digest = hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
    }
    Ok(dataset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textprep::tokenize;
    use std::collections::HashSet;

    fn hit(doc_id: &str, token: &str, sentiment: Sentiment) -> SentimentHit {
        SentimentHit {
            doc_id: doc_id.into(),
            token: token.into(),
            sentiment,
        }
    }

    fn ten_token_doc() -> TokenizedDoc {
        tokenize(
            "d1",
            "alpha beta gamma delta epsilon zeta eta theta iota kappa",
            &HashSet::new(),
        )
    }

    #[test]
    fn bing_ratios_are_hit_counts_over_n_words() {
        let doc = ten_token_doc();
        let hits = vec![
            hit("d1", "alpha", Sentiment::Bing(BingTag::Positive)),
            hit("d1", "beta", Sentiment::Bing(BingTag::Positive)),
            hit("d1", "gamma", Sentiment::Bing(BingTag::Negative)),
        ];
        let fv = featurize(&doc, Label::Human, &hits).unwrap();
        assert_eq!(fv.bing_pos_ratio, 0.2);
        assert_eq!(fv.bing_neg_ratio, 0.1);
    }

    #[test]
    fn afinn_sample_statistics() {
        let doc = ten_token_doc();
        let hits = vec![
            hit("d1", "alpha", Sentiment::Afinn(3)),
            hit("d1", "beta", Sentiment::Afinn(-2)),
        ];
        let fv = featurize(&doc, Label::Human, &hits).unwrap();
        assert_eq!(fv.afinn_mean, Some(0.5));
        assert!((fv.afinn_sd.unwrap() - 3.5355339059327378).abs() < 1e-9);
        assert!(!fv.afinn_missing);
    }

    #[test]
    fn single_afinn_hit_has_zero_sd() {
        let doc = ten_token_doc();
        let hits = vec![hit("d1", "alpha", Sentiment::Afinn(4))];
        let fv = featurize(&doc, Label::Human, &hits).unwrap();
        assert_eq!(fv.afinn_mean, Some(4.0));
        assert_eq!(fv.afinn_sd, Some(0.0));
    }

    #[test]
    fn no_afinn_hits_flags_missing() {
        let doc = ten_token_doc();
        let fv = featurize(&doc, Label::Human, &[]).unwrap();
        assert!(fv.afinn_missing);
        assert_eq!(fv.afinn_mean, None);
        assert_eq!(fv.afinn_sd, None);
    }

    #[test]
    fn empty_document_rejected() {
        let doc = tokenize("d1", "", &HashSet::new());
        assert!(matches!(
            featurize(&doc, Label::Human, &[]),
            Err(Error::DocumentRejected { .. })
        ));
    }

    #[test]
    fn featurize_is_token_order_invariant() {
        let stops = HashSet::new();
        let a = tokenize("d", "good bad alpha beta", &stops);
        let b = tokenize("d", "beta alpha bad good", &stops);
        let hits_a = vec![
            hit("d", "good", Sentiment::Afinn(3)),
            hit("d", "bad", Sentiment::Afinn(-3)),
        ];
        let mut hits_b = hits_a.clone();
        hits_b.reverse();
        let fa = featurize(&a, Label::Llm, &hits_a).unwrap();
        let fb = featurize(&b, Label::Llm, &hits_b).unwrap();
        assert_eq!(fa.afinn_mean, fb.afinn_mean);
        assert_eq!(fa.afinn_sd, fb.afinn_sd);
        assert_eq!(fa.bing_pos_ratio, fb.bing_pos_ratio);
    }

    fn row(id: &str, mean: Option<f64>, label: Label) -> FeatureVector {
        FeatureVector {
            doc_id: id.into(),
            label,
            n_words: 5,
            bing_pos_ratio: 0.2,
            bing_neg_ratio: 0.0,
            afinn_mean: mean,
            afinn_sd: mean.map(|_| 1.0),
            afinn_missing: mean.is_none(),
            nrc_ratios: [0.0; 10],
            loughran_ratios: [0.0; 4],
        }
    }

    #[test]
    fn impute_fills_flagged_rows_with_training_means() {
        let rows = vec![
            row("a", Some(1.0), Label::Human),
            row("b", Some(3.0), Label::Llm),
            row("c", None, Label::Human),
        ];
        let ds = impute(Dataset::new(rows, &LabelMapping::default())).unwrap();
        assert_eq!(ds.rows[2].afinn_mean, Some(2.0));
        assert_eq!(ds.rows[2].afinn_sd, Some(1.0));
        assert!(ds.rows[2].afinn_missing);
        assert_eq!(ds.imputation_stats["afinn_mean"], 2.0);
    }

    #[test]
    fn impute_without_flagged_rows_keeps_rows() {
        let rows = vec![row("a", Some(1.0), Label::Human), row("b", Some(3.0), Label::Llm)];
        let before = rows.clone();
        let ds = impute(Dataset::new(rows, &LabelMapping::default())).unwrap();
        assert_eq!(ds.rows, before);
    }

    #[test]
    fn impute_with_all_rows_flagged_errors() {
        let rows = vec![row("a", None, Label::Human), row("b", None, Label::Llm)];
        assert!(matches!(
            impute(Dataset::new(rows, &LabelMapping::default())),
            Err(Error::CannotImpute)
        ));
    }

    #[test]
    fn shuffle_is_deterministic_and_permutes() {
        let rows: Vec<FeatureVector> = (0..20)
            .map(|i| row(&format!("d{i}"), Some(i as f64), Label::Human))
            .collect();
        let ds = Dataset::new(rows, &LabelMapping::default());
        let a = shuffle_dataset(ds.clone(), 7);
        let b = shuffle_dataset(ds.clone(), 7);
        assert_eq!(a.rows, b.rows);

        let mut ids_before: Vec<_> = ds.rows.iter().map(|r| r.doc_id.clone()).collect();
        let mut ids_after: Vec<_> = a.rows.iter().map(|r| r.doc_id.clone()).collect();
        ids_before.sort();
        ids_after.sort();
        assert_eq!(ids_before, ids_after);

        let c = shuffle_dataset(ds, 8);
        assert_ne!(a.rows, c.rows);
    }

    #[test]
    fn default_schema_has_19_features_in_fixed_order() {
        let names = default_schema();
        assert_eq!(names.len(), 19);
        assert_eq!(names[0], "n_words");
        assert_eq!(names[5], "nrc_anger_ratio");
        assert_eq!(names[18], "loughran_uncertainty_ratio");
    }

    #[test]
    fn csv_round_trips_losslessly() {
        let mapping = LabelMapping::default();
        let mut r1 = row("a", Some(0.1 + 0.2), Label::Human);
        r1.nrc_ratios[3] = 1.0 / 3.0;
        let rows = vec![r1, row("b", None, Label::Llm)];
        let ds = Dataset::new(rows, &mapping);
        let mut buf = Vec::new();
        write_features_csv(&ds, &mapping, &mut buf).unwrap();
        let loaded = read_features_csv(buf.as_slice(), &mapping).unwrap();
        assert_eq!(loaded.rows, ds.rows);

        let mut buf2 = Vec::new();
        write_features_csv(&loaded, &mapping, &mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }
}
