//! Tokenization, stop-word filtering, stemming and the exploratory
//! frequency/correlation analysis.

pub mod snowball;

use std::collections::{BTreeMap, HashSet};
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// SMART stop-word list, one word per line.
pub const SMART_STOPWORDS: &str = include_str!("../../data/smart_stopwords.txt");

/// Parse the bundled SMART list into a lowercase stop set.
pub fn smart_stopwords() -> HashSet<String> {
    parse_stop_list(SMART_STOPWORDS)
}

/// Parse a stop-list file body: one word per line, blank lines ignored.
pub fn parse_stop_list(body: &str) -> HashSet<String> {
    body.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| l.to_lowercase())
        .collect()
}

/// Load a stop list from a file path.
pub fn load_stop_list(path: &Path) -> Result<HashSet<String>> {
    let body = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(parse_stop_list(&body))
}

/// One document after cleaning: lowercase tokens with stop words removed,
/// plus the parallel stemmed forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedDoc {
    pub doc_id: String,
    pub tokens: Vec<String>,
    pub stems: Vec<String>,
}

impl TokenizedDoc {
    pub fn n_words(&self) -> usize {
        self.tokens.len()
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '\'' || c == '\u{2019}'
}

/// Split `body` into lowercase word tokens, dropping stop-listed and
/// pure-digit tokens. Words split on any character that is not a letter,
/// digit or internal apostrophe; surrounding apostrophes are trimmed.
pub fn tokenize(doc_id: &str, body: &str, stop_list: &HashSet<String>) -> TokenizedDoc {
    let mut tokens = Vec::new();
    for raw in body.split(|c: char| !is_word_char(c)) {
        let word = raw
            .trim_matches(|c| c == '\'' || c == '\u{2019}')
            .to_lowercase()
            .replace('\u{2019}', "'");
        if word.is_empty() || word.chars().all(|c| c.is_ascii_digit()) {
            continue;
        }
        if stop_list.contains(&word) {
            continue;
        }
        tokens.push(word);
    }
    let stems = tokens.iter().map(|t| snowball::stem(t)).collect();
    TokenizedDoc {
        doc_id: doc_id.to_string(),
        tokens,
        stems,
    }
}

/// Stem occurrence counts for a collection of documents.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    counts: BTreeMap<String, u64>,
    total: u64,
}

impl FrequencyTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Tally every stem of every document.
    pub fn from_docs<'a>(docs: impl IntoIterator<Item = &'a TokenizedDoc>) -> Self {
        let mut table = Self::new();
        for doc in docs {
            for stem in &doc.stems {
                table.add(stem);
            }
        }
        table
    }

    pub fn add(&mut self, stem: &str) {
        *self.counts.entry(stem.to_string()).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn count(&self, stem: &str) -> u64 {
        self.counts.get(stem).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(s, c)| (s.as_str(), *c))
    }
}

/// The `k` most frequent stems, count-descending, ties broken by stem
/// ascending. Returns fewer rows when the table is smaller than `k`.
pub fn top_stems(table: &FrequencyTable, k: usize) -> Vec<(String, u64)> {
    let mut rows: Vec<(String, u64)> = table
        .iter()
        .map(|(s, c)| (s.to_string(), c))
        .collect();
    rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    rows.truncate(k);
    rows
}

/// Write `top_stems` rows as `stem,count` CSV.
pub fn write_frequency_csv<W: Write>(rows: &[(String, u64)], mut out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(&mut out);
    writer.write_record(["stem", "count"])?;
    for (stem, count) in rows {
        writer.write_record([stem.as_str(), &count.to_string()])?;
    }
    writer.flush().map_err(|e| Error::io("<writer>", e))?;
    Ok(())
}

/// Pearson correlation of two frequency profiles with its Fisher 95%
/// confidence interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub r: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n: usize,
}

/// Pearson correlation between the relative stem frequencies of two
/// tables, over the union of their stems (absent stems count as zero).
pub fn frequency_correlation(
    fa: &FrequencyTable,
    fb: &FrequencyTable,
) -> Result<CorrelationResult> {
    let union: Vec<&str> = {
        let mut stems: Vec<&str> = fa.iter().map(|(s, _)| s).collect();
        stems.extend(fb.iter().map(|(s, _)| s));
        stems.sort_unstable();
        stems.dedup();
        stems
    };
    let n = union.len();
    if n < 4 {
        return Err(Error::TooFewStems { n });
    }
    let (ta, tb) = (fa.total() as f64, fb.total() as f64);
    let xs: Vec<f64> = union.iter().map(|s| fa.count(s) as f64 / ta).collect();
    let ys: Vec<f64> = union.iter().map(|s| fb.count(s) as f64 / tb).collect();

    let r = pearson(&xs, &ys)?;
    let (ci_low, ci_high) = fisher_ci(r, n);
    Ok(CorrelationResult {
        r,
        ci_low,
        ci_high,
        n,
    })
}

/// Plain Pearson product-moment coefficient over paired observations.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::DegenerateCorrelation {
            reason: "zero variance in relative frequencies".into(),
        });
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// Fisher-z 95% interval: z = atanh(r), half-width 1.96/sqrt(n-3),
/// back-transformed with tanh.
pub fn fisher_ci(r: f64, n: usize) -> (f64, f64) {
    let z = r.atanh();
    let half = 1.96 / ((n as f64) - 3.0).sqrt();
    ((z - half).tanh(), (z + half).tanh())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stops(words: &[&str]) -> HashSet<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn tokenize_removes_stop_words() {
        let doc = tokenize("d1", "The flower is growing.", &stops(&["the", "is"]));
        assert_eq!(doc.tokens, ["flower", "growing"]);
        assert_eq!(doc.stems, ["flower", "grow"]);
    }

    #[test]
    fn tokenize_empty_body() {
        let doc = tokenize("d1", "", &stops(&[]));
        assert!(doc.tokens.is_empty());
        assert!(doc.stems.is_empty());
    }

    #[test]
    fn tokenize_splits_on_non_word_chars() {
        let doc = tokenize("d1", "Plant-growth affects plants", &stops(&[]));
        assert_eq!(doc.tokens, ["plant", "growth", "affects", "plants"]);
    }

    #[test]
    fn tokenize_keeps_internal_apostrophes() {
        let doc = tokenize("d1", "don't 'quote' it\u{2019}s", &stops(&[]));
        assert_eq!(doc.tokens, ["don't", "quote", "it's"]);
    }

    #[test]
    fn tokenize_drops_pure_digit_tokens() {
        let doc = tokenize("d1", "in 1999 there were 42 plants", &stops(&[]));
        assert_eq!(doc.tokens, ["in", "there", "were", "plants"]);
    }

    #[test]
    fn smart_list_loads() {
        let stops = smart_stopwords();
        assert!(stops.contains("the"));
        assert!(stops.contains("ain't"));
        assert!(stops.len() > 500);
        assert!(stops.iter().all(|w| *w == w.to_lowercase()));
    }

    #[test]
    fn top_stems_orders_and_breaks_ties() {
        let mut t = FrequencyTable::new();
        for _ in 0..3 {
            t.add("a");
        }
        t.add("b");
        assert_eq!(top_stems(&t, 1), [("a".into(), 3)]);

        let mut t = FrequencyTable::new();
        t.add("b");
        t.add("b");
        t.add("a");
        t.add("a");
        assert_eq!(top_stems(&t, 2), [("a".into(), 2), ("b".into(), 2)]);
    }

    #[test]
    fn identical_tables_correlate_perfectly() {
        let mut t = FrequencyTable::new();
        for (s, c) in [("a", 5), ("b", 3), ("c", 2), ("d", 1)] {
            for _ in 0..c {
                t.add(s);
            }
        }
        let res = frequency_correlation(&t, &t).unwrap();
        assert!((res.r - 1.0).abs() < 1e-12);
        assert_eq!(res.n, 4);
    }

    #[test]
    fn correlation_is_symmetric() {
        let mut a = FrequencyTable::new();
        let mut b = FrequencyTable::new();
        for (s, c) in [("x", 4), ("y", 1), ("z", 3), ("w", 2)] {
            for _ in 0..c {
                a.add(s);
            }
        }
        for (s, c) in [("x", 1), ("y", 5), ("q", 2), ("z", 1)] {
            for _ in 0..c {
                b.add(s);
            }
        }
        let ab = frequency_correlation(&a, &b).unwrap();
        let ba = frequency_correlation(&b, &a).unwrap();
        assert_eq!(ab.r, ba.r);
        assert_eq!(ab.ci_low, ba.ci_low);
        assert_eq!(ab.ci_high, ba.ci_high);
    }

    #[test]
    fn degenerate_variance_errors() {
        let mut a = FrequencyTable::new();
        let mut b = FrequencyTable::new();
        for s in ["a", "b", "c", "d"] {
            a.add(s);
            b.add(s);
            b.add(s);
        }
        // `a` has equal relative frequencies everywhere; its variance over
        // the union is zero only if the union adds no new stems.
        b.add("e");
        let err = frequency_correlation(&a, &b);
        assert!(err.is_ok()); // union adds "e", variance nonzero
        let err = frequency_correlation(&a, &a);
        assert!(matches!(
            err,
            Err(Error::DegenerateCorrelation { .. })
        ));
    }

    #[test]
    fn too_few_stems_errors() {
        let mut a = FrequencyTable::new();
        a.add("a");
        a.add("b");
        a.add("c");
        assert!(matches!(
            frequency_correlation(&a, &a),
            Err(Error::TooFewStems { n: 3 })
        ));
    }
}
