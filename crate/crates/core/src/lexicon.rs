//! The four sentiment lexicons: parsing, validation and the per-document
//! inner join producing sentiment hits.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::textprep::TokenizedDoc;

/// Bundled editions of the four lexicons, embedded from the data files so
/// the toolkit runs without any external paths.
pub const BUNDLED_AFINN: &str = include_str!("../data/afinn.txt");
pub const BUNDLED_BING: &str = include_str!("../data/bing.csv");
pub const BUNDLED_NRC: &str = include_str!("../data/nrc.txt");
pub const BUNDLED_LOUGHRAN: &str = include_str!("../data/loughran.csv");

/// Fixed file names inside a `--lexicon-dir`.
pub const LEXICON_FILE_NAMES: [&str; 4] = ["afinn.txt", "bing.csv", "nrc.txt", "loughran.csv"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LexiconKind {
    Bing,
    Afinn,
    Nrc,
    Loughran,
}

impl LexiconKind {
    pub fn file_name(self) -> &'static str {
        match self {
            LexiconKind::Afinn => "afinn.txt",
            LexiconKind::Bing => "bing.csv",
            LexiconKind::Nrc => "nrc.txt",
            LexiconKind::Loughran => "loughran.csv",
        }
    }
}

impl fmt::Display for LexiconKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            LexiconKind::Bing => "bing",
            LexiconKind::Afinn => "afinn",
            LexiconKind::Nrc => "nrc",
            LexiconKind::Loughran => "loughran",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BingTag {
    Positive,
    Negative,
}

/// The ten NRC affect categories, in the order the feature schema uses:
/// the eight basic emotions followed by the two sentiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NrcTag {
    Anger,
    Fear,
    Anticipation,
    Trust,
    Surprise,
    Sadness,
    Joy,
    Disgust,
    Negative,
    Positive,
}

impl NrcTag {
    pub const ALL: [NrcTag; 10] = [
        NrcTag::Anger,
        NrcTag::Fear,
        NrcTag::Anticipation,
        NrcTag::Trust,
        NrcTag::Surprise,
        NrcTag::Sadness,
        NrcTag::Joy,
        NrcTag::Disgust,
        NrcTag::Negative,
        NrcTag::Positive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NrcTag::Anger => "anger",
            NrcTag::Fear => "fear",
            NrcTag::Anticipation => "anticipation",
            NrcTag::Trust => "trust",
            NrcTag::Surprise => "surprise",
            NrcTag::Sadness => "sadness",
            NrcTag::Joy => "joy",
            NrcTag::Disgust => "disgust",
            NrcTag::Negative => "negative",
            NrcTag::Positive => "positive",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LoughranTag {
    Positive,
    Negative,
    Constraining,
    Litigious,
    Superfluous,
    Uncertainty,
}

impl LoughranTag {
    pub const ALL: [LoughranTag; 6] = [
        LoughranTag::Positive,
        LoughranTag::Negative,
        LoughranTag::Constraining,
        LoughranTag::Litigious,
        LoughranTag::Superfluous,
        LoughranTag::Uncertainty,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LoughranTag::Positive => "positive",
            LoughranTag::Negative => "negative",
            LoughranTag::Constraining => "constraining",
            LoughranTag::Litigious => "litigious",
            LoughranTag::Superfluous => "superfluous",
            LoughranTag::Uncertainty => "uncertainty",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == s)
    }
}

/// The sentiment a lexicon assigns to one word: a categorical tag, or an
/// integer valence for AFINN.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sentiment {
    Bing(BingTag),
    Afinn(i8),
    Nrc(NrcTag),
    Loughran(LoughranTag),
}

impl Sentiment {
    pub fn kind(self) -> LexiconKind {
        match self {
            Sentiment::Bing(_) => LexiconKind::Bing,
            Sentiment::Afinn(_) => LexiconKind::Afinn,
            Sentiment::Nrc(_) => LexiconKind::Nrc,
            Sentiment::Loughran(_) => LexiconKind::Loughran,
        }
    }

    /// Tag name or valence, as rendered in the hits export.
    pub fn tag_or_valence(self) -> String {
        match self {
            Sentiment::Bing(BingTag::Positive) => "positive".into(),
            Sentiment::Bing(BingTag::Negative) => "negative".into(),
            Sentiment::Afinn(v) => v.to_string(),
            Sentiment::Nrc(t) => t.name().into(),
            Sentiment::Loughran(t) => t.name().into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconEntry {
    pub word: String,
    pub sentiment: Sentiment,
}

/// One parsed lexicon plus its provenance digest and any load warnings.
#[derive(Debug, Clone)]
pub struct Lexicon {
    pub kind: LexiconKind,
    pub entries: Vec<LexiconEntry>,
    pub warnings: Vec<String>,
    pub digest: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Load one lexicon file in its canonical distribution format.
pub fn load_lexicon(path: &Path, kind: LexiconKind) -> Result<Lexicon> {
    let body = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_lexicon(path, &body, kind)
}

/// Parse a lexicon body; `path` is only used in error messages and may be
/// a pseudo-path for embedded data.
pub fn parse_lexicon(path: &Path, body: &str, kind: LexiconKind) -> Result<Lexicon> {
    let mut entries = Vec::new();
    let mut warnings = Vec::new();
    let mut seen = std::collections::HashSet::new();

    let mut push = |entry: LexiconEntry, seen: &mut std::collections::HashSet<(String, Sentiment)>| {
        if seen.insert((entry.word.clone(), entry.sentiment)) {
            entries.push(entry);
        }
    };

    match kind {
        LexiconKind::Afinn => {
            for (i, line) in body.lines().enumerate() {
                let line = line.trim_end();
                if line.is_empty() {
                    continue;
                }
                let (word, valence) = line.rsplit_once('\t').ok_or(Error::MalformedRecord {
                    path: path.to_path_buf(),
                    line: i + 1,
                    msg: "expected word<TAB>valence".into(),
                })?;
                let word = word.trim().to_lowercase();
                let valence: i64 = valence.trim().parse().map_err(|_| Error::MalformedRecord {
                    path: path.to_path_buf(),
                    line: i + 1,
                    msg: format!("bad valence {valence:?}"),
                })?;
                if !(-5..=5).contains(&valence) {
                    return Err(Error::ValenceOutOfRange {
                        path: path.to_path_buf(),
                        line: i + 1,
                        word,
                        valence,
                    });
                }
                if word.contains(char::is_whitespace) {
                    warnings.push(format!(
                        "dropped multi-word AFINN entry {word:?} (tokenizer emits single words)"
                    ));
                    continue;
                }
                push(
                    LexiconEntry {
                        word,
                        sentiment: Sentiment::Afinn(valence as i8),
                    },
                    &mut seen,
                );
            }
        }
        LexiconKind::Bing | LexiconKind::Loughran => {
            for (i, line) in body.lines().enumerate() {
                let line = line.trim_end();
                if line.is_empty() || (i == 0 && line == "word,sentiment") {
                    continue;
                }
                let (word, tag) = line.split_once(',').ok_or(Error::MalformedRecord {
                    path: path.to_path_buf(),
                    line: i + 1,
                    msg: "expected word,sentiment".into(),
                })?;
                let word = word.trim().to_lowercase();
                let tag = tag.trim();
                let sentiment = match kind {
                    LexiconKind::Bing => match tag {
                        "positive" => Sentiment::Bing(BingTag::Positive),
                        "negative" => Sentiment::Bing(BingTag::Negative),
                        other => {
                            return Err(Error::UnknownTag {
                                path: path.to_path_buf(),
                                line: i + 1,
                                lexicon: "bing".into(),
                                tag: other.into(),
                            })
                        }
                    },
                    LexiconKind::Loughran => {
                        Sentiment::Loughran(LoughranTag::parse(tag).ok_or_else(|| {
                            Error::UnknownTag {
                                path: path.to_path_buf(),
                                line: i + 1,
                                lexicon: "loughran".into(),
                                tag: tag.into(),
                            }
                        })?)
                    }
                    _ => unreachable!(),
                };
                push(LexiconEntry { word, sentiment }, &mut seen);
            }
        }
        LexiconKind::Nrc => {
            for (i, line) in body.lines().enumerate() {
                let line = line.trim_end();
                if line.is_empty() {
                    continue;
                }
                let mut parts = line.split('\t');
                let (word, tag, flag) = match (parts.next(), parts.next(), parts.next()) {
                    (Some(w), Some(t), Some(f)) => (w, t, f),
                    _ => {
                        return Err(Error::MalformedRecord {
                            path: path.to_path_buf(),
                            line: i + 1,
                            msg: "expected word<TAB>affect<TAB>flag".into(),
                        })
                    }
                };
                let tag = NrcTag::parse(tag.trim()).ok_or_else(|| Error::UnknownTag {
                    path: path.to_path_buf(),
                    line: i + 1,
                    lexicon: "nrc".into(),
                    tag: tag.into(),
                })?;
                match flag.trim() {
                    "1" => push(
                        LexiconEntry {
                            word: word.trim().to_lowercase(),
                            sentiment: Sentiment::Nrc(tag),
                        },
                        &mut seen,
                    ),
                    "0" => {}
                    other => {
                        return Err(Error::MalformedRecord {
                            path: path.to_path_buf(),
                            line: i + 1,
                            msg: format!("bad flag {other:?}"),
                        })
                    }
                }
            }
        }
    }

    if entries.is_empty() {
        return Err(Error::EmptyLexicon {
            path: path.to_path_buf(),
        });
    }
    Ok(Lexicon {
        kind,
        entries,
        warnings,
        digest: sha256_hex(body.as_bytes()),
    })
}

/// All four lexicons indexed for joining. Immutable after load.
#[derive(Debug, Clone, Default)]
pub struct LexiconSet {
    bing: HashMap<String, Vec<BingTag>>,
    afinn: HashMap<String, i8>,
    nrc: HashMap<String, Vec<NrcTag>>,
    loughran: HashMap<String, Vec<LoughranTag>>,
    digests: BTreeMap<String, String>,
    warnings: Vec<String>,
}

impl LexiconSet {
    pub fn from_lexicons(lexicons: impl IntoIterator<Item = Lexicon>) -> Self {
        let mut set = LexiconSet::default();
        for lexicon in lexicons {
            set.digests
                .insert(lexicon.kind.file_name().to_string(), lexicon.digest.clone());
            set.warnings.extend(lexicon.warnings.iter().cloned());
            for entry in lexicon.entries {
                match entry.sentiment {
                    Sentiment::Bing(t) => set.bing.entry(entry.word).or_default().push(t),
                    Sentiment::Afinn(v) => {
                        set.afinn.insert(entry.word, v);
                    }
                    Sentiment::Nrc(t) => set.nrc.entry(entry.word).or_default().push(t),
                    Sentiment::Loughran(t) => set.loughran.entry(entry.word).or_default().push(t),
                }
            }
        }
        for tags in set.bing.values_mut() {
            tags.sort();
            tags.dedup();
        }
        for tags in set.nrc.values_mut() {
            tags.sort_by_key(|t| NrcTag::ALL.iter().position(|a| a == t));
            tags.dedup();
        }
        for tags in set.loughran.values_mut() {
            tags.sort_by_key(|t| LoughranTag::ALL.iter().position(|a| a == t));
            tags.dedup();
        }
        set
    }

    /// Load `afinn.txt`, `bing.csv`, `nrc.txt` and `loughran.csv` from a
    /// directory.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let lexicons = [
            load_lexicon(&dir.join("afinn.txt"), LexiconKind::Afinn)?,
            load_lexicon(&dir.join("bing.csv"), LexiconKind::Bing)?,
            load_lexicon(&dir.join("nrc.txt"), LexiconKind::Nrc)?,
            load_lexicon(&dir.join("loughran.csv"), LexiconKind::Loughran)?,
        ];
        Ok(Self::from_lexicons(lexicons))
    }

    /// The lexicon editions shipped inside the binary.
    pub fn bundled() -> Self {
        let parse = |name: &str, body: &str, kind| {
            parse_lexicon(Path::new(name), body, kind).expect("bundled lexicon parses")
        };
        Self::from_lexicons([
            parse("afinn.txt", BUNDLED_AFINN, LexiconKind::Afinn),
            parse("bing.csv", BUNDLED_BING, LexiconKind::Bing),
            parse("nrc.txt", BUNDLED_NRC, LexiconKind::Nrc),
            parse("loughran.csv", BUNDLED_LOUGHRAN, LexiconKind::Loughran),
        ])
    }

    /// SHA-256 digest per lexicon file name, recorded in trained models.
    pub fn digests(&self) -> &BTreeMap<String, String> {
        &self.digests
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn afinn_valence(&self, word: &str) -> Option<i8> {
        self.afinn.get(word).copied()
    }
}

/// One (document, token occurrence, lexicon tag) association.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentimentHit {
    pub doc_id: String,
    pub token: String,
    pub sentiment: Sentiment,
}

/// Which token stream the lexicon join matches against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum JoinOn {
    #[default]
    Tokens,
    Stems,
}

/// Inner join of a document's tokens against all loaded lexicons. Every
/// token occurrence contributes one hit per matching lexicon tag; tokens
/// matching nothing contribute nothing.
pub fn join_hits(doc: &TokenizedDoc, lexicons: &LexiconSet) -> Vec<SentimentHit> {
    join_hits_on(doc, lexicons, JoinOn::Tokens)
}

/// As [`join_hits`], but selecting the surface stream (`--join-on-stems`).
pub fn join_hits_on(doc: &TokenizedDoc, lexicons: &LexiconSet, on: JoinOn) -> Vec<SentimentHit> {
    let stream = match on {
        JoinOn::Tokens => &doc.tokens,
        JoinOn::Stems => &doc.stems,
    };
    let mut hits = Vec::new();
    for token in stream {
        if let Some(tags) = lexicons.bing.get(token) {
            for &tag in tags {
                hits.push(SentimentHit {
                    doc_id: doc.doc_id.clone(),
                    token: token.clone(),
                    sentiment: Sentiment::Bing(tag),
                });
            }
        }
        if let Some(&valence) = lexicons.afinn.get(token) {
            hits.push(SentimentHit {
                doc_id: doc.doc_id.clone(),
                token: token.clone(),
                sentiment: Sentiment::Afinn(valence),
            });
        }
        if let Some(tags) = lexicons.nrc.get(token) {
            for &tag in tags {
                hits.push(SentimentHit {
                    doc_id: doc.doc_id.clone(),
                    token: token.clone(),
                    sentiment: Sentiment::Nrc(tag),
                });
            }
        }
        if let Some(tags) = lexicons.loughran.get(token) {
            for &tag in tags {
                hits.push(SentimentHit {
                    doc_id: doc.doc_id.clone(),
                    token: token.clone(),
                    sentiment: Sentiment::Loughran(tag),
                });
            }
        }
    }
    hits
}

/// Debug export mirroring the inner-join table: one CSV row per hit.
pub fn write_hits_csv<W: Write>(hits: &[SentimentHit], mut out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(&mut out);
    writer.write_record(["doc_id", "token", "lexicon", "tag_or_valence"])?;
    for hit in hits {
        writer.write_record([
            hit.doc_id.as_str(),
            hit.token.as_str(),
            &hit.sentiment.kind().to_string(),
            &hit.sentiment.tag_or_valence(),
        ])?;
    }
    writer.flush().map_err(|e| Error::io("<writer>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textprep::tokenize;
    use std::collections::HashSet;

    fn parse(body: &str, kind: LexiconKind) -> Result<Lexicon> {
        parse_lexicon(Path::new("<test>"), body, kind)
    }

    fn mini_set() -> LexiconSet {
        let bing = parse("good,positive\nbad,negative\n", LexiconKind::Bing).unwrap();
        let afinn = parse("good\t3\nbad\t-3\n", LexiconKind::Afinn).unwrap();
        let nrc = parse("good\tjoy\t1\ngood\ttrust\t1\ngood\tanger\t0\n", LexiconKind::Nrc).unwrap();
        let loughran = parse("bad,negative\n", LexiconKind::Loughran).unwrap();
        LexiconSet::from_lexicons([bing, afinn, nrc, loughran])
    }

    #[test]
    fn afinn_parses_tab_separated_valences() {
        let lex = parse("abandon\t-2\n", LexiconKind::Afinn).unwrap();
        assert_eq!(
            lex.entries,
            [LexiconEntry {
                word: "abandon".into(),
                sentiment: Sentiment::Afinn(-2),
            }]
        );
    }

    #[test]
    fn afinn_rejects_out_of_range_valence() {
        let err = parse("weird\t-9\n", LexiconKind::Afinn);
        assert!(matches!(err, Err(Error::ValenceOutOfRange { valence: -9, .. })));
    }

    #[test]
    fn afinn_drops_multiword_entries_with_warning() {
        let lex = parse("can't stand\t-3\ngood\t3\n", LexiconKind::Afinn).unwrap();
        assert_eq!(lex.entries.len(), 1);
        assert_eq!(lex.warnings.len(), 1);
        assert!(lex.warnings[0].contains("can't stand"));
    }

    #[test]
    fn bing_parses_and_rejects_unknown_tags() {
        let lex = parse("good,positive\n", LexiconKind::Bing).unwrap();
        assert_eq!(lex.entries[0].sentiment, Sentiment::Bing(BingTag::Positive));
        assert!(matches!(
            parse("good,meh\n", LexiconKind::Bing),
            Err(Error::UnknownTag { .. })
        ));
    }

    #[test]
    fn nrc_keeps_only_flagged_rows() {
        let lex = parse("calm\ttrust\t1\ncalm\tanger\t0\n", LexiconKind::Nrc).unwrap();
        assert_eq!(lex.entries.len(), 1);
        assert_eq!(lex.entries[0].sentiment, Sentiment::Nrc(NrcTag::Trust));
    }

    #[test]
    fn empty_lexicon_errors() {
        assert!(matches!(
            parse("", LexiconKind::Afinn),
            Err(Error::EmptyLexicon { .. })
        ));
    }

    #[test]
    fn join_counts_occurrences_per_matching_tag() {
        let set = mini_set();
        let stops = HashSet::new();

        // "good" matches bing + afinn + two nrc tags.
        let doc = tokenize("d1", "good", &stops);
        assert_eq!(join_hits(&doc, &set).len(), 4);

        // two occurrences, bing-only token
        let doc = tokenize("d2", "bad bad", &stops);
        let hits = join_hits(&doc, &set);
        // each "bad" hits bing + afinn + loughran
        assert_eq!(hits.len(), 6);

        // no-match removal
        let doc = tokenize("d3", "zzzz", &stops);
        assert!(join_hits(&doc, &set).is_empty());
    }

    #[test]
    fn join_hit_tokens_come_from_the_document() {
        let set = mini_set();
        let doc = tokenize("d1", "good bad zzzz", &HashSet::new());
        for hit in join_hits(&doc, &set) {
            assert!(doc.tokens.contains(&hit.token));
        }
    }

    #[test]
    fn bundled_lexicons_load_and_digest() {
        let set = LexiconSet::bundled();
        assert_eq!(set.afinn_valence("abandon"), Some(-2));
        assert_eq!(set.digests().len(), 4);
        assert!(set
            .warnings()
            .iter()
            .any(|w| w.contains("multi-word AFINN")));
    }
}
