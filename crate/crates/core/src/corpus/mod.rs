//! The paired human/LLM document corpus: loading, validation, persistence
//! and prompt construction.

pub mod endpoint;

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Provenance class of a document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    /// Machine-generated text (class `a` in the reports).
    Llm,
    /// Human-written text (class `b` in the reports).
    Human,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::Llm, Label::Human];

    pub fn index(self) -> usize {
        match self {
            Label::Llm => 0,
            Label::Human => 1,
        }
    }
}

/// How the two classes are spelled on disk. The default mirrors the
/// journal-versus-chatbot corpus this toolkit was built around.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelMapping {
    pub llm: String,
    pub human: String,
}

impl Default for LabelMapping {
    fn default() -> Self {
        LabelMapping {
            llm: "ChatGPT".to_string(),
            human: "NewPhytologist".to_string(),
        }
    }
}

impl LabelMapping {
    pub fn new(llm: impl Into<String>, human: impl Into<String>) -> Self {
        LabelMapping {
            llm: llm.into(),
            human: human.into(),
        }
    }

    pub fn name(&self, label: Label) -> &str {
        match label {
            Label::Llm => &self.llm,
            Label::Human => &self.human,
        }
    }

    /// Ordered class names, LLM class first.
    pub fn class_names(&self) -> Vec<String> {
        vec![self.llm.clone(), self.human.clone()]
    }

    /// Accepts the mapped names plus the canonical `LLM`/`Human` spellings.
    pub fn parse(&self, s: &str) -> Result<Label> {
        if s == self.llm || s == "LLM" {
            Ok(Label::Llm)
        } else if s == self.human || s == "Human" {
            Ok(Label::Human)
        } else {
            Err(Error::UnknownLabel {
                label: s.to_string(),
                expected: vec![
                    self.llm.clone(),
                    self.human.clone(),
                    "LLM".into(),
                    "Human".into(),
                ],
            })
        }
    }
}

/// One text with its provenance label and metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub title: String,
    pub body: String,
    pub label: Label,
    pub source: String,
}

/// On-disk record; label kept as a string until mapped.
#[derive(Debug, Serialize, Deserialize)]
struct RawDocument {
    id: String,
    title: String,
    body: String,
    label: String,
    #[serde(default)]
    source: String,
}

/// An ordered document collection with both classes tracked.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    documents: Vec<Document>,
}

impl Corpus {
    pub fn new() -> Self {
        Self::default()
    }

    /// Validates uniqueness and non-empty bodies while keeping insertion
    /// order.
    pub fn from_documents(documents: Vec<Document>) -> Result<Self> {
        let mut corpus = Corpus::new();
        for doc in documents {
            corpus.push(doc)?;
        }
        Ok(corpus)
    }

    pub fn push(&mut self, doc: Document) -> Result<()> {
        if doc.body.trim_matches(char::is_whitespace).is_empty() {
            return Err(Error::EmptyBody { id: doc.id });
        }
        if self.documents.iter().any(|d| d.id == doc.id) {
            return Err(Error::DuplicateId { id: doc.id });
        }
        self.documents.push(doc);
        Ok(())
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn class_counts(&self) -> BTreeMap<Label, usize> {
        let mut counts = BTreeMap::new();
        for doc in &self.documents {
            *counts.entry(doc.label).or_insert(0) += 1;
        }
        counts
    }

    /// Both classes must be present before any training operation.
    pub fn check_two_classes(&self) -> Result<()> {
        let counts = self.class_counts();
        if Label::ALL.iter().any(|l| counts.get(l).is_none()) {
            return Err(Error::SingleClass);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Jsonl,
    Csv,
}

impl fmt::Display for CorpusFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CorpusFormat::Jsonl => "jsonl",
            CorpusFormat::Csv => "csv",
        })
    }
}

/// Guess the corpus format from a file extension; JSONL is canonical.
pub fn format_for_path(path: &Path) -> CorpusFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => CorpusFormat::Csv,
        _ => CorpusFormat::Jsonl,
    }
}

/// Load and validate a corpus file, preserving record order.
pub fn load_corpus(path: &Path, format: CorpusFormat, mapping: &LabelMapping) -> Result<Corpus> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    let mut corpus = Corpus::new();

    match format {
        CorpusFormat::Jsonl => {
            for (i, line) in reader.lines().enumerate() {
                let line = line.map_err(|e| Error::io(path, e))?;
                if line.trim().is_empty() {
                    continue;
                }
                let raw: RawDocument =
                    serde_json::from_str(&line).map_err(|e| Error::MalformedRecord {
                        path: path.to_path_buf(),
                        line: i + 1,
                        msg: e.to_string(),
                    })?;
                corpus.push(materialize(raw, mapping)?)?;
            }
        }
        CorpusFormat::Csv => {
            let mut csv_reader = csv::ReaderBuilder::new()
                .has_headers(true)
                .from_reader(reader);
            for (i, record) in csv_reader.deserialize::<RawDocument>().enumerate() {
                let raw = record.map_err(|e| Error::MalformedRecord {
                    path: path.to_path_buf(),
                    line: i + 2,
                    msg: e.to_string(),
                })?;
                corpus.push(materialize(raw, mapping)?)?;
            }
        }
    }
    Ok(corpus)
}

fn materialize(raw: RawDocument, mapping: &LabelMapping) -> Result<Document> {
    Ok(Document {
        label: mapping.parse(&raw.label)?,
        id: raw.id,
        title: raw.title,
        body: raw.body,
        source: raw.source,
    })
}

/// Serialize one document per line in the canonical JSONL schema.
pub fn write_corpus_jsonl<W: Write>(
    corpus: &Corpus,
    mapping: &LabelMapping,
    mut out: W,
) -> Result<()> {
    for doc in corpus.documents() {
        let raw = RawDocument {
            id: doc.id.clone(),
            title: doc.title.clone(),
            body: doc.body.clone(),
            label: mapping.name(doc.label).to_string(),
            source: doc.source.clone(),
        };
        let line = serde_json::to_string(&raw)?;
        writeln!(out, "{line}").map_err(|e| Error::io("<writer>", e))?;
    }
    Ok(())
}

pub fn save_corpus(corpus: &Corpus, path: &Path, mapping: &LabelMapping) -> Result<()> {
    let mut file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_corpus_jsonl(corpus, mapping, &mut file)?;
    Ok(())
}

/// Digest over the canonical JSONL serialization, recorded in trained
/// models for provenance.
pub fn corpus_digest(corpus: &Corpus, mapping: &LabelMapping) -> String {
    use sha2::{Digest, Sha256};
    let mut bytes = Vec::new();
    write_corpus_jsonl(corpus, mapping, &mut bytes).expect("in-memory write");
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Default query template; placeholders are substituted verbatim.
pub const DEFAULT_PROMPT_TEMPLATE: &str =
    "Write a text on {title}, shorter than {max_chars} characters, white spaces included";

/// Inputs for one text-generation query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationRequest {
    pub title: String,
    pub max_chars: usize,
    pub prompt_template: String,
}

impl GenerationRequest {
    pub fn new(title: impl Into<String>, max_chars: usize) -> Self {
        GenerationRequest {
            title: title.into(),
            max_chars,
            prompt_template: DEFAULT_PROMPT_TEMPLATE.to_string(),
        }
    }
}

/// Render the query string for one title. Both placeholders must be
/// present in the template.
pub fn render_prompt(req: &GenerationRequest) -> Result<String> {
    for placeholder in ["{title}", "{max_chars}"] {
        if !req.prompt_template.contains(placeholder) {
            return Err(Error::MissingPlaceholder {
                placeholder: placeholder.to_string(),
            });
        }
    }
    Ok(req
        .prompt_template
        .replace("{title}", &req.title)
        .replace("{max_chars}", &req.max_chars.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    fn doc(id: &str, label: Label) -> Document {
        Document {
            id: id.to_string(),
            title: format!("title {id}"),
            body: format!("body of {id}"),
            label,
            source: "test".to_string(),
        }
    }

    #[test]
    fn jsonl_round_trip_preserves_documents() {
        let corpus = Corpus::from_documents(vec![doc("a", Label::Human), doc("b", Label::Llm)]).unwrap();
        let mapping = LabelMapping::default();
        let mut buf = Vec::new();
        write_corpus_jsonl(&corpus, &mapping, &mut buf).unwrap();

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        std::fs::write(&path, &buf).unwrap();
        let loaded = load_corpus(&path, CorpusFormat::Jsonl, &mapping).unwrap();
        assert_eq!(loaded, corpus);
    }

    #[test]
    fn loads_two_line_jsonl_with_canonical_labels() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        let mut f = std::fs::File::create(&path).unwrap();
        writeln!(f, r#"{{"id":"h1","title":"t","body":"b","label":"Human","source":"s"}}"#).unwrap();
        writeln!(f, r#"{{"id":"m1","title":"t","body":"b","label":"LLM","source":"s"}}"#).unwrap();
        let corpus = load_corpus(&path, CorpusFormat::Jsonl, &LabelMapping::default()).unwrap();
        let counts = corpus.class_counts();
        assert_eq!(counts[&Label::Human], 1);
        assert_eq!(counts[&Label::Llm], 1);
    }

    #[test]
    fn duplicate_id_names_the_offender() {
        let err = Corpus::from_documents(vec![doc("d1", Label::Human), doc("d1", Label::Llm)]);
        match err {
            Err(Error::DuplicateId { id }) => assert_eq!(id, "d1"),
            other => panic!("expected duplicate-id error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_jsonl_reports_line_number() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        std::fs::write(
            &path,
            "{\"id\":\"a\",\"title\":\"t\",\"body\":\"b\",\"label\":\"Human\",\"source\":\"\"}\nnot json\n",
        )
        .unwrap();
        match load_corpus(&path, CorpusFormat::Jsonl, &LabelMapping::default()) {
            Err(Error::MalformedRecord { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected malformed-record error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_label_rejected() {
        let mapping = LabelMapping::default();
        assert!(matches!(
            mapping.parse("Martian"),
            Err(Error::UnknownLabel { .. })
        ));
    }

    #[test]
    fn whitespace_only_body_rejected() {
        let mut d = doc("w", Label::Human);
        d.body = " \u{00a0}\t\n".to_string();
        assert!(matches!(
            Corpus::from_documents(vec![d]),
            Err(Error::EmptyBody { .. })
        ));
    }

    #[test]
    fn csv_with_quoted_fields_loads() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.csv");
        std::fs::write(
            &path,
            "id,title,body,label,source\nd1,\"a, title\",\"line one\nline two\",ChatGPT,model\n",
        )
        .unwrap();
        let corpus = load_corpus(&path, CorpusFormat::Csv, &LabelMapping::default()).unwrap();
        assert_eq!(corpus.documents()[0].body, "line one\nline two");
        assert_eq!(corpus.documents()[0].label, Label::Llm);
    }

    #[test]
    fn prompt_renders_the_published_query() {
        let req = GenerationRequest::new(
            "the Delay of Iris flower senescence by protease inhibitors",
            1500,
        );
        assert_eq!(
            render_prompt(&req).unwrap(),
            "Write a text on the Delay of Iris flower senescence by protease inhibitors, \
             shorter than 1500 characters, white spaces included"
        );
    }

    #[test]
    fn prompt_substitutes_and_validates() {
        let req = GenerationRequest::new("X", 10);
        assert_eq!(
            render_prompt(&req).unwrap(),
            "Write a text on X, shorter than 10 characters, white spaces included"
        );
        let mut req = GenerationRequest::new("X", 10);
        req.prompt_template = "no placeholders".to_string();
        assert!(matches!(
            render_prompt(&req),
            Err(Error::MissingPlaceholder { .. })
        ));
    }

    #[test]
    fn prompt_is_injective_in_title() {
        let a = render_prompt(&GenerationRequest::new("alpha", 100)).unwrap();
        let b = render_prompt(&GenerationRequest::new("beta", 100)).unwrap();
        assert_ne!(a, b);
        assert!(a.contains("alpha"));
    }
}
