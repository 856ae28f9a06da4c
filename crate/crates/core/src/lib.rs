//! Human-versus-machine text provenance classification from sentiment
//! features.
//!
//! The pipeline: ingest a paired corpus, clean and tokenize each text,
//! inner-join the tokens against four sentiment lexicons (Bing, AFINN,
//! NRC, Loughran-McDonald), aggregate the hits into one numeric feature
//! vector per document, then train and evaluate a bagged random forest
//! under stratified k-fold cross-validation.

pub mod corpus;
pub mod demo;
pub mod error;
pub mod eval;
pub mod features;
pub mod forest;
pub mod lexicon;
pub mod textprep;

pub use corpus::{Corpus, Document, GenerationRequest, Label, LabelMapping};
pub use error::{Error, Result};
pub use eval::{ConfusionMatrix, EvalReport};
pub use features::{Dataset, FeatureVector, SchemaOptions};
pub use forest::{ForestConfig, ForestModel, SplitCriterion};
pub use lexicon::{LexiconKind, LexiconSet, SentimentHit};
pub use textprep::TokenizedDoc;

use std::collections::HashSet;

/// Tokenize, join and featurize every document of a corpus into a
/// dataset, using the given stop list and lexicons.
pub fn extract_features(
    corpus: &Corpus,
    stop_list: &HashSet<String>,
    lexicons: &LexiconSet,
    mapping: &LabelMapping,
    join_on: lexicon::JoinOn,
) -> Result<Dataset> {
    let mut rows = Vec::with_capacity(corpus.len());
    let mut unemitted = 0usize;
    for doc in corpus.documents() {
        let tokens = textprep::tokenize(&doc.id, &doc.body, stop_list);
        let hits = lexicon::join_hits_on(&tokens, lexicons, join_on);
        unemitted += features::unemitted_loughran_hits(&hits);
        rows.push(features::featurize(&tokens, doc.label, &hits)?);
    }
    let mut dataset = Dataset::new(rows, mapping);
    dataset.lexicon_digests = lexicons.digests().clone();
    dataset.corpus_digest = corpus::corpus_digest(corpus, mapping);
    if unemitted > 0 {
        eprintln!(
            "warning: {unemitted} litigious/superfluous Loughran hit(s) counted but not \
             emitted as features"
        );
    }
    Ok(dataset)
}
