//! Regenerates data/demo_corpus.jsonl (repo root) from the deterministic
//! demo generator.
//!
//!     cargo run -p sentiforest --example gen_demo_corpus

use sentiforest::corpus::{save_corpus, LabelMapping};
use sentiforest::demo::demo_corpus;

fn main() {
    let corpus = demo_corpus();
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/demo_corpus.jsonl");
    save_corpus(&corpus, std::path::Path::new(path), &LabelMapping::default()).unwrap();
    eprintln!("wrote {} documents to {path}", corpus.len());
}
