//! Deterministic synthetic demo corpus: 145 plant-science abstracts from
//! two stylistically distinct generators, so every subcommand has a
//! runnable example without network access.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Corpus, Document, Label};
use crate::forest::mix_seed;

pub const DEMO_SEED: u64 = 0x5EED_D0C5;
pub const DEMO_LLM_DOCS: usize = 73;
pub const DEMO_HUMAN_DOCS: usize = 72;

/// Vocabulary with no entry in any bundled lexicon.
const NEUTRAL: &[&str] = &[
    "plant", "leaf", "leaves", "root", "roots", "shoot", "soil", "nitrogen", "carbon",
    "phosphorus", "water", "light", "photosynthesis", "chlorophyll", "membrane", "protein",
    "enzyme", "gene", "genome", "transcription", "tissue", "cell", "cells", "nutrient",
    "nutrients", "mineral", "biomass", "canopy", "seed", "seeds", "germination", "pollen",
    "petal", "species", "population", "ecosystem", "habitat", "temperature", "climate",
    "season", "growth", "sample", "samples", "measurement", "experiment", "experiments",
    "field", "laboratory", "analysis", "method", "pathway", "signaling", "hormone", "auxin",
    "stomata", "transpiration", "respiration", "flowering", "senescence", "iris",
    "arabidopsis", "wheat", "maize", "fungal", "mycorrhizal", "symbiosis", "colonization",
    "phenotype", "genotype", "expression", "regulation", "response", "concentration",
    "gradient", "region", "structure", "development", "mechanism", "process", "interaction",
    "community", "diversity", "abundance", "density", "distribution",
];

/// Positive vocabulary covered by the AFINN lexicon (and others).
const POS_AFINN: &[&str] = &[
    "remarkable", "significant", "robust", "comprehensive", "innovative", "exciting",
    "valuable", "important", "powerful", "effective", "beneficial", "successful", "elegant",
    "efficient", "insightful", "profound", "impressive", "reliable", "consistent",
    "thorough", "rigorous", "vital", "improved", "enhanced", "substantial", "prominent",
];

/// Positive vocabulary absent from AFINN but present in Bing/NRC/Loughran.
const POS_AFINN_FREE: &[&str] = &[
    "promising", "versatile", "fruitful", "notable", "advantageous", "coherent", "credible",
    "proven", "visionary", "pioneering", "forthcoming", "breakthrough", "accurate",
    "dependable", "trustworthy",
];

/// Negative vocabulary covered by AFINN (and others).
const NEG_AFINN: &[&str] = &[
    "difficult", "problem", "problems", "failure", "decline", "loss", "damage", "stress",
    "severe", "adverse", "risk", "limited", "weak", "poor", "inconsistent", "infection",
    "toxic", "decay", "threat", "harsh", "shortage", "deficit", "diminished", "deteriorate",
    "struggle", "hazardous", "collapse", "lack", "lacking",
];

/// Negative vocabulary absent from AFINN but present elsewhere.
const NEG_AFINN_FREE: &[&str] = &[
    "unclear", "ambiguous", "confounding", "limitation", "scarcity", "unknown",
    "unresolved", "puzzling", "conflicting", "variability", "mortality", "pathogen",
    "infestation", "doubtful", "vague", "drought",
];

/// Hedging/constraint vocabulary (Loughran uncertainty & constraining);
/// all AFINN-free.
const UNCERTAINTY: &[&str] = &[
    "uncertainty", "uncertain", "approximately", "assumption", "assumptions",
    "preliminary", "fluctuating", "unconfirmed", "constraint", "constraints",
    "constrained", "restricted", "restriction", "required", "requirements", "dependent",
    "tentative",
];

const TITLE_SUBJECTS: &[&str] = &[
    "Nitrogen allocation", "Root colonization dynamics", "Photosynthetic acclimation",
    "Stomatal regulation", "Mycorrhizal signaling", "Seed dormancy release",
    "Leaf senescence timing", "Canopy light interception", "Auxin transport",
    "Osmotic adjustment", "Pollen viability", "Symbiotic nutrient exchange",
];

const TITLE_CONTEXTS: &[&str] = &[
    "in temperate grassland species", "under elevated carbon dioxide",
    "in arabidopsis root tissue", "across alpine populations",
    "during early germination", "in wheat and maize cultivars",
    "along soil moisture gradients", "in mycorrhizal networks",
    "under seasonal water deficit", "in flowering iris cultivars",
];

struct StyleProfile {
    pos_rate: f64,
    neg_rate: f64,
    uncertainty_rate: f64,
}

fn profile(label: Label, contrarian: bool) -> StyleProfile {
    let effective = if contrarian {
        match label {
            Label::Llm => Label::Human,
            Label::Human => Label::Llm,
        }
    } else {
        label
    };
    match effective {
        Label::Llm => StyleProfile {
            pos_rate: 0.20,
            neg_rate: 0.02,
            uncertainty_rate: 0.015,
        },
        Label::Human => StyleProfile {
            pos_rate: 0.04,
            neg_rate: 0.15,
            uncertainty_rate: 0.07,
        },
    }
}

fn pick<'a>(rng: &mut ChaCha8Rng, pool: &[&'a str]) -> &'a str {
    pool[rng.gen_range(0..pool.len())]
}

fn generate_body(rng: &mut ChaCha8Rng, label: Label, contrarian: bool, afinn_free: bool) -> String {
    let mut profile = profile(label, contrarian);
    let jitter = 0.7 + 0.6 * rng.gen::<f64>();
    profile.pos_rate *= jitter;
    profile.neg_rate *= jitter;

    let (pos_pool, neg_pool): (Vec<&str>, Vec<&str>) = if afinn_free {
        (POS_AFINN_FREE.to_vec(), NEG_AFINN_FREE.to_vec())
    } else {
        (
            [POS_AFINN, POS_AFINN_FREE].concat(),
            [NEG_AFINN, NEG_AFINN_FREE].concat(),
        )
    };

    let n_sentences = 6 + rng.gen_range(0..4);
    let mut body = String::new();
    for _ in 0..n_sentences {
        if body.len() > 1200 {
            break;
        }
        let n_words = 9 + rng.gen_range(0..6);
        let mut sentence = Vec::with_capacity(n_words);
        for _ in 0..n_words {
            let u = rng.gen::<f64>();
            let word = if u < profile.pos_rate {
                pick(rng, &pos_pool)
            } else if u < profile.pos_rate + profile.neg_rate {
                pick(rng, &neg_pool)
            } else if u < profile.pos_rate + profile.neg_rate + profile.uncertainty_rate {
                pick(rng, UNCERTAINTY)
            } else {
                pick(rng, NEUTRAL)
            };
            sentence.push(word);
        }
        let mut rendered = sentence.join(" ");
        if let Some(first) = rendered.get_mut(0..1) {
            first.make_ascii_uppercase();
        }
        if !body.is_empty() {
            body.push(' ');
        }
        body.push_str(&rendered);
        body.push('.');
    }
    body
}

/// The bundled 145-document corpus: 73 machine-style and 72 human-style
/// abstracts, regenerated identically on every call.
pub fn demo_corpus() -> Corpus {
    let mut corpus = Corpus::new();
    for i in 0..(DEMO_LLM_DOCS + DEMO_HUMAN_DOCS) {
        let label = if i < DEMO_LLM_DOCS {
            Label::Llm
        } else {
            Label::Human
        };
        let contrarian = i % 19 == 5;
        let afinn_free = i % 11 == 3;
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(DEMO_SEED, i as u64));

        let subject = TITLE_SUBJECTS[i % TITLE_SUBJECTS.len()];
        let context = TITLE_CONTEXTS[(i / TITLE_SUBJECTS.len() + i) % TITLE_CONTEXTS.len()];
        let title = format!("{subject} {context}");
        let body = generate_body(&mut rng, label, contrarian, afinn_free);

        let (id, source) = match label {
            Label::Llm => (format!("gpt-{:03}", i + 1), "ChatGPT v3".to_string()),
            Label::Human => (
                format!("np-{:03}", i - DEMO_LLM_DOCS + 1),
                "New Phytologist".to_string(),
            ),
        };
        corpus
            .push(Document {
                id,
                title,
                body,
                label,
                source,
            })
            .expect("demo documents are valid");
    }
    corpus
}
