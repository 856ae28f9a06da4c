//! Command-line pipeline: corpus building, exploratory stats, feature
//! extraction, training, evaluation and prediction.
//!
//! Machine-readable results go to stdout as JSON lines; prose and
//! warnings go to stderr.

use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sentiforest::corpus::{self, endpoint, Label, LabelMapping};
use sentiforest::error::Error;
use sentiforest::eval::{self, ImputationMode};
use sentiforest::features::{self, SchemaOptions};
use sentiforest::forest::{self, ForestConfig, SplitCriterion};
use sentiforest::lexicon::{JoinOn, LexiconSet};
use sentiforest::textprep::{self, FrequencyTable};
use sentiforest::{extract_features, Result};

#[derive(Parser)]
#[command(
    name = "sentiforest",
    version,
    about = "Classify texts as human- or machine-written from sentiment-lexicon features"
)]
struct Cli {
    /// Cap worker threads (0 = one per core)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// On-disk name of the machine class
    #[arg(long, global = true, default_value = "ChatGPT")]
    label_llm: String,

    /// On-disk name of the human class
    #[arg(long, global = true, default_value = "NewPhytologist")]
    label_human: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct LexiconArgs {
    /// Directory holding afinn.txt, bing.csv, nrc.txt, loughran.csv
    /// (bundled editions used when omitted)
    #[arg(long)]
    lexicon_dir: Option<PathBuf>,

    /// Stop-word list, one word per line (bundled SMART list when omitted)
    #[arg(long)]
    stop_list: Option<PathBuf>,

    /// Join lexicons against stemmed tokens instead of surface forms
    #[arg(long, default_value_t = false)]
    join_on_stems: bool,
}

impl LexiconArgs {
    fn lexicons(&self) -> Result<LexiconSet> {
        match &self.lexicon_dir {
            Some(dir) => LexiconSet::load_dir(dir),
            None => Ok(LexiconSet::bundled()),
        }
    }

    fn stops(&self) -> Result<HashSet<String>> {
        match &self.stop_list {
            Some(path) => textprep::load_stop_list(path),
            None => Ok(textprep::smart_stopwords()),
        }
    }

    fn join_on(&self) -> JoinOn {
        if self.join_on_stems {
            JoinOn::Stems
        } else {
            JoinOn::Tokens
        }
    }
}

#[derive(Args)]
struct ForestArgs {
    /// Number of trees in the ensemble (100000 reproduces the published run)
    #[arg(long, default_value_t = 1000)]
    trees: usize,

    /// Minimum instances per leaf
    #[arg(long, default_value_t = 1)]
    min_leaf: usize,

    /// Features examined per split (0 = floor(log2(d)) + 1)
    #[arg(long, default_value_t = 0)]
    k_features: usize,

    /// Master RNG seed
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Split criterion
    #[arg(long, value_enum, default_value_t = CriterionArg::Entropy)]
    criterion: CriterionArg,

    /// Minimum numeric-class variance proportion (stored; inert for
    /// classification)
    #[arg(long, default_value_t = 1e-3)]
    min_variance_prop: f64,

    /// Exclude the cleaned-word count from the model inputs
    #[arg(long, default_value_t = false)]
    drop_n_words: bool,

    /// Expose the AFINN imputation flag as a model input
    #[arg(long, default_value_t = false)]
    include_missing_flag: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum CriterionArg {
    Entropy,
    Gini,
}

impl ForestArgs {
    fn config(&self) -> ForestConfig {
        ForestConfig {
            n_trees: self.trees,
            min_leaf: self.min_leaf,
            min_variance_prop: self.min_variance_prop,
            k_features: self.k_features,
            seed: self.seed,
            criterion: match self.criterion {
                CriterionArg::Entropy => SplitCriterion::Entropy,
                CriterionArg::Gini => SplitCriterion::Gini,
            },
        }
    }

    fn schema_options(&self) -> SchemaOptions {
        SchemaOptions {
            drop_n_words: self.drop_n_words,
            include_missing_flag: self.include_missing_flag,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Pair human texts with endpoint generations into a labelled corpus
    BuildCorpus {
        /// CSV of id,title rows
        #[arg(long)]
        titles: PathBuf,
        /// JSONL of {"id", "body"} human texts, one per title
        #[arg(long)]
        human_texts: PathBuf,
        /// Endpoint config JSON {url, model, auth_env, response_path, max_parallel}
        #[arg(long)]
        endpoint: PathBuf,
        /// Output corpus JSONL
        #[arg(long)]
        out: PathBuf,
        /// Generation length budget in characters
        #[arg(long, default_value_t = 1500)]
        max_chars: usize,
        /// Query template with {title} and {max_chars} placeholders
        #[arg(long, default_value = corpus::DEFAULT_PROMPT_TEMPLATE)]
        template: String,
        /// Source string recorded on the human documents
        #[arg(long, default_value = "human")]
        human_source: String,
    },

    /// Emit per-class stem frequency tables and their correlation
    Explore {
        /// Corpus JSONL or CSV
        #[arg(long)]
        corpus: PathBuf,
        /// Rows per frequency table
        #[arg(long, default_value_t = 35)]
        top: usize,
        /// Output directory for freq_<class>.csv and correlation.json
        #[arg(long)]
        out_dir: PathBuf,
        #[command(flatten)]
        lexicon: LexiconArgs,
    },

    /// Corpus JSONL/CSV to feature CSV
    Featurize {
        #[arg(long)]
        corpus: PathBuf,
        /// Output feature CSV (a .meta.json sidecar is written next to it)
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        lexicon: LexiconArgs,
    },

    /// Feature CSV to trained model file
    Train {
        #[arg(long)]
        features: PathBuf,
        /// Output model JSON
        #[arg(long)]
        out: PathBuf,
        /// Record the wall-clock time in the model metadata (off by
        /// default so identical runs write identical files)
        #[arg(long, default_value_t = false)]
        stamp_time: bool,
        #[command(flatten)]
        forest: ForestArgs,
    },

    /// Stratified k-fold cross-validation over a feature CSV
    Evaluate {
        #[arg(long)]
        features: PathBuf,
        /// Number of folds
        #[arg(long, default_value_t = 10)]
        folds: usize,
        /// Impute once globally before folding instead of per training fold
        #[arg(long, default_value_t = false)]
        paper_mode: bool,
        /// Also write the JSON report to this path
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        forest: ForestArgs,
    },

    /// Label new texts with a trained model
    Predict {
        /// Model JSON produced by `train`
        #[arg(long)]
        model: PathBuf,
        /// JSONL of {"id", "title", "body"} texts (labels, if present, are ignored)
        #[arg(long)]
        corpus: PathBuf,
        #[command(flatten)]
        lexicon: LexiconArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mapping = LabelMapping::new(cli.label_llm.clone(), cli.label_human.clone());

    let threads = cli.threads;
    let run = || match run_command(cli.command, &mapping) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::SchemaMismatch { .. } | Error::ModelVersion { .. } => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    };

    if threads == 0 {
        run()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        pool.install(run)
    }
}

fn emit(value: serde_json::Value) {
    println!("{value}");
}

fn run_command(command: Command, mapping: &LabelMapping) -> Result<()> {
    match command {
        Command::BuildCorpus {
            titles,
            human_texts,
            endpoint: endpoint_path,
            out,
            max_chars,
            template,
            human_source,
        } => {
            let titles = load_titles(&titles)?;
            let human = load_human_texts(&human_texts)?;
            let config = endpoint::EndpointConfig::load(&endpoint_path)?;
            eprintln!(
                "building paired corpus: {} titles via {} (parallelism {})",
                titles.len(),
                config.url,
                config.max_parallel
            );
            let corpus = endpoint::build_paired_corpus(
                &titles,
                &config,
                &human,
                &human_source,
                &template,
                max_chars,
                &out,
                mapping,
            )?;
            let counts = corpus.class_counts();
            emit(serde_json::json!({
                "written": corpus.len(),
                "path": out,
                "class_counts": {
                    mapping.name(Label::Llm): counts.get(&Label::Llm).copied().unwrap_or(0),
                    mapping.name(Label::Human): counts.get(&Label::Human).copied().unwrap_or(0),
                },
            }));
            Ok(())
        }

        Command::Explore {
            corpus: corpus_path,
            top,
            out_dir,
            lexicon,
        } => {
            let corpus = corpus::load_corpus(
                &corpus_path,
                corpus::format_for_path(&corpus_path),
                mapping,
            )?;
            let stops = lexicon.stops()?;
            std::fs::create_dir_all(&out_dir).map_err(|e| Error::io(&out_dir, e))?;

            let mut tables = Vec::new();
            for label in Label::ALL {
                let docs: Vec<_> = corpus
                    .documents()
                    .iter()
                    .filter(|d| d.label == label)
                    .map(|d| textprep::tokenize(&d.id, &d.body, &stops))
                    .collect();
                let table = FrequencyTable::from_docs(docs.iter());
                let rows = textprep::top_stems(&table, top);
                let path = out_dir.join(format!("freq_{}.csv", mapping.name(label)));
                let file = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
                textprep::write_frequency_csv(&rows, file)?;
                emit(serde_json::json!({
                    "class": mapping.name(label),
                    "distinct_stems": table.len(),
                    "rows": rows.len(),
                    "path": path,
                }));
                tables.push(table);
            }

            let correlation = textprep::frequency_correlation(&tables[0], &tables[1])?;
            let path = out_dir.join("correlation.json");
            std::fs::write(&path, serde_json::to_string_pretty(&correlation)?)
                .map_err(|e| Error::io(&path, e))?;
            emit(serde_json::to_value(correlation)?);
            Ok(())
        }

        Command::Featurize {
            corpus: corpus_path,
            out,
            lexicon,
        } => {
            let corpus = corpus::load_corpus(
                &corpus_path,
                corpus::format_for_path(&corpus_path),
                mapping,
            )?;
            corpus.check_two_classes()?;
            let lexicons = lexicon.lexicons()?;
            for warning in lexicons.warnings() {
                eprintln!("warning: {warning}");
            }
            let dataset = extract_features(
                &corpus,
                &lexicon.stops()?,
                &lexicons,
                mapping,
                lexicon.join_on(),
            )?;
            features::save_dataset(&dataset, &out, mapping)?;
            emit(serde_json::json!({
                "documents": dataset.len(),
                "features": dataset.schema.len(),
                "path": out,
            }));
            Ok(())
        }

        Command::Train {
            features: features_path,
            out,
            stamp_time,
            forest: forest_args,
        } => {
            let dataset = features::load_dataset(&features_path, mapping)?;
            let dataset = features::impute(dataset)?;
            let config = forest_args.config();
            let started = std::time::Instant::now();
            let mut model =
                forest::train_with_options(&dataset, &config, forest_args.schema_options())?;
            let wall = started.elapsed().as_secs_f64();
            eprintln!(
                "trained {} trees on {} instances x {} features in {:.2} s",
                config.n_trees,
                dataset.len(),
                model.schema.len(),
                wall
            );
            if stamp_time {
                model.metadata.trained_at = Some(unix_timestamp());
            }
            forest::save_model(&model, &out)?;
            emit(serde_json::json!({
                "model": out,
                "trees": config.n_trees,
                "features": model.schema.len(),
                "classes": model.classes,
            }));
            Ok(())
        }

        Command::Evaluate {
            features: features_path,
            folds,
            paper_mode,
            report,
            forest: forest_args,
        } => {
            let dataset = features::load_dataset(&features_path, mapping)?;
            let mode = if paper_mode {
                ImputationMode::Global
            } else {
                ImputationMode::FoldLocal
            };
            let result = eval::cross_validate(
                &dataset,
                &forest_args.config(),
                folds,
                forest_args.seed,
                forest_args.schema_options(),
                mode,
            )?;
            eprintln!("{}", result.render_text());
            if let Some(path) = report {
                std::fs::write(&path, result.to_json()).map_err(|e| Error::io(&path, e))?;
            }
            println!("{}", result.to_json());
            Ok(())
        }

        Command::Predict {
            model: model_path,
            corpus: corpus_path,
            lexicon,
        } => {
            let model = forest::load_model(&model_path)?;
            let lexicons = lexicon.lexicons()?;
            if !model.lexicon_digests.is_empty() && model.lexicon_digests != *lexicons.digests() {
                eprintln!(
                    "warning: lexicon digests differ from the ones recorded at training time"
                );
            }
            let stops = lexicon.stops()?;
            for (id, body) in load_unlabelled(&corpus_path)? {
                let tokens = textprep::tokenize(&id, &body, &stops);
                let hits =
                    sentiforest::lexicon::join_hits_on(&tokens, &lexicons, lexicon.join_on());
                // placeholder label; prediction never reads it
                let fv = features::featurize(&tokens, Label::Human, &hits)?;
                let proba = model.predict_proba(&fv)?;
                let winner = forest::argmax(&proba);
                let proba_map: BTreeMap<&str, f64> = model
                    .classes
                    .iter()
                    .map(String::as_str)
                    .zip(proba.iter().copied())
                    .collect();
                emit(serde_json::json!({
                    "id": id,
                    "label": model.classes[winner],
                    "proba": proba_map,
                }));
            }
            Ok(())
        }
    }
}

fn unix_timestamp() -> String {
    use std::time::{SystemTime, UNIX_EPOCH};
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    secs.to_string()
}

/// CSV of id,title rows.
fn load_titles(path: &Path) -> Result<Vec<(String, String)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(Error::Csv)?;
    let mut titles = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        match (record.get(0), record.get(1)) {
            (Some(id), Some(title)) => titles.push((id.to_string(), title.to_string())),
            _ => {
                return Err(Error::MalformedRecord {
                    path: path.to_path_buf(),
                    line: i + 2,
                    msg: "expected id,title".into(),
                })
            }
        }
    }
    Ok(titles)
}

/// JSONL of {"id", "body"} records.
fn load_human_texts(path: &Path) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (id, body) in load_unlabelled(path)? {
        map.insert(id, body);
    }
    Ok(map)
}

/// JSONL texts where only "id" and "body" are required.
fn load_unlabelled(path: &Path) -> Result<Vec<(String, String)>> {
    let body = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in body.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value =
            serde_json::from_str(line).map_err(|e| Error::MalformedRecord {
                path: path.to_path_buf(),
                line: i + 1,
                msg: e.to_string(),
            })?;
        let id = value.get("id").and_then(|v| v.as_str());
        let text = value.get("body").and_then(|v| v.as_str());
        match (id, text) {
            (Some(id), Some(text)) => out.push((id.to_string(), text.to_string())),
            _ => {
                return Err(Error::MalformedRecord {
                    path: path.to_path_buf(),
                    line: i + 1,
                    msg: "expected {\"id\", \"body\"}".into(),
                })
            }
        }
    }
    Ok(out)
}
