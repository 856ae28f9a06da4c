//! Generic chat-completion endpoint client used to build the LLM half of
//! a paired corpus.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{render_prompt, save_corpus, Corpus, Document, GenerationRequest, Label, LabelMapping};
use crate::error::{Error, Result};

fn default_max_parallel() -> usize {
    1
}

fn default_retry_base_ms() -> u64 {
    250
}

/// Text-generation endpoint description. The auth token is read from the
/// environment variable named in `auth_env`, never stored in the file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EndpointConfig {
    pub url: String,
    pub model: String,
    pub auth_env: String,
    /// Dotted path to the generated text inside the response JSON,
    /// e.g. `choices.0.message.content`.
    pub response_path: String,
    #[serde(default = "default_max_parallel")]
    pub max_parallel: usize,
    /// First backoff delay; doubles on each of the (at most 3) retries.
    #[serde(default = "default_retry_base_ms")]
    pub retry_base_ms: u64,
}

impl EndpointConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let body = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&body)?)
    }

    fn auth_token(&self) -> Result<String> {
        std::env::var(&self.auth_env).map_err(|_| Error::MissingAuthToken {
            var: self.auth_env.clone(),
        })
    }
}

/// Follow a dotted path (`a.b.0.c`) through a JSON value.
fn extract_path<'a>(value: &'a serde_json::Value, path: &str) -> Option<&'a serde_json::Value> {
    let mut cursor = value;
    for segment in path.split('.') {
        cursor = match segment.parse::<usize>() {
            Ok(index) => cursor.get(index)?,
            Err(_) => cursor.get(segment)?,
        };
    }
    Some(cursor)
}

const MAX_RETRIES: u32 = 3;

fn generate_one(
    client: &reqwest::blocking::Client,
    config: &EndpointConfig,
    token: &str,
    id: &str,
    prompt: &str,
) -> Result<String> {
    let payload = serde_json::json!({ "model": config.model, "prompt": prompt });
    let mut last_err: Option<Error> = None;
    for attempt in 0..=MAX_RETRIES {
        if attempt > 0 {
            let delay = config.retry_base_ms << (attempt - 1);
            std::thread::sleep(Duration::from_millis(delay));
        }
        let response = client
            .post(&config.url)
            .bearer_auth(token)
            .json(&payload)
            .send()
            .and_then(|r| r.error_for_status());
        match response {
            Ok(response) => {
                let value: serde_json::Value = response.json()?;
                let text = extract_path(&value, &config.response_path)
                    .and_then(|v| v.as_str())
                    .unwrap_or("")
                    .trim()
                    .to_string();
                if text.is_empty() {
                    return Err(Error::EmptyGeneration { id: id.to_string() });
                }
                return Ok(text);
            }
            Err(e) => last_err = Some(Error::Http(e)),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

/// Failure record persisted next to a partial corpus.
#[derive(Debug, Serialize, Deserialize)]
pub struct FailureManifest {
    pub failures: Vec<FailedTitle>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FailedTitle {
    pub id: String,
    pub title: String,
    pub error: String,
}

/// Build a paired corpus: for every `(id, title)` one Human document from
/// `human_texts` and one LLM document generated through the endpoint.
///
/// Requests run on up to `max_parallel` workers; output order follows the
/// input title order regardless of completion order. On any generation
/// failure the successful pairs are still persisted and a failure manifest
/// is written next to the corpus.
#[allow(clippy::too_many_arguments)]
pub fn build_paired_corpus(
    titles: &[(String, String)],
    config: &EndpointConfig,
    human_texts: &BTreeMap<String, String>,
    human_source: &str,
    template: &str,
    max_chars: usize,
    out_path: &Path,
    mapping: &LabelMapping,
) -> Result<Corpus> {
    for (id, _) in titles {
        if !human_texts.contains_key(id) {
            return Err(Error::MalformedRecord {
                path: PathBuf::from("<human texts>"),
                line: 0,
                msg: format!("no human text for title id {id:?}"),
            });
        }
    }
    let token = config.auth_token()?;

    let results: Vec<Option<std::result::Result<String, String>>> =
        vec![None; titles.len()];
    let results = Mutex::new(results);
    let queue = Mutex::new((0..titles.len()).collect::<std::collections::VecDeque<_>>());
    let workers = config.max_parallel.max(1).min(titles.len().max(1));

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| {
                let client = reqwest::blocking::Client::new();
                loop {
                    let next = queue.lock().expect("queue lock").pop_front();
                    let Some(index) = next else { break };
                    let (id, title) = &titles[index];
                    let outcome = render_prompt(&GenerationRequest {
                        title: title.clone(),
                        max_chars,
                        prompt_template: template.to_string(),
                    })
                    .and_then(|prompt| generate_one(&client, config, &token, id, &prompt))
                    .map_err(|e| e.to_string());
                    results.lock().expect("results lock")[index] = Some(outcome);
                }
            });
        }
    });

    let results = results.into_inner().expect("results lock");
    let mut corpus = Corpus::new();
    let mut failures = Vec::new();
    for (index, (id, title)) in titles.iter().enumerate() {
        match results[index].as_ref().expect("every index processed") {
            Ok(generated) => {
                corpus.push(Document {
                    id: format!("{id}.human"),
                    title: title.clone(),
                    body: human_texts[id].clone(),
                    label: Label::Human,
                    source: human_source.to_string(),
                })?;
                corpus.push(Document {
                    id: format!("{id}.llm"),
                    title: title.clone(),
                    body: generated.clone(),
                    label: Label::Llm,
                    source: config.model.clone(),
                })?;
            }
            Err(e) => failures.push(FailedTitle {
                id: id.clone(),
                title: title.clone(),
                error: e.clone(),
            }),
        }
    }

    save_corpus(&corpus, out_path, mapping)?;
    if !failures.is_empty() {
        let manifest_path = manifest_path(out_path);
        let manifest = FailureManifest { failures };
        std::fs::write(
            &manifest_path,
            serde_json::to_string_pretty(&manifest)?,
        )
        .map_err(|e| Error::io(&manifest_path, e))?;
        return Err(Error::GenerationFailed {
            failed_ids: manifest.failures.into_iter().map(|f| f.id).collect(),
            manifest: manifest_path,
        });
    }
    Ok(corpus)
}

/// `corpus.jsonl` gets its failures recorded in `corpus.jsonl.failures.json`.
pub fn manifest_path(out_path: &Path) -> PathBuf {
    let mut name = out_path.as_os_str().to_os_string();
    name.push(".failures.json");
    PathBuf::from(name)
}
