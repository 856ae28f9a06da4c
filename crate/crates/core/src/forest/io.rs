//! Model persistence: a single JSON document with an integrity checksum.

use std::path::Path;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use super::ForestModel;
use crate::error::{Error, Result};
use crate::features;

pub const MODEL_VERSION: u32 = 1;

fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Serialize a model to its on-disk JSON form. The checksum covers the
/// exact bytes of the `model` value.
pub fn model_to_json(model: &ForestModel) -> Result<String> {
    let body = serde_json::to_string(model)?;
    let checksum = sha256_hex(body.as_bytes());
    Ok(format!(
        "{{\"version\":{MODEL_VERSION},\"checksum\":\"{checksum}\",\"model\":{body}}}"
    ))
}

pub fn save_model(model: &ForestModel, path: &Path) -> Result<()> {
    std::fs::write(path, model_to_json(model)?).map_err(|e| Error::io(path, e))
}

#[derive(Deserialize)]
struct ModelFile<'a> {
    version: u32,
    checksum: String,
    #[serde(borrow)]
    model: &'a serde_json::value::RawValue,
}

/// Parse and verify a model JSON document: version, checksum, and that
/// the stored schema matches the stored schema options.
pub fn model_from_json(body: &str) -> Result<ForestModel> {
    let file: ModelFile = serde_json::from_str(body).map_err(|e| Error::CorruptModel {
        reason: e.to_string(),
    })?;
    if file.version != MODEL_VERSION {
        return Err(Error::ModelVersion {
            found: file.version,
            supported: MODEL_VERSION,
        });
    }
    let raw = file.model.get();
    if sha256_hex(raw.as_bytes()) != file.checksum {
        return Err(Error::CorruptModel {
            reason: "checksum mismatch".to_string(),
        });
    }
    let model: ForestModel = serde_json::from_str(raw)?;

    let expected = features::schema(model.schema_options);
    if model.schema != expected {
        return Err(Error::SchemaMismatch {
            expected,
            got: model.schema,
        });
    }
    if let Some(max) = model.trees.iter().filter_map(|t| t.max_feature_index()).max() {
        if max >= model.schema.len() {
            return Err(Error::CorruptModel {
                reason: format!(
                    "tree references feature index {max} outside schema of {}",
                    model.schema.len()
                ),
            });
        }
    }
    Ok(model)
}

pub fn load_model(path: &Path) -> Result<ForestModel> {
    let body = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    model_from_json(&body)
}
