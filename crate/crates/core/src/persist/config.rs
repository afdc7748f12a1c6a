//! JSON search configuration.
//!
//! ```json
//! {
//!   "target": {"n": 12, "k": 6, "d": 4, "type": "I"},
//!   "strategy": {"disable": ["mu_condition"], "order": "desc",
//!                "limits": {"max_solutions": 10}},
//!   "sink": {"path": "out", "silent": false}
//! }
//! ```
//!
//! The target may also be given as top-level `n`, `k`, `d`, `type` keys.

use std::path::Path;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::search::SearchConfig;

const TARGET_KEYS: [&str; 4] = ["n", "k", "d", "type"];

pub fn parse_config(text: &str) -> Result<SearchConfig> {
    let config = parse_config_unvalidated(text)?;
    config.validate()?;
    Ok(config)
}

/// Parses without the semantic checks, for callers that still override
/// fields before validating.
pub fn parse_config_unvalidated(text: &str) -> Result<SearchConfig> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::config("<root>", format!("invalid JSON: {e}")))?;
    let Value::Object(mut map) = value else {
        return Err(Error::config("<root>", "expected a JSON object"));
    };
    if TARGET_KEYS.iter().any(|k| map.contains_key(*k)) {
        if map.contains_key("target") {
            return Err(Error::config(
                "target",
                "give the target either as a \"target\" section or as top-level keys, not both",
            ));
        }
        let mut target = Map::new();
        for key in TARGET_KEYS {
            if let Some(v) = map.remove(key) {
                target.insert(key.to_string(), v);
            }
        }
        map.insert("target".to_string(), Value::Object(target));
    }
    let config: SearchConfig = serde_path_to_error::deserialize(Value::Object(map)).map_err(|e| {
        let path = e.path().to_string();
        Error::config(if path == "." { "<root>".to_string() } else { path }, e.into_inner().to_string())
    })?;
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<SearchConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

pub fn to_json(config: &SearchConfig) -> String {
    serde_json::to_string_pretty(config).expect("config serializes")
}
