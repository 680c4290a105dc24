use std::collections::BTreeMap;

use super::CorpusError;

/// A line-based `key = value` file. Blank lines and lines starting with `#`
/// are ignored; keys are case-sensitive and `_` is read as `-`, so
/// `budget_attempts` and `budget-attempts` are the same key. A later line
/// overrides an earlier one.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(&normalize(key)).map(String::as_str)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(normalize(key), value.into());
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn normalize(key: &str) -> String {
    key.trim().replace('_', "-")
}

pub fn parse_config(text: &str) -> Result<Config, CorpusError> {
    let mut config = Config::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CorpusError::Config {
                line: i + 1,
                message: format!("expected key = value, found `{line}`"),
            });
        };
        let key = key.trim();
        if key.is_empty() {
            return Err(CorpusError::Config {
                line: i + 1,
                message: "empty key".into(),
            });
        }
        config.set(key, value.trim());
    }
    Ok(config)
}
