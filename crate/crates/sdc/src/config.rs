//! Plain-text `key = value` run configuration.
//!
//! One pair per line, `#` comments, blank lines ignored. Keys are
//! case-sensitive; unknown keys and repeated keys are errors so that typos
//! surface before a long run starts.

use std::collections::BTreeMap;

use crate::formats::FormatError;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

/// Keys accepted by `exp` commands.
pub const KNOWN_KEYS: [&str; 9] = [
    "seed", "shots", "p", "encoder", "workers", "out", "rounds", "quiet", "dump",
];

impl Config {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: String| FormatError::Parse {
                line: i + 1,
                message: m,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, found {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            if !KNOWN_KEYS.contains(&key) {
                return Err(err(format!("unknown key {key:?}")));
            }
            if values.insert(key.to_string(), value.to_string()).is_some() {
                return Err(err(format!("key {key:?} given twice")));
            }
        }
        Ok(Config { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Sets `key` unless `value` is `None`; used to let flags win.
    pub fn overlay(&mut self, key: &str, value: Option<String>) {
        if let Some(v) = value {
            self.values.insert(key.to_string(), v);
        }
    }
}

/// Parses a comma-separated list of probabilities in `[0, 1]`.
pub fn parse_p_list(s: &str) -> Result<Vec<f64>, String> {
    let ps = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<f64>() {
            Ok(p) if (0.0..=1.0).contains(&p) => Ok(p),
            _ => Err(format!("probability {t:?} is not a number in [0, 1]")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    if ps.is_empty() {
        return Err("empty probability list".into());
    }
    Ok(ps)
}
