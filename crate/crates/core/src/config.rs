//! Tunable thresholds, catalog file locations, and the bundled defaults.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::EmotionSpec;

/// Environment variable naming a configuration file to load instead of the
/// defaults.
pub const CONFIG_ENV: &str = "NL2DOMAIN_CONFIG";

pub(crate) const EMOTIONS_TOML: &str = include_str!("../resources/emotions.toml");

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{what} is malformed: {message}")]
    Format { what: String, message: String },
    #[error("{0}")]
    Invalid(String),
}

impl ConfigError {
    pub(crate) fn format(what: impl Into<String>, message: impl ToString) -> Self {
        ConfigError::Format { what: what.into(), message: message.to_string() }
    }
}

/// Reads a resource file, mapping IO failures to [`ConfigError::Io`].
pub fn read_file(path: &Path) -> Result<String, ConfigError> {
    std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })
}

#[derive(Deserialize)]
struct EmotionFile {
    emotion: Vec<EmotionSpec>,
}

/// Parses an emotion catalog file.
pub fn parse_emotions(text: &str) -> Result<Vec<EmotionSpec>, ConfigError> {
    let file: EmotionFile = toml::from_str(text).map_err(|e| ConfigError::format("emotion catalog", e))?;
    for e in &file.emotion {
        if e.pad.iter().any(|c| !(-1.0..=1.0).contains(c)) {
            return Err(ConfigError::Invalid(format!("emotion {} has a PAD coordinate outside [-1, 1]", e.name)));
        }
    }
    Ok(file.emotion)
}

/// The bundled emotion catalog.
pub fn default_emotions() -> Vec<EmotionSpec> {
    parse_emotions(EMOTIONS_TOML).expect("bundled emotion catalog is valid")
}

/// Where ConceptNet edges come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConceptNetMode {
    /// Read the fixture store only; never touches the network.
    #[default]
    Replay,
    /// Query the live API.
    Live,
    /// Query the live API and append every edge to the fixture store.
    Record,
}

/// Pipeline settings. Every path is optional; absent paths fall back to
/// the catalogs embedded in the library.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Minimum cosine for a condition to reuse an existing state.
    pub matcher_threshold: f64,
    /// Minimum cosine between a ConceptNet concept and an affect target.
    pub affect_trigger_threshold: f64,
    /// Minimum cosine between a state and an affect target for a
    /// missing-rule suggestion.
    pub feedback_threshold: f64,
    pub min_pre: usize,
    pub min_post: usize,
    pub conceptnet_min_weight: f64,
    pub conceptnet_page_size: usize,
    pub conceptnet_mode: ConceptNetMode,
    pub conceptnet_endpoint: String,
    /// Unmatched conditions are reported instead of creating new states.
    pub strict: bool,
    pub embeddings: Option<PathBuf>,
    pub patterns: Option<PathBuf>,
    pub rules: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub emotions: Option<PathBuf>,
    pub prompts: Option<PathBuf>,
    pub offline_conceptnet: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            matcher_threshold: 0.75,
            affect_trigger_threshold: 0.6,
            feedback_threshold: 0.6,
            min_pre: 1,
            min_post: 1,
            conceptnet_min_weight: 1.0,
            conceptnet_page_size: 50,
            conceptnet_mode: ConceptNetMode::Replay,
            conceptnet_endpoint: "https://api.conceptnet.io".to_string(),
            strict: false,
            embeddings: None,
            patterns: None,
            rules: None,
            lexicon: None,
            emotions: None,
            prompts: None,
            offline_conceptnet: None,
        }
    }
}

impl Config {
    /// Parses a TOML configuration; relative paths resolve against `base`.
    pub fn from_toml(text: &str, base: Option<&Path>) -> Result<Self, ConfigError> {
        let mut cfg: Config = toml::from_str(text).map_err(|e| ConfigError::format("configuration", e))?;
        if let Some(base) = base {
            for p in [
                &mut cfg.embeddings,
                &mut cfg.patterns,
                &mut cfg.rules,
                &mut cfg.lexicon,
                &mut cfg.emotions,
                &mut cfg.prompts,
                &mut cfg.offline_conceptnet,
            ]
            .into_iter()
            .flatten()
            {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
        }
        cfg.check()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        Config::from_toml(&read_file(path)?, path.parent())
    }

    /// Loads the file named by [`CONFIG_ENV`], or the defaults when unset.
    pub fn from_env() -> Result<Self, ConfigError> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Config::from_file(Path::new(&p)),
            _ => Ok(Config::default()),
        }
    }

    pub fn check(&self) -> Result<(), ConfigError> {
        for (name, v) in [
            ("matcher_threshold", self.matcher_threshold),
            ("affect_trigger_threshold", self.affect_trigger_threshold),
            ("feedback_threshold", self.feedback_threshold),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ConfigError::Invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if self.conceptnet_page_size == 0 {
            return Err(ConfigError::Invalid("conceptnet_page_size must be at least 1".into()));
        }
        Ok(())
    }

    /// Emotion catalog named by the configuration.
    pub fn load_emotions(&self) -> Result<Vec<EmotionSpec>, ConfigError> {
        match &self.emotions {
            Some(p) => parse_emotions(&read_file(p)?),
            None => Ok(default_emotions()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_emotions_load() {
        let names: Vec<_> = default_emotions().into_iter().map(|e| e.name.to_string()).collect();
        assert_eq!(names, ["anger", "joy", "fear", "sadness", "surprise", "disgust", "hunger"]);
    }

    #[test]
    fn partial_file_keeps_defaults_and_resolves_paths() {
        let cfg =
            Config::from_toml("matcher_threshold = 0.8\nembeddings = \"vec.txt\"", Some(Path::new("/data"))).unwrap();
        assert_eq!(cfg.matcher_threshold, 0.8);
        assert_eq!(cfg.feedback_threshold, 0.6);
        assert_eq!(cfg.embeddings, Some(PathBuf::from("/data/vec.txt")));
    }

    #[test]
    fn unknown_keys_and_bad_values_rejected() {
        assert!(Config::from_toml("threshhold = 1", None).is_err());
        assert!(Config::from_toml("matcher_threshold = -1.0", None).is_err());
    }
}
