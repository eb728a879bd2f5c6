//! Text preprocessing: case folding, contraction expansion, noise removal,
//! tokenization, stopword removal, and stemming, applied in that fixed
//! order. Contractions are expanded before punctuation is stripped because
//! the apostrophes are needed to match map keys.
//!
//! All functions are pure; documents can be preprocessed in parallel.

mod resources;
mod stemmer;

pub use resources::{CONTRACTIONS_VERSION, STOPWORDS_VERSION};
pub use stemmer::stem;

use crate::error::{Error, Result};
use regex::Regex;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// Switches for each preprocessing step plus the resource table versions
/// the pipeline was built against.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreprocessConfig {
    pub lowercase: bool,
    pub strip_numbers: bool,
    pub strip_punctuation: bool,
    pub collapse_repeats: bool,
    pub expand_contractions: bool,
    pub stem: bool,
    pub remove_stopwords: bool,
    pub stopword_list_version: String,
    pub contraction_map_version: String,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        PreprocessConfig {
            lowercase: true,
            strip_numbers: true,
            strip_punctuation: true,
            collapse_repeats: true,
            expand_contractions: true,
            stem: true,
            remove_stopwords: true,
            stopword_list_version: STOPWORDS_VERSION.to_string(),
            contraction_map_version: CONTRACTIONS_VERSION.to_string(),
        }
    }
}

impl PreprocessConfig {
    /// All steps off: tokens are the whitespace tokens of the raw text.
    pub fn disabled() -> Self {
        PreprocessConfig {
            lowercase: false,
            strip_numbers: false,
            strip_punctuation: false,
            collapse_repeats: false,
            expand_contractions: false,
            stem: false,
            remove_stopwords: false,
            ..PreprocessConfig::default()
        }
    }

    /// Check that the named resource versions are the ones embedded in this
    /// build.
    pub fn validate(&self) -> Result<()> {
        if self.stopword_list_version != STOPWORDS_VERSION {
            return Err(Error::Config(format!(
                "unknown stopword list version {:?} (embedded: {STOPWORDS_VERSION:?})",
                self.stopword_list_version
            )));
        }
        if self.contraction_map_version != CONTRACTIONS_VERSION {
            return Err(Error::Config(format!(
                "unknown contraction map version {:?} (embedded: {CONTRACTIONS_VERSION:?})",
                self.contraction_map_version
            )));
        }
        Ok(())
    }
}

/// The preprocessed form of one document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizedDocument {
    pub doc_id: String,
    pub tokens: Vec<String>,
    /// Final tokens joined by single spaces.
    pub normalized_text: String,
}

/// Unicode-lowercase the text.
pub fn normalize_case(text: &str) -> String {
    text.to_lowercase()
}

fn word_run_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"[A-Za-z']+").unwrap())
}

/// Replace every contraction in the embedded map with its expansion.
/// Matching is word-boundary anchored: a candidate is a maximal run of
/// letters and apostrophes, so the longest form always wins and keys never
/// match inside larger words. Expects lowercased text; the typographic
/// apostrophe is normalized to `'` first.
pub fn expand_contractions(text: &str) -> String {
    let text = text.replace('\u{2019}', "'");
    let map = resources::contraction_map();
    word_run_regex()
        .replace_all(&text, |caps: &regex::Captures<'_>| {
            let run = &caps[0];
            match map.get(run) {
                Some(expansion) => (*expansion).to_string(),
                None => run.to_string(),
            }
        })
        .into_owned()
}

fn strip_noise_with(
    text: &str,
    strip_numbers: bool,
    strip_punctuation: bool,
    collapse_repeats: bool,
) -> String {
    let mut cleaned = String::with_capacity(text.len());
    for c in text.chars() {
        if c.is_numeric() {
            if strip_numbers {
                continue;
            }
            cleaned.push(c);
        } else if c.is_alphabetic() || c.is_whitespace() {
            cleaned.push(c);
        } else if strip_punctuation {
            cleaned.push(' ');
        } else {
            cleaned.push(c);
        }
    }
    let collapsed = if collapse_repeats {
        let mut out = String::with_capacity(cleaned.len());
        let mut run_char = '\0';
        let mut run_len = 0usize;
        for c in cleaned.chars() {
            if c == run_char && c.is_alphabetic() {
                run_len += 1;
            } else {
                run_char = c;
                run_len = 1;
            }
            if run_len <= 2 {
                out.push(c);
            }
        }
        out
    } else {
        cleaned
    };
    collapsed.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Remove digits, replace punctuation and special characters with spaces,
/// collapse runs of three or more identical letters to two, and normalize
/// whitespace.
pub fn strip_noise(text: &str) -> String {
    strip_noise_with(text, true, true, true)
}

/// Split on whitespace, dropping empty tokens.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_string).collect()
}

/// Drop tokens found in the embedded stopword list.
pub fn remove_stopwords(tokens: Vec<String>) -> Vec<String> {
    let set = resources::stopword_set();
    tokens
        .into_iter()
        .filter(|t| !set.contains(t.as_str()))
        .collect()
}

/// Run the full pipeline over one text.
pub fn preprocess_text(text: &str, config: &PreprocessConfig) -> (Vec<String>, String) {
    let mut current = if config.lowercase {
        normalize_case(text)
    } else {
        text.to_string()
    };
    if config.expand_contractions {
        current = expand_contractions(&current);
    }
    current = strip_noise_with(
        &current,
        config.strip_numbers,
        config.strip_punctuation,
        config.collapse_repeats,
    );
    let mut tokens = tokenize(&current);
    if config.remove_stopwords {
        tokens = remove_stopwords(tokens);
    }
    if config.stem {
        tokens = tokens.iter().map(|t| stem(t)).collect();
    }
    let normalized_text = tokens.join(" ");
    (tokens, normalized_text)
}

/// Run the full pipeline, keeping the document id.
pub fn preprocess(doc_id: &str, text: &str, config: &PreprocessConfig) -> TokenizedDocument {
    let (tokens, normalized_text) = preprocess_text(text, config);
    TokenizedDocument {
        doc_id: doc_id.to_string(),
        tokens,
        normalized_text,
    }
}
