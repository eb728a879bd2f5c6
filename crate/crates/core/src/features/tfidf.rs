//! TF-IDF model fitting and transformation.
//!
//! Term weight = raw count in the document times the smoothed inverse
//! document frequency `ln((1 + N) / (1 + df)) + 1`, followed by L2
//! normalization of the document vector. Vocabulary indices are assigned in
//! lexicographic term order, so fitting is deterministic.

use super::{char_ngrams, word_ngrams};
use crate::error::{Error, Result};
use crate::textprep::TokenizedDocument;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Analyzer {
    Word,
    Char,
}

impl Analyzer {
    pub fn as_str(self) -> &'static str {
        match self {
            Analyzer::Word => "word",
            Analyzer::Char => "char",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "word" => Ok(Analyzer::Word),
            "char" => Ok(Analyzer::Char),
            other => Err(Error::Config(format!(
                "unknown analyzer {other:?} (expected word or char)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TfidfConfig {
    pub analyzer: Analyzer,
    pub ngram_range: (usize, usize),
    /// Minimum document frequency for a term to enter the vocabulary.
    pub min_df: u32,
}

impl TfidfConfig {
    pub fn new(analyzer: Analyzer, ngram_range: (usize, usize)) -> Self {
        TfidfConfig {
            analyzer,
            ngram_range,
            min_df: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (n_min, n_max) = self.ngram_range;
        if n_min < 1 || n_min > n_max {
            return Err(Error::Config(format!(
                "ngram range must satisfy 1 <= n_min <= n_max, got ({n_min},{n_max})"
            )));
        }
        if self.min_df < 1 {
            return Err(Error::Config("min_df must be >= 1".into()));
        }
        Ok(())
    }
}

/// A frozen TF-IDF vocabulary with per-column IDF weights. Serializes as
/// [`TfidfModelJson`]; the fit-only bookkeeping (df, collection frequency)
/// is not part of the wire format.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "TfidfModelJson", into = "TfidfModelJson")]
pub struct TfidfModel {
    pub analyzer: Analyzer,
    pub ngram_range: (usize, usize),
    /// Column index -> term, lexicographically sorted.
    pub vocabulary: Vec<String>,
    term_index: HashMap<String, u32>,
    pub idf: Vec<f64>,
    pub df: Vec<u32>,
    /// Total occurrences of each term across the training corpus. Used to
    /// pick dense projections for tree learners.
    pub collection_freq: Vec<u64>,
    pub n_docs: usize,
}

impl TfidfModel {
    pub fn width(&self) -> usize {
        self.vocabulary.len()
    }

    /// The analyzer's terms for one preprocessed document.
    pub fn terms_of(&self, doc: &TokenizedDocument) -> Vec<String> {
        match self.analyzer {
            Analyzer::Word => word_ngrams(&doc.tokens, self.ngram_range),
            Analyzer::Char => char_ngrams(&doc.normalized_text, self.ngram_range),
        }
    }

    /// Column indices of the `k` terms with the highest collection
    /// frequency (ties broken by column order).
    pub fn top_k_columns(&self, k: usize) -> Vec<u32> {
        let mut cols: Vec<u32> = (0..self.width() as u32).collect();
        cols.sort_by_key(|&c| (std::cmp::Reverse(self.collection_freq[c as usize]), c));
        cols.truncate(k);
        cols.sort_unstable();
        cols
    }
}

/// Learn vocabulary, document frequencies, and IDF weights from a training
/// corpus.
pub fn fit_tfidf(docs: &[TokenizedDocument], config: &TfidfConfig) -> Result<TfidfModel> {
    config.validate()?;
    if docs.is_empty() {
        return Err(Error::Data("cannot fit tf-idf on an empty corpus".into()));
    }
    let mut df: BTreeMap<String, u32> = BTreeMap::new();
    let mut cf: BTreeMap<String, u64> = BTreeMap::new();
    for doc in docs {
        let terms = match config.analyzer {
            Analyzer::Word => word_ngrams(&doc.tokens, config.ngram_range),
            Analyzer::Char => char_ngrams(&doc.normalized_text, config.ngram_range),
        };
        let mut in_this_doc: BTreeMap<String, u64> = BTreeMap::new();
        for term in terms {
            *in_this_doc.entry(term).or_insert(0) += 1;
        }
        for (term, count) in in_this_doc {
            *cf.entry(term.clone()).or_insert(0) += count;
            *df.entry(term).or_insert(0) += 1;
        }
    }
    let n = docs.len();
    let mut vocabulary = Vec::new();
    let mut df_vec = Vec::new();
    let mut cf_vec = Vec::new();
    for (term, d) in df {
        if d >= config.min_df {
            cf_vec.push(cf[&term]);
            vocabulary.push(term);
            df_vec.push(d);
        }
    }
    if vocabulary.is_empty() {
        return Err(Error::Data(
            "tf-idf fit produced an empty vocabulary (no terms in corpus)".into(),
        ));
    }
    let idf = df_vec
        .iter()
        .map(|&d| ((1.0 + n as f64) / (1.0 + d as f64)).ln() + 1.0)
        .collect();
    let term_index = vocabulary
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i as u32))
        .collect();
    Ok(TfidfModel {
        analyzer: config.analyzer,
        ngram_range: config.ngram_range,
        vocabulary,
        term_index,
        idf,
        df: df_vec,
        collection_freq: cf_vec,
        n_docs: n,
    })
}

/// Transform one document into a sorted sparse block: raw term counts
/// weighted by IDF, then L2-normalized. Unseen terms are ignored; a
/// document with no in-vocabulary terms maps to the zero vector.
pub fn transform_tfidf(model: &TfidfModel, doc: &TokenizedDocument) -> Vec<(u32, f64)> {
    let mut counts: HashMap<u32, f64> = HashMap::new();
    for term in model.terms_of(doc) {
        if let Some(&col) = model.term_index.get(&term) {
            *counts.entry(col).or_insert(0.0) += 1.0;
        }
    }
    let mut entries: Vec<(u32, f64)> = counts
        .into_iter()
        .map(|(col, count)| (col, count * model.idf[col as usize]))
        .collect();
    entries.sort_unstable_by_key(|&(col, _)| col);
    let norm = entries.iter().map(|&(_, v)| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        for (_, v) in &mut entries {
            *v /= norm;
        }
    }
    entries
}

/// Serialized form: `{analyzer, ngram_range, vocabulary, idf, n_docs}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct TfidfModelJson {
    pub analyzer: Analyzer,
    pub ngram_range: (usize, usize),
    pub vocabulary: BTreeMap<String, u32>,
    pub idf: Vec<f64>,
    pub n_docs: usize,
}

impl From<&TfidfModel> for TfidfModelJson {
    fn from(model: &TfidfModel) -> Self {
        TfidfModelJson {
            analyzer: model.analyzer,
            ngram_range: model.ngram_range,
            vocabulary: model
                .vocabulary
                .iter()
                .enumerate()
                .map(|(i, t)| (t.clone(), i as u32))
                .collect(),
            idf: model.idf.clone(),
            n_docs: model.n_docs,
        }
    }
}

impl From<TfidfModel> for TfidfModelJson {
    fn from(model: TfidfModel) -> Self {
        (&model).into()
    }
}

impl TryFrom<TfidfModelJson> for TfidfModel {
    type Error = Error;

    fn try_from(json: TfidfModelJson) -> Result<TfidfModel> {
        let width = json.vocabulary.len();
        if json.idf.len() != width {
            return Err(Error::Data(format!(
                "tf-idf model: idf length {} does not match vocabulary size {width}",
                json.idf.len()
            )));
        }
        let mut vocabulary = vec![String::new(); width];
        for (term, col) in &json.vocabulary {
            let col = *col as usize;
            if col >= width {
                return Err(Error::Data(format!(
                    "tf-idf model: column {col} out of range for vocabulary size {width}"
                )));
            }
            vocabulary[col] = term.clone();
        }
        let term_index = json
            .vocabulary
            .iter()
            .map(|(t, &i)| (t.clone(), i))
            .collect();
        Ok(TfidfModel {
            analyzer: json.analyzer,
            ngram_range: json.ngram_range,
            vocabulary,
            term_index,
            idf: json.idf,
            df: Vec::new(),
            collection_freq: Vec::new(),
            n_docs: json.n_docs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textprep::TokenizedDocument;

    fn doc(id: &str, text: &str) -> TokenizedDocument {
        TokenizedDocument {
            doc_id: id.into(),
            tokens: text.split_whitespace().map(str::to_string).collect(),
            normalized_text: text.to_string(),
        }
    }

    fn two_doc_model() -> TfidfModel {
        let docs = [doc("1", "a b"), doc("2", "a c")];
        fit_tfidf(&docs, &TfidfConfig::new(Analyzer::Word, (1, 1))).unwrap()
    }

    #[test]
    fn idf_formula_on_two_doc_corpus() {
        let model = two_doc_model();
        assert_eq!(model.vocabulary, vec!["a", "b", "c"]);
        assert_eq!(model.df, vec![2, 1, 1]);
        assert!((model.idf[0] - 1.0).abs() < 1e-12);
        let expected = (3.0f64 / 2.0).ln() + 1.0; // 1.4054651081081644
        assert!((model.idf[1] - expected).abs() < 1e-12);
    }

    #[test]
    fn single_doc_corpus_idf_is_one() {
        let model = fit_tfidf(
            &[doc("1", "x y z x")],
            &TfidfConfig::new(Analyzer::Word, (1, 1)),
        )
        .unwrap();
        for &v in &model.idf {
            assert!((v - 1.0).abs() < 1e-12);
        }
        // collection frequency counts every occurrence
        let x_col = model.vocabulary.iter().position(|t| t == "x").unwrap();
        assert_eq!(model.collection_freq[x_col], 2);
    }

    #[test]
    fn transform_hand_computed() {
        let model = two_doc_model();
        let sparse = transform_tfidf(&model, &doc("q", "a b"));
        let idf_b = (3.0f64 / 2.0).ln() + 1.0;
        let norm = (1.0 + idf_b * idf_b).sqrt();
        assert_eq!(sparse.len(), 2);
        assert_eq!(sparse[0].0, 0);
        assert!((sparse[0].1 - 1.0 / norm).abs() < 1e-12);
        assert!((sparse[1].1 - idf_b / norm).abs() < 1e-12);
        // rounded literals from the hand derivation
        assert!((sparse[0].1 - 0.57974).abs() < 1e-5);
        assert!((sparse[1].1 - 0.81481).abs() < 1e-5);
    }

    #[test]
    fn unseen_terms_yield_zero_vector() {
        let model = two_doc_model();
        assert!(transform_tfidf(&model, &doc("q", "zz yy")).is_empty());
        assert!(!model.term_index.contains_key("zz"));
    }

    #[test]
    fn duplicate_texts_transform_identically() {
        let model = two_doc_model();
        let a = transform_tfidf(&model, &doc("1", "a b a"));
        let b = transform_tfidf(&model, &doc("2", "a b a"));
        assert_eq!(a, b);
    }

    #[test]
    fn empty_corpus_is_error() {
        assert!(fit_tfidf(&[], &TfidfConfig::new(Analyzer::Word, (1, 1))).is_err());
        assert!(fit_tfidf(&[doc("1", "")], &TfidfConfig::new(Analyzer::Word, (1, 1))).is_err());
    }

    #[test]
    fn min_df_prunes() {
        let docs = [doc("1", "a b"), doc("2", "a c")];
        let mut cfg = TfidfConfig::new(Analyzer::Word, (1, 1));
        cfg.min_df = 2;
        let model = fit_tfidf(&docs, &cfg).unwrap();
        assert_eq!(model.vocabulary, vec!["a"]);
    }

    #[test]
    fn char_analyzer_uses_normalized_text() {
        let docs = [doc("1", "ab cd")];
        let model = fit_tfidf(&docs, &TfidfConfig::new(Analyzer::Char, (2, 2))).unwrap();
        assert!(model.vocabulary.contains(&"b ".to_string()));
    }

    #[test]
    fn json_roundtrip() {
        let model = two_doc_model();
        let json: TfidfModelJson = (&model).into();
        let text = serde_json::to_string(&json).unwrap();
        let back: TfidfModelJson = serde_json::from_str(&text).unwrap();
        let restored: TfidfModel = back.try_into().unwrap();
        assert_eq!(restored.vocabulary, model.vocabulary);
        assert_eq!(restored.idf, model.idf);
        let a = transform_tfidf(&model, &doc("q", "a b"));
        let b = transform_tfidf(&restored, &doc("q", "a b"));
        assert_eq!(a, b);
    }

    #[test]
    fn top_k_by_collection_frequency() {
        let docs = [doc("1", "a a a b c"), doc("2", "b a c c")];
        let model = fit_tfidf(&docs, &TfidfConfig::new(Analyzer::Word, (1, 1))).unwrap();
        // cf: a=4, b=2, c=3
        assert_eq!(model.top_k_columns(2), vec![0, 2]);
        assert_eq!(model.top_k_columns(10), vec![0, 1, 2]);
    }
}
