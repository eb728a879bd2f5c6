//! Feature extraction: TF-IDF over word or character n-grams, pre-trained
//! embedding pooling, and stacked sparse+dense feature vectors.

mod embed;
mod tfidf;

pub use embed::{embed_document, load_embeddings, EmbeddingTable};
pub use tfidf::{fit_tfidf, transform_tfidf, Analyzer, TfidfConfig, TfidfModel};

use serde::{Deserialize, Serialize};

/// All contiguous character n-grams of each length in `[n_min, n_max]`.
/// Spaces count as characters; text shorter than `n` contributes nothing
/// for that length.
pub fn char_ngrams(text: &str, range: (usize, usize)) -> Vec<String> {
    let (n_min, n_max) = range;
    debug_assert!(n_min >= 1 && n_min <= n_max);
    let chars: Vec<char> = text.chars().collect();
    let mut grams = Vec::new();
    for n in n_min..=n_max {
        if chars.len() < n {
            continue;
        }
        for window in chars.windows(n) {
            grams.push(window.iter().collect());
        }
    }
    grams
}

/// Contiguous token n-grams joined by single spaces.
pub fn word_ngrams(tokens: &[String], range: (usize, usize)) -> Vec<String> {
    let (n_min, n_max) = range;
    debug_assert!(n_min >= 1 && n_min <= n_max);
    let mut grams = Vec::new();
    for n in n_min..=n_max {
        if tokens.len() < n {
            continue;
        }
        for window in tokens.windows(n) {
            grams.push(window.join(" "));
        }
    }
    grams
}

/// A sparse TF-IDF block optionally followed by a dense embedding block.
/// Sparse indices are strictly increasing and live in `[0, sparse_width)`;
/// dense values occupy columns `[sparse_width, total_width)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub sparse: Vec<(u32, f64)>,
    pub sparse_width: usize,
    pub dense: Option<Vec<f64>>,
}

impl FeatureVector {
    pub fn total_width(&self) -> usize {
        self.sparse_width + self.dense.as_ref().map_or(0, Vec::len)
    }

    /// Dot product against a dense weight vector covering `total_width`
    /// columns (callers may pass longer vectors whose tail corresponds to
    /// augmentation columns handled separately).
    pub fn dot(&self, weights: &[f64]) -> f64 {
        let mut acc = 0.0;
        for &(i, v) in &self.sparse {
            acc += v * weights[i as usize];
        }
        if let Some(dense) = &self.dense {
            let base = self.sparse_width;
            for (j, &v) in dense.iter().enumerate() {
                acc += v * weights[base + j];
            }
        }
        acc
    }

    /// `out[i] += scale * x[i]` for every populated column.
    pub fn add_scaled_to(&self, out: &mut [f64], scale: f64) {
        for &(i, v) in &self.sparse {
            out[i as usize] += scale * v;
        }
        if let Some(dense) = &self.dense {
            let base = self.sparse_width;
            for (j, &v) in dense.iter().enumerate() {
                out[base + j] += scale * v;
            }
        }
    }

    /// Copy with extra dense columns appended after the dense block.
    pub fn with_dense_appended(&self, extra: &[f64]) -> FeatureVector {
        let mut dense = self.dense.clone().unwrap_or_default();
        dense.extend_from_slice(extra);
        FeatureVector {
            sparse: self.sparse.clone(),
            sparse_width: self.sparse_width,
            dense: if dense.is_empty() { None } else { Some(dense) },
        }
    }

    /// Densified copy, mostly for test oracles.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.total_width()];
        self.add_scaled_to(&mut out, 1.0);
        out
    }
}

/// Concatenate a sparse TF-IDF block and a dense embedding block. The
/// sparse block comes in already L2-normalized; the dense block is
/// L2-normalized here unless it is all zeros.
pub fn stack(sparse: Vec<(u32, f64)>, sparse_width: usize, dense: Option<Vec<f64>>) -> FeatureVector {
    let dense = dense.map(|mut v| {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            for x in &mut v {
                *x /= norm;
            }
        }
        v
    });
    FeatureVector {
        sparse,
        sparse_width,
        dense,
    }
}

/// Which blocks a configuration uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKind {
    TfidfOnly,
    EmbeddingOnly,
    Stacked,
}

impl FeatureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FeatureKind::TfidfOnly => "tfidf",
            FeatureKind::EmbeddingOnly => "w2v",
            FeatureKind::Stacked => "stack",
        }
    }

    pub fn parse(s: &str) -> crate::Result<Self> {
        match s {
            "tfidf" => Ok(FeatureKind::TfidfOnly),
            "w2v" | "word2vec" => Ok(FeatureKind::EmbeddingOnly),
            "stack" | "stacked" => Ok(FeatureKind::Stacked),
            other => Err(crate::Error::Config(format!(
                "unknown feature kind {other:?} (expected tfidf, w2v, or stack)"
            ))),
        }
    }

    pub fn uses_tfidf(self) -> bool {
        matches!(self, FeatureKind::TfidfOnly | FeatureKind::Stacked)
    }

    pub fn uses_embeddings(self) -> bool {
        matches!(self, FeatureKind::EmbeddingOnly | FeatureKind::Stacked)
    }
}
