//! End-to-end training pipeline: preprocessing, feature extraction, the
//! multi-label strategy, and a serializable model envelope that carries
//! everything needed to reproduce predictions, plus a fingerprint guarding
//! against mismatched preprocessing or feature configurations.

use crate::corpus::{Dataset, Document, LabelVector, SplitSpec};
use crate::error::{Error, Result};
use crate::features::{
    embed_document, fit_tfidf, stack, transform_tfidf, Analyzer, EmbeddingTable, FeatureKind,
    FeatureVector, TfidfConfig, TfidfModel,
};
use crate::metrics::{evaluate_predictions, EvalReport};
use crate::multilabel::{
    train_chain, train_ovr, BaseParams, DenseProjection, MultiLabelModel, Strategy,
};
use crate::par;
use crate::rng::fnv1a;
use crate::textprep::{preprocess, PreprocessConfig, TokenizedDocument};
use serde::{Deserialize, Serialize};

/// Default number of sparse columns projected densely for tree learners.
pub const DEFAULT_TOP_K_DENSE: usize = 2000;

/// Everything one training run needs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub preprocess: PreprocessConfig,
    pub feature_kind: FeatureKind,
    pub tfidf: TfidfConfig,
    pub strategy: Strategy,
    pub params: BaseParams,
    /// Sparse columns kept in the dense projection for tree learners.
    pub top_k_dense: usize,
    /// Seed for model training (already derived per configuration).
    pub seed: u64,
}

impl PipelineConfig {
    pub fn new(
        feature_kind: FeatureKind,
        tfidf: TfidfConfig,
        strategy: Strategy,
        params: BaseParams,
        seed: u64,
    ) -> Self {
        PipelineConfig {
            preprocess: PreprocessConfig::default(),
            feature_kind,
            tfidf,
            strategy,
            params,
            top_k_dense: DEFAULT_TOP_K_DENSE,
            seed,
        }
    }
}

/// Embedding file metadata carried in the envelope; the vectors themselves
/// are reloaded from the path at prediction time.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbeddingInfo {
    pub path: String,
    pub dimension: usize,
    pub source_name: String,
}

/// A trained, serializable pipeline.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineModel {
    pub preprocess: PreprocessConfig,
    pub feature_kind: FeatureKind,
    pub tfidf_config: TfidfConfig,
    pub tfidf: Option<TfidfModel>,
    pub embedding: Option<EmbeddingInfo>,
    pub multilabel: MultiLabelModel,
    pub split: SplitSpec,
    pub seed: u64,
    pub fingerprint: String,
}

/// Fingerprint of the preprocessing and feature configuration. Two models
/// agree on this exactly when their text pipelines and feature spaces are
/// interchangeable.
pub fn config_fingerprint(
    preprocess: &PreprocessConfig,
    feature_kind: FeatureKind,
    tfidf: &TfidfConfig,
    embedding: Option<&EmbeddingInfo>,
    vocab_size: usize,
) -> String {
    let canonical = format!(
        "sw={};cm={};flags={}{}{}{}{}{}{};feat={};analyzer={};ngram={},{};min_df={};emb={};dim={};vocab={}",
        preprocess.stopword_list_version,
        preprocess.contraction_map_version,
        preprocess.lowercase as u8,
        preprocess.strip_numbers as u8,
        preprocess.strip_punctuation as u8,
        preprocess.collapse_repeats as u8,
        preprocess.expand_contractions as u8,
        preprocess.stem as u8,
        preprocess.remove_stopwords as u8,
        feature_kind.as_str(),
        tfidf.analyzer.as_str(),
        tfidf.ngram_range.0,
        tfidf.ngram_range.1,
        tfidf.min_df,
        embedding.map_or("none", |e| e.source_name.as_str()),
        embedding.map_or(0, |e| e.dimension),
        vocab_size,
    );
    format!("{:016x}", fnv1a(canonical.as_bytes()))
}

fn featurize_one(
    kind: FeatureKind,
    tfidf: Option<&TfidfModel>,
    table: Option<&EmbeddingTable>,
    doc: &TokenizedDocument,
) -> FeatureVector {
    let (sparse, width) = match tfidf {
        Some(model) if kind.uses_tfidf() => (transform_tfidf(model, doc), model.width()),
        _ => (Vec::new(), 0),
    };
    let dense = match table {
        Some(table) if kind.uses_embeddings() => Some(embed_document(table, &doc.tokens)),
        _ => None,
    };
    stack(sparse, width, dense)
}

fn require_embeddings<'t>(
    kind: FeatureKind,
    table: Option<&'t EmbeddingTable>,
) -> Result<Option<&'t EmbeddingTable>> {
    if kind.uses_embeddings() && table.is_none() {
        return Err(Error::Config(
            "this feature configuration needs an embedding file (--embeddings)".into(),
        ));
    }
    Ok(if kind.uses_embeddings() { table } else { None })
}

/// Preprocess a document set in parallel.
pub fn preprocess_documents(docs: &[Document], config: &PreprocessConfig) -> Vec<TokenizedDocument> {
    par::map_slice(docs, |d| preprocess(&d.id, &d.text, config))
}

/// Train a full pipeline on (already split) training documents.
pub fn train_pipeline(
    train_docs: &[Document],
    config: &PipelineConfig,
    embeddings: Option<&EmbeddingTable>,
    embedding_path: Option<&str>,
    split: SplitSpec,
) -> Result<PipelineModel> {
    config.preprocess.validate()?;
    if train_docs.is_empty() {
        return Err(Error::Data("cannot train on an empty document set".into()));
    }
    let tokenized = preprocess_documents(train_docs, &config.preprocess);
    let labels: Vec<[bool; 4]> = train_docs.iter().map(|d| d.labels.bits()).collect();
    train_pipeline_pretokenized(&tokenized, &labels, config, None, embeddings, embedding_path, split)
}

/// Train from already preprocessed documents, optionally reusing a TF-IDF
/// model fitted on the same documents with the same configuration. Grid
/// runs use this to share work between configurations; results are
/// identical to [`train_pipeline`].
pub fn train_pipeline_pretokenized(
    tokenized: &[TokenizedDocument],
    labels: &[[bool; 4]],
    config: &PipelineConfig,
    fitted_tfidf: Option<TfidfModel>,
    embeddings: Option<&EmbeddingTable>,
    embedding_path: Option<&str>,
    split: SplitSpec,
) -> Result<PipelineModel> {
    config.preprocess.validate()?;
    config.tfidf.validate()?;
    if tokenized.is_empty() || tokenized.len() != labels.len() {
        return Err(Error::Data("cannot train on an empty document set".into()));
    }
    let table = require_embeddings(config.feature_kind, embeddings)?;

    let tfidf = if config.feature_kind.uses_tfidf() {
        match fitted_tfidf {
            Some(model) => Some(model),
            None => Some(fit_tfidf(tokenized, &config.tfidf)?),
        }
    } else {
        None
    };

    let x: Vec<FeatureVector> = par::map_slice(tokenized, |doc| {
        featurize_one(config.feature_kind, tfidf.as_ref(), table, doc)
    });
    let y = labels;

    let params = seeded_params(&config.params, config.seed);
    let projection = if params.kind().is_tree_based() {
        Some(DenseProjection {
            sparse_columns: tfidf
                .as_ref()
                .map(|m| m.top_k_columns(config.top_k_dense))
                .unwrap_or_default(),
            dense_len: table.map_or(0, |t| t.dimension),
        })
    } else {
        None
    };

    let mut multilabel = match config.strategy {
        Strategy::OneVsRest => train_ovr(&x, &y, &params, projection)?,
        Strategy::ClassifierChain { order } => train_chain(&x, &y, order, &params, projection)?,
    };

    let embedding = match (table, embedding_path) {
        (Some(t), path) => Some(EmbeddingInfo {
            path: path.unwrap_or("").to_string(),
            dimension: t.dimension,
            source_name: t.source_name.clone(),
        }),
        _ => None,
    };
    let fingerprint = config_fingerprint(
        &config.preprocess,
        config.feature_kind,
        &config.tfidf,
        embedding.as_ref(),
        tfidf.as_ref().map_or(0, |m| m.width()),
    );
    multilabel.feature_fingerprint = fingerprint.clone();

    Ok(PipelineModel {
        preprocess: config.preprocess.clone(),
        feature_kind: config.feature_kind,
        tfidf_config: config.tfidf.clone(),
        tfidf,
        embedding,
        multilabel,
        split,
        seed: config.seed,
        fingerprint,
    })
}

fn seeded_params(params: &BaseParams, seed: u64) -> BaseParams {
    let mut params = params.clone();
    match &mut params {
        BaseParams::Linear(cfg) => cfg.seed = seed,
        BaseParams::Forest(cfg) => cfg.seed = seed,
        BaseParams::Boost(cfg) => cfg.seed = seed,
    }
    params
}

impl PipelineModel {
    /// Verify the stored fingerprint against this build's embedded
    /// resources and the envelope's own configuration.
    pub fn check_fingerprint(&self) -> Result<()> {
        self.preprocess.validate().map_err(|_| Error::FingerprintMismatch {
            model: format!(
                "{}/{}",
                self.preprocess.stopword_list_version, self.preprocess.contraction_map_version
            ),
            current: format!(
                "{}/{}",
                crate::textprep::STOPWORDS_VERSION,
                crate::textprep::CONTRACTIONS_VERSION
            ),
        })?;
        let recomputed = config_fingerprint(
            &self.preprocess,
            self.feature_kind,
            &self.tfidf_config,
            self.embedding.as_ref(),
            self.tfidf.as_ref().map_or(0, |m| m.width()),
        );
        if recomputed != self.fingerprint {
            return Err(Error::FingerprintMismatch {
                model: self.fingerprint.clone(),
                current: recomputed,
            });
        }
        Ok(())
    }

    /// Featurize one raw text with the frozen pipeline.
    pub fn featurize_text(
        &self,
        id: &str,
        text: &str,
        embeddings: Option<&EmbeddingTable>,
    ) -> Result<FeatureVector> {
        let table = require_embeddings(self.feature_kind, embeddings)?;
        let doc = preprocess(id, text, &self.preprocess);
        Ok(featurize_one(
            self.feature_kind,
            self.tfidf.as_ref(),
            table,
            &doc,
        ))
    }

    /// Raw and consistency-forced predictions with per-label scores, in
    /// input order.
    pub fn predict_texts(
        &self,
        items: &[(String, String)],
        embeddings: Option<&EmbeddingTable>,
    ) -> Result<Vec<Prediction>> {
        self.check_fingerprint()?;
        let table = require_embeddings(self.feature_kind, embeddings)?;
        if let (Some(info), Some(t)) = (&self.embedding, table) {
            if t.dimension != info.dimension {
                return Err(Error::Config(format!(
                    "embedding dimension {} does not match the model's {}",
                    t.dimension, info.dimension
                )));
            }
        }
        let results: Vec<Result<Prediction>> = par::map_slice(items, |(id, text)| {
            let fv = self.featurize_text(id, text, table)?;
            let scores = self.multilabel.predict_scores(&fv)?;
            let raw = LabelVector::from_bits(std::array::from_fn(|j| scores[j] > 0.0));
            Ok(Prediction {
                id: id.clone(),
                raw,
                consistent: crate::multilabel::consistency_postprocess(raw),
                scores,
            })
        });
        results.into_iter().collect()
    }

    /// Evaluate raw predictions against gold labels on a test set.
    pub fn evaluate(
        &self,
        test_docs: &[Document],
        embeddings: Option<&EmbeddingTable>,
    ) -> Result<EvalReport> {
        if test_docs.is_empty() {
            return Err(Error::Data("cannot evaluate an empty test set".into()));
        }
        let items: Vec<(String, String)> = test_docs
            .iter()
            .map(|d| (d.id.clone(), d.text.clone()))
            .collect();
        let predictions = self.predict_texts(&items, embeddings)?;
        let y: Vec<[bool; 4]> = test_docs.iter().map(|d| d.labels.bits()).collect();
        let y_hat: Vec<[bool; 4]> = predictions.iter().map(|p| p.raw.bits()).collect();
        evaluate_predictions(&y, &y_hat, &self.fingerprint, self.seed)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(json: &str) -> Result<PipelineModel> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        crate::fsutil::atomic_write(path, self.to_json()?.as_bytes())
    }

    pub fn load(path: &std::path::Path) -> Result<PipelineModel> {
        let json = std::fs::read_to_string(path)?;
        PipelineModel::from_json(&json)
    }
}

/// One prediction record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Prediction {
    pub id: String,
    pub raw: LabelVector,
    pub consistent: LabelVector,
    pub scores: [f64; 4],
}

/// Split a dataset, train on the train part, and return the envelope; the
/// split spec is stored so evaluation can reproduce the same partition.
pub fn train_on_split(
    dataset: &Dataset,
    split_spec: SplitSpec,
    config: &PipelineConfig,
    embeddings: Option<&EmbeddingTable>,
    embedding_path: Option<&str>,
) -> Result<(PipelineModel, Dataset, Dataset)> {
    let (train, test) = crate::corpus::split(dataset, split_spec)?;
    let model = train_pipeline(&train.documents, config, embeddings, embedding_path, split_spec)?;
    Ok((model, train, test))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Source;
    use crate::linear::{LossKind, TrainConfig};
    use crate::synth;

    fn tiny_dataset() -> Dataset {
        synth::generate_learnable_corpus("tiny", Source::AppReview, 160, 42)
    }

    fn linear_config(seed: u64) -> PipelineConfig {
        let mut train_cfg = TrainConfig::new(LossKind::Logistic, seed);
        train_cfg.epochs = 80;
        PipelineConfig::new(
            FeatureKind::TfidfOnly,
            TfidfConfig::new(Analyzer::Char, (3, 3)),
            Strategy::chain_default(),
            BaseParams::Linear(train_cfg),
            seed,
        )
    }

    #[test]
    fn train_evaluate_roundtrip() {
        let ds = tiny_dataset();
        let config = linear_config(7);
        let (model, _train, test) =
            train_on_split(&ds, SplitSpec::new(0.75, 7), &config, None, None).unwrap();
        let report = model.evaluate(&test.documents, None).unwrap();
        assert_eq!(report.n, test.len());
        assert!(report.micro_f1 > 0.5, "f1 = {}", report.micro_f1);
    }

    #[test]
    fn model_json_roundtrip_preserves_predictions() {
        let ds = tiny_dataset();
        let config = linear_config(9);
        let (model, _, test) =
            train_on_split(&ds, SplitSpec::new(0.75, 9), &config, None, None).unwrap();
        let json = model.to_json().unwrap();
        let restored = PipelineModel::from_json(&json).unwrap();
        let items: Vec<(String, String)> = test
            .documents
            .iter()
            .take(10)
            .map(|d| (d.id.clone(), d.text.clone()))
            .collect();
        let a = model.predict_texts(&items, None).unwrap();
        let b = restored.predict_texts(&items, None).unwrap();
        for (pa, pb) in a.iter().zip(&b) {
            assert_eq!(pa.raw, pb.raw);
            assert_eq!(pa.scores, pb.scores);
        }
    }

    #[test]
    fn fingerprint_mismatch_detected() {
        let ds = tiny_dataset();
        let config = linear_config(3);
        let (mut model, _, _) =
            train_on_split(&ds, SplitSpec::new(0.75, 3), &config, None, None).unwrap();
        model.fingerprint = "0000000000000000".into();
        let err = model
            .predict_texts(&[("a".into(), "text".into())], None)
            .unwrap_err();
        assert!(matches!(err, Error::FingerprintMismatch { .. }), "{err}");
    }

    #[test]
    fn embedding_config_requires_table() {
        let ds = tiny_dataset();
        let mut config = linear_config(3);
        config.feature_kind = FeatureKind::EmbeddingOnly;
        let err = train_on_split(&ds, SplitSpec::default(), &config, None, None);
        assert!(err.is_err());
    }

    #[test]
    fn deterministic_training() {
        let ds = tiny_dataset();
        let config = linear_config(11);
        let (a, _, _) =
            train_on_split(&ds, SplitSpec::new(0.75, 11), &config, None, None).unwrap();
        let (b, _, _) =
            train_on_split(&ds, SplitSpec::new(0.75, 11), &config, None, None).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    }
}
