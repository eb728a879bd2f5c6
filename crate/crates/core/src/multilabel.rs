//! One-vs-Rest and Classifier-Chain meta-strategies over binary base
//! learners (linear models, random forests, boosted trees).
//!
//! Chains use teacher forcing: each member trains on the features augmented
//! with the gold labels of its predecessors in the chain order, appended as
//! 0/1 columns after the dense block. Inference feeds the predecessors'
//! predicted bits forward instead. Per-label seeds are derived as
//! `seed + label_index`, for both strategies, so a chain member with no
//! predecessors trains exactly like its One-vs-Rest counterpart.

use crate::corpus::LabelVector;
use crate::error::{Error, Result};
use crate::features::FeatureVector;
use crate::linear::{self, LinearModel, LossKind, TrainConfig};
use crate::par;
use crate::trees::{
    train_forest, train_gbt, BoostConfig, BoostModel, DenseMatrix, ForestConfig, ForestModel,
};
use serde::{Deserialize, Serialize};

pub const NUM_LABELS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "snake_case")]
pub enum Strategy {
    OneVsRest,
    ClassifierChain { order: [usize; NUM_LABELS] },
}

impl Strategy {
    pub fn as_str(&self) -> &'static str {
        match self {
            Strategy::OneVsRest => "ovr",
            Strategy::ClassifierChain { .. } => "cc",
        }
    }

    /// Default chain order: dataset label column order.
    pub fn chain_default() -> Strategy {
        Strategy::ClassifierChain { order: [0, 1, 2, 3] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseKind {
    Lr,
    Svm,
    Rf,
    Gbt,
}

impl BaseKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BaseKind::Lr => "lr",
            BaseKind::Svm => "svm",
            BaseKind::Rf => "rf",
            BaseKind::Gbt => "gbt",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "lr" => Ok(BaseKind::Lr),
            "svm" => Ok(BaseKind::Svm),
            "rf" => Ok(BaseKind::Rf),
            "gbt" | "xgb" => Ok(BaseKind::Gbt),
            other => Err(Error::Config(format!(
                "unknown model {other:?} (expected lr, svm, rf, or gbt)"
            ))),
        }
    }

    pub fn is_tree_based(self) -> bool {
        matches!(self, BaseKind::Rf | BaseKind::Gbt)
    }
}

/// Hyperparameters for the chosen base learner family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum BaseParams {
    Linear(TrainConfig),
    Forest(ForestConfig),
    Boost(BoostConfig),
}

impl BaseParams {
    /// Standard defaults for a base kind; the seed threads through to the
    /// per-label derived seeds.
    pub fn defaults(kind: BaseKind, seed: u64) -> BaseParams {
        match kind {
            BaseKind::Lr => BaseParams::Linear(TrainConfig::new(LossKind::Logistic, seed)),
            BaseKind::Svm => BaseParams::Linear(TrainConfig::new(LossKind::Hinge, seed)),
            BaseKind::Rf => BaseParams::Forest(ForestConfig::new(seed)),
            BaseKind::Gbt => BaseParams::Boost(BoostConfig::new(seed)),
        }
    }

    pub fn kind(&self) -> BaseKind {
        match self {
            BaseParams::Linear(cfg) => match cfg.loss {
                LossKind::Logistic => BaseKind::Lr,
                LossKind::Hinge => BaseKind::Svm,
            },
            BaseParams::Forest(_) => BaseKind::Rf,
            BaseParams::Boost(_) => BaseKind::Gbt,
        }
    }

    fn seed(&self) -> u64 {
        match self {
            BaseParams::Linear(cfg) => cfg.seed,
            BaseParams::Forest(cfg) => cfg.seed,
            BaseParams::Boost(cfg) => cfg.seed,
        }
    }

    fn with_seed(&self, seed: u64) -> BaseParams {
        let mut params = self.clone();
        match &mut params {
            BaseParams::Linear(cfg) => cfg.seed = seed,
            BaseParams::Forest(cfg) => cfg.seed = seed,
            BaseParams::Boost(cfg) => cfg.seed = seed,
        }
        params
    }
}

/// Fixed selection of sparse columns plus the dense block: the dense view
/// tree learners consume. Sparse feature spaces are too wide for exact
/// CART, so trees see the top-K columns by collection frequency.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenseProjection {
    pub sparse_columns: Vec<u32>,
    pub dense_len: usize,
}

impl DenseProjection {
    pub fn width(&self) -> usize {
        self.sparse_columns.len() + self.dense_len
    }

    /// Project one vector; `extra` columns (chain augmentation) follow.
    pub fn project(&self, fv: &FeatureVector, extra: &[f64]) -> Vec<f64> {
        let mut row = vec![0.0; self.width() + extra.len()];
        // sparse_columns and fv.sparse are both sorted by column
        let mut it = fv.sparse.iter().peekable();
        for (slot, &col) in self.sparse_columns.iter().enumerate() {
            while let Some(&&(c, _)) = it.peek() {
                if c < col {
                    it.next();
                } else {
                    break;
                }
            }
            if let Some(&&(c, v)) = it.peek() {
                if c == col {
                    row[slot] = v;
                }
            }
        }
        if let Some(dense) = &fv.dense {
            row[self.sparse_columns.len()..self.sparse_columns.len() + dense.len()]
                .copy_from_slice(dense);
        }
        row[self.width()..].copy_from_slice(extra);
        row
    }
}

/// One trained binary base model.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum BaseModel {
    Linear(LinearModel),
    Forest(ForestModel),
    Boost(BoostModel),
}

impl BaseModel {
    /// Raw decision score: linear margin, forest class-1 fraction minus
    /// one half, or boosting log-odds. Positive means "predict 1".
    fn decision_score(
        &self,
        fv: &FeatureVector,
        extra: &[f64],
        projection: Option<&DenseProjection>,
    ) -> Result<f64> {
        match self {
            BaseModel::Linear(model) => {
                let x = if extra.is_empty() {
                    fv.clone()
                } else {
                    fv.with_dense_appended(extra)
                };
                linear::predict_score(model, &x)
            }
            BaseModel::Forest(model) => {
                let projection = projection.ok_or_else(|| {
                    Error::Config("tree base models require a dense projection".into())
                })?;
                let row = projection.project(fv, extra);
                Ok(model.predict_proba(&row) - 0.5)
            }
            BaseModel::Boost(model) => {
                let projection = projection.ok_or_else(|| {
                    Error::Config("tree base models require a dense projection".into())
                })?;
                let row = projection.project(fv, extra);
                Ok(model.predict_score(&row))
            }
        }
    }
}

/// Strategy metadata plus one trained base model per label. Base models are
/// indexed by label, not by chain position.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultiLabelModel {
    pub strategy: Strategy,
    pub base_kind: BaseKind,
    pub models: Vec<BaseModel>,
    pub projection: Option<DenseProjection>,
    /// Width of the un-augmented feature vectors this model expects.
    pub feature_width: usize,
    /// Fingerprint of the preprocessing/feature configuration; filled in by
    /// the training pipeline.
    pub feature_fingerprint: String,
}

fn check_training_inputs(x: &[FeatureVector], y: &[[bool; NUM_LABELS]]) -> Result<usize> {
    if x.is_empty() || x.len() != y.len() {
        return Err(Error::Data(format!(
            "multi-label training needs matching non-empty inputs, got {} features and {} label rows",
            x.len(),
            y.len()
        )));
    }
    let width = x[0].total_width();
    for fv in x {
        if fv.total_width() != width {
            return Err(Error::WidthMismatch {
                expected: width,
                got: fv.total_width(),
            });
        }
    }
    Ok(width)
}

fn train_base(
    params: &BaseParams,
    projection: Option<&DenseProjection>,
    x: &[FeatureVector],
    aug: &[Vec<f64>],
    y_bits: &[bool],
) -> Result<BaseModel> {
    match params {
        BaseParams::Linear(cfg) => {
            let augmented: Vec<FeatureVector> = if aug.is_empty() || aug[0].is_empty() {
                x.to_vec()
            } else {
                x.iter()
                    .zip(aug)
                    .map(|(fv, extra)| fv.with_dense_appended(extra))
                    .collect()
            };
            Ok(BaseModel::Linear(linear::train_linear(
                &augmented, y_bits, cfg,
            )?))
        }
        BaseParams::Forest(cfg) => {
            let projection = projection.ok_or_else(|| {
                Error::Config("tree base models require a dense projection".into())
            })?;
            let rows: Vec<Vec<f64>> = x
                .iter()
                .enumerate()
                .map(|(i, fv)| projection.project(fv, aug.get(i).map_or(&[][..], Vec::as_slice)))
                .collect();
            let matrix = DenseMatrix::from_rows(rows)?;
            Ok(BaseModel::Forest(train_forest(&matrix, y_bits, cfg)?))
        }
        BaseParams::Boost(cfg) => {
            let projection = projection.ok_or_else(|| {
                Error::Config("tree base models require a dense projection".into())
            })?;
            let rows: Vec<Vec<f64>> = x
                .iter()
                .enumerate()
                .map(|(i, fv)| projection.project(fv, aug.get(i).map_or(&[][..], Vec::as_slice)))
                .collect();
            let matrix = DenseMatrix::from_rows(rows)?;
            Ok(BaseModel::Boost(train_gbt(&matrix, y_bits, cfg)?))
        }
    }
}

/// Train one independent binary model per label on `(X, Y[:, j])`.
/// Label `j`'s model uses derived seed `seed + j`.
pub fn train_ovr(
    x: &[FeatureVector],
    y: &[[bool; NUM_LABELS]],
    params: &BaseParams,
    projection: Option<DenseProjection>,
) -> Result<MultiLabelModel> {
    let width = check_training_inputs(x, y)?;
    let seed = params.seed();
    let models: Vec<Result<BaseModel>> = par::map_range(NUM_LABELS, |j| {
        let y_bits: Vec<bool> = y.iter().map(|row| row[j]).collect();
        let label_params = params.with_seed(seed.wrapping_add(j as u64));
        train_base(&label_params, projection.as_ref(), x, &[], &y_bits)
    });
    let models = models.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(MultiLabelModel {
        strategy: Strategy::OneVsRest,
        base_kind: params.kind(),
        models,
        projection,
        feature_width: width,
        feature_fingerprint: String::new(),
    })
}

fn validate_order(order: &[usize; NUM_LABELS]) -> Result<()> {
    let mut seen = [false; NUM_LABELS];
    for &j in order {
        if j >= NUM_LABELS || seen[j] {
            return Err(Error::Config(format!(
                "chain order {order:?} is not a permutation of 0..{NUM_LABELS}"
            )));
        }
        seen[j] = true;
    }
    Ok(())
}

/// Train a classifier chain: the model at chain position `k` trains on the
/// features augmented with the gold labels of `order[0..k]` and, at
/// inference time, with the predicted labels instead.
pub fn train_chain(
    x: &[FeatureVector],
    y: &[[bool; NUM_LABELS]],
    order: [usize; NUM_LABELS],
    params: &BaseParams,
    projection: Option<DenseProjection>,
) -> Result<MultiLabelModel> {
    let width = check_training_inputs(x, y)?;
    validate_order(&order)?;
    let seed = params.seed();
    let mut models: Vec<Option<BaseModel>> = vec![None; NUM_LABELS];
    for k in 0..NUM_LABELS {
        let label = order[k];
        let aug: Vec<Vec<f64>> = x
            .iter()
            .zip(y)
            .map(|(_, row)| {
                order[..k]
                    .iter()
                    .map(|&p| if row[p] { 1.0 } else { 0.0 })
                    .collect()
            })
            .collect();
        let y_bits: Vec<bool> = y.iter().map(|row| row[label]).collect();
        let label_params = params.with_seed(seed.wrapping_add(label as u64));
        models[label] = Some(train_base(
            &label_params,
            projection.as_ref(),
            x,
            &aug,
            &y_bits,
        )?);
    }
    Ok(MultiLabelModel {
        strategy: Strategy::ClassifierChain { order },
        base_kind: params.kind(),
        models: models.into_iter().map(Option::unwrap).collect(),
        projection,
        feature_width: width,
        feature_fingerprint: String::new(),
    })
}

impl MultiLabelModel {
    /// Raw predicted label vector. One-vs-Rest thresholds the four models
    /// independently; chains feed each decision forward in chain order.
    /// Raw vectors may violate the gold consistency invariant.
    pub fn predict(&self, fv: &FeatureVector) -> Result<LabelVector> {
        if fv.total_width() != self.feature_width {
            return Err(Error::WidthMismatch {
                expected: self.feature_width,
                got: fv.total_width(),
            });
        }
        let scores = self.predict_scores(fv)?;
        Ok(LabelVector::from_bits(std::array::from_fn(|j| {
            scores[j] > 0.0
        })))
    }

    /// Per-label decision scores (positive means "predict 1"), computed the
    /// same way `predict` does.
    pub fn predict_scores(&self, fv: &FeatureVector) -> Result<[f64; NUM_LABELS]> {
        let mut scores = [0.0f64; NUM_LABELS];
        match &self.strategy {
            Strategy::OneVsRest => {
                for j in 0..NUM_LABELS {
                    scores[j] =
                        self.models[j].decision_score(fv, &[], self.projection.as_ref())?;
                }
            }
            Strategy::ClassifierChain { order } => {
                let mut decisions: Vec<f64> = Vec::with_capacity(NUM_LABELS);
                for &label in order {
                    let score =
                        self.models[label].decision_score(fv, &decisions, self.projection.as_ref())?;
                    scores[label] = score;
                    decisions.push(if score > 0.0 { 1.0 } else { 0.0 });
                }
            }
        }
        Ok(scores)
    }

    /// Zero the augmentation weights of every chain member. Only linear
    /// base models represent augmentation as explicit trailing weights.
    pub fn zero_augmentation_weights(&mut self) -> Result<()> {
        let Strategy::ClassifierChain { order } = self.strategy else {
            return Ok(());
        };
        for (k, &label) in order.iter().enumerate() {
            match &mut self.models[label] {
                BaseModel::Linear(model) => {
                    let width = model.weights.len();
                    for w in &mut model.weights[width - k..] {
                        *w = 0.0;
                    }
                }
                _ => {
                    return Err(Error::Config(
                        "augmentation weights are only explicit in linear base models".into(),
                    ))
                }
            }
        }
        Ok(())
    }
}

/// Force the gold-data invariant onto a raw prediction: any issue category
/// clears `non_human_centric`; none sets it.
pub fn consistency_postprocess(raw: LabelVector) -> LabelVector {
    let any_issue = raw.app_usage || raw.inclusiveness || raw.user_reaction;
    LabelVector {
        non_human_centric: !any_issue,
        ..raw
    }
}
