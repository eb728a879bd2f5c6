//! Binary linear learners: logistic regression and linear SVM, trained with
//! plain deterministic SGD.
//!
//! The objective is `mean loss + (l2_lambda / 2) * ||w||^2` with an
//! unregularized bias. Each epoch shuffles the sample order with a seeded
//! generator and applies sequential updates with learning rate
//! `learning_rate / (1 + epoch)`, so training is bit-reproducible for a
//! fixed seed.

use crate::error::{Error, Result};
use crate::features::FeatureVector;
use crate::rng::SplitMix64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossKind {
    Logistic,
    Hinge,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub loss: LossKind,
    pub l2_lambda: f64,
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
    /// Early stop when the epoch-to-epoch training objective delta falls
    /// below this.
    pub tolerance: f64,
}

impl TrainConfig {
    pub fn new(loss: LossKind, seed: u64) -> Self {
        TrainConfig {
            loss,
            l2_lambda: 1e-4,
            epochs: 50,
            learning_rate: 0.1,
            seed,
            tolerance: 1e-6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.epochs < 1 {
            return Err(Error::Config("epochs must be >= 1".into()));
        }
        if self.l2_lambda < 0.0 {
            return Err(Error::Config("l2_lambda must be >= 0".into()));
        }
        Ok(())
    }
}

/// A trained linear model: `score(x) = w . x + b`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearModel {
    pub loss_kind: LossKind,
    pub bias: f64,
    pub weights: Vec<f64>,
    pub config: TrainConfig,
    /// Per-epoch training objective values; diagnostic only.
    #[serde(skip)]
    pub loss_history: Vec<f64>,
}

fn sigmoid(s: f64) -> f64 {
    if s >= 0.0 {
        1.0 / (1.0 + (-s).exp())
    } else {
        let e = s.exp();
        e / (1.0 + e)
    }
}

/// Per-sample loss at score `s` for gold bit `y`.
pub fn loss_value(loss: LossKind, s: f64, y: bool) -> f64 {
    let ys = if y { s } else { -s };
    match loss {
        // ln(1 + exp(-ys)), stable in both tails
        LossKind::Logistic => {
            if ys > 0.0 {
                (-ys).exp().ln_1p()
            } else {
                -ys + ys.exp().ln_1p()
            }
        }
        LossKind::Hinge => (1.0 - ys).max(0.0),
    }
}

/// The scalar `g` with loss gradient `g * x` in the weights and `g` in the
/// bias. Hinge uses subgradient 0 exactly at the kink `y' * s == 1`.
pub fn score_gradient_factor(loss: LossKind, s: f64, y: bool) -> f64 {
    let y_signed = if y { 1.0 } else { -1.0 };
    match loss {
        LossKind::Logistic => sigmoid(s) - if y { 1.0 } else { 0.0 },
        LossKind::Hinge => {
            if y_signed * s < 1.0 {
                -y_signed
            } else {
                0.0
            }
        }
    }
}

/// Analytic gradient of the unregularized per-sample loss at `(w, b)`.
pub fn loss_gradient(
    loss: LossKind,
    weights: &[f64],
    bias: f64,
    x: &FeatureVector,
    y: bool,
) -> (Vec<f64>, f64) {
    let s = x.dot(weights) + bias;
    let g = score_gradient_factor(loss, s, y);
    let mut grad = vec![0.0; weights.len()];
    x.add_scaled_to(&mut grad, g);
    (grad, g)
}

/// Compare the analytic gradient against central finite differences,
/// returning the maximum relative error over all weight coordinates and the
/// bias. `h` must be positive.
pub fn finite_diff_check(
    loss: LossKind,
    weights: &[f64],
    bias: f64,
    x: &FeatureVector,
    y: bool,
    h: f64,
) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Config("invalid step: h must be > 0".into()));
    }
    let (analytic, analytic_bias) = loss_gradient(loss, weights, bias, x, y);
    let f = |w: &[f64], b: f64| loss_value(loss, x.dot(w) + b, y);
    let rel = |a: f64, n: f64| (a - n).abs() / 1.0_f64.max(a.abs()).max(n.abs());
    let mut w = weights.to_vec();
    let mut max_err = 0.0f64;
    for i in 0..w.len() {
        let orig = w[i];
        w[i] = orig + h;
        let up = f(&w, bias);
        w[i] = orig - h;
        let down = f(&w, bias);
        w[i] = orig;
        max_err = max_err.max(rel(analytic[i], (up - down) / (2.0 * h)));
    }
    let up = f(&w, bias + h);
    let down = f(&w, bias - h);
    max_err = max_err.max(rel(analytic_bias, (up - down) / (2.0 * h)));
    Ok(max_err)
}

/// Mean objective over the training set, including the L2 term.
fn objective(weights: &[f64], bias: f64, x: &[FeatureVector], y: &[bool], config: &TrainConfig) -> f64 {
    let data: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, &yi)| loss_value(config.loss, xi.dot(weights) + bias, yi))
        .sum::<f64>()
        / x.len() as f64;
    let reg = 0.5 * config.l2_lambda * weights.iter().map(|w| w * w).sum::<f64>();
    data + reg
}

/// Train a linear model with seeded SGD. Deterministic for a fixed seed;
/// all-one-class labels are legal and produce a constant-class predictor.
pub fn train_linear(x: &[FeatureVector], y: &[bool], config: &TrainConfig) -> Result<LinearModel> {
    config.validate()?;
    if x.is_empty() || x.len() != y.len() {
        return Err(Error::Data(format!(
            "training needs matching non-empty inputs, got {} features and {} labels",
            x.len(),
            y.len()
        )));
    }
    let width = x[0].total_width();
    for xi in x {
        if xi.total_width() != width {
            return Err(Error::WidthMismatch {
                expected: width,
                got: xi.total_width(),
            });
        }
    }

    // Lazily scaled weights: w = alpha * v. The L2 shrink multiplies alpha,
    // the data gradient touches only the sample's populated columns.
    let mut v = vec![0.0f64; width];
    let mut alpha = 1.0f64;
    let mut bias = 0.0f64;
    let mut rng = SplitMix64::new(config.seed);
    let mut order: Vec<usize> = (0..x.len()).collect();
    let mut loss_history = Vec::with_capacity(config.epochs);
    let mut previous = f64::INFINITY;

    for epoch in 0..config.epochs {
        let lr = config.learning_rate / (1.0 + epoch as f64);
        rng.shuffle(&mut order);
        for &i in &order {
            let xi = &x[i];
            let s = alpha * xi.dot(&v) + bias;
            let g = score_gradient_factor(config.loss, s, y[i]);
            alpha *= 1.0 - lr * config.l2_lambda;
            if alpha < 1e-9 {
                for w in &mut v {
                    *w *= alpha;
                }
                alpha = 1.0;
            }
            if g != 0.0 {
                xi.add_scaled_to(&mut v, -lr * g / alpha);
            }
            bias -= lr * g;
        }
        let weights_now: Vec<f64> = v.iter().map(|w| w * alpha).collect();
        let current = objective(&weights_now, bias, x, y, config);
        loss_history.push(current);
        if (previous - current).abs() < config.tolerance {
            break;
        }
        previous = current;
    }

    let weights = v.into_iter().map(|w| w * alpha).collect();
    Ok(LinearModel {
        loss_kind: config.loss,
        bias,
        weights,
        config: *config,
        loss_history,
    })
}

/// Raw decision score `w . x + b`.
pub fn predict_score(model: &LinearModel, x: &FeatureVector) -> Result<f64> {
    if x.total_width() != model.weights.len() {
        return Err(Error::WidthMismatch {
            expected: model.weights.len(),
            got: x.total_width(),
        });
    }
    Ok(x.dot(&model.weights) + model.bias)
}

/// Thresholded decision: 1 iff score strictly exceeds the threshold. For
/// logistic models a zero score is probability one half, so the default
/// threshold 0 means "predict 1 above 0.5".
pub fn predict_label(model: &LinearModel, x: &FeatureVector, threshold: f64) -> Result<bool> {
    Ok(predict_score(model, x)? > threshold)
}

/// Probability of the positive class under a logistic model.
pub fn predict_probability(model: &LinearModel, x: &FeatureVector) -> Result<f64> {
    match model.loss_kind {
        LossKind::Logistic => Ok(sigmoid(predict_score(model, x)?)),
        LossKind::Hinge => Err(Error::Config(
            "hinge models expose raw margins, not probabilities".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(values: &[f64]) -> FeatureVector {
        FeatureVector {
            sparse: vec![],
            sparse_width: 0,
            dense: Some(values.to_vec()),
        }
    }

    fn and_data() -> (Vec<FeatureVector>, Vec<bool>) {
        let x = vec![
            dense(&[0.0, 0.0]),
            dense(&[0.0, 1.0]),
            dense(&[1.0, 0.0]),
            dense(&[1.0, 1.0]),
        ];
        let y = vec![false, false, false, true];
        (x, y)
    }

    #[test]
    fn logistic_gradient_at_zero() {
        let (grad, gb) = loss_gradient(LossKind::Logistic, &[0.0, 0.0], 0.0, &dense(&[1.0, 0.0]), true);
        assert_eq!(grad, vec![-0.5, 0.0]);
        assert_eq!(gb, -0.5);
    }

    #[test]
    fn hinge_gradient_cases() {
        // margin satisfied: zero gradient
        let (grad, gb) = loss_gradient(LossKind::Hinge, &[2.0], 0.0, &dense(&[1.0]), true);
        assert_eq!(grad, vec![0.0]);
        assert_eq!(gb, 0.0);
        // margin violated at s = 0
        let (grad, gb) = loss_gradient(LossKind::Hinge, &[0.0, 0.0], 0.0, &dense(&[1.0, 1.0]), true);
        assert_eq!(grad, vec![-1.0, -1.0]);
        assert_eq!(gb, -1.0);
    }

    #[test]
    fn finite_difference_agreement() {
        let mut rng = SplitMix64::new(11);
        let mut checked = 0;
        while checked < 100 {
            let w: Vec<f64> = (0..5).map(|_| rng.next_f64() * 4.0 - 2.0).collect();
            let b = rng.next_f64() - 0.5;
            let xv: Vec<f64> = (0..5).map(|_| rng.next_f64() * 2.0 - 1.0).collect();
            let x = dense(&xv);
            let y = rng.bounded(2) == 1;
            for loss in [LossKind::Logistic, LossKind::Hinge] {
                if loss == LossKind::Hinge {
                    let y_signed = if y { 1.0 } else { -1.0 };
                    let margin = y_signed * (x.dot(&w) + b);
                    // stay away from the kink where the subgradient jumps
                    if (margin - 1.0).abs() < 0.1 {
                        continue;
                    }
                }
                let err = finite_diff_check(loss, &w, b, &x, y, 1e-5).unwrap();
                assert!(err <= 1e-5, "{loss:?} gradient error {err}");
            }
            checked += 1;
        }
    }

    #[test]
    fn finite_diff_rejects_zero_step() {
        let err = finite_diff_check(LossKind::Logistic, &[0.0], 0.0, &dense(&[1.0]), true, 0.0);
        assert!(err.unwrap_err().to_string().contains("invalid step"));
    }

    #[test]
    fn and_dataset_reaches_perfect_training_accuracy() {
        let (x, y) = and_data();
        let mut config = TrainConfig::new(LossKind::Logistic, 3);
        config.epochs = 2000;
        config.learning_rate = 0.5;
        config.tolerance = 0.0;
        let model = train_linear(&x, &y, &config).unwrap();
        for (xi, &yi) in x.iter().zip(&y) {
            assert_eq!(predict_label(&model, xi, 0.0).unwrap(), yi);
        }
    }

    #[test]
    fn and_dataset_loss_non_increasing() {
        let (x, y) = and_data();
        let mut config = TrainConfig::new(LossKind::Logistic, 3);
        config.epochs = 200;
        config.learning_rate = 0.5;
        config.tolerance = 0.0;
        let model = train_linear(&x, &y, &config).unwrap();
        for pair in model.loss_history.windows(2) {
            assert!(
                pair[1] <= pair[0] + 1e-8,
                "loss increased: {} -> {}",
                pair[0],
                pair[1]
            );
        }
    }

    #[test]
    fn constant_labels_predict_constant() {
        let (x, _) = and_data();
        let y = vec![true; 4];
        let model = train_linear(&x, &y, &TrainConfig::new(LossKind::Logistic, 7)).unwrap();
        for xi in &x {
            assert!(predict_label(&model, xi, 0.0).unwrap());
        }
    }

    #[test]
    fn same_seed_bit_identical_weights() {
        let (x, y) = and_data();
        let config = TrainConfig::new(LossKind::Hinge, 42);
        let a = train_linear(&x, &y, &config).unwrap();
        let b = train_linear(&x, &y, &config).unwrap();
        assert_eq!(a.weights, b.weights);
        assert_eq!(a.bias, b.bias);
        let mut other = config;
        other.seed = 43;
        let c = train_linear(&x, &y, &other).unwrap();
        assert_ne!(a.weights, c.weights);
    }

    #[test]
    fn predict_score_contract() {
        let model = LinearModel {
            loss_kind: LossKind::Logistic,
            bias: 0.0,
            weights: vec![1.0, -1.0],
            config: TrainConfig::new(LossKind::Logistic, 0),
            loss_history: vec![],
        };
        assert_eq!(predict_score(&model, &dense(&[2.0, 1.0])).unwrap(), 1.0);
        assert_eq!(predict_score(&model, &dense(&[0.0, 0.0])).unwrap(), 0.0);
        assert!(predict_score(&model, &dense(&[1.0])).is_err());
        // strict threshold: score 0 -> label 0; positive -> 1; negative -> 0
        assert!(!predict_label(&model, &dense(&[0.0, 0.0]), 0.0).unwrap());
        assert!(predict_label(&model, &dense(&[1.2, 1.0]), 0.0).unwrap());
        assert!(!predict_label(&model, &dense(&[0.0, 3.0]), 0.0).unwrap());
    }

    #[test]
    fn width_mismatch_in_training() {
        let x = vec![dense(&[1.0, 2.0]), dense(&[1.0])];
        let y = vec![true, false];
        assert!(matches!(
            train_linear(&x, &y, &TrainConfig::new(LossKind::Logistic, 0)),
            Err(Error::WidthMismatch { .. })
        ));
    }

    #[test]
    fn serialized_model_echoes_config() {
        let (x, y) = and_data();
        let config = TrainConfig::new(LossKind::Logistic, 5);
        let model = train_linear(&x, &y, &config).unwrap();
        let json = serde_json::to_value(&model).unwrap();
        assert_eq!(json["loss_kind"], "logistic");
        assert_eq!(json["config"]["seed"], 5);
        assert!(json["weights"].as_array().unwrap().len() == 2);
        let back: LinearModel = serde_json::from_value(json).unwrap();
        assert_eq!(back.weights, model.weights);
    }
}
