//! Gradient boosting with logistic loss: stagewise regression trees fit to
//! the negative gradient of the loss at the current scores, applied with
//! shrinkage. The initial score is the base-rate log-odds. Rounds are
//! strictly sequential; there is no row or column subsampling.

use super::{build_tree, BinnedMatrix, Criterion, DecisionTree, DenseMatrix, TreeParams};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoostConfig {
    pub n_rounds: usize,
    pub max_depth: usize,
    /// Learning rate applied to each tree's output.
    pub shrinkage: f64,
    pub min_samples_leaf: usize,
    pub seed: u64,
}

impl BoostConfig {
    pub fn new(seed: u64) -> Self {
        BoostConfig {
            n_rounds: 100,
            max_depth: 3,
            shrinkage: 0.1,
            min_samples_leaf: 1,
            seed,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoostModel {
    /// Base-rate log-odds all scores start from.
    pub initial_score: f64,
    pub trees: Vec<DecisionTree>,
    pub config: BoostConfig,
    pub n_features: usize,
    /// Mean training logistic loss after each round; diagnostic only.
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

fn mean_logistic_loss(scores: &[f64], y: &[bool]) -> f64 {
    scores
        .iter()
        .zip(y)
        .map(|(&s, &yi)| crate::linear::loss_value(crate::linear::LossKind::Logistic, s, yi))
        .sum::<f64>()
        / y.len() as f64
}

/// Train a boosted ensemble. Zero rounds is legal and yields the constant
/// base-rate predictor.
pub fn train_gbt(x: &DenseMatrix, y: &[bool], config: &BoostConfig) -> Result<BoostModel> {
    if x.n_rows() == 0 || x.n_rows() != y.len() {
        return Err(Error::Data(format!(
            "boosting needs matching non-empty inputs, got {} rows and {} labels",
            x.n_rows(),
            y.len()
        )));
    }
    let n = x.n_rows();
    let base_rate = (y.iter().filter(|&&b| b).count() as f64 / n as f64).clamp(1e-6, 1.0 - 1e-6);
    let initial_score = (base_rate / (1.0 - base_rate)).ln();

    let binned = BinnedMatrix::new(x);
    let params = TreeParams {
        criterion: Criterion::Sse,
        max_depth: config.max_depth,
        min_samples_leaf: config.min_samples_leaf,
        features_per_split: None,
    };

    let mut scores = vec![initial_score; n];
    let mut residuals = vec![0.0f64; n];
    let mut trees = Vec::with_capacity(config.n_rounds);
    let mut loss_history = Vec::with_capacity(config.n_rounds);

    for _round in 0..config.n_rounds {
        for i in 0..n {
            let target = if y[i] { 1.0 } else { 0.0 };
            residuals[i] = target - sigmoid(scores[i]);
        }
        let tree = build_tree(
            &binned,
            &residuals,
            (0..n as u32).collect(),
            &params,
            0,
        );
        for i in 0..n {
            scores[i] += config.shrinkage * tree.predict(x.row(i));
        }
        trees.push(tree);
        loss_history.push(mean_logistic_loss(&scores, y));
    }

    Ok(BoostModel {
        initial_score,
        trees,
        config: *config,
        n_features: x.n_cols(),
        loss_history,
    })
}

impl BoostModel {
    /// Raw additive score: initial log-odds plus shrunken tree outputs,
    /// summed in round order.
    pub fn predict_score(&self, row: &[f64]) -> f64 {
        let mut score = self.initial_score;
        for tree in &self.trees {
            score += self.config.shrinkage * tree.predict(row);
        }
        score
    }

    pub fn predict_proba(&self, row: &[f64]) -> f64 {
        sigmoid(self.predict_score(row))
    }

    pub fn predict(&self, row: &[f64]) -> bool {
        self.predict_score(row) > 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(rows: &[&[f64]]) -> DenseMatrix {
        DenseMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn eight_points() -> (DenseMatrix, Vec<bool>) {
        let x = matrix(&[
            &[0.0, 0.3],
            &[0.1, 0.8],
            &[0.2, 0.1],
            &[0.3, 0.9],
            &[0.7, 0.2],
            &[0.8, 0.7],
            &[0.9, 0.4],
            &[1.0, 0.6],
        ]);
        let y = vec![false, false, false, false, true, true, true, true];
        (x, y)
    }

    #[test]
    fn zero_rounds_is_base_rate_log_odds() {
        let (x, y) = eight_points();
        let mut config = BoostConfig::new(0);
        config.n_rounds = 0;
        let model = train_gbt(&x, &y, &config).unwrap();
        let expected = (0.5f64 / 0.5).ln();
        for i in 0..x.n_rows() {
            assert_eq!(model.predict_score(x.row(i)), expected);
        }
    }

    #[test]
    fn zero_shrinkage_never_moves() {
        let (x, y) = eight_points();
        let mut config = BoostConfig::new(0);
        config.shrinkage = 0.0;
        config.n_rounds = 10;
        let model = train_gbt(&x, &y, &config).unwrap();
        for i in 0..x.n_rows() {
            assert_eq!(model.predict_score(x.row(i)), model.initial_score);
        }
    }

    #[test]
    fn separable_data_reaches_perfect_training_accuracy() {
        let (x, y) = eight_points();
        let model = train_gbt(&x, &y, &BoostConfig::new(0)).unwrap();
        // brute-force check every training point
        for i in 0..x.n_rows() {
            assert_eq!(model.predict(x.row(i)), y[i], "row {i}");
        }
    }

    #[test]
    fn training_loss_non_increasing() {
        let (x, y) = eight_points();
        let model = train_gbt(&x, &y, &BoostConfig::new(0)).unwrap();
        for pair in model.loss_history.windows(2) {
            assert!(
                pair[1] <= pair[0] + 1e-10,
                "loss increased: {} -> {}",
                pair[0],
                pair[1]
            );
        }
    }

    #[test]
    fn constant_labels_stay_finite() {
        let (x, _) = eight_points();
        let y = vec![true; 8];
        let model = train_gbt(&x, &y, &BoostConfig::new(0)).unwrap();
        for i in 0..8 {
            assert!(model.predict_score(x.row(i)).is_finite());
            assert!(model.predict(x.row(i)));
        }
        for tree in &model.trees {
            for node in &tree.nodes {
                if let super::super::TreeNode::Leaf { value } = node {
                    assert!(value.is_finite());
                }
            }
        }
    }

    #[test]
    fn deterministic_across_runs() {
        let (x, y) = eight_points();
        let config = BoostConfig::new(0);
        let a = train_gbt(&x, &y, &config).unwrap();
        let b = train_gbt(&x, &y, &config).unwrap();
        assert_eq!(a.trees, b.trees);
        assert_eq!(a.initial_score, b.initial_score);
    }
}
