//! Random forest over CART trees: bootstrap samples, per-split feature
//! subsampling, and leaf-fraction averaging.

use super::{build_tree, BinnedMatrix, Criterion, DecisionTree, DenseMatrix, TreeParams};
use crate::error::{Error, Result};
use crate::par;
use crate::rng::{derive_seed, SplitMix64};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureSubsample {
    All,
    Sqrt,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub n_trees: usize,
    pub max_depth: usize,
    pub min_samples_leaf: usize,
    pub feature_subsample: FeatureSubsample,
    pub bootstrap: bool,
    pub seed: u64,
}

impl ForestConfig {
    pub fn new(seed: u64) -> Self {
        ForestConfig {
            n_trees: 100,
            max_depth: 12,
            min_samples_leaf: 1,
            feature_subsample: FeatureSubsample::Sqrt,
            bootstrap: true,
            seed,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ForestModel {
    pub trees: Vec<DecisionTree>,
    pub config: ForestConfig,
    pub n_features: usize,
}

/// Train a forest. Trees use derived per-tree seeds and may build
/// concurrently; results are identical across thread counts.
pub fn train_forest(x: &DenseMatrix, y: &[bool], config: &ForestConfig) -> Result<ForestModel> {
    if x.n_rows() == 0 || x.n_rows() != y.len() {
        return Err(Error::Data(format!(
            "forest training needs matching non-empty inputs, got {} rows and {} labels",
            x.n_rows(),
            y.len()
        )));
    }
    if config.n_trees == 0 {
        return Err(Error::Config("n_trees must be >= 1".into()));
    }
    let binned = BinnedMatrix::new(x);
    let targets: Vec<f64> = y.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    let n = x.n_rows();
    let features_per_split = match config.feature_subsample {
        FeatureSubsample::All => None,
        FeatureSubsample::Sqrt => Some(((x.n_cols() as f64).sqrt().floor() as usize).max(1)),
    };
    let params = TreeParams {
        criterion: Criterion::Gini,
        max_depth: config.max_depth,
        min_samples_leaf: config.min_samples_leaf,
        features_per_split,
    };

    let trees = par::map_range(config.n_trees, |t| {
        let tree_seed = derive_seed(config.seed, &format!("tree/{t}"));
        let rows: Vec<u32> = if config.bootstrap {
            let mut rng = SplitMix64::new(derive_seed(tree_seed, "bootstrap"));
            (0..n).map(|_| rng.bounded(n as u64) as u32).collect()
        } else {
            (0..n as u32).collect()
        };
        build_tree(&binned, &targets, rows, &params, derive_seed(tree_seed, "splits"))
    });

    Ok(ForestModel {
        trees,
        config: *config,
        n_features: x.n_cols(),
    })
}

impl ForestModel {
    /// Mean of the trees' leaf class-1 fractions, in [0, 1]. Trees are
    /// summed in index order so the result is reproducible.
    pub fn predict_proba(&self, row: &[f64]) -> f64 {
        let sum: f64 = self.trees.iter().map(|t| t.predict(row)).sum();
        sum / self.trees.len() as f64
    }

    pub fn predict(&self, row: &[f64]) -> bool {
        self.predict_proba(row) > 0.5
    }
}
