//! Decision-tree ensembles over dense feature matrices.
//!
//! Split finding runs on a binned copy of the training matrix: each feature
//! is quantized to at most 256 bins once per training call, and candidate
//! thresholds are bin boundaries (midpoints between adjacent distinct
//! values). Trained trees store real-valued thresholds, so prediction works
//! directly on unbinned rows. All tie-breaking is fixed (lowest feature
//! index, then lowest threshold), which makes training deterministic.

mod boost;
mod forest;

pub use boost::{train_gbt, BoostConfig, BoostModel};
pub use forest::{train_forest, FeatureSubsample, ForestConfig, ForestModel};

use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use serde::{Deserialize, Serialize};

/// Gini impurity of a binary count pair; an empty node is defined as pure.
pub fn gini(counts: (u64, u64)) -> f64 {
    let (n0, n1) = counts;
    let n = n0 + n1;
    if n == 0 {
        return 0.0;
    }
    let p0 = n0 as f64 / n as f64;
    let p1 = n1 as f64 / n as f64;
    1.0 - p0 * p0 - p1 * p1
}

/// Row-major dense matrix.
#[derive(Debug, Clone)]
pub struct DenseMatrix {
    n_cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<DenseMatrix> {
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * n_cols);
        for row in &rows {
            if row.len() != n_cols {
                return Err(Error::WidthMismatch {
                    expected: n_cols,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(DenseMatrix { n_cols, data })
    }

    pub fn n_rows(&self) -> usize {
        if self.n_cols == 0 {
            0
        } else {
            self.data.len() / self.n_cols
        }
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }
}

/// One tree node; children are indices into the node array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TreeNode {
    Internal {
        feature: u32,
        threshold: f64,
        left: u32,
        right: u32,
    },
    Leaf {
        value: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<TreeNode>,
    pub root: u32,
}

impl DecisionTree {
    /// Value of the leaf this row falls into. Rows go left when
    /// `value <= threshold`.
    pub fn predict(&self, row: &[f64]) -> f64 {
        let mut at = self.root;
        loop {
            match &self.nodes[at as usize] {
                TreeNode::Leaf { value } => return *value,
                TreeNode::Internal {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if row[*feature as usize] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn depth_of(nodes: &[TreeNode], at: u32) -> usize {
            match &nodes[at as usize] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Internal { left, right, .. } => {
                    1 + depth_of(nodes, *left).max(depth_of(nodes, *right))
                }
            }
        }
        depth_of(&self.nodes, self.root)
    }
}

/// What a split optimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Criterion {
    /// Weighted Gini decrease on binary 0/1 targets.
    Gini,
    /// Sum-of-squared-error decrease on real targets.
    Sse,
}

const MAX_BINS: usize = 256;
const MIN_DECREASE: f64 = 1e-12;

/// Per-feature quantization of a dense matrix.
pub(crate) struct BinnedMatrix {
    n_rows: usize,
    n_cols: usize,
    /// Row-major bin codes.
    codes: Vec<u16>,
    /// Candidate thresholds per feature; bin `b` holds values in
    /// `(thresholds[b-1], thresholds[b]]`-style ranges with code =
    /// number of thresholds strictly below the value.
    thresholds: Vec<Vec<f64>>,
    /// Start of each feature's bin range in a flat histogram buffer.
    bin_offsets: Vec<u32>,
    total_bins: usize,
}

impl BinnedMatrix {
    pub(crate) fn new(x: &DenseMatrix) -> BinnedMatrix {
        let n_rows = x.n_rows();
        let n_cols = x.n_cols();
        let mut thresholds = Vec::with_capacity(n_cols);
        for f in 0..n_cols {
            let mut values: Vec<f64> = (0..n_rows).map(|r| x.row(r)[f]).collect();
            values.sort_by(f64::total_cmp);
            values.dedup();
            let cuts: Vec<f64> = if values.len() <= MAX_BINS {
                values
                    .windows(2)
                    .map(|pair| midpoint(pair[0], pair[1]))
                    .collect()
            } else {
                let mut cuts = Vec::with_capacity(MAX_BINS - 1);
                for j in 1..MAX_BINS {
                    let idx = j * values.len() / MAX_BINS;
                    cuts.push(midpoint(values[idx - 1], values[idx]));
                }
                cuts.dedup();
                cuts
            };
            thresholds.push(cuts);
        }
        let mut bin_offsets = Vec::with_capacity(n_cols + 1);
        let mut total = 0u32;
        for cuts in &thresholds {
            bin_offsets.push(total);
            total += cuts.len() as u32 + 1;
        }
        bin_offsets.push(total);

        let mut codes = vec![0u16; n_rows * n_cols];
        for r in 0..n_rows {
            let row = x.row(r);
            for f in 0..n_cols {
                let cuts = &thresholds[f];
                // number of thresholds strictly below the value
                let code = cuts.partition_point(|t| *t < row[f]);
                codes[r * n_cols + f] = code as u16;
            }
        }
        BinnedMatrix {
            n_rows,
            n_cols,
            codes,
            thresholds,
            bin_offsets,
            total_bins: total as usize,
        }
    }

    fn bins_of(&self, f: usize) -> usize {
        self.thresholds[f].len() + 1
    }

    fn code(&self, row: usize, f: usize) -> usize {
        self.codes[row * self.n_cols + f] as usize
    }
}

fn midpoint(a: f64, b: f64) -> f64 {
    a + (b - a) / 2.0
}

#[derive(Debug, Clone, Copy, Default)]
struct BinStat {
    count: u32,
    sum: f64,
}

pub(crate) struct TreeParams {
    pub criterion: Criterion,
    pub max_depth: usize,
    pub min_samples_leaf: usize,
    /// Candidate features per split; `None` means all.
    pub features_per_split: Option<usize>,
}

struct Builder<'a> {
    binned: &'a BinnedMatrix,
    targets: &'a [f64],
    params: &'a TreeParams,
    rng: SplitMix64,
    nodes: Vec<TreeNode>,
    hist: Vec<BinStat>,
    feature_pool: Vec<u32>,
}

struct BestSplit {
    decrease: f64,
    feature: u32,
    cut_index: usize,
}

impl<'a> Builder<'a> {
    /// Impurity proxy score of one side: larger is better. For Gini the
    /// weighted impurity `n * gini` equals `n - sum0^2/n - sum1^2/n`; both
    /// criteria reduce to maximizing `sum^2 / n` over the two sides.
    fn side_score(stat: &BinStat, criterion: Criterion) -> f64 {
        if stat.count == 0 {
            return 0.0;
        }
        let n = stat.count as f64;
        match criterion {
            // n_side * (1 - gini_side) profiled against parent below; for
            // binary 0/1 targets sum counts the ones, and
            // n*gini = n - (n0^2 + n1^2)/n with n0 = n - sum, n1 = sum.
            Criterion::Gini => {
                let n1 = stat.sum;
                let n0 = n - n1;
                (n0 * n0 + n1 * n1) / n
            }
            Criterion::Sse => stat.sum * stat.sum / n,
        }
    }

    fn find_best_split(&mut self, rows: &[u32], node: BinStat) -> Option<BestSplit> {
        let candidates: &[u32] = match self.params.features_per_split {
            None => &self.feature_pool,
            Some(k) => {
                let n = self.feature_pool.len();
                let k = k.min(n);
                // partial Fisher-Yates, then sort for the tie-break order
                for i in 0..k {
                    let j = i + self.rng.bounded((n - i) as u64) as usize;
                    self.feature_pool.swap(i, j);
                }
                self.feature_pool[..k].sort_unstable();
                &self.feature_pool[..k]
            }
        };

        let parent_score = Self::side_score(&node, self.params.criterion);
        let mut best: Option<BestSplit> = None;
        for &f in candidates {
            let f = f as usize;
            let bins = self.binned.bins_of(f);
            if bins < 2 {
                continue;
            }
            let base = self.binned.bin_offsets[f] as usize;
            for s in &mut self.hist[base..base + bins] {
                *s = BinStat::default();
            }
            for &row in rows {
                let code = self.binned.code(row as usize, f);
                let slot = &mut self.hist[base + code];
                slot.count += 1;
                slot.sum += self.targets[row as usize];
            }
            let mut left = BinStat::default();
            for cut in 0..bins - 1 {
                let b = self.hist[base + cut];
                left.count += b.count;
                left.sum += b.sum;
                let right = BinStat {
                    count: node.count - left.count,
                    sum: node.sum - left.sum,
                };
                if (left.count as usize) < self.params.min_samples_leaf
                    || (right.count as usize) < self.params.min_samples_leaf
                    || left.count == 0
                    || right.count == 0
                {
                    continue;
                }
                let decrease = Self::side_score(&left, self.params.criterion)
                    + Self::side_score(&right, self.params.criterion)
                    - parent_score;
                if decrease > MIN_DECREASE
                    && best.as_ref().is_none_or(|b| decrease > b.decrease)
                {
                    best = Some(BestSplit {
                        decrease,
                        feature: f as u32,
                        cut_index: cut,
                    });
                }
            }
        }
        best
    }

    fn build(&mut self, rows: Vec<u32>, depth: usize) -> u32 {
        let node = BinStat {
            count: rows.len() as u32,
            sum: rows.iter().map(|&r| self.targets[r as usize]).sum(),
        };
        let leaf_value = node.sum / node.count as f64;

        let is_pure = match self.params.criterion {
            Criterion::Gini => node.sum == 0.0 || node.sum == node.count as f64,
            Criterion::Sse => {
                let first = self.targets[rows[0] as usize];
                rows.iter().all(|&r| self.targets[r as usize] == first)
            }
        };
        let can_split = depth < self.params.max_depth
            && !is_pure
            && rows.len() >= 2 * self.params.min_samples_leaf.max(1);

        if can_split {
            if let Some(split) = self.find_best_split(&rows, node) {
                let f = split.feature as usize;
                let threshold = self.binned.thresholds[f][split.cut_index];
                let (left_rows, right_rows): (Vec<u32>, Vec<u32>) = rows
                    .into_iter()
                    .partition(|&r| self.binned.code(r as usize, f) <= split.cut_index);
                let left = self.build(left_rows, depth + 1);
                let right = self.build(right_rows, depth + 1);
                self.nodes.push(TreeNode::Internal {
                    feature: split.feature,
                    threshold,
                    left,
                    right,
                });
                return self.nodes.len() as u32 - 1;
            }
        }
        self.nodes.push(TreeNode::Leaf { value: leaf_value });
        self.nodes.len() as u32 - 1
    }
}

pub(crate) fn build_tree(
    binned: &BinnedMatrix,
    targets: &[f64],
    rows: Vec<u32>,
    params: &TreeParams,
    seed: u64,
) -> DecisionTree {
    debug_assert!(!rows.is_empty());
    let mut builder = Builder {
        binned,
        targets,
        params,
        rng: SplitMix64::new(seed),
        nodes: Vec::new(),
        hist: vec![BinStat::default(); binned.total_bins],
        feature_pool: (0..binned.n_cols as u32).collect(),
    };
    let root = builder.build(rows, 0);
    DecisionTree {
        nodes: builder.nodes,
        root,
    }
}

/// Plain CART on binary labels: greedy splits minimizing weighted Gini,
/// stopping at max depth, purity, or the minimum leaf size.
pub fn train_tree(
    x: &DenseMatrix,
    y: &[bool],
    max_depth: usize,
    min_samples_leaf: usize,
) -> Result<DecisionTree> {
    if x.n_rows() == 0 || x.n_rows() != y.len() {
        return Err(Error::Data(format!(
            "tree training needs matching non-empty inputs, got {} rows and {} labels",
            x.n_rows(),
            y.len()
        )));
    }
    let binned = BinnedMatrix::new(x);
    let targets: Vec<f64> = y.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    let params = TreeParams {
        criterion: Criterion::Gini,
        max_depth,
        min_samples_leaf,
        features_per_split: None,
    };
    Ok(build_tree(
        &binned,
        &targets,
        (0..x.n_rows() as u32).collect(),
        &params,
        0,
    ))
}
