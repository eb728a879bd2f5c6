//! Multi-label evaluation: micro-averaged precision/recall/F1, exact-match
//! accuracy, and Hamming loss over N x 4 label matrices. All 0/0 ratios are
//! defined as 0.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub const NUM_LABELS: usize = 4;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelCounts {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl LabelCounts {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub per_label: [LabelCounts; NUM_LABELS],
    pub pooled: LabelCounts,
}

fn check_shapes(y: &[[bool; NUM_LABELS]], y_hat: &[[bool; NUM_LABELS]]) -> Result<()> {
    if y.len() != y_hat.len() {
        return Err(Error::Data(format!(
            "label matrices disagree: {} gold rows vs {} predicted rows",
            y.len(),
            y_hat.len()
        )));
    }
    Ok(())
}

/// Per-label and pooled TP/FP/FN/TN counts.
pub fn confusion(y: &[[bool; NUM_LABELS]], y_hat: &[[bool; NUM_LABELS]]) -> Result<ConfusionCounts> {
    check_shapes(y, y_hat)?;
    let mut counts = ConfusionCounts::default();
    for (gold, pred) in y.iter().zip(y_hat) {
        for j in 0..NUM_LABELS {
            let slot = &mut counts.per_label[j];
            match (gold[j], pred[j]) {
                (true, true) => slot.tp += 1,
                (false, true) => slot.fp += 1,
                (true, false) => slot.fn_ += 1,
                (false, false) => slot.tn += 1,
            }
        }
    }
    for j in 0..NUM_LABELS {
        counts.pooled.tp += counts.per_label[j].tp;
        counts.pooled.fp += counts.per_label[j].fp;
        counts.pooled.fn_ += counts.per_label[j].fn_;
        counts.pooled.tn += counts.per_label[j].tn;
    }
    Ok(counts)
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Micro-averaged precision, recall, and F1 over pooled confusion counts.
pub fn micro_prf(y: &[[bool; NUM_LABELS]], y_hat: &[[bool; NUM_LABELS]]) -> Result<(f64, f64, f64)> {
    let pooled = confusion(y, y_hat)?.pooled;
    let precision = ratio(pooled.tp, pooled.tp + pooled.fp);
    let recall = ratio(pooled.tp, pooled.tp + pooled.fn_);
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    Ok((precision, recall, f1))
}

/// Fraction of rows whose entire label vector is predicted correctly.
pub fn exact_match_accuracy(y: &[[bool; NUM_LABELS]], y_hat: &[[bool; NUM_LABELS]]) -> Result<f64> {
    check_shapes(y, y_hat)?;
    if y.is_empty() {
        return Err(Error::Data("cannot evaluate an empty test set".into()));
    }
    let exact = y.iter().zip(y_hat).filter(|(g, p)| g == p).count();
    Ok(exact as f64 / y.len() as f64)
}

/// Fraction of individual label bits predicted incorrectly.
pub fn hamming_loss(y: &[[bool; NUM_LABELS]], y_hat: &[[bool; NUM_LABELS]]) -> Result<f64> {
    check_shapes(y, y_hat)?;
    if y.is_empty() {
        return Err(Error::Data("cannot evaluate an empty test set".into()));
    }
    let mismatched: usize = y
        .iter()
        .zip(y_hat)
        .map(|(g, p)| (0..NUM_LABELS).filter(|&j| g[j] != p[j]).count())
        .sum();
    Ok(mismatched as f64 / (y.len() * NUM_LABELS) as f64)
}

/// Mean per-row Jaccard similarity of the predicted and gold label sets;
/// two empty sets count as a perfect match. Reported alongside the
/// exact-match accuracy but never used for reference comparisons.
pub fn jaccard_accuracy(y: &[[bool; NUM_LABELS]], y_hat: &[[bool; NUM_LABELS]]) -> Result<f64> {
    check_shapes(y, y_hat)?;
    if y.is_empty() {
        return Err(Error::Data("cannot evaluate an empty test set".into()));
    }
    let mut total = 0.0;
    for (gold, pred) in y.iter().zip(y_hat) {
        let intersection = (0..NUM_LABELS).filter(|&j| gold[j] && pred[j]).count();
        let union = (0..NUM_LABELS).filter(|&j| gold[j] || pred[j]).count();
        total += if union == 0 {
            1.0
        } else {
            intersection as f64 / union as f64
        };
    }
    Ok(total / y.len() as f64)
}

/// Full evaluation summary for one model on one test set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalReport {
    pub micro_precision: f64,
    pub micro_recall: f64,
    pub micro_f1: f64,
    pub exact_match_accuracy: f64,
    pub hamming_loss: f64,
    pub jaccard_accuracy: f64,
    pub per_label: [LabelCounts; NUM_LABELS],
    pub n: usize,
    pub num_labels: usize,
    /// Fingerprint of the preprocessing + feature configuration the model
    /// was evaluated under.
    pub fingerprint: String,
    pub seed: u64,
}

/// Compute every metric from gold and predicted matrices.
pub fn evaluate_predictions(
    y: &[[bool; NUM_LABELS]],
    y_hat: &[[bool; NUM_LABELS]],
    fingerprint: &str,
    seed: u64,
) -> Result<EvalReport> {
    if y.is_empty() {
        return Err(Error::Data("cannot evaluate an empty test set".into()));
    }
    let counts = confusion(y, y_hat)?;
    let (micro_precision, micro_recall, micro_f1) = micro_prf(y, y_hat)?;
    Ok(EvalReport {
        micro_precision,
        micro_recall,
        micro_f1,
        exact_match_accuracy: exact_match_accuracy(y, y_hat)?,
        hamming_loss: hamming_loss(y, y_hat)?,
        jaccard_accuracy: jaccard_accuracy(y, y_hat)?,
        per_label: counts.per_label,
        n: y.len(),
        num_labels: NUM_LABELS,
        fingerprint: fingerprint.to_string(),
        seed,
    })
}

impl EvalReport {
    /// The metric columns of the report CSV schema, 4 decimal places.
    pub fn csv_fragment(&self) -> String {
        format!(
            "{:.4},{:.4},{:.4},{:.4},{:.4}",
            self.micro_precision,
            self.micro_recall,
            self.exact_match_accuracy,
            self.micro_f1,
            self.hamming_loss
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn rows(bits: &[[u8; 4]]) -> Vec<[bool; 4]> {
        bits.iter()
            .map(|r| [r[0] == 1, r[1] == 1, r[2] == 1, r[3] == 1])
            .collect()
    }

    fn fixture() -> (Vec<[bool; 4]>, Vec<[bool; 4]>) {
        (
            rows(&[[1, 0, 0, 0], [0, 1, 1, 0]]),
            rows(&[[1, 0, 0, 1], [0, 1, 0, 0]]),
        )
    }

    #[test]
    fn two_row_fixture() {
        let (y, y_hat) = fixture();
        let (p, r, f1) = micro_prf(&y, &y_hat).unwrap();
        assert!((p - 2.0 / 3.0).abs() < 1e-12);
        assert!((r - 2.0 / 3.0).abs() < 1e-12);
        assert!((f1 - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(exact_match_accuracy(&y, &y_hat).unwrap(), 0.0);
        assert_eq!(hamming_loss(&y, &y_hat).unwrap(), 0.25);
    }

    #[test]
    fn perfect_prediction() {
        let (y, _) = fixture();
        let (p, r, f1) = micro_prf(&y, &y).unwrap();
        assert_eq!((p, r, f1), (1.0, 1.0, 1.0));
        assert_eq!(exact_match_accuracy(&y, &y).unwrap(), 1.0);
        assert_eq!(hamming_loss(&y, &y).unwrap(), 0.0);
        assert_eq!(jaccard_accuracy(&y, &y).unwrap(), 1.0);
    }

    #[test]
    fn all_zero_predictions_use_zero_conventions() {
        let y = rows(&[[1, 0, 0, 0], [0, 1, 0, 0]]);
        let y_hat = rows(&[[0, 0, 0, 0], [0, 0, 0, 0]]);
        let (p, r, f1) = micro_prf(&y, &y_hat).unwrap();
        assert_eq!((p, r, f1), (0.0, 0.0, 0.0));
    }

    #[test]
    fn all_bits_flipped_is_full_hamming_loss() {
        let y = rows(&[[1, 0, 1, 0]]);
        let y_hat = rows(&[[0, 1, 0, 1]]);
        assert_eq!(hamming_loss(&y, &y_hat).unwrap(), 1.0);
    }

    #[test]
    fn one_of_two_rows_exact() {
        let y = rows(&[[1, 0, 0, 0], [0, 1, 0, 0]]);
        let y_hat = rows(&[[1, 0, 0, 0], [0, 0, 0, 1]]);
        assert_eq!(exact_match_accuracy(&y, &y_hat).unwrap(), 0.5);
    }

    #[test]
    fn f1_is_harmonic_mean() {
        let mut rng = SplitMix64::new(31);
        for _ in 0..50 {
            let n = 1 + rng.bounded(10) as usize;
            let y: Vec<[bool; 4]> = (0..n)
                .map(|_| std::array::from_fn(|_| rng.bounded(2) == 1))
                .collect();
            let y_hat: Vec<[bool; 4]> = (0..n)
                .map(|_| std::array::from_fn(|_| rng.bounded(2) == 1))
                .collect();
            let (p, r, f1) = micro_prf(&y, &y_hat).unwrap();
            if p + r > 0.0 {
                assert!((f1 - 2.0 * p * r / (p + r)).abs() < 1e-12);
            } else {
                assert_eq!(f1, 0.0);
            }
        }
    }

    #[test]
    fn hamming_complements_bitwise_accuracy() {
        let mut rng = SplitMix64::new(32);
        for _ in 0..50 {
            let n = 1 + rng.bounded(10) as usize;
            let y: Vec<[bool; 4]> = (0..n)
                .map(|_| std::array::from_fn(|_| rng.bounded(2) == 1))
                .collect();
            let y_hat: Vec<[bool; 4]> = (0..n)
                .map(|_| std::array::from_fn(|_| rng.bounded(2) == 1))
                .collect();
            let hl = hamming_loss(&y, &y_hat).unwrap();
            let bitwise_acc = y
                .iter()
                .zip(&y_hat)
                .flat_map(|(g, p)| (0..4).map(move |j| (g[j] == p[j]) as usize))
                .sum::<usize>() as f64
                / (4 * n) as f64;
            assert!((hl - (1.0 - bitwise_acc)).abs() < 1e-12);
            // exact match 1 iff hamming 0
            let ema = exact_match_accuracy(&y, &y_hat).unwrap();
            assert_eq!(ema == 1.0, hl == 0.0);
        }
    }

    #[test]
    fn label_permutation_invariance() {
        let mut rng = SplitMix64::new(33);
        let n = 8;
        let y: Vec<[bool; 4]> = (0..n)
            .map(|_| std::array::from_fn(|_| rng.bounded(2) == 1))
            .collect();
        let y_hat: Vec<[bool; 4]> = (0..n)
            .map(|_| std::array::from_fn(|_| rng.bounded(2) == 1))
            .collect();
        let perm = [2usize, 0, 3, 1];
        let apply = |m: &[[bool; 4]]| -> Vec<[bool; 4]> {
            m.iter()
                .map(|r| std::array::from_fn(|j| r[perm[j]]))
                .collect()
        };
        let (p1, r1, f1) = micro_prf(&y, &y_hat).unwrap();
        let (p2, r2, f2) = micro_prf(&apply(&y), &apply(&y_hat)).unwrap();
        assert_eq!((p1, r1, f1), (p2, r2, f2));
        assert_eq!(
            hamming_loss(&y, &y_hat).unwrap(),
            hamming_loss(&apply(&y), &apply(&y_hat)).unwrap()
        );
        assert_eq!(
            exact_match_accuracy(&y, &y_hat).unwrap(),
            exact_match_accuracy(&apply(&y), &apply(&y_hat)).unwrap()
        );
    }

    #[test]
    fn shape_mismatch_is_error() {
        let y = rows(&[[1, 0, 0, 0]]);
        let y_hat = rows(&[[1, 0, 0, 0], [0, 0, 0, 1]]);
        assert!(micro_prf(&y, &y_hat).is_err());
    }

    #[test]
    fn empty_test_set_is_error() {
        assert!(evaluate_predictions(&[], &[], "f", 0).is_err());
    }

    #[test]
    fn csv_fragment_has_four_decimals() {
        let y = rows(&[[1, 0, 0, 0], [0, 1, 1, 0]]);
        let y_hat = rows(&[[1, 0, 0, 1], [0, 1, 0, 0]]);
        let report = evaluate_predictions(&y, &y_hat, "fp", 7).unwrap();
        assert_eq!(report.csv_fragment(), "0.6667,0.6667,0.0000,0.6667,0.2500");
    }
}
