//! Data model for labeled feedback corpora: documents, label vectors, the
//! issue taxonomy, dataset loading/validation, train/test splitting, and
//! corpus statistics.

mod io;
mod stats;

pub use io::{load_dataset, save_dataset_csv, DatasetFormat};
pub use stats::{corpus_stats, CategoryStat, ProjectStats, StatsReport};

use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use std::fmt;

/// Where a document came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    AppReview,
    IssueComment,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::AppReview => "app_review",
            Source::IssueComment => "issue_comment",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "app_review" => Ok(Source::AppReview),
            "issue_comment" => Ok(Source::IssueComment),
            other => Err(Error::Data(format!(
                "unknown source {other:?} (expected app_review or issue_comment)"
            ))),
        }
    }
}

/// The four high-level classification targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    AppUsage,
    Inclusiveness,
    UserReaction,
    NonHumanCentric,
}

impl Label {
    pub const ALL: [Label; 4] = [
        Label::AppUsage,
        Label::Inclusiveness,
        Label::UserReaction,
        Label::NonHumanCentric,
    ];

    pub fn index(self) -> usize {
        match self {
            Label::AppUsage => 0,
            Label::Inclusiveness => 1,
            Label::UserReaction => 2,
            Label::NonHumanCentric => 3,
        }
    }

    pub fn from_index(i: usize) -> Label {
        Label::ALL[i]
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::AppUsage => "app_usage",
            Label::Inclusiveness => "inclusiveness",
            Label::UserReaction => "user_reaction",
            Label::NonHumanCentric => "non_human_centric",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One bit per high-level category. Gold vectors must satisfy
/// [`LabelVector::is_consistent`]; raw model predictions may not until
/// post-processed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub struct LabelVector {
    pub app_usage: bool,
    pub inclusiveness: bool,
    pub user_reaction: bool,
    pub non_human_centric: bool,
}

impl LabelVector {
    pub fn new(app_usage: bool, inclusiveness: bool, user_reaction: bool, non_human_centric: bool) -> Self {
        LabelVector {
            app_usage,
            inclusiveness,
            user_reaction,
            non_human_centric,
        }
    }

    pub fn from_bits(bits: [bool; 4]) -> Self {
        LabelVector::new(bits[0], bits[1], bits[2], bits[3])
    }

    pub fn bits(self) -> [bool; 4] {
        [
            self.app_usage,
            self.inclusiveness,
            self.user_reaction,
            self.non_human_centric,
        ]
    }

    pub fn get(self, label: Label) -> bool {
        self.bits()[label.index()]
    }

    /// Gold-data invariant: `non_human_centric` is set exactly when none of
    /// the three issue categories is.
    pub fn is_consistent(self) -> bool {
        let any_issue = self.app_usage || self.inclusiveness || self.user_reaction;
        self.non_human_centric == !any_issue
    }

    /// True when at least one of the three issue categories is set.
    pub fn is_human_centric(self) -> bool {
        self.app_usage || self.inclusiveness || self.user_reaction
    }
}

/// The 17 taxonomy leaves. Each maps to exactly one parent category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subcategory {
    ResourceUsage,
    Buginess,
    ChangeUpdate,
    UiUx,
    PrivacySecurity,
    UsageInstruction,
    AccessIssues,
    AppUsageOther,
    Compatibility,
    Location,
    Language,
    Accessibility,
    InclusivenessOther,
    FulfillingInterests,
    EmotionalAspects,
    Preference,
    UserReactionOther,
}

impl Subcategory {
    pub const ALL: [Subcategory; 17] = [
        Subcategory::ResourceUsage,
        Subcategory::Buginess,
        Subcategory::ChangeUpdate,
        Subcategory::UiUx,
        Subcategory::PrivacySecurity,
        Subcategory::UsageInstruction,
        Subcategory::AccessIssues,
        Subcategory::AppUsageOther,
        Subcategory::Compatibility,
        Subcategory::Location,
        Subcategory::Language,
        Subcategory::Accessibility,
        Subcategory::InclusivenessOther,
        Subcategory::FulfillingInterests,
        Subcategory::EmotionalAspects,
        Subcategory::Preference,
        Subcategory::UserReactionOther,
    ];

    /// Parent high-level category.
    pub fn parent(self) -> Label {
        use Subcategory::*;
        match self {
            ResourceUsage | Buginess | ChangeUpdate | UiUx | PrivacySecurity
            | UsageInstruction | AccessIssues | AppUsageOther => Label::AppUsage,
            Compatibility | Location | Language | Accessibility | InclusivenessOther => {
                Label::Inclusiveness
            }
            FulfillingInterests | EmotionalAspects | Preference | UserReactionOther => {
                Label::UserReaction
            }
        }
    }

    pub fn as_str(self) -> &'static str {
        use Subcategory::*;
        match self {
            ResourceUsage => "resource_usage",
            Buginess => "buginess",
            ChangeUpdate => "change_update",
            UiUx => "ui_ux",
            PrivacySecurity => "privacy_security",
            UsageInstruction => "usage_instruction",
            AccessIssues => "access_issues",
            AppUsageOther => "app_usage_other",
            Compatibility => "compatibility",
            Location => "location",
            Language => "language",
            Accessibility => "accessibility",
            InclusivenessOther => "inclusiveness_other",
            FulfillingInterests => "fulfilling_interests",
            EmotionalAspects => "emotional_aspects",
            Preference => "preference",
            UserReactionOther => "user_reaction_other",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Subcategory::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Data(format!("unknown subcategory {s:?}")))
    }
}

impl fmt::Display for Subcategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One review or issue comment with its gold labels.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub source: Source,
    pub project: String,
    pub text: String,
    pub labels: LabelVector,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subcategories: Option<BTreeSet<Subcategory>>,
}

/// An immutable collection of documents. All operations on a loaded dataset
/// are read-only and safe to share across threads.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    pub documents: Vec<Document>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, documents: Vec<Document>) -> Self {
        Dataset {
            name: name.into(),
            documents,
        }
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// N x 4 gold label matrix in [`Label`] column order.
    pub fn label_matrix(&self) -> Vec<[bool; 4]> {
        self.documents.iter().map(|d| d.labels.bits()).collect()
    }
}

/// Train/test split parameters.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
}

impl SplitSpec {
    pub fn new(train_fraction: f64, seed: u64) -> Self {
        SplitSpec {
            train_fraction,
            seed,
        }
    }
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train_fraction: 0.75,
            seed: 0,
        }
    }
}

/// Deterministically partition a dataset into train and test sets.
///
/// Document indices are shuffled with a SplitMix64-seeded Fisher-Yates
/// shuffle (see [`crate::rng`]) and the first `round(train_fraction * N)`
/// go to the train set. The same seed always yields the same partition.
pub fn split(dataset: &Dataset, spec: SplitSpec) -> Result<(Dataset, Dataset)> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset(dataset.name.clone()));
    }
    if !(spec.train_fraction > 0.0 && spec.train_fraction < 1.0) {
        return Err(Error::Config(format!(
            "train_fraction must be in (0,1), got {}",
            spec.train_fraction
        )));
    }
    let n = dataset.len();
    let n_train = ((spec.train_fraction * n as f64).round() as usize).min(n);
    let mut idx: Vec<usize> = (0..n).collect();
    SplitMix64::new(spec.seed).shuffle(&mut idx);
    let (train_idx, test_idx) = idx.split_at(n_train);
    let pick = |ix: &[usize]| ix.iter().map(|&i| dataset.documents[i].clone()).collect();
    Ok((
        Dataset::new(format!("{}-train", dataset.name), pick(train_idx)),
        Dataset::new(format!("{}-test", dataset.name), pick(test_idx)),
    ))
}

/// A single invariant violation found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub doc_id: String,
    pub rule: &'static str,
    pub message: String,
}

/// All violations in a dataset; empty means valid.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check every document invariant, reporting violations instead of failing.
pub fn validate(dataset: &Dataset) -> ValidationReport {
    let mut violations = Vec::new();
    let mut seen: HashMap<&str, usize> = HashMap::new();
    for doc in &dataset.documents {
        if doc.id.trim().is_empty() {
            violations.push(Violation {
                doc_id: doc.id.clone(),
                rule: "id_nonempty",
                message: "document id is empty".into(),
            });
        }
        *seen.entry(doc.id.as_str()).or_insert(0) += 1;
        if doc.text.trim().is_empty() {
            violations.push(Violation {
                doc_id: doc.id.clone(),
                rule: "text_nonempty",
                message: "text is empty after trimming whitespace".into(),
            });
        }
        if !doc.labels.is_consistent() {
            violations.push(Violation {
                doc_id: doc.id.clone(),
                rule: "label_consistency",
                message: format!(
                    "non_human_centric={} but issue bits are ({}, {}, {})",
                    doc.labels.non_human_centric as u8,
                    doc.labels.app_usage as u8,
                    doc.labels.inclusiveness as u8,
                    doc.labels.user_reaction as u8
                ),
            });
        }
    }
    // One entry per duplicate occurrence beyond the first.
    let mut dup_ids: Vec<(&str, usize)> = seen
        .into_iter()
        .filter(|&(_, count)| count > 1)
        .collect();
    dup_ids.sort_unstable();
    for (id, count) in dup_ids {
        for _ in 1..count {
            violations.push(Violation {
                doc_id: id.to_string(),
                rule: "id_unique",
                message: format!("id {id:?} appears {count} times"),
            });
        }
    }
    ValidationReport { violations }
}
