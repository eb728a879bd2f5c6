//! Synthetic corpus generation.
//!
//! Two generators live here:
//!
//! - [`generate_learnable_corpus`] builds a dataset of arbitrary size with
//!   label-correlated vocabulary, for training smoke tests and benchmarks;
//! - [`generate_reference_corpus`] builds the two fixed 1,200-document
//!   datasets (app reviews and issue comments, 100 documents for each of
//!   the 12 studied projects) whose per-project subcategory counts,
//!   per-category document counts, and overall human-centric totals
//!   reproduce the published reference statistics exactly. Texts are
//!   synthetic and label-correlated; only the label structure is real.
//!
//! Both are fully deterministic for a fixed seed.

use crate::corpus::{Dataset, Document, LabelVector, Source, Subcategory};
use crate::rng::{fnv1a, SplitMix64};
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

/// The 12 studied projects, in reference order for issue comments.
const COMMENT_PROJECTS: [(&str, usize, [usize; 17]); 12] = [
    ("signal", 35, [5, 14, 2, 2, 5, 2, 0, 1, 3, 0, 1, 5, 0, 0, 4, 4, 0]),
    ("cgeo", 33, [2, 7, 3, 7, 0, 3, 0, 0, 5, 1, 2, 2, 0, 2, 0, 8, 1]),
    ("firefox", 30, [3, 1, 0, 9, 7, 0, 0, 1, 1, 0, 1, 9, 1, 0, 1, 10, 0]),
    ("duckduckgo", 29, [2, 8, 1, 6, 8, 1, 0, 1, 0, 0, 3, 0, 0, 1, 1, 6, 0]),
    ("k-9", 29, [2, 8, 3, 6, 4, 0, 0, 0, 4, 0, 1, 0, 0, 2, 0, 6, 0]),
    ("wordpress", 26, [0, 6, 0, 12, 0, 0, 0, 0, 1, 0, 2, 0, 0, 0, 0, 6, 0]),
    ("brave", 24, [1, 12, 0, 12, 0, 1, 0, 0, 2, 0, 0, 0, 0, 0, 0, 4, 0]),
    ("osmand", 23, [3, 2, 0, 6, 1, 6, 0, 0, 2, 0, 3, 0, 0, 1, 0, 10, 0]),
    ("termux", 22, [2, 5, 1, 6, 5, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0, 1, 0]),
    ("bitcoin-wallet", 19, [2, 6, 1, 2, 6, 1, 0, 0, 0, 0, 1, 3, 1, 0, 0, 2, 0]),
    ("fbreader", 18, [0, 2, 0, 4, 1, 0, 0, 0, 1, 0, 7, 0, 0, 2, 0, 5, 0]),
    ("pixel-dungeon", 16, [0, 0, 0, 1, 0, 0, 0, 0, 3, 0, 11, 0, 0, 0, 0, 1, 0]),
];

/// The same projects in reference order for app reviews.
const REVIEW_PROJECTS: [(&str, usize, [usize; 17]); 12] = [
    ("firefox", 79, [6, 19, 23, 35, 9, 2, 0, 0, 1, 0, 0, 0, 0, 16, 3, 23, 0]),
    ("k-9", 68, [2, 22, 14, 13, 0, 1, 1, 0, 5, 0, 0, 0, 0, 10, 1, 23, 0]),
    ("signal", 66, [8, 17, 4, 3, 5, 0, 0, 0, 0, 0, 0, 1, 0, 4, 0, 34, 0]),
    ("bitcoin-wallet", 58, [7, 12, 4, 5, 9, 5, 1, 10, 1, 1, 1, 1, 0, 5, 0, 7, 4]),
    ("osmand", 57, [1, 10, 4, 21, 0, 4, 0, 2, 0, 4, 1, 1, 0, 11, 0, 9, 0]),
    ("brave", 46, [1, 10, 12, 14, 2, 1, 0, 1, 0, 0, 0, 0, 1, 5, 2, 9, 0]),
    ("duckduckgo", 44, [4, 6, 3, 11, 3, 0, 2, 1, 1, 2, 1, 3, 1, 6, 1, 21, 0]),
    ("fbreader", 39, [2, 9, 9, 11, 0, 1, 0, 3, 1, 0, 0, 1, 1, 3, 1, 12, 0]),
    ("termux", 35, [1, 15, 2, 3, 2, 2, 4, 1, 1, 0, 0, 0, 0, 2, 0, 4, 0]),
    ("cgeo", 29, [1, 8, 2, 5, 0, 0, 5, 0, 0, 0, 0, 0, 0, 6, 0, 9, 0]),
    ("wordpress", 28, [0, 10, 3, 6, 0, 3, 0, 1, 0, 0, 1, 0, 0, 1, 0, 8, 0]),
    ("pixel-dungeon", 17, [0, 2, 3, 4, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 8, 0]),
];

/// Overall reference targets: (human-centric docs, docs with App Usage,
/// with Inclusiveness, with User Reaction) out of 1,200.
///
/// The per-project totals in the reference tables sum to slightly less
/// than the overall headline counts (304 vs 306 for comments, 566 vs 567
/// for reviews); the difference is added to the first project as
/// category-only documents so the overall aggregates hold exactly.
pub const COMMENT_TARGETS: (usize, usize, usize, usize) = (306, 203, 76, 76);
pub const REVIEW_TARGETS: (usize, usize, usize, usize) = (567, 390, 31, 245);

const DOCS_PER_PROJECT: usize = 100;

const APP_USAGE_RANGE: std::ops::Range<usize> = 0..8;
const INCLUSIVENESS_RANGE: std::ops::Range<usize> = 8..13;
const USER_REACTION_RANGE: std::ops::Range<usize> = 13..17;

/// Vocabulary pools correlated with each high-level category. Words are
/// chosen to survive preprocessing with distinct stems.
const APP_USAGE_WORDS: &[&str] = &[
    "crash", "crashes", "battery", "drain", "update", "bug", "buggy", "slow", "freeze",
    "install", "login", "screen", "memory", "error", "restart", "sync", "broken", "fix",
    "network", "loading", "storage", "download", "notification", "permission", "version",
];
const INCLUSIVENESS_WORDS: &[&str] = &[
    "language", "translation", "accessibility", "font", "blind", "screenreader",
    "compatibility", "device", "android", "region", "country", "locale", "contrast",
    "disabled", "impaired", "tablet", "keyboard", "magnifier", "localization", "dialect",
];
const USER_REACTION_WORDS: &[&str] = &[
    "love", "hate", "annoying", "prefer", "wish", "feature", "disappointed", "boring",
    "useless", "amazing", "frustrating", "favorite", "enjoy", "dislike", "awesome",
    "terrible", "delighted", "satisfying", "hope", "request", "expect", "excited",
];
const NEUTRAL_WORDS: &[&str] = &[
    "app", "use", "phone", "time", "work", "new", "need", "make", "people", "day",
    "thing", "way", "good", "get", "really", "still", "see", "know", "want", "look",
    "try", "think", "open", "start", "run", "change", "read", "write", "click",
];

fn pool_for(label: usize) -> &'static [&'static str] {
    match label {
        0 => APP_USAGE_WORDS,
        1 => INCLUSIVENESS_WORDS,
        2 => USER_REACTION_WORDS,
        _ => NEUTRAL_WORDS,
    }
}

fn synth_text(labels: LabelVector, rng: &mut SplitMix64) -> String {
    let n_words = 8 + rng.bounded(12) as usize;
    let active: Vec<usize> = (0..3).filter(|&j| labels.bits()[j]).collect();
    let mut words = Vec::with_capacity(n_words);
    for _ in 0..n_words {
        let pool = if !active.is_empty() && rng.bounded(100) < 60 {
            pool_for(active[rng.bounded(active.len() as u64) as usize])
        } else {
            NEUTRAL_WORDS
        };
        words.push(pool[rng.bounded(pool.len() as u64) as usize]);
    }
    let mut text = String::new();
    for (i, word) in words.iter().enumerate() {
        if i > 0 {
            text.push(' ');
        }
        // sprinkle casing and punctuation so preprocessing has work to do
        match rng.bounded(12) {
            0 => {
                let mut chars = word.chars();
                if let Some(c) = chars.next() {
                    let _ = write!(text, "{}{}", c.to_uppercase(), chars.as_str());
                } else {
                    text.push_str(word);
                }
            }
            1 => {
                let _ = write!(text, "{word}!!");
            }
            2 => {
                let _ = write!(text, "{word},");
            }
            _ => text.push_str(word),
        }
    }
    text
}

/// Random dataset with label-correlated text. Label bits are drawn
/// independently (App Usage 35%, Inclusiveness 12%, User Reaction 25%) and
/// the non-human-centric bit keeps gold vectors consistent.
pub fn generate_learnable_corpus(name: &str, source: Source, n: usize, seed: u64) -> Dataset {
    let mut rng = SplitMix64::new(seed);
    let mut documents = Vec::with_capacity(n);
    for i in 0..n {
        let app_usage = rng.bounded(100) < 35;
        let inclusiveness = rng.bounded(100) < 12;
        let user_reaction = rng.bounded(100) < 25;
        let labels = LabelVector::new(
            app_usage,
            inclusiveness,
            user_reaction,
            !(app_usage || inclusiveness || user_reaction),
        );
        let text = synth_text(labels, &mut rng);
        documents.push(Document {
            id: format!("{name}-{i:05}"),
            source,
            project: COMMENT_PROJECTS[i % 12].0.to_string(),
            text,
            labels,
            subcategories: None,
        });
    }
    Dataset::new(name, documents)
}

/// Raise `counts` (starting at per-project lower bounds) to sum to
/// `target`, never exceeding `upper`, distributing round-robin one unit at
/// a time. Panics if the bounds make the target infeasible; the embedded
/// tables are covered by tests.
fn solve_targets(lower: &[usize], upper: &[usize], target: usize) -> Vec<usize> {
    let mut counts = lower.to_vec();
    let mut total: usize = counts.iter().sum();
    assert!(
        total <= target,
        "category lower bounds {total} exceed target {target}"
    );
    while total < target {
        let before = total;
        for i in 0..counts.len() {
            if total == target {
                break;
            }
            if counts[i] < upper[i] {
                counts[i] += 1;
                total += 1;
            }
        }
        assert!(total > before, "category upper bounds below target {target}");
    }
    counts
}

struct ProjectPlan {
    name: &'static str,
    human_centric: usize,
    subcat_counts: [usize; 17],
    app_usage_docs: usize,
    inclusiveness_docs: usize,
    user_reaction_docs: usize,
}

fn plan_projects(
    table: &[(&'static str, usize, [usize; 17]); 12],
    targets: (usize, usize, usize, usize),
) -> Vec<ProjectPlan> {
    let (total_target, au_target, incl_target, ur_target) = targets;
    let mut totals: Vec<usize> = table.iter().map(|&(_, t, _)| t).collect();
    let table_sum: usize = totals.iter().sum();
    assert!(table_sum <= total_target);
    totals[0] += total_target - table_sum;

    let max_in = |counts: &[usize; 17], range: std::ops::Range<usize>| {
        counts[range].iter().copied().max().unwrap_or(0)
    };
    let lower_i: Vec<usize> = table
        .iter()
        .map(|(_, _, c)| max_in(c, INCLUSIVENESS_RANGE))
        .collect();
    let lower_u: Vec<usize> = table
        .iter()
        .map(|(_, _, c)| max_in(c, USER_REACTION_RANGE))
        .collect();
    let incl = solve_targets(&lower_i, &totals, incl_target);
    let ur = solve_targets(&lower_u, &totals, ur_target);
    let lower_a: Vec<usize> = table
        .iter()
        .enumerate()
        .map(|(p, (_, _, c))| {
            max_in(c, APP_USAGE_RANGE).max(totals[p].saturating_sub(incl[p] + ur[p]))
        })
        .collect();
    let au = solve_targets(&lower_a, &totals, au_target);

    table
        .iter()
        .enumerate()
        .map(|(p, &(name, _, subcat_counts))| ProjectPlan {
            name,
            human_centric: totals[p],
            subcat_counts,
            app_usage_docs: au[p],
            inclusiveness_docs: incl[p],
            user_reaction_docs: ur[p],
        })
        .collect()
}

/// Deal each subcategory's occurrences cyclically over the docs of its
/// category range.
fn assign_subcategories(
    plan: &ProjectPlan,
    range_start: usize,
    range_len: usize,
    subcat_range: std::ops::Range<usize>,
    sets: &mut [BTreeSet<Subcategory>],
) {
    if range_len == 0 {
        return;
    }
    let mut position = 0usize;
    for s in subcat_range {
        let subcat = Subcategory::ALL[s];
        for _ in 0..plan.subcat_counts[s] {
            sets[range_start + position % range_len].insert(subcat);
            position += 1;
        }
    }
}

/// Build one reference dataset (1,200 documents, 100 per project) whose
/// label structure matches the embedded reference statistics exactly.
pub fn generate_reference_corpus(source: Source, seed: u64) -> Dataset {
    let (table, targets, name) = match source {
        Source::IssueComment => (&COMMENT_PROJECTS, COMMENT_TARGETS, "issue-comments"),
        Source::AppReview => (&REVIEW_PROJECTS, REVIEW_TARGETS, "app-reviews"),
    };
    let plans = plan_projects(table, targets);
    let mut rng = SplitMix64::new(seed);
    let mut documents = Vec::with_capacity(12 * DOCS_PER_PROJECT);

    for plan in &plans {
        let t = plan.human_centric;
        let a = plan.app_usage_docs;
        let i_count = plan.inclusiveness_docs;
        let u_count = plan.user_reaction_docs;
        // Category ranges over the human-centric docs [0, t): App Usage
        // first, then Inclusiveness and User Reaction placed to cover the
        // remainder (ranges may overlap; every doc is covered because
        // a + i + u >= t).
        let i_start = a.min(t - i_count);
        let u_start = (i_start + i_count).min(t - u_count);

        let mut sets: Vec<BTreeSet<Subcategory>> = vec![BTreeSet::new(); t];
        assign_subcategories(plan, 0, a, APP_USAGE_RANGE, &mut sets);
        assign_subcategories(plan, i_start, i_count, INCLUSIVENESS_RANGE, &mut sets);
        assign_subcategories(plan, u_start, u_count, USER_REACTION_RANGE, &mut sets);

        for d in 0..DOCS_PER_PROJECT {
            let labels = if d < t {
                LabelVector::new(
                    d < a,
                    d >= i_start && d < i_start + i_count,
                    d >= u_start && d < u_start + u_count,
                    false,
                )
            } else {
                LabelVector::new(false, false, false, true)
            };
            debug_assert!(labels.is_consistent());
            let subcategories = if d < t && !sets[d].is_empty() {
                Some(sets[d].clone())
            } else {
                None
            };
            let text = synth_text(labels, &mut rng);
            documents.push(Document {
                id: format!("{}-{}-{d:03}", plan.name, source.as_str()),
                source,
                project: plan.name.to_string(),
                text,
                labels,
                subcategories,
            });
        }
    }
    Dataset::new(name, documents)
}

/// Every distinct stemmed token the synthetic generators can emit.
pub fn synthetic_vocabulary() -> Vec<String> {
    let mut vocab = BTreeSet::new();
    for pool in [
        APP_USAGE_WORDS,
        INCLUSIVENESS_WORDS,
        USER_REACTION_WORDS,
        NEUTRAL_WORDS,
    ] {
        for word in pool {
            vocab.insert(crate::textprep::stem(&word.to_lowercase()));
        }
    }
    vocab.into_iter().collect()
}

/// Write a word2vec text-format embedding file covering the synthetic
/// vocabulary, with deterministic pseudo-random vectors.
pub fn write_synthetic_embeddings(path: &Path, dimension: usize, seed: u64) -> crate::Result<()> {
    let vocab = synthetic_vocabulary();
    let mut out = String::new();
    let _ = writeln!(out, "{} {dimension}", vocab.len());
    for token in &vocab {
        let mut rng = SplitMix64::new(seed ^ fnv1a(token.as_bytes()));
        let _ = write!(out, "{token}");
        for _ in 0..dimension {
            let _ = write!(out, " {:.6}", rng.next_f64() - 0.5);
        }
        out.push('\n');
    }
    crate::fsutil::atomic_write(path, out.as_bytes())
}
