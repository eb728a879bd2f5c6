//! Per-project and overall counts of taxonomy categories and subcategories.

use super::{Dataset, Label, Subcategory};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// A document count together with its share of the population.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CategoryStat {
    pub count: usize,
    /// `count / n`, in percent. Categories overlap, so per-category
    /// percentages may sum past 100.
    pub percent: f64,
}

impl CategoryStat {
    fn of(count: usize, n: usize) -> CategoryStat {
        let percent = if n == 0 {
            0.0
        } else {
            count as f64 / n as f64 * 100.0
        };
        CategoryStat { count, percent }
    }
}

/// Counts for one project (or the whole dataset).
#[derive(Debug, Clone, serde::Serialize)]
pub struct ProjectStats {
    pub n: usize,
    /// Documents carrying at least one of the three issue categories.
    pub human_centric: CategoryStat,
    /// Documents carrying each high-level category, keyed by label name.
    pub categories: BTreeMap<String, CategoryStat>,
    /// Documents carrying each subcategory, keyed by subcategory name.
    pub subcategories: BTreeMap<String, CategoryStat>,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct StatsReport {
    pub dataset: String,
    pub overall: ProjectStats,
    pub per_project: BTreeMap<String, ProjectStats>,
}

fn stats_for(docs: &[&super::Document]) -> ProjectStats {
    let n = docs.len();
    let mut human_centric = 0usize;
    let mut cat_counts: BTreeMap<Label, usize> = BTreeMap::new();
    let mut sub_counts: BTreeMap<Subcategory, usize> = BTreeMap::new();
    for doc in docs.iter().copied() {
        if doc.labels.is_human_centric() {
            human_centric += 1;
        }
        for label in Label::ALL {
            if doc.labels.get(label) {
                *cat_counts.entry(label).or_insert(0) += 1;
            }
        }
        if let Some(subs) = &doc.subcategories {
            for &s in subs {
                *sub_counts.entry(s).or_insert(0) += 1;
            }
        }
    }
    ProjectStats {
        n,
        human_centric: CategoryStat::of(human_centric, n),
        categories: Label::ALL
            .iter()
            .map(|&l| {
                (
                    l.as_str().to_string(),
                    CategoryStat::of(cat_counts.get(&l).copied().unwrap_or(0), n),
                )
            })
            .collect(),
        subcategories: Subcategory::ALL
            .iter()
            .map(|&s| {
                (
                    s.as_str().to_string(),
                    CategoryStat::of(sub_counts.get(&s).copied().unwrap_or(0), n),
                )
            })
            .collect(),
    }
}

/// Compute taxonomy statistics for a validated dataset.
pub fn corpus_stats(dataset: &Dataset) -> StatsReport {
    let mut projects: BTreeMap<String, Vec<&super::Document>> = BTreeMap::new();
    for doc in &dataset.documents {
        projects.entry(doc.project.clone()).or_default().push(doc);
    }
    let all: Vec<&super::Document> = dataset.documents.iter().collect();
    StatsReport {
        dataset: dataset.name.clone(),
        overall: stats_for(&all),
        per_project: projects
            .into_iter()
            .map(|(name, docs)| (name, stats_for(&docs)))
            .collect(),
    }
}

/// Format a percentage with up to two decimals, trimming trailing zeros
/// (25.5 not 25.50, 47.25 stays 47.25).
pub fn format_percent(p: f64) -> String {
    let s = format!("{:.2}", p);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

impl StatsReport {
    /// Human-readable rendering used by the `stats` command.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "dataset: {} (N={})", self.dataset, self.overall.n);
        let hc = &self.overall.human_centric;
        let _ = writeln!(
            out,
            "human-centric: {}/{} ({}%)",
            hc.count,
            self.overall.n,
            format_percent(hc.percent)
        );
        for (name, stat) in &self.overall.categories {
            let _ = writeln!(
                out,
                "  {name}: {}/{} ({}%)",
                stat.count,
                self.overall.n,
                format_percent(stat.percent)
            );
        }
        let _ = writeln!(out, "subcategories:");
        for (name, stat) in &self.overall.subcategories {
            let _ = writeln!(
                out,
                "  {name}: {} ({}%)",
                stat.count,
                format_percent(stat.percent)
            );
        }
        let _ = writeln!(out, "per project:");
        for (project, stats) in &self.per_project {
            let _ = writeln!(
                out,
                "  {project}: {}/{} human-centric ({}%)",
                stats.human_centric.count,
                stats.n,
                format_percent(stats.human_centric.percent)
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Dataset, Document, LabelVector, Source};
    use super::*;
    use std::collections::BTreeSet;

    fn doc(id: &str, project: &str, labels: LabelVector, subs: &[Subcategory]) -> Document {
        Document {
            id: id.into(),
            source: Source::IssueComment,
            project: project.into(),
            text: "t".into(),
            labels,
            subcategories: if subs.is_empty() {
                None
            } else {
                Some(subs.iter().copied().collect::<BTreeSet<_>>())
            },
        }
    }

    #[test]
    fn single_non_human_centric_doc() {
        let ds = Dataset::new(
            "one",
            vec![doc("a", "signal", LabelVector::new(false, false, false, true), &[])],
        );
        let report = corpus_stats(&ds);
        assert_eq!(report.overall.human_centric.count, 0);
        assert_eq!(report.overall.human_centric.percent, 0.0);
        assert_eq!(report.overall.categories["non_human_centric"].count, 1);
    }

    #[test]
    fn human_centric_complement_identity() {
        let ds = Dataset::new(
            "mix",
            vec![
                doc("a", "p1", LabelVector::new(true, false, false, false), &[Subcategory::Buginess]),
                doc("b", "p1", LabelVector::new(true, true, false, false), &[Subcategory::UiUx, Subcategory::Language]),
                doc("c", "p2", LabelVector::new(false, false, false, true), &[]),
                doc("d", "p2", LabelVector::new(false, false, true, false), &[Subcategory::Preference]),
            ],
        );
        let report = corpus_stats(&ds);
        // human-centric = N - count(non_human_centric)
        assert_eq!(
            report.overall.human_centric.count,
            report.overall.n - report.overall.categories["non_human_centric"].count
        );
        assert_eq!(report.overall.human_centric.count, 3);
        assert_eq!(report.overall.categories["app_usage"].count, 2);
        assert_eq!(report.overall.subcategories["language"].count, 1);
        assert_eq!(report.per_project["p1"].human_centric.count, 2);
        assert_eq!(report.per_project["p2"].human_centric.count, 1);
        // percentages are count/N per project
        assert!((report.per_project["p1"].human_centric.percent - 100.0).abs() < 1e-12);
        assert!((report.per_project["p2"].human_centric.percent - 50.0).abs() < 1e-12);
    }

    #[test]
    fn percent_formatting() {
        assert_eq!(format_percent(25.5), "25.5");
        assert_eq!(format_percent(47.25), "47.25");
        assert_eq!(format_percent(0.0), "0");
        assert_eq!(format_percent(100.0), "100");
    }
}
