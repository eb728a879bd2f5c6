//! Dataset file formats.
//!
//! CSV schema (header required):
//! `id,source,project,text,app_usage,inclusiveness,user_reaction,non_human_centric,subcategories`
//! with `source` in `{app_review, issue_comment}`, label columns in `{0,1}`,
//! RFC-4180 quoting, and subcategories as a semicolon-separated token list.
//! JSONL carries one object per line with the same field names.

use super::{validate, Dataset, Document, LabelVector, Source, Subcategory};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::io::{BufRead, BufReader};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetFormat {
    Csv,
    Jsonl,
}

impl DatasetFormat {
    /// Infer from the file extension; `.jsonl`/`.json` map to JSONL,
    /// everything else to CSV.
    pub fn from_path(path: &Path) -> DatasetFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("json") => DatasetFormat::Jsonl,
            _ => DatasetFormat::Csv,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(DatasetFormat::Csv),
            "jsonl" => Ok(DatasetFormat::Jsonl),
            other => Err(Error::Config(format!(
                "unknown dataset format {other:?} (expected csv or jsonl)"
            ))),
        }
    }
}

/// On-disk row shape shared by both formats.
#[derive(Debug, Serialize, Deserialize)]
struct RawRow {
    id: String,
    source: String,
    project: String,
    text: String,
    app_usage: u8,
    inclusiveness: u8,
    user_reaction: u8,
    non_human_centric: u8,
    #[serde(default)]
    subcategories: Option<String>,
}

fn parse_bit(value: u8, field: &str) -> Result<bool> {
    match value {
        0 => Ok(false),
        1 => Ok(true),
        other => Err(Error::Data(format!("{field} must be 0 or 1, got {other}"))),
    }
}

fn row_to_document(row: RawRow) -> Result<Document> {
    let labels = LabelVector::new(
        parse_bit(row.app_usage, "app_usage")?,
        parse_bit(row.inclusiveness, "inclusiveness")?,
        parse_bit(row.user_reaction, "user_reaction")?,
        parse_bit(row.non_human_centric, "non_human_centric")?,
    );
    let subcategories = match row.subcategories.as_deref().map(str::trim) {
        None | Some("") => None,
        Some(list) => {
            let mut set = BTreeSet::new();
            for token in list.split(';') {
                let token = token.trim();
                if !token.is_empty() {
                    set.insert(Subcategory::parse(token)?);
                }
            }
            Some(set)
        }
    };
    Ok(Document {
        id: row.id,
        source: Source::parse(&row.source)?,
        project: row.project,
        text: row.text,
        labels,
        subcategories,
    })
}

fn malformed(path: &Path, line: u64, reason: impl ToString) -> Error {
    Error::MalformedRow {
        path: path.display().to_string(),
        line,
        reason: reason.to_string(),
    }
}

/// Load and fully validate a dataset. Either every row parses and every
/// invariant holds, or the whole load fails with the offending line.
pub fn load_dataset(path: &Path, format: DatasetFormat) -> Result<Dataset> {
    let rows = load_rows(path, format)?;
    if rows.is_empty() {
        return Err(Error::EmptyDataset(path.display().to_string()));
    }
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("dataset")
        .to_string();
    let mut documents = Vec::with_capacity(rows.len());
    let mut lines = Vec::with_capacity(rows.len());
    for (line, row) in rows {
        let doc = row_to_document(row).map_err(|e| malformed(path, line, e))?;
        lines.push((doc.id.clone(), line));
        documents.push(doc);
    }
    let dataset = Dataset::new(name, documents);
    let report = validate(&dataset);
    if let Some(v) = report.violations.first() {
        let line = lines
            .iter()
            .find(|(id, _)| *id == v.doc_id)
            .map(|(_, l)| *l)
            .unwrap_or(0);
        return Err(malformed(
            path,
            line,
            format!(
                "{} ({} violation{} total)",
                v.message,
                report.violations.len(),
                if report.violations.len() == 1 { "" } else { "s" }
            ),
        ));
    }
    Ok(dataset)
}

/// Parse rows without enforcing dataset invariants. Used by the `validate`
/// command so that invariant violations can be reported instead of aborting
/// the load.
pub(crate) fn load_documents_lenient(path: &Path, format: DatasetFormat) -> Result<Dataset> {
    let rows = load_rows(path, format)?;
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("dataset")
        .to_string();
    let documents = rows
        .into_iter()
        .map(|(line, row)| row_to_document(row).map_err(|e| malformed(path, line, e)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Dataset::new(name, documents))
}

fn load_rows(path: &Path, format: DatasetFormat) -> Result<Vec<(u64, RawRow)>> {
    match format {
        DatasetFormat::Csv => load_rows_csv(path),
        DatasetFormat::Jsonl => load_rows_jsonl(path),
    }
}

fn load_rows_csv(path: &Path) -> Result<Vec<(u64, RawRow)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| malformed(path, 1, e))?;
    {
        let headers = reader.headers().map_err(|e| malformed(path, 1, e))?;
        let expected = [
            "id",
            "source",
            "project",
            "text",
            "app_usage",
            "inclusiveness",
            "user_reaction",
            "non_human_centric",
            "subcategories",
        ];
        let got: Vec<&str> = headers.iter().collect();
        if got != expected {
            return Err(malformed(
                path,
                1,
                format!("bad header: expected {expected:?}, got {got:?}"),
            ));
        }
    }
    let headers = reader.headers().map_err(|e| malformed(path, 1, e))?.clone();
    let mut rows = Vec::new();
    let mut record = csv::StringRecord::new();
    loop {
        let line = reader.position().line();
        match reader.read_record(&mut record) {
            Ok(true) => {
                let row: RawRow = record
                    .deserialize(Some(&headers))
                    .map_err(|e| malformed(path, line, e))?;
                rows.push((line, row));
            }
            Ok(false) => break,
            Err(e) => return Err(malformed(path, line, e)),
        }
    }
    Ok(rows)
}

fn load_rows_jsonl(path: &Path) -> Result<Vec<(u64, RawRow)>> {
    let file = std::fs::File::open(path)?;
    let reader = BufReader::new(file);
    let mut rows = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i as u64 + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row: RawRow =
            serde_json::from_str(&line).map_err(|e| malformed(path, line_no, e))?;
        rows.push((line_no, row));
    }
    Ok(rows)
}

fn document_to_row(doc: &Document) -> RawRow {
    RawRow {
        id: doc.id.clone(),
        source: doc.source.as_str().to_string(),
        project: doc.project.clone(),
        text: doc.text.clone(),
        app_usage: doc.labels.app_usage as u8,
        inclusiveness: doc.labels.inclusiveness as u8,
        user_reaction: doc.labels.user_reaction as u8,
        non_human_centric: doc.labels.non_human_centric as u8,
        subcategories: doc.subcategories.as_ref().map(|set| {
            set.iter()
                .map(|s| s.as_str())
                .collect::<Vec<_>>()
                .join(";")
        }),
    }
}

/// Write a dataset in the CSV schema. The inverse of [`load_dataset`].
pub fn save_dataset_csv(dataset: &Dataset, path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for doc in &dataset.documents {
        writer
            .serialize(document_to_row(doc))
            .map_err(|e| Error::Data(e.to_string()))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Data(e.to_string()))?;
    crate::fsutil::atomic_write(path, &bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    const HEADER: &str =
        "id,source,project,text,app_usage,inclusiveness,user_reaction,non_human_centric,subcategories";

    fn write_csv(lines: &[&str]) -> tempfile::NamedTempFile {
        let mut f = tempfile::Builder::new().suffix(".csv").tempfile().unwrap();
        writeln!(f, "{HEADER}").unwrap();
        for l in lines {
            writeln!(f, "{l}").unwrap();
        }
        f.flush().unwrap();
        f
    }

    #[test]
    fn loads_valid_csv() {
        let f = write_csv(&[
            "r1,app_review,signal,Nice app but crashes,1,0,0,0,buginess",
            "r2,issue_comment,brave,All good here,0,0,0,1,",
        ]);
        let ds = load_dataset(f.path(), DatasetFormat::Csv).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.documents[0].source, Source::AppReview);
        assert!(ds.documents[0].labels.app_usage);
        assert_eq!(
            ds.documents[0]
                .subcategories
                .as_ref()
                .unwrap()
                .iter()
                .next()
                .unwrap(),
            &Subcategory::Buginess
        );
        assert!(ds.documents[1].subcategories.is_none());
    }

    #[test]
    fn empty_file_is_error() {
        let f = write_csv(&[]);
        let err = load_dataset(f.path(), DatasetFormat::Csv).unwrap_err();
        assert!(matches!(err, Error::EmptyDataset(_)), "{err}");
    }

    #[test]
    fn all_zero_labels_fail_consistency() {
        let f = write_csv(&["r1,app_review,signal,some text,0,0,0,0,"]);
        let err = load_dataset(f.path(), DatasetFormat::Csv).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("non_human_centric"), "{msg}");
        assert!(msg.contains(":2:"), "line number missing: {msg}");
    }

    #[test]
    fn duplicate_ids_fail() {
        let f = write_csv(&[
            "r1,app_review,signal,text a,0,0,0,1,",
            "r1,app_review,signal,text b,0,0,0,1,",
        ]);
        let err = load_dataset(f.path(), DatasetFormat::Csv).unwrap_err();
        assert!(err.to_string().contains("appears 2 times"), "{err}");
    }

    #[test]
    fn bad_label_bit_reports_line() {
        let f = write_csv(&[
            "r1,app_review,signal,good,0,0,0,1,",
            "r2,app_review,signal,bad bit,2,0,0,1,",
        ]);
        let err = load_dataset(f.path(), DatasetFormat::Csv).unwrap_err();
        assert!(err.to_string().contains(":3:"), "{err}");
    }

    #[test]
    fn unknown_source_rejected() {
        let f = write_csv(&["r1,tweet,signal,text,0,0,0,1,"]);
        assert!(load_dataset(f.path(), DatasetFormat::Csv).is_err());
    }

    #[test]
    fn jsonl_roundtrip_and_csv_parity() {
        let mut f = tempfile::Builder::new().suffix(".jsonl").tempfile().unwrap();
        writeln!(
            f,
            r#"{{"id":"j1","source":"issue_comment","project":"cgeo","text":"won't start on my phone","app_usage":1,"inclusiveness":1,"user_reaction":0,"non_human_centric":0,"subcategories":"buginess;compatibility"}}"#
        )
        .unwrap();
        f.flush().unwrap();
        let ds = load_dataset(f.path(), DatasetFormat::Jsonl).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds.documents[0].subcategories.as_ref().unwrap().len(), 2);

        let dir = tempfile::tempdir().unwrap();
        let csv_path = dir.path().join("round.csv");
        save_dataset_csv(&ds, &csv_path).unwrap();
        let back = load_dataset(&csv_path, DatasetFormat::Csv).unwrap();
        assert_eq!(back.documents[0].id, ds.documents[0].id);
        assert_eq!(back.documents[0].labels, ds.documents[0].labels);
        assert_eq!(back.documents[0].text, ds.documents[0].text);
    }

    #[test]
    fn quoted_text_with_newline_roundtrips() {
        let ds = Dataset::new(
            "q",
            vec![Document {
                id: "x".into(),
                source: Source::IssueComment,
                project: "termux".into(),
                text: "line one\nline two, with comma and \"quotes\"".into(),
                labels: LabelVector::new(false, false, false, true),
                subcategories: None,
            }],
        );
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("q.csv");
        save_dataset_csv(&ds, &path).unwrap();
        let back = load_dataset(&path, DatasetFormat::Csv).unwrap();
        assert_eq!(back.documents[0].text, ds.documents[0].text);
    }
}
