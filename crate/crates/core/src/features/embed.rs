//! Pre-trained embedding tables in the word2vec text format and mean-pooled
//! document vectors.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::io::{BufRead, BufReader};
use std::path::Path;

/// Token -> vector table with a fixed dimension.
#[derive(Debug, Clone)]
pub struct EmbeddingTable {
    pub dimension: usize,
    pub vectors: HashMap<String, Vec<f32>>,
    pub source_name: String,
}

impl EmbeddingTable {
    pub fn get(&self, token: &str) -> Option<&[f32]> {
        self.vectors.get(token).map(Vec::as_slice)
    }
}

/// Load a word2vec text file: a `count dimension` header line, then one
/// `token v1 ... vd` line per token. A line whose value count disagrees
/// with the header dimension fails the load; duplicate tokens keep the last
/// occurrence and emit a warning.
pub fn load_embeddings(path: &Path) -> Result<EmbeddingTable> {
    let file = std::fs::File::open(path)?;
    let mut reader = BufReader::new(file);

    let mut header = String::new();
    reader.read_line(&mut header)?;
    let mut parts = header.split_whitespace();
    let declared_count: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Data(format!("{}: unreadable header {header:?}", path.display())))?;
    let dimension: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Data(format!("{}: unreadable header {header:?}", path.display())))?;
    if dimension == 0 || parts.next().is_some() {
        return Err(Error::Data(format!(
            "{}: unreadable header {header:?}",
            path.display()
        )));
    }

    let mut vectors: HashMap<String, Vec<f32>> = HashMap::with_capacity(declared_count);
    let mut duplicates = 0usize;
    for (i, line) in reader.lines().enumerate() {
        let line_no = i as u64 + 2;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let token = fields.next().unwrap().to_string();
        let values: Vec<f32> = fields
            .map(|v| {
                v.parse::<f32>().map_err(|_| Error::MalformedRow {
                    path: path.display().to_string(),
                    line: line_no,
                    reason: format!("bad embedding value {v:?}"),
                })
            })
            .collect::<Result<_>>()?;
        if values.len() != dimension {
            return Err(Error::MalformedRow {
                path: path.display().to_string(),
                line: line_no,
                reason: format!(
                    "expected {dimension} values for token {token:?}, got {}",
                    values.len()
                ),
            });
        }
        if vectors.insert(token, values).is_some() {
            duplicates += 1;
        }
    }
    if duplicates > 0 {
        log::warn!(
            "{}: {duplicates} duplicate token(s), last occurrence kept",
            path.display()
        );
    }
    if vectors.len() != declared_count {
        log::warn!(
            "{}: header declares {declared_count} tokens, found {}",
            path.display(),
            vectors.len()
        );
    }
    let source_name = path
        .file_name()
        .and_then(|s| s.to_str())
        .unwrap_or("embeddings")
        .to_string();
    Ok(EmbeddingTable {
        dimension,
        vectors,
        source_name,
    })
}

/// Arithmetic mean of the vectors of in-vocabulary tokens; the zero vector
/// when no token is in the table.
pub fn embed_document(table: &EmbeddingTable, tokens: &[String]) -> Vec<f64> {
    let mut sum = vec![0.0f64; table.dimension];
    let mut hits = 0usize;
    for token in tokens {
        if let Some(vector) = table.get(token) {
            for (acc, &v) in sum.iter_mut().zip(vector) {
                *acc += v as f64;
            }
            hits += 1;
        }
    }
    if hits > 0 {
        for v in &mut sum {
            *v /= hits as f64;
        }
    }
    sum
}
