//! JSONL corpus format: one `PaperRecord` object per line.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{Corpus, CorpusError, PaperRecord};

fn io_err(path: &Path, source: std::io::Error) -> CorpusError {
    CorpusError::Io {
        path: path.display().to_string(),
        source,
    }
}

pub(super) fn load(path: &Path) -> Result<Corpus, CorpusError> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let reader = BufReader::new(file);
    let file_name = path.display().to_string();

    let mut records = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| io_err(path, e))?;
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let record: PaperRecord =
            serde_json::from_str(&line).map_err(|e| CorpusError::Malformed {
                file: file_name.clone(),
                line: line_no,
                detail: e.to_string(),
            })?;
        if let Err((field, reason)) = record.validate() {
            return Err(CorpusError::Invalid {
                file: file_name.clone(),
                line: line_no,
                paper_id: record.paper_id.to_string(),
                field,
                reason,
            });
        }
        records.push(record);
    }
    Corpus::build(records, &file_name, false)
}

pub(super) fn save(corpus: &Corpus, path: &Path) -> Result<(), CorpusError> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut writer = BufWriter::new(file);
    writer
        .write_all(to_jsonl_string(corpus).as_bytes())
        .map_err(|e| io_err(path, e))?;
    writer.flush().map_err(|e| io_err(path, e))
}

/// Renders the whole corpus as JSONL, records in paper-id order. The
/// output is byte-deterministic for a given corpus.
pub fn to_jsonl_string(corpus: &Corpus) -> String {
    let mut out = String::new();
    for record in corpus.to_records() {
        out.push_str(&serde_json::to_string(&record).expect("record serialization is infallible"));
        out.push('\n');
    }
    out
}
