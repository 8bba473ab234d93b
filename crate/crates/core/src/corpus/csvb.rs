//! CSV bundle corpus format: a directory holding `papers.csv`,
//! `reviews.csv` and `citations.csv`. Multi-valued paper fields
//! (author ids, topics) are semicolon-joined; reviews are one row per
//! (paper, round, reviewer).

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::{Corpus, CorpusError, Decision, PaperRecord, ReviewRound};
use crate::ids::{AuthorId, EditorId, PaperId, ReviewerId};

const PAPERS_HEADER: [&str; 7] = [
    "paper_id",
    "title",
    "submission_year",
    "decision",
    "citation_count",
    "author_ids",
    "topics",
];
const REVIEWS_HEADER: [&str; 5] = [
    "paper_id",
    "round_index",
    "editor_id",
    "reviewer_id",
    "review_text",
];
const CITATIONS_HEADER: [&str; 2] = ["citing_paper_id", "cited_paper_id"];

fn io_err(path: &Path, source: std::io::Error) -> CorpusError {
    CorpusError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn open_reader(path: &Path, expected: &[&str]) -> Result<csv::Reader<File>, CorpusError> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
    let got: Vec<String> = reader
        .headers()
        .map_err(|e| CorpusError::Malformed {
            file: path.display().to_string(),
            line: 1,
            detail: e.to_string(),
        })?
        .iter()
        .map(str::to_string)
        .collect();
    if got != expected {
        return Err(CorpusError::CsvHeader {
            file: path.display().to_string(),
            expected: expected.join(","),
            got: got.join(","),
        });
    }
    Ok(reader)
}

fn field<'r>(
    row: &'r csv::StringRecord,
    idx: usize,
    name: &'static str,
    file: &str,
    line: usize,
) -> Result<&'r str, CorpusError> {
    row.get(idx).ok_or_else(|| CorpusError::Malformed {
        file: file.to_string(),
        line,
        detail: format!("missing column `{name}`"),
    })
}

fn split_semi(value: &str) -> Vec<String> {
    if value.is_empty() {
        Vec::new()
    } else {
        value.split(';').map(str::to_string).collect()
    }
}

pub(super) fn load(dir: &Path) -> Result<Corpus, CorpusError> {
    let papers_path = dir.join("papers.csv");
    let reviews_path = dir.join("reviews.csv");
    let citations_path = dir.join("citations.csv");
    let papers_file = papers_path.display().to_string();
    let reviews_file = reviews_path.display().to_string();
    let citations_file = citations_path.display().to_string();

    let mut records: BTreeMap<PaperId, PaperRecord> = BTreeMap::new();
    let mut reader = open_reader(&papers_path, &PAPERS_HEADER)?;
    for (i, row) in reader.records().enumerate() {
        let line = i + 2; // header is line 1
        let row = row.map_err(|e| CorpusError::Malformed {
            file: papers_file.clone(),
            line,
            detail: e.to_string(),
        })?;
        let paper_id = PaperId::new(field(&row, 0, "paper_id", &papers_file, line)?);
        let year_raw = field(&row, 2, "submission_year", &papers_file, line)?;
        let submission_year = year_raw.parse::<i32>().map_err(|_| CorpusError::Invalid {
            file: papers_file.clone(),
            line,
            paper_id: paper_id.to_string(),
            field: "submission_year",
            reason: format!("not an integer: `{year_raw}`"),
        })?;
        let decision_raw = field(&row, 3, "decision", &papers_file, line)?;
        let decision = match decision_raw {
            "accepted" => Decision::Accepted,
            "rejected" => Decision::Rejected,
            other => {
                return Err(CorpusError::Invalid {
                    file: papers_file.clone(),
                    line,
                    paper_id: paper_id.to_string(),
                    field: "decision",
                    reason: format!("expected `accepted` or `rejected`, got `{other}`"),
                })
            }
        };
        let citation_raw = field(&row, 4, "citation_count", &papers_file, line)?;
        let citation_count = if citation_raw.is_empty() {
            0
        } else {
            citation_raw.parse::<u64>().map_err(|_| CorpusError::Invalid {
                file: papers_file.clone(),
                line,
                paper_id: paper_id.to_string(),
                field: "citation_count",
                reason: format!("not a non-negative integer: `{citation_raw}`"),
            })?
        };
        let record = PaperRecord {
            paper_id: paper_id.clone(),
            title: field(&row, 1, "title", &papers_file, line)?.to_string(),
            author_ids: split_semi(field(&row, 5, "author_ids", &papers_file, line)?)
                .into_iter()
                .map(AuthorId::new)
                .collect(),
            topics: split_semi(field(&row, 6, "topics", &papers_file, line)?)
                .into_iter()
                .collect(),
            submission_year,
            decision,
            citation_count,
            cited_paper_ids: Default::default(),
            review_rounds: Vec::new(),
        };
        if records.insert(paper_id.clone(), record).is_some() {
            return Err(CorpusError::DuplicatePaper {
                file: papers_file.clone(),
                paper_id,
            });
        }
    }

    // reviews.csv: group rows into rounds, preserving row order within a
    // round and requiring a consistent editor per (paper, round).
    let mut rounds: BTreeMap<(PaperId, u32), ReviewRound> = BTreeMap::new();
    let mut reader = open_reader(&reviews_path, &REVIEWS_HEADER)?;
    for (i, row) in reader.records().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| CorpusError::Malformed {
            file: reviews_file.clone(),
            line,
            detail: e.to_string(),
        })?;
        let paper_id = PaperId::new(field(&row, 0, "paper_id", &reviews_file, line)?);
        if !records.contains_key(&paper_id) {
            return Err(CorpusError::Invalid {
                file: reviews_file.clone(),
                line,
                paper_id: paper_id.to_string(),
                field: "paper_id",
                reason: "review row for a paper not present in papers.csv".into(),
            });
        }
        let round_raw = field(&row, 1, "round_index", &reviews_file, line)?;
        let round_index = round_raw.parse::<u32>().map_err(|_| CorpusError::Invalid {
            file: reviews_file.clone(),
            line,
            paper_id: paper_id.to_string(),
            field: "round_index",
            reason: format!("not a positive integer: `{round_raw}`"),
        })?;
        let editor_id = EditorId::new(field(&row, 2, "editor_id", &reviews_file, line)?);
        let reviewer_id = ReviewerId::new(field(&row, 3, "reviewer_id", &reviews_file, line)?);
        let text = field(&row, 4, "review_text", &reviews_file, line)?.to_string();

        let entry = rounds
            .entry((paper_id.clone(), round_index))
            .or_insert_with(|| ReviewRound {
                round_index,
                editor_id: editor_id.clone(),
                reviewer_ids: Vec::new(),
                review_texts: Vec::new(),
            });
        if entry.editor_id != editor_id {
            return Err(CorpusError::Invalid {
                file: reviews_file.clone(),
                line,
                paper_id: paper_id.to_string(),
                field: "editor_id",
                reason: format!(
                    "round {round_index} assigned to both `{}` and `{editor_id}`",
                    entry.editor_id
                ),
            });
        }
        entry.reviewer_ids.push(reviewer_id);
        entry.review_texts.push(text);
    }
    for ((paper_id, _), round) in rounds {
        records
            .get_mut(&paper_id)
            .expect("checked above")
            .review_rounds
            .push(round);
    }

    let mut reader = open_reader(&citations_path, &CITATIONS_HEADER)?;
    for (i, row) in reader.records().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| CorpusError::Malformed {
            file: citations_file.clone(),
            line,
            detail: e.to_string(),
        })?;
        let citing = PaperId::new(field(&row, 0, "citing_paper_id", &citations_file, line)?);
        let cited = PaperId::new(field(&row, 1, "cited_paper_id", &citations_file, line)?);
        let Some(record) = records.get_mut(&citing) else {
            return Err(CorpusError::Invalid {
                file: citations_file.clone(),
                line,
                paper_id: citing.to_string(),
                field: "citing_paper_id",
                reason: "citation row for a paper not present in papers.csv".into(),
            });
        };
        record.cited_paper_ids.insert(cited);
    }

    let records: Vec<PaperRecord> = records.into_values().collect();
    for record in &records {
        if let Err((field, reason)) = record.validate() {
            return Err(CorpusError::Invalid {
                file: papers_file.clone(),
                line: 0,
                paper_id: record.paper_id.to_string(),
                field,
                reason,
            });
        }
    }
    Corpus::build(records, &papers_file, false)
}

pub(super) fn save(corpus: &Corpus, dir: &Path) -> Result<(), CorpusError> {
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;

    let papers_path = dir.join("papers.csv");
    let mut writer = csv::Writer::from_writer(BufWriter::new(
        File::create(&papers_path).map_err(|e| io_err(&papers_path, e))?,
    ));
    writer.write_record(PAPERS_HEADER).map_err(|e| CorpusError::Malformed {
        file: papers_path.display().to_string(),
        line: 0,
        detail: e.to_string(),
    })?;
    for record in corpus.to_records() {
        let authors = record
            .author_ids
            .iter()
            .map(AuthorId::as_str)
            .collect::<Vec<_>>()
            .join(";");
        let topics = record.topics.iter().cloned().collect::<Vec<_>>().join(";");
        writer
            .write_record([
                record.paper_id.as_str(),
                &record.title,
                &record.submission_year.to_string(),
                record.decision.as_str(),
                &record.citation_count.to_string(),
                &authors,
                &topics,
            ])
            .map_err(|e| CorpusError::Malformed {
                file: papers_path.display().to_string(),
                line: 0,
                detail: e.to_string(),
            })?;
    }
    writer.flush().map_err(|e| io_err(&papers_path, e))?;

    let reviews_path = dir.join("reviews.csv");
    let mut writer = csv::Writer::from_writer(BufWriter::new(
        File::create(&reviews_path).map_err(|e| io_err(&reviews_path, e))?,
    ));
    writer.write_record(REVIEWS_HEADER).map_err(|e| CorpusError::Malformed {
        file: reviews_path.display().to_string(),
        line: 0,
        detail: e.to_string(),
    })?;
    for record in corpus.to_records() {
        for round in &record.review_rounds {
            for (reviewer, text) in round.reviewer_ids.iter().zip(&round.review_texts) {
                writer
                    .write_record([
                        record.paper_id.as_str(),
                        &round.round_index.to_string(),
                        round.editor_id.as_str(),
                        reviewer.as_str(),
                        text,
                    ])
                    .map_err(|e| CorpusError::Malformed {
                        file: reviews_path.display().to_string(),
                        line: 0,
                        detail: e.to_string(),
                    })?;
            }
        }
    }
    writer.flush().map_err(|e| io_err(&reviews_path, e))?;

    let citations_path = dir.join("citations.csv");
    let mut writer = csv::Writer::from_writer(BufWriter::new(
        File::create(&citations_path).map_err(|e| io_err(&citations_path, e))?,
    ));
    writer
        .write_record(CITATIONS_HEADER)
        .map_err(|e| CorpusError::Malformed {
            file: citations_path.display().to_string(),
            line: 0,
            detail: e.to_string(),
        })?;
    for record in corpus.to_records() {
        for cited in &record.cited_paper_ids {
            writer
                .write_record([record.paper_id.as_str(), cited.as_str()])
                .map_err(|e| CorpusError::Malformed {
                    file: citations_path.display().to_string(),
                    line: 0,
                    detail: e.to_string(),
                })?;
        }
    }
    writer.flush().map_err(|e| io_err(&citations_path, e))
}
