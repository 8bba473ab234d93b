//! Corpus data model: submission records, validation, and indexed views.
//!
//! A [`Corpus`] is immutable after load. All derived indexes (author to
//! papers, year to papers, reverse citations) are built once and kept
//! consistent by construction; any number of readers may share it.
//!
//! Citation targets that do not resolve to an in-corpus paper are kept on
//! the record but flagged as unresolved; they contribute to no index and
//! no graph.

mod csvb;
mod jsonl;

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::ops::RangeInclusive;
use std::path::Path;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ids::{AuthorId, EditorId, PaperId, ReviewerId};

/// Final editorial decision on a submission.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Accepted,
    Rejected,
}

impl Decision {
    pub fn as_str(self) -> &'static str {
        match self {
            Decision::Accepted => "accepted",
            Decision::Rejected => "rejected",
        }
    }
}

/// One round of peer review: the handling editor plus parallel lists of
/// referees and their reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReviewRound {
    pub round_index: u32,
    pub editor_id: EditorId,
    pub reviewer_ids: Vec<ReviewerId>,
    pub review_texts: Vec<String>,
}

/// One submission with its metadata, citations and review history.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PaperRecord {
    pub paper_id: PaperId,
    pub title: String,
    pub author_ids: Vec<AuthorId>,
    pub topics: BTreeSet<String>,
    pub submission_year: i32,
    pub decision: Decision,
    /// Cumulative citations at the end of the observation window.
    /// Missing in the input means 0 (rejected papers often lack it).
    #[serde(default)]
    pub citation_count: u64,
    #[serde(default)]
    pub cited_paper_ids: BTreeSet<PaperId>,
    #[serde(default)]
    pub review_rounds: Vec<ReviewRound>,
}

impl PaperRecord {
    /// Checks the record-level invariants; returns the offending field
    /// and a human-readable reason.
    pub fn validate(&self) -> Result<(), (&'static str, String)> {
        if self.author_ids.is_empty() {
            return Err(("author_ids", "must not be empty".into()));
        }
        let mut seen = BTreeSet::new();
        for a in &self.author_ids {
            if !seen.insert(a) {
                return Err(("author_ids", format!("duplicate author id `{a}`")));
            }
        }
        if self.cited_paper_ids.contains(&self.paper_id) {
            return Err(("cited_paper_ids", "paper cites itself".into()));
        }
        let mut last_round = 0u32;
        for round in &self.review_rounds {
            if round.round_index == 0 {
                return Err(("round_index", "must be positive".into()));
            }
            if round.round_index <= last_round {
                return Err((
                    "round_index",
                    format!(
                        "must be strictly increasing, got {} after {}",
                        round.round_index, last_round
                    ),
                ));
            }
            last_round = round.round_index;
            if round.reviewer_ids.len() != round.review_texts.len() {
                return Err((
                    "review_texts",
                    format!(
                        "round {} has {} reviewers but {} texts",
                        round.round_index,
                        round.reviewer_ids.len(),
                        round.review_texts.len()
                    ),
                ));
            }
        }
        Ok(())
    }

    /// All review texts across rounds, in round then reviewer order.
    pub fn review_texts(&self) -> impl Iterator<Item = &str> {
        self.review_rounds
            .iter()
            .flat_map(|r| r.review_texts.iter().map(String::as_str))
    }

    pub fn has_review_text(&self) -> bool {
        self.review_rounds.iter().any(|r| !r.review_texts.is_empty())
    }
}

/// Input file formats accepted by [`load_corpus`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    /// One `PaperRecord` JSON object per line.
    Jsonl,
    /// A directory holding `papers.csv`, `reviews.csv`, `citations.csv`.
    CsvBundle,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{line}: malformed record: {detail}")]
    Malformed {
        file: String,
        line: usize,
        detail: String,
    },
    #[error("{file}:{line}: paper `{paper_id}`: invalid `{field}`: {reason}")]
    Invalid {
        file: String,
        line: usize,
        paper_id: String,
        field: &'static str,
        reason: String,
    },
    #[error("{file}: duplicate paper id `{paper_id}`")]
    DuplicatePaper { file: String, paper_id: PaperId },
    #[error("{file}: corpus is empty")]
    Empty { file: String },
    #[error("{file}: bad header: expected `{expected}`, got `{got}`")]
    CsvHeader {
        file: String,
        expected: String,
        got: String,
    },
    #[error("unknown author `{0}`")]
    UnknownAuthor(AuthorId),
}

/// Records every paper id handed out through the read API. Used by the
/// temporal-hygiene audit to prove feature construction never touches
/// records outside its career window.
#[derive(Debug, Default)]
pub struct AccessProbe {
    reads: Mutex<BTreeSet<PaperId>>,
}

impl AccessProbe {
    pub fn new() -> Arc<Self> {
        Arc::new(Self::default())
    }

    fn record(&self, id: &PaperId) {
        self.reads.lock().unwrap().insert(id.clone());
    }

    /// Paper ids read so far.
    pub fn reads(&self) -> BTreeSet<PaperId> {
        self.reads.lock().unwrap().clone()
    }

    pub fn clear(&self) {
        self.reads.lock().unwrap().clear();
    }
}

/// A validated, indexed collection of submissions.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    papers: BTreeMap<PaperId, PaperRecord>,
    by_author: BTreeMap<AuthorId, Vec<PaperId>>,
    by_year: BTreeMap<i32, Vec<PaperId>>,
    /// Reverse citation index over resolved targets only.
    cited_by: BTreeMap<PaperId, Vec<PaperId>>,
    /// citing paper -> cited ids that resolve to no in-corpus paper.
    unresolved: BTreeMap<PaperId, BTreeSet<PaperId>>,
    probe: Option<Arc<AccessProbe>>,
}

impl PartialEq for Corpus {
    /// Index maps are pure functions of the records, so record equality
    /// is corpus equality.
    fn eq(&self, other: &Self) -> bool {
        self.papers == other.papers
    }
}

impl Corpus {
    /// Builds a corpus from records, rejecting duplicates and (unless
    /// `allow_empty`) the empty collection. `source` names the input in
    /// diagnostics.
    fn build(
        records: Vec<PaperRecord>,
        source: &str,
        allow_empty: bool,
    ) -> Result<Self, CorpusError> {
        if records.is_empty() && !allow_empty {
            return Err(CorpusError::Empty {
                file: source.to_string(),
            });
        }
        let mut papers = BTreeMap::new();
        for record in records {
            let id = record.paper_id.clone();
            if papers.insert(id.clone(), record).is_some() {
                return Err(CorpusError::DuplicatePaper {
                    file: source.to_string(),
                    paper_id: id,
                });
            }
        }

        let mut by_author: BTreeMap<AuthorId, Vec<PaperId>> = BTreeMap::new();
        let mut by_year: BTreeMap<i32, Vec<PaperId>> = BTreeMap::new();
        let mut cited_by: BTreeMap<PaperId, Vec<PaperId>> = BTreeMap::new();
        let mut unresolved: BTreeMap<PaperId, BTreeSet<PaperId>> = BTreeMap::new();

        for (id, record) in &papers {
            for author in &record.author_ids {
                by_author.entry(author.clone()).or_default().push(id.clone());
            }
            by_year.entry(record.submission_year).or_default().push(id.clone());
        }
        for (id, record) in &papers {
            for cited in &record.cited_paper_ids {
                if papers.contains_key(cited) {
                    cited_by.entry(cited.clone()).or_default().push(id.clone());
                } else {
                    unresolved.entry(id.clone()).or_default().insert(cited.clone());
                }
            }
        }
        // BTreeMap iteration already yields sorted citing ids.

        Ok(Self {
            papers,
            by_author,
            by_year,
            cited_by,
            unresolved,
            probe: None,
        })
    }

    /// Builds from in-memory records (e.g. the synthetic generator), with
    /// full per-record validation.
    pub fn from_records(records: Vec<PaperRecord>) -> Result<Self, CorpusError> {
        for (i, record) in records.iter().enumerate() {
            if let Err((field, reason)) = record.validate() {
                return Err(CorpusError::Invalid {
                    file: "<memory>".into(),
                    line: i + 1,
                    paper_id: record.paper_id.to_string(),
                    field,
                    reason,
                });
            }
        }
        Self::build(records, "<memory>", false)
    }

    /// Attaches an access probe; subsequent record reads through this
    /// handle are logged.
    pub fn with_probe(&self, probe: Arc<AccessProbe>) -> Corpus {
        let mut c = self.clone();
        c.probe = Some(probe);
        c
    }

    fn track<'a>(&self, record: &'a PaperRecord) -> &'a PaperRecord {
        if let Some(probe) = &self.probe {
            probe.record(&record.paper_id);
        }
        record
    }

    pub fn len(&self) -> usize {
        self.papers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.papers.is_empty()
    }

    pub fn paper(&self, id: &PaperId) -> Option<&PaperRecord> {
        self.papers.get(id).map(|r| self.track(r))
    }

    /// All records in paper-id order.
    pub fn papers(&self) -> impl Iterator<Item = &PaperRecord> + '_ {
        self.papers.values().map(|r| self.track(r))
    }

    pub fn paper_ids(&self) -> impl Iterator<Item = &PaperId> + '_ {
        self.papers.keys()
    }

    /// All author ids in sorted order.
    pub fn authors(&self) -> impl Iterator<Item = &AuthorId> + '_ {
        self.by_author.keys()
    }

    pub fn author_count(&self) -> usize {
        self.by_author.len()
    }

    pub fn contains_author(&self, author: &AuthorId) -> bool {
        self.by_author.contains_key(author)
    }

    /// Paper ids of one author, sorted; `None` for unknown authors.
    pub fn paper_ids_of(&self, author: &AuthorId) -> Option<&[PaperId]> {
        self.by_author.get(author).map(Vec::as_slice)
    }

    /// Records of one author, sorted by paper id.
    pub fn author_papers(&self, author: &AuthorId) -> Result<Vec<&PaperRecord>, CorpusError> {
        let ids = self
            .by_author
            .get(author)
            .ok_or_else(|| CorpusError::UnknownAuthor(author.clone()))?;
        Ok(ids.iter().map(|id| self.track(&self.papers[id])).collect())
    }

    pub fn paper_ids_in_year(&self, year: i32) -> &[PaperId] {
        self.by_year.get(&year).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Papers citing `id` (resolved citations only), sorted.
    pub fn citers_of(&self, id: &PaperId) -> &[PaperId] {
        self.cited_by.get(id).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Unresolved citation targets per citing paper.
    pub fn unresolved_citations(&self) -> &BTreeMap<PaperId, BTreeSet<PaperId>> {
        &self.unresolved
    }

    pub fn unresolved_citation_count(&self) -> usize {
        self.unresolved.values().map(BTreeSet::len).sum()
    }

    /// Submission and acceptance counts of one author in one year.
    pub fn author_year_submissions(
        &self,
        author: &AuthorId,
        year: i32,
    ) -> Result<(usize, usize), CorpusError> {
        let ids = self
            .by_author
            .get(author)
            .ok_or_else(|| CorpusError::UnknownAuthor(author.clone()))?;
        let mut submitted = 0;
        let mut accepted = 0;
        for id in ids {
            let record = self.track(&self.papers[id]);
            if record.submission_year == year {
                submitted += 1;
                if record.decision == Decision::Accepted {
                    accepted += 1;
                }
            }
        }
        Ok((submitted, accepted))
    }

    /// First and last submission year of one author.
    pub fn author_career(&self, author: &AuthorId) -> Option<(i32, i32)> {
        let ids = self.by_author.get(author)?;
        let mut span: Option<(i32, i32)> = None;
        for id in ids {
            let year = self.track(&self.papers[id]).submission_year;
            span = Some(match span {
                None => (year, year),
                Some((lo, hi)) => (lo.min(year), hi.max(year)),
            });
        }
        span
    }

    /// The sub-corpus of papers submitted within `years`. Citations whose
    /// target falls outside the window become unresolved (and therefore
    /// invisible to every graph and index). The result may be empty and
    /// carries no probe.
    pub fn restrict_to_years(&self, years: RangeInclusive<i32>) -> Corpus {
        let records: Vec<PaperRecord> = self
            .papers
            .values()
            .filter(|r| years.contains(&r.submission_year))
            .cloned()
            .collect();
        Self::build(records, "<window>", true).expect("filtered records cannot collide")
    }

    /// Owned records in paper-id order, for serialization.
    pub fn to_records(&self) -> Vec<PaperRecord> {
        self.papers.values().cloned().collect()
    }
}

/// Reads and validates a corpus from `path` in the given format.
///
/// JSONL input is one record per line; the CSV bundle is a directory with
/// `papers.csv`, `reviews.csv` and `citations.csv`. Loaded/flagged counts
/// are available on the returned corpus (`len`,
/// `unresolved_citation_count`).
pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<Corpus, CorpusError> {
    match format {
        CorpusFormat::Jsonl => jsonl::load(path),
        CorpusFormat::CsvBundle => csvb::load(path),
    }
}

/// Writes a corpus to `path` in the given format, deterministically
/// (records in paper-id order).
pub fn save_corpus(corpus: &Corpus, path: &Path, format: CorpusFormat) -> Result<(), CorpusError> {
    match format {
        CorpusFormat::Jsonl => jsonl::save(corpus, path),
        CorpusFormat::CsvBundle => csvb::save(corpus, path),
    }
}

pub use jsonl::to_jsonl_string;
