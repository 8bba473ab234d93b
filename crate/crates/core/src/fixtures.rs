//! Hand-built corpora and record builders shared by the unit tests.

use std::collections::BTreeSet;

use crate::corpus::{Corpus, Decision, PaperRecord, ReviewRound};
use crate::ids::{AuthorId, EditorId, PaperId, ReviewerId};

pub(crate) struct PaperBuilder(PaperRecord);

impl PaperBuilder {
    pub fn new(id: &str, year: i32, decision: Decision, authors: &[&str]) -> Self {
        Self(PaperRecord {
            paper_id: PaperId::from(id),
            title: format!("Paper {id}"),
            author_ids: authors.iter().map(|a| AuthorId::from(*a)).collect(),
            topics: BTreeSet::new(),
            submission_year: year,
            decision,
            citation_count: 0,
            cited_paper_ids: BTreeSet::new(),
            review_rounds: Vec::new(),
        })
    }

    pub fn topics(mut self, topics: &[&str]) -> Self {
        self.0.topics = topics.iter().map(|t| t.to_string()).collect();
        self
    }

    pub fn cites(mut self, ids: &[&str]) -> Self {
        self.0.cited_paper_ids = ids.iter().map(|i| PaperId::from(*i)).collect();
        self
    }

    pub fn citations(mut self, n: u64) -> Self {
        self.0.citation_count = n;
        self
    }

    /// Appends a review round; `reviews` pairs reviewer id with text.
    pub fn round(mut self, index: u32, editor: &str, reviews: &[(&str, &str)]) -> Self {
        self.0.review_rounds.push(ReviewRound {
            round_index: index,
            editor_id: EditorId::from(editor),
            reviewer_ids: reviews.iter().map(|(r, _)| ReviewerId::from(*r)).collect(),
            review_texts: reviews.iter().map(|(_, t)| t.to_string()).collect(),
        });
        self
    }

    pub fn build(self) -> PaperRecord {
        self.0
    }
}

pub(crate) fn paper(id: &str, year: i32, decision: Decision, authors: &[&str]) -> PaperBuilder {
    PaperBuilder::new(id, year, decision, authors)
}

/// Twelve papers over seven authors with citations, an unresolved
/// citation target, and review rounds on a subset of papers.
///
/// Per-author yearly (submitted, accepted):
///   a1 1997:(1,1); a2 2001:(2,2) 2002:(2,1); a3 2003:(3,2);
///   a4 2003:(1,1); a5 2004:(2,0); a6 2004:(1,0) 2005:(1,1);
///   a7 2005:(2,1).
pub(crate) fn fixture12() -> Corpus {
    use Decision::{Accepted, Rejected};
    let records = vec![
        paper("p01", 1997, Accepted, &["a1"])
            .topics(&["strings"])
            .citations(10)
            .round(1, "e1", &[("r1", "Well written and convincing throughout.")])
            .build(),
        paper("p02", 2001, Accepted, &["a2"]).topics(&["strings"]).citations(4).build(),
        paper("p03", 2001, Accepted, &["a2"]).topics(&["gravity"]).citations(6).build(),
        paper("p04", 2002, Accepted, &["a2"]).topics(&["gravity"]).build(),
        paper("p05", 2002, Rejected, &["a2"]).topics(&["lattice"]).build(),
        paper("p06", 2003, Accepted, &["a3", "a4"])
            .topics(&["strings", "gravity"])
            .citations(8)
            .round(1, "e1", &[("r1", "Solid results, recommend acceptance."), ("r2", "Minor revisions needed.")])
            .round(2, "e1", &[("r1", "The revision addresses my concerns.")])
            .build(),
        paper("p07", 2003, Accepted, &["a3"])
            .topics(&["strings"])
            .round(1, "e2", &[("r3", "Interesting but incremental.")])
            .build(),
        paper("p08", 2003, Rejected, &["a3"]).topics(&["lattice"]).build(),
        paper("p09", 2004, Rejected, &["a5"])
            .topics(&["cosmology"])
            .round(1, "e3", &[("r4", "Unclear derivations and weak motivation.")])
            .build(),
        paper("p10", 2004, Rejected, &["a5", "a6"]).topics(&["cosmology"]).build(),
        paper("p11", 2005, Accepted, &["a6", "a7"])
            .topics(&["gravity"])
            .citations(3)
            .cites(&["p01", "p06", "p99"])
            .round(1, "e2", &[("r2", "A careful and thorough treatment.")])
            .build(),
        paper("p12", 2005, Rejected, &["a7"]).topics(&["strings"]).cites(&["p11"]).build(),
    ];
    Corpus::from_records(records).expect("fixture12 is valid")
}
