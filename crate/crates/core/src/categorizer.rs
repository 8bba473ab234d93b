//! Author categorization by yearly acceptance rate.
//!
//! Every author gets one label over the full observation window: High if
//! the yearly acceptance rate exceeds `high_rate` in at least
//! `high_year_share` of their active years, else Low if it falls below
//! `low_rate` in at least `low_year_share` of them, else Mid. Active
//! years are years with at least one submission; the rate is undefined
//! elsewhere. High is tested first, per the rule's evaluation order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Corpus, CorpusError};
use crate::ids::AuthorId;

/// Three-way acceptance-rate class. Ordered Low < Mid < High so that
/// monotonicity statements read naturally.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum AuthorCategory {
    Low,
    Mid,
    High,
}

impl AuthorCategory {
    pub const ALL: [AuthorCategory; 3] =
        [AuthorCategory::High, AuthorCategory::Mid, AuthorCategory::Low];

    pub fn as_str(self) -> &'static str {
        match self {
            AuthorCategory::High => "high",
            AuthorCategory::Mid => "mid",
            AuthorCategory::Low => "low",
        }
    }

    /// Dense index used by matrices and reports: High 0, Mid 1, Low 2.
    pub fn index(self) -> usize {
        match self {
            AuthorCategory::High => 0,
            AuthorCategory::Mid => 1,
            AuthorCategory::Low => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<AuthorCategory> {
        Self::ALL.get(i).copied()
    }
}

impl std::fmt::Display for AuthorCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for AuthorCategory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "high" => Ok(AuthorCategory::High),
            "mid" => Ok(AuthorCategory::Mid),
            "low" => Ok(AuthorCategory::Low),
            other => Err(format!("unknown category `{other}`")),
        }
    }
}

/// Per-author yearly acceptance rates over the active years.
#[derive(Debug, Clone, PartialEq)]
pub struct AcceptanceSeries {
    pub author_id: AuthorId,
    /// year -> accepted/submitted, present only for years with >= 1
    /// submission.
    pub per_year: BTreeMap<i32, f64>,
    pub career_start: i32,
    pub career_end: i32,
}

impl AcceptanceSeries {
    pub fn active_years(&self) -> usize {
        self.per_year.len()
    }

    pub fn mean_rate(&self) -> f64 {
        self.per_year.values().sum::<f64>() / self.per_year.len() as f64
    }
}

/// Rule thresholds. Rate comparisons are strict (`>`, `<`); year-share
/// comparisons are inclusive (`>=`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CategoryThresholds {
    pub high_rate: f64,
    pub high_year_share: f64,
    pub low_rate: f64,
    pub low_year_share: f64,
}

impl Default for CategoryThresholds {
    fn default() -> Self {
        Self {
            high_rate: 0.7,
            high_year_share: 0.70,
            low_rate: 0.4,
            low_year_share: 0.80,
        }
    }
}

#[derive(Debug, Error)]
pub enum CategorizeError {
    #[error("author `{0}` has no submissions")]
    NoSubmissions(AuthorId),
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

/// Yearly acceptance rates of one author. Errors if the author has no
/// submissions at all.
pub fn acceptance_series(
    corpus: &Corpus,
    author: &AuthorId,
) -> Result<AcceptanceSeries, CategorizeError> {
    let papers = corpus.author_papers(author)?;
    if papers.is_empty() {
        return Err(CategorizeError::NoSubmissions(author.clone()));
    }
    let mut submitted: BTreeMap<i32, (u32, u32)> = BTreeMap::new();
    for paper in &papers {
        let slot = submitted.entry(paper.submission_year).or_insert((0, 0));
        slot.0 += 1;
        if paper.decision == crate::corpus::Decision::Accepted {
            slot.1 += 1;
        }
    }
    let career_start = *submitted.keys().next().unwrap();
    let career_end = *submitted.keys().next_back().unwrap();
    let per_year = submitted
        .into_iter()
        .map(|(year, (sub, acc))| (year, acc as f64 / sub as f64))
        .collect();
    Ok(AcceptanceSeries {
        author_id: author.clone(),
        per_year,
        career_start,
        career_end,
    })
}

/// Absorbs the float representation error of percentage thresholds, e.g.
/// 0.8 * 10 evaluating to slightly more than 8.
const YEAR_SHARE_EPS: f64 = 1e-9;

/// Applies the three-way rule to a series. High is evaluated before Low.
pub fn categorize(series: &AcceptanceSeries, thresholds: &CategoryThresholds) -> AuthorCategory {
    let total = series.per_year.len() as f64;
    let high_years = series
        .per_year
        .values()
        .filter(|&&r| r > thresholds.high_rate)
        .count() as f64;
    if high_years >= thresholds.high_year_share * total - YEAR_SHARE_EPS {
        return AuthorCategory::High;
    }
    let low_years = series
        .per_year
        .values()
        .filter(|&&r| r < thresholds.low_rate)
        .count() as f64;
    if low_years >= thresholds.low_year_share * total - YEAR_SHARE_EPS {
        return AuthorCategory::Low;
    }
    AuthorCategory::Mid
}

/// Labels for every author with at least one submission, plus per-class
/// counts.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CategoryMap {
    labels: BTreeMap<AuthorId, AuthorCategory>,
}

impl CategoryMap {
    pub fn from_labels(labels: BTreeMap<AuthorId, AuthorCategory>) -> Self {
        Self { labels }
    }

    pub fn get(&self, author: &AuthorId) -> Option<AuthorCategory> {
        self.labels.get(author).copied()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&AuthorId, AuthorCategory)> + '_ {
        self.labels.iter().map(|(a, &c)| (a, c))
    }

    /// Members of one category, sorted by id.
    pub fn members(&self, cat: AuthorCategory) -> Vec<&AuthorId> {
        self.labels
            .iter()
            .filter(|(_, &c)| c == cat)
            .map(|(a, _)| a)
            .collect()
    }

    /// (high, mid, low) member counts.
    pub fn counts(&self) -> (usize, usize, usize) {
        let mut counts = (0, 0, 0);
        for &c in self.labels.values() {
            match c {
                AuthorCategory::High => counts.0 += 1,
                AuthorCategory::Mid => counts.1 += 1,
                AuthorCategory::Low => counts.2 += 1,
            }
        }
        counts
    }
}

/// Categorizes every author in the corpus. Pure in the corpus and
/// thresholds.
pub fn categorize_all(
    corpus: &Corpus,
    thresholds: &CategoryThresholds,
) -> Result<CategoryMap, CategorizeError> {
    if corpus.is_empty() {
        return Err(CategorizeError::EmptyCorpus);
    }
    let mut labels = BTreeMap::new();
    for author in corpus.authors() {
        let series = acceptance_series(corpus, author)?;
        labels.insert(author.clone(), categorize(&series, thresholds));
    }
    Ok(CategoryMap { labels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Decision::{Accepted, Rejected};
    use crate::fixtures::{fixture12, paper};
    use proptest::prelude::*;

    fn series(rates: &[f64]) -> AcceptanceSeries {
        AcceptanceSeries {
            author_id: AuthorId::from("x"),
            per_year: rates
                .iter()
                .enumerate()
                .map(|(i, &r)| (2000 + i as i32, r))
                .collect(),
            career_start: 2000,
            career_end: 2000 + rates.len() as i32 - 1,
        }
    }

    #[test]
    fn acceptance_series_rates() {
        // 2001: 2 accepted of 2; 2002: 1 of 2.
        let corpus = fixture12();
        let s = acceptance_series(&corpus, &AuthorId::from("a2")).unwrap();
        assert_eq!(s.career_start, 2001);
        assert_eq!(s.career_end, 2002);
        assert_eq!(s.per_year[&2001], 1.0);
        assert_eq!(s.per_year[&2002], 0.5);
        assert_eq!(s.active_years(), 2);
    }

    #[test]
    fn single_paper_series() {
        let accepted = Corpus::from_records(vec![
            paper("p1", 2000, Accepted, &["a"]).build(),
        ])
        .unwrap();
        let s = acceptance_series(&accepted, &AuthorId::from("a")).unwrap();
        assert_eq!(s.per_year[&2000], 1.0);

        let rejected = Corpus::from_records(vec![
            paper("p1", 2000, Rejected, &["a"]).build(),
        ])
        .unwrap();
        let s = acceptance_series(&rejected, &AuthorId::from("a")).unwrap();
        assert_eq!(s.per_year[&2000], 0.0);
    }

    #[test]
    fn rule_examples() {
        let t = CategoryThresholds::default();
        assert_eq!(categorize(&series(&[1.0, 0.8, 0.75]), &t), AuthorCategory::High);
        assert_eq!(categorize(&series(&[0.0, 0.2, 0.3]), &t), AuthorCategory::Low);
        assert_eq!(categorize(&series(&[0.5]), &t), AuthorCategory::Mid);
        // 50% high years, 50% low years: neither share threshold is met.
        assert_eq!(
            categorize(&series(&[0.8, 0.8, 0.3, 0.3]), &t),
            AuthorCategory::Mid
        );
    }

    #[test]
    fn strict_rate_comparisons() {
        let t = CategoryThresholds::default();
        // Exactly 0.7 is not > 0.7; exactly 0.4 is not < 0.4.
        assert_eq!(categorize(&series(&[0.7]), &t), AuthorCategory::Mid);
        assert_eq!(categorize(&series(&[0.4]), &t), AuthorCategory::Mid);
    }

    #[test]
    fn year_share_boundary_is_inclusive() {
        let t = CategoryThresholds::default();
        // 7 of 10 years high: exactly 70%.
        let mut rates = vec![1.0; 7];
        rates.extend([0.5; 3]);
        assert_eq!(categorize(&series(&rates), &t), AuthorCategory::High);
        // 8 of 10 years low: exactly 80% (exercises the float guard).
        let mut rates = vec![0.0; 8];
        rates.extend([0.5; 2]);
        assert_eq!(categorize(&series(&rates), &t), AuthorCategory::Low);
    }

    #[test]
    fn fixture_partition_counts() {
        // Built to land 2 High / 3 Mid / 2 Low under the default rule.
        let records = vec![
            paper("q01", 1997, Accepted, &["h1"]).build(),
            paper("q02", 2000, Accepted, &["h2"]).build(),
            paper("q03", 2001, Accepted, &["h2"]).build(),
            paper("q04", 2001, Accepted, &["h2"]).build(),
            paper("q05", 2000, Accepted, &["m1"]).build(),
            paper("q06", 2000, Rejected, &["m1"]).build(),
            paper("q07", 2001, Accepted, &["m2"]).build(),
            paper("q08", 2002, Rejected, &["m2"]).build(),
            paper("q09", 2003, Accepted, &["m3"]).build(),
            paper("q10", 2003, Rejected, &["m3"]).build(),
            paper("q11", 2004, Accepted, &["m3"]).build(),
            paper("q12", 2004, Rejected, &["m3"]).build(),
            paper("q13", 2000, Rejected, &["l1"]).build(),
            paper("q14", 2001, Rejected, &["l2"]).build(),
            paper("q15", 2002, Rejected, &["l2"]).build(),
        ];
        let corpus = Corpus::from_records(records).unwrap();
        let labels = categorize_all(&corpus, &CategoryThresholds::default()).unwrap();
        assert_eq!(labels.counts(), (2, 3, 2));
        // Partition: every author labeled exactly once.
        assert_eq!(labels.len(), corpus.author_count());
    }

    #[test]
    fn all_accepted_means_all_high() {
        let records = (0..5)
            .map(|i| paper(&format!("p{i}"), 2000 + i, Accepted, &["a", "b"]).build())
            .collect();
        let corpus = Corpus::from_records(records).unwrap();
        let labels = categorize_all(&corpus, &CategoryThresholds::default()).unwrap();
        assert!(labels.iter().all(|(_, c)| c == AuthorCategory::High));
    }

    #[test]
    fn all_rejected_means_all_low() {
        let records = (0..5)
            .map(|i| paper(&format!("p{i}"), 2000 + i, Rejected, &["a", "b"]).build())
            .collect();
        let corpus = Corpus::from_records(records).unwrap();
        let labels = categorize_all(&corpus, &CategoryThresholds::default()).unwrap();
        assert!(labels.iter().all(|(_, c)| c == AuthorCategory::Low));
    }

    #[test]
    fn deterministic_over_reruns() {
        let corpus = fixture12();
        let a = categorize_all(&corpus, &CategoryThresholds::default()).unwrap();
        let b = categorize_all(&corpus, &CategoryThresholds::default()).unwrap();
        assert_eq!(a, b);
    }

    /// Per-year (submitted, accepted) pairs with accepted <= submitted.
    fn year_counts() -> impl Strategy<Value = Vec<(u32, u32)>> {
        proptest::collection::vec(
            (1u32..=4).prop_flat_map(|sub| (Just(sub), 0..=sub)),
            1..=8,
        )
    }

    fn counts_to_series(counts: &[(u32, u32)]) -> AcceptanceSeries {
        series(
            &counts
                .iter()
                .map(|&(sub, acc)| acc as f64 / sub as f64)
                .collect::<Vec<_>>(),
        )
    }

    proptest! {
        /// Flipping one rejection to an acceptance never lowers the
        /// category.
        #[test]
        fn prop_monotone_under_flips(counts in year_counts()) {
            let t = CategoryThresholds::default();
            let before = categorize(&counts_to_series(&counts), &t);
            for i in 0..counts.len() {
                if counts[i].1 < counts[i].0 {
                    let mut flipped = counts.clone();
                    flipped[i].1 += 1;
                    let after = categorize(&counts_to_series(&flipped), &t);
                    prop_assert!(
                        after >= before,
                        "flip in year {i} moved {before:?} -> {after:?}"
                    );
                }
            }
        }

        /// The three classes partition the labeled authors.
        #[test]
        fn prop_partition(counts in year_counts()) {
            let t = CategoryThresholds::default();
            let got = categorize(&counts_to_series(&counts), &t);
            prop_assert!(AuthorCategory::ALL.contains(&got));
        }
    }
}
