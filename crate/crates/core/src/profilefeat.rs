//! Author-profile features: citation total, experience, topic ratio,
//! h-index and mean team size, plus per-category summaries.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::categorizer::{AuthorCategory, CategoryMap};
use crate::corpus::{Corpus, CorpusError, Decision, PaperRecord};
use crate::ids::AuthorId;

/// Which submissions count toward experience and its derived features.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PaperScope {
    /// Every submission, both decisions.
    #[default]
    AllSubmissions,
    /// Accepted papers only.
    AcceptedOnly,
}

/// Standard-deviation convention for the citation index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum StdDevMode {
    /// Divide by N.
    #[default]
    Population,
    /// Divide by N - 1.
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ProfileOptions {
    pub scope: PaperScope,
    pub stddev: StdDevMode,
}

/// Per-author profile feature set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileFeatures {
    pub author_id: AuthorId,
    /// Citations summed over the author's in-corpus papers.
    pub citation_total: u64,
    /// Paper count under the configured scope.
    pub experience: usize,
    /// Distinct topics divided by paper count.
    pub topic_ratio: f64,
    pub h_index: usize,
    /// Co-author count (including the author) averaged over papers.
    pub team_size: f64,
}

/// Category-level aggregate of member profile features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryProfileSummary {
    pub category: AuthorCategory,
    pub members: usize,
    /// Standard deviation of member citation totals.
    pub citation_index: f64,
    pub mean_experience: f64,
    /// Mean of member topic ratios.
    pub topic_diversity: f64,
    pub mean_h_index: f64,
    pub mean_team_size: f64,
}

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("empty paper list")]
    EmptyPapers,
    #[error("author `{0}` has no papers in scope")]
    NoPapersInScope(AuthorId),
    #[error("category `{0}` has no members")]
    EmptyCategory(AuthorCategory),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

/// Largest h with at least h entries >= h.
pub fn h_index(citations_per_paper: &[u64]) -> usize {
    let mut sorted: Vec<u64> = citations_per_paper.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted
        .iter()
        .enumerate()
        .take_while(|&(i, &c)| c >= (i + 1) as u64)
        .count()
}

/// Distinct topics across the papers divided by the paper count.
pub fn topic_ratio(papers: &[&PaperRecord]) -> Result<f64, ProfileError> {
    if papers.is_empty() {
        return Err(ProfileError::EmptyPapers);
    }
    let mut topics = std::collections::BTreeSet::new();
    for paper in papers {
        topics.extend(paper.topics.iter());
    }
    Ok(topics.len() as f64 / papers.len() as f64)
}

/// Mean author-list length over the papers.
pub fn team_size(papers: &[&PaperRecord]) -> Result<f64, ProfileError> {
    if papers.is_empty() {
        return Err(ProfileError::EmptyPapers);
    }
    let total: usize = papers.iter().map(|p| p.author_ids.len()).sum();
    Ok(total as f64 / papers.len() as f64)
}

fn in_scope(paper: &PaperRecord, scope: PaperScope) -> bool {
    match scope {
        PaperScope::AllSubmissions => true,
        PaperScope::AcceptedOnly => paper.decision == Decision::Accepted,
    }
}

/// The full profile feature set for one author.
pub fn profile_features(
    corpus: &Corpus,
    author: &AuthorId,
    options: &ProfileOptions,
) -> Result<ProfileFeatures, ProfileError> {
    let papers: Vec<&PaperRecord> = corpus
        .author_papers(author)?
        .into_iter()
        .filter(|p| in_scope(p, options.scope))
        .collect();
    if papers.is_empty() {
        return Err(ProfileError::NoPapersInScope(author.clone()));
    }
    let citations: Vec<u64> = papers.iter().map(|p| p.citation_count).collect();
    Ok(ProfileFeatures {
        author_id: author.clone(),
        citation_total: citations.iter().sum(),
        experience: papers.len(),
        topic_ratio: topic_ratio(&papers)?,
        h_index: h_index(&citations),
        team_size: team_size(&papers)?,
    })
}

fn std_dev(values: &[f64], mode: StdDevMode) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    match mode {
        StdDevMode::Population => (ss / n).sqrt(),
        StdDevMode::Sample if values.len() > 1 => (ss / (n - 1.0)).sqrt(),
        StdDevMode::Sample => 0.0,
    }
}

/// Aggregates member features for one category: the citation index is
/// the standard deviation of member citation totals, everything else an
/// unweighted mean. Members without in-scope papers are skipped.
pub fn category_summary(
    corpus: &Corpus,
    labels: &CategoryMap,
    cat: AuthorCategory,
    options: &ProfileOptions,
) -> Result<CategoryProfileSummary, ProfileError> {
    let mut features = Vec::new();
    for author in labels.members(cat) {
        match profile_features(corpus, author, options) {
            Ok(f) => features.push(f),
            Err(ProfileError::NoPapersInScope(_)) => {}
            Err(e) => return Err(e),
        }
    }
    if features.is_empty() {
        return Err(ProfileError::EmptyCategory(cat));
    }
    let n = features.len() as f64;
    let citations: Vec<f64> = features.iter().map(|f| f.citation_total as f64).collect();
    Ok(CategoryProfileSummary {
        category: cat,
        members: features.len(),
        citation_index: std_dev(&citations, options.stddev),
        mean_experience: features.iter().map(|f| f.experience as f64).sum::<f64>() / n,
        topic_diversity: features.iter().map(|f| f.topic_ratio).sum::<f64>() / n,
        mean_h_index: features.iter().map(|f| f.h_index as f64).sum::<f64>() / n,
        mean_team_size: features.iter().map(|f| f.team_size).sum::<f64>() / n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::categorizer::{categorize_all, CategoryThresholds};
    use crate::corpus::Decision::{Accepted, Rejected};
    use crate::fixtures::{fixture12, paper};
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    /// Independent oracle: try every h from n down to 0.
    fn h_index_oracle(citations: &[u64]) -> usize {
        (0..=citations.len())
            .rev()
            .find(|&h| citations.iter().filter(|&&c| c >= h as u64).count() >= h)
            .unwrap_or(0)
    }

    #[test]
    fn h_index_examples() {
        assert_eq!(h_index(&[]), 0);
        assert_eq!(h_index(&[10, 8, 5, 4, 3]), 4);
        assert_eq!(h_index(&[1, 1, 1]), 1);
        assert_eq!(h_index_oracle(&[10, 8, 5, 4, 3]), 4);
        assert_eq!(h_index_oracle(&[1, 1, 1]), 1);
    }

    #[test]
    fn topic_ratio_examples() {
        let p1 = paper("p1", 2000, Accepted, &["a"]).topics(&["A"]).build();
        let p2 = paper("p2", 2000, Accepted, &["a"]).topics(&["A"]).build();
        assert_eq!(topic_ratio(&[&p1, &p2]).unwrap(), 0.5);

        let p3 = paper("p3", 2000, Accepted, &["a"]).topics(&["A", "B", "C"]).build();
        assert_eq!(topic_ratio(&[&p3]).unwrap(), 3.0);

        let p4 = paper("p4", 2000, Accepted, &["a"]).topics(&["A"]).build();
        let p5 = paper("p5", 2000, Accepted, &["a"]).topics(&["B"]).build();
        let p6 = paper("p6", 2000, Accepted, &["a"]).topics(&["C"]).build();
        assert_eq!(topic_ratio(&[&p4, &p5, &p6]).unwrap(), 1.0);

        assert!(matches!(topic_ratio(&[]), Err(ProfileError::EmptyPapers)));
    }

    #[test]
    fn team_size_examples() {
        let trio = paper("p1", 2000, Accepted, &["a", "b", "c"]).build();
        let solo = paper("p2", 2000, Accepted, &["a"]).build();
        assert_eq!(team_size(&[&trio, &solo]).unwrap(), 2.0);
        assert_eq!(team_size(&[&solo]).unwrap(), 1.0);
        assert!(matches!(team_size(&[]), Err(ProfileError::EmptyPapers)));
    }

    #[test]
    fn category_summary_examples() {
        // Two authors with equal citation totals: zero variance.
        let records = vec![
            paper("p1", 2000, Accepted, &["a"]).citations(10).topics(&["A"]).build(),
            paper("p2", 2000, Accepted, &["b"]).citations(10).topics(&["A"]).build(),
        ];
        let corpus = Corpus::from_records(records).unwrap();
        let labels = categorize_all(&corpus, &CategoryThresholds::default()).unwrap();
        let summary = category_summary(
            &corpus,
            &labels,
            AuthorCategory::High,
            &ProfileOptions::default(),
        )
        .unwrap();
        assert_eq!(summary.citation_index, 0.0);

        // Totals {0, 20}: population sigma is 10.
        let records = vec![
            paper("p1", 2000, Accepted, &["a"]).citations(0).topics(&["A"]).build(),
            paper("p2", 2000, Accepted, &["b"]).citations(20).topics(&["A"]).build(),
        ];
        let corpus = Corpus::from_records(records).unwrap();
        let labels = categorize_all(&corpus, &CategoryThresholds::default()).unwrap();
        let summary = category_summary(
            &corpus,
            &labels,
            AuthorCategory::High,
            &ProfileOptions::default(),
        )
        .unwrap();
        assert_eq!(summary.citation_index, 10.0);

        // Topic ratios {0.5, 1.5} average to 1.0.
        let records = vec![
            paper("p1", 2000, Accepted, &["a"]).topics(&["A"]).build(),
            paper("p2", 2001, Accepted, &["a"]).topics(&["A"]).build(),
            paper("p3", 2000, Accepted, &["b"]).topics(&["A", "B", "C"]).build(),
            paper("p4", 2001, Accepted, &["b"]).topics(&["A", "B", "C"]).build(),
        ];
        let corpus = Corpus::from_records(records).unwrap();
        let labels = categorize_all(&corpus, &CategoryThresholds::default()).unwrap();
        let summary = category_summary(
            &corpus,
            &labels,
            AuthorCategory::High,
            &ProfileOptions::default(),
        )
        .unwrap();
        assert_eq!(summary.topic_diversity, 1.0);
    }

    #[test]
    fn empty_category_is_an_error() {
        let corpus = fixture12();
        let labels = CategoryMap::from_labels(BTreeMap::new());
        let err = category_summary(
            &corpus,
            &labels,
            AuthorCategory::High,
            &ProfileOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, ProfileError::EmptyCategory(_)));
    }

    #[test]
    fn scope_restricts_experience() {
        let records = vec![
            paper("p1", 2000, Accepted, &["a"]).topics(&["A"]).build(),
            paper("p2", 2001, Rejected, &["a"]).topics(&["B"]).build(),
        ];
        let corpus = Corpus::from_records(records).unwrap();
        let all = profile_features(
            &corpus,
            &AuthorId::from("a"),
            &ProfileOptions::default(),
        )
        .unwrap();
        assert_eq!(all.experience, 2);
        let accepted = profile_features(
            &corpus,
            &AuthorId::from("a"),
            &ProfileOptions {
                scope: PaperScope::AcceptedOnly,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(accepted.experience, 1);
    }

    #[test]
    fn fixture_profile_features() {
        let corpus = fixture12();
        let f = profile_features(
            &corpus,
            &AuthorId::from("a2"),
            &ProfileOptions::default(),
        )
        .unwrap();
        assert_eq!(f.citation_total, 10); // 4 + 6 + 0 + 0
        assert_eq!(f.experience, 4);
        // Topics {strings, gravity, lattice} over 4 papers.
        assert_eq!(f.topic_ratio, 0.75);
        // Citations [4, 6, 0, 0]: h = 2.
        assert_eq!(f.h_index, 2);
        assert_eq!(f.team_size, 1.0);
    }

    proptest! {
        #[test]
        fn prop_h_index_matches_oracle(
            citations in proptest::collection::vec(0u64..60, 0..50)
        ) {
            prop_assert_eq!(h_index(&citations), h_index_oracle(&citations));
        }

        /// h <= paper count and h <= max citation.
        #[test]
        fn prop_h_index_bounds(
            citations in proptest::collection::vec(0u64..60, 1..50)
        ) {
            let h = h_index(&citations) as u64;
            prop_assert!(h <= citations.len() as u64);
            prop_assert!(h <= *citations.iter().max().unwrap());
        }

        /// Sigma is translation-invariant and scales linearly.
        #[test]
        fn prop_stddev_affine(
            values in proptest::collection::vec(0.0f64..100.0, 2..12),
            shift in 0.0f64..50.0,
            scale in 0.5f64..4.0,
        ) {
            let base = std_dev(&values, StdDevMode::Population);
            let shifted: Vec<f64> = values.iter().map(|v| v + shift).collect();
            prop_assert!((std_dev(&shifted, StdDevMode::Population) - base).abs() < 1e-9);
            let scaled: Vec<f64> = values.iter().map(|v| v * scale).collect();
            prop_assert!(
                (std_dev(&scaled, StdDevMode::Population) - scale * base).abs() < 1e-9
            );
        }

        /// topic_ratio = 1 exactly when the topic union size equals the
        /// paper count.
        #[test]
        fn prop_topic_ratio_unity(
            topic_sets in proptest::collection::vec(
                proptest::sample::subsequence(vec!["A", "B", "C", "D"], 1..=3),
                1..6,
            )
        ) {
            let papers: Vec<_> = topic_sets
                .iter()
                .enumerate()
                .map(|(i, ts)| {
                    paper(&format!("p{i}"), 2000, Accepted, &["a"])
                        .topics(&ts.iter().copied().collect::<Vec<_>>())
                        .build()
                })
                .collect();
            let refs: Vec<&crate::corpus::PaperRecord> = papers.iter().collect();
            let ratio = topic_ratio(&refs).unwrap();
            let union: std::collections::BTreeSet<_> =
                topic_sets.iter().flatten().collect();
            prop_assert_eq!(ratio == 1.0, union.len() == papers.len());
        }
    }
}
