//! Peer-review text features: lexicon sentiment, stopword-filtered
//! length, Shannon reviewer/editor diversity, and per-emotion lexicon
//! fractions.
//!
//! Tokenization is fixed across the module: lowercase, split on runs of
//! non-alphanumeric characters. Lexicons are plain CSV files (see
//! [`SentimentLexicon::from_csv_str`]); bundled defaults make the
//! pipeline self-contained, and every score only feeds cross-category
//! comparisons, never absolute claims.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::categorizer::{AuthorCategory, CategoryMap};
use crate::corpus::{Corpus, CorpusError, Decision, PaperRecord};
use crate::ids::AuthorId;
use crate::profilefeat::PaperScope;

const DEFAULT_SENTIMENT: &str = include_str!("../assets/sentiment_lexicon.csv");
const DEFAULT_STOPWORDS: &str = include_str!("../assets/stopwords.txt");
const DEFAULT_EMOTIONS: &str = include_str!("../assets/emotion_lexicon.csv");

/// Lowercased alphanumeric tokens of `text`, in order.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

#[derive(Debug, Error)]
pub enum TextFeatError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{line}: bad lexicon entry: {reason}")]
    BadLexicon {
        file: String,
        line: usize,
        reason: String,
    },
    #[error("lexicon `{0}` is empty")]
    EmptyLexicon(String),
    #[error("emotion lexicon is missing tokens for `{0}`")]
    MissingEmotion(Emotion),
    #[error("occurrence list is empty")]
    EmptyOccurrences,
    #[error("category `{0}` has no review data in scope")]
    NoCategoryReviewData(AuthorCategory),
    #[error("author `{0}` has no review text")]
    NoAuthorReviewText(AuthorId),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

// ---------------------------------------------------------------------------
// Lexicons
// ---------------------------------------------------------------------------

/// token -> polarity in [-1, 1]. Tokens are stored normalized.
#[derive(Debug, Clone)]
pub struct SentimentLexicon {
    pub name: String,
    polarities: BTreeMap<String, f64>,
}

impl SentimentLexicon {
    /// Parses `token,polarity` CSV content (header required).
    pub fn from_csv_str(name: &str, content: &str) -> Result<Self, TextFeatError> {
        let mut polarities = BTreeMap::new();
        let mut lines = content.lines().enumerate();
        match lines.next() {
            Some((_, header)) if header.trim() == "token,polarity" => {}
            _ => {
                return Err(TextFeatError::BadLexicon {
                    file: name.to_string(),
                    line: 1,
                    reason: "expected header `token,polarity`".into(),
                })
            }
        }
        for (i, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (token, polarity) = line.split_once(',').ok_or(TextFeatError::BadLexicon {
                file: name.to_string(),
                line: i + 1,
                reason: "expected `token,polarity`".into(),
            })?;
            let polarity: f64 = polarity.parse().map_err(|_| TextFeatError::BadLexicon {
                file: name.to_string(),
                line: i + 1,
                reason: format!("polarity `{polarity}` is not a number"),
            })?;
            if !(-1.0..=1.0).contains(&polarity) {
                return Err(TextFeatError::BadLexicon {
                    file: name.to_string(),
                    line: i + 1,
                    reason: format!("polarity {polarity} outside [-1, 1]"),
                });
            }
            let norm = tokenize(token).join("");
            if norm.is_empty() {
                return Err(TextFeatError::BadLexicon {
                    file: name.to_string(),
                    line: i + 1,
                    reason: "token normalizes to nothing".into(),
                });
            }
            polarities.insert(norm, polarity);
        }
        if polarities.is_empty() {
            return Err(TextFeatError::EmptyLexicon(name.to_string()));
        }
        Ok(Self {
            name: name.to_string(),
            polarities,
        })
    }

    pub fn from_path(path: &Path) -> Result<Self, TextFeatError> {
        let content = std::fs::read_to_string(path).map_err(|e| TextFeatError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Self::from_csv_str(&path.display().to_string(), &content)
    }

    /// The bundled default lexicon.
    pub fn bundled() -> Self {
        Self::from_csv_str("bundled", DEFAULT_SENTIMENT).expect("bundled lexicon is valid")
    }

    pub fn polarity(&self, token: &str) -> Option<f64> {
        self.polarities.get(token).copied()
    }

    pub fn len(&self) -> usize {
        self.polarities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polarities.is_empty()
    }
}

/// Loads a stopword file: one token per line.
pub fn stopwords_from_str(content: &str) -> BTreeSet<String> {
    content
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_lowercase)
        .collect()
}

pub fn stopwords_from_path(path: &Path) -> Result<BTreeSet<String>, TextFeatError> {
    let content = std::fs::read_to_string(path).map_err(|e| TextFeatError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    Ok(stopwords_from_str(&content))
}

/// The bundled English stopword list.
pub fn bundled_stopwords() -> BTreeSet<String> {
    stopwords_from_str(DEFAULT_STOPWORDS)
}

/// The five emotion channels scored by [`lqi`].
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Emotion {
    Positive,
    Optimism,
    Cheerfulness,
    Confusion,
    Contentment,
}

impl Emotion {
    pub const ALL: [Emotion; 5] = [
        Emotion::Positive,
        Emotion::Optimism,
        Emotion::Cheerfulness,
        Emotion::Confusion,
        Emotion::Contentment,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Emotion::Positive => "positive",
            Emotion::Optimism => "optimism",
            Emotion::Cheerfulness => "cheerfulness",
            Emotion::Confusion => "confusion",
            Emotion::Contentment => "contentment",
        }
    }
}

impl std::fmt::Display for Emotion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One normalized token set per emotion; all five must be non-empty.
#[derive(Debug, Clone)]
pub struct EmotionLexicons {
    sets: BTreeMap<Emotion, BTreeSet<String>>,
}

impl EmotionLexicons {
    /// Parses `token,emotion` CSV content (header required).
    pub fn from_csv_str(name: &str, content: &str) -> Result<Self, TextFeatError> {
        let mut sets: BTreeMap<Emotion, BTreeSet<String>> = BTreeMap::new();
        let mut lines = content.lines().enumerate();
        match lines.next() {
            Some((_, header)) if header.trim() == "token,emotion" => {}
            _ => {
                return Err(TextFeatError::BadLexicon {
                    file: name.to_string(),
                    line: 1,
                    reason: "expected header `token,emotion`".into(),
                })
            }
        }
        for (i, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (token, emotion) = line.split_once(',').ok_or(TextFeatError::BadLexicon {
                file: name.to_string(),
                line: i + 1,
                reason: "expected `token,emotion`".into(),
            })?;
            let emotion = match emotion {
                "positive" => Emotion::Positive,
                "optimism" => Emotion::Optimism,
                "cheerfulness" => Emotion::Cheerfulness,
                "confusion" => Emotion::Confusion,
                "contentment" => Emotion::Contentment,
                other => {
                    return Err(TextFeatError::BadLexicon {
                        file: name.to_string(),
                        line: i + 1,
                        reason: format!("unknown emotion `{other}`"),
                    })
                }
            };
            let norm = tokenize(token).join("");
            if norm.is_empty() {
                return Err(TextFeatError::BadLexicon {
                    file: name.to_string(),
                    line: i + 1,
                    reason: "token normalizes to nothing".into(),
                });
            }
            sets.entry(emotion).or_default().insert(norm);
        }
        for emotion in Emotion::ALL {
            if sets.get(&emotion).is_none_or(BTreeSet::is_empty) {
                return Err(TextFeatError::MissingEmotion(emotion));
            }
        }
        Ok(Self { sets })
    }

    pub fn from_path(path: &Path) -> Result<Self, TextFeatError> {
        let content = std::fs::read_to_string(path).map_err(|e| TextFeatError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Self::from_csv_str(&path.display().to_string(), &content)
    }

    pub fn bundled() -> Self {
        Self::from_csv_str("bundled", DEFAULT_EMOTIONS).expect("bundled emotion lexicon is valid")
    }

    pub fn contains(&self, emotion: Emotion, token: &str) -> bool {
        self.sets[&emotion].contains(token)
    }
}

// ---------------------------------------------------------------------------
// Scalar text features
// ---------------------------------------------------------------------------

/// Mean polarity over tokens found in the lexicon; 0 when nothing
/// matches.
pub fn sentiment(text: &str, lexicon: &SentimentLexicon) -> f64 {
    let mut sum = 0.0;
    let mut matched = 0usize;
    for token in tokenize(text) {
        if let Some(p) = lexicon.polarity(&token) {
            sum += p;
            matched += 1;
        }
    }
    if matched == 0 {
        0.0
    } else {
        sum / matched as f64
    }
}

/// Token count after stopword removal.
pub fn review_length(text: &str, stopwords: &BTreeSet<String>) -> usize {
    tokenize(text)
        .into_iter()
        .filter(|t| !stopwords.contains(t))
        .count()
}

/// Per-emotion fraction of tokens matching that emotion's lexicon; all
/// zero for an empty text.
pub fn lqi(text: &str, lexicons: &EmotionLexicons) -> BTreeMap<Emotion, f64> {
    let tokens = tokenize(text);
    let total = tokens.len();
    let mut out: BTreeMap<Emotion, f64> = Emotion::ALL.iter().map(|&e| (e, 0.0)).collect();
    if total == 0 {
        return out;
    }
    for emotion in Emotion::ALL {
        let hits = tokens
            .iter()
            .filter(|t| lexicons.contains(emotion, t))
            .count();
        out.insert(emotion, hits as f64 / total as f64);
    }
    out
}

// ---------------------------------------------------------------------------
// Shannon diversity
// ---------------------------------------------------------------------------

/// Logarithm base for the Shannon index. Only cross-category comparisons
/// matter, so the base is cosmetic; natural log is the default.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub enum LogBase {
    #[default]
    Natural,
    Base(f64),
}

impl LogBase {
    fn rescale(self, entropy_nat: f64) -> f64 {
        match self {
            LogBase::Natural => entropy_nat,
            LogBase::Base(b) => entropy_nat / b.ln(),
        }
    }
}

/// Shannon index of an id multiset: entropy, distinct-id support, total
/// occurrences, and the underlying counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiversityIndex<T: Ord> {
    pub entropy: f64,
    pub support: usize,
    pub total: usize,
    pub counts: BTreeMap<T, usize>,
}

/// Entropy of the occurrence multiset, natural log. Computed as
/// `ln N - (sum f_i ln f_i) / N`, which is exact on uniform singleton
/// counts (every `ln 1` term vanishes).
pub fn shannon_index<T: Ord + Clone>(occurrences: &[T]) -> Result<DiversityIndex<T>, TextFeatError> {
    shannon_index_with_base(occurrences, LogBase::Natural)
}

pub fn shannon_index_with_base<T: Ord + Clone>(
    occurrences: &[T],
    base: LogBase,
) -> Result<DiversityIndex<T>, TextFeatError> {
    if occurrences.is_empty() {
        return Err(TextFeatError::EmptyOccurrences);
    }
    let mut counts: BTreeMap<T, usize> = BTreeMap::new();
    for item in occurrences {
        *counts.entry(item.clone()).or_insert(0) += 1;
    }
    let total = occurrences.len();
    let n = total as f64;
    let weighted: f64 = counts
        .values()
        .map(|&f| {
            let f = f as f64;
            f * f.ln()
        })
        .sum();
    let entropy = base.rescale((n.ln() - weighted / n).max(0.0));
    Ok(DiversityIndex {
        entropy,
        support: counts.len(),
        total,
        counts,
    })
}

/// Which id stream a diversity computation draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Reviewer,
    Editor,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Reviewer => "reviewer",
            Role::Editor => "editor",
        }
    }
}

impl std::fmt::Display for Role {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiversityOptions {
    /// Papers contributing role ids; published (accepted) only by
    /// default.
    pub scope: PaperScope,
    pub log_base: LogBase,
}

impl Default for DiversityOptions {
    fn default() -> Self {
        Self {
            scope: PaperScope::AcceptedOnly,
            log_base: LogBase::Natural,
        }
    }
}

fn paper_in_scope(paper: &PaperRecord, scope: PaperScope) -> bool {
    match scope {
        PaperScope::AllSubmissions => true,
        PaperScope::AcceptedOnly => paper.decision == Decision::Accepted,
    }
}

fn push_role_ids(paper: &PaperRecord, role: Role, out: &mut Vec<String>) {
    for round in &paper.review_rounds {
        match role {
            Role::Reviewer => {
                out.extend(round.reviewer_ids.iter().map(|r| r.to_string()));
            }
            Role::Editor => out.push(round.editor_id.to_string()),
        }
    }
}

/// Category-level diversity: one occurrence per (author, in-scope paper,
/// round, id) incidence, pooled over every member of the category.
pub fn category_diversity(
    corpus: &Corpus,
    labels: &CategoryMap,
    cat: AuthorCategory,
    role: Role,
    options: &DiversityOptions,
) -> Result<DiversityIndex<String>, TextFeatError> {
    let mut occurrences = Vec::new();
    for author in labels.members(cat) {
        for paper in corpus.author_papers(author)? {
            if paper_in_scope(paper, options.scope) {
                push_role_ids(paper, role, &mut occurrences);
            }
        }
    }
    if occurrences.is_empty() {
        return Err(TextFeatError::NoCategoryReviewData(cat));
    }
    shannon_index_with_base(&occurrences, options.log_base)
}

/// Per-author analogue of [`category_diversity`]: entropy of the
/// author's own role-id multiset. The source construction is
/// category-level; this per-author reading exists for the classifier's
/// feature vector and follows the same incidence counting.
pub fn author_diversity(
    corpus: &Corpus,
    author: &AuthorId,
    role: Role,
    options: &DiversityOptions,
) -> Result<DiversityIndex<String>, TextFeatError> {
    let mut occurrences = Vec::new();
    for paper in corpus.author_papers(author)? {
        if paper_in_scope(paper, options.scope) {
            push_role_ids(paper, role, &mut occurrences);
        }
    }
    if occurrences.is_empty() {
        return Err(TextFeatError::NoAuthorReviewText(author.clone()));
    }
    shannon_index_with_base(&occurrences, options.log_base)
}

// ---------------------------------------------------------------------------
// Per-author review features
// ---------------------------------------------------------------------------

/// Review-text features of one author: per-paper values (mean over all
/// texts of all rounds) averaged over the author's reviewed papers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReviewFeatures {
    pub author_id: AuthorId,
    /// Mean review sentiment, in [-1, 1].
    pub sentiment: f64,
    /// Mean stopword-filtered review length.
    pub length: f64,
    /// Mean per-emotion token fractions.
    pub lqi: BTreeMap<Emotion, f64>,
    /// Papers with at least one review text.
    pub reviewed_papers: usize,
}

/// Computes [`ReviewFeatures`] over every paper of the author that
/// carries review text (both decisions). Errors when no paper does.
pub fn author_review_features(
    corpus: &Corpus,
    author: &AuthorId,
    lexicon: &SentimentLexicon,
    stopwords: &BTreeSet<String>,
    emotions: &EmotionLexicons,
) -> Result<ReviewFeatures, TextFeatError> {
    let mut paper_sentiments = Vec::new();
    let mut paper_lengths = Vec::new();
    let mut paper_lqis: Vec<BTreeMap<Emotion, f64>> = Vec::new();

    for paper in corpus.author_papers(author)? {
        let texts: Vec<&str> = paper.review_texts().collect();
        if texts.is_empty() {
            continue;
        }
        let n = texts.len() as f64;
        paper_sentiments
            .push(texts.iter().map(|t| sentiment(t, lexicon)).sum::<f64>() / n);
        paper_lengths.push(
            texts
                .iter()
                .map(|t| review_length(t, stopwords) as f64)
                .sum::<f64>()
                / n,
        );
        let mut per_paper: BTreeMap<Emotion, f64> =
            Emotion::ALL.iter().map(|&e| (e, 0.0)).collect();
        for text in &texts {
            for (emotion, value) in lqi(text, emotions) {
                *per_paper.get_mut(&emotion).unwrap() += value / n;
            }
        }
        paper_lqis.push(per_paper);
    }

    if paper_sentiments.is_empty() {
        return Err(TextFeatError::NoAuthorReviewText(author.clone()));
    }
    let papers = paper_sentiments.len() as f64;
    let mut mean_lqi: BTreeMap<Emotion, f64> =
        Emotion::ALL.iter().map(|&e| (e, 0.0)).collect();
    for per_paper in &paper_lqis {
        for (&emotion, &value) in per_paper {
            *mean_lqi.get_mut(&emotion).unwrap() += value / papers;
        }
    }
    Ok(ReviewFeatures {
        author_id: author.clone(),
        sentiment: paper_sentiments.iter().sum::<f64>() / papers,
        length: paper_lengths.iter().sum::<f64>() / papers,
        lqi: mean_lqi,
        reviewed_papers: paper_sentiments.len(),
    })
}
