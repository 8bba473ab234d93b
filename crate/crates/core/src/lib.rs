//! Analytics over scholarly submission / peer-review corpora.
//!
//! The pipeline: ingest a corpus ([`corpus`]), label every author by
//! acceptance-rate category ([`categorizer`]), extract profile
//! ([`profilefeat`]) and review-text ([`textfeat`]) features, build the
//! three author networks ([`netbuild`]) and their metric suite
//! ([`netmetrics`]), run category-interaction and assignment-overlap
//! analyses ([`crosscat`]), and predict an author's category from
//! early-career features ([`classifier`]). The [`synth`] module generates
//! schema-valid corpora with controllable structure so everything is
//! testable without private journal data.

pub mod categorizer;
pub mod classifier;
pub mod corpus;
pub mod crosscat;
pub mod netbuild;
pub mod netmetrics;
pub mod profilefeat;
pub mod synth;
pub mod textfeat;

mod ids;

pub use ids::{AuthorId, EditorId, PaperId, ReviewerId};

#[cfg(any(test, feature = "oracles"))]
pub mod oracles;

#[cfg(test)]
pub(crate) mod fixtures;
