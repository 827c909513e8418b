//! Experience-aware training data for review comment generation.
//!
//! The crate turns offline commit, pull request and review comment dumps
//! into ownership-annotated, loss-weighted datasets:
//!
//! * [`history`] loads the dumps and builds timestamp-scoped prefix-count indices.
//! * [`granularity`] maps file paths to repository, subsystem and package keys.
//! * [`ownership`] computes authoring (ACO) and review-specific (RSO) ownership.
//! * [`filtering`] removes untraceable, bot and code-only comments.
//! * [`weighting`] turns ownership into experience-aware loss weights.
//! * [`sampling`] implements major-owner group oversampling.
//! * [`evaluation`] holds BLEU-4 and the analysis statistics.
//! * [`toy`] is a closed-form conditional generator used to check that
//!   weighted training steers generation toward heavily weighted examples.

pub mod error;
pub mod evaluation;
pub mod filtering;
pub mod granularity;
pub mod history;
pub mod jsonl;
pub mod ownership;
pub mod sampling;
pub mod toy;
pub mod weighting;

pub use error::{Error, Result};
pub use granularity::{GranularityKey, Level};
pub use history::{Commit, HistoryCatalog, HistoryIndex, LevelIndices, PullRequest, ReviewComment};
pub use ownership::{AnnotatedComment, OwnershipVector};
pub use weighting::{WeightKind, WeightStrategy, WeightedExample};
