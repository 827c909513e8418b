//! Evaluation metrics and analysis statistics.

pub mod bleu;
pub mod stats;

pub use bleu::{bleu4, corpus_bleu4, corpus_bleu4_report, BleuConfig, BleuReport, StopWords};
pub use stats::{
    cohens_kappa, extreme_groups, histogram, mean_std, pearson, two_proportion_z, Direction, ExtremePools,
    ExtremeThresholds, FieldSummary, HistogramBin, ProportionTest, ZTestResult,
};
