//! BLEU-4 with optional stop-word removal.
//!
//! Text is lowercased, punctuation is split into separate tokens and the
//! result is split on whitespace. Modified n-gram precisions for n = 1..4 are
//! combined with uniform weights and a brevity penalty. With smoothing on, a
//! higher order (n >= 2) that has no matching n-gram is scored as
//! `1 / (total + 1)`; unigram precision is never smoothed, so texts with
//! disjoint vocabularies score 0.

use std::collections::{BTreeSet, HashMap};
use std::io::BufRead;

use rayon::prelude::*;

use crate::error::{Error, Result};

pub const MAX_N: usize = 4;

const BUNDLED_STOPWORDS: &str = include_str!("../../data/stopwords-en.txt");

/// Version tag of the bundled English stop-word list.
pub const BUNDLED_STOPWORDS_VERSION: &str = "en-1";

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopWords(BTreeSet<String>);

impl StopWords {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_STOPWORDS)
    }

    pub fn parse(text: &str) -> Self {
        Self(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_lowercase)
                .collect(),
        )
    }

    pub fn read<R: BufRead>(mut reader: R) -> Result<Self> {
        let mut text = String::new();
        reader.read_to_string(&mut text)?;
        Ok(Self::parse(&text))
    }

    pub fn contains(&self, token: &str) -> bool {
        self.0.contains(token)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BleuConfig {
    pub smoothing: bool,
    pub case_fold: bool,
    /// Removed from candidate and reference before counting.
    pub stopwords: Option<StopWords>,
}

impl Default for BleuConfig {
    fn default() -> Self {
        Self { smoothing: true, case_fold: true, stopwords: Some(StopWords::bundled()) }
    }
}

impl BleuConfig {
    pub fn keep_stopwords() -> Self {
        Self { stopwords: None, ..Self::default() }
    }

    pub fn tokenize(&self, text: &str) -> Vec<String> {
        let text = if self.case_fold { text.to_lowercase() } else { text.to_string() };
        let mut tokens = Vec::new();
        let mut current = String::new();
        for c in text.chars() {
            if c.is_whitespace() {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
            } else if c.is_alphanumeric() || c == '_' {
                current.push(c);
            } else {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
                tokens.push(c.to_string());
            }
        }
        if !current.is_empty() {
            tokens.push(current);
        }
        if let Some(stop) = &self.stopwords {
            tokens.retain(|t| !stop.contains(t));
        }
        tokens
    }
}

/// Clipped match and total n-gram counts, summable across a corpus.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NgramStats {
    pub matches: [u64; MAX_N],
    pub totals: [u64; MAX_N],
    pub candidate_len: u64,
    pub reference_len: u64,
}

impl std::ops::Add for NgramStats {
    type Output = NgramStats;

    fn add(mut self, other: NgramStats) -> NgramStats {
        for n in 0..MAX_N {
            self.matches[n] += other.matches[n];
            self.totals[n] += other.totals[n];
        }
        self.candidate_len += other.candidate_len;
        self.reference_len += other.reference_len;
        self
    }
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], u64> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for gram in tokens.windows(n) {
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    counts
}

impl NgramStats {
    pub fn of_tokens(candidate: &[String], reference: &[String]) -> Self {
        let mut stats = NgramStats {
            candidate_len: candidate.len() as u64,
            reference_len: reference.len() as u64,
            ..Default::default()
        };
        for n in 1..=MAX_N {
            let cand = ngram_counts(candidate, n);
            let refs = ngram_counts(reference, n);
            stats.totals[n - 1] = cand.values().sum();
            stats.matches[n - 1] =
                cand.iter().map(|(gram, &count)| count.min(refs.get(gram).copied().unwrap_or(0))).sum();
        }
        stats
    }

    /// Score in `[0, 100]`.
    pub fn score(&self, smoothing: bool) -> f64 {
        if self.candidate_len == 0 || self.matches[0] == 0 {
            return 0.0;
        }
        let mut log_sum = 0.0;
        for n in 0..MAX_N {
            let (m, t) = (self.matches[n], self.totals[n]);
            let precision = if m > 0 {
                m as f64 / t as f64
            } else if smoothing && n > 0 {
                1.0 / (t as f64 + 1.0)
            } else {
                return 0.0;
            };
            log_sum += precision.ln();
        }
        let (c, r) = (self.candidate_len as f64, self.reference_len as f64);
        let brevity = if c > r { 1.0 } else { (1.0 - r / c).exp() };
        100.0 * brevity * (log_sum / MAX_N as f64).exp()
    }
}

/// Sentence-level BLEU-4.
pub fn bleu4(candidate: &str, reference: &str, config: &BleuConfig) -> f64 {
    let stats = NgramStats::of_tokens(&config.tokenize(candidate), &config.tokenize(reference));
    stats.score(config.smoothing)
}

/// Corpus-level BLEU-4 from n-gram counts pooled over all pairs.
pub fn corpus_bleu4<C: AsRef<str> + Sync, R: AsRef<str> + Sync>(pairs: &[(C, R)], config: &BleuConfig) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::invalid("corpus BLEU needs at least one pair"));
    }
    let stats = pairs
        .par_iter()
        .map(|(c, r)| NgramStats::of_tokens(&config.tokenize(c.as_ref()), &config.tokenize(r.as_ref())))
        .reduce(NgramStats::default, |a, b| a + b);
    Ok(stats.score(config.smoothing))
}

/// Corpus BLEU-4 with stop words removed and kept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BleuReport {
    pub stopwords_removed: f64,
    pub stopwords_kept: f64,
}

/// Scores the corpus twice: once with `config`'s stop-word list (the bundled
/// list if none is set) and once keeping every token.
pub fn corpus_bleu4_report<C: AsRef<str> + Sync, R: AsRef<str> + Sync>(
    pairs: &[(C, R)],
    config: &BleuConfig,
) -> Result<BleuReport> {
    let removed =
        BleuConfig { stopwords: Some(config.stopwords.clone().unwrap_or_else(StopWords::bundled)), ..config.clone() };
    let kept = BleuConfig { stopwords: None, ..config.clone() };
    Ok(BleuReport { stopwords_removed: corpus_bleu4(pairs, &removed)?, stopwords_kept: corpus_bleu4(pairs, &kept)? })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plain() -> BleuConfig {
        BleuConfig::keep_stopwords()
    }

    #[test]
    fn tokenizer_splits_punctuation() {
        let toks = plain().tokenize("Rename fooBar() to foo_bar, please!");
        assert_eq!(toks, ["rename", "foobar", "(", ")", "to", "foo_bar", ",", "please", "!"]);
        let toks = BleuConfig::default().tokenize("Why is the lock not released here?");
        assert_eq!(toks, ["lock", "released", "?"]);
    }

    #[test]
    fn bundled_list_loads() {
        let stop = StopWords::bundled();
        assert_eq!(stop.len(), 179);
        assert!(stop.contains("the") && !stop.contains("#"));
    }

    #[test]
    fn identity_scores_hundred() {
        let s = "please close the stream before returning";
        assert_eq!(bleu4(s, s, &plain()), 100.0);
    }

    #[test]
    fn disjoint_vocabulary() {
        let score = bleu4("alpha beta gamma delta", "one two three four five", &plain());
        assert!(score < 0.1);
    }

    #[test]
    fn fixed_pair_matches_reference_value() {
        // NLTK sentence_bleu with zero-order add-one smoothing for n >= 2
        let score = bleu4("the cat sat on the mat", "a cat sat on a mat", &plain());
        assert!((score - 35.93041119630843).abs() < 1e-6, "{score}");
    }

    #[test]
    fn unsmoothed_zero_order_scores_zero() {
        let config = BleuConfig { smoothing: false, ..plain() };
        assert_eq!(bleu4("the cat sat on the mat", "a cat sat on a mat", &config), 0.0);
    }

    #[test]
    fn brevity_penalty() {
        let score = bleu4("a b c d", "a b c d e f g h", &plain());
        assert!((score - 100.0 * (1.0f64 - 2.0).exp()).abs() < 1e-9);
    }

    #[test]
    fn empty_after_stopword_removal() {
        assert_eq!(bleu4("the and of", "a real reference", &BleuConfig::default()), 0.0);
    }

    #[test]
    fn corpus_pools_counts() {
        let pair = ("please add a unit test for this branch", "add a unit test for this branch please");
        let single = corpus_bleu4(&[pair], &plain()).unwrap();
        assert_eq!(single, bleu4(pair.0, pair.1, &plain()));
        let doubled = corpus_bleu4(&[pair, pair], &plain()).unwrap();
        assert!((single - doubled).abs() < 1e-12);
        assert!(corpus_bleu4::<&str, &str>(&[], &plain()).is_err());
    }

    #[test]
    fn report_has_both_numbers() {
        let pairs = [("the lock is not released", "release the lock here")];
        let r = corpus_bleu4_report(&pairs, &plain()).unwrap();
        assert_eq!(r.stopwords_kept, corpus_bleu4(&pairs, &plain()).unwrap());
        assert_eq!(r.stopwords_removed, corpus_bleu4(&pairs, &BleuConfig::default()).unwrap());
    }
}
