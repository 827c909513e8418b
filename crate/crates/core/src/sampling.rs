//! Oversampling of comments written by major owners.
//!
//! A reviewer is a major author (MA) when ACO meets the threshold, a major
//! reviewer (MR) when RSO does, and both (MRMA) when the two hold together.
//! At a rate of `r` percent every targeted example ends up `r / 100` times in
//! the output.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::granularity::Level;
use crate::ownership::OwnershipVector;

/// The conventional major-ownership threshold.
pub const DEFAULT_THRESHOLD: f64 = 0.05;

pub const DEFAULT_RATE: u32 = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MajorGroup {
    Ma,
    Mr,
    Mrma,
}

impl MajorGroup {
    pub fn as_str(self) -> &'static str {
        match self {
            MajorGroup::Ma => "ma",
            MajorGroup::Mr => "mr",
            MajorGroup::Mrma => "mrma",
        }
    }
}

impl fmt::Display for MajorGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.as_str().to_uppercase())
    }
}

impl FromStr for MajorGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ma" => Ok(MajorGroup::Ma),
            "mr" => Ok(MajorGroup::Mr),
            "mrma" => Ok(MajorGroup::Mrma),
            other => Err(Error::invalid(format!("unknown major group {other:?}"))),
        }
    }
}

/// Group memberships of one ownership vector. An empty set means "none".
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Groups {
    pub ma: bool,
    pub mr: bool,
}

impl Groups {
    pub fn mrma(&self) -> bool {
        self.ma && self.mr
    }

    pub fn contains(&self, group: MajorGroup) -> bool {
        match group {
            MajorGroup::Ma => self.ma,
            MajorGroup::Mr => self.mr,
            MajorGroup::Mrma => self.mrma(),
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.ma && !self.mr
    }

    pub fn tags(&self) -> Vec<MajorGroup> {
        [MajorGroup::Ma, MajorGroup::Mr, MajorGroup::Mrma].into_iter().filter(|g| self.contains(*g)).collect()
    }
}

/// Inclusive threshold comparison at one level.
pub fn classify_group(v: &OwnershipVector, level: Level, threshold: f64) -> Groups {
    Groups { ma: v.aco(level) >= threshold, mr: v.rso(level) >= threshold }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OversampleConfig {
    pub group: MajorGroup,
    pub level: Level,
    pub threshold: f64,
    /// Percentage; must be a positive multiple of 100.
    pub rate: u32,
    pub seed: u64,
}

impl OversampleConfig {
    pub fn new(group: MajorGroup) -> Self {
        Self { group, level: Level::Repository, threshold: DEFAULT_THRESHOLD, rate: DEFAULT_RATE, seed: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rate == 0 || !self.rate.is_multiple_of(100) {
            return Err(Error::invalid(format!("oversampling rate {}% is not a positive multiple of 100", self.rate)));
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::invalid(format!("threshold {} is outside (0, 1)", self.threshold)));
        }
        Ok(())
    }

    pub fn multiplicity(&self) -> usize {
        (self.rate / 100) as usize
    }

    pub fn targets(&self, v: &OwnershipVector) -> bool {
        classify_group(v, self.level, self.threshold).contains(self.group)
    }
}

/// Replicates targeted items so each occurs `multiplicity` times.
///
/// The output is the input in its original order followed by the extra
/// copies, shuffled with a generator seeded by `seed`.
pub fn replicate<T: Clone>(items: &[T], targeted: impl Fn(&T) -> bool, multiplicity: usize, seed: u64) -> Vec<T> {
    let mut out: Vec<T> = items.to_vec();
    let mut extra: Vec<T> = Vec::new();
    for item in items.iter().filter(|i| targeted(i)) {
        for _ in 1..multiplicity {
            extra.push(item.clone());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    extra.shuffle(&mut rng);
    out.extend(extra);
    out
}

/// Oversamples the examples whose ownership vector (from `ownership`) places
/// them in the configured group.
pub fn oversample<T: Clone>(
    dataset: &[T],
    ownership: impl Fn(&T) -> OwnershipVector,
    config: &OversampleConfig,
) -> Result<Vec<T>> {
    config.validate()?;
    Ok(replicate(dataset, |item| config.targets(&ownership(item)), config.multiplicity(), config.seed))
}
