//! Analysis statistics: summary moments, correlation, agreement, the
//! one-tailed two-proportion Z-test, extreme-experience pools and histograms.

use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::ownership::OwnershipVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSummary {
    pub field: String,
    pub mean: f64,
    pub std: f64,
}

/// Mean and sample standard deviation (n - 1 denominator; 0 for one value).
pub fn mean_std(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return Some((mean, 0.0));
    }
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    Some((mean, (ss / (n - 1.0)).sqrt()))
}

/// Sample Pearson correlation coefficient.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::invalid(format!("length mismatch: {} vs {}", xs.len(), ys.len())));
    }
    if xs.len() < 2 {
        return Err(Error::invalid("pearson needs at least two observations"));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::degenerate("zero variance"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Pairwise Pearson matrix over the six ownership fields; `None` where a
/// field has zero variance.
pub fn correlation_matrix(vectors: &[OwnershipVector]) -> Vec<Vec<Option<f64>>> {
    let columns: Vec<Vec<f64>> = (0..6).map(|i| vectors.iter().map(|v| v.values()[i]).collect()).collect();
    columns.iter().map(|a| columns.iter().map(|b| pearson(a, b).ok()).collect()).collect()
}

pub fn correlation_csv(vectors: &[OwnershipVector]) -> String {
    let mut out = String::from("field");
    for f in OwnershipVector::FIELDS {
        out.push(',');
        out.push_str(f);
    }
    out.push('\n');
    for (name, row) in OwnershipVector::FIELDS.iter().zip(correlation_matrix(vectors)) {
        out.push_str(name);
        for cell in row {
            out.push(',');
            if let Some(r) = cell {
                out.push_str(&r.to_string());
            }
        }
        out.push('\n');
    }
    out
}

/// Cohen's kappa for a square agreement table (rows: rater 1, columns: rater 2).
pub fn cohens_kappa(table: &[Vec<u64>]) -> Result<f64> {
    let k = table.len();
    if k == 0 || table.iter().any(|row| row.len() != k) {
        return Err(Error::invalid("agreement table must be square and non-empty"));
    }
    let total: u64 = table.iter().flatten().sum();
    if total == 0 {
        return Err(Error::invalid("agreement table is empty"));
    }
    let n = total as f64;
    let observed = (0..k).map(|i| table[i][i]).sum::<u64>() as f64 / n;
    let expected: f64 = (0..k)
        .map(|i| {
            let row: u64 = table[i].iter().sum();
            let col: u64 = table.iter().map(|r| r[i]).sum();
            (row as f64 / n) * (col as f64 / n)
        })
        .sum();
    if expected >= 1.0 {
        return Err(Error::degenerate("expected agreement is 1"));
    }
    Ok((observed - expected) / (1.0 - expected))
}

/// Alternative hypothesis of a one-tailed test on `p_a - p_b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Greater,
    Less,
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "greater" => Ok(Direction::Greater),
            "less" => Ok(Direction::Less),
            other => Err(Error::invalid(format!("unknown direction {other:?}"))),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Greater => "greater",
            Direction::Less => "less",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProportionTest {
    pub successes_a: u64,
    pub n_a: u64,
    pub successes_b: u64,
    pub n_b: u64,
    pub direction: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZTestResult {
    pub z: f64,
    pub p: f64,
}

/// Upper tail of the standard normal, `P(Z > z)`.
pub fn normal_upper_tail(z: f64) -> f64 {
    0.5 * erfc(z / SQRT_2)
}

/// Pooled one-tailed two-proportion Z-test.
pub fn two_proportion_z(test: &ProportionTest) -> Result<ZTestResult> {
    if test.n_a == 0 || test.n_b == 0 {
        return Err(Error::invalid("sample sizes must be positive"));
    }
    if test.successes_a > test.n_a || test.successes_b > test.n_b {
        return Err(Error::invalid("successes exceed sample size"));
    }
    let (na, nb) = (test.n_a as f64, test.n_b as f64);
    let pooled = (test.successes_a + test.successes_b) as f64 / (na + nb);
    if pooled == 0.0 || pooled == 1.0 {
        return Err(Error::degenerate(format!("pooled proportion is {pooled}")));
    }
    let se = (pooled * (1.0 - pooled) * (1.0 / na + 1.0 / nb)).sqrt();
    let z = (test.successes_a as f64 / na - test.successes_b as f64 / nb) / se;
    let p = match test.direction {
        Direction::Greater => normal_upper_tail(z),
        Direction::Less => normal_upper_tail(-z),
    };
    Ok(ZTestResult { z, p })
}

/// Cutoffs for the experienced pool. The inexperienced pool is always the
/// all-zero vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremeThresholds {
    pub upper: OwnershipVector,
}

impl Default for ExtremeThresholds {
    /// Two standard deviations above the training-set mean of the original
    /// study's corpus.
    fn default() -> Self {
        Self {
            upper: OwnershipVector {
                aco_repo: 0.34,
                rso_repo: 0.63,
                aco_sys: 0.38,
                rso_sys: 0.71,
                aco_pkg: 0.5,
                rso_pkg: 0.85,
            },
        }
    }
}

impl ExtremeThresholds {
    /// `mean + k * std` per field, capped at 1. Fields whose cutoff would not
    /// be positive are rejected.
    pub fn from_summary(summary: &[FieldSummary], k: f64) -> Result<Self> {
        let mut values = [0.0; 6];
        for (slot, name) in values.iter_mut().zip(OwnershipVector::FIELDS) {
            let f = summary
                .iter()
                .find(|f| f.field == name)
                .ok_or_else(|| Error::invalid(format!("summary lacks field {name}")))?;
            *slot = (f.mean + k * f.std).min(1.0);
        }
        let t = Self { upper: OwnershipVector::from_values(values) };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, c) in OwnershipVector::FIELDS.iter().zip(self.upper.values()) {
            if !(c > 0.0 && c <= 1.0) {
                return Err(Error::invalid(format!("cutoff {name} = {c} outside (0, 1]")));
            }
        }
        Ok(())
    }

    pub fn is_inexperienced(&self, v: &OwnershipVector) -> bool {
        v.values().iter().all(|&x| x == 0.0)
    }

    pub fn is_experienced(&self, v: &OwnershipVector) -> bool {
        v.values().iter().zip(self.upper.values()).all(|(x, c)| *x >= c)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremePools<'a, T> {
    pub inexperienced: Vec<&'a T>,
    pub experienced: Vec<&'a T>,
}

/// Splits off the all-zero and all-above-cutoff examples; everything else is
/// excluded.
pub fn extreme_groups<'a, T>(
    dataset: &'a [T],
    ownership: impl Fn(&T) -> OwnershipVector,
    thresholds: &ExtremeThresholds,
) -> ExtremePools<'a, T> {
    let mut pools = ExtremePools { inexperienced: Vec::new(), experienced: Vec::new() };
    for item in dataset {
        let v = ownership(item);
        if thresholds.is_inexperienced(&v) {
            pools.inexperienced.push(item);
        } else if thresholds.is_experienced(&v) {
            pools.experienced.push(item);
        }
    }
    pools
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramBin {
    pub low: f64,
    pub high: f64,
    pub count: usize,
}

/// Equal-width bins over `[0, 1]`. Bins are right-closed, and the first bin
/// also holds 0. Values outside the unit interval go to the nearest end bin.
pub fn histogram(values: &[f64], bins: usize) -> Result<Vec<HistogramBin>> {
    if bins == 0 {
        return Err(Error::invalid("histogram needs at least one bin"));
    }
    let edges: Vec<f64> = (0..=bins).map(|i| i as f64 / bins as f64).collect();
    let mut out: Vec<HistogramBin> =
        (0..bins).map(|i| HistogramBin { low: edges[i], high: edges[i + 1], count: 0 }).collect();
    for &v in values {
        let slot = edges[1..].partition_point(|&high| high < v).min(bins - 1);
        out[slot].count += 1;
    }
    Ok(out)
}

pub fn histogram_csv(bins: &[HistogramBin]) -> String {
    let mut out = String::from("bin_low,bin_high,count\n");
    for b in bins {
        out.push_str(&format!("{},{},{}\n", b.low, b.high, b.count));
    }
    out
}
