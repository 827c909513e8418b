//! Experience-aware loss weights.
//!
//! A weight is `exp(1 + x)` where `x` is an ownership ratio (or a combination
//! of the ACO and RSO ratios) at one granularity level. Since `x` lies in
//! `[0, 1]`, every weight lies in `[e, e^2]`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::granularity::Level;
use crate::ownership::{AnnotatedComment, OwnershipVector};

/// How ACO and RSO combine into the exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightKind {
    Aco,
    Rso,
    Avg,
    Max,
}

impl WeightKind {
    pub const ALL: [WeightKind; 4] = [WeightKind::Aco, WeightKind::Rso, WeightKind::Avg, WeightKind::Max];

    pub fn as_str(self) -> &'static str {
        match self {
            WeightKind::Aco => "aco",
            WeightKind::Rso => "rso",
            WeightKind::Avg => "avg",
            WeightKind::Max => "max",
        }
    }
}

impl fmt::Display for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WeightKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "aco" => Ok(WeightKind::Aco),
            "rso" => Ok(WeightKind::Rso),
            "avg" => Ok(WeightKind::Avg),
            "max" => Ok(WeightKind::Max),
            other => Err(Error::invalid(format!("unknown weight strategy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightStrategy {
    pub kind: WeightKind,
    pub level: Level,
}

impl WeightStrategy {
    pub fn new(kind: WeightKind, level: Level) -> Self {
        Self { kind, level }
    }

    /// All twelve kind/level combinations.
    pub fn all() -> impl Iterator<Item = WeightStrategy> {
        WeightKind::ALL
            .into_iter()
            .flat_map(|kind| Level::ALL.into_iter().map(move |level| WeightStrategy { kind, level }))
    }

    /// Experience value in `[0, 1]` that feeds the exponent.
    pub fn experience(&self, v: &OwnershipVector) -> f64 {
        let aco = v.aco(self.level);
        let rso = v.rso(self.level);
        match self.kind {
            WeightKind::Aco => aco,
            WeightKind::Rso => rso,
            WeightKind::Avg => (rso + aco) / 2.0,
            WeightKind::Max => rso.max(aco),
        }
    }
}

impl fmt::Display for WeightStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.kind, self.level)
    }
}

/// Loss weight for an ownership vector under `strategy`.
pub fn weight(strategy: WeightStrategy, v: &OwnershipVector) -> Result<f64> {
    v.validate()?;
    Ok((1.0 + strategy.experience(v)).exp())
}

/// Sequence loss scaled by the example weight: `omega * sum(-log p_t)`.
pub fn weighted_nll(token_logprobs: &[f64], omega: f64) -> Result<f64> {
    if token_logprobs.is_empty() {
        return Err(Error::invalid("empty token sequence"));
    }
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::invalid(format!("weight {omega} must be positive and finite")));
    }
    let mut nll = 0.0;
    for &lp in token_logprobs {
        if lp > 0.0 || lp.is_nan() {
            return Err(Error::invalid(format!("log-probability {lp} is not <= 0")));
        }
        nll -= lp;
    }
    Ok(omega * nll)
}

/// An annotated comment with the loss weight of one strategy attached.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedExample {
    pub annotated: AnnotatedComment,
    pub strategy: WeightStrategy,
    pub weight: f64,
}

impl WeightedExample {
    pub fn to_object(&self) -> Map<String, Value> {
        let mut object = self.annotated.to_object();
        object.insert("strategy".into(), Value::from(self.strategy.kind.as_str()));
        object.insert("level".into(), Value::from(self.strategy.level.as_str()));
        object.insert("weight".into(), Value::from(self.weight));
        object
    }

    pub fn from_object(object: &Map<String, Value>, line: usize) -> Result<Self> {
        let mut annotated = AnnotatedComment::from_object(object, line)?;
        for field in ["strategy", "level", "weight"] {
            annotated.comment.extra.shift_remove(field);
        }
        let schema = |message: String| Error::Schema { line, message };
        let text = |name: &str| {
            object.get(name).and_then(Value::as_str).ok_or_else(|| schema(format!("missing field `{name}`")))
        };
        let strategy = WeightStrategy { kind: text("strategy")?.parse()?, level: text("level")?.parse()? };
        let weight =
            object.get("weight").and_then(Value::as_f64).ok_or_else(|| schema("missing field `weight`".into()))?;
        Ok(Self { annotated, strategy, weight })
    }
}

/// Attaches a weight to every example, preserving order.
pub fn annotate_weights(dataset: &[AnnotatedComment], strategy: WeightStrategy) -> Result<Vec<WeightedExample>> {
    dataset
        .iter()
        .map(|a| Ok(WeightedExample { annotated: a.clone(), strategy, weight: weight(strategy, &a.ownership)? }))
        .collect()
}
