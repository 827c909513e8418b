//! A position-factored conditional generator with closed-form gradients.
//!
//! For every (context, position) slot the model keeps one logit per
//! vocabulary token, so `P(w_t | c, w_<t) = softmax(logits[c, t])[w_t]`.
//! The sequence loss is the example weight times the summed token negative
//! log-likelihood, and its gradient at a slot is `weight * (p - onehot)`.
//! That isolates the effect of per-example loss weights from any modelling
//! capacity question.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::granularity::Level;
use crate::ownership::OwnershipVector;
use crate::weighting::{weight, WeightKind, WeightStrategy};

/// Padding token for targets shorter than the model length.
pub const PAD: &str = "<pad>";

#[derive(Debug, Clone, PartialEq)]
pub struct ToyModel {
    vocab: Vec<String>,
    contexts: Vec<String>,
    max_len: usize,
    logits: Vec<f64>,
    seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ToyExample {
    pub context: usize,
    pub target: Vec<usize>,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decode {
    Argmax,
    Beam(usize),
}

fn log_softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = max + logits.iter().map(|l| (l - max).exp()).sum::<f64>().ln();
    logits.iter().map(|l| l - lse).collect()
}

fn softmax(logits: &[f64]) -> Vec<f64> {
    log_softmax(logits).into_iter().map(f64::exp).collect()
}

impl ToyModel {
    /// Uniform model: every logit starts at 0.
    pub fn init(vocab: Vec<String>, contexts: Vec<String>, max_len: usize, seed: u64) -> Result<Self> {
        if vocab.is_empty() {
            return Err(Error::invalid("empty vocabulary"));
        }
        if contexts.is_empty() {
            return Err(Error::invalid("no contexts"));
        }
        if max_len == 0 {
            return Err(Error::invalid("maximum length must be at least 1"));
        }
        let logits = vec![0.0; contexts.len() * max_len * vocab.len()];
        Ok(Self { vocab, contexts, max_len, logits, seed })
    }

    /// Replaces every logit with a draw from `[-scale, scale)` seeded by the
    /// model seed.
    pub fn randomized(mut self, scale: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for l in &mut self.logits {
            *l = rng.random_range(-scale..scale);
        }
        self
    }

    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    pub fn contexts(&self) -> &[String] {
        &self.contexts
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn param_count(&self) -> usize {
        self.logits.len()
    }

    pub fn params(&self) -> &[f64] {
        &self.logits
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.logits
    }

    pub fn token_id(&self, token: &str) -> Option<usize> {
        self.vocab.iter().position(|t| t == token)
    }

    pub fn context_id(&self, context: &str) -> Option<usize> {
        self.contexts.iter().position(|c| c == context)
    }

    fn slot(&self, context: usize, position: usize) -> std::ops::Range<usize> {
        let start = (context * self.max_len + position) * self.vocab.len();
        start..start + self.vocab.len()
    }

    fn check_context(&self, context: usize) -> Result<()> {
        if context >= self.contexts.len() {
            return Err(Error::invalid(format!("unknown context id {context}")));
        }
        Ok(())
    }

    /// Token distribution at one (context, position) slot.
    pub fn probs(&self, context: usize, position: usize) -> Result<Vec<f64>> {
        self.check_context(context)?;
        if position >= self.max_len {
            return Err(Error::invalid(format!("position {position} beyond length {}", self.max_len)));
        }
        Ok(softmax(&self.logits[self.slot(context, position)]))
    }

    fn check_example(&self, example: &ToyExample) -> Result<()> {
        self.check_context(example.context)?;
        if example.target.is_empty() || example.target.len() > self.max_len {
            return Err(Error::invalid(format!("target length {} outside 1..={}", example.target.len(), self.max_len)));
        }
        if let Some(bad) = example.target.iter().find(|&&t| t >= self.vocab.len()) {
            return Err(Error::invalid(format!("token id {bad} outside vocabulary")));
        }
        if !(example.weight.is_finite() && example.weight > 0.0) {
            return Err(Error::invalid(format!("weight {} must be positive", example.weight)));
        }
        Ok(())
    }

    /// Weighted sequence loss.
    pub fn loss(&self, example: &ToyExample) -> Result<f64> {
        self.check_example(example)?;
        let mut nll = 0.0;
        for (t, &w) in example.target.iter().enumerate() {
            nll -= log_softmax(&self.logits[self.slot(example.context, t)])[w];
        }
        Ok(example.weight * nll)
    }

    /// Adds `scale * d loss / d logits` into `grad` and returns the loss.
    pub fn accumulate_grad(&self, example: &ToyExample, scale: f64, grad: &mut [f64]) -> Result<f64> {
        self.check_example(example)?;
        debug_assert_eq!(grad.len(), self.logits.len());
        let mut nll = 0.0;
        for (t, &w) in example.target.iter().enumerate() {
            let range = self.slot(example.context, t);
            let logp = log_softmax(&self.logits[range.clone()]);
            nll -= logp[w];
            for (v, (g, lp)) in grad[range].iter_mut().zip(&logp).enumerate() {
                let indicator = if v == w { 1.0 } else { 0.0 };
                *g += scale * example.weight * (lp.exp() - indicator);
            }
        }
        Ok(example.weight * nll)
    }

    /// Loss and dense gradient for one example.
    pub fn loss_and_grad(&self, example: &ToyExample) -> Result<(f64, Vec<f64>)> {
        let mut grad = vec![0.0; self.logits.len()];
        let loss = self.accumulate_grad(example, 1.0, &mut grad)?;
        Ok((loss, grad))
    }

    /// Decodes a full-length sequence for `context`.
    pub fn generate(&self, context: usize, mode: Decode) -> Result<Vec<usize>> {
        self.check_context(context)?;
        match mode {
            Decode::Argmax => Ok((0..self.max_len)
                .map(|t| {
                    let slot = &self.logits[self.slot(context, t)];
                    let mut best = 0;
                    for (v, &l) in slot.iter().enumerate() {
                        if l > slot[best] {
                            best = v;
                        }
                    }
                    best
                })
                .collect()),
            Decode::Beam(width) => Ok(self.beam_search(context, width)?.remove(0).0),
        }
    }

    /// Beam search keeping the `width` best partial sequences by summed
    /// log-probability; ties prefer the lexicographically smallest ids.
    /// Returns the final beam, best first.
    pub fn beam_search(&self, context: usize, width: usize) -> Result<Vec<(Vec<usize>, f64)>> {
        self.check_context(context)?;
        if width == 0 {
            return Err(Error::invalid("beam width must be at least 1"));
        }
        let mut beam: Vec<(Vec<usize>, f64)> = vec![(Vec::new(), 0.0)];
        for t in 0..self.max_len {
            let logp = log_softmax(&self.logits[self.slot(context, t)]);
            let mut next: Vec<(Vec<usize>, f64)> = Vec::with_capacity(beam.len() * logp.len());
            for (prefix, score) in &beam {
                for (v, lp) in logp.iter().enumerate() {
                    let mut seq = prefix.clone();
                    seq.push(v);
                    next.push((seq, score + lp));
                }
            }
            next.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            next.truncate(width);
            beam = next;
        }
        Ok(beam)
    }

    pub fn decode_tokens(&self, ids: &[usize]) -> Vec<&str> {
        ids.iter().map(|&i| self.vocab[i].as_str()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub lr: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self { lr: 0.1, epochs: 200, batch_size: 8, seed: 7 }
    }
}

/// Mini-batch gradient descent on the mean weighted loss of each batch.
/// Example order is reshuffled every epoch from `config.seed`.
pub fn train(mut model: ToyModel, examples: &[ToyExample], config: &TrainConfig) -> Result<ToyModel> {
    if !(config.lr.is_finite() && config.lr > 0.0) {
        return Err(Error::invalid(format!("learning rate {} must be positive", config.lr)));
    }
    if config.epochs == 0 || config.batch_size == 0 {
        return Err(Error::invalid("epochs and batch size must be at least 1"));
    }
    for ex in examples {
        model.check_example(ex)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..examples.len()).collect();
    let mut grad = vec![0.0; model.param_count()];
    for epoch in 0..config.epochs {
        order.shuffle(&mut rng);
        for (step, batch) in order.chunks(config.batch_size).enumerate() {
            grad.iter_mut().for_each(|g| *g = 0.0);
            let scale = 1.0 / batch.len() as f64;
            let mut loss = 0.0;
            for &i in batch {
                loss += scale * model.accumulate_grad(&examples[i], scale, &mut grad)?;
            }
            if !loss.is_finite() {
                return Err(Error::Training(format!("non-finite loss {loss} at epoch {epoch}, step {step}")));
            }
            for (p, g) in model.logits.iter_mut().zip(&grad) {
                *p -= config.lr * g;
            }
        }
    }
    Ok(model)
}

/// One probe context with two competing target styles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub context: usize,
    pub style_a: Vec<usize>,
    pub style_b: Vec<usize>,
}

/// Fraction of probes whose argmax generation equals style A exactly.
pub fn alignment_rate(model: &ToyModel, probes: &[Probe]) -> Result<f64> {
    if probes.is_empty() {
        return Ok(0.0);
    }
    let mut hits = 0usize;
    for probe in probes {
        if model.generate(probe.context, Decode::Argmax)? == probe.style_a {
            hits += 1;
        }
    }
    Ok(hits as f64 / probes.len() as f64)
}

/// A training corpus together with its probe set.
#[derive(Debug, Clone, PartialEq)]
pub struct ToyCorpus {
    pub vocab: Vec<String>,
    pub contexts: Vec<String>,
    pub max_len: usize,
    pub examples: Vec<ToyExample>,
    pub probes: Vec<Probe>,
}

/// Seed of the canonical conflict corpus.
pub const CONFLICT_CORPUS_SEED: u64 = 7;
const CONFLICT_CONTEXTS: usize = 24;
const CONFLICT_VOCAB: usize = 12;
const CONFLICT_LEN: usize = 3;

impl ToyCorpus {
    /// The canonical conflict corpus.
    ///
    /// Every context has one experienced-style target (full ownership, weight
    /// e^2) and three inexperienced-style targets (zero ownership, weight e).
    /// The inexperienced targets are copies of one style sequence with a
    /// different position replaced by a noise token, so at each position the
    /// inexperienced style holds two of the four votes: it wins when every
    /// example counts the same, and loses to the experienced style once
    /// weighted (e^2 > 2e).
    pub fn conflict(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vocab: Vec<String> = (0..CONFLICT_VOCAB).map(|i| format!("w{i:02}")).collect();
        let contexts: Vec<String> = (0..CONFLICT_CONTEXTS).map(|i| format!("ctx{i:02}")).collect();
        let strategy = WeightStrategy::new(WeightKind::Avg, Level::Repository);
        let experienced = weight(strategy, &OwnershipVector::from_values([1.0; 6])).expect("valid vector");
        let novice = weight(strategy, &OwnershipVector::default()).expect("valid vector");

        let mut examples = Vec::new();
        let mut probes = Vec::new();
        for context in 0..CONFLICT_CONTEXTS {
            let mut style_a = Vec::with_capacity(CONFLICT_LEN);
            let mut style_b = Vec::with_capacity(CONFLICT_LEN);
            let mut noise = Vec::with_capacity(CONFLICT_LEN);
            for _ in 0..CONFLICT_LEN {
                let mut ids: Vec<usize> = (0..CONFLICT_VOCAB).collect();
                ids.shuffle(&mut rng);
                style_a.push(ids[0]);
                style_b.push(ids[1]);
                noise.push(ids[2]);
            }
            examples.push(ToyExample { context, target: style_a.clone(), weight: experienced });
            for (i, &n) in noise.iter().enumerate() {
                let mut target = style_b.clone();
                target[i] = n;
                examples.push(ToyExample { context, target, weight: novice });
            }
            probes.push(Probe { context, style_a, style_b });
        }
        Self { vocab, contexts, max_len: CONFLICT_LEN, examples, probes }
    }

    /// The same corpus with every weight set to 1.
    pub fn uniform(&self) -> Self {
        let mut out = self.clone();
        out.examples.iter_mut().for_each(|e| e.weight = 1.0);
        out
    }

    pub fn model(&self, seed: u64) -> Result<ToyModel> {
        ToyModel::init(self.vocab.clone(), self.contexts.clone(), self.max_len, seed)
    }

    /// Builds a corpus from `(context, token sequence, weight)` triples.
    ///
    /// Sequences are truncated or padded with [`PAD`] to `max_len`. The probe
    /// of a context compares the target of its highest-weight example (style
    /// A) against the most frequent other target (style B); contexts where
    /// the two coincide get no probe.
    pub fn from_sequences(records: &[(String, Vec<String>, f64)], max_len: usize) -> Result<Self> {
        if max_len == 0 {
            return Err(Error::invalid("maximum length must be at least 1"));
        }
        let mut vocab: Vec<String> = vec![PAD.to_string()];
        let mut vocab_ids: BTreeMap<String, usize> = BTreeMap::from([(PAD.to_string(), 0)]);
        let mut contexts: Vec<String> = Vec::new();
        let mut context_ids: BTreeMap<String, usize> = BTreeMap::new();
        let mut examples = Vec::with_capacity(records.len());
        for (context, tokens, w) in records {
            let c = *context_ids.entry(context.clone()).or_insert_with(|| {
                contexts.push(context.clone());
                contexts.len() - 1
            });
            let mut target: Vec<usize> = tokens
                .iter()
                .take(max_len)
                .map(|tok| {
                    *vocab_ids.entry(tok.clone()).or_insert_with(|| {
                        vocab.push(tok.clone());
                        vocab.len() - 1
                    })
                })
                .collect();
            target.resize(max_len, 0);
            examples.push(ToyExample { context: c, target, weight: *w });
        }
        if examples.is_empty() {
            return Err(Error::invalid("no training examples"));
        }
        let mut probes = Vec::new();
        for c in 0..contexts.len() {
            let members: Vec<&ToyExample> = examples.iter().filter(|e| e.context == c).collect();
            let best = members.iter().fold(members[0], |best, e| if e.weight > best.weight { e } else { best });
            let mut counts: Vec<(&Vec<usize>, usize)> = Vec::new();
            for e in members.iter().filter(|e| e.target != best.target) {
                match counts.iter_mut().find(|(t, _)| **t == e.target) {
                    Some((_, n)) => *n += 1,
                    None => counts.push((&e.target, 1)),
                }
            }
            let majority = counts.iter().fold(None::<(&Vec<usize>, usize)>, |acc, &(t, n)| match acc {
                Some((_, m)) if m >= n => acc,
                _ => Some((t, n)),
            });
            if let Some((style_b, _)) = majority {
                probes.push(Probe { context: c, style_a: best.target.clone(), style_b: style_b.clone() });
            }
        }
        Ok(Self { vocab, contexts, max_len, examples, probes })
    }
}

/// Alignment of weighted and uniform training on the same corpus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteeringReport {
    pub examples: usize,
    pub contexts: usize,
    pub probes: usize,
    pub weighted_alignment: f64,
    pub uniform_alignment: f64,
    pub steered: bool,
}

/// Trains the corpus twice, with its own weights and with every weight 1,
/// under identical hyper-parameters, and compares style-A alignment.
pub fn steering_experiment(corpus: &ToyCorpus, config: &TrainConfig) -> Result<SteeringReport> {
    let weighted = train(corpus.model(config.seed)?, &corpus.examples, config)?;
    let uniform_corpus = corpus.uniform();
    let uniform = train(uniform_corpus.model(config.seed)?, &uniform_corpus.examples, config)?;
    let weighted_alignment = alignment_rate(&weighted, &corpus.probes)?;
    let uniform_alignment = alignment_rate(&uniform, &corpus.probes)?;
    Ok(SteeringReport {
        examples: corpus.examples.len(),
        contexts: corpus.contexts.len(),
        probes: corpus.probes.len(),
        weighted_alignment,
        uniform_alignment,
        steered: weighted_alignment > uniform_alignment,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::E;

    use super::*;

    fn names(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }

    fn model(v: usize, c: usize, l: usize, seed: u64) -> ToyModel {
        ToyModel::init(names("t", v), names("c", c), l, seed).unwrap()
    }

    #[test]
    fn uniform_init() {
        let m = model(4, 3, 2, 1);
        for c in 0..3 {
            for t in 0..2 {
                assert!(m.probs(c, t).unwrap().iter().all(|&p| p == 0.25));
            }
        }
        assert_eq!(model(2, 1, 1, 0).param_count(), 2);
        assert_eq!(model(5, 3, 4, 0).param_count(), 3 * 4 * 5);
        assert_eq!(model(4, 2, 2, 9).randomized(1.0), model(4, 2, 2, 9).randomized(1.0));
        assert!(ToyModel::init(vec![], names("c", 1), 1, 0).is_err());
        assert!(ToyModel::init(names("t", 2), vec![], 1, 0).is_err());
        assert!(ToyModel::init(names("t", 2), names("c", 1), 0, 0).is_err());
    }

    #[test]
    fn uniform_loss_values() {
        let m = model(4, 1, 2, 0);
        let ex = ToyExample { context: 0, target: vec![1, 3], weight: 1.0 };
        assert!((m.loss(&ex).unwrap() - 2.0 * 4f64.ln()).abs() < 1e-12);
        assert!((m.loss(&ex).unwrap() - 2.772589).abs() < 1e-6);
        let heavy = ToyExample { weight: E, ..ex.clone() };
        assert!((m.loss(&heavy).unwrap() - 7.536678).abs() < 1e-6);
        let bad = ToyExample { target: vec![4], ..ex };
        assert!(m.loss(&bad).is_err());
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn gradient_matches_finite_differences() {
        let mut m = model(5, 2, 3, 11).randomized(2.0);
        let ex = ToyExample { context: 1, target: vec![4, 0, 2], weight: 3.5 };
        let (_, grad) = m.loss_and_grad(&ex).unwrap();
        let h = 1e-5;
        for i in 0..m.param_count() {
            let orig = m.params()[i];
            m.params_mut()[i] = orig + h;
            let up = m.loss(&ex).unwrap();
            m.params_mut()[i] = orig - h;
            let down = m.loss(&ex).unwrap();
            m.params_mut()[i] = orig;
            assert!(((up - down) / (2.0 * h) - grad[i]).abs() < 1e-6, "param {i}");
        }
    }

    #[test]
    fn memorizes_single_example() {
        let m = model(6, 1, 4, 3);
        let ex = ToyExample { context: 0, target: vec![5, 2, 2, 0], weight: 1.0 };
        let trained =
            train(m, std::slice::from_ref(&ex), &TrainConfig { lr: 0.5, epochs: 50, batch_size: 1, seed: 3 }).unwrap();
        assert_eq!(trained.generate(0, Decode::Argmax).unwrap(), ex.target);
        for t in 0..4 {
            let sum: f64 = trained.probs(0, t).unwrap().iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn train_validation() {
        let m = model(3, 1, 1, 0);
        let ex = [ToyExample { context: 0, target: vec![1], weight: 1.0 }];
        assert!(train(m.clone(), &ex, &TrainConfig { lr: 0.0, ..TrainConfig::default() }).is_err());
        assert!(train(m.clone(), &ex, &TrainConfig { epochs: 0, ..TrainConfig::default() }).is_err());
        let mut exploding = m.clone();
        exploding.params_mut()[0] = f64::INFINITY;
        let err = train(exploding, &ex, &TrainConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Training(_)), "{err}");
    }

    #[test]
    fn decoding_modes() {
        let mut m = model(3, 1, 2, 0);
        m.params_mut().copy_from_slice(&[0.0, 50.0, 0.0, 50.0, 0.0, 0.0]);
        assert_eq!(m.generate(0, Decode::Argmax).unwrap(), [1, 0]);
        assert_eq!(m.generate(0, Decode::Beam(3)).unwrap(), [1, 0]);
        // ties go to the lowest id
        let flat = model(3, 1, 2, 0);
        assert_eq!(flat.generate(0, Decode::Argmax).unwrap(), [0, 0]);
        assert_eq!(flat.generate(0, Decode::Beam(4)).unwrap(), [0, 0]);
        assert!(flat.generate(1, Decode::Argmax).is_err());
        assert!(flat.generate(0, Decode::Beam(0)).is_err());
    }

    #[test]
    fn beam_one_is_argmax() {
        for seed in 0..20 {
            let m = model(6, 2, 4, seed).randomized(3.0);
            for c in 0..2 {
                assert_eq!(m.generate(c, Decode::Beam(1)).unwrap(), m.generate(c, Decode::Argmax).unwrap());
            }
        }
    }

    #[test]
    fn alignment_examples() {
        let corpus = ToyCorpus::conflict(CONFLICT_CORPUS_SEED);
        let mut a = corpus.model(0).unwrap();
        let mut b = corpus.model(0).unwrap();
        for p in &corpus.probes {
            for t in 0..corpus.max_len {
                let range = a.slot(p.context, t);
                a.params_mut()[range.start + p.style_a[t]] = 10.0;
                b.params_mut()[range.start + p.style_b[t]] = 10.0;
            }
        }
        assert_eq!(alignment_rate(&a, &corpus.probes).unwrap(), 1.0);
        assert_eq!(alignment_rate(&b, &corpus.probes).unwrap(), 0.0);
        let half = corpus.probes.len() / 2;
        let mut mixed = b.clone();
        for p in &corpus.probes[..half] {
            for t in 0..corpus.max_len {
                let range = mixed.slot(p.context, t);
                mixed.params_mut()[range.start + p.style_a[t]] = 20.0;
            }
        }
        assert_eq!(alignment_rate(&mixed, &corpus.probes).unwrap(), half as f64 / corpus.probes.len() as f64);
    }

    #[test]
    fn conflict_corpus_shape() {
        let corpus = ToyCorpus::conflict(CONFLICT_CORPUS_SEED);
        assert_eq!(corpus, ToyCorpus::conflict(CONFLICT_CORPUS_SEED));
        assert_eq!(corpus.examples.len(), 4 * CONFLICT_CONTEXTS);
        let heavy = corpus.examples.iter().filter(|e| (e.weight - 2f64.exp()).abs() < 1e-15).count();
        assert_eq!(heavy, CONFLICT_CONTEXTS);
        for p in &corpus.probes {
            assert!(p.style_a.iter().zip(&p.style_b).all(|(a, b)| a != b));
        }
    }

    #[test]
    fn corpus_from_sequences() {
        let rec = |c: &str, toks: &[&str], w: f64| (c.to_string(), toks.iter().map(|s| s.to_string()).collect(), w);
        let records = [
            rec("x", &["add", "test"], 7.0),
            rec("x", &["nit"], 3.0),
            rec("x", &["nit"], 3.0),
            rec("x", &["typo", "here", "again"], 3.0),
            rec("y", &["same"], 3.0),
        ];
        let corpus = ToyCorpus::from_sequences(&records, 2).unwrap();
        assert_eq!(corpus.vocab[0], PAD);
        assert_eq!(corpus.examples[1].target, [corpus.vocab.iter().position(|v| v == "nit").unwrap(), 0]);
        assert_eq!(corpus.examples[3].target.len(), 2);
        assert_eq!(corpus.probes.len(), 1);
        assert_eq!(corpus.probes[0].style_a, corpus.examples[0].target);
        assert_eq!(corpus.probes[0].style_b, corpus.examples[1].target);
        assert!(ToyCorpus::from_sequences(&[], 2).is_err());
    }
}
