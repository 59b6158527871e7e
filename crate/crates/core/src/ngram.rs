//! Hashed character n-gram linear classifier.
//!
//! Text is padded with `<` and `>`, every code-point n-gram of length
//! `n_min..=n_max` is hashed into one of `buckets` rows of an embedding table,
//! the rows are averaged, and a linear layer plus softmax scores the labels.
//! Training is plain SGD on cross-entropy with a linearly decaying learning
//! rate and is fully deterministic for a given seed.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::lang::LanguageCode;

pub const MAGIC: &[u8; 4] = b"NGLM";
pub const FORMAT_VERSION: u32 = 1;
pub const MAX_NGRAM: usize = 8;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("cannot access {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("not a model file (bad magic {0:?})")]
    BadMagic([u8; 4]),
    #[error("unsupported model format version {0} (expected {FORMAT_VERSION})")]
    UnsupportedVersion(u32),
    #[error("model file is truncated")]
    Truncated,
    #[error("invalid model: {0}")]
    Invalid(String),
    #[error("training corpus is empty")]
    EmptyCorpus,
    #[error("training corpus needs at least 2 distinct labels, found {0}")]
    TooFewLabels(usize),
}

/// FNV-1a (64-bit) over `bytes`, with `seed` folded into the offset basis.
pub fn fnv1a64(seed: u64, bytes: &[u8]) -> u64 {
    let mut h = FNV_OFFSET ^ seed;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

/// Bucket indices of all boundary-padded code-point n-grams of `text`.
///
/// Empty text yields an empty bag.
pub fn featurize(text: &str, n_min: usize, n_max: usize, buckets: u32, seed: u64) -> Vec<u32> {
    if text.is_empty() {
        return Vec::new();
    }
    let mut padded = String::with_capacity(text.len() + 2);
    padded.push('<');
    padded.push_str(text);
    padded.push('>');
    // byte offset of every code point, plus the end
    let bounds: Vec<usize> = padded
        .char_indices()
        .map(|(i, _)| i)
        .chain(std::iter::once(padded.len()))
        .collect();
    let chars = bounds.len() - 1;
    let bytes = padded.as_bytes();
    let mut bag = Vec::new();
    for n in n_min..=n_max.min(chars) {
        for start in 0..=chars - n {
            let gram = &bytes[bounds[start]..bounds[start + n]];
            bag.push((fnv1a64(seed, gram) % u64::from(buckets)) as u32);
        }
    }
    bag
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainParams {
    pub n_min: usize,
    pub n_max: usize,
    pub buckets: u32,
    pub dim: usize,
    pub lr: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for TrainParams {
    fn default() -> Self {
        TrainParams {
            n_min: 1,
            n_max: 4,
            buckets: 1 << 18,
            dim: 16,
            lr: 0.1,
            epochs: 5,
            seed: 0,
        }
    }
}

impl TrainParams {
    fn validate(&self) -> Result<(), ModelError> {
        if !(1 <= self.n_min && self.n_min <= self.n_max && self.n_max <= MAX_NGRAM) {
            return Err(ModelError::Invalid(format!(
                "n-gram range {}..={} must satisfy 1 <= n_min <= n_max <= {MAX_NGRAM}",
                self.n_min, self.n_max
            )));
        }
        if self.buckets == 0 || self.dim == 0 {
            return Err(ModelError::Invalid(
                "buckets and dim must be at least 1".into(),
            ));
        }
        if !(self.lr.is_finite() && self.lr > 0.0) {
            return Err(ModelError::Invalid(format!(
                "learning rate {} must be positive",
                self.lr
            )));
        }
        Ok(())
    }
}

/// Softmax output of [`NgramModel::predict`].
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub language: LanguageCode,
    pub confidence: f64,
    /// One probability per model label, in label order.
    pub scores: Vec<(LanguageCode, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NgramModel {
    labels: Vec<LanguageCode>,
    n_min: usize,
    n_max: usize,
    buckets: u32,
    dim: usize,
    hash_seed: u64,
    /// `buckets × dim`, row-major.
    input: Vec<f32>,
    /// `labels × dim`, row-major.
    output: Vec<f32>,
}

/// Forward/backward quantities for one example.
struct Step {
    loss: f64,
    hidden: Vec<f64>,
    /// d loss / d logits
    dlogits: Vec<f64>,
    /// d loss / d hidden
    dhidden: Vec<f64>,
}

/// Dense gradient of the per-example loss, laid out like the weights.
#[derive(Debug, Clone)]
pub struct Gradient {
    pub input: Vec<f64>,
    pub output: Vec<f64>,
}

impl NgramModel {
    /// Builds a model from explicit weights, validating every invariant.
    #[allow(clippy::too_many_arguments)] // mirrors the file header field by field
    pub fn from_parts(
        labels: Vec<LanguageCode>,
        n_min: usize,
        n_max: usize,
        buckets: u32,
        dim: usize,
        hash_seed: u64,
        input: Vec<f32>,
        output: Vec<f32>,
    ) -> Result<Self, ModelError> {
        if !(1 <= n_min && n_min <= n_max && n_max <= MAX_NGRAM) {
            return Err(ModelError::Invalid(format!(
                "bad n-gram range {n_min}..={n_max}"
            )));
        }
        if buckets == 0 || dim == 0 {
            return Err(ModelError::Invalid(
                "buckets and dim must be at least 1".into(),
            ));
        }
        if labels.len() < 2 {
            return Err(ModelError::Invalid(format!(
                "{} labels, need at least 2",
                labels.len()
            )));
        }
        if input.len() != buckets as usize * dim || output.len() != labels.len() * dim {
            return Err(ModelError::Invalid("weight matrix shape mismatch".into()));
        }
        if !input.iter().chain(&output).all(|w| w.is_finite()) {
            return Err(ModelError::Invalid("non-finite weight".into()));
        }
        Ok(NgramModel {
            labels,
            n_min,
            n_max,
            buckets,
            dim,
            hash_seed,
            input,
            output,
        })
    }

    pub fn labels(&self) -> &[LanguageCode] {
        &self.labels
    }

    pub fn ngram_range(&self) -> (usize, usize) {
        (self.n_min, self.n_max)
    }

    pub fn buckets(&self) -> u32 {
        self.buckets
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hash_seed(&self) -> u64 {
        self.hash_seed
    }

    pub fn input_weights(&self) -> &[f32] {
        &self.input
    }

    pub fn output_weights(&self) -> &[f32] {
        &self.output
    }

    pub fn featurize(&self, text: &str) -> Vec<u32> {
        featurize(text, self.n_min, self.n_max, self.buckets, self.hash_seed)
    }

    fn hidden(&self, bag: &[u32]) -> Vec<f64> {
        let mut hidden = vec![0.0f64; self.dim];
        for &idx in bag {
            let row = &self.input[idx as usize * self.dim..][..self.dim];
            for (h, &w) in hidden.iter_mut().zip(row) {
                *h += f64::from(w);
            }
        }
        let inv = 1.0 / bag.len() as f64;
        hidden.iter_mut().for_each(|h| *h *= inv);
        hidden
    }

    fn probabilities(&self, hidden: &[f64]) -> Vec<f64> {
        let logits: Vec<f64> = self
            .output
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(hidden).map(|(&w, h)| f64::from(w) * h).sum())
            .collect();
        softmax(&logits)
    }

    /// Label probabilities for a bag of bucket indices.
    pub fn scores_for_bag(&self, bag: &[u32]) -> Vec<f64> {
        if bag.is_empty() {
            return vec![1.0 / self.labels.len() as f64; self.labels.len()];
        }
        self.probabilities(&self.hidden(bag))
    }

    /// Scores `text` as given; callers lowercase beforehand when needed.
    pub fn predict(&self, text: &str) -> Prediction {
        let probs = self.scores_for_bag(&self.featurize(text));
        let best = argmax(&probs);
        Prediction {
            language: self.labels[best].clone(),
            confidence: probs[best],
            scores: self.labels.iter().cloned().zip(probs).collect(),
        }
    }

    /// Index of the most probable label; ties go to the earliest label.
    pub fn predict_index(&self, text: &str) -> usize {
        argmax(&self.scores_for_bag(&self.featurize(text)))
    }

    fn step(&self, bag: &[u32], label: usize) -> Step {
        let hidden = self.hidden(bag);
        let probs = self.probabilities(&hidden);
        let loss = -probs[label].max(f64::MIN_POSITIVE).ln();
        let mut dlogits = probs;
        dlogits[label] -= 1.0;
        let mut dhidden = vec![0.0f64; self.dim];
        for (row, &g) in self.output.chunks_exact(self.dim).zip(&dlogits) {
            for (dh, &w) in dhidden.iter_mut().zip(row) {
                *dh += g * f64::from(w);
            }
        }
        Step {
            loss,
            hidden,
            dlogits,
            dhidden,
        }
    }

    /// Cross-entropy of one example and its gradient with respect to every
    /// weight. `bag` must be non-empty.
    pub fn loss_and_gradient(&self, bag: &[u32], label: usize) -> (f64, Gradient) {
        assert!(!bag.is_empty(), "gradient of an empty bag is undefined");
        let step = self.step(bag, label);
        let mut input = vec![0.0; self.input.len()];
        let scale = 1.0 / bag.len() as f64;
        for &idx in bag {
            let row = &mut input[idx as usize * self.dim..][..self.dim];
            for (g, dh) in row.iter_mut().zip(&step.dhidden) {
                *g += dh * scale;
            }
        }
        let mut output = vec![0.0; self.output.len()];
        for (row, &g) in output.chunks_exact_mut(self.dim).zip(&step.dlogits) {
            for (o, h) in row.iter_mut().zip(&step.hidden) {
                *o = g * h;
            }
        }
        (step.loss, Gradient { input, output })
    }

    fn sgd_update(&mut self, bag: &[u32], label: usize, lr: f64) -> f64 {
        let step = self.step(bag, label);
        for (row, &g) in self.output.chunks_exact_mut(self.dim).zip(&step.dlogits) {
            for (w, h) in row.iter_mut().zip(&step.hidden) {
                *w -= (lr * g * h) as f32;
            }
        }
        let scale = lr / bag.len() as f64;
        for &idx in bag {
            let row = &mut self.input[idx as usize * self.dim..][..self.dim];
            for (w, dh) in row.iter_mut().zip(&step.dhidden) {
                *w -= (scale * dh) as f32;
            }
        }
        step.loss
    }

    /// Mean cross-entropy over `corpus`; samples with unknown labels are skipped.
    pub fn mean_loss(&self, corpus: &[(String, LanguageCode)]) -> f64 {
        let mut total = 0.0;
        let mut count = 0usize;
        for (text, label) in corpus {
            let Some(label) = self.labels.iter().position(|l| l == label) else {
                continue;
            };
            let probs = self.scores_for_bag(&self.featurize(text));
            total -= probs[label].max(f64::MIN_POSITIVE).ln();
            count += 1;
        }
        total / count.max(1) as f64
    }

    /// Fraction of `corpus` whose argmax label matches.
    pub fn accuracy(&self, corpus: &[(String, LanguageCode)]) -> f64 {
        let hits = corpus
            .iter()
            .filter(|(text, label)| self.labels[self.predict_index(text)] == *label)
            .count();
        hits as f64 / corpus.len().max(1) as f64
    }

    pub fn save(&self, path: &Path) -> Result<(), ModelError> {
        let io_err = |source| ModelError::Io {
            path: path.to_path_buf(),
            source,
        };
        let mut file = io::BufWriter::new(fs::File::create(path).map_err(io_err)?);
        self.write_to(&mut file).map_err(io_err)?;
        file.flush().map_err(io_err)
    }

    pub fn load(path: &Path) -> Result<Self, ModelError> {
        let bytes = fs::read(path).map_err(|source| ModelError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_bytes(&bytes)
    }

    pub fn write_to<W: Write>(&self, out: &mut W) -> io::Result<()> {
        out.write_all(MAGIC)?;
        for v in [
            FORMAT_VERSION,
            self.n_min as u32,
            self.n_max as u32,
            self.labels.len() as u32,
            self.buckets,
            self.dim as u32,
        ] {
            out.write_all(&v.to_le_bytes())?;
        }
        out.write_all(&self.hash_seed.to_le_bytes())?;
        for label in &self.labels {
            out.write_all(&(label.as_str().len() as u32).to_le_bytes())?;
            out.write_all(label.as_str().as_bytes())?;
        }
        for w in self.input.iter().chain(&self.output) {
            out.write_all(&w.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_to(&mut out)
            .expect("writing to a Vec cannot fail");
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, ModelError> {
        let mut r = bytes;
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)
            .map_err(|_| ModelError::Truncated)?;
        if &magic != MAGIC {
            return Err(ModelError::BadMagic(magic));
        }
        let version = read_u32(&mut r)?;
        if version != FORMAT_VERSION {
            return Err(ModelError::UnsupportedVersion(version));
        }
        let n_min = read_u32(&mut r)? as usize;
        let n_max = read_u32(&mut r)? as usize;
        let label_count = read_u32(&mut r)? as usize;
        let buckets = read_u32(&mut r)?;
        let dim = read_u32(&mut r)? as usize;
        let mut seed = [0u8; 8];
        r.read_exact(&mut seed).map_err(|_| ModelError::Truncated)?;
        let hash_seed = u64::from_le_bytes(seed);

        let mut labels = Vec::new();
        for _ in 0..label_count {
            let len = read_u32(&mut r)? as usize;
            if r.len() < len {
                return Err(ModelError::Truncated);
            }
            let (raw, rest) = r.split_at(len);
            r = rest;
            let text = std::str::from_utf8(raw)
                .map_err(|_| ModelError::Invalid("label is not UTF-8".into()))?;
            labels.push(LanguageCode::new(text).map_err(|e| ModelError::Invalid(e.to_string()))?);
        }

        let weights = (buckets as usize)
            .checked_add(label_count)
            .and_then(|rows| rows.checked_mul(dim))
            .ok_or_else(|| ModelError::Invalid("weight matrix too large".into()))?;
        let expected = weights
            .checked_mul(4)
            .ok_or_else(|| ModelError::Invalid("weight matrix too large".into()))?;
        if r.len() < expected {
            return Err(ModelError::Truncated);
        }
        if r.len() > expected {
            return Err(ModelError::Invalid(format!(
                "{} trailing bytes after weights",
                r.len() - expected
            )));
        }
        let mut floats = r
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]));
        let input: Vec<f32> = floats.by_ref().take(buckets as usize * dim).collect();
        let output: Vec<f32> = floats.collect();
        Self::from_parts(labels, n_min, n_max, buckets, dim, hash_seed, input, output)
    }
}

fn read_u32(r: &mut &[u8]) -> Result<u32, ModelError> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf).map_err(|_| ModelError::Truncated)?;
    Ok(u32::from_le_bytes(buf))
}

/// Numerically stable softmax.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&z| (z - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Result of [`train_with_report`].
#[derive(Debug, Clone)]
pub struct TrainReport {
    pub model: NgramModel,
    /// Full-corpus mean cross-entropy after each epoch.
    pub epoch_losses: Vec<f64>,
    pub accuracy: f64,
}

pub fn train(
    corpus: &[(String, LanguageCode)],
    params: &TrainParams,
) -> Result<NgramModel, ModelError> {
    train_inner(corpus, params, false).map(|r| r.model)
}

/// Trains like [`train`] and also records per-epoch loss and final accuracy.
pub fn train_with_report(
    corpus: &[(String, LanguageCode)],
    params: &TrainParams,
) -> Result<TrainReport, ModelError> {
    train_inner(corpus, params, true)
}

fn train_inner(
    corpus: &[(String, LanguageCode)],
    params: &TrainParams,
    track: bool,
) -> Result<TrainReport, ModelError> {
    params.validate()?;
    if corpus.is_empty() {
        return Err(ModelError::EmptyCorpus);
    }
    let mut labels: Vec<LanguageCode> = corpus.iter().map(|(_, l)| l.clone()).collect();
    labels.sort();
    labels.dedup();
    if labels.len() < 2 {
        return Err(ModelError::TooFewLabels(labels.len()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let bound = 1.0 / params.dim as f32;
    let input: Vec<f32> = (0..params.buckets as usize * params.dim)
        .map(|_| rng.random_range(-bound..bound))
        .collect();
    let output = vec![0.0f32; labels.len() * params.dim];
    let mut model = NgramModel::from_parts(
        labels,
        params.n_min,
        params.n_max,
        params.buckets,
        params.dim,
        params.seed,
        input,
        output,
    )?;

    let examples: Vec<(Vec<u32>, usize)> = corpus
        .iter()
        .filter_map(|(text, label)| {
            let bag = model.featurize(text);
            let idx = model
                .labels
                .binary_search(label)
                .expect("label collected above");
            (!bag.is_empty()).then_some((bag, idx))
        })
        .collect();

    let total_steps = (examples.len() * params.epochs).max(1) as f64;
    let mut order: Vec<usize> = (0..examples.len()).collect();
    let mut step = 0usize;
    let mut epoch_losses = Vec::with_capacity(params.epochs);
    for epoch in 0..params.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let lr = params.lr * (1.0 - step as f64 / total_steps);
            let (bag, label) = &examples[i];
            model.sgd_update(bag, *label, lr);
            step += 1;
        }
        if track {
            let loss = model.mean_loss(corpus);
            log::debug!("epoch {}: loss {loss:.6}", epoch + 1);
            epoch_losses.push(loss);
        }
    }
    if !model
        .input
        .iter()
        .chain(&model.output)
        .all(|w| w.is_finite())
    {
        return Err(ModelError::Invalid(
            "training diverged (non-finite weights)".into(),
        ));
    }
    let accuracy = if track {
        model.accuracy(corpus)
    } else {
        f64::NAN
    };
    Ok(TrainReport {
        model,
        epoch_losses,
        accuracy,
    })
}

/// Reads a `label<TAB>text` corpus or gold file.
pub fn parse_labelled_tsv(text: &str) -> Result<Vec<(String, LanguageCode)>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.is_empty() {
            continue;
        }
        let (label, sentence) = line
            .split_once('\t')
            .ok_or_else(|| format!("line {}: expected `label<TAB>text`", i + 1))?;
        let label = LanguageCode::new(label).map_err(|e| format!("line {}: {e}", i + 1))?;
        out.push((sentence.to_string(), label));
    }
    Ok(out)
}
