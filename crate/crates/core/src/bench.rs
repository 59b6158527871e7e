//! Evaluation harness: gold and anti-gold sets, per-language precision,
//! recall and F1, confusion matrices and mean identification time.

use std::collections::{BTreeSet, HashMap};
use std::convert::Infallible;
use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::Mode;
use crate::decision::{DecisionError, Engine, LanguagePredictor, WordChecker};
use crate::lang::LanguageCode;
use crate::ngram::parse_labelled_tsv;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("gold set `{0}` is empty")]
    EmptyGold(String),
    #[error("anti-gold set for `{0}` would be empty: the batch has no other language")]
    EmptyAntiGold(LanguageCode),
    #[error("{name}: {message}")]
    Parse { name: String, message: String },
    #[error("invalid grouping `{0}`: expected `code=group[,code=group...]`")]
    Grouping(String),
}

/// Labelled evaluation sentences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldSet {
    pub name: String,
    pub items: Vec<(String, LanguageCode)>,
}

impl GoldSet {
    pub fn new(
        name: impl Into<String>,
        items: Vec<(String, LanguageCode)>,
    ) -> Result<Self, BenchError> {
        let name = name.into();
        if items.is_empty() {
            return Err(BenchError::EmptyGold(name));
        }
        Ok(GoldSet { name, items })
    }

    /// Parses `label<TAB>sentence` lines.
    pub fn from_tsv(name: impl Into<String>, text: &str) -> Result<Self, BenchError> {
        let name = name.into();
        let items = parse_labelled_tsv(text).map_err(|message| BenchError::Parse {
            name: name.clone(),
            message,
        })?;
        Self::new(name, items)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn labels(&self) -> BTreeSet<&LanguageCode> {
        self.items.iter().map(|(_, l)| l).collect()
    }

    /// Concatenation of several sets.
    pub fn concat(name: impl Into<String>, sets: &[GoldSet]) -> Result<Self, BenchError> {
        let items = sets.iter().flat_map(|s| s.items.iter().cloned()).collect();
        Self::new(name, items)
    }
}

/// Every sentence in the batch not labelled `target`, labels preserved.
pub fn build_anti_gold(batch: &[GoldSet], target: &LanguageCode) -> Result<GoldSet, BenchError> {
    let items: Vec<_> = batch
        .iter()
        .flat_map(|set| set.items.iter())
        .filter(|(_, label)| label != target)
        .cloned()
        .collect();
    if items.is_empty() {
        return Err(BenchError::EmptyAntiGold(target.clone()));
    }
    Ok(GoldSet {
        name: format!("anti-{target}"),
        items,
    })
}

/// Maps individual languages onto a group label, e.g. `hr -> hbs`.
pub type Grouping = HashMap<LanguageCode, LanguageCode>;

/// Parses `hr=hbs,sr=hbs,bs=hbs`.
pub fn parse_grouping(spec: &str) -> Result<Grouping, BenchError> {
    let err = || BenchError::Grouping(spec.to_string());
    let mut grouping = Grouping::new();
    for pair in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (from, to) = pair.split_once('=').ok_or_else(err)?;
        let from = LanguageCode::new(from.trim()).map_err(|_| err())?;
        let to = LanguageCode::new(to.trim()).map_err(|_| err())?;
        grouping.insert(from, to);
    }
    Ok(grouping)
}

fn group(label: &LanguageCode, grouping: Option<&Grouping>) -> LanguageCode {
    grouping.and_then(|g| g.get(label)).unwrap_or(label).clone()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassScores {
    pub language: LanguageCode,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Gold sentences with this label.
    pub support: u64,
}

/// Gold label (rows) by predicted label (columns).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub rows: Vec<LanguageCode>,
    /// The row labels first, then labels only ever predicted.
    pub columns: Vec<LanguageCode>,
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn get(&self, gold: &LanguageCode, predicted: &LanguageCode) -> u64 {
        let r = self.rows.iter().position(|l| l == gold);
        let c = self.columns.iter().position(|l| l == predicted);
        match (r, c) {
            (Some(r), Some(c)) => self.counts[r][c],
            _ => 0,
        }
    }

    pub fn row_sum(&self, gold: &LanguageCode) -> u64 {
        self.rows
            .iter()
            .position(|l| l == gold)
            .map_or(0, |r| self.counts[r].iter().sum())
    }

    pub fn column_sum(&self, predicted: &LanguageCode) -> u64 {
        self.columns
            .iter()
            .position(|l| l == predicted)
            .map_or(0, |c| self.counts.iter().map(|row| row[c]).sum())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub name: String,
    /// One row per gold label, sorted by code.
    pub per_language: Vec<ClassScores>,
    pub confusion: ConfusionMatrix,
    /// Seconds per sentence spent inside the identifier.
    pub mean_runtime: f64,
    pub total_sentences: u64,
}

impl EvalReport {
    /// Scores predictions against gold labels (grouping already applied).
    pub fn from_predictions(
        name: impl Into<String>,
        gold: &[LanguageCode],
        predicted: &[LanguageCode],
        mean_runtime: f64,
    ) -> Self {
        assert_eq!(gold.len(), predicted.len(), "one prediction per gold label");
        let rows: Vec<LanguageCode> = gold
            .iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .cloned()
            .collect();
        let extra: BTreeSet<&LanguageCode> =
            predicted.iter().filter(|p| !rows.contains(p)).collect();
        let columns: Vec<LanguageCode> = rows
            .iter()
            .cloned()
            .chain(extra.into_iter().cloned())
            .collect();
        let col_index: HashMap<&LanguageCode, usize> =
            columns.iter().enumerate().map(|(i, l)| (l, i)).collect();
        let mut counts = vec![vec![0u64; columns.len()]; rows.len()];
        for (g, p) in gold.iter().zip(predicted) {
            counts[col_index[g]][col_index[p]] += 1;
        }
        let confusion = ConfusionMatrix {
            rows,
            columns,
            counts,
        };
        let per_language = confusion
            .rows
            .iter()
            .map(|label| {
                let tp = confusion.get(label, label);
                let support = confusion.row_sum(label);
                let predicted = confusion.column_sum(label);
                let ratio = |num: u64, den: u64| {
                    if den == 0 {
                        0.0
                    } else {
                        num as f64 / den as f64
                    }
                };
                ClassScores {
                    language: label.clone(),
                    precision: ratio(tp, predicted),
                    recall: ratio(tp, support),
                    f1: ratio(2 * tp, predicted + support),
                    support,
                }
            })
            .collect();
        EvalReport {
            name: name.into(),
            per_language,
            confusion,
            mean_runtime,
            total_sentences: gold.len() as u64,
        }
    }

    pub fn scores(&self, lang: &LanguageCode) -> Option<&ClassScores> {
        self.per_language.iter().find(|s| &s.language == lang)
    }

    pub fn f1(&self, lang: &LanguageCode) -> Option<f64> {
        self.scores(lang).map(|s| s.f1)
    }

    /// Unweighted mean of the per-language precision, recall and F1.
    pub fn macro_average(&self) -> (f64, f64, f64) {
        let n = self.per_language.len().max(1) as f64;
        let sum = |f: fn(&ClassScores) -> f64| self.per_language.iter().map(f).sum::<f64>() / n;
        (sum(|s| s.precision), sum(|s| s.recall), sum(|s| s.f1))
    }

    /// TSV rendering: a header line, one score row per language, a macro
    /// average row, the confusion matrix and the totals.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let name = self.name.replace(['\t', '\n', '\r'], " ");
        writeln!(out, "report\t{name}").unwrap();
        out.push_str("language\tprecision\trecall\tf1\tsupport\n");
        for s in &self.per_language {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                s.language, s.precision, s.recall, s.f1, s.support
            )
            .unwrap();
        }
        let (p, r, f) = self.macro_average();
        writeln!(out, "macro\t{p}\t{r}\t{f}\t{}", self.total_sentences).unwrap();
        out.push_str("confusion");
        for c in &self.confusion.columns {
            write!(out, "\t{c}").unwrap();
        }
        out.push('\n');
        for (label, row) in self.confusion.rows.iter().zip(&self.confusion.counts) {
            out.push_str(label.as_str());
            for n in row {
                write!(out, "\t{n}").unwrap();
            }
            out.push('\n');
        }
        writeln!(out, "total_sentences\t{}", self.total_sentences).unwrap();
        writeln!(out, "mean_runtime_seconds\t{}", self.mean_runtime).unwrap();
        out
    }

    /// Parses the output of [`EvalReport::to_tsv`]. The macro row is
    /// recomputed, not read.
    pub fn from_tsv(text: &str) -> Result<Self, String> {
        let mut lines = text.lines().enumerate();
        let mut next = |what: &str| {
            lines
                .next()
                .map(|(i, l)| (i + 1, l))
                .ok_or_else(|| format!("unexpected end of report, expected {what}"))
        };
        let bad = |n: usize, msg: &str| format!("line {n}: {msg}");
        let code = |n: usize, s: &str| LanguageCode::new(s).map_err(|e| bad(n, &e.to_string()));
        let num = |n: usize, s: &str| s.parse::<f64>().map_err(|_| bad(n, "bad number"));
        let count = |n: usize, s: &str| s.parse::<u64>().map_err(|_| bad(n, "bad count"));

        let (n, line) = next("report header")?;
        let name = line
            .strip_prefix("report\t")
            .ok_or_else(|| bad(n, "expected `report`"))?;
        let (n, line) = next("score header")?;
        if line != "language\tprecision\trecall\tf1\tsupport" {
            return Err(bad(n, "expected score header"));
        }
        let mut per_language = Vec::new();
        loop {
            let (n, line) = next("scores")?;
            let f: Vec<&str> = line.split('\t').collect();
            if f[0] == "macro" {
                break;
            }
            if f.len() != 5 {
                return Err(bad(n, "expected 5 fields"));
            }
            per_language.push(ClassScores {
                language: code(n, f[0])?,
                precision: num(n, f[1])?,
                recall: num(n, f[2])?,
                f1: num(n, f[3])?,
                support: count(n, f[4])?,
            });
        }
        let (n, line) = next("confusion header")?;
        let columns = line
            .strip_prefix("confusion")
            .ok_or_else(|| bad(n, "expected `confusion`"))?
            .split('\t')
            .skip(1)
            .map(|c| code(n, c))
            .collect::<Result<Vec<_>, _>>()?;
        let mut rows = Vec::new();
        let mut counts = Vec::new();
        let total_sentences = loop {
            let (n, line) = next("confusion rows")?;
            let f: Vec<&str> = line.split('\t').collect();
            if f[0] == "total_sentences" && f.len() == 2 {
                break count(n, f[1])?;
            }
            if f.len() != columns.len() + 1 {
                return Err(bad(n, "confusion row width mismatch"));
            }
            rows.push(code(n, f[0])?);
            counts.push(
                f[1..]
                    .iter()
                    .map(|c| count(n, c))
                    .collect::<Result<Vec<_>, _>>()?,
            );
        };
        let (n, line) = next("runtime")?;
        let mean_runtime = num(
            n,
            line.strip_prefix("mean_runtime_seconds\t")
                .ok_or_else(|| bad(n, "expected `mean_runtime_seconds`"))?,
        )?;
        Ok(EvalReport {
            name: name.to_string(),
            per_language,
            confusion: ConfusionMatrix {
                rows,
                columns,
                counts,
            },
            mean_runtime,
            total_sentences,
        })
    }
}

/// Runs `identifier` over `gold` and scores it.
///
/// The identifier sees every sentence twice: an untimed warm-up pass, then
/// the timed pass whose predictions are scored. `grouping` is applied to
/// gold labels and predictions alike.
pub fn evaluate<F>(mut identifier: F, gold: &GoldSet, grouping: Option<&Grouping>) -> EvalReport
where
    F: FnMut(&str) -> LanguageCode,
{
    match try_evaluate(|s| Ok::<_, Infallible>(identifier(s)), gold, grouping) {
        Ok(report) => report,
        Err(never) => match never {},
    }
}

/// [`evaluate`] for identifiers that can fail.
pub fn try_evaluate<F, E>(
    mut identifier: F,
    gold: &GoldSet,
    grouping: Option<&Grouping>,
) -> Result<EvalReport, E>
where
    F: FnMut(&str) -> Result<LanguageCode, E>,
{
    for (sentence, _) in &gold.items {
        identifier(sentence)?;
    }
    let mut predicted = Vec::with_capacity(gold.len());
    let mut elapsed = 0.0;
    for (sentence, _) in &gold.items {
        let start = Instant::now();
        let label = identifier(sentence)?;
        elapsed += start.elapsed().as_secs_f64();
        predicted.push(group(&label, grouping));
    }
    let labels: Vec<LanguageCode> = gold.items.iter().map(|(_, l)| group(l, grouping)).collect();
    Ok(EvalReport::from_predictions(
        gold.name.clone(),
        &labels,
        &predicted,
        elapsed / gold.len().max(1) as f64,
    ))
}

/// Evaluates the engine on `gold` once per error threshold.
pub fn sweep_threshold<P, C>(
    engine: &Engine<P, C>,
    target: &LanguageCode,
    mode: Mode,
    gold: &GoldSet,
    thresholds: &[f64],
    grouping: Option<&Grouping>,
) -> Result<Vec<(f64, EvalReport)>, DecisionError>
where
    P: LanguagePredictor + ?Sized,
    C: WordChecker + ?Sized,
{
    engine.validate_target(target)?;
    thresholds
        .iter()
        .map(|&t| {
            let engine = engine.with_error_threshold(t);
            let report = try_evaluate(
                |s| engine.get_language(target, s, mode).map(|v| v.language),
                gold,
                grouping,
            )?;
            Ok((t, report))
        })
        .collect()
}
