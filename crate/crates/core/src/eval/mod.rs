// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: Copyright The semiadd Authors

//! Hold-out evaluation: seeded train/test split, accuracy with per-feature
//! ablation, learning curves over nested training sets and latency timing.

mod corpus;
mod synth;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::annotate::Lexicon;
use crate::cbr::{Case, CaseBase, CbrError};
use crate::features::{AggregateAction, FeatureError};
use crate::similarity::{FeatureWeights, SimilarityError};

pub use corpus::{Corpus, CorpusItem, LabelRecord};
pub use synth::{generate_synthetic_corpus, SynthSpec};

/// Suggestions run before timing starts in [`bench`].
pub const BENCH_WARMUP: usize = 3;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("split ratio must lie strictly between 0 and 1, got {0}")]
    BadRatio(f64),
    #[error("need at least {needed} cases, got {got}")]
    TooFewCases { needed: usize, got: usize },
    #[error("test set is empty")]
    EmptyTest,
    #[error("test case {0:?} has no expected action")]
    UnlabeledTest(String),
    #[error("training size {size} outside 1..={pool}")]
    BadSize { size: usize, pool: usize },
    #[error("feature mask selects no weighted feature: {0}")]
    Weights(#[from] SimilarityError),
    #[error("bad feature mask {0:?}")]
    BadMask(String),
    #[error(transparent)]
    Cbr(#[from] CbrError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error("corpus: {0}")]
    Corpus(String),
}

/// Which of the three features take part in similarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FeatureMask {
    pub concepts: bool,
    pub association: bool,
    pub cov: bool,
}

impl FeatureMask {
    pub const ALL: FeatureMask = FeatureMask {
        concepts: true,
        association: true,
        cov: true,
    };
    pub const CONCEPTS: FeatureMask = FeatureMask {
        concepts: true,
        association: false,
        cov: false,
    };
    pub const ASSOCIATION: FeatureMask = FeatureMask {
        concepts: false,
        association: true,
        cov: false,
    };
    pub const COV: FeatureMask = FeatureMask {
        concepts: false,
        association: false,
        cov: true,
    };

    /// Masks used for the ablation rows of a report.
    pub const ABLATIONS: [FeatureMask; 4] = [
        FeatureMask::CONCEPTS,
        FeatureMask::ASSOCIATION,
        FeatureMask::COV,
        FeatureMask::ALL,
    ];

    /// Zeroes the weights of masked-out features.
    pub fn apply(&self, w: FeatureWeights) -> Result<FeatureWeights, SimilarityError> {
        let keep = |on: bool, x: f64| if on { x } else { 0.0 };
        FeatureWeights::new(
            keep(self.concepts, w.concepts()),
            keep(self.association, w.association()),
            keep(self.cov, w.cov()),
        )
    }
}

impl fmt::Display for FeatureMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == FeatureMask::ALL {
            return f.write_str("F1+F2+F3");
        }
        let parts: Vec<&str> = [(self.concepts, "F1"), (self.association, "F2"), (self.cov, "F3")]
            .into_iter()
            .filter_map(|(on, name)| on.then_some(name))
            .collect();
        if parts.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&parts.join("+"))
        }
    }
}

impl FromStr for FeatureMask {
    type Err = EvalError;

    /// Accepts `all` or a list of `F1`, `F2`, `F3` separated by `,` or `+`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().eq_ignore_ascii_case("all") {
            return Ok(FeatureMask::ALL);
        }
        let mut mask = FeatureMask {
            concepts: false,
            association: false,
            cov: false,
        };
        for part in s.split([',', '+']).map(str::trim) {
            match part.to_ascii_uppercase().as_str() {
                "F1" => mask.concepts = true,
                "F2" => mask.association = true,
                "F3" => mask.cov = true,
                _ => return Err(EvalError::BadMask(s.to_string())),
            }
        }
        Ok(mask)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub k: usize,
    pub mask: FeatureMask,
    pub seed: Option<u64>,
    pub accuracy: f64,
    /// `confusion[expected][predicted]`, indexed by [`AggregateAction::index`].
    pub confusion: [[usize; 3]; 3],
    pub ablation: Vec<(FeatureMask, f64)>,
}

impl EvalReport {
    pub fn test_size(&self) -> usize {
        self.confusion.iter().flatten().sum()
    }
}

/// Seeded shuffle, then the first `round(ratio * n)` items train. The count is
/// rounded half up and clamped so neither side is empty.
pub fn split<T: Clone>(items: &[T], ratio: f64, seed: u64) -> Result<(Vec<T>, Vec<T>), EvalError> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(EvalError::BadRatio(ratio));
    }
    let n = items.len();
    if n < 2 {
        return Err(EvalError::TooFewCases { needed: 2, got: n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let n_train = ((ratio * n as f64 + 0.5).floor() as usize).clamp(1, n - 1);
    let train = order[..n_train].iter().map(|&i| items[i].clone()).collect();
    let test = order[n_train..].iter().map(|&i| items[i].clone()).collect();
    Ok((train, test))
}

fn predictions(
    base: &CaseBase,
    test: &[Case],
    k: usize,
    mask: FeatureMask,
) -> Result<[[usize; 3]; 3], EvalError> {
    let mut masked = base.clone();
    masked.set_weights(mask.apply(base.weights())?);
    let mut confusion = [[0usize; 3]; 3];
    for case in test {
        let expected = case
            .action
            .ok_or_else(|| EvalError::UnlabeledTest(case.case_id.clone()))?;
        let got = masked.suggest_features(case.features.clone(), k)?.action;
        confusion[expected.index()][got.index()] += 1;
    }
    Ok(confusion)
}

fn accuracy(confusion: &[[usize; 3]; 3]) -> f64 {
    let total: usize = confusion.iter().flatten().sum();
    let hits: usize = (0..3).map(|i| confusion[i][i]).sum();
    hits as f64 / total as f64
}

/// Accuracy of the case base on `test` with only the masked features weighted,
/// plus the accuracy of each standard ablation at the same `k`.
pub fn evaluate(
    base: &CaseBase,
    test: &[Case],
    k: usize,
    mask: FeatureMask,
) -> Result<EvalReport, EvalError> {
    if test.is_empty() {
        return Err(EvalError::EmptyTest);
    }
    if base.is_empty() {
        return Err(CbrError::EmptyBase.into());
    }
    let confusion = predictions(base, test, k, mask)?;
    let mut ablation = Vec::with_capacity(FeatureMask::ABLATIONS.len());
    for m in FeatureMask::ABLATIONS {
        let acc = if m == mask {
            accuracy(&confusion)
        } else {
            match predictions(base, test, k, m) {
                Ok(c) => accuracy(&c),
                // the base gives this subset zero weight
                Err(EvalError::Weights(_)) => continue,
                Err(e) => return Err(e),
            }
        };
        ablation.push((m, acc));
    }
    Ok(EvalReport {
        k,
        mask,
        seed: None,
        accuracy: accuracy(&confusion),
        confusion,
        ablation,
    })
}

/// Split `cases`, build a base from the training side and evaluate on the rest.
pub fn run_protocol(
    cases: &[Case],
    ratio: f64,
    seed: u64,
    k: usize,
    mask: FeatureMask,
    weights: FeatureWeights,
) -> Result<EvalReport, EvalError> {
    let (train, test) = split(cases, ratio, seed)?;
    let base = CaseBase::from_cases(weights, train)?;
    let mut report = evaluate(&base, &test, k, mask)?;
    report.seed = Some(seed);
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub size: usize,
    pub accuracy: f64,
}

/// Accuracy against one fixed test set as the training set grows. Training
/// sets are prefixes of the shuffled training side, so each contains the
/// smaller ones.
pub fn learning_curve(
    cases: &[Case],
    sizes: &[usize],
    ratio: f64,
    seed: u64,
    k: usize,
    weights: FeatureWeights,
) -> Result<Vec<CurvePoint>, EvalError> {
    let (train, test) = split(cases, ratio, seed)?;
    for &size in sizes {
        if size == 0 || size > train.len() {
            return Err(EvalError::BadSize {
                size,
                pool: train.len(),
            });
        }
    }
    sizes
        .iter()
        .map(|&size| {
            let base = CaseBase::from_cases(weights, train[..size].iter().cloned())?;
            let confusion = predictions(&base, &test, k, FeatureMask::ALL)?;
            Ok(CurvePoint {
                size,
                accuracy: accuracy(&confusion),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimingReport {
    /// Feature extraction for every known case, in milliseconds.
    pub feature_extraction_total: f64,
    pub per_suggestion_mean: f64,
    pub per_suggestion_min: f64,
    pub per_suggestion_max: f64,
    pub suggestions: usize,
    pub warmup: usize,
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Times feature extraction over `known` and then one full suggestion
/// (extraction + retrieval + vote) per item of `queries`. The first
/// [`BENCH_WARMUP`] queries are run once untimed beforehand.
pub fn bench(
    known: &[CorpusItem],
    queries: &[CorpusItem],
    k: usize,
    lexicon: &Lexicon,
    weights: FeatureWeights,
) -> Result<TimingReport, EvalError> {
    if queries.is_empty() {
        return Err(EvalError::EmptyTest);
    }
    let start = Instant::now();
    let cases = known
        .iter()
        .map(|item| item.to_case(lexicon))
        .collect::<Result<Vec<_>, _>>()?;
    let feature_extraction_total = millis(start);
    let base = CaseBase::from_cases(weights, cases)?;

    for q in queries.iter().take(BENCH_WARMUP) {
        base.suggest(&q.table, &q.category, &q.measure, lexicon, k)?;
    }
    let mut times = Vec::with_capacity(queries.len());
    for q in queries {
        let start = Instant::now();
        let s = base.suggest(&q.table, &q.category, &q.measure, lexicon, k)?;
        times.push(millis(start));
        std::hint::black_box(s);
    }
    let min = times.iter().copied().fold(f64::INFINITY, f64::min);
    let max = times.iter().copied().fold(0.0, f64::max);
    let mean = (times.iter().sum::<f64>() / times.len() as f64).clamp(min, max);
    Ok(TimingReport {
        feature_extraction_total,
        per_suggestion_mean: mean,
        per_suggestion_min: min,
        per_suggestion_max: max,
        suggestions: times.len(),
        warmup: BENCH_WARMUP.min(queries.len()),
    })
}

pub fn action_counts(cases: &[Case]) -> [usize; 3] {
    let mut counts = [0; 3];
    for a in cases.iter().filter_map(|c| c.action) {
        counts[a.index()] += 1;
    }
    counts
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "accuracy {:.4} ({} test cases, k={}, features {}{})",
            self.accuracy,
            self.test_size(),
            self.k,
            self.mask,
            self.seed.map(|s| format!(", seed {s}")).unwrap_or_default()
        )?;
        writeln!(f, "{:<14}{:>10}{:>13}{:>8}", "expected", "average", "last-period", "sum")?;
        for a in AggregateAction::ALL {
            let row = self.confusion[a.index()];
            writeln!(f, "{:<14}{:>10}{:>13}{:>8}", a.as_str(), row[0], row[1], row[2])?;
        }
        writeln!(f, "ablation")?;
        for (mask, acc) in &self.ablation {
            writeln!(f, "  {:<10}{:.4}", mask.to_string(), acc)?;
        }
        Ok(())
    }
}
