// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: Copyright The semiadd Authors

//! Seeded generator of labeled aggregation contexts.
//!
//! Each case gets its own small table with one category column and one
//! measure column. The label fixes the target within-partition CoV band:
//!
//! | label       | target CoV    |
//! |-------------|---------------|
//! | last-period | U(0.02, 0.15) |
//! | average     | U(0.30, 0.65) |
//! | sum         | U(1.30, 2.20) |
//!
//! and the target is jittered by a factor `exp(noise · z)`. Values inside a
//! partition are gamma distributed with that CoV and rounded to cents, so
//! the measured CoV also carries finite-sample noise.
//!
//! Column vocabulary and cardinality come from three archetypes:
//!
//! * monetary measure by attribute, one-to-many: sum or last-period,
//! * plain measure by attribute, many-to-many: average,
//! * count by period, many-to-many: sum or last-period.
//!
//! Concepts and association therefore separate average from the rest but
//! cannot tell sum from last-period; only the CoV can.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use super::corpus::{Corpus, CorpusItem};
use crate::features::AggregateAction;
use crate::table::{Cell, Column, Table};

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub n_cases: usize,
    /// Standard deviation of the log-normal jitter applied to target CoVs.
    pub noise: f64,
    pub seed: u64,
    /// Proportions of average, last-period and sum labels.
    pub mix: [f64; 3],
    /// Inclusive row-count range of each generated table.
    pub rows: (usize, usize),
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            n_cases: 100,
            noise: 0.3,
            seed: 0,
            mix: [1.0 / 3.0; 3],
            rows: (20, 200),
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<(), String> {
        if self.n_cases < 3 {
            return Err(format!("need at least 3 cases, got {}", self.n_cases));
        }
        if self.mix.iter().any(|p| !p.is_finite() || *p < 0.0)
            || (self.mix.iter().sum::<f64>() - 1.0).abs() > 1e-9
        {
            return Err(format!("action mix must be non-negative and sum to 1: {:?}", self.mix));
        }
        if !(self.noise.is_finite() && self.noise >= 0.0) {
            return Err(format!("noise must be non-negative, got {}", self.noise));
        }
        if self.rows.0 < 10 || self.rows.0 > self.rows.1 {
            return Err(format!("bad row range {:?} (minimum 10 rows)", self.rows));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq)]
enum MeasureKind {
    Monetary,
    Count,
    Plain,
}

#[derive(Clone, Copy, PartialEq)]
enum CategoryKind {
    Attribute,
    Temporal,
}

#[derive(Clone, Copy, PartialEq)]
enum Structure {
    OneToMany,
    ManyToMany,
}

/// A typical shape of aggregation context: what the measure is, what it is
/// broken down by and how values pair up.
#[derive(Clone, Copy)]
struct Archetype {
    measure: MeasureKind,
    category: CategoryKind,
    structure: Structure,
}

const fn archetype(measure: MeasureKind, category: CategoryKind, structure: Structure) -> Archetype {
    Archetype {
        measure,
        category,
        structure,
    }
}

// sales by branch, sleeping time by gender, deaths by year
const ARCHETYPES: [Archetype; 3] = [
    archetype(MeasureKind::Monetary, CategoryKind::Attribute, Structure::OneToMany),
    archetype(MeasureKind::Plain, CategoryKind::Attribute, Structure::ManyToMany),
    archetype(MeasureKind::Count, CategoryKind::Temporal, Structure::ManyToMany),
];

struct Priors {
    cov_band: (f64, f64),
    /// Weights over [`ARCHETYPES`].
    archetypes: [f64; 3],
}

fn priors(action: AggregateAction) -> Priors {
    match action {
        AggregateAction::Sum => Priors {
            cov_band: (1.3, 2.2),
            archetypes: [0.55, 0.0, 0.45],
        },
        AggregateAction::Average => Priors {
            cov_band: (0.3, 0.65),
            archetypes: [0.0, 1.0, 0.0],
        },
        AggregateAction::LastPeriod => Priors {
            cov_band: (0.02, 0.15),
            archetypes: [0.45, 0.0, 0.55],
        },
    }
}

// rounding can repeat a value across categories, which would change the
// association type
fn make_distinct(values: &mut [f64]) {
    let mut seen = std::collections::HashSet::new();
    for v in values.iter_mut() {
        while !seen.insert(v.to_bits()) {
            *v = round2(*v + 0.01);
        }
    }
}

fn pick<T: Copy>(rng: &mut impl Rng, options: &[(T, f64)]) -> T {
    let total: f64 = options.iter().map(|(_, w)| w).sum();
    let mut u = rng.random::<f64>() * total;
    for &(value, w) in options {
        if u < w {
            return value;
        }
        u -= w;
    }
    options.iter().rev().find(|(_, w)| *w > 0.0).expect("some weight").0
}

fn measure_header(kind: MeasureKind, rng: &mut impl Rng) -> (&'static str, f64) {
    let (names, scale): (&[&str], f64) = match kind {
        MeasureKind::Monetary => (
            &["Loan Amount (x1000)", "Sales Amount", "Revenue", "Unit Price", "Budget Amount", "Order Cost"],
            1000.0,
        ),
        MeasureKind::Count => (
            &["Number of Deaths", "Total Tickets Purchased", "Total Fully Employed", "Number of Clients"],
            500.0,
        ),
        MeasureKind::Plain => (
            &["Temperature", "Sleeping", "Height", "Weight", "Score", "Hours Worked", "Population", "Inventory Level"],
            20.0,
        ),
    };
    (names[rng.random_range(0..names.len())], scale)
}

fn category_header(kind: CategoryKind, rng: &mut impl Rng) -> &'static str {
    let names: &[&str] = match kind {
        CategoryKind::Attribute => &["Branch", "State", "City", "Gender", "Component", "Region", "Product", "Cause", "Event"],
        CategoryKind::Temporal => &["Year", "Month", "Quarter", "Date"],
    };
    names[rng.random_range(0..names.len())]
}

fn category_value(kind: CategoryKind, header: &str, i: usize) -> Cell {
    match kind {
        CategoryKind::Temporal if header == "Year" => Cell::Number((1990 + i) as f64),
        CategoryKind::Temporal => Cell::Text(format!("P{:04}", i + 1)),
        CategoryKind::Attribute => Cell::Text(format!("{header} {}", i + 1)),
    }
}

fn round2(v: f64) -> f64 {
    (v * 100.0).round() / 100.0
}

/// Gamma draws with mean `mean` and coefficient of variation `cov`.
fn gamma(rng: &mut impl Rng, mean: f64, cov: f64, n: usize) -> Vec<f64> {
    if cov <= 0.0 {
        return vec![round2(mean).max(0.01); n];
    }
    let shape = 1.0 / (cov * cov);
    let dist = Gamma::new(shape, mean / shape).expect("positive gamma parameters");
    (0..n).map(|_| round2(dist.sample(rng)).max(0.01)).collect()
}

fn label_counts(spec: &SynthSpec) -> [usize; 3] {
    let n = spec.n_cases;
    let mut counts = spec.mix.map(|p| (p * n as f64).floor() as usize);
    // hand out the remainder by largest fractional part
    let mut order: Vec<usize> = (0..3).collect();
    order.sort_by(|&a, &b| {
        let fa = spec.mix[a] * n as f64 - counts[a] as f64;
        let fb = spec.mix[b] * n as f64 - counts[b] as f64;
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    let mut left = n - counts.iter().sum::<usize>();
    for i in order.into_iter().cycle() {
        if left == 0 {
            break;
        }
        counts[i] += 1;
        left -= 1;
    }
    counts
}

/// Generates `spec.n_cases` labeled contexts, one table each. Identical specs
/// give identical corpora.
pub fn generate_synthetic_corpus(spec: &SynthSpec) -> Result<Corpus, String> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let counts = label_counts(spec);
    let mut labels: Vec<AggregateAction> = AggregateAction::ALL
        .into_iter()
        .flat_map(|a| std::iter::repeat_n(a, counts[a.index()]))
        .collect();
    labels.shuffle(&mut rng);

    let items = labels
        .into_iter()
        .enumerate()
        .map(|(i, action)| generate_case(&mut rng, spec, i, action))
        .collect();
    Ok(Corpus { items })
}

fn generate_case(rng: &mut ChaCha8Rng, spec: &SynthSpec, index: usize, action: AggregateAction) -> CorpusItem {
    let p = priors(action);
    let weighted: Vec<(Archetype, f64)> = ARCHETYPES.iter().copied().zip(p.archetypes).collect();
    let Archetype {
        measure: measure_kind,
        category: category_kind,
        structure,
    } = pick(rng, &weighted);
    let (measure, scale) = measure_header(measure_kind, rng);
    let category = category_header(category_kind, rng);

    let base_cov = rng.random_range(p.cov_band.0..p.cov_band.1);
    let jitter: f64 = StandardNormal.sample(rng);
    let target_cov = base_cov * (spec.noise * jitter).exp();
    let n_rows = rng.random_range(spec.rows.0..=spec.rows.1);

    let mut cats = Vec::with_capacity(n_rows);
    let mut values = Vec::with_capacity(n_rows);
    let per_group = rng.random_range(5..=20usize).min(n_rows / 2);
    let groups = (n_rows / per_group).max(2);
    for g in 0..groups {
        let z: f64 = StandardNormal.sample(rng);
        let group_mean = scale * (0.5 * z).exp();
        for v in gamma(rng, group_mean, target_cov, per_group) {
            cats.push(category_value(category_kind, category, g));
            values.push(v);
        }
    }
    match structure {
        Structure::OneToMany => make_distinct(&mut values),
        // one value shared by the first two groups
        Structure::ManyToMany => values[per_group] = values[0],
    }

    let currency = matches!(measure_kind, MeasureKind::Monetary) && rng.random_bool(0.5);
    let case_id = format!("synth-{index:03}");
    let table = Table::new(
        case_id.clone(),
        vec![category.to_string(), measure.to_string()],
        vec![
            Column {
                cells: cats,
                currency: false,
            },
            Column {
                cells: values.into_iter().map(Cell::Number).collect(),
                currency,
            },
        ],
    )
    .expect("generated table is well formed");
    CorpusItem {
        question: Some(format!("What are the values of {measure} by {category}?")),
        case_id,
        table: Arc::new(table),
        category: category.to_string(),
        measure: measure.to_string(),
        action,
    }
}
