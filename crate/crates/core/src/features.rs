// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: Copyright The semiadd Authors

//! The three case features of an aggregation context.
//!
//! For a (category, measure) pair we extract the concept sets of both
//! columns, the association type from the category to the measure, and the
//! coefficient of variation of the measure averaged over category partitions.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annotate::{ConceptSet, Lexicon};
use crate::table::{Cell, Table, TableError};

/// Averaged CoV below this suggests last-period.
pub const LAST_PERIOD_BELOW: f64 = 0.25;
/// Averaged CoV at or above this suggests sum.
pub const SUM_FROM: f64 = 0.75;

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("no co-occurring values for {category:?} and {measure:?}")]
    NoCooccurring { category: String, measure: String },
    #[error("measure column not numeric: {0:?}")]
    NotNumeric(String),
    #[error("coefficient of variation for {0:?} is not finite")]
    NonFinite(String),
    #[error("invalid feature vector: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AssociationType {
    OneToOne,
    OneToMany,
    ManyToOne,
    ManyToMany,
}

impl AssociationType {
    pub const ALL: [AssociationType; 4] = [
        AssociationType::OneToOne,
        AssociationType::OneToMany,
        AssociationType::ManyToOne,
        AssociationType::ManyToMany,
    ];

    /// `many_left`: some measure value pairs with several categories.
    /// `many_right`: some category value pairs with several measure values.
    pub fn from_sides(many_left: bool, many_right: bool) -> Self {
        match (many_left, many_right) {
            (false, false) => AssociationType::OneToOne,
            (false, true) => AssociationType::OneToMany,
            (true, false) => AssociationType::ManyToOne,
            (true, true) => AssociationType::ManyToMany,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            AssociationType::OneToMany => AssociationType::ManyToOne,
            AssociationType::ManyToOne => AssociationType::OneToMany,
            other => other,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AssociationType::OneToOne => "one-to-one",
            AssociationType::OneToMany => "one-to-many",
            AssociationType::ManyToOne => "many-to-one",
            AssociationType::ManyToMany => "many-to-many",
        }
    }
}

impl fmt::Display for AssociationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AssociationType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|a| a.as_str() == s.trim())
            .ok_or_else(|| format!("unknown association type {s:?}"))
    }
}

/// Default aggregation of a measure. Variant order is alphabetical by name,
/// which the vote tie-break relies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AggregateAction {
    Average,
    LastPeriod,
    Sum,
}

impl AggregateAction {
    pub const ALL: [AggregateAction; 3] = [
        AggregateAction::Average,
        AggregateAction::LastPeriod,
        AggregateAction::Sum,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AggregateAction::Average => "average",
            AggregateAction::LastPeriod => "last-period",
            AggregateAction::Sum => "sum",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for AggregateAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AggregateAction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|a| a.as_str() == s.trim())
            .ok_or_else(|| format!("unknown aggregate action {s:?} (expected sum, average or last-period)"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFeatures", into = "RawFeatures")]
pub struct FeatureVector {
    measure_concepts: ConceptSet,
    category_concepts: ConceptSet,
    association: AssociationType,
    avg_cov: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFeatures {
    measure_concepts: ConceptSet,
    category_concepts: ConceptSet,
    association: AssociationType,
    avg_cov: f64,
}

impl TryFrom<RawFeatures> for FeatureVector {
    type Error = FeatureError;

    fn try_from(r: RawFeatures) -> Result<Self, Self::Error> {
        FeatureVector::new(r.measure_concepts, r.category_concepts, r.association, r.avg_cov)
    }
}

impl From<FeatureVector> for RawFeatures {
    fn from(f: FeatureVector) -> Self {
        RawFeatures {
            measure_concepts: f.measure_concepts,
            category_concepts: f.category_concepts,
            association: f.association,
            avg_cov: f.avg_cov,
        }
    }
}

impl FeatureVector {
    pub fn new(
        measure_concepts: ConceptSet,
        category_concepts: ConceptSet,
        association: AssociationType,
        avg_cov: f64,
    ) -> Result<Self, FeatureError> {
        if measure_concepts.is_empty() || category_concepts.is_empty() {
            return Err(FeatureError::Invalid("concept sets must be non-empty".into()));
        }
        if !(avg_cov.is_finite() && avg_cov >= 0.0) {
            return Err(FeatureError::Invalid(format!(
                "averaged CoV must be finite and non-negative, got {avg_cov}"
            )));
        }
        Ok(Self {
            measure_concepts,
            category_concepts,
            association,
            avg_cov,
        })
    }

    pub fn measure_concepts(&self) -> &ConceptSet {
        &self.measure_concepts
    }

    pub fn category_concepts(&self) -> &ConceptSet {
        &self.category_concepts
    }

    pub fn association(&self) -> AssociationType {
        self.association
    }

    pub fn avg_cov(&self) -> f64 {
        self.avg_cov
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum CellKey<'a> {
    Num(u64),
    Text(&'a str),
}

impl<'a> CellKey<'a> {
    fn of(cell: &'a Cell) -> Option<Self> {
        match cell {
            Cell::Number(v) => Some(CellKey::Num(v.to_bits())),
            Cell::Text(s) => Some(CellKey::Text(s)),
            Cell::Empty => None,
        }
    }
}

/// Association type oriented category → measure, over rows where both cells are present.
pub fn detect_association(
    table: &Table,
    category: &str,
    measure: &str,
) -> Result<AssociationType, FeatureError> {
    let cat = table.column(category)?;
    let mea = table.column(measure)?;
    let mut per_category: HashMap<CellKey, HashSet<CellKey>> = HashMap::new();
    let mut per_measure: HashMap<CellKey, HashSet<CellKey>> = HashMap::new();
    for (c, m) in cat.cells.iter().zip(&mea.cells) {
        let (Some(c), Some(m)) = (CellKey::of(c), CellKey::of(m)) else {
            continue;
        };
        per_category.entry(c).or_default().insert(m);
        per_measure.entry(m).or_default().insert(c);
    }
    if per_category.is_empty() {
        return Err(FeatureError::NoCooccurring {
            category: category.to_string(),
            measure: measure.to_string(),
        });
    }
    let right = per_category.values().map(HashSet::len).max().unwrap_or(0);
    let left = per_measure.values().map(HashSet::len).max().unwrap_or(0);
    Ok(AssociationType::from_sides(left > 1, right > 1))
}

/// Adds |min| to every value when the minimum is negative.
pub fn shift_positive(values: &[f64]) -> Vec<f64> {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if min < 0.0 {
        let shift = -min;
        values.iter().map(|v| v + shift).collect()
    } else {
        values.to_vec()
    }
}

/// Population standard deviation over mean. Defined for non-negative values;
/// zero spread (including all zeros) gives 0.
pub fn cov(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let sd = var.sqrt();
    if sd == 0.0 {
        return 0.0;
    }
    sd / mean
}

/// CoV of the measure averaged over category partitions with at least two values.
///
/// The positivity shift uses every numeric cell of the measure column. Rows
/// whose category cell is empty or whose measure cell is not a number are then
/// dropped. If every partition is a singleton the CoV of all remaining values
/// is returned instead.
pub fn averaged_partitioned_cov(
    table: &Table,
    category: &str,
    measure: &str,
) -> Result<f64, FeatureError> {
    let cat = table.column(category)?;
    let mea = table.column(measure)?;
    let (rows, raw): (Vec<usize>, Vec<f64>) = mea
        .cells
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.as_number().map(|v| (i, v)))
        .unzip();
    if raw.is_empty() {
        return Err(FeatureError::NotNumeric(measure.to_string()));
    }
    let shifted = shift_positive(&raw);

    let mut partitions: IndexMap<CellKey, Vec<f64>> = IndexMap::new();
    let mut kept = Vec::with_capacity(shifted.len());
    for (&row, &value) in rows.iter().zip(&shifted) {
        if let Some(key) = CellKey::of(&cat.cells[row]) {
            partitions.entry(key).or_default().push(value);
            kept.push(value);
        }
    }
    if kept.is_empty() {
        return Err(FeatureError::NoCooccurring {
            category: category.to_string(),
            measure: measure.to_string(),
        });
    }

    let covs: Vec<f64> = partitions
        .values()
        .filter(|p| p.len() >= 2)
        .map(|p| cov(p))
        .collect();
    let result = if covs.is_empty() {
        cov(&kept)
    } else {
        covs.iter().sum::<f64>() / covs.len() as f64
    };
    if !result.is_finite() {
        return Err(FeatureError::NonFinite(measure.to_string()));
    }
    Ok(result)
}

/// Rule-of-thumb action from averaged CoV alone: near 0 → last-period,
/// near 0.5 → average, near 1 → sum.
pub fn baseline_rule(avg_cov: f64) -> AggregateAction {
    if avg_cov < LAST_PERIOD_BELOW {
        AggregateAction::LastPeriod
    } else if avg_cov < SUM_FROM {
        AggregateAction::Average
    } else {
        AggregateAction::Sum
    }
}

pub fn extract_case_features(
    table: &Table,
    category: &str,
    measure: &str,
    lexicon: &Lexicon,
) -> Result<FeatureVector, FeatureError> {
    let cat = table.column(category)?;
    let mea = table.column(measure)?;
    let measure_concepts = lexicon.annotate(measure, &mea.kind(), mea.currency);
    let category_concepts = lexicon.annotate(category, &cat.kind(), cat.currency);
    let association = detect_association(table, category, measure)?;
    let avg_cov = averaged_partitioned_cov(table, category, measure)?;
    FeatureVector::new(measure_concepts, category_concepts, association, avg_cov)
}
