// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: Copyright The semiadd Authors

//! Per-feature similarities and their weighted combination.
//!
//! * concepts: Dice coefficient, averaged over the measure-column pair and
//!   the category-column pair.
//! * association: a fixed lookup table. Only three of its entries come from
//!   domain experts (equal → 1, many-to-many/many-to-one → 0.5, one-to-one vs
//!   anything else → 0); many-to-many/one-to-many → 0.5 and
//!   one-to-many/many-to-one → 0 complete it symmetrically.
//! * CoV: the logistic function of `1 / |a - b|`, with value 1 at `a == b`.
//!   Its range is (0.5, 1].
//!
//! The total is the weight-normalised sum, so it stays in [0, 1].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annotate::ConceptSet;
use crate::features::{AssociationType, FeatureVector};

#[derive(Debug, Error, PartialEq)]
pub enum SimilarityError {
    #[error("concept sets must be non-empty")]
    EmptyConcepts,
    #[error("feature weights must be finite, non-negative and not all zero: {0:?}")]
    InvalidWeights([f64; 3]),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct FeatureWeights {
    concepts: f64,
    association: f64,
    cov: f64,
}

impl Default for FeatureWeights {
    fn default() -> Self {
        Self {
            concepts: 1.0,
            association: 1.0,
            cov: 1.0,
        }
    }
}

impl FeatureWeights {
    pub fn new(concepts: f64, association: f64, cov: f64) -> Result<Self, SimilarityError> {
        let w = [concepts, association, cov];
        if w.iter().any(|x| !x.is_finite() || *x < 0.0) || w.iter().sum::<f64>() <= 0.0 {
            return Err(SimilarityError::InvalidWeights(w));
        }
        Ok(Self {
            concepts,
            association,
            cov,
        })
    }

    pub fn concepts(&self) -> f64 {
        self.concepts
    }

    pub fn association(&self) -> f64 {
        self.association
    }

    pub fn cov(&self) -> f64 {
        self.cov
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.concepts, self.association, self.cov]
    }
}

impl TryFrom<[f64; 3]> for FeatureWeights {
    type Error = SimilarityError;

    fn try_from(w: [f64; 3]) -> Result<Self, Self::Error> {
        Self::new(w[0], w[1], w[2])
    }
}

impl From<FeatureWeights> for [f64; 3] {
    fn from(w: FeatureWeights) -> Self {
        w.as_array()
    }
}

impl std::str::FromStr for FeatureWeights {
    type Err = String;

    /// Parses `w1,w2,w3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(format!("expected three comma-separated weights, got {s:?}"));
        }
        let mut w = [0.0; 3];
        for (slot, part) in w.iter_mut().zip(&parts) {
            *slot = part.parse().map_err(|_| format!("bad weight {part:?}"))?;
        }
        FeatureWeights::try_from(w).map_err(|e| e.to_string())
    }
}

fn dice(a: &ConceptSet, b: &ConceptSet) -> f64 {
    2.0 * a.intersection_len(b) as f64 / (a.len() + b.len()) as f64
}

/// Mean of the measure-pair and category-pair Dice coefficients.
/// Pairs are `(measure concepts, category concepts)`.
pub fn concept_sim(
    a: (&ConceptSet, &ConceptSet),
    b: (&ConceptSet, &ConceptSet),
) -> Result<f64, SimilarityError> {
    if [a.0, a.1, b.0, b.1].iter().any(|s| s.is_empty()) {
        return Err(SimilarityError::EmptyConcepts);
    }
    Ok((dice(a.0, b.0) + dice(a.1, b.1)) / 2.0)
}

pub fn association_sim(a: AssociationType, b: AssociationType) -> f64 {
    use AssociationType::*;
    if a == b {
        return 1.0;
    }
    match (a, b) {
        (ManyToMany, ManyToOne)
        | (ManyToOne, ManyToMany)
        | (ManyToMany, OneToMany)
        | (OneToMany, ManyToMany) => 0.5,
        _ => 0.0,
    }
}

pub fn cov_sim(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if d == 0.0 {
        return 1.0;
    }
    1.0 / (1.0 + (-1.0 / d).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimBreakdown {
    pub concepts: f64,
    pub association: f64,
    pub cov: f64,
    pub total: f64,
}

pub fn similarity(a: &FeatureVector, b: &FeatureVector, w: &FeatureWeights) -> SimBreakdown {
    let concepts = (dice(a.measure_concepts(), b.measure_concepts())
        + dice(a.category_concepts(), b.category_concepts()))
        / 2.0;
    let association = association_sim(a.association(), b.association());
    let cov = cov_sim(a.avg_cov(), b.avg_cov());
    let total = (w.concepts * concepts + w.association * association + w.cov * cov)
        / (w.concepts + w.association + w.cov);
    SimBreakdown {
        concepts,
        association,
        cov,
        total,
    }
}

pub fn total_sim(a: &FeatureVector, b: &FeatureVector, w: &FeatureWeights) -> f64 {
    similarity(a, b, w).total
}
