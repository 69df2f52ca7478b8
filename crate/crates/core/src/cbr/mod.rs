// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: Copyright The semiadd Authors

//! Case base, nearest-case retrieval and majority voting.
//!
//! Retrieval is a linear scan: every known case is scored with
//! [`similarity`](crate::similarity::similarity) and the list is stably sorted
//! by descending total, so equal scores keep insertion order. The vote picks
//! the most frequent action among the top `k`; ties go to the larger summed
//! similarity, then to the alphabetically first action name.

mod store;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annotate::Lexicon;
use crate::features::{extract_case_features, AggregateAction, FeatureError, FeatureVector};
use crate::similarity::{similarity, FeatureWeights, SimBreakdown};
use crate::table::Table;

pub use store::{CASEBASE_FORMAT, CASEBASE_VERSION};

pub const DEFAULT_K: usize = 3;

#[derive(Debug, Error)]
pub enum CbrError {
    #[error("duplicate case id {0:?}")]
    DuplicateId(String),
    #[error("case {0:?} has no aggregate action")]
    Unlabeled(String),
    #[error("case base is empty")]
    EmptyBase,
    #[error("k must be at least 1")]
    InvalidK,
    #[error("no neighbours to vote on")]
    NoNeighbours,
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error("cannot access case base {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("case base line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Case {
    pub case_id: String,
    pub dataset_id: String,
    pub measure_column: String,
    pub category_column: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub question: Option<String>,
    pub features: FeatureVector,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<AggregateAction>,
}

impl Case {
    /// Extracts features for one context of `table`.
    pub fn from_table(
        case_id: impl Into<String>,
        table: &Table,
        category: &str,
        measure: &str,
        lexicon: &Lexicon,
        action: Option<AggregateAction>,
    ) -> Result<Self, FeatureError> {
        let features = extract_case_features(table, category, measure, lexicon)?;
        Ok(Self {
            case_id: case_id.into(),
            dataset_id: table.dataset_id().to_string(),
            measure_column: measure.trim().to_string(),
            category_column: category.trim().to_string(),
            question: None,
            features,
            action,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Neighbour {
    pub case_id: String,
    /// Position in the case base.
    pub index: usize,
    pub similarity: SimBreakdown,
    pub action: AggregateAction,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Suggestion {
    pub action: AggregateAction,
    pub k: usize,
    pub features: FeatureVector,
    pub neighbours: Vec<Neighbour>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CaseBase {
    cases: Vec<Case>,
    ids: HashSet<String>,
    weights: FeatureWeights,
}

impl CaseBase {
    pub fn new(weights: FeatureWeights) -> Self {
        Self {
            cases: Vec::new(),
            ids: HashSet::new(),
            weights,
        }
    }

    pub fn from_cases(
        weights: FeatureWeights,
        cases: impl IntoIterator<Item = Case>,
    ) -> Result<Self, CbrError> {
        let mut base = Self::new(weights);
        for case in cases {
            base.add_case(case)?;
        }
        Ok(base)
    }

    pub fn add_case(&mut self, case: Case) -> Result<(), CbrError> {
        if case.action.is_none() {
            return Err(CbrError::Unlabeled(case.case_id));
        }
        if self.ids.contains(&case.case_id) {
            return Err(CbrError::DuplicateId(case.case_id));
        }
        self.ids.insert(case.case_id.clone());
        self.cases.push(case);
        Ok(())
    }

    pub fn cases(&self) -> &[Case] {
        &self.cases
    }

    pub fn get(&self, case_id: &str) -> Option<&Case> {
        self.cases.iter().find(|c| c.case_id == case_id)
    }

    pub fn len(&self) -> usize {
        self.cases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty()
    }

    pub fn weights(&self) -> FeatureWeights {
        self.weights
    }

    pub fn set_weights(&mut self, weights: FeatureWeights) {
        self.weights = weights;
    }

    /// The `min(k, len)` most similar cases, best first.
    pub fn retrieve(&self, query: &FeatureVector, k: usize) -> Result<Vec<Neighbour>, CbrError> {
        if k == 0 {
            return Err(CbrError::InvalidK);
        }
        if self.cases.is_empty() {
            return Err(CbrError::EmptyBase);
        }
        let mut scored: Vec<Neighbour> = self
            .cases
            .iter()
            .enumerate()
            .map(|(index, case)| Neighbour {
                case_id: case.case_id.clone(),
                index,
                similarity: similarity(query, &case.features, &self.weights),
                action: case.action.expect("known cases are labeled"),
            })
            .collect();
        // stable: ties keep insertion order
        scored.sort_by(|a, b| b.similarity.total.total_cmp(&a.similarity.total));
        scored.truncate(k);
        Ok(scored)
    }

    pub fn suggest_features(
        &self,
        features: FeatureVector,
        k: usize,
    ) -> Result<Suggestion, CbrError> {
        let neighbours = self.retrieve(&features, k)?;
        let action = majority_vote(&neighbours)?;
        Ok(Suggestion {
            action,
            k,
            features,
            neighbours,
        })
    }

    /// Extracts the query's features from `table` and votes among its neighbours.
    pub fn suggest(
        &self,
        table: &Table,
        category: &str,
        measure: &str,
        lexicon: &Lexicon,
        k: usize,
    ) -> Result<Suggestion, CbrError> {
        if k == 0 {
            return Err(CbrError::InvalidK);
        }
        if self.cases.is_empty() {
            return Err(CbrError::EmptyBase);
        }
        let features = extract_case_features(table, category, measure, lexicon)?;
        self.suggest_features(features, k)
    }
}

pub fn majority_vote(neighbours: &[Neighbour]) -> Result<AggregateAction, CbrError> {
    let mut count = [0usize; 3];
    let mut mass = [0.0f64; 3];
    for n in neighbours {
        count[n.action.index()] += 1;
        mass[n.action.index()] += n.similarity.total;
    }
    AggregateAction::ALL
        .into_iter()
        .filter(|a| count[a.index()] > 0)
        // max_by keeps the last maximum, so walk alphabetically in reverse
        .rev()
        .max_by(|a, b| {
            count[a.index()]
                .cmp(&count[b.index()])
                .then(mass[a.index()].total_cmp(&mass[b.index()]))
        })
        .ok_or(CbrError::NoNeighbours)
}
