// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: Copyright The semiadd Authors

//! Learns the default aggregation of measure columns (sum, average or
//! last-period) from labeled examples.
//!
//! Pipeline: a delimited file is loaded into a [`Table`], a [`RoleManifest`]
//! says which columns are measures and which are categories, and every
//! (category, measure) context is turned into a [`FeatureVector`]:
//!
//! 1. concept tags of both columns from a [`Lexicon`],
//! 2. the [`AssociationType`] between category values and measure values,
//! 3. the measure's coefficient of variation averaged over category partitions.
//!
//! A [`CaseBase`] of labeled contexts then suggests an action for a new
//! context by majority vote over its `k` most similar cases.
//!
//! ```
//! use semiadd::{CaseBase, Case, Lexicon, Table, AggregateAction};
//!
//! let csv = "Branch,Loan Amount\nA,$120\nA,$15\nB,$300\nB,$42\n";
//! let table = Table::from_reader("loans", csv.as_bytes(), b',').unwrap();
//! let lexicon = Lexicon::default();
//! let known = Case::from_table("loans", &table, "Branch", "Loan Amount", &lexicon,
//!                              Some(AggregateAction::Sum)).unwrap();
//! let mut base = CaseBase::default();
//! base.add_case(known).unwrap();
//! let s = base.suggest(&table, "Branch", "Loan Amount", &lexicon, 3).unwrap();
//! assert_eq!(s.action, AggregateAction::Sum);
//! ```

pub mod annotate;
pub mod cbr;
pub mod eval;
pub mod features;
pub mod manifest;
pub mod similarity;
pub mod table;

pub use annotate::{annotate_column, ConceptSet, Lexicon};
pub use cbr::{majority_vote, Case, CaseBase, CbrError, Neighbour, Suggestion, DEFAULT_K};
pub use features::{
    averaged_partitioned_cov, baseline_rule, cov, detect_association, extract_case_features,
    shift_positive, AggregateAction, AssociationType, FeatureError, FeatureVector,
};
pub use manifest::{bind_roles, BoundTable, Context, RoleManifest};
pub use similarity::{
    association_sim, concept_sim, cov_sim, similarity, total_sim, FeatureWeights, SimBreakdown,
};
pub use table::{classify_column, Cell, Column, ColumnKind, Kind, Table, TableError};
