// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: Copyright The semiadd Authors

//! Labeled corpora of aggregation contexts.
//!
//! A corpus directory holds one delimited file per dataset, a `.roles`
//! manifest per dataset and a `labels.jsonl` file with one record per
//! context:
//!
//! ```text
//! {"case_id":"synth-000","file":"synth-000.csv","category":"Branch","measure":"Loan Amount","action":"sum"}
//! ```
//!
//! `question` is optional. Files are comma-delimited.

use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::annotate::Lexicon;
use crate::cbr::Case;
use crate::features::{AggregateAction, FeatureError};
use crate::manifest::RoleManifest;
use crate::table::Table;

pub const LABELS_FILE: &str = "labels.jsonl";

#[derive(Debug, Clone)]
pub struct CorpusItem {
    pub case_id: String,
    pub table: Arc<Table>,
    pub category: String,
    pub measure: String,
    pub question: Option<String>,
    pub action: AggregateAction,
}

impl CorpusItem {
    pub fn to_case(&self, lexicon: &Lexicon) -> Result<Case, FeatureError> {
        let mut case = Case::from_table(
            self.case_id.clone(),
            &self.table,
            &self.category,
            &self.measure,
            lexicon,
            Some(self.action),
        )?;
        case.question = self.question.clone();
        Ok(case)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelRecord {
    pub case_id: String,
    pub file: String,
    pub category: String,
    pub measure: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub question: Option<String>,
    pub action: AggregateAction,
}

impl LabelRecord {
    /// Parses a labels file; errors carry the 1-based line number.
    pub fn parse_lines(text: &str) -> Result<Vec<LabelRecord>, EvalError> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let rec: LabelRecord = serde_json::from_str(line)
                .map_err(|e| EvalError::Corpus(format!("{LABELS_FILE} line {}: {e}", i + 1)))?;
            if !seen.insert(rec.case_id.clone()) {
                return Err(EvalError::Corpus(format!(
                    "{LABELS_FILE} line {}: duplicate case id {:?}",
                    i + 1,
                    rec.case_id
                )));
            }
            out.push(rec);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub items: Vec<CorpusItem>,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Extracts features for every item, in order.
    pub fn to_cases(&self, lexicon: &Lexicon) -> Result<Vec<Case>, FeatureError> {
        self.items.iter().map(|item| item.to_case(lexicon)).collect()
    }

    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Self, EvalError> {
        let dir = dir.as_ref();
        let labels_path = dir.join(LABELS_FILE);
        let text = std::fs::read_to_string(&labels_path)
            .map_err(|e| EvalError::Corpus(format!("{}: {e}", labels_path.display())))?;
        let records = LabelRecord::parse_lines(&text)?;
        let mut tables: HashMap<String, Arc<Table>> = HashMap::new();
        let mut items = Vec::with_capacity(records.len());
        for rec in records {
            let table = match tables.get(&rec.file) {
                Some(t) => Arc::clone(t),
                None => {
                    let t = Table::load(dir.join(&rec.file), b',')
                        .map_err(|e| EvalError::Corpus(e.to_string()))?;
                    let t = Arc::new(t);
                    tables.insert(rec.file.clone(), Arc::clone(&t));
                    t
                }
            };
            items.push(CorpusItem {
                case_id: rec.case_id,
                table,
                category: rec.category,
                measure: rec.measure,
                question: rec.question,
                action: rec.action,
            });
        }
        Ok(Self { items })
    }

    /// Writes tables, per-dataset role manifests and `labels.jsonl` into `dir`.
    pub fn save_dir(&self, dir: impl AsRef<Path>) -> Result<(), EvalError> {
        let dir = dir.as_ref();
        let io = |e: std::io::Error| EvalError::Corpus(e.to_string());
        std::fs::create_dir_all(dir).map_err(io)?;
        let mut roles: Vec<(String, RoleManifest)> = Vec::new();
        let mut labels = String::new();
        for item in &self.items {
            let id = item.table.dataset_id().to_string();
            let file = format!("{id}.csv");
            match roles.iter_mut().find(|(f, _)| *f == file) {
                Some((_, m)) => {
                    if !m.measure_columns.contains(&item.measure) {
                        m.measure_columns.push(item.measure.clone());
                    }
                    if !m.category_columns.contains(&item.category) {
                        m.category_columns.push(item.category.clone());
                    }
                }
                None => {
                    let out = std::fs::File::create(dir.join(&file)).map_err(io)?;
                    item.table
                        .write(out, b',')
                        .map_err(|e| EvalError::Corpus(e.to_string()))?;
                    roles.push((
                        file.clone(),
                        RoleManifest {
                            dataset_id: id,
                            measure_columns: vec![item.measure.clone()],
                            category_columns: vec![item.category.clone()],
                        },
                    ));
                }
            }
            let rec = LabelRecord {
                case_id: item.case_id.clone(),
                file,
                category: item.category.clone(),
                measure: item.measure.clone(),
                question: item.question.clone(),
                action: item.action,
            };
            labels.push_str(&serde_json::to_string(&rec).expect("label serializes"));
            labels.push('\n');
        }
        for (_, manifest) in &roles {
            // a column used both ways has no valid manifest; labels still cover it
            let text = manifest.to_toml_string();
            if RoleManifest::from_toml_str(&text).is_ok() {
                std::fs::write(dir.join(format!("{}.roles", manifest.dataset_id)), text).map_err(io)?;
            }
        }
        std::fs::write(dir.join(LABELS_FILE), labels).map_err(io)
    }
}
