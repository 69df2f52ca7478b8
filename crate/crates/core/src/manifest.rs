// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: Copyright The semiadd Authors

//! Role manifests: which columns of a dataset are measures and which are categories.
//!
//! On disk a manifest is a small TOML document:
//!
//! ```toml
//! dataset_id = "bankloan"
//! measure_columns = ["Loan Amount (x1000)"]
//! category_columns = ["Branch"]
//! ```

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::table::Table;

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("cannot read manifest {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed manifest: {0}")]
    Parse(String),
    #[error("manifest is for dataset {manifest:?} but table is {table:?}")]
    DatasetMismatch { manifest: String, table: String },
    #[error("manifest names unknown column {0:?}")]
    UnknownColumn(String),
    #[error("column {0:?} is both a measure and a category")]
    OverlappingRoles(String),
    #[error("column {0:?} listed twice")]
    RepeatedColumn(String),
    #[error("({category:?}, {measure:?}) is not a context declared by the manifest")]
    UndeclaredContext { category: String, measure: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoleManifest {
    pub dataset_id: String,
    pub measure_columns: Vec<String>,
    pub category_columns: Vec<String>,
}

impl RoleManifest {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ManifestError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ManifestError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    /// Parses and checks role disjointness. Column existence is checked by [`bind_roles`].
    pub fn from_toml_str(text: &str) -> Result<Self, ManifestError> {
        let mut manifest: RoleManifest =
            toml::from_str(text).map_err(|e| ManifestError::Parse(e.to_string()))?;
        for name in manifest
            .measure_columns
            .iter_mut()
            .chain(manifest.category_columns.iter_mut())
        {
            *name = name.trim().to_string();
        }
        manifest.check_roles()?;
        Ok(manifest)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("manifest serializes")
    }

    fn check_roles(&self) -> Result<(), ManifestError> {
        let mut measures = HashSet::new();
        for m in &self.measure_columns {
            if !measures.insert(m.as_str()) {
                return Err(ManifestError::RepeatedColumn(m.clone()));
            }
        }
        let mut categories = HashSet::new();
        for c in &self.category_columns {
            if measures.contains(c.as_str()) {
                return Err(ManifestError::OverlappingRoles(c.clone()));
            }
            if !categories.insert(c.as_str()) {
                return Err(ManifestError::RepeatedColumn(c.clone()));
            }
        }
        Ok(())
    }
}

/// One aggregation context: a measure viewed through one category.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Context<'a> {
    pub category: &'a str,
    pub measure: &'a str,
}

/// A table whose manifest has been checked against it.
#[derive(Debug, Clone, Copy)]
pub struct BoundTable<'a> {
    pub table: &'a Table,
    pub manifest: &'a RoleManifest,
}

impl<'a> BoundTable<'a> {
    /// Every (category, measure) pair, measure-major in manifest order.
    pub fn contexts(&self) -> impl Iterator<Item = Context<'a>> + 'a {
        let manifest = self.manifest;
        manifest.measure_columns.iter().flat_map(move |m| {
            manifest.category_columns.iter().map(move |c| Context {
                category: c.as_str(),
                measure: m.as_str(),
            })
        })
    }

    pub fn context(&self, category: &str, measure: &str) -> Result<Context<'a>, ManifestError> {
        let (category, measure) = (category.trim(), measure.trim());
        self.contexts()
            .find(|c| c.category == category && c.measure == measure)
            .ok_or_else(|| ManifestError::UndeclaredContext {
                category: category.to_string(),
                measure: measure.to_string(),
            })
    }
}

pub fn bind_roles<'a>(
    table: &'a Table,
    manifest: &'a RoleManifest,
) -> Result<BoundTable<'a>, ManifestError> {
    if manifest.dataset_id != table.dataset_id() {
        return Err(ManifestError::DatasetMismatch {
            manifest: manifest.dataset_id.clone(),
            table: table.dataset_id().to_string(),
        });
    }
    manifest.check_roles()?;
    for name in manifest
        .measure_columns
        .iter()
        .chain(&manifest.category_columns)
    {
        if table.column_index(name).is_none() {
            return Err(ManifestError::UnknownColumn(name.clone()));
        }
    }
    Ok(BoundTable { table, manifest })
}
