// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: Copyright The semiadd Authors

//! Semantic concept tags for columns.
//!
//! A [`Lexicon`] is an ordered list of header rules plus a per-kind fallback.
//! Annotation is the union of every matching rule's tags and the fallback
//! tags for the column's [`Kind`], so every column gets at least one concept.
//! See `data/default_lexicon.toml` for the file schema.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use regex::{Regex, RegexBuilder};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::table::{ColumnKind, Kind};

pub const DEFAULT_LEXICON: &str = include_str!("../data/default_lexicon.toml");

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read lexicon {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed lexicon: {0}")]
    Parse(String),
    #[error("rule {index}: {reason}")]
    Rule { index: usize, reason: String },
    #[error("kind fallback for {0} has no tags")]
    EmptyFallback(Kind),
}

/// A set of lowercase, non-empty concept tags.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct ConceptSet(BTreeSet<String>);

impl ConceptSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Normalises the tag (trim + lowercase); blank tags are ignored.
    pub fn insert(&mut self, tag: &str) -> bool {
        let tag = tag.trim().to_lowercase();
        if tag.is_empty() {
            return false;
        }
        self.0.insert(tag)
    }

    pub fn contains(&self, tag: &str) -> bool {
        self.0.contains(tag)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn intersection_len(&self, other: &ConceptSet) -> usize {
        self.0.intersection(&other.0).count()
    }

    pub fn extend(&mut self, other: &ConceptSet) {
        self.0.extend(other.0.iter().cloned());
    }
}

impl<S: AsRef<str>> FromIterator<S> for ConceptSet {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        let mut set = ConceptSet::new();
        for tag in iter {
            set.insert(tag.as_ref());
        }
        set
    }
}

impl TryFrom<Vec<String>> for ConceptSet {
    type Error = String;

    fn try_from(tags: Vec<String>) -> Result<Self, Self::Error> {
        let mut set = ConceptSet::new();
        for tag in tags {
            if tag.trim().is_empty() {
                return Err("empty concept tag".into());
            }
            set.insert(&tag);
        }
        Ok(set)
    }
}

impl From<ConceptSet> for Vec<String> {
    fn from(set: ConceptSet) -> Self {
        set.0.into_iter().collect()
    }
}

impl fmt::Display for ConceptSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, tag) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(tag)?;
        }
        f.write_str("]")
    }
}

#[derive(Debug, Clone)]
pub enum Matcher {
    Contains(Vec<String>),
    StartsWith(Vec<String>),
    EndsWith(Vec<String>),
    Regex(Regex),
    Currency,
}

impl Matcher {
    /// `header` is already trimmed and lowercased.
    fn matches(&self, header: &str, currency: bool) -> bool {
        match self {
            Matcher::Contains(p) => p.iter().any(|s| header.contains(s.as_str())),
            Matcher::StartsWith(p) => p.iter().any(|s| header.starts_with(s.as_str())),
            Matcher::EndsWith(p) => p.iter().any(|s| header.ends_with(s.as_str())),
            Matcher::Regex(re) => re.is_match(header),
            Matcher::Currency => currency,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Rule {
    pub matcher: Matcher,
    pub tags: ConceptSet,
}

#[derive(Debug, Clone)]
pub struct Lexicon {
    rules: Vec<Rule>,
    numeric: ConceptSet,
    textual: ConceptSet,
    mixed: ConceptSet,
    empty: ConceptSet,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LexiconFile {
    #[serde(default, rename = "rule")]
    rules: Vec<RuleEntry>,
    #[serde(default)]
    kind: KindEntry,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleEntry {
    contains: Option<Vec<String>>,
    starts_with: Option<Vec<String>>,
    ends_with: Option<Vec<String>>,
    regex: Option<String>,
    currency: Option<bool>,
    #[serde(default)]
    tags: Vec<String>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct KindEntry {
    numeric: Option<Vec<String>>,
    textual: Option<Vec<String>>,
    mixed: Option<Vec<String>>,
    empty: Option<Vec<String>>,
}

impl Default for Lexicon {
    fn default() -> Self {
        Self::from_toml_str(DEFAULT_LEXICON).expect("default lexicon is valid")
    }
}

impl Lexicon {
    /// Kind fallbacks only: numeric → metric, everything else → attribute.
    pub fn fallback_only() -> Self {
        let metric: ConceptSet = ["metric"].into_iter().collect();
        let attribute: ConceptSet = ["attribute"].into_iter().collect();
        Self {
            rules: Vec::new(),
            numeric: metric,
            textual: attribute.clone(),
            mixed: attribute.clone(),
            empty: attribute,
        }
    }

    /// Loads a lexicon file, or the built-in default when `path` is `None`.
    pub fn load(path: Option<&Path>) -> Result<Self, LexiconError> {
        match path {
            None => Ok(Self::default()),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
                    path: path.display().to_string(),
                    source,
                })?;
                Self::from_toml_str(&text)
            }
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self, LexiconError> {
        let file: LexiconFile =
            toml::from_str(text).map_err(|e| LexiconError::Parse(e.to_string()))?;
        let mut lexicon = Self::fallback_only();
        for (index, entry) in file.rules.into_iter().enumerate() {
            lexicon.rules.push(entry.into_rule(index)?);
        }
        let kinds = [
            (Kind::Numeric, file.kind.numeric, &mut lexicon.numeric),
            (Kind::Textual, file.kind.textual, &mut lexicon.textual),
            (Kind::Mixed, file.kind.mixed, &mut lexicon.mixed),
            (Kind::Empty, file.kind.empty, &mut lexicon.empty),
        ];
        for (kind, tags, slot) in kinds {
            if let Some(tags) = tags {
                let set: ConceptSet = tags.iter().collect();
                if set.is_empty() {
                    return Err(LexiconError::EmptyFallback(kind));
                }
                *slot = set;
            }
        }
        Ok(lexicon)
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn push_rule(&mut self, rule: Rule) {
        self.rules.push(rule);
    }

    pub fn fallback(&self, kind: Kind) -> &ConceptSet {
        match kind {
            Kind::Numeric => &self.numeric,
            Kind::Textual => &self.textual,
            Kind::Mixed => &self.mixed,
            Kind::Empty => &self.empty,
        }
    }

    pub fn annotate(&self, header: &str, kind: &ColumnKind, currency: bool) -> ConceptSet {
        annotate_column(header, kind, currency, self)
    }
}

impl RuleEntry {
    fn into_rule(self, index: usize) -> Result<Rule, LexiconError> {
        let err = |reason: String| LexiconError::Rule { index, reason };
        let lower = |v: Vec<String>| -> Result<Vec<String>, LexiconError> {
            if v.is_empty() {
                return Err(err("empty pattern list".into()));
            }
            v.into_iter()
                .map(|s| {
                    let s = s.trim().to_lowercase();
                    if s.is_empty() {
                        Err(err("empty pattern".into()))
                    } else {
                        Ok(s)
                    }
                })
                .collect()
        };
        let mut matchers = Vec::new();
        if let Some(v) = self.contains {
            matchers.push(Matcher::Contains(lower(v)?));
        }
        if let Some(v) = self.starts_with {
            matchers.push(Matcher::StartsWith(lower(v)?));
        }
        if let Some(v) = self.ends_with {
            matchers.push(Matcher::EndsWith(lower(v)?));
        }
        if let Some(pattern) = self.regex {
            let re = RegexBuilder::new(&pattern)
                .case_insensitive(true)
                .size_limit(1 << 20)
                .build()
                .map_err(|e| err(format!("bad regex: {e}")))?;
            matchers.push(Matcher::Regex(re));
        }
        match self.currency {
            Some(true) => matchers.push(Matcher::Currency),
            Some(false) => return Err(err("currency matcher must be true".into())),
            None => {}
        }
        if matchers.len() != 1 {
            return Err(err(format!(
                "expected exactly one matcher, found {}",
                matchers.len()
            )));
        }
        if self.tags.iter().any(|t| t.trim().is_empty()) {
            return Err(err("empty tag".into()));
        }
        let tags: ConceptSet = self.tags.iter().collect();
        if tags.is_empty() {
            return Err(err("rule has no tags".into()));
        }
        Ok(Rule {
            matcher: matchers.pop().expect("one matcher"),
            tags,
        })
    }
}

pub fn annotate_column(
    header: &str,
    kind: &ColumnKind,
    currency: bool,
    lexicon: &Lexicon,
) -> ConceptSet {
    let header = header.trim().to_lowercase();
    let mut concepts = lexicon.fallback(kind.kind).clone();
    for rule in &lexicon.rules {
        if rule.matcher.matches(&header, currency) {
            concepts.extend(&rule.tags);
        }
    }
    concepts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind(kind: Kind) -> ColumnKind {
        ColumnKind {
            kind,
            numeric_fraction: if kind == Kind::Numeric { 1.0 } else { 0.0 },
            empty_cells: 0,
        }
    }

    fn tags(set: &ConceptSet) -> Vec<&str> {
        set.iter().collect()
    }

    #[test]
    fn table_one_annotations() {
        let lex = Lexicon::default();
        let loan = lex.annotate("Loan Amount (x1000)", &kind(Kind::Numeric), true);
        assert_eq!(tags(&loan), ["metric", "monetary"]);
        let branch = lex.annotate("Branch", &kind(Kind::Textual), false);
        assert_eq!(tags(&branch), ["attribute"]);
    }

    #[test]
    fn year_is_temporal_metric() {
        let lex = Lexicon::default();
        let year = lex.annotate("Year", &kind(Kind::Numeric), false);
        assert_eq!(tags(&year), ["metric", "temporal"]);
    }

    #[test]
    fn default_lexicon_rules() {
        let lex = Lexicon::default();
        let num = kind(Kind::Numeric);
        assert!(lex.annotate("Unit Price", &num, false).contains("monetary"));
        assert!(lex.annotate("Balance", &num, true).contains("monetary"));
        assert!(!lex.annotate("Balance", &num, false).contains("monetary"));
        for h in ["Date", "Day of Year", "Month", "Fiscal Year"] {
            assert!(lex.annotate(h, &num, false).contains("temporal"), "{h}");
        }
        for h in ["Customer ID", "Account-Number", "Postal Code"] {
            assert!(lex.annotate(h, &num, false).contains("identifier"), "{h}");
        }
        assert!(!lex.annotate("Paid", &num, false).contains("identifier"));
        assert!(lex.annotate("Coverage", &num, false).contains("percentage"));
        assert!(lex.annotate("Share %", &num, false).contains("percentage"));
        assert!(lex.annotate("Number of Deaths", &num, false).contains("count"));
        assert!(lex.annotate("Total Fully Employed", &num, false).contains("count"));
        assert!(!lex.annotate("Grand Total", &num, false).contains("count"));
    }

    #[test]
    fn fallback_is_total() {
        let lex = Lexicon::from_toml_str("").unwrap();
        assert!(lex.rules().is_empty());
        for k in [Kind::Numeric, Kind::Textual, Kind::Mixed, Kind::Empty] {
            assert!(!lex.annotate("anything", &kind(k), false).is_empty());
        }
        assert_eq!(tags(&lex.annotate("x", &kind(Kind::Numeric), false)), ["metric"]);
    }

    #[test]
    fn bad_regex_names_rule() {
        let text = "[[rule]]\ncontains = [\"a\"]\ntags = [\"x\"]\n[[rule]]\nregex = \"(\"\ntags = [\"y\"]\n";
        match Lexicon::from_toml_str(text) {
            Err(LexiconError::Rule { index: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_rules() {
        let two = "[[rule]]\ncontains = [\"a\"]\nregex = \"a\"\ntags = [\"x\"]\n";
        assert!(matches!(Lexicon::from_toml_str(two), Err(LexiconError::Rule { index: 0, .. })));
        let none = "[[rule]]\ntags = [\"x\"]\n";
        assert!(matches!(Lexicon::from_toml_str(none), Err(LexiconError::Rule { .. })));
        let no_tags = "[[rule]]\ncontains = [\"a\"]\n";
        assert!(matches!(Lexicon::from_toml_str(no_tags), Err(LexiconError::Rule { .. })));
        let empty_kind = "[kind]\nnumeric = []\n";
        assert!(matches!(
            Lexicon::from_toml_str(empty_kind),
            Err(LexiconError::EmptyFallback(Kind::Numeric))
        ));
        assert!(matches!(Lexicon::from_toml_str("rule = 3"), Err(LexiconError::Parse(_))));
    }

    #[test]
    fn custom_kind_fallback() {
        let lex = Lexicon::from_toml_str("[kind]\ntextual = [\"Dimension\"]\n").unwrap();
        assert_eq!(tags(&lex.annotate("x", &kind(Kind::Textual), false)), ["dimension"]);
        assert_eq!(tags(&lex.annotate("x", &kind(Kind::Numeric), false)), ["metric"]);
    }

    #[test]
    fn concept_set_serde() {
        let set: ConceptSet = ["Metric", "monetary", "metric"].into_iter().collect();
        let json = serde_json::to_string(&set).unwrap();
        assert_eq!(json, r#"["metric","monetary"]"#);
        assert_eq!(serde_json::from_str::<ConceptSet>(&json).unwrap(), set);
        assert!(serde_json::from_str::<ConceptSet>(r#"["a",""]"#).is_err());
    }
}
