// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: Copyright The semiadd Authors

#![allow(dead_code)]

use std::path::PathBuf;

use rand::Rng;
use semiadd::{
    AggregateAction, AssociationType, Case, CaseBase, ConceptSet, FeatureVector, Lexicon,
    Neighbour, RoleManifest, Table,
};

pub fn tutorial_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/tutorial")
}

pub fn tutorial_table(name: &str) -> Table {
    Table::load(tutorial_dir().join(format!("{name}.csv")), b',').unwrap()
}

pub fn tutorial_manifest(name: &str) -> RoleManifest {
    RoleManifest::load(tutorial_dir().join(format!("{name}.roles"))).unwrap()
}

/// A labeled case extracted from one of the tutorial tables.
pub fn tutorial_case(id: &str, dataset: &str, category: &str, measure: &str, action: AggregateAction) -> Case {
    let table = tutorial_table(dataset);
    Case::from_table(id, &table, category, measure, &Lexicon::default(), Some(action)).unwrap()
}

/// Hand-labeled contexts over the tutorial tables.
pub fn reference_cases() -> Vec<Case> {
    use AggregateAction::*;
    vec![
        tutorial_case("employment", "employment", "State", "Total Fully Employed", LastPeriod),
        tutorial_case("weather", "weather", "City", "Temperature", Average),
        tutorial_case("budget", "budget", "Account-Number", "Period-Budget-Amount", Average),
        tutorial_case("mortality", "mortality", "Cause", "Number of Deaths", Sum),
        tutorial_case("ticket-price", "tickets", "EventName", "Total Ticket Purchase Price", Sum),
    ]
}

pub fn reference_base(skip: &[&str]) -> CaseBase {
    let cases = reference_cases()
        .into_iter()
        .filter(|c| !skip.contains(&c.case_id.as_str()));
    CaseBase::from_cases(Default::default(), cases).unwrap()
}

pub fn concepts(tags: &[&str]) -> ConceptSet {
    tags.iter().copied().collect()
}

// ---------------------------------------------------------------------------
// oracles

/// Welford's running mean and variance; σ/μ with the population variance.
pub fn cov_oracle(values: &[f64]) -> f64 {
    let (mut n, mut mean, mut m2) = (0.0f64, 0.0f64, 0.0f64);
    for &x in values {
        n += 1.0;
        let delta = x - mean;
        mean += delta / n;
        m2 += delta * (x - mean);
    }
    let sd = (m2 / n).sqrt();
    if sd == 0.0 {
        0.0
    } else {
        sd / mean
    }
}

/// Dice coefficient by pairwise comparison of tag lists.
pub fn dice_oracle(a: &[String], b: &[String]) -> f64 {
    let mut common = 0;
    for x in a {
        for y in b {
            if x == y {
                common += 1;
            }
        }
    }
    2.0 * common as f64 / (a.len() + b.len()) as f64
}

pub fn tags(set: &ConceptSet) -> Vec<String> {
    set.iter().map(str::to_string).collect()
}

pub fn concept_oracle(a: &FeatureVector, b: &FeatureVector) -> f64 {
    let m = dice_oracle(&tags(a.measure_concepts()), &tags(b.measure_concepts()));
    let c = dice_oracle(&tags(a.category_concepts()), &tags(b.category_concepts()));
    (m + c) / 2.0
}

/// Retrieval by rank counting: a case's rank is the number of cases that
/// beat it, where higher similarity wins and equal similarity goes to the
/// earlier case.
pub fn retrieve_oracle(totals: &[f64], k: usize) -> Vec<usize> {
    let n = totals.len();
    let mut ranked: Vec<(usize, usize)> = (0..n)
        .map(|i| {
            let rank = (0..n)
                .filter(|&j| totals[j] > totals[i] || (totals[j] == totals[i] && j < i))
                .count();
            (rank, i)
        })
        .filter(|&(rank, _)| rank < k)
        .collect();
    ranked.sort();
    ranked.into_iter().map(|(_, i)| i).collect()
}

/// Every action is compared against every other: more votes, then more
/// summed similarity, then alphabetical order.
pub fn vote_oracle(votes: &[(AggregateAction, f64)]) -> AggregateAction {
    let present: Vec<AggregateAction> = AggregateAction::ALL
        .into_iter()
        .filter(|a| votes.iter().any(|(v, _)| v == a))
        .collect();
    let count = |a: AggregateAction| votes.iter().filter(|(v, _)| *v == a).count();
    let mass = |a: AggregateAction| votes.iter().filter(|(v, _)| *v == a).map(|(_, s)| s).sum::<f64>();
    let beats = |a: AggregateAction, b: AggregateAction| {
        let (ca, cb) = (count(a), count(b));
        if ca != cb {
            return ca > cb;
        }
        let (ma, mb) = (mass(a), mass(b));
        if ma != mb {
            return ma > mb;
        }
        a.as_str() < b.as_str()
    };
    *present
        .iter()
        .find(|&&a| present.iter().all(|&b| a == b || beats(a, b)))
        .expect("a unique winner")
}

pub fn neighbour_summary(ns: &[Neighbour]) -> Vec<(usize, AggregateAction)> {
    ns.iter().map(|n| (n.index, n.action)).collect()
}

// ---------------------------------------------------------------------------
// random inputs

pub const TAG_POOL: [&str; 8] = [
    "metric", "monetary", "attribute", "temporal", "count", "percentage", "identifier", "ratio",
];

pub fn random_concepts(rng: &mut impl Rng) -> ConceptSet {
    let mut set = ConceptSet::new();
    let n = rng.random_range(1..=4);
    while set.len() < n {
        set.insert(TAG_POOL[rng.random_range(0..TAG_POOL.len())]);
    }
    set
}

/// Draws from small pools so that equal similarities are common.
pub fn random_features(rng: &mut impl Rng) -> FeatureVector {
    const COVS: [f64; 6] = [0.0, 0.01, 0.48, 0.5, 1.14, 1.37];
    let cov = if rng.random_bool(0.5) {
        COVS[rng.random_range(0..COVS.len())]
    } else {
        rng.random_range(0.0..2.0)
    };
    FeatureVector::new(
        random_concepts(rng),
        random_concepts(rng),
        AssociationType::ALL[rng.random_range(0..4)],
        cov,
    )
    .unwrap()
}

pub fn random_case(rng: &mut impl Rng, id: usize) -> Case {
    Case {
        case_id: format!("case-{id}"),
        dataset_id: "random".into(),
        measure_column: "m".into(),
        category_column: "c".into(),
        question: None,
        features: random_features(rng),
        action: Some(AggregateAction::ALL[rng.random_range(0..3)]),
    }
}
