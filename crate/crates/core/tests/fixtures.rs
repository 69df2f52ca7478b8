// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: Copyright The semiadd Authors

//! Worked examples over the tutorial tables in `data/tutorial`.

mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use semiadd::{
    averaged_partitioned_cov, baseline_rule, bind_roles, detect_association, extract_case_features,
    AggregateAction, AssociationType, CaseBase, Cell, Column, Lexicon, Table,
};

use common::*;

const TUTORIALS: [&str; 8] = [
    "bankloan", "budget", "coverage", "employment", "mortality", "tickets", "timeuse", "weather",
];

#[test]
fn bank_loan_features() {
    let table = tutorial_table("bankloan");
    let f = extract_case_features(&table, "Branch", "Loan Amount (x1000)", &Lexicon::default()).unwrap();
    assert_eq!(*f.measure_concepts(), concepts(&["metric", "monetary"]));
    assert_eq!(*f.category_concepts(), concepts(&["attribute"]));
    assert_eq!(f.association(), AssociationType::OneToMany);
    assert!(f.avg_cov() > 0.75, "{}", f.avg_cov());
}

#[test]
fn client_count_is_fixed_per_branch() {
    let table = tutorial_table("bankloan");
    let a = detect_association(&table, "Branch", "Number of Clients").unwrap();
    assert_eq!(a, AssociationType::OneToOne);
}

#[test]
fn sleeping_by_gender_is_averaged() {
    let base = reference_base(&["weather"]);
    let s = base
        .suggest(&tutorial_table("timeuse"), "Gender", "Sleeping", &Lexicon::default(), 1)
        .unwrap();
    assert_eq!(s.action, AggregateAction::Average);
    assert_eq!(s.neighbours[0].case_id, "budget");
    assert_eq!(s.features.association(), AssociationType::ManyToMany);
}

#[test]
fn coverage_follows_its_cases_not_the_baseline() {
    let base = reference_base(&["employment"]);
    let s = base
        .suggest(&tutorial_table("coverage"), "Component", "Coverage", &Lexicon::default(), 3)
        .unwrap();
    assert_eq!(s.action, AggregateAction::Sum);
    assert_eq!(s.neighbours[0].case_id, "mortality");
    assert_eq!(baseline_rule(s.features.avg_cov()), AggregateAction::LastPeriod);
}

#[test]
fn tickets_purchased_are_summed() {
    let s = reference_base(&[])
        .suggest(&tutorial_table("tickets"), "EventName", "Total Tickets Purchased", &Lexicon::default(), 3)
        .unwrap();
    assert_eq!(s.action, AggregateAction::Sum);
}

#[test]
fn employment_varies_little_within_a_state() {
    let table = tutorial_table("employment");
    let v = averaged_partitioned_cov(&table, "State", "Total Fully Employed").unwrap();
    assert!((v - 0.01).abs() < 0.005, "{v}");
    assert_eq!(baseline_rule(v), AggregateAction::LastPeriod);
}

#[test]
fn reference_cases_retrieve_themselves() {
    let base = reference_base(&[]);
    for case in base.cases() {
        let s = base.suggest_features(case.features.clone(), 1).unwrap();
        assert_eq!(s.neighbours[0].case_id, case.case_id);
        assert_eq!(Some(s.action), case.action);
    }
}

#[test]
fn stored_case_base_matches_tutorial_tables() {
    let stored = CaseBase::load(tutorial_dir().join("casebase.jsonl")).unwrap();
    let fresh = reference_cases();
    assert_eq!(stored.len(), fresh.len());
    for want in &fresh {
        let got = stored.get(&want.case_id).unwrap();
        assert_eq!(got.features, want.features, "{}", want.case_id);
        assert_eq!(got.action, want.action);
        assert!(got.question.is_some());
    }
}

#[test]
fn tutorial_manifests_bind() {
    for name in TUTORIALS {
        let table = tutorial_table(name);
        let manifest = tutorial_manifest(name);
        let bound = bind_roles(&table, &manifest).unwrap();
        for ctx in bound.contexts() {
            extract_case_features(&table, ctx.category, ctx.measure, &Lexicon::default()).unwrap();
        }
    }
}

#[test]
fn exponential_amounts_have_unit_cov() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let exp = Exp::new(1.0 / 50.0).unwrap();
    let (mut branch, mut amount) = (Vec::new(), Vec::new());
    for b in 0..5 {
        for _ in 0..400 {
            branch.push(Cell::Text(format!("branch-{b}")));
            amount.push(Cell::Number(exp.sample(&mut rng)));
        }
    }
    let t = Table::new(
        "loans",
        vec!["Branch".into(), "Amount".into()],
        vec![Column { cells: branch, currency: true }, Column { cells: amount, currency: true }],
    )
    .unwrap();
    let v = averaged_partitioned_cov(&t, "Branch", "Amount").unwrap();
    assert!((v - 1.0).abs() < 0.3, "{v}");
    assert_eq!(baseline_rule(v), AggregateAction::Sum);
}

#[test]
fn yearly_totals_repeat_on_both_sides() {
    let csv = "Year,Total\n2019,10\n2019,12\n2020,10\n2020,15\n2021,12\n";
    let t = Table::from_reader("toy", csv.as_bytes(), b',').unwrap();
    assert_eq!(detect_association(&t, "Year", "Total").unwrap(), AssociationType::ManyToMany);
}
