// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: Copyright The semiadd Authors

//! Acceptance criteria. Each criterion prints one PASS/FAIL line to stderr
//! (uncaptured) with the measured values; the test fails if any criterion
//! fails.

mod common;

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semiadd::eval::{
    bench, evaluate, generate_synthetic_corpus, learning_curve, split, FeatureMask, SynthSpec,
};
use semiadd::{
    association_sim, baseline_rule, concept_sim, cov, cov_sim, extract_case_features,
    majority_vote, shift_positive, similarity, AggregateAction, AssociationType, CaseBase,
    FeatureWeights, Lexicon,
};

use common::*;

/// Corpus and split seeds of the desk-scale protocol.
const CORPUS_SEED: u64 = 0;
const SPLIT_SEED: u64 = 0;
const TRAIN_RATIO: f64 = 0.65;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn association_table() -> Outcome {
    use AssociationType::*;
    let expected = [
        (OneToOne, OneToOne, 1.0),
        (OneToMany, OneToMany, 1.0),
        (ManyToOne, ManyToOne, 1.0),
        (ManyToMany, ManyToMany, 1.0),
        (ManyToMany, ManyToOne, 0.5),
        (ManyToMany, OneToMany, 0.5),
        (OneToOne, OneToMany, 0.0),
        (OneToOne, ManyToOne, 0.0),
        (OneToOne, ManyToMany, 0.0),
        (OneToMany, ManyToOne, 0.0),
    ];
    let mut wrong = Vec::new();
    for (a, b, want) in expected {
        for (x, y) in [(a, b), (b, a)] {
            let got = association_sim(x, y);
            if got.to_bits() != f64::to_bits(want) {
                wrong.push(format!("{x}/{y}={got}"));
            }
        }
    }
    check(wrong.is_empty(), format!("10 unordered pairs, both orders; mismatches: {wrong:?}"))
}

fn dice_oracle_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (am, ac, bm, bc) = (
            random_concepts(&mut rng),
            random_concepts(&mut rng),
            random_concepts(&mut rng),
            random_concepts(&mut rng),
        );
        let got = concept_sim((&am, &ac), (&bm, &bc)).map_err(|e| e.to_string())?;
        let want = (dice_oracle(&tags(&am), &tags(&bm)) + dice_oracle(&tags(&ac), &tags(&bc))) / 2.0;
        worst = worst.max((got - want).abs());
    }
    check(worst <= 1e-12, format!("1000 pairs, max |error| {worst:e} (tolerance 1e-12)"))
}

fn sigmoid_values() -> Outcome {
    let at_one = cov_sim(1.0, 2.0);
    let limit = [cov_sim(0.7, 0.7), cov_sim(0.0, 1e-3), cov_sim(2.0, 2.0 - 1e-6)];
    let grid: Vec<f64> = (1..=100).map(|i| i as f64 * 0.05).collect();
    let values: Vec<f64> = grid.iter().map(|d| cov_sim(0.0, *d)).collect();
    let decreasing = values.windows(2).all(|w| w[1] < w[0]);
    let ok = (at_one - 0.731058).abs() <= 1e-6 && limit.iter().all(|&v| v == 1.0) && decreasing;
    check(
        ok,
        format!(
            "cov_sim(1,2)={at_one:.9}; d->0 gives {limit:?}; strictly decreasing on d=0.05..5 (100 points): {decreasing}"
        ),
    )
}

fn cov_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = rng.random_range(1..=60);
        let scale = 10f64.powi(rng.random_range(-2..=4));
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(0.001..1.0) * scale).collect();
        worst = worst.max((cov(&v) - cov_oracle(&v)).abs());
    }
    let mut not_idempotent = 0;
    let mut negative_out = 0;
    for i in 0..1000 {
        let n = rng.random_range(1..=40);
        let v: Vec<f64> = match i % 3 {
            0 => (0..n).map(|_| -rng.random_range(0.0..500.0)).collect(),
            1 => (0..n).map(|_| rng.random_range(-500.0..500.0)).collect(),
            _ => (0..n).map(|_| rng.random_range(0.0..500.0)).collect(),
        };
        let once = shift_positive(&v);
        if shift_positive(&once) != once {
            not_idempotent += 1;
        }
        if once.iter().any(|x| *x < 0.0) {
            negative_out += 1;
        }
    }
    check(
        worst <= 1e-9 && not_idempotent == 0 && negative_out == 0,
        format!(
            "1000 positive vectors, max |cov - oracle| {worst:e} (tolerance 1e-9); \
             shift over 1000 negative/mixed/positive vectors: {not_idempotent} not idempotent, {negative_out} below zero"
        ),
    )
}

fn retrieval_vote_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut mismatches = Vec::new();
    let mut ties = 0;
    for instance in 0..200 {
        let n = rng.random_range(1..=50);
        let k = rng.random_range(1..=6);
        let weights = if instance % 4 == 0 {
            FeatureWeights::new(
                rng.random_range(0.1..3.0),
                rng.random_range(0.1..3.0),
                rng.random_range(0.1..3.0),
            )
            .unwrap()
        } else {
            FeatureWeights::default()
        };
        let base = CaseBase::from_cases(weights, (0..n).map(|i| random_case(&mut rng, i))).unwrap();
        let query = random_features(&mut rng);

        let totals: Vec<f64> = base
            .cases()
            .iter()
            .map(|c| similarity(&query, &c.features, &weights).total)
            .collect();
        let mut distinct = totals.clone();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup();
        ties += totals.len() - distinct.len();

        let want_order = retrieve_oracle(&totals, k);
        let want_votes: Vec<(AggregateAction, f64)> = want_order
            .iter()
            .map(|&i| (base.cases()[i].action.unwrap(), totals[i]))
            .collect();
        let want_action = vote_oracle(&want_votes);

        let got = base.retrieve(&query, k).unwrap();
        let got_order: Vec<usize> = got.iter().map(|n| n.index).collect();
        let got_action = majority_vote(&got).unwrap();
        if got_order != want_order || got_action != want_action {
            mismatches.push(instance);
        }
    }
    check(
        mismatches.is_empty(),
        format!("200 instances (base <= 50, k <= 6, {ties} tied scores seen); mismatching instances: {mismatches:?}"),
    )
}

fn ablation_ordering() -> Outcome {
    let lexicon = Lexicon::default();
    let corpus = generate_synthetic_corpus(&SynthSpec {
        seed: CORPUS_SEED,
        ..SynthSpec::default()
    })
    .map_err(|e| e.to_string())?;
    let cases = corpus.to_cases(&lexicon).map_err(|e| e.to_string())?;
    let (train, test) = split(&cases, TRAIN_RATIO, SPLIT_SEED).map_err(|e| e.to_string())?;
    let base = CaseBase::from_cases(FeatureWeights::default(), train).map_err(|e| e.to_string())?;
    let acc = |k, mask| evaluate(&base, &test, k, mask).map(|r| r.accuracy).map_err(|e| e.to_string());
    let f1 = acc(1, FeatureMask::CONCEPTS)?;
    let f2 = acc(1, FeatureMask::ASSOCIATION)?;
    let f3 = acc(1, FeatureMask::COV)?;
    let all = acc(3, FeatureMask::ALL)?;
    check(
        f3 > f1 && f3 > f2 && all >= f3 && all >= 0.80,
        format!(
            "{} cases, {}/{} split: F1 {f1:.4}, F2 {f2:.4}, F3 {f3:.4} (k=1); all features {all:.4} (k=3, floor 0.80)",
            cases.len(),
            base.len(),
            test.len()
        ),
    )
}

fn learning_trend() -> Outcome {
    let lexicon = Lexicon::default();
    let corpus = generate_synthetic_corpus(&SynthSpec {
        seed: CORPUS_SEED,
        ..SynthSpec::default()
    })
    .map_err(|e| e.to_string())?;
    let cases = corpus.to_cases(&lexicon).map_err(|e| e.to_string())?;
    let curve = learning_curve(&cases, &[10, 25, 40, 55], TRAIN_RATIO, SPLIT_SEED, 3, FeatureWeights::default())
        .map_err(|e| e.to_string())?;
    let first = curve[0].accuracy;
    let last = curve[curve.len() - 1].accuracy;
    let points: Vec<String> = curve.iter().map(|p| format!("{}:{:.4}", p.size, p.accuracy)).collect();
    check(
        last >= first + 0.05 - 1e-12,
        format!("nested sizes, fixed test set: {}; gain {:+.4} (needs +0.05)", points.join(" "), last - first),
    )
}

fn baseline_fidelity() -> Outcome {
    use AggregateAction::*;
    let got = [baseline_rule(0.01), baseline_rule(0.48), baseline_rule(1.14)];
    check(
        got == [LastPeriod, Average, Sum],
        format!("0.01 -> {}, 0.48 -> {}, 1.14 -> {}", got[0], got[1], got[2]),
    )
}

fn latency_envelope() -> Outcome {
    let lexicon = Lexicon::default();
    let corpus = generate_synthetic_corpus(&SynthSpec {
        seed: CORPUS_SEED,
        rows: (1_000, 10_000),
        ..SynthSpec::default()
    })
    .map_err(|e| e.to_string())?;
    let largest = corpus.items.iter().map(|i| i.table.row_count()).max().unwrap_or(0);
    let (known, queries) = split(&corpus.items, TRAIN_RATIO, SPLIT_SEED).map_err(|e| e.to_string())?;
    let t = bench(&known, &queries, 3, &lexicon, FeatureWeights::default()).map_err(|e| e.to_string())?;
    check(
        t.suggestions == 35 && t.per_suggestion_mean < 50.0 && t.per_suggestion_max < 200.0,
        format!(
            "{} suggestions over tables of <= {largest} rows: mean {:.3} ms (< 50), min {:.3} ms, max {:.3} ms (< 200); \
             extraction of {} known cases {:.1} ms",
            t.suggestions,
            t.per_suggestion_mean,
            t.per_suggestion_min,
            t.per_suggestion_max,
            known.len(),
            t.feature_extraction_total
        ),
    )
}

fn bank_loan_round_trip() -> Outcome {
    let lexicon = Lexicon::default();
    let table = tutorial_table("bankloan");
    let f = extract_case_features(&table, "Branch", "Loan Amount (x1000)", &lexicon).map_err(|e| e.to_string())?;
    let base = reference_base(&[]);
    let s = base
        .suggest(&table, "Branch", "Loan Amount (x1000)", &lexicon, 3)
        .map_err(|e| e.to_string())?;
    let ok = *f.measure_concepts() == concepts(&["metric", "monetary"])
        && *f.category_concepts() == concepts(&["attribute"])
        && f.association() == AssociationType::OneToMany
        && s.action == AggregateAction::Sum;
    check(
        ok,
        format!(
            "measure {} category {} {} avg_cov {:.4}; suggestion {} from {:?}",
            f.measure_concepts(),
            f.category_concepts(),
            f.association(),
            f.avg_cov(),
            s.action,
            s.neighbours.iter().map(|n| n.case_id.as_str()).collect::<Vec<_>>()
        ),
    )
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 10] = [
        ("association similarity table", association_table),
        ("concept similarity against Dice oracle", dice_oracle_agreement),
        ("CoV similarity sigmoid", sigmoid_values),
        ("CoV and positivity shift", cov_correctness),
        ("retrieval and vote against enumeration", retrieval_vote_oracle),
        ("single-feature ordering and combined accuracy", ablation_ordering),
        ("learning-curve trend", learning_trend),
        ("baseline rule on reference CoVs", baseline_fidelity),
        ("suggestion latency", latency_envelope),
        ("bank-loan features and suggestion", bank_loan_round_trip),
    ];
    let mut failed = Vec::new();
    let mut err = std::io::stderr().lock();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        writeln!(err, "criterion {:>2} {status} {name} [{secs:.2}s]: {detail}", i + 1).unwrap();
        if outcome.is_err() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
