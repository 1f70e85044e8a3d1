//! Acceptance gate: runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any failed.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use dcomplete::axioms::{check, revalidate};
use dcomplete::generators::{
    dtd, fixtures, partitions_of, random_tree, shape, shifted_shape, strict_partitions_of,
    Partition,
};
use dcomplete::harness::{
    exhaustive_corpus, run_tables, search_d3c_without_ss, verify_agreement,
    verify_consequences, Status, Table,
};
use dcomplete::{certify, Analysis, AxiomName, Check, Poset};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn agreement(corpus: &[Poset]) -> Outcome {
    let counts = [(3, 5), (5, 63)];
    let oracle_ok = counts.iter().all(|&(n, c)| {
        common::class_count(n) == c && corpus.iter().filter(|p| p.len() == n).count() == c
    });
    let r = verify_agreement(corpus);
    outcome(
        oracle_ok && r.disagreements.is_empty(),
        format!(
            "{} posets, {} (poset, k) pairs, {} d-complete, {} disagreements, class counts {}",
            r.posets,
            r.instances,
            r.d_complete,
            r.disagreements.len(),
            if oracle_ok { "match" } else { "MISMATCH" }
        ),
    )
}

fn families() -> Outcome {
    let mut posets = Vec::new();
    for n in 1..=12 {
        posets.extend(partitions_of(n).iter().map(|l| shape(l).unwrap()));
        posets.extend(strict_partitions_of(n).iter().map(|l| shifted_shape(l).unwrap()));
    }
    posets.extend((3..=8).map(|k| dtd(k).unwrap()));
    posets.extend((0..100u64).map(|seed| random_tree(1 + seed as usize % 15, seed).unwrap()));
    let failures: Vec<&Poset> = posets
        .iter()
        .filter(|p| {
            let c = certify(p);
            !c.agreement || c.d_complete() != Some(true)
        })
        .collect();
    outcome(
        failures.is_empty(),
        format!("{} family posets, {} not d-complete", posets.len(), failures.len()),
    )
}

fn named_fixtures() -> Outcome {
    let mut notes = Vec::new();
    let s = shifted_shape(&Partition::strict(vec![9, 6, 3, 1]).unwrap()).unwrap();
    let tree = s.top_tree().map(|t| t.len()).unwrap_or(0);
    if s.len() != 19 || tree != 10 {
        notes.push(format!("shifted (9,6,3,1): {} elements, top tree {tree}", s.len()));
    }
    let cube = fixtures::cube();
    let mf = check(&cube, Check::axiom(AxiomName::D3Mf, 3));
    let cube_ok = certify(&cube).d_complete() == Some(false)
        && !mf.verdict
        && mf.witness.is_some()
        && revalidate(&cube, &mf);
    if !cube_ok {
        notes.push("cube not rejected with a D3MF witness".into());
    }
    let mut accepted = vec![fixtures::diamond()];
    accepted.extend((1..=12).map(fixtures::chain));
    if !accepted.iter().all(|p| certify(p).d_complete() == Some(true)) {
        notes.push("diamond or a chain rejected".into());
    }
    let pass = notes.is_empty();
    outcome(
        pass,
        if pass {
            "shifted (9,6,3,1) has 19 elements and a 10-element top tree; cube fails D3MF; diamond and chains pass".into()
        } else {
            notes.join("; ")
        },
    )
}

fn tables(corpus: &[Poset]) -> Outcome {
    let tabs = [Table::One, Table::Two, Table::Three, Table::Five, Table::Controls];
    let r = run_tables(&tabs, None, corpus, 7);
    let mut bad = Vec::new();
    let mut verified = 0;
    let mut falsified = 0;
    for res in &r.results {
        match res.status {
            Status::Verified => verified += 1,
            Status::Falsified => falsified += 1,
            _ => bad.push(format!("{} {:?}", res.key, res.status)),
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{verified} asserted rows verified, {falsified} controls falsified{}",
            if bad.is_empty() {
                String::new()
            } else {
                format!(", problems: {}", bad.join(", "))
            }
        ),
    )
}

fn consequences(corpus: &[Poset]) -> Outcome {
    let r = verify_consequences(corpus);
    outcome(
        r.failures.is_empty() && r.d_complete > 0,
        format!(
            "{} d-complete posets, {} filters, {} intervals audited, {} failures",
            r.d_complete,
            r.filters_checked,
            r.intervals_audited,
            r.failures.len()
        ),
    )
}

fn short_interval_search() -> Outcome {
    let r = search_d3c_without_ss(8);
    let detail = if r.status == "consistent" {
        format!(
            "consistent: {} posets scanned, {} satisfy D3mC, none lacks SS",
            r.posets_scanned, r.hypothesis_hits
        )
    } else {
        format!(
            "DISCOVERY: {} D3mC posets without SS, first {}",
            r.counterexamples.len(),
            r.counterexamples[0]
        )
    };
    outcome(true, detail)
}

fn oracle_equivalence(corpus: &[Poset]) -> Outcome {
    use rayon::prelude::*;
    let stats: Vec<(usize, usize, usize)> = corpus
        .par_iter()
        .map(|p| {
            let a = Analysis::new(p);
            let (mut intervals, mut sets, mut mismatches) = (0, 0, 0);
            for k in 3..=a.k_max() {
                let level = a.level(k);
                let mine: std::collections::BTreeSet<Vec<usize>> =
                    level.intervals.iter().map(|iv| iv.elements()).collect();
                let oracle = common::dk_intervals(p, k);
                intervals += oracle.len();
                mismatches += (mine != oracle || level.intervals.len() != oracle.len()) as usize;

                let oracle_sets = common::dk_minus_sets(p, k);
                let mine_sets: std::collections::BTreeSet<Vec<usize>> =
                    level.minus_sets.iter().map(|s| s.elements()).collect();
                sets += oracle_sets.len();
                mismatches +=
                    (mine_sets != oracle_sets || level.minus_sets.len() != oracle_sets.len()) as usize;
                for (s, found) in level.minus_sets.iter().zip(&level.completions) {
                    let mut found = found.clone();
                    found.sort_unstable();
                    mismatches += (found != common::completions(p, &s.elements(), k)) as usize;
                }
            }
            (intervals, sets, mismatches)
        })
        .collect();
    let (i, s, m) = stats
        .iter()
        .fold((0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    outcome(
        m == 0,
        format!("{} posets, {i} intervals, {s} d_k- sets with completions, {m} mismatches", corpus.len()),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let corpus7 = exhaustive_corpus(7);
    let corpus8 = exhaustive_corpus(8);
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("five criteria agree on all posets with at most 7 elements", Box::new(|| agreement(&corpus7))),
        ("family posets are d-complete", Box::new(families)),
        ("named fixtures", Box::new(named_fixtures)),
        ("implication tables hold, controls are falsified", Box::new(|| tables(&corpus7))),
        ("d-complete consequence suite", Box::new(|| consequences(&corpus7))),
        ("D3mC without SS search up to 8 elements", Box::new(short_interval_search)),
        ("structure finders match brute-force oracles up to 8 elements", Box::new(|| oracle_equivalence(&corpus8))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        failed += !o.pass as usize;
        println!(
            "criterion {}: {} {name}: {} ({:.1?})",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed()
        );
    }
    println!("acceptance: {} of {} passed in {:.1?}", criteria.len() - failed, criteria.len(), start.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
