//! The nine acceptance criteria, one PASS/FAIL line each.

use std::time::{Duration, Instant};

use leadrel_core::suites::{run_suite, SuiteReport};

const SEED: u64 = 20_240_601;

struct Outcome {
    passed: bool,
    summary: String,
}

fn suites(names: &[&str]) -> Outcome {
    let reports: Vec<SuiteReport> = names.iter().map(|n| run_suite(n, SEED, None).expect("known suite")).collect();
    let passed = reports.iter().all(SuiteReport::passed);
    let summary = reports
        .iter()
        .map(|r| {
            let mut s = format!("{}: {} cases, {} checks, {} failures", r.suite, r.cases, r.checks, r.failures.len());
            for f in r.failures.iter().take(5) {
                s.push_str(&format!("\n      case {}: {}", f.index, f.detail));
            }
            s
        })
        .collect::<Vec<_>>()
        .join("; ");
    Outcome { passed, summary }
}

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

#[test]
fn acceptance() {
    let criteria: Vec<Criterion> = vec![
        (
            "plane decomposition round trip",
            Box::new(|| {
                let start = Instant::now();
                let mut out = suites(&["jvdk-roundtrip"]);
                let elapsed = start.elapsed();
                out.passed &= elapsed < Duration::from_secs(60);
                out.summary.push_str(&format!(" in {elapsed:.2?}"));
                out
            }),
        ),
        ("leading relation x - c*y^r and kernel agreement", Box::new(|| suites(&["leading-relation"]))),
        ("relation degree bound", Box::new(|| suites(&["relation-bound"]))),
        ("locally nilpotent witness", Box::new(|| suites(&["lnd-witness"]))),
        ("scaled partial identity", Box::new(|| suites(&["delta-identity"]))),
        ("degree lemma and parachute inequality", Box::new(|| suites(&["lemma-1<2", "parachute"]))),
        ("elimination versus graded oracle", Box::new(|| suites(&["oracle"]))),
        ("classifier soundness and coverage", Box::new(|| suites(&["classify-soundness"]))),
        ("affine characterization", Box::new(|| suites(&["affine"]))),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let out = run();
        let verdict = if out.passed { "PASS" } else { "FAIL" };
        println!("criterion {}: {verdict} {name} ({})", i + 1, out.summary);
        if !out.passed {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
