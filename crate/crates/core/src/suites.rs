//! Named verification suites over seeded corpora.
//!
//! Cases run in parallel and are merged by case index, so a report depends
//! only on the suite name, seed and count.

use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::autmap::{jacobian_constant, AutWord, PolyMap};
use crate::classify3::{classify, normalize, sample_forbidden, sample_line, ClassifyOutcome, Expected, Tag};
use crate::derivation::{check_delta_identity, is_locally_nilpotent, lnd_witness, NilpotenceVerdict};
use crate::groebner::{kernel_ideal, oracle_agreement};
use crate::jvdk::{decompose2, reduce_step, relation2, Decompose2};
use crate::relations::{
    check_degree_lemma, check_parachute, relation_report_for_word, theorem_bound_integral, RelationReport,
};
use crate::sample::{case_rng, random_affine_word, random_non_affine_word, random_poly, random_word, WordShape};
use crate::{parse_poly, Error, Polynomial, Rational, Result, WDegree, WeightVector};

/// Suite names accepted by [`run_suite`], with their default case counts.
pub const SUITES: &[(&str, usize)] = &[
    ("jvdk-roundtrip", 100),
    ("leading-relation", 100),
    ("relation-bound", 100),
    ("lnd-witness", 100),
    ("delta-identity", 200),
    ("lemma-1<2", 200),
    ("parachute", 200),
    ("oracle", 100),
    ("classify-soundness", 5),
    ("affine", 20),
];

pub fn default_count(name: &str) -> Option<usize> {
    SUITES.iter().find(|(n, _)| *n == name).map(|&(_, c)| c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseFailure {
    pub index: usize,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub count: usize,
    /// Cases that ran.
    pub cases: usize,
    /// Individual exact checks performed.
    pub checks: usize,
    /// Cases outside the suite's scope (for example non-principal ideals).
    pub skipped: usize,
    /// Nilpotence verdicts that stayed `Unknown` at the cap.
    pub unknown: usize,
    pub failures: Vec<CaseFailure>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.unknown == 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "suite {} seed {} count {}: {} cases, {} checks, {} skipped, {} unknown, {} failures",
            self.suite,
            self.seed,
            self.count,
            self.cases,
            self.checks,
            self.skipped,
            self.unknown,
            self.failures.len()
        )?;
        for fail in &self.failures {
            writeln!(f, "  case {}: {}", fail.index, fail.detail)?;
        }
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Result of one case.
#[derive(Default)]
struct Case {
    checks: usize,
    skipped: bool,
    unknown: usize,
    failures: Vec<String>,
}

impl Case {
    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(detail());
        }
    }

    fn error(e: Error) -> Case {
        Case { failures: vec![format!("error: {e}")], ..Case::default() }
    }

    fn skipped() -> Case {
        Case { skipped: true, ..Case::default() }
    }
}

fn run_cases(
    name: &str,
    seed: u64,
    count: usize,
    cases: usize,
    f: impl Fn(usize) -> Result<Case> + Sync,
) -> SuiteReport {
    let results: Vec<Case> = (0..cases).into_par_iter().map(|i| f(i).unwrap_or_else(Case::error)).collect();
    let mut report = SuiteReport {
        suite: name.to_string(),
        seed,
        count,
        cases,
        checks: 0,
        skipped: 0,
        unknown: 0,
        failures: Vec::new(),
    };
    for (index, c) in results.into_iter().enumerate() {
        report.checks += c.checks;
        report.skipped += usize::from(c.skipped);
        report.unknown += c.unknown;
        report.failures.extend(c.failures.into_iter().map(|detail| CaseFailure { index, detail }));
    }
    report
}

/// Run a named suite. `count` defaults to the suite's standard size.
pub fn run_suite(name: &str, seed: u64, count: Option<usize>) -> Result<SuiteReport> {
    let count = count.or_else(|| default_count(name)).ok_or_else(|| Error::UnknownSuite(name.to_string()))?;
    Ok(match name {
        "jvdk-roundtrip" => run_cases(name, seed, count, count, |i| jvdk_case(&plane_word(seed, i))),
        "leading-relation" => leading_relation(seed, count),
        "relation-bound" => corpus_suite(name, seed, count, relation_bound_case),
        "lnd-witness" => corpus_suite(name, seed, count, lnd_witness_case),
        "delta-identity" => run_cases(name, seed, count, count, |i| delta_case(seed, i)),
        "lemma-1<2" => run_cases(name, seed, count, count, |i| lemma_case(seed, i, false)),
        "parachute" => run_cases(name, seed, count, count, |i| lemma_case(seed, i, true)),
        "oracle" => oracle_suite(seed, count),
        "classify-soundness" => classify_suite(seed, count),
        "affine" => run_cases(name, seed, count, 2 * count, |i| affine_case(seed, i)),
        _ => return Err(Error::UnknownSuite(name.to_string())),
    })
}

/// Case `i` of the plane corpus.
pub fn plane_word(seed: u64, i: usize) -> AutWord {
    random_word(&mut case_rng(seed, i), &WordShape::plane())
}

/// Stream offset separating the three-variable corpus from the plane one.
const SPACE_STREAMS: usize = 1 << 32;

/// The first `count` non-affine words in three variables whose ideal of
/// relations has a one-element basis, with their reports.
pub fn principal_space_corpus(seed: u64, count: usize) -> Result<Vec<(AutWord, RelationReport)>> {
    let std = WeightVector::standard(3);
    let mut out = Vec::new();
    let mut next = 0;
    while out.len() < count {
        let batch: Vec<Result<(AutWord, RelationReport)>> = (next..next + 2 * count.max(4))
            .into_par_iter()
            .map(|i| {
                let w = random_non_affine_word(&mut case_rng(seed, SPACE_STREAMS + i), &WordShape::space());
                let rep = relation_report_for_word(&w, &std)?;
                Ok((w, rep))
            })
            .collect();
        next += 2 * count.max(4);
        for r in batch {
            let (w, rep) = r?;
            if out.len() < count && rep.ideal.len() == 1 {
                out.push((w, rep));
            }
        }
        if next > 50 * count.max(4) {
            return Err(Error::ResourceCap(next));
        }
    }
    Ok(out)
}

/// Plane corpus of `count` words followed by `count / 5` principal words in
/// three variables.
fn corpus_suite(
    name: &str,
    seed: u64,
    count: usize,
    f: impl Fn(&AutWord, &RelationReport) -> Result<Case> + Sync,
) -> SuiteReport {
    let space = match principal_space_corpus(seed, count / 5) {
        Ok(s) => s,
        Err(e) => {
            let mut r = run_cases(name, seed, count, 0, |_| Ok(Case::default()));
            r.failures.push(CaseFailure { index: 0, detail: format!("three-variable corpus: {e}") });
            return r;
        }
    };
    run_cases(name, seed, count, count + space.len(), |i| {
        if i < count {
            let w = plane_word(seed, i);
            let rep = relation_report_for_word(&w, &WeightVector::standard(2))?;
            f(&w, &rep)
        } else {
            let (w, rep) = &space[i - count];
            f(w, rep)
        }
    })
}

fn jvdk_case(w: &AutWord) -> Result<Case> {
    let mut case = Case::default();
    let m = w.expand();
    let Decompose2::Tame(dec) = decompose2(&m)? else {
        case.check(false, || format!("word {} reported as not an automorphism", one_line(w)));
        return Ok(case);
    };
    case.check(dec.word.expand() == m, || format!("decomposition of {} does not recompose", one_line(w)));
    let mut prev: Option<u64> = None;
    for s in &dec.steps {
        case.check(s.degree_sum_after < s.degree_sum_before, || {
            format!("degree sum {} -> {} not decreasing", s.degree_sum_before, s.degree_sum_after)
        });
        if let Some(p) = prev {
            case.check(s.degree_sum_before == p, || format!("degree sum jumped from {p} to {}", s.degree_sum_before));
        }
        prev = Some(s.degree_sum_after);
    }
    Ok(case)
}

/// Replay the reduction independently: at every non-affine stage the larger
/// leading form is `c` times the `r`-th power of the smaller, `r = d₁/d₂`.
fn replay_leading_relations(m: &PolyMap, case: &mut Case) {
    let std = WeightVector::standard(2);
    let (mut f, mut g) = (m.coords()[0].clone(), m.coords()[1].clone());
    let deg = |p: &Polynomial| p.total_degree().unwrap_or(0);
    while deg(&f) > 1 || deg(&g) > 1 {
        if deg(&f) < deg(&g) {
            std::mem::swap(&mut f, &mut g);
        }
        let Some((c, r)) = reduce_step(&f, &g) else {
            case.check(false, || format!("no relation x - c*y^r between leading forms of {f} and {g}"));
            return;
        };
        let (fb, gb) = (f.leading_term(&std), g.leading_term(&std));
        case.check(u64::from(r) * deg(&g) == deg(&f), || format!("r = {r} is not d1/d2 = {}/{}", deg(&f), deg(&g)));
        case.check((&fb - &gb.pow(r).scale(&c)).is_zero(), || format!("{fb} != {c}*({gb})^{r}"));
        f = &f - &g.pow(r).scale(&c);
    }
}

fn leading_relation(seed: u64, count: usize) -> SuiteReport {
    // The kernel comparison runs on the first quarter-count non-affine maps.
    let compared: Vec<usize> =
        (0..count).filter(|&i| !plane_word(seed, i).expand().is_affine()).take(count / 4).collect();
    let mut report = run_cases("leading-relation", seed, count, count, |i| {
        let w = plane_word(seed, i);
        let m = w.expand();
        let mut case = Case::default();
        replay_leading_relations(&m, &mut case);
        if compared.contains(&i) {
            let rep = relation_report_for_word(&w, &WeightVector::standard(2))?;
            let r2 = relation2(&m)?;
            match (r2, &rep.relation) {
                (Some(a), Some(b)) => {
                    case.check(a.monic_lex() == b.monic_lex(), || format!("relation2 gives {a}, kernel gives {b}"))
                }
                (a, b) => case.check(false, || format!("relation2 {a:?} vs kernel {b:?}")),
            }
        }
        Ok(case)
    });
    if compared.len() < count / 4 {
        report.failures.push(CaseFailure {
            index: count,
            detail: format!("only {} non-affine maps to compare, wanted {}", compared.len(), count / 4),
        });
    }
    report
}

fn relation_bound_case(_: &AutWord, rep: &RelationReport) -> Result<Case> {
    let mut case = Case::default();
    if !rep.principal {
        return Ok(Case::skipped());
    }
    let ok = theorem_bound_integral(rep);
    case.check(ok == Some(true), || {
        format!(
            "deg2(R) = {:?} exceeds sum(d) - n + 1 = {} for R = {}",
            rep.deg2_of_relation,
            &rep.parachute + Rational::from_integer(1.into()),
            rep.relation_text().unwrap_or_default()
        )
    });
    Ok(case)
}

fn lnd_witness_case(w: &AutWord, rep: &RelationReport) -> Result<Case> {
    let mut case = Case::default();
    let wit = lnd_witness(w, &rep.w1, rep.relation.as_ref())?;
    let bound = WDegree::Finite(-rep.w1.get(wit.index).clone());
    case.check(wit.delta_degree >= bound, || {
        format!("deg2(Delta_{}) = {:?} below -w", wit.index + 1, wit.delta_degree)
    });
    match &wit.verdict {
        NilpotenceVerdict::LocallyNilpotent { .. } => case.checks += 1,
        NilpotenceVerdict::Unknown { cap } => {
            case.unknown += 1;
            case.failures.push(format!("leading derivation {} undecided at cap {cap}", wit.leading.to_text()));
        }
        NilpotenceVerdict::NotNilpotent { reason, .. } => {
            case.check(false, || format!("leading derivation {} not nilpotent: {reason}", wit.leading.to_text()))
        }
    }
    if rep.principal && rep.relation.as_ref().is_some_and(|r| !r.is_zero()) {
        case.check(wit.annihilates_relation == Some(true), || {
            format!("{} does not kill {}", wit.leading.to_text(), rep.relation_text().unwrap_or_default())
        });
    }
    Ok(case)
}

/// A short word in 2 or 3 variables for the identity and inequality suites.
fn small_word<R: Rng + ?Sized>(rng: &mut R, n: usize) -> AutWord {
    let shape = if n == 2 {
        WordShape { nvars: 2, max_gens: 4, max_addend_degree: 3, coeff: 5, max_addend_terms: 2, degree_budget: 9 }
    } else {
        WordShape::space()
    };
    random_word(rng, &shape)
}

fn delta_case(seed: u64, i: usize) -> Result<Case> {
    let mut rng = case_rng(seed, i);
    let n = 2 + i % 2;
    let w = small_word(&mut rng, n);
    let p = random_poly(&mut rng, n, 3);
    let (m, inv) = (w.expand(), w.invert().expand());
    let mut case = Case::default();
    for j in 0..n {
        case.check(check_delta_identity(&m, &inv, &p, j)?, || {
            format!("identity fails for i = {}, P = {p}, word {}", j + 1, one_line(&w))
        });
    }
    Ok(case)
}

fn lemma_case(seed: u64, i: usize, parachute: bool) -> Result<Case> {
    let mut rng = case_rng(seed, i);
    let n = 2 + i % 2;
    let w = small_word(&mut rng, n);
    let mut p = random_poly(&mut rng, n, 3);
    let k = rng.random_range(1..=3u32);
    let m = w.expand();
    let rep = relation_report_for_word(&w, &WeightVector::standard(n))?;
    // Every third case takes P = R·Q + (terms of lower deg₂), so that its
    // leading form lies in the ideal and the inequality must be strict.
    if i.is_multiple_of(3) {
        if let Some(r) = rep.relation.as_ref().filter(|r| !r.is_zero()) {
            let rq = r * &random_poly(&mut rng, n, 2).leading_term(&rep.d);
            let top = rq.wdeg(&rep.d);
            let low = Polynomial::from_terms(
                n,
                p.terms()
                    .filter(|(mono, _)| WDegree::Finite(mono.weighted_degree(&rep.d)) < top)
                    .map(|(a, b)| (a.clone(), b.clone())),
            );
            p = &rq + &low;
        }
    }
    let mut case = Case::default();
    if parachute {
        let c = check_parachute(&m, &rep, &p, k, None)?;
        case.check(c.holds, || format!("parachute {:?} < {:?} for P = {p}, k = {k}", c.lhs, c.rhs));
    } else {
        let l = check_degree_lemma(&m, &rep, &p)?;
        case.check(l.holds(), || format!("degree lemma {l:?} for P = {p}"));
    }
    Ok(case)
}

fn oracle_suite(seed: u64, count: usize) -> SuiteReport {
    let fixed: [(&str, &str); 2] = [
        ("x1 + x2^2; x2", "z1 - z2^2"),
        ("x1 - 2*x2*(x1*x3+x2^2) - x3*(x1*x3+x2^2)^2; x2 + x3*(x1*x3+x2^2); x3", "z2^2 + z1*z3"),
    ];
    let mut report = corpus_suite("oracle", seed, count, |_, rep| oracle_case(rep));
    for (k, (map, expected)) in fixed.iter().enumerate() {
        let case = fixed_oracle_case(map, expected).unwrap_or_else(Case::error);
        report.cases += 1;
        report.checks += case.checks;
        let index = report.cases - 1;
        report.failures.extend(
            case.failures
                .into_iter()
                .map(|detail| CaseFailure { index, detail: format!("fixed instance {}: {detail}", k + 1) }),
        );
    }
    report
}

fn oracle_case(rep: &RelationReport) -> Result<Case> {
    let mut case = Case::default();
    let dmax = &rep.parachute + Rational::from_integer(1.into());
    let basis = kernel_ideal(&rep.fbars, &rep.d)?;
    let a = oracle_agreement(&rep.fbars, &rep.d, &dmax, &basis)?;
    case.check(a.agrees(), || format!("oracle disagrees: {a:?}"));
    Ok(case)
}

/// The kernel generator of a fixed map, and the oracle's lowest nonzero
/// slice, both equal the expected relation up to scale.
fn fixed_oracle_case(map: &str, expected: &str) -> Result<Case> {
    let m = PolyMap::parse_inferred(map)?;
    let n = m.nvars();
    let expected = parse_poly(&expected.replace('z', "x"), n)?;
    let rep = crate::relations::relation_report(&m, &WeightVector::standard(n))?;
    let mut case = oracle_case(&rep)?;
    let got = rep.relation.clone().unwrap_or_else(|| Polynomial::zero(n));
    case.check(got.monic_lex() == expected.monic_lex(), || format!("kernel gives {got}"));
    let dmax = &rep.parachute + Rational::from_integer(1.into());
    let oracle = crate::groebner::graded_kernel_oracle(&rep.fbars, &rep.d, &dmax)?;
    let lowest = oracle.iter().min_by(|a, b| a.wdeg(&rep.d).cmp(&b.wdeg(&rep.d)));
    case.check(lowest.is_some_and(|g| g.monic_lex() == expected.monic_lex()), || {
        format!("oracle's lowest relation is {lowest:?}")
    });
    Ok(case)
}

fn classify_suite(seed: u64, count: usize) -> SuiteReport {
    let per_forbidden = (2 * count).div_ceil(5);
    let lines = Tag::NONZERO.len() * count;
    run_cases("classify-soundness", seed, count, lines + 6 * per_forbidden, |i| {
        let mut rng = case_rng(seed, i);
        let sample = if i < lines {
            sample_line(Tag::NONZERO[i / count], &mut rng)
        } else {
            sample_forbidden(((i - lines) / per_forbidden + 1) as u8, &mut rng)?
        };
        let mut case = Case::default();
        let out = classify(&sample.r, &sample.weights())?;
        match (&sample.expected, &out) {
            (Expected::Forbidden(k), _) => {
                case.check(out == ClassifyOutcome::Forbidden(*k), || format!("{} gave {out:?}", sample.r))
            }
            (Expected::Line(rt), ClassifyOutcome::Classified(got)) => {
                case.check(got.tag() == rt.tag(), || {
                    format!("{} classified {:?}, expected {:?}", sample.r, got.tag(), rt.tag())
                });
                case.check(got.reconstruct() == sample.r, || format!("pattern {got:?} does not rebuild {}", sample.r));
                let nf = normalize(got)?;
                case.check(nf.verify(&sample.r)?, || format!("witness for {} fails", sample.r));
                if let Some(c) = &nf.canonical {
                    let lnd = c.annihilating_lnd();
                    case.check(lnd.apply(&c.polynomial())?.is_zero(), || format!("{c:?} not annihilated"));
                    case.check(is_locally_nilpotent(&lnd, 64).is_locally_nilpotent(), || {
                        format!("{} is not locally nilpotent", lnd.to_text())
                    });
                }
            }
            (Expected::Line(rt), _) => {
                case.check(false, || format!("{} expected {:?}, got {out:?}", sample.r, rt.tag()))
            }
        }
        Ok(case)
    })
}

fn affine_case(seed: u64, i: usize) -> Result<Case> {
    let mut rng = case_rng(seed, i);
    let n = 2 + i % 2;
    let affine = i % 4 < 2;
    let w = if affine {
        random_affine_word(&mut rng, n)
    } else {
        let shape = if n == 2 {
            WordShape { nvars: 2, max_gens: 4, max_addend_degree: 3, coeff: 5, max_addend_terms: 2, degree_budget: 9 }
        } else {
            WordShape::space()
        };
        random_non_affine_word(&mut rng, &shape)
    };
    jacobian_constant(&w.expand())?;
    let rep = relation_report_for_word(&w, &WeightVector::standard(n))?;
    let mut case = Case::default();
    case.check(rep.is_zero_ideal() == affine, || {
        format!("word {} (affine: {affine}) has ideal {:?}", one_line(&w), rep.ideal.display_with('z'))
    });
    Ok(case)
}

fn one_line(w: &AutWord) -> String {
    w.to_text().trim().replace('\n', "; ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(matches!(run_suite("nope", 1, None), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn small_suites_pass_and_are_deterministic() {
        for (name, _) in SUITES {
            let a = run_suite(name, 9, Some(3)).unwrap();
            assert!(a.passed(), "{a}");
            assert_eq!(a, run_suite(name, 9, Some(3)).unwrap());
        }
    }
}
