//! The ideal of relations between the leading terms of an automorphism,
//! the degree bound on its generator, and the inequalities relating
//! `deg₁(P∘Φ)` to `deg₂(P)`.

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::autmap::{deg2_weights, AutWord, PolyMap};
use crate::groebner::{
    is_principal, kernel_ideal_with, normal_form, oracle_agreement, IdealBasis, Principality, DEFAULT_PAIR_CAP,
};
use crate::poly::format_poly_with;
use crate::{Error, Polynomial, Rational, Result, WDegree, WeightVector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub w1: WeightVector,
    /// `d_i = deg₁(f_i)`, the weights of `deg₂`.
    pub d: WeightVector,
    /// Leading terms `f̄_i`.
    pub fbars: Vec<Polynomial>,
    pub ideal: IdealBasis,
    pub principal: bool,
    /// The monic generator when the ideal is principal (0 for the zero ideal).
    pub relation: Option<Polynomial>,
    pub deg2_of_relation: Option<WDegree>,
    /// `∇ = Σ d_i - Σ w_i`.
    #[serde(with = "crate::rational::serde_str")]
    pub parachute: Rational,
    /// `deg₂(R) <= ∇ + 1`, when the ideal is principal.
    pub bound_ok: Option<bool>,
    /// Whether the graded oracle cross-check ran (and agreed).
    pub oracle_checked: bool,
}

impl RelationReport {
    pub fn nvars(&self) -> usize {
        self.d.len()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.ideal.is_zero_ideal()
    }

    /// The relation printed in the `z` variables.
    pub fn relation_text(&self) -> Option<String> {
        self.relation.as_ref().map(|r| format_poly_with(r, 'z'))
    }
}

#[derive(Clone, Debug)]
pub struct ReportOptions {
    pub pair_cap: usize,
    /// Run the graded oracle up to `∇ + 1` when `n <= 3` and weights are integral.
    pub shadow_oracle: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { pair_cap: DEFAULT_PAIR_CAP, shadow_oracle: true }
    }
}

pub fn relation_report(map: &PolyMap, w1: &WeightVector) -> Result<RelationReport> {
    relation_report_with(map, w1, &ReportOptions::default())
}

pub fn relation_report_for_word(word: &AutWord, w1: &WeightVector) -> Result<RelationReport> {
    relation_report(&word.expand(), w1)
}

pub fn relation_report_with(map: &PolyMap, w1: &WeightVector, opts: &ReportOptions) -> Result<RelationReport> {
    let n = map.nvars();
    if w1.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: w1.len() });
    }
    let d = deg2_weights(map, w1)?;
    let fbars = map.leading_terms(w1);
    let ideal = kernel_ideal_with(&fbars, &d, Some(w1), opts.pair_cap)?;
    let parachute = d.sum() - w1.sum();
    let principality = is_principal(&ideal);
    let relation = principality.generator(n);
    let deg2_of_relation = relation.as_ref().map(|r| r.wdeg(&d));
    let bound = WDegree::Finite(&parachute + Rational::one());
    let bound_ok = deg2_of_relation.as_ref().map(|deg| *deg <= bound);

    let mut oracle_checked = false;
    if opts.shadow_oracle && n <= 3 && d.is_integral() && w1.is_integral() {
        let agreement = oracle_agreement(&fbars, &d, &(&parachute + Rational::one()), &ideal)?;
        if !agreement.agrees() {
            return Err(Error::OracleDisagreement(format!(
                "kernel basis {:?} vs oracle up to degree {}: {:?}",
                ideal.display_with('z'),
                &parachute + Rational::one(),
                agreement
            )));
        }
        oracle_checked = true;
    }

    Ok(RelationReport {
        w1: w1.clone(),
        d,
        fbars,
        principal: principality.is_principal(),
        relation,
        deg2_of_relation,
        parachute,
        bound_ok,
        oracle_checked,
        ideal,
    })
}

/// Both sides of `deg₁(P∘Φ) <= deg₂(P)` and whether strictness matches
/// membership of the leading form `P̃` in the ideal of relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeLemma {
    pub lhs: WDegree,
    pub rhs: WDegree,
    pub strict: bool,
    pub tilde_in_ideal: bool,
}

impl DegreeLemma {
    /// The inequality holds and strictness is equivalent to `P ≠ 0, P̃ ∈ I`.
    pub fn holds(&self) -> bool {
        let nonzero = !self.rhs.is_minus_infinity();
        self.lhs <= self.rhs && self.strict == (nonzero && self.tilde_in_ideal)
    }
}

pub fn check_degree_lemma(map: &PolyMap, report: &RelationReport, p: &Polynomial) -> Result<DegreeLemma> {
    let lhs = p.compose(map.coords())?.wdeg(&report.w1);
    let rhs = p.wdeg(&report.d);
    let tilde = p.leading_term(&report.d);
    let tilde_in_ideal = normal_form(&tilde, &report.ideal).is_zero();
    Ok(DegreeLemma { strict: lhs < rhs, lhs, rhs, tilde_in_ideal })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParachuteCheck {
    pub lhs: WDegree,
    pub rhs: WDegree,
    pub holds: bool,
}

/// `deg₁(P∘Φ) >= deg₁((∂^k P/∂x_v^k)∘Φ) + k·d_v - k·∇`, with `v` the last
/// variable unless given.
pub fn check_parachute(
    map: &PolyMap,
    report: &RelationReport,
    p: &Polynomial,
    k: u32,
    var: Option<usize>,
) -> Result<ParachuteCheck> {
    let n = map.nvars();
    let v = var.unwrap_or(n - 1);
    if v >= n {
        return Err(Error::IndexOutOfRange { index: v + 1, nvars: n });
    }
    let lhs = p.compose(map.coords())?.wdeg(&report.w1);
    let dk = p.partial_k(v, k);
    let kk = Rational::from_integer(k.into());
    let shift = &kk * report.d.get(v) - &kk * &report.parachute;
    let rhs = &dk.compose(map.coords())?.wdeg(&report.w1) + &shift;
    Ok(ParachuteCheck { holds: lhs >= rhs, lhs, rhs })
}

/// Largest `k` with `R^k | P̃`; `None` when `P̃ = 0`.
///
/// Panics if `r` is constant.
pub fn order_in_r(p_tilde: &Polynomial, r: &Polynomial) -> Option<u32> {
    p_tilde.multiplicity_of(r)
}

/// `deg₁(P∘Φ) >= k·(deg₂(R) - ∇)` for `k` the order of `P̃` in `(R)`.
pub fn check_order_bound(map: &PolyMap, report: &RelationReport, p: &Polynomial) -> Result<Option<bool>> {
    let Some(r) = report.relation.as_ref().filter(|r| r.as_constant().is_none()) else {
        return Ok(None);
    };
    let tilde = p.leading_term(&report.d);
    let Some(k) = order_in_r(&tilde, r) else {
        return Ok(None);
    };
    let lhs = p.compose(map.coords())?.wdeg(&report.w1);
    let deg_r = r.wdeg(&report.d);
    let Some(deg_r) = deg_r.finite() else {
        return Ok(None);
    };
    let rhs = Rational::from_integer(k.into()) * (deg_r - &report.parachute);
    Ok(Some(lhs >= WDegree::Finite(rhs)))
}

/// Every `α ∈ Supp(R)` has `α·d <= Σ d_i - n + 1`.
pub fn support_bound_ok(r: &Polynomial, d: &WeightVector) -> bool {
    let n = Rational::from_integer((d.len() as i64).into());
    let bound = d.sum() - n + Rational::one();
    r.terms().all(|(m, _)| m.weighted_degree(d) <= bound)
}

/// Relation as a principality verdict, for callers that prefer the enum.
pub fn principality(report: &RelationReport) -> Principality {
    is_principal(&report.ideal)
}

/// `deg₂(R) <= ∇ + 1` as an exact integer comparison for standard `w1`.
pub fn theorem_bound_integral(report: &RelationReport) -> Option<bool> {
    let deg = report.deg2_of_relation.as_ref()?;
    let Some(deg) = deg.finite() else { return Some(true) };
    if !deg.is_integer() || !report.parachute.is_integer() {
        return None;
    }
    let lhs = deg.to_integer();
    let rhs = report.parachute.to_integer() + 1;
    Some(lhs <= rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_poly;
    use crate::rational::int;

    fn p(s: &str, n: usize) -> Polynomial {
        parse_poly(s, n).unwrap()
    }

    fn nagata() -> PolyMap {
        "x1 - 2*x2*(x1*x3+x2^2) - x3*(x1*x3+x2^2)^2; x2 + x3*(x1*x3+x2^2); x3".parse().unwrap()
    }

    #[test]
    fn affine_word_has_zero_ideal() {
        let w = AutWord::parse("A 2 1 7 4 | 1 -3", 2).unwrap();
        let rep = relation_report_for_word(&w, &WeightVector::standard(2)).unwrap();
        assert!(rep.is_zero_ideal());
        assert!(rep.principal);
        assert_eq!(rep.relation, Some(Polynomial::zero(2)));
        assert_eq!(rep.bound_ok, Some(true));
    }

    #[test]
    fn elementary_map_report() {
        let m: PolyMap = "x1 + x2^2; x2".parse().unwrap();
        let rep = relation_report(&m, &WeightVector::standard(2)).unwrap();
        assert_eq!(rep.relation, Some(p("x1 - x2^2", 2)));
        assert_eq!(rep.relation_text().unwrap(), "z1 - z2^2");
        assert_eq!(rep.deg2_of_relation, Some(WDegree::int(2)));
        assert_eq!(rep.parachute, int(1));
        assert_eq!(rep.bound_ok, Some(true));
        assert!(rep.oracle_checked);
    }

    #[test]
    fn nagata_report() {
        let rep = relation_report(&nagata(), &WeightVector::standard(3)).unwrap();
        assert_eq!(rep.relation, Some(p("x2^2 + x1*x3", 3)));
        assert_eq!(rep.deg2_of_relation, Some(WDegree::int(6)));
        assert_eq!(rep.parachute, int(6));
        assert_eq!(theorem_bound_integral(&rep), Some(true));
    }

    #[test]
    fn degree_lemma_examples() {
        let m: PolyMap = "x1 + x2^2; x2".parse().unwrap();
        let rep = relation_report(&m, &WeightVector::standard(2)).unwrap();
        let x1 = check_degree_lemma(&m, &rep, &p("x1", 2)).unwrap();
        assert_eq!((x1.lhs.clone(), x1.rhs.clone(), x1.strict), (WDegree::int(2), WDegree::int(2), false));
        assert!(x1.holds());
        let g = check_degree_lemma(&m, &rep, &p("x1 - x2^2", 2)).unwrap();
        assert_eq!((g.lhs.clone(), g.rhs.clone()), (WDegree::int(1), WDegree::int(2)));
        assert!(g.strict && g.tilde_in_ideal && g.holds());
    }

    #[test]
    fn inverse_coordinates_drop_to_degree_one() {
        let m = nagata();
        let inv: PolyMap = "x1 + 2*x2*(x1*x3+x2^2) - x3*(x1*x3+x2^2)^2; x2 - x3*(x1*x3+x2^2); x3".parse().unwrap();
        let rep = relation_report(&m, &WeightVector::standard(3)).unwrap();
        for g in inv.coords().iter().take(2) {
            let lem = check_degree_lemma(&m, &rep, g).unwrap();
            assert_eq!(lem.lhs, WDegree::int(1));
            assert!(lem.tilde_in_ideal && lem.holds());
        }
    }

    #[test]
    fn parachute_examples() {
        let m: PolyMap = "x1 + x2^2; x2".parse().unwrap();
        let rep = relation_report(&m, &WeightVector::standard(2)).unwrap();
        let q = p("x1 - x2^2", 2);
        assert!(check_parachute(&m, &rep, &q, 0, None).unwrap().holds);
        let c = check_parachute(&m, &rep, &q, 1, None).unwrap();
        assert_eq!((c.lhs.clone(), c.rhs.clone()), (WDegree::int(1), WDegree::int(1)));
        assert!(c.holds);
    }

    #[test]
    fn orders_in_relation() {
        let r = p("x1 - x2^2", 2);
        let s = p("x1 + x2 + 3", 2);
        assert_eq!(order_in_r(&(&r.pow(3) * &s), &r), Some(3));
        assert_eq!(order_in_r(&s, &r), Some(0));
        let m: PolyMap = "x1 + x2^2; x2".parse().unwrap();
        let rep = relation_report(&m, &WeightVector::standard(2)).unwrap();
        assert_eq!(order_in_r(&r.leading_term(&rep.d), &r), Some(1));
        assert_eq!(check_order_bound(&m, &rep, &r).unwrap(), Some(true));
    }
}
