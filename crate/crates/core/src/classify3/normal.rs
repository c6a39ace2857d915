//! Tame normal forms for classified relations.
//!
//! A witness is built by composing the relation on the right with tame
//! generators until it reaches `0`, `x3`, `x1^r + c x2^s` or
//! `x1^k x3 + P(x1, x2)`. The result is checked by expanding the witness
//! and substituting it into the original relation.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::forms::term3;
use super::{Pattern, RelationType};
use crate::autmap::{AutWord, Generator};
use crate::derivation::Derivation;
use crate::rational::{exact_root, serde_str as q};
use crate::{Error, Polynomial, Rational, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form")]
pub enum Canonical {
    Zero,
    X3,
    /// `x1^r + c x2^s`.
    Binomial {
        r: u32,
        s: u32,
        #[serde(with = "q")]
        c: Rational,
    },
    /// `x1^k x3 + P(x1, x2)`.
    TriangularFiber {
        k: u32,
        p: Polynomial,
    },
}

impl Canonical {
    pub fn polynomial(&self) -> Polynomial {
        match self {
            Canonical::Zero => Polynomial::zero(3),
            Canonical::X3 => Polynomial::var(3, 2),
            Canonical::Binomial { r, s, c } => &term3(Rational::one(), *r, 0, 0) + &term3(c.clone(), 0, *s, 0),
            Canonical::TriangularFiber { k, p } => &term3(Rational::one(), *k, 0, 1) + p,
        }
    }

    /// A nonzero locally nilpotent derivation whose kernel contains the form:
    /// `∂/∂x1` for `0` and `x3`, `∂/∂x3` for binomials, and
    /// `x1^k ∂/∂x2 - (∂P/∂x2) ∂/∂x3` for triangular fibers.
    pub fn annihilating_lnd(&self) -> Derivation {
        match self {
            Canonical::Zero | Canonical::X3 => Derivation::partial(3, 0),
            Canonical::Binomial { .. } => Derivation::partial(3, 2),
            Canonical::TriangularFiber { k, p } => {
                Derivation::new(vec![Polynomial::zero(3), term3(Rational::one(), *k, 0, 0), -&p.partial(1)])
                    .expect("three coefficients")
            }
        }
    }
}

/// The normaliser stopped because a rescaling needs `value^(1/degree)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootNeeded {
    #[serde(with = "q")]
    pub value: Rational,
    pub degree: u32,
}

/// `R ∘ expand(witness) = residual_scalar · reduced`, and `reduced` is the
/// canonical polynomial whenever `canonical` is present.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalForm {
    pub canonical: Option<Canonical>,
    pub witness: AutWord,
    #[serde(with = "q")]
    pub residual_scalar: Rational,
    pub reduced: Polynomial,
    pub needs_root: Option<RootNeeded>,
}

impl NormalForm {
    /// Re-run the exact substitution check.
    pub fn verify(&self, r: &Polynomial) -> Result<bool> {
        let lhs = r.compose(self.witness.expand().coords())?;
        Ok(lhs == self.reduced.scale(&self.residual_scalar))
    }
}

struct Builder {
    gens: Vec<Generator>,
    f: Polynomial,
}

impl Builder {
    fn push(&mut self, g: Generator) {
        self.f = self.f.compose(&g.coords(3)).expect("three variables");
        self.gens.push(g);
    }

    fn permute(&mut self, p: [usize; 3]) {
        let moved: Vec<usize> = (0..3).filter(|&i| p[i] != i).collect();
        match moved.as_slice() {
            [] => {}
            [i, j] => self.push(Generator::Transposition(*i, *j)),
            _ => self.push(Generator::permutation(&p).expect("a permutation")),
        }
    }

    fn scale_var(&mut self, i: usize, s: Rational) {
        if !s.is_one() {
            let mut scales = vec![Rational::one(); 3];
            scales[i] = s;
            self.push(Generator::scaling(&scales).expect("nonzero scale"));
        }
    }

    fn elementary(&mut self, target: usize, addend: Polynomial) {
        if !addend.is_zero() {
            self.push(Generator::elementary(target, addend).expect("addend free of target"));
        }
    }

    fn linear(&mut self, rows: [[Rational; 3]; 3]) {
        let matrix = rows.iter().map(|r| r.to_vec()).collect();
        self.push(Generator::affine(matrix, vec![Rational::zero(); 3]).expect("invertible"));
    }
}

/// `γ · x_i^k` with `i` the only variable, or a constant (`k = 0`).
fn single_variable_monomial(c: &Polynomial) -> Option<(Rational, Option<usize>, u32)> {
    if c.len() != 1 {
        return None;
    }
    let (m, g) = c.terms().next()?;
    let vars: Vec<usize> = (0..3).filter(|&i| m.exp(i) > 0).collect();
    match vars.as_slice() {
        [] => Some((g.clone(), None, 0)),
        [i] => Some((g.clone(), Some(*i), m.exp(*i))),
        _ => None,
    }
}

/// `F` linear in some `x_j` with coefficient `γ x_i^k`: move `x_j` to `x3`
/// and `x_i` to `x1`, then rescale `x3`.
fn fiber_route(b: &mut Builder) -> Option<Canonical> {
    for j in [2, 1, 0] {
        if b.f.degree_in(j) != 1 {
            continue;
        }
        let cs = b.f.coefficients_in(j);
        let Some((g, var, k)) = single_variable_monomial(&cs[1]) else { continue };
        let i = var.unwrap_or(if j == 0 { 1 } else { 0 });
        let other = 3 - i - j;
        let mut p = [0usize; 3];
        p[j] = 2;
        p[i] = 0;
        p[other] = 1;
        b.permute(p);
        b.scale_var(2, g.recip());
        let rest = b.f.coefficients_in(2)[0].clone();
        if k == 0 {
            b.elementary(2, -&rest);
            return Some(Canonical::X3);
        }
        return Some(Canonical::TriangularFiber { k, p: rest });
    }
    None
}

/// `α X^r + β Y^s` in two distinct variables: move to `x1, x2` (the `x3`
/// term first) and rescale `x2` when `α/β` has a rational `s`-th root.
fn binomial_route(b: &mut Builder) -> Option<(Canonical, Rational)> {
    if b.f.len() != 2 {
        return None;
    }
    let mut parts = Vec::new();
    for (m, c) in b.f.terms() {
        let vars: Vec<usize> = (0..3).filter(|&i| m.exp(i) > 0).collect();
        let [v] = vars.as_slice() else { return None };
        parts.push((*v, m.exp(*v), c.clone()));
    }
    if parts[0].0 == parts[1].0 {
        return None;
    }
    let (x, y) = if parts[0].0 == 2 || (parts[1].0 != 2 && parts[0].0 < parts[1].0) {
        (parts[0].clone(), parts[1].clone())
    } else {
        (parts[1].clone(), parts[0].clone())
    };
    let mut p = [0usize; 3];
    p[x.0] = 0;
    p[y.0] = 1;
    p[3 - x.0 - y.0] = 2;
    b.permute(p);
    let (alpha, beta) = (x.2, y.2);
    let mut c = &beta / &alpha;
    if let Some(t) = exact_root(&c.recip(), y.1) {
        b.scale_var(1, t);
        c = Rational::one();
    }
    Some((Canonical::Binomial { r: x.1, s: y.1, c }, alpha))
}

/// `α x3^2 + β x2^2 + γ x1^m`: with `δ^2 = -β/α`, substitute
/// `(x1, (x2 - x3)/(2δ), (x2 + x3)/2)` to reach `α x2 x3 + γ x1^m`.
fn square_pair_route(b: &mut Builder) -> std::result::Result<(), RootNeeded> {
    let alpha = b.f.coefficients_in(2)[2].as_constant().expect("square family");
    let beta = b.f.coefficients_in(1).get(2).and_then(Polynomial::as_constant).unwrap_or_else(Rational::zero);
    let value = -&beta / &alpha;
    let Some(delta) = exact_root(&value, 2) else {
        return Err(RootNeeded { value, degree: 2 });
    };
    let z = Rational::zero;
    let half = Rational::new(1.into(), 2.into());
    let inv = (Rational::from_integer(2.into()) * &delta).recip();
    b.linear([[Rational::one(), z(), z()], [z(), inv.clone(), -inv], [z(), half.clone(), half]]);
    Ok(())
}

/// Row-major matrix whose linear forms are `(x1, x2) ↦ rows`, extended by
/// `x3`, inverted so that the rows become the new coordinates.
fn invert_rows(r1: (Rational, Rational), r2: (Rational, Rational)) -> [[Rational; 3]; 3] {
    let det = &r1.0 * &r2.1 - &r1.1 * &r2.0;
    let z = Rational::zero;
    [[&r2.1 / &det, -&r1.1 / &det, z()], [-&r2.0 / &det, &r1.0 / &det, z()], [z(), z(), Rational::one()]]
}

/// Reduce a classified relation to a canonical form with a verified witness.
pub fn normalize(rt: &RelationType) -> Result<NormalForm> {
    let r = rt.reconstruct();
    let mut b = Builder { gens: Vec::new(), f: r.clone() };
    b.elementary(2, -&rt.shift_h);
    let mut needs_root = None;
    match &rt.pattern {
        Pattern::T3 { a, e1, .. } => b.elementary(1, term3(-a.clone(), *e1, 0, 0)),
        Pattern::T9 { .. } => needs_root = square_pair_route(&mut b).err(),
        Pattern::T11 { a1, b1, a2, b2, e1 } if !(b1 * b2).is_zero() => {
            let two = Rational::from_integer(2.into());
            let t = (a1 * b2 + a2 * b1) / (two * b1 * b2);
            b.elementary(1, term3(-t, *e1, 0, 0));
            needs_root = square_pair_route(&mut b).err();
        }
        Pattern::T12 { a1, b1, a2, b2 } => {
            let det = a1 * b2 - b1 * a2;
            if det.is_zero() {
                let completion = if b2.is_zero() {
                    (Rational::zero(), Rational::one())
                } else {
                    (Rational::one(), Rational::zero())
                };
                b.linear(invert_rows(completion, (a2.clone(), b2.clone())));
            } else {
                b.linear(invert_rows((a1.clone(), b1.clone()), (a2.clone(), b2.clone())));
            }
        }
        Pattern::T13 { a, b: bb, e1, .. } => b.elementary(1, term3(-(a / bb), *e1, 0, 0)),
        _ => {}
    }
    let (canonical, residual) = if needs_root.is_some() {
        (None, Rational::one())
    } else if b.f.is_zero() {
        (Some(Canonical::Zero), Rational::one())
    } else if let Some(c) = fiber_route(&mut b) {
        (Some(c), Rational::one())
    } else if let Some((c, s)) = binomial_route(&mut b) {
        (Some(c), s)
    } else {
        return Err(Error::WitnessVerificationFailed(format!(
            "no normal form route for {:?} (reached {})",
            rt.pattern, b.f
        )));
    };
    let reduced = match &canonical {
        Some(c) => c.polynomial(),
        None => b.f.clone(),
    };
    let nf =
        NormalForm { canonical, witness: AutWord::new(3, b.gens)?, residual_scalar: residual, reduced, needs_root };
    if !nf.verify(&r)? {
        return Err(Error::WitnessVerificationFailed(format!(
            "witness {} does not carry {r} to the reported form",
            nf.witness.to_text().replace('\n', "; ")
        )));
    }
    Ok(nf)
}

#[cfg(test)]
mod tests {
    use super::super::classify;
    use super::*;
    use crate::derivation::is_locally_nilpotent;
    use crate::rational::int;
    use crate::{parse_poly, WeightVector};

    fn nf(r: &str, d: &[i64]) -> NormalForm {
        let r = parse_poly(r, 3).unwrap();
        let out = classify(&r, &WeightVector::from_integers(d).unwrap()).unwrap();
        normalize(out.relation_type().expect("classified")).unwrap()
    }

    #[test]
    fn cube_square_goes_to_binomial_by_transposition() {
        let n = nf("x3^2 + 5*x2^3", &[1, 2, 3]);
        assert_eq!(n.canonical, Some(Canonical::Binomial { r: 2, s: 3, c: int(5) }));
        assert_eq!(n.witness.gens(), &[Generator::Transposition(0, 2)]);
        assert_eq!(n.residual_scalar, int(1));
    }

    #[test]
    fn triangular_relation_needs_no_witness() {
        let n = nf("x1*x3 + x2^2", &[1, 3, 5]);
        assert!(n.witness.is_empty());
        assert_eq!(n.canonical, Some(Canonical::TriangularFiber { k: 1, p: parse_poly("x2^2", 3).unwrap() }));
    }

    #[test]
    fn square_binomial_with_rational_root() {
        let n = nf("x3^2 + 2*x1^3 - 9*x2^2", &[2, 3, 3]);
        assert!(matches!(n.canonical, Some(Canonical::TriangularFiber { k: 1, .. })));
        assert!(n.needs_root.is_none());
    }

    #[test]
    fn square_binomial_without_rational_root() {
        let n = nf("x3^2 + 2*x1^3 + 3*x2^2", &[2, 3, 3]);
        assert_eq!(n.canonical, None);
        assert_eq!(n.needs_root, Some(RootNeeded { value: int(-3), degree: 2 }));
    }

    #[test]
    fn shifted_linear_family() {
        let n = nf("(x2 + 3*x1)*(x3 + x1^2) + 2*x1^3", &[1, 1, 2]);
        assert!(matches!(n.canonical, Some(Canonical::TriangularFiber { k: 1, .. })));
    }

    #[test]
    fn canonical_forms_are_annihilated() {
        for (r, d) in [
            ("x3^2 + 5*x2^3", [1, 2, 3]),
            ("x1*x3 + x2^2", [1, 3, 5]),
            ("x3^2 + x1*x2^2", [2, 2, 3]),
            ("2*x3 + x1^3", [1, 2, 3]),
        ] {
            let n = nf(r, &d);
            let c = n.canonical.unwrap();
            let lnd = c.annihilating_lnd();
            assert!(lnd.apply(&c.polynomial()).unwrap().is_zero());
            assert!(is_locally_nilpotent(&lnd, 64).is_locally_nilpotent());
        }
    }
}
