//! Binary forms in `x1, x2`: term access, discriminants and splitting into
//! linear factors over the rationals.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Monomial, Polynomial, Rational, Result};

/// Terms of a polynomial in `x1, x2` keyed by `(α1, α2)`.
pub(crate) type BinTerms = BTreeMap<(u32, u32), Rational>;

/// `None` when the polynomial involves a variable other than `x1, x2`.
pub(crate) fn binary_terms(q: &Polynomial) -> Option<BinTerms> {
    let mut out = BinTerms::new();
    for (m, c) in q.terms() {
        if m.exponents().iter().skip(2).any(|&e| e > 0) {
            return None;
        }
        out.insert((m.exp(0), m.exp(1)), c.clone());
    }
    Some(out)
}

pub(crate) fn coeff(t: &BinTerms, key: (u32, u32)) -> Rational {
    t.get(&key).cloned().unwrap_or_else(Rational::zero)
}

/// Exactly the monomials `keys`, all with nonzero coefficients.
pub(crate) fn exactly(t: &BinTerms, keys: &[(u32, u32)]) -> bool {
    t.len() == keys.len() && keys.iter().all(|k| t.contains_key(k))
}

pub(crate) fn monomial3(a1: u32, a2: u32, a3: u32) -> Monomial {
    Monomial::from_exponents(&[a1, a2, a3])
}

/// `c·x1^a1·x2^a2·x3^a3` in three variables.
pub(crate) fn term3(c: Rational, a1: u32, a2: u32, a3: u32) -> Polynomial {
    Polynomial::monomial(monomial3(a1, a2, a3), c)
}

/// `a·x1^e1 + b·x2^e2` in three variables.
pub(crate) fn binomial3(a: &Rational, e1: u32, b: &Rational, e2: u32) -> Polynomial {
    &term3(a.clone(), e1, 0, 0) + &term3(b.clone(), 0, e2, 0)
}

pub(crate) fn quadratic_discriminant(a: &Rational, b: &Rational, c: &Rational) -> Rational {
    b * b - Rational::from_integer(4.into()) * a * c
}

/// Discriminant of `a u³ + b u²v + c uv² + d v³`.
pub(crate) fn cubic_discriminant(a: &Rational, b: &Rational, c: &Rational, d: &Rational) -> Rational {
    let k = |v: i64| Rational::from_integer(v.into());
    b * b * c * c - k(4) * a * c * c * c - k(4) * b * b * b * d - k(27) * a * a * d * d + k(18) * a * b * c * d
}

/// Positive divisors of `n`, or `None` beyond the search limit.
fn divisors(n: &BigInt) -> Option<Vec<u64>> {
    const LIMIT: u64 = 1_000_000_000_000;
    let n = n.abs().to_u64().filter(|&v| v > 0 && v <= LIMIT)?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i * i != n {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

/// Horner evaluation of `Σ g[i] t^i`.
fn eval(g: &[Rational], t: &Rational) -> Rational {
    g.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
}

/// Quotient of `g` by `t - root`; `g(root)` must be zero.
fn deflate(g: &[Rational], root: &Rational) -> Vec<Rational> {
    let n = g.len() - 1;
    let mut q = vec![Rational::zero(); n];
    let mut carry = Rational::zero();
    for i in (1..=n).rev() {
        carry = &g[i] + &carry * root;
        q[i - 1] = carry.clone();
    }
    q
}

/// Rational roots of `Σ g[i] t^i` with multiplicity, by the rational root
/// test. `None` when the coefficients are too large to search.
pub(crate) fn rational_roots(g: &[Rational]) -> Option<Vec<Rational>> {
    let mut g: Vec<Rational> = g.to_vec();
    while g.last().is_some_and(Zero::is_zero) {
        g.pop();
    }
    let mut roots = Vec::new();
    while g.len() > 1 && g[0].is_zero() {
        g.remove(0);
        roots.push(Rational::zero());
    }
    if g.len() <= 1 {
        return Some(roots);
    }
    let lcm = g.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = g.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let ps = divisors(&ints[0])?;
    let qs = divisors(ints.last().expect("nonempty"))?;
    let mut candidates: Vec<Rational> = Vec::new();
    for p in &ps {
        for q in &qs {
            let r = Rational::new(BigInt::from(*p), BigInt::from(*q));
            for s in [r.clone(), -r] {
                if !candidates.contains(&s) {
                    candidates.push(s);
                }
            }
        }
    }
    for cand in candidates {
        while g.len() > 1 && eval(&g, &cand).is_zero() {
            g = deflate(&g, &cand);
            roots.push(cand.clone());
        }
    }
    Some(roots)
}

/// `Σ coeffs[i] u^i v^(k-i) = c·∏ (a_j u + b_j v)` over the rationals.
/// Factors are normalised to `(1, 0)`, `(0, 1)` or `(1, -ρ)`.
pub(crate) fn split_binary(coeffs: &[Rational]) -> Option<(Rational, Vec<(Rational, Rational)>)> {
    let lo = coeffs.iter().position(|c| !c.is_zero())?;
    let hi = coeffs.iter().rposition(|c| !c.is_zero())?;
    let k = coeffs.len() - 1;
    let c = coeffs[hi].clone();
    let mut pairs = Vec::new();
    pairs.extend((0..lo).map(|_| (Rational::one(), Rational::zero())));
    pairs.extend((0..k - hi).map(|_| (Rational::zero(), Rational::one())));
    let roots = rational_roots(&coeffs[lo..=hi])?;
    if roots.len() != hi - lo {
        return None;
    }
    pairs.extend(roots.into_iter().map(|r| (Rational::one(), -r)));
    Some((c, pairs))
}

/// `Q = c · x1^r1 · x2^r2 · ∏ (a_i x1^e1 + b_i x2^e2)` with `r_l < e_l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryFactorization {
    #[serde(with = "crate::rational::serde_str")]
    pub c: Rational,
    pub e1: u32,
    pub e2: u32,
    pub r1: u32,
    pub r2: u32,
    #[serde(with = "crate::rational::serde_pairs")]
    pub pairs: Vec<(Rational, Rational)>,
}

impl BinaryFactorization {
    pub fn k(&self) -> usize {
        self.pairs.len()
    }

    /// Multiply the factorization back out, in `nvars` variables.
    pub fn expand(&self, nvars: usize) -> Polynomial {
        let mono = |a1: u32, a2: u32| {
            let mut e = vec![0; nvars];
            e[0] = a1;
            e[1] = a2;
            Monomial::from_exponents(&e)
        };
        let mut acc = Polynomial::monomial(mono(self.r1, self.r2), self.c.clone());
        for (a, b) in &self.pairs {
            let mut f = Polynomial::monomial(mono(self.e1, 0), a.clone());
            f.add_term(mono(0, self.e2), b.clone());
            acc = &acc * &f;
        }
        acc
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormFactoring {
    Factored(BinaryFactorization),
    /// The form has an irreducible factor of degree at least two over the
    /// rationals.
    NeedsExtension(String),
}

/// Factor a weighted-homogeneous binary form into weighted linear factors
/// `a x1^e1 + b x2^e2`, with `e1 = d2/g`, `e2 = d1/g`, `g = gcd(d1, d2)`.
pub fn factor_weighted_binary_form(q: &Polynomial, d1: u64, d2: u64) -> Result<FormFactoring> {
    if d1 == 0 || d2 == 0 {
        return Err(Error::InvalidWeights(format!("{d1},{d2}")));
    }
    let t = binary_terms(q).ok_or_else(|| Error::NotHomogeneous(format!("{q} involves x3")))?;
    if t.is_empty() {
        return Err(Error::NotHomogeneous("zero form".into()));
    }
    let g = d1.gcd(&d2);
    let (e1, e2) = ((d2 / g) as u32, (d1 / g) as u32);
    let (&(a1, a2), _) = t.iter().next().expect("nonempty");
    let (r1, r2) = (a1 % e1, a2 % e2);
    let k = (a1 - r1) / e1 + (a2 - r2) / e2;
    let mut coeffs = vec![Rational::zero(); k as usize + 1];
    for ((b1, b2), c) in &t {
        if b1 % e1 != r1 || b2 % e2 != r2 || (b1 - r1) / e1 + (b2 - r2) / e2 != k {
            return Err(Error::NotHomogeneous(format!("{q} for weights {d1},{d2}")));
        }
        coeffs[((b1 - r1) / e1) as usize] = c.clone();
    }
    let Some((c, pairs)) = split_binary(&coeffs) else {
        return Ok(FormFactoring::NeedsExtension(format!(
            "{q} has no splitting into factors a*x1^{e1} + b*x2^{e2} over the rationals"
        )));
    };
    Ok(FormFactoring::Factored(BinaryFactorization { c, e1, e2, r1, r2, pairs }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_poly;
    use crate::rational::int;

    fn p(s: &str) -> Polynomial {
        parse_poly(s, 3).unwrap()
    }

    fn factored(q: &str, d1: u64, d2: u64) -> BinaryFactorization {
        match factor_weighted_binary_form(&p(q), d1, d2).unwrap() {
            FormFactoring::Factored(f) => f,
            other => panic!("{other:?}"),
        }
    }

    fn sorted(v: &[(Rational, Rational)]) -> Vec<(Rational, Rational)> {
        let mut v = v.to_vec();
        v.sort();
        v
    }

    #[test]
    fn monomials_are_degenerate_factors() {
        let f = factored("x1*x2^2", 2, 2);
        assert_eq!((f.e1, f.e2, f.r1, f.r2, f.k()), (1, 1, 0, 0, 3));
        assert_eq!(sorted(&f.pairs), vec![(int(0), int(1)), (int(0), int(1)), (int(1), int(0))]);
    }

    #[test]
    fn irreducible_weighted_binomial() {
        let f = factored("x1^4 + x2^3", 3, 4);
        assert_eq!((f.e1, f.e2, f.r1, f.r2, f.k()), (4, 3, 0, 0, 1));
        assert_eq!(f.pairs, vec![(int(1), int(1))]);
    }

    #[test]
    fn difference_of_squares() {
        let f = factored("(x1^2 + x2)*(x1^2 - x2)", 1, 2);
        assert_eq!((f.e1, f.e2, f.k()), (2, 1, 2));
        assert_eq!(sorted(&f.pairs), vec![(int(1), int(-1)), (int(1), int(1))]);
        assert_eq!(f.expand(3), p("x1^4 - x2^2"));
    }

    #[test]
    fn residues_are_split_off() {
        let f = factored("x1^5*x2 + 3*x1^2*x2^2", 1, 3);
        assert_eq!((f.e1, f.e2, f.r1, f.r2), (3, 1, 2, 0));
        assert_eq!(f.expand(3), p("x1^5*x2 + 3*x1^2*x2^2"));
    }

    #[test]
    fn irrational_roots_need_an_extension() {
        let out = factor_weighted_binary_form(&p("x1^2 - 2*x2^2"), 1, 1).unwrap();
        assert!(matches!(out, FormFactoring::NeedsExtension(_)));
    }

    #[test]
    fn rejects_inhomogeneous_forms() {
        assert!(factor_weighted_binary_form(&p("x1^2 + x2^3"), 1, 1).is_err());
    }

    #[test]
    fn rational_root_search() {
        let roots = rational_roots(&[int(-6), int(11), int(-6), int(1)]).unwrap();
        assert_eq!(roots.len(), 3);
        let mut half = rational_roots(&[int(1), int(-4), int(4)]).unwrap();
        half.sort();
        assert_eq!(half, vec![crate::rational::ratio(1, 2); 2]);
    }

    #[test]
    fn cubic_discriminant_detects_repeated_roots() {
        assert!(cubic_discriminant(&int(1), &int(0), &int(-3), &int(2)).is_zero());
        assert!(!cubic_discriminant(&int(1), &int(0), &int(-1), &int(0)).is_zero());
    }
}
