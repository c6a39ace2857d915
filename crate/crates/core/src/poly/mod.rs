//! Sparse multivariate polynomials over the rationals, weighted degrees and
//! leading forms, derivatives, substitution and Jacobians.

mod monomial;
mod parse;
mod weight;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use monomial::Monomial;
pub use parse::{format_poly, format_poly_with, parse_poly};
pub use weight::{WDegree, WeightVector};

use crate::{Error, Rational, Result};

/// A polynomial in `nvars` variables with rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is equality of
/// polynomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

/// Ring operations accepted by [`poly_arith`].
#[derive(Clone, Debug)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Pow(u32),
    Scale(Rational),
}

/// Checked ring operation; `Pow` and `Scale` ignore `b`.
pub fn poly_arith(a: &Polynomial, b: &Polynomial, op: ArithOp) -> Result<Polynomial> {
    match op {
        ArithOp::Pow(k) => return Ok(a.pow(k)),
        ArithOp::Scale(c) => return Ok(a.scale(&c)),
        _ => {}
    }
    a.check_same(b)?;
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Pow(_) | ArithOp::Scale(_) => unreachable!(),
    })
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(Monomial::one(nvars), c)
    }

    /// The variable `x_{i+1}` (zero-based index).
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(Monomial::var(nvars, i), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(m.nvars());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().next().is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Rational)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The constant term.
    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Largest term in lexicographic order.
    pub fn lex_leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &Polynomial) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableCountMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(t, v)| (t.mul(m), v * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut result = Polynomial::one(self.nvars);
        if k == 0 {
            return result;
        }
        let mut base = self.clone();
        let mut e = k;
        loop {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = &base * &base;
        }
        result
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    /// Highest exponent of variable `i` (zero-based); 0 for the zero polynomial.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(i)).max().unwrap_or(0)
    }

    /// Whether variable `i` (zero-based) occurs.
    pub fn involves(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.exp(i) > 0)
    }

    /// Weighted degree; `MinusInfinity` exactly for zero.
    pub fn wdeg(&self, w: &WeightVector) -> WDegree {
        assert_eq!(w.len(), self.nvars, "weight arity");
        self.terms.keys().map(|m| m.weighted_degree(w)).max().map_or(WDegree::MinusInfinity, WDegree::Finite)
    }

    /// Sum of the terms of weighted degree exactly `d`.
    pub fn homogeneous_part(&self, w: &WeightVector, d: &Rational) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| &m.weighted_degree(w) == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Sum of the terms attaining the weighted degree.
    pub fn leading_term(&self, w: &WeightVector) -> Polynomial {
        match self.wdeg(w) {
            WDegree::MinusInfinity => self.clone(),
            WDegree::Finite(d) => self.homogeneous_part(w, &d),
        }
    }

    pub fn is_homogeneous(&self, w: &WeightVector) -> bool {
        let mut degs = self.terms.keys().map(|m| m.weighted_degree(w));
        match degs.next() {
            None => true,
            Some(first) => degs.all(|d| d == first),
        }
    }

    /// Formal partial derivative with respect to variable `i` (zero-based).
    pub fn partial(&self, i: usize) -> Polynomial {
        assert!(i < self.nvars, "partial: index out of range");
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.set_exp(i, e - 1);
            out.terms.insert(dm, c * Rational::from_integer(e.into()));
        }
        out
    }

    /// Partial derivative with a one-based index, as exposed to users.
    pub fn checked_partial(&self, index: usize) -> Result<Polynomial> {
        if index == 0 || index > self.nvars {
            return Err(Error::IndexOutOfRange { index, nvars: self.nvars });
        }
        Ok(self.partial(index - 1))
    }

    /// `k`-fold partial derivative in variable `i` (zero-based).
    pub fn partial_k(&self, i: usize, k: u32) -> Polynomial {
        (0..k).fold(self.clone(), |p, _| p.partial(i))
    }

    /// Substitute `images[i]` for `x_{i+1}`.
    ///
    /// The images may live in a ring with a different number of variables.
    pub fn compose(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.nvars {
            return Err(Error::VariableCountMismatch { left: self.nvars, right: images.len() });
        }
        let target = match images.first() {
            Some(p) => p.nvars,
            None => return Ok(self.clone()),
        };
        if let Some(bad) = images.iter().find(|p| p.nvars != target) {
            return Err(Error::VariableCountMismatch { left: target, right: bad.nvars });
        }
        let mut powers: Vec<Vec<Polynomial>> =
            images.iter().map(|p| vec![Polynomial::one(target), p.clone()]).collect();
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap() * &images[i];
                    cache.push(next);
                }
                term = &term * &cache[e as usize];
            }
            for (tm, tc) in term.terms {
                *acc.entry(tm).or_insert_with(Rational::zero) += tc;
            }
        }
        Ok(Polynomial::from_terms(target, acc))
    }

    /// Re-embed into a ring with `nvars` variables, sending `x_i` to
    /// `x_{map[i]}`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Polynomial {
        assert_eq!(map.len(), self.nvars);
        let mut out = Polynomial::zero(nvars);
        for (m, c) in &self.terms {
            let mut nm = Monomial::one(nvars);
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    nm.set_exp(map[i], nm.exp(map[i]) + e);
                }
            }
            out.add_term(nm, c.clone());
        }
        out
    }

    /// Coefficients as a polynomial in variable `i`: entry `k` multiplies
    /// `x_i^k` and does not involve `x_i`.
    pub fn coefficients_in(&self, i: usize) -> Vec<Polynomial> {
        let mut out = vec![Polynomial::zero(self.nvars); self.degree_in(i) as usize + 1];
        if self.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            let k = m.exp(i) as usize;
            let mut rest = m.clone();
            rest.set_exp(i, 0);
            out[k].terms.insert(rest, c.clone());
        }
        out
    }

    /// Divide by the lexicographically leading coefficient.
    pub fn monic_lex(&self) -> Polynomial {
        match self.lex_leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        assert_eq!(self.nvars, divisor.nvars);
        let (lm, lc) = divisor.lex_leading()?;
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(self.nvars);
        while let Some((m, c)) = rem.lex_leading() {
            let qm = lm.quotient_of(m)?;
            let qc = c / lc;
            rem = &rem - &divisor.mul_monomial(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Largest `k` with `factor^k` dividing `self`. `factor` must be a
    /// non-constant polynomial; the zero polynomial has no finite order and
    /// yields `None`.
    pub fn multiplicity_of(&self, factor: &Polynomial) -> Option<u32> {
        assert!(factor.as_constant().is_none(), "factor must be non-constant");
        if self.is_zero() {
            return None;
        }
        let mut k = 0;
        let mut cur = self.clone();
        while let Some(q) = cur.div_exact(factor) {
            k += 1;
            cur = q;
        }
        Some(k)
    }

    /// Evaluate the derivation-free linear coefficient vector of a
    /// polynomial of degree at most one: `(constant, [coeff of x_1, ...])`.
    pub fn affine_parts(&self) -> Option<(Rational, Vec<Rational>)> {
        if self.total_degree().unwrap_or(0) > 1 {
            return None;
        }
        let lin = (0..self.nvars).map(|i| self.coeff(&Monomial::var(self.nvars, i))).collect();
        Some((self.constant_term(), lin))
    }
}

/// Determinant of `(d P_i / d x_j)`.
pub fn jacobian(ps: &[Polynomial]) -> Result<Polynomial> {
    let n = ps.len();
    if n == 0 {
        return Err(Error::LengthMismatch { expected: 1, found: 0 });
    }
    let nvars = ps[0].nvars;
    if nvars != n {
        return Err(Error::LengthMismatch { expected: nvars, found: n });
    }
    for p in ps {
        ps[0].check_same(p)?;
    }
    let matrix: Vec<Vec<Polynomial>> = ps.iter().map(|p| (0..n).map(|j| p.partial(j)).collect()).collect();
    Ok(determinant(&matrix))
}

/// Determinant of a square polynomial matrix by cofactor expansion.
pub fn determinant(m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    let nvars = m[0][0].nvars;
    let cols: Vec<usize> = (0..n).collect();
    det_rec(m, 0, &cols, nvars)
}

fn det_rec(m: &[Vec<Polynomial>], row: usize, cols: &[usize], nvars: usize) -> Polynomial {
    if cols.len() == 1 {
        return m[row][cols[0]].clone();
    }
    let mut acc = Polynomial::zero(nvars);
    for (k, &c) in cols.iter().enumerate() {
        if m[row][c].is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = det_rec(m, row + 1, &rest, nvars);
        let term = &m[row][c] * &minor;
        acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let (mut big, small) = if self.len() >= rhs.len() { (self.clone(), rhs) } else { (rhs.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(self.len().max(rhs.len()) * 2);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let prod = ca * cb;
                match acc.entry(ma.mul(mb)) {
                    std::collections::hash_map::Entry::Occupied(mut o) => *o.get_mut() += prod,
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(prod);
                    }
                }
            }
        }
        Polynomial { nvars: self.nvars, terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: &Polynomial) -> Polynomial {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        -&self
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(self))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", self.nvars, format_poly(self))
    }
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    nvars: usize,
    expr: String,
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr { nvars: self.nvars, expr: format_poly(self) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PolyRepr::deserialize(d)?;
        parse_poly(&r.expr, r.nvars).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn p(s: &str, n: usize) -> Polynomial {
        parse_poly(s, n).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(p("x1+x2", 2) * p("x1-x2", 2), p("x1^2-x2^2", 2));
    }

    #[test]
    fn pow_zero_and_scale_zero() {
        assert!(p("x1+3*x2", 2).pow(0).is_one());
        assert!(p("x1-x2^2", 2).scale(&int(0)).is_zero());
    }

    #[test]
    fn arith_reports_mismatch() {
        let err = poly_arith(&p("x1", 1), &p("x1", 2), ArithOp::Add).unwrap_err();
        assert_eq!(err, Error::VariableCountMismatch { left: 1, right: 2 });
    }

    #[test]
    fn weighted_degrees() {
        let w13 = WeightVector::from_integers(&[1, 3]).unwrap();
        assert_eq!(p("x1+x2", 2).wdeg(&w13), WDegree::int(3));
        assert_eq!(p("x1+x2", 2).leading_term(&w13), p("x2", 2));
        assert_eq!(Polynomial::zero(2).wdeg(&w13), WDegree::MinusInfinity);
        assert_eq!(p("x1^2*x2", 2).wdeg(&WeightVector::standard(2)), WDegree::int(3));
    }

    #[test]
    fn nagata_first_coordinate_leading_term() {
        let f = p("x1 - 2*x2*(x1*x3+x2^2) - x3*(x1*x3+x2^2)^2", 3);
        let lt = f.leading_term(&WeightVector::standard(3));
        // degree-5 part selected by expanding -x3*(x1*x3+x2^2)^2 by hand
        let expected = p("-x1^2*x3^3 - 2*x1*x2^2*x3^2 - x2^4*x3", 3);
        assert_eq!(lt, expected);
        assert_eq!(lt.leading_term(&WeightVector::standard(3)), lt);
    }

    #[test]
    fn partials() {
        assert_eq!(p("x1-x2^2", 2).partial(1), p("-2*x2", 2));
        assert!(p("7", 2).partial(0).is_zero());
        assert_eq!(p("x3^2+x1*x2^2", 3).partial(2), p("2*x3", 3));
        assert!(p("x1", 2).checked_partial(3).is_err());
    }

    #[test]
    fn composition() {
        let g = p("x1-x2^2", 2);
        let img = [p("x1+x2^2", 2), p("x2", 2)];
        assert_eq!(g.compose(&img).unwrap(), p("x1", 2));
        let id = [p("x1", 2), p("x2", 2)];
        assert_eq!(g.compose(&id).unwrap(), g);
        assert_eq!(p("x1", 2).compose(&img).unwrap(), img[0]);
    }

    #[test]
    fn jacobians() {
        assert!(jacobian(&[p("x1", 3), p("x2", 3), p("x3", 3)]).unwrap().is_one());
        assert_eq!(jacobian(&[p("x2", 2), p("x1", 2)]).unwrap(), p("-1", 2));
        assert!(jacobian(&[p("x1+x2^2", 2), p("x2", 2)]).unwrap().is_one());
        assert!(jacobian(&[p("x1", 2)]).is_err());
    }

    #[test]
    fn exact_division_and_multiplicity() {
        let r = p("x1-x2^2", 2);
        let s = p("x1+x2+1", 2);
        let h = &r.pow(3) * &s;
        assert_eq!(h.div_exact(&r.pow(3)), Some(s.clone()));
        assert_eq!(h.multiplicity_of(&r), Some(3));
        assert_eq!(s.multiplicity_of(&r), Some(0));
        assert_eq!(p("x1^2", 2).div_exact(&p("x1+x2", 2)), None);
    }

    #[test]
    fn coefficients_in_variable() {
        let r = p("x3^2 + 2*x1*x3 + x1^2", 3);
        let c = r.coefficients_in(2);
        assert_eq!(c, vec![p("x1^2", 3), p("2*x1", 3), p("1", 3)]);
    }
}
