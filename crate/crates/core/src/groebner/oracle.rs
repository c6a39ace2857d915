//! Brute-force recomputation of the low-degree part of a ring-map kernel by
//! linear algebra on each graded slice. Shares nothing with Buchberger.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{normal_form, IdealBasis};
use crate::linalg;
use crate::{Error, Monomial, Polynomial, Rational, Result, WeightVector};

/// Exponent vectors `α` with `α·d <= dmax`, grouped by `α·d`.
fn slices(d: &WeightVector, dmax: &Rational) -> BTreeMap<Rational, Vec<Vec<u32>>> {
    let mut out: BTreeMap<Rational, Vec<Vec<u32>>> = BTreeMap::new();
    let mut cur = vec![0u32; d.len()];
    fn rec(
        i: usize,
        acc: Rational,
        d: &WeightVector,
        dmax: &Rational,
        cur: &mut Vec<u32>,
        out: &mut BTreeMap<Rational, Vec<Vec<u32>>>,
    ) {
        if i == d.len() {
            out.entry(acc).or_default().push(cur.clone());
            return;
        }
        let mut a = acc;
        let mut e = 0;
        while &a <= dmax {
            cur[i] = e;
            rec(i + 1, a.clone(), d, dmax, cur, out);
            a += d.get(i);
            e += 1;
        }
        cur[i] = 0;
    }
    rec(0, Rational::zero(), d, dmax, &mut cur, &mut out);
    out
}

struct Powers<'a> {
    images: &'a [Polynomial],
    cache: HashMap<Vec<u32>, Polynomial>,
}

impl Powers<'_> {
    fn get(&mut self, alpha: &[u32]) -> Polynomial {
        if let Some(p) = self.cache.get(alpha) {
            return p.clone();
        }
        let p = match alpha.iter().position(|&e| e > 0) {
            None => Polynomial::one(self.images[0].nvars()),
            Some(i) => {
                let mut beta = alpha.to_vec();
                beta[i] -= 1;
                &self.get(&beta) * &self.images[i]
            }
        };
        self.cache.insert(alpha.to_vec(), p.clone());
        p
    }
}

/// Degree, exponent vectors and kernel basis of one weighted slice.
type Slice = (Rational, Vec<Vec<u32>>, Vec<Vec<Rational>>);

/// Linear basis of each kernel slice, as `(degree, members)`.
fn slice_bases(images: &[Polynomial], d: &WeightVector, dmax: &Rational) -> Result<Vec<Slice>> {
    let n = images.len();
    if d.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: d.len() });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut powers = Powers { images, cache: HashMap::new() };
    let mut out = Vec::new();
    for (deg, alphas) in slices(d, dmax) {
        let expanded: Vec<Polynomial> = alphas.iter().map(|a| powers.get(a)).collect();
        let mut rows: BTreeMap<Monomial, Vec<Rational>> = BTreeMap::new();
        for (col, p) in expanded.iter().enumerate() {
            for (m, c) in p.terms() {
                rows.entry(m.clone()).or_insert_with(|| vec![Rational::zero(); alphas.len()])[col] = c.clone();
            }
        }
        let null = linalg::nullspace(rows.into_values().collect(), alphas.len());
        out.push((deg, alphas, null));
    }
    Ok(out)
}

fn to_poly(n: usize, alphas: &[Vec<u32>], v: &[Rational]) -> Polynomial {
    Polynomial::from_terms(n, alphas.iter().zip(v).map(|(a, c)| (Monomial::from_exponents(a), c.clone())))
}

/// A basis of the kernel of `z_i -> images_i` in every `d`-degree up to
/// `dmax`.
pub fn graded_kernel_oracle(images: &[Polynomial], d: &WeightVector, dmax: &Rational) -> Result<Vec<Polynomial>> {
    let n = images.len();
    Ok(slice_bases(images, d, dmax)?
        .into_iter()
        .flat_map(|(_, alphas, null)| null.into_iter().map(|v| to_poly(n, &alphas, &v)).collect::<Vec<_>>())
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleAgreement {
    /// Dimension of the kernel up to the degree bound.
    pub oracle_dim: usize,
    /// Every oracle element reduces to zero against the basis.
    pub oracle_in_basis: bool,
    /// Basis generators of degree at most the bound.
    pub checked_generators: usize,
    /// Each of those lies in the oracle's span.
    pub basis_in_oracle: bool,
}

impl OracleAgreement {
    pub fn agrees(&self) -> bool {
        self.oracle_in_basis && self.basis_in_oracle
    }
}

/// Mutual membership between a kernel basis and the oracle up to `dmax`.
pub fn oracle_agreement(
    images: &[Polynomial],
    d: &WeightVector,
    dmax: &Rational,
    basis: &IdealBasis,
) -> Result<OracleAgreement> {
    let n = images.len();
    let slices = slice_bases(images, d, dmax)?;
    let mut oracle_dim = 0;
    let mut oracle_in_basis = true;
    for (_, alphas, null) in &slices {
        oracle_dim += null.len();
        for v in null {
            if !normal_form(&to_poly(n, alphas, v), basis).is_zero() {
                oracle_in_basis = false;
            }
        }
    }
    let mut checked = 0;
    let mut basis_in_oracle = true;
    for g in &basis.gens {
        if !g.is_homogeneous(d) {
            basis_in_oracle = false;
            continue;
        }
        let deg = g.wdeg(d);
        let Some(deg) = deg.finite() else { continue };
        if deg > dmax {
            continue;
        }
        checked += 1;
        let Some((_, alphas, null)) = slices.iter().find(|(sd, _, _)| sd == deg) else {
            basis_in_oracle = false;
            continue;
        };
        let v: Vec<Rational> = alphas.iter().map(|a| g.coeff(&Monomial::from_exponents(a))).collect();
        let mut stacked = null.clone();
        let rank_before = linalg::rref(&mut stacked.clone(), alphas.len()).len();
        stacked.push(v);
        let rank_after = linalg::rref(&mut stacked, alphas.len()).len();
        if rank_after != rank_before {
            basis_in_oracle = false;
        }
    }
    Ok(OracleAgreement { oracle_dim, oracle_in_basis, checked_generators: checked, basis_in_oracle })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::{parse_poly, WeightVector};

    fn p(s: &str, n: usize) -> Polynomial {
        parse_poly(s, n).unwrap()
    }

    #[test]
    fn affine_images_have_no_relations() {
        let images = [p("x1 + 3*x2", 2), p("x1 - x2 + 1", 2)];
        let out = graded_kernel_oracle(&images, &WeightVector::standard(2), &int(4)).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn elementary_images() {
        let images = [p("x2^2", 2), p("x2", 2)];
        let d = WeightVector::from_integers(&[2, 1]).unwrap();
        let out = graded_kernel_oracle(&images, &d, &int(2)).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].monic_lex(), p("x1 - x2^2", 2));
        for g in &out {
            assert!(g.compose(&images).unwrap().is_zero());
        }
    }

    #[test]
    fn slices_enumerate_by_degree() {
        let d = WeightVector::from_integers(&[2, 1]).unwrap();
        let s = slices(&d, &int(2));
        assert_eq!(s[&int(0)], vec![vec![0, 0]]);
        assert_eq!(s[&int(2)], vec![vec![0, 2], vec![1, 0]]);
    }
}
