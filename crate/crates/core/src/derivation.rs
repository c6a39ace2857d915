//! Derivations `Σ a_i ∂/∂x_i` of the polynomial ring, their weighted
//! degrees and leading parts, local nilpotence, and the Jacobian
//! derivations built from an inverse automorphism.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::autmap::{deg2_weights, jacobian_constant, AutWord, PolyMap};
use crate::poly::{format_poly, jacobian, parse_poly};
use crate::{Error, Polynomial, Rational, Result, WDegree, WeightVector};

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    coeffs: Vec<Polynomial>,
}

impl Derivation {
    pub fn new(coeffs: Vec<Polynomial>) -> Result<Self> {
        let n = coeffs.len();
        if n == 0 {
            return Err(Error::LengthMismatch { expected: 1, found: 0 });
        }
        if let Some(bad) = coeffs.iter().find(|c| c.nvars() != n) {
            return Err(Error::VariableCountMismatch { left: n, right: bad.nvars() });
        }
        Ok(Derivation { coeffs })
    }

    pub fn zero(n: usize) -> Self {
        Derivation { coeffs: vec![Polynomial::zero(n); n] }
    }

    /// `∂/∂x_i` (zero-based).
    pub fn partial(n: usize, i: usize) -> Self {
        let mut d = Self::zero(n);
        d.coeffs[i] = Polynomial::one(n);
        d
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Polynomial::is_zero)
    }

    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        if p.nvars() != self.nvars() {
            return Err(Error::VariableCountMismatch { left: self.nvars(), right: p.nvars() });
        }
        let mut acc = Polynomial::zero(p.nvars());
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let dp = p.partial(i);
            if !dp.is_zero() {
                acc = &acc + &(a * &dp);
            }
        }
        Ok(acc)
    }

    /// `max_i deg(a_i) - w_i`; `MinusInfinity` for the zero derivation.
    pub fn degree(&self, w: &WeightVector) -> WDegree {
        self.coeffs.iter().enumerate().map(|(i, a)| &a.wdeg(w) - w.get(i)).max().unwrap_or(WDegree::MinusInfinity)
    }

    /// The homogeneous part of degree `degree(w)`.
    pub fn leading(&self, w: &WeightVector) -> Result<Derivation> {
        let r = match self.degree(w) {
            WDegree::MinusInfinity => return Err(Error::ZeroDerivation),
            WDegree::Finite(r) => r,
        };
        let coeffs = self.coeffs.iter().enumerate().map(|(i, a)| a.homogeneous_part(w, &(&r + w.get(i)))).collect();
        Ok(Derivation { coeffs })
    }

    /// `Σ ∂a_i/∂x_i`.
    pub fn divergence(&self) -> Polynomial {
        self.coeffs.iter().enumerate().fold(Polynomial::zero(self.nvars()), |acc, (i, a)| &acc + &a.partial(i))
    }

    /// Largest total degree among the coefficients.
    pub fn max_coeff_degree(&self) -> u64 {
        self.coeffs.iter().filter_map(Polynomial::total_degree).max().unwrap_or(0)
    }

    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let coeffs = text
            .split(['\n', ';'])
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| parse_poly(l, n))
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: coeffs.len() });
        }
        Derivation::new(coeffs)
    }

    pub fn to_text(&self) -> String {
        self.coeffs.iter().map(|c| format!("{}\n", format_poly(c))).collect()
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({})*d{}", format_poly(c), i + 1))
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Derivation({self})")
    }
}

/// `deg_∂(P)`: the index of the last nonvanishing iterate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DerivDegree {
    MinusInfinity,
    Finite(u32),
    Unknown { cap: u32 },
}

pub fn nilpotence_order(d: &Derivation, p: &Polynomial, cap: u32) -> Result<DerivDegree> {
    if p.is_zero() {
        return Ok(DerivDegree::MinusInfinity);
    }
    let mut cur = p.clone();
    for k in 0..cap {
        let next = d.apply(&cur)?;
        if next.is_zero() {
            return Ok(DerivDegree::Finite(k));
        }
        cur = next;
    }
    Ok(DerivDegree::Unknown { cap })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NilpotenceVerdict {
    /// `orders[i]` is the least `k` with `∂^k(x_i) = 0`.
    LocallyNilpotent {
        orders: Vec<u32>,
    },
    NotNilpotent {
        var: usize,
        reason: String,
    },
    Unknown {
        cap: u32,
    },
}

impl NilpotenceVerdict {
    pub fn is_locally_nilpotent(&self) -> bool {
        matches!(self, NilpotenceVerdict::LocallyNilpotent { .. })
    }
}

/// `4 (1 + max coefficient degree) n`.
pub fn default_cap(d: &Derivation) -> u32 {
    let n = d.nvars() as u64;
    (4 * (1 + d.max_coeff_degree()) * n).min(u32::MAX as u64) as u32
}

/// Decide local nilpotence by iterating on the variables.
///
/// Vanishing on every variable within `cap` steps proves local nilpotence.
/// Two sound refutations are tried: a locally nilpotent derivation has zero
/// divergence, and it cannot map a nonzero `a` to a nonzero multiple of `a`.
pub fn is_locally_nilpotent(d: &Derivation, cap: u32) -> NilpotenceVerdict {
    let n = d.nvars();
    let div = d.divergence();
    if !div.is_zero() {
        return NilpotenceVerdict::NotNilpotent { var: 0, reason: format!("nonzero divergence {}", format_poly(&div)) };
    }
    let mut orders = Vec::with_capacity(n);
    for i in 0..n {
        let mut cur = Polynomial::var(n, i);
        let mut k = 0;
        loop {
            let next = d.apply(&cur).expect("same arity");
            if next.is_zero() {
                orders.push(k + 1);
                break;
            }
            if cur.as_constant().is_none() {
                if let Some(b) = next.div_exact(&cur) {
                    return NilpotenceVerdict::NotNilpotent {
                        var: i,
                        reason: format!("maps {} to ({}) times itself", format_poly(&cur), format_poly(&b)),
                    };
                }
            }
            k += 1;
            if k >= cap {
                return NilpotenceVerdict::Unknown { cap };
            }
            cur = next;
        }
    }
    NilpotenceVerdict::LocallyNilpotent { orders }
}

/// `Δ_i`, with coefficient `j` equal to `j(g_1, ..., x_j, ..., g_n)`
/// (`x_j` in slot `i`), where `inv = (g_1, ..., g_n)`.
pub fn delta_derivation(inv: &PolyMap, i: usize) -> Result<Derivation> {
    let n = inv.nvars();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i + 1, nvars: n });
    }
    let mut rows = inv.coords().to_vec();
    let coeffs = (0..n)
        .map(|j| {
            rows[i] = Polynomial::var(n, j);
            jacobian(&rows)
        })
        .collect::<Result<Vec<_>>>()?;
    Derivation::new(coeffs)
}

/// `δ_i = μ⁻¹ ∂/∂x_i`.
pub fn scaled_partial(n: usize, i: usize, mu: &Rational) -> Derivation {
    let mut d = Derivation::zero(n);
    d.coeffs[i] = Polynomial::constant(n, mu.recip());
    d
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LndWitness {
    /// Zero-based index `i` of the chosen `Δ_i`.
    pub index: usize,
    pub d: WeightVector,
    pub delta: Derivation,
    pub delta_degree: WDegree,
    pub leading: Derivation,
    pub verdict: NilpotenceVerdict,
    /// Whether the leading derivation kills the supplied relation.
    pub annihilates_relation: Option<bool>,
}

/// Find the first `i` with `deg₂(Δ_i) >= -w_i` and return the leading part of
/// `Δ_i` together with its nilpotence verdict.
pub fn lnd_witness(phi: &AutWord, w1: &WeightVector, relation: Option<&Polynomial>) -> Result<LndWitness> {
    lnd_witness_for_map(&phi.expand(), &phi.invert().expand(), w1, relation)
}

/// As [`lnd_witness`], for an explicit map and its inverse.
pub fn lnd_witness_for_map(
    map: &PolyMap,
    inv: &PolyMap,
    w1: &WeightVector,
    relation: Option<&Polynomial>,
) -> Result<LndWitness> {
    let n = map.nvars();
    if w1.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: w1.len() });
    }
    jacobian_constant(map)?;
    let d = deg2_weights(map, w1)?;
    for i in 0..n {
        let delta = delta_derivation(inv, i)?;
        let deg = delta.degree(&d);
        if deg < WDegree::Finite(-w1.get(i).clone()) {
            continue;
        }
        let leading = delta.leading(&d)?;
        let verdict = is_locally_nilpotent(&leading, default_cap(&leading));
        let annihilates_relation = match relation {
            Some(r) if !r.is_zero() => Some(leading.apply(r)?.is_zero()),
            _ => None,
        };
        return Ok(LndWitness { index: i, d, delta, delta_degree: deg, leading, verdict, annihilates_relation });
    }
    Err(Error::NoWitnessIndex)
}

/// Checks `Δ_i(P)∘Φ = μ⁻¹ ∂(P∘Φ)/∂x_i` and `Δ_i(P∘Φ⁻¹) = μ⁻¹ (∂P/∂x_i)∘Φ⁻¹`.
pub fn check_delta_identity(map: &PolyMap, inv: &PolyMap, p: &Polynomial, i: usize) -> Result<bool> {
    let mu = jacobian_constant(map)?;
    let n = map.nvars();
    let delta = delta_derivation(inv, i)?;
    let lhs = delta.apply(p)?.compose(map.coords())?;
    let rhs = scaled_partial(n, i, &mu).apply(&p.compose(map.coords())?)?;
    if lhs != rhs {
        return Ok(false);
    }
    let p_inv = p.compose(inv.coords())?;
    let lhs2 = delta.apply(&p_inv)?;
    let rhs2 = p.partial(i).compose(inv.coords())?.scale(&mu.recip());
    Ok(lhs2 == rhs2 && !mu.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn p(s: &str, n: usize) -> Polynomial {
        parse_poly(s, n).unwrap()
    }

    fn der(s: &str, n: usize) -> Derivation {
        Derivation::parse(s, n).unwrap()
    }

    #[test]
    fn application() {
        assert_eq!(Derivation::partial(1, 0).apply(&p("x1^2", 1)).unwrap(), p("2*x1", 1));
        assert!(der("x2; x1", 2).apply(&p("7", 2)).unwrap().is_zero());
        assert!(der("2*x2; 1", 2).apply(&p("x1 - x2^2", 2)).unwrap().is_zero());
    }

    #[test]
    fn degrees() {
        let w = WeightVector::from_integers(&[2, 1]).unwrap();
        assert_eq!(Derivation::partial(2, 0).degree(&w), WDegree::int(-2));
        assert_eq!(Derivation::zero(2).degree(&w), WDegree::MinusInfinity);
        assert_eq!(der("2*x2; 1", 2).degree(&w), WDegree::int(-1));
    }

    #[test]
    fn leading_parts() {
        let w = WeightVector::from_integers(&[2, 1]).unwrap();
        let d = der("2*x2; 1", 2);
        assert_eq!(d.leading(&w).unwrap(), d);
        assert_eq!(der("2*x2 + 1; 1", 2).leading(&w).unwrap(), d);
        let std = WeightVector::standard(2);
        assert_eq!(der("1; x1", 2).leading(&std).unwrap(), der("0; x1", 2));
        assert_eq!(Derivation::zero(2).leading(&std), Err(Error::ZeroDerivation));
    }

    #[test]
    fn orders() {
        let d = Derivation::partial(1, 0);
        assert_eq!(nilpotence_order(&d, &Polynomial::zero(1), 5).unwrap(), DerivDegree::MinusInfinity);
        assert_eq!(nilpotence_order(&d, &p("x1^3", 1), 10).unwrap(), DerivDegree::Finite(3));
        assert_eq!(nilpotence_order(&d, &p("x1^3", 1), 2).unwrap(), DerivDegree::Unknown { cap: 2 });
    }

    #[test]
    fn nilpotence_verdicts() {
        let v = is_locally_nilpotent(&Derivation::partial(3, 2), 10);
        assert_eq!(v, NilpotenceVerdict::LocallyNilpotent { orders: vec![1, 1, 2] });
        assert!(matches!(is_locally_nilpotent(&der("x1", 1), 50), NilpotenceVerdict::NotNilpotent { .. }));
        // x1^2 d2 - dP/dx2 d3 with P = x1 x2^3 + x2^2
        let d = der("0; x1^2; -3*x1*x2^2 - 2*x2", 3);
        assert!(is_locally_nilpotent(&d, default_cap(&d)).is_locally_nilpotent());
        // a rotation has zero divergence and never vanishes
        assert_eq!(is_locally_nilpotent(&der("x2; -x1", 2), 12), NilpotenceVerdict::Unknown { cap: 12 });
    }

    #[test]
    fn jacobian_derivations() {
        let id = PolyMap::identity(2);
        assert_eq!(delta_derivation(&id, 0).unwrap(), Derivation::partial(2, 0));
        let inv: PolyMap = "x1 - x2^2; x2".parse().unwrap();
        assert_eq!(delta_derivation(&inv, 1).unwrap(), der("2*x2; 1", 2));
        for i in 0..2 {
            let d = delta_derivation(&inv, i).unwrap();
            for (j, g) in inv.coords().iter().enumerate() {
                let expected = if i == j { int(1) } else { int(0) };
                assert_eq!(d.apply(g).unwrap().as_constant(), Some(expected));
            }
        }
    }

    #[test]
    fn witness_for_elementary_map() {
        let w = AutWord::parse("E 1 x2^2", 2).unwrap();
        let r = p("x1 - x2^2", 2);
        let wit = lnd_witness(&w, &WeightVector::standard(2), Some(&r)).unwrap();
        assert_eq!(wit.index, 1);
        assert_eq!(wit.leading, der("2*x2; 1", 2));
        assert!(wit.verdict.is_locally_nilpotent());
        assert_eq!(wit.annihilates_relation, Some(true));
    }

    #[test]
    fn witness_for_affine_map_has_constant_coefficients() {
        let w = AutWord::parse("A 2 1 7 4 | 1 -3", 2).unwrap();
        let wit = lnd_witness(&w, &WeightVector::standard(2), None).unwrap();
        assert_eq!(wit.index, 0);
        assert!(wit.leading.coeffs().iter().all(|c| c.as_constant().is_some()));
    }

    #[test]
    fn witness_for_nagata_map() {
        // The inverse fixes s = x1 x3 + x2^2 and x3, so only signs change.
        let map: PolyMap = "x1 - 2*x2*(x1*x3+x2^2) - x3*(x1*x3+x2^2)^2; x2 + x3*(x1*x3+x2^2); x3".parse().unwrap();
        let inv: PolyMap = "x1 + 2*x2*(x1*x3+x2^2) - x3*(x1*x3+x2^2)^2; x2 - x3*(x1*x3+x2^2); x3".parse().unwrap();
        assert!(map.compose(&inv).unwrap().is_identity());
        let r = p("x2^2 + x1*x3", 3);
        let wit = lnd_witness_for_map(&map, &inv, &WeightVector::standard(3), Some(&r)).unwrap();
        assert!(wit.verdict.is_locally_nilpotent());
        assert_eq!(wit.annihilates_relation, Some(true));
    }

    #[test]
    fn delta_identity_on_tame_word() {
        let w = AutWord::parse("A 2 1 7 4 | 1 -3; E 2 x1^3 - x1; T 1 2; E 1 5*x2^2", 2).unwrap();
        let (m, inv) = (w.expand(), w.invert().expand());
        let q = p("x1^2*x2 - 3*x2 + 1", 2);
        for i in 0..2 {
            assert!(check_delta_identity(&m, &inv, &q, i).unwrap());
        }
    }
}
