use std::fmt;
use std::ops::{Add, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::{rational, Error, Rational, Result};

/// Positive weights `(w_1, ..., w_n)` defining a weighted homogeneous degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeightVector(Vec<Rational>);

impl WeightVector {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::NonPositiveWeight("empty weight vector".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
            return Err(Error::NonPositiveWeight(rational::format(w)));
        }
        Ok(WeightVector(weights))
    }

    pub fn from_integers(weights: &[i64]) -> Result<Self> {
        Self::new(weights.iter().map(|&w| rational::int(w)).collect())
    }

    /// All weights equal to one.
    pub fn standard(n: usize) -> Self {
        WeightVector(vec![Rational::one(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.0
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.0[i]
    }

    pub fn is_standard(&self) -> bool {
        self.0.iter().all(One::is_one)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|w| w.is_integer())
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |acc, w| acc + w)
    }

    pub fn min(&self) -> &Rational {
        self.0.iter().min().expect("non-empty")
    }

    /// Integer weights proportional to these, for order comparisons.
    pub fn scaled_integers(&self) -> Vec<u64> {
        let lcm = self.0.iter().fold(num_bigint::BigInt::one(), |acc, w| num_integer::Integer::lcm(&acc, w.denom()));
        self.0
            .iter()
            .map(|w| {
                let v = w * Rational::from_integer(lcm.clone());
                u64::try_from(v.to_integer()).expect("weight fits in u64")
            })
            .collect()
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(rational::format).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightVector({self})")
    }
}

impl std::str::FromStr for WeightVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let ws = s.split(',').map(|p| rational::parse(p.trim())).collect::<Result<Vec<_>>>()?;
        WeightVector::new(ws)
    }
}

impl Serialize for WeightVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for WeightVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A weighted degree; `MinusInfinity` is the degree of the zero polynomial.
///
/// Variant order makes `MinusInfinity` smaller than every finite value.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WDegree {
    MinusInfinity,
    Finite(Rational),
}

impl WDegree {
    pub fn int(v: i64) -> Self {
        WDegree::Finite(rational::int(v))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            WDegree::MinusInfinity => None,
            WDegree::Finite(v) => Some(v),
        }
    }

    pub fn is_minus_infinity(&self) -> bool {
        matches!(self, WDegree::MinusInfinity)
    }
}

impl Add<&Rational> for &WDegree {
    type Output = WDegree;

    fn add(self, rhs: &Rational) -> WDegree {
        match self {
            WDegree::MinusInfinity => WDegree::MinusInfinity,
            WDegree::Finite(v) => WDegree::Finite(v + rhs),
        }
    }
}

impl Sub<&Rational> for &WDegree {
    type Output = WDegree;

    fn sub(self, rhs: &Rational) -> WDegree {
        match self {
            WDegree::MinusInfinity => WDegree::MinusInfinity,
            WDegree::Finite(v) => WDegree::Finite(v - rhs),
        }
    }
}

impl Add for &WDegree {
    type Output = WDegree;

    fn add(self, rhs: &WDegree) -> WDegree {
        match (self, rhs) {
            (WDegree::Finite(a), WDegree::Finite(b)) => WDegree::Finite(a + b),
            _ => WDegree::MinusInfinity,
        }
    }
}

impl fmt::Display for WDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WDegree::MinusInfinity => write!(f, "-inf"),
            WDegree::Finite(v) => write!(f, "{}", rational::format(v)),
        }
    }
}

impl fmt::Debug for WDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for WDegree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for WDegree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "-inf" {
            return Ok(WDegree::MinusInfinity);
        }
        rational::parse(&s).map(WDegree::Finite).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_positive() {
        assert!(WeightVector::from_integers(&[1, 0]).is_err());
        assert!(WeightVector::from_integers(&[1, -2]).is_err());
        assert!("1,3/2".parse::<WeightVector>().is_ok());
    }

    #[test]
    fn minus_infinity_is_smallest() {
        assert!(WDegree::MinusInfinity < WDegree::int(-1000));
        assert!(WDegree::int(2) < WDegree::int(3));
    }

    #[test]
    fn scaled_integers_clear_denominators() {
        let w: WeightVector = "1/2,1/3,2".parse().unwrap();
        assert_eq!(w.scaled_integers(), vec![3, 2, 12]);
    }
}
