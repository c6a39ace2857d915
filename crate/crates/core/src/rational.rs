//! Helpers around the exact rational type.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::{Error, Rational, Result};

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `p/q`, or just `p` when the denominator is one.
pub fn format(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse(s: &str) -> Result<Rational> {
    let err = || Error::Syntax { pos: 0, msg: format!("invalid rational `{s}`") };
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(n, d))
        }
        None => s.parse::<BigInt>().map(Rational::from_integer).map_err(|_| err()),
    }
}

/// Exact `k`-th root, if it exists in the rationals.
pub fn exact_root(r: &Rational, k: u32) -> Option<Rational> {
    if k == 0 {
        return None;
    }
    if r.is_zero() {
        return Some(Rational::zero());
    }
    let neg = r.is_negative();
    if neg && k.is_multiple_of(2) {
        return None;
    }
    let root_of = |v: &BigInt| -> Option<BigInt> {
        let a = v.abs();
        let c = a.nth_root(k);
        (num_traits::pow(c.clone(), k as usize) == a).then_some(c)
    };
    let n = root_of(r.numer())?;
    let d = root_of(r.denom())?;
    let root = Rational::new(n, d);
    Some(if neg { -root } else { root })
}

/// Serde adapter storing a rational as its `p/q` string.
pub mod serde_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a list of rational pairs, as `[["p/q", "p/q"], ...]`.
pub mod serde_pairs {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[(Rational, Rational)], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter().map(|(a, b)| (format(a), format(b))).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<(Rational, Rational)>, D::Error> {
        Vec::<(String, String)>::deserialize(d)?
            .iter()
            .map(|(a, b)| Ok((parse(a)?, parse(b)?)))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots() {
        assert_eq!(exact_root(&ratio(9, 4), 2), Some(ratio(3, 2)));
        assert_eq!(exact_root(&int(-8), 3), Some(int(-2)));
        assert_eq!(exact_root(&int(-4), 2), None);
        assert_eq!(exact_root(&int(5), 3), None);
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse(" -6/4 ").unwrap(), ratio(-3, 2));
        assert_eq!(format(&ratio(-3, 2)), "-3/2");
        assert_eq!(format(&int(7)), "7");
        assert!(parse("1/0").is_err());
    }
}
