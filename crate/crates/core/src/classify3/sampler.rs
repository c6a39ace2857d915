//! Random members of each admissible family and each impossible family.

use num_integer::Integer;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::forms::{cubic_discriminant, quadratic_discriminant, term3};
use super::{Pattern, RelationType, Tag};
use crate::rational::int;
use crate::{Error, Polynomial, Rational, Result, WeightVector};

/// What the classifier should report for a sample.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[allow(clippy::large_enum_variant)]
pub enum Expected {
    Line(RelationType),
    Forbidden(u8),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    pub d: [u64; 3],
    pub r: Polynomial,
    pub expected: Expected,
}

impl Sample {
    pub fn weights(&self) -> WeightVector {
        WeightVector::from_integers(&self.d.map(|v| v as i64)).expect("positive weights")
    }

    pub fn expected_tag(&self) -> Option<Tag> {
        match &self.expected {
            Expected::Line(rt) => Some(rt.tag()),
            Expected::Forbidden(_) => None,
        }
    }
}

fn nonzero<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let v = rng.random_range(1..=5);
    int(if rng.random_bool(0.5) { v } else { -v })
}

fn small<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    int(rng.random_range(-3..=3))
}

/// Random polynomial in `x1, x2` of weighted degree `deg` (possibly zero).
fn homogeneous_x12<R: Rng + ?Sized>(rng: &mut R, d1: u64, d2: u64, deg: u64) -> Polynomial {
    let mut p = Polynomial::zero(3);
    for a2 in 0..=deg / d2 {
        let rest = deg - a2 * d2;
        if rest.is_multiple_of(d1) {
            p = &p + &term3(small(rng), (rest / d1) as u32, a2 as u32, 0);
        }
    }
    p
}

fn ascending<R: Rng + ?Sized>(rng: &mut R, lo: u64, hi: u64) -> [u64; 3] {
    let mut d = [rng.random_range(lo..=hi), rng.random_range(lo..=hi), rng.random_range(lo..=hi)];
    d.sort_unstable();
    d
}

fn line(d: [u64; 3], pattern: Pattern, shift_h: Polynomial, scalar: Rational) -> Sample {
    let rt = RelationType { pattern, shift_h, scalar };
    Sample { d, r: rt.reconstruct(), expected: Expected::Line(rt) }
}

/// A random relation of the given family with weights that make it
/// homogeneous, shifted in `x3` and scaled.
pub fn sample_line<R: Rng + ?Sized>(tag: Tag, rng: &mut R) -> Sample {
    let t = rng.random_range(1..=3u64);
    let scalar = nonzero(rng);
    let shifted = |rng: &mut R, d: [u64; 3]| homogeneous_x12(rng, d[0], d[1], d[2]);
    match tag {
        Tag::Zero => line(ascending(rng, 1, 6), Pattern::Zero, Polynomial::zero(3), Rational::from_integer(1.into())),
        Tag::ElemReducible => {
            let d = ascending(rng, 1, 6);
            let h = shifted(rng, d);
            line(d, Pattern::ElemReducible, h, scalar)
        }
        Tag::TwoVarBinomial => {
            let (e1, e2) = loop {
                let e1 = rng.random_range(1..=5u32);
                let e2 = rng.random_range(1..=e1);
                if e1.gcd(&e2) == 1 {
                    break (e1, e2);
                }
            };
            let (d1, d2) = (t * u64::from(e2), t * u64::from(e1));
            let d = [d1, d2, d2 + rng.random_range(0..=3)];
            line(d, Pattern::TwoVarBinomial { c: nonzero(rng), e1, e2 }, Polynomial::zero(3), scalar)
        }
        Tag::T3 => {
            let e1 = rng.random_range(1..=3u32);
            let k = rng.random_range(2 * e1..=2 * e1 + 3);
            let d = [t, t * u64::from(e1), t * u64::from(k - e1)];
            let h = shifted(rng, d);
            line(d, Pattern::T3 { a: nonzero(rng), e1, c: nonzero(rng), k }, h, scalar)
        }
        Tag::T4 => loop {
            let d = ascending(rng, 1, 6);
            let k = rng.random_range(1..=3u32);
            let p = homogeneous_x12(rng, d[0], d[1], u64::from(k) * d[0] + d[2]);
            if !p.is_zero() {
                break line(d, Pattern::T4 { k, p }, Polynomial::zero(3), scalar);
            }
        },
        Tag::T5 => {
            let d = [rng.random_range(1..=2 * t), 2 * t, 3 * t];
            let h = shifted(rng, d);
            line(d, Pattern::T5 { c: nonzero(rng) }, h, scalar)
        }
        Tag::T6 => {
            let d2 = rng.random_range(2 * t..=4 * t);
            let d = [2 * t, d2, t + d2];
            let h = shifted(rng, d);
            line(d, Pattern::T6 { c: nonzero(rng) }, h, scalar)
        }
        Tag::T7 => {
            let r1 = 2 * rng.random_range(1..=3u32) + 1;
            let d = [2 * t, rng.random_range(2 * t..=u64::from(r1) * t), u64::from(r1) * t];
            let h = shifted(rng, d);
            line(d, Pattern::T7 { c: nonzero(rng), r1 }, h, scalar)
        }
        Tag::T8 => loop {
            let r1 = rng.random_range(1..=4u32);
            let d1 = rng.random_range(1..=3u64);
            let d2 = rng.random_range(d1..=u64::from(r1) * d1);
            if (u64::from(r1) * d1 + d2) % 2 == 0 {
                let d = [d1, d2, (u64::from(r1) * d1 + d2) / 2];
                let h = shifted(rng, d);
                break line(d, Pattern::T8 { c: nonzero(rng), r1 }, h, scalar);
            }
        },
        Tag::T9 => {
            let e1 = 2 * rng.random_range(1..=3u32) + 1;
            let d = [2 * t, u64::from(e1) * t, u64::from(e1) * t];
            let h = shifted(rng, d);
            line(d, Pattern::T9 { a: nonzero(rng), e1, b: nonzero(rng) }, h, scalar)
        }
        Tag::T10 => loop {
            let e1 = rng.random_range(1..=3u32);
            let r1 = rng.random_range(e1..=e1 + 3);
            let d1 = rng.random_range(1..=2u64);
            if (u64::from(e1 + r1) * d1) % 2 == 0 {
                let d = [d1, u64::from(e1) * d1, u64::from(e1 + r1) * d1 / 2];
                let h = shifted(rng, d);
                break line(d, Pattern::T10 { a: nonzero(rng), e1, b: nonzero(rng), r1 }, h, scalar);
            }
        },
        Tag::T11 => loop {
            let e1 = rng.random_range(1..=3u32);
            let (a1, b1, a2, b2) = (small(rng), nonzero(rng), small(rng), nonzero(rng));
            if !(&a1 * &b2 - &b1 * &a2).is_zero() {
                let d = [t, u64::from(e1) * t, u64::from(e1) * t];
                let h = shifted(rng, d);
                break line(d, Pattern::T11 { a1, b1, a2, b2, e1 }, h, scalar);
            }
        },
        Tag::T12 => {
            let d = [2 * t, 2 * t, 3 * t];
            let (a1, b1) = loop {
                let (a, b) = (small(rng), small(rng));
                if !(a.is_zero() && b.is_zero()) {
                    break (a, b);
                }
            };
            let h = shifted(rng, d);
            line(d, Pattern::T12 { a1, b1, a2: nonzero(rng), b2: nonzero(rng) }, h, scalar)
        }
        Tag::T13 => {
            let e1 = rng.random_range(2..=3u32);
            let d = [2 * t, 2 * u64::from(e1) * t, u64::from(2 * e1 + 1) * t];
            let h = shifted(rng, d);
            line(d, Pattern::T13 { c: nonzero(rng), a: nonzero(rng), b: nonzero(rng), e1 }, h, scalar)
        }
    }
}

/// A random member of impossible family `idx` (1 to 6).
pub fn sample_forbidden<R: Rng + ?Sized>(idx: u8, rng: &mut R) -> Result<Sample> {
    let t = rng.random_range(1..=2u64);
    let (d, q) = match idx {
        1 => ([3 * t, 4 * t, 6 * t], &term3(nonzero(rng), 4, 0, 0) + &term3(nonzero(rng), 0, 3, 0)),
        2 => ([6 * t, 10 * t, 15 * t], &term3(nonzero(rng), 5, 0, 0) + &term3(nonzero(rng), 0, 3, 0)),
        3 => {
            let e = rng.random_range(1..=3u32);
            let (a, b, c) = loop {
                let (a, b, c) = (small(rng), small(rng), nonzero(rng));
                if !quadratic_discriminant(&a, &b, &c).is_zero() {
                    break (a, b, c);
                }
            };
            let q = &(&term3(a, 2 * e + 1, 0, 0) + &term3(b, e + 1, 1, 0)) + &term3(c, 1, 2, 0);
            ([2 * t, 2 * u64::from(e) * t, u64::from(2 * e + 1) * t], q)
        }
        4 => {
            let cs = loop {
                let cs: Vec<Rational> = (0..4).map(|_| small(rng)).collect();
                // A nonzero x2^3 term keeps x1 from dividing the cubic.
                if !cs[3].is_zero() && !cubic_discriminant(&cs[0], &cs[1], &cs[2], &cs[3]).is_zero() {
                    break cs;
                }
            };
            let q = (0..4u32).fold(Polynomial::zero(3), |acc, i| &acc + &term3(cs[i as usize].clone(), 3 - i, i, 0));
            ([2 * t, 2 * t, 3 * t], q)
        }
        5 => ([4 * t, 6 * t, 9 * t], &term3(nonzero(rng), 3, 1, 0) + &term3(nonzero(rng), 0, 3, 0)),
        6 => {
            let e = 2 * rng.random_range(1..=3u32) + 1;
            let q = &term3(nonzero(rng), e + 1, 0, 0) + &term3(nonzero(rng), 1, 2, 0);
            ([2 * t, u64::from(e) * t, u64::from(e + 1) * t], q)
        }
        _ => return Err(Error::UnknownFamily(idx)),
    };
    let h = homogeneous_x12(rng, d[0], d[1], d[2]);
    let x3 = &Polynomial::var(3, 2) + &h;
    let r = (&x3.pow(2) + &q).scale(&nonzero(rng));
    Ok(Sample { d, r, expected: Expected::Forbidden(idx) })
}

#[cfg(test)]
mod tests {
    use super::super::{classify, ClassifyOutcome};
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_homogeneous() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for tag in std::iter::once(Tag::Zero).chain(Tag::NONZERO) {
            for _ in 0..10 {
                let s = sample_line(tag, &mut rng);
                assert!(s.r.is_homogeneous(&s.weights()), "{tag:?} {}", s.r);
                assert!(s.d[0] <= s.d[1] && s.d[1] <= s.d[2]);
            }
        }
        for idx in 1..=6 {
            let s = sample_forbidden(idx, &mut rng).unwrap();
            assert!(s.r.is_homogeneous(&s.weights()), "F{idx} {}", s.r);
        }
    }

    #[test]
    fn line_samples_classify_and_normalize() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for tag in Tag::NONZERO {
            for _ in 0..20 {
                let s = sample_line(tag, &mut rng);
                let out = classify(&s.r, &s.weights()).unwrap();
                let rt = out.relation_type().unwrap_or_else(|| panic!("{tag:?}: {} gave {out:?}", s.r));
                assert_eq!(rt.tag(), tag, "{}", s.r);
                let nf = super::super::normalize(rt).unwrap();
                assert!(nf.verify(&s.r).unwrap());
                if let Some(c) = &nf.canonical {
                    assert!(c.annihilating_lnd().apply(&c.polynomial()).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn forbidden_samples_classify_as_forbidden() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for idx in 1..=6 {
            for _ in 0..10 {
                let s = sample_forbidden(idx, &mut rng).unwrap();
                assert_eq!(classify(&s.r, &s.weights()).unwrap(), ClassifyOutcome::Forbidden(idx), "{}", s.r);
            }
        }
        assert!(sample_forbidden(7, &mut rng).is_err());
    }
}
