use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::{Error, Monomial, Polynomial, Rational, Result, WeightVector};

pub(crate) type Key = SmallVec<[u64; 16]>;

/// A monomial order.
///
/// Every order here is realised by a sort key that is additive in the
/// exponent vector, so `key(a + b) = key(a) + key(b)` and keys are compared
/// lexicographically.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum MonomialOrder {
    /// Lexicographic with `x1` most significant.
    Lex,
    /// Weighted degree first, then lexicographic.
    GradedLex(WeightVector),
    /// The first `front` variables are eliminated: any monomial involving
    /// them beats any monomial that does not.
    BlockElimination { front: usize, front_order: Box<MonomialOrder>, back_order: Box<MonomialOrder> },
}

impl MonomialOrder {
    pub fn graded(w: &WeightVector) -> Self {
        MonomialOrder::GradedLex(w.clone())
    }

    pub fn block(front: usize, front_order: MonomialOrder, back_order: MonomialOrder) -> Self {
        MonomialOrder::BlockElimination { front, front_order: Box::new(front_order), back_order: Box::new(back_order) }
    }

    /// Check that the order can rank monomials in `nvars` variables.
    pub fn validate(&self, nvars: usize) -> Result<()> {
        match self {
            MonomialOrder::Lex => Ok(()),
            MonomialOrder::GradedLex(w) if w.len() == nvars => Ok(()),
            MonomialOrder::GradedLex(w) => Err(Error::LengthMismatch { expected: nvars, found: w.len() }),
            MonomialOrder::BlockElimination { front, front_order, back_order } => {
                if *front > nvars {
                    return Err(Error::IndexOutOfRange { index: *front, nvars });
                }
                front_order.validate(*front)?;
                back_order.validate(nvars - front)
            }
        }
    }

    #[cfg(test)]
    pub(crate) fn key(&self, exps: &[u32]) -> Key {
        self.compile(exps.len()).key(exps)
    }

    /// Flatten into segments with integer weights, for fast key evaluation.
    pub(crate) fn compile(&self, nvars: usize) -> CompiledOrder {
        let mut segs = Vec::new();
        self.push_segments(0, nvars, &mut segs);
        CompiledOrder { segs }
    }

    fn push_segments(&self, start: usize, len: usize, out: &mut Vec<Segment>) {
        match self {
            MonomialOrder::Lex => out.push(Segment { start, len, weights: None }),
            MonomialOrder::GradedLex(w) => out.push(Segment { start, len, weights: Some(w.scaled_integers()) }),
            MonomialOrder::BlockElimination { front, front_order, back_order } => {
                front_order.push_segments(start, *front, out);
                back_order.push_segments(start + front, len - front, out);
            }
        }
    }

    /// Weights used for sugar degrees in the pair queue.
    pub(crate) fn grading(&self, nvars: usize) -> Vec<u64> {
        match self {
            MonomialOrder::Lex => vec![1; nvars],
            MonomialOrder::GradedLex(w) => w.scaled_integers(),
            MonomialOrder::BlockElimination { front, front_order, back_order } => {
                let mut g = front_order.grading(*front);
                g.extend(back_order.grading(nvars - front));
                g
            }
        }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let c = self.compile(a.nvars());
        c.key(a.exponents()).cmp(&c.key(b.exponents()))
    }

    /// Leading monomial and coefficient of `p`.
    pub fn leading(&self, p: &Polynomial) -> Option<(Monomial, Rational)> {
        self.compile(p.nvars()).leading(p)
    }
}

struct Segment {
    start: usize,
    len: usize,
    weights: Option<Vec<u64>>,
}

pub(crate) struct CompiledOrder {
    segs: Vec<Segment>,
}

impl CompiledOrder {
    pub(crate) fn key(&self, exps: &[u32]) -> Key {
        let mut out = Key::new();
        for s in &self.segs {
            let part = &exps[s.start..s.start + s.len];
            if let Some(w) = &s.weights {
                out.push(part.iter().zip(w).map(|(&e, &wi)| e as u64 * wi).sum());
            }
            out.extend(part.iter().map(|&e| e as u64));
        }
        out
    }

    pub(crate) fn leading(&self, p: &Polynomial) -> Option<(Monomial, Rational)> {
        p.terms()
            .map(|(m, c)| (self.key(m.exponents()), m, c))
            .max_by(|a, b| a.0.cmp(&b.0))
            .map(|(_, m, c)| (m.clone(), c.clone()))
    }
}

impl fmt::Debug for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonomialOrder::Lex => write!(f, "lex"),
            MonomialOrder::GradedLex(w) => write!(f, "graded-lex({w})"),
            MonomialOrder::BlockElimination { front, front_order, back_order } => {
                write!(f, "block({front}: {front_order:?} > {back_order:?})")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn graded_beats_lex_on_degree() {
        let o = MonomialOrder::graded(&WeightVector::standard(2));
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[0, 2])), Ordering::Less);
        assert_eq!(MonomialOrder::Lex.cmp(&m(&[1, 0]), &m(&[0, 2])), Ordering::Greater);
        let w = MonomialOrder::graded(&WeightVector::from_integers(&[3, 1]).unwrap());
        assert_eq!(w.cmp(&m(&[1, 0]), &m(&[0, 2])), Ordering::Greater);
    }

    #[test]
    fn block_order_eliminates_front() {
        let std1 = MonomialOrder::graded(&WeightVector::standard(1));
        let std2 = MonomialOrder::graded(&WeightVector::standard(2));
        let o = MonomialOrder::block(1, std1, std2);
        assert!(o.validate(3).is_ok());
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 9, 9])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 2, 0]), &m(&[0, 0, 1])), Ordering::Greater);
        assert!(o.validate(0).is_err());
    }

    #[test]
    fn keys_are_additive() {
        let o = MonomialOrder::block(
            2,
            MonomialOrder::graded(&WeightVector::from_integers(&[1, 2]).unwrap()),
            MonomialOrder::Lex,
        );
        let (a, b) = ([1u32, 2, 0, 3], [4u32, 0, 5, 1]);
        let sum: Vec<u32> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let ka = o.key(&a);
        let kb = o.key(&b);
        let ks: Key = ka.iter().zip(&kb).map(|(x, y)| x + y).collect();
        assert_eq!(o.key(&sum), ks);
    }
}
