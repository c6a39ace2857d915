//! Principal relations between three leading terms.
//!
//! Given a weighted-homogeneous `R` and ascending integer weights
//! `d1 <= d2 <= d3`, shift `x3` to remove the cross term (or the
//! `x2 x3`-companion), match the remaining shape against the fourteen
//! admissible families or the six impossible ones, and reduce admissible
//! relations to a tame normal form with a verified witness.

mod forms;
mod normal;
mod sampler;

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::serde_str as q;
use crate::{Error, Polynomial, Rational, Result, WeightVector};
use forms::{
    binary_terms, binomial3, coeff, cubic_discriminant, exactly, quadratic_discriminant, split_binary, term3, BinTerms,
};

pub use forms::{factor_weighted_binary_form, BinaryFactorization, FormFactoring};
pub use normal::{normalize, Canonical, NormalForm, RootNeeded};
pub use sampler::{sample_forbidden, sample_line, Expected, Sample};

/// The admissible families, in the order they are matched.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tag {
    Zero,
    ElemReducible,
    TwoVarBinomial,
    T3,
    T4,
    T5,
    T6,
    T7,
    T8,
    T9,
    T10,
    T11,
    T12,
    T13,
}

impl Tag {
    pub const NONZERO: [Tag; 13] = [
        Tag::ElemReducible,
        Tag::TwoVarBinomial,
        Tag::T3,
        Tag::T4,
        Tag::T5,
        Tag::T6,
        Tag::T7,
        Tag::T8,
        Tag::T9,
        Tag::T10,
        Tag::T11,
        Tag::T12,
        Tag::T13,
    ];

    /// Position in the list of families, counting the zero relation as 1.
    pub fn line(self) -> u32 {
        self as u32 + 1
    }

    /// The family's shape, with `x3` standing for the shifted variable.
    pub fn shape(self) -> &'static str {
        match self {
            Tag::Zero => "0",
            Tag::ElemReducible => "x3",
            Tag::TwoVarBinomial => "x1^e1 + c*x2^e2",
            Tag::T3 => "(x2 + a*x1^e1)*x3 + c*x1^k",
            Tag::T4 => "x1^k*x3 + P(x1,x2)",
            Tag::T5 => "x3^2 + c*x2^3",
            Tag::T6 => "x3^2 + c*x1*x2^2",
            Tag::T7 => "x3^2 + c*x1^r1",
            Tag::T8 => "x3^2 + c*x1^r1*x2",
            Tag::T9 => "x3^2 + a*x1^e1 + b*x2^2",
            Tag::T10 => "x3^2 + (a*x1^e1 + b*x2)*x1^r1",
            Tag::T11 => "x3^2 + (a1*x1^e1 + b1*x2)*(a2*x1^e1 + b2*x2)",
            Tag::T12 => "x3^2 + (a1*x1 + b1*x2)*(a2*x1 + b2*x2)^2",
            Tag::T13 => "x3^2 + c*(a*x1^e1 + b*x2)^2*x1",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A family together with its parameters. In the square families the
/// polynomial is `x3^2 + q(x1, x2)` with `q` as shown in [`Tag::shape`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum Pattern {
    Zero,
    ElemReducible,
    TwoVarBinomial {
        #[serde(with = "q")]
        c: Rational,
        e1: u32,
        e2: u32,
    },
    T3 {
        #[serde(with = "q")]
        a: Rational,
        e1: u32,
        #[serde(with = "q")]
        c: Rational,
        k: u32,
    },
    T4 {
        k: u32,
        p: Polynomial,
    },
    T5 {
        #[serde(with = "q")]
        c: Rational,
    },
    T6 {
        #[serde(with = "q")]
        c: Rational,
    },
    T7 {
        #[serde(with = "q")]
        c: Rational,
        r1: u32,
    },
    T8 {
        #[serde(with = "q")]
        c: Rational,
        r1: u32,
    },
    T9 {
        #[serde(with = "q")]
        a: Rational,
        e1: u32,
        #[serde(with = "q")]
        b: Rational,
    },
    T10 {
        #[serde(with = "q")]
        a: Rational,
        e1: u32,
        #[serde(with = "q")]
        b: Rational,
        r1: u32,
    },
    T11 {
        #[serde(with = "q")]
        a1: Rational,
        #[serde(with = "q")]
        b1: Rational,
        #[serde(with = "q")]
        a2: Rational,
        #[serde(with = "q")]
        b2: Rational,
        e1: u32,
    },
    T12 {
        #[serde(with = "q")]
        a1: Rational,
        #[serde(with = "q")]
        b1: Rational,
        #[serde(with = "q")]
        a2: Rational,
        #[serde(with = "q")]
        b2: Rational,
    },
    T13 {
        #[serde(with = "q")]
        c: Rational,
        #[serde(with = "q")]
        a: Rational,
        #[serde(with = "q")]
        b: Rational,
        e1: u32,
    },
}

fn x(i: usize) -> Polynomial {
    Polynomial::var(3, i)
}

/// `a x1^e + b x2` in three variables.
fn weighted_linear(a: &Rational, e: u32, b: &Rational) -> Polynomial {
    binomial3(a, e, b, 1)
}

impl Pattern {
    pub fn tag(&self) -> Tag {
        match self {
            Pattern::Zero => Tag::Zero,
            Pattern::ElemReducible => Tag::ElemReducible,
            Pattern::TwoVarBinomial { .. } => Tag::TwoVarBinomial,
            Pattern::T3 { .. } => Tag::T3,
            Pattern::T4 { .. } => Tag::T4,
            Pattern::T5 { .. } => Tag::T5,
            Pattern::T6 { .. } => Tag::T6,
            Pattern::T7 { .. } => Tag::T7,
            Pattern::T8 { .. } => Tag::T8,
            Pattern::T9 { .. } => Tag::T9,
            Pattern::T10 { .. } => Tag::T10,
            Pattern::T11 { .. } => Tag::T11,
            Pattern::T12 { .. } => Tag::T12,
            Pattern::T13 { .. } => Tag::T13,
        }
    }

    /// The `x1, x2` part of a square family.
    pub fn square_part(&self) -> Option<Polynomial> {
        let one = Rational::one();
        Some(match self {
            Pattern::T5 { c } => term3(c.clone(), 0, 3, 0),
            Pattern::T6 { c } => term3(c.clone(), 1, 2, 0),
            Pattern::T7 { c, r1 } => term3(c.clone(), *r1, 0, 0),
            Pattern::T8 { c, r1 } => term3(c.clone(), *r1, 1, 0),
            Pattern::T9 { a, e1, b } => binomial3(a, *e1, b, 2),
            Pattern::T10 { a, e1, b, r1 } => &weighted_linear(a, *e1, b) * &term3(one, *r1, 0, 0),
            Pattern::T11 { a1, b1, a2, b2, e1 } => &weighted_linear(a1, *e1, b1) * &weighted_linear(a2, *e1, b2),
            Pattern::T12 { a1, b1, a2, b2 } => &weighted_linear(a1, 1, b1) * &weighted_linear(a2, 1, b2).pow(2),
            Pattern::T13 { c, a, b, e1 } => &weighted_linear(a, *e1, b).pow(2) * &term3(c.clone(), 1, 0, 0),
            _ => return None,
        })
    }

    /// The pattern polynomial in `x1, x2, x3`, before the shift.
    pub fn polynomial(&self) -> Polynomial {
        if let Some(sq) = self.square_part() {
            return &x(2).pow(2) + &sq;
        }
        match self {
            Pattern::Zero => Polynomial::zero(3),
            Pattern::ElemReducible => x(2),
            Pattern::TwoVarBinomial { c, e1, e2 } => binomial3(&Rational::one(), *e1, c, *e2),
            Pattern::T3 { a, e1, c, k } => {
                &(&weighted_linear(a, *e1, &Rational::one()) * &x(2)) + &term3(c.clone(), *k, 0, 0)
            }
            Pattern::T4 { k, p } => &term3(Rational::one(), *k, 0, 1) + p,
            _ => unreachable!("square patterns handled above"),
        }
    }

    /// Side conditions of the family.
    pub fn side_conditions_hold(&self) -> bool {
        use num_integer::Integer;
        match self {
            Pattern::Zero | Pattern::ElemReducible => true,
            Pattern::TwoVarBinomial { c, e1, e2 } => !c.is_zero() && *e1 >= 1 && *e2 >= 1 && e1.gcd(e2) == 1,
            Pattern::T3 { c, k, e1, .. } => !c.is_zero() && *k >= 2 && *e1 >= 1,
            Pattern::T4 { k, p } => *k >= 1 && !p.involves(2),
            Pattern::T5 { c } | Pattern::T6 { c } => !c.is_zero(),
            Pattern::T7 { c, r1 } => !c.is_zero() && *r1 >= 3 && r1 % 2 == 1,
            Pattern::T8 { c, r1 } => !c.is_zero() && *r1 >= 1,
            Pattern::T9 { a, e1, b } => !a.is_zero() && !b.is_zero() && *e1 >= 3 && e1 % 2 == 1,
            Pattern::T10 { a, e1, b, .. } => !a.is_zero() && !b.is_zero() && *e1 >= 1,
            Pattern::T11 { a1, b1, a2, b2, e1 } => *e1 >= 1 && !(a1 * b2 - b1 * a2).is_zero(),
            Pattern::T12 { a1, b1, a2, b2 } => !(a1.is_zero() && b1.is_zero()) && !(a2.is_zero() && b2.is_zero()),
            Pattern::T13 { c, a, b, e1 } => !c.is_zero() && !a.is_zero() && !b.is_zero() && *e1 >= 2,
        }
    }
}

/// `R = scalar · pattern(x1, x2, x3 + h)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationType {
    pub pattern: Pattern,
    pub shift_h: Polynomial,
    #[serde(with = "q")]
    pub scalar: Rational,
}

impl RelationType {
    pub fn tag(&self) -> Tag {
        self.pattern.tag()
    }

    pub fn reconstruct(&self) -> Polynomial {
        let shifted = self.pattern.polynomial().compose(&[x(0), x(1), &x(2) + &self.shift_h]).expect("three variables");
        shifted.scale(&self.scalar)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[allow(clippy::large_enum_variant)]
pub enum ClassifyOutcome {
    Classified(RelationType),
    /// Index 1 to 6 in the list of impossible relations.
    Forbidden(u8),
    NeedsExtension(String),
    NotWeightedHomogeneous,
    NotInList(String),
}

impl ClassifyOutcome {
    pub fn tag(&self) -> Option<Tag> {
        match self {
            ClassifyOutcome::Classified(rt) => Some(rt.tag()),
            _ => None,
        }
    }

    pub fn relation_type(&self) -> Option<&RelationType> {
        match self {
            ClassifyOutcome::Classified(rt) => Some(rt),
            _ => None,
        }
    }
}

/// Validate `d` as three ascending positive integers.
pub fn integer_weights(d: &WeightVector) -> Result<[u64; 3]> {
    let bad = || Error::InvalidWeights(d.to_string());
    if d.len() != 3 || !d.is_integral() {
        return Err(bad());
    }
    let mut out = [0u64; 3];
    for (o, w) in out.iter_mut().zip(d.weights()) {
        *o = num_traits::ToPrimitive::to_u64(w.numer()).ok_or_else(bad)?;
    }
    if out[0] > out[1] || out[1] > out[2] {
        return Err(bad());
    }
    Ok(out)
}

/// Reorder variables so the weights ascend. Returns the relabelled relation,
/// the sorted weights and `order`, where new `x_l` is old `x_{order[l]}`.
pub fn sort_by_weights(r: &Polynomial, d: &WeightVector) -> Result<(Polynomial, WeightVector, Vec<usize>)> {
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d.get(a).cmp(d.get(b)));
    let mut images = vec![Polynomial::zero(n); n];
    for (l, &old) in order.iter().enumerate() {
        images[old] = Polynomial::var(n, l);
    }
    let sorted = WeightVector::new(order.iter().map(|&i| d.get(i).clone()).collect())?;
    Ok((r.compose(&images)?, sorted, order))
}

/// Every exponent `α` of `R` has `α·d <= d1 + d2 + d3 - 2`.
pub fn support_bound_holds(r: &Polynomial, d: &WeightVector) -> bool {
    crate::relations::support_bound_ok(r, d)
}

/// Remove the `x3`-linear cross term (quadratic case) or the part divisible
/// by the `x3` coefficient (linear case). Returns `(R', h)` with
/// `R = R'(x1, x2, x3 + h)`.
pub fn complete_square_x3(r: &Polynomial, d: &WeightVector) -> Result<(Polynomial, Polynomial)> {
    if r.nvars() != 3 {
        return Err(Error::VariableCountMismatch { left: 3, right: r.nvars() });
    }
    if !r.is_homogeneous(d) {
        return Err(Error::NotHomogeneous(r.to_string()));
    }
    let zero = Polynomial::zero(3);
    let shift = |h: &Polynomial| r.compose(&[x(0), x(1), &x(2) - h]);
    let cs = r.coefficients_in(2);
    match cs.len() - 1 {
        2 => {
            let c2 = cs[2].as_constant().ok_or_else(|| Error::OddLeadingX3Coefficient(cs[2].to_string()))?;
            let h = cs[1].scale(&(Rational::one() / (Rational::from_integer(2.into()) * c2)));
            Ok((shift(&h)?, h))
        }
        1 => {
            let a = &cs[1];
            let b = &cs[0];
            if let Some(g) = a.as_constant() {
                let h = b.scale(&g.recip());
                return Ok((shift(&h)?, h));
            }
            match linear_x3_split(a, b) {
                Some(split) => Ok((shift(&split.h)?, split.h)),
                None => Ok((r.clone(), zero)),
            }
        }
        _ => Ok((r.clone(), zero)),
    }
}

struct LinearSplit {
    /// Coefficient of `x2` in the `x3` coefficient.
    b: Rational,
    a: Rational,
    e1: u32,
    h: Polynomial,
    p0: Polynomial,
}

/// For `R = A x3 + B` with `A = b (x2 + a x1^e1)`, write
/// `B/b = P0(x1) + (x2 + a x1^e1) Q`.
fn linear_x3_split(a_poly: &Polynomial, b_poly: &Polynomial) -> Option<LinearSplit> {
    let t = binary_terms(a_poly)?;
    let b = t.get(&(0, 1))?.clone();
    let others: Vec<_> = t.iter().filter(|(k, _)| **k != (0, 1)).collect();
    let (a, e1) = match others.as_slice() {
        [] => (Rational::zero(), 1),
        [((e, 0), c)] if *e >= 1 => (*c / &b, *e),
        _ => return None,
    };
    let l = weighted_linear(&a, e1, &Rational::one());
    let p = b_poly.scale(&b.recip());
    let p0 = p.compose(&[x(0), term3(-a.clone(), e1, 0, 0), x(2)]).ok()?;
    let h = (&p - &p0).div_exact(&l)?;
    Some(LinearSplit { b, a, e1, h, p0 })
}

/// Match `R` literally against the impossible families: `R` must be a
/// nonzero multiple of `x3^2 + q(x1, x2)`.
pub fn forbidden_match(r: &Polynomial) -> Option<u8> {
    if r.nvars() != 3 || r.degree_in(2) != 2 {
        return None;
    }
    let cs = r.coefficients_in(2);
    let c2 = cs[2].as_constant()?;
    if !cs[1].is_zero() {
        return None;
    }
    let t = binary_terms(&cs[0].scale(&c2.recip()))?;
    forbidden_in_square_part(&t)
}

fn forbidden_in_square_part(t: &BinTerms) -> Option<u8> {
    if exactly(t, &[(4, 0), (0, 3)]) {
        return Some(1);
    }
    if exactly(t, &[(5, 0), (0, 3)]) {
        return Some(2);
    }
    if let Some(e) = x1_times_quadratic_exponent(t) {
        let (a, b, c) = (coeff(t, (2 * e + 1, 0)), coeff(t, (e + 1, 1)), coeff(t, (1, 2)));
        if !c.is_zero() && !quadratic_discriminant(&a, &b, &c).is_zero() {
            return Some(3);
        }
    }
    if !t.is_empty() && t.keys().all(|(a1, a2)| a1 + a2 == 3) {
        let cs: Vec<Rational> = (0..4).map(|i| coeff(t, (3 - i, i))).collect();
        if !cubic_discriminant(&cs[0], &cs[1], &cs[2], &cs[3]).is_zero() {
            return Some(4);
        }
    }
    if exactly(t, &[(3, 1), (0, 3)]) {
        return Some(5);
    }
    if t.len() == 2 && t.contains_key(&(1, 2)) {
        if let Some(&(m, 0)) = t.keys().find(|k| **k != (1, 2)) {
            let e = m.saturating_sub(1);
            if e >= 3 && e % 2 == 1 {
                return Some(6);
            }
        }
    }
    None
}

/// `e >= 1` such that every term lies in `{x1^(2e+1), x1^(e+1) x2, x1 x2^2}`
/// and the `x1 x2^2` term is present.
fn x1_times_quadratic_exponent(t: &BinTerms) -> Option<u32> {
    if !t.contains_key(&(1, 2)) {
        return None;
    }
    let mut e = None;
    for &(a1, a2) in t.keys() {
        let cand = match (a1, a2) {
            (1, 2) => continue,
            (m, 1) if m >= 2 => m - 1,
            (m, 0) if m >= 3 && m % 2 == 1 => (m - 1) / 2,
            _ => return None,
        };
        if e.is_some_and(|e| e != cand) {
            return None;
        }
        e = Some(cand);
    }
    e
}

/// `e >= 1` such that every term lies in `{x1^(2e), x1^e x2, x2^2}` and `x2^2`
/// is present.
fn quadratic_in_u_exponent(t: &BinTerms) -> Option<u32> {
    if !t.contains_key(&(0, 2)) {
        return None;
    }
    let mut e = None;
    for &(a1, a2) in t.keys() {
        let cand = match (a1, a2) {
            (0, 2) => continue,
            (m, 1) if m >= 1 => m,
            (m, 0) if m >= 2 && m % 2 == 0 => m / 2,
            _ => return None,
        };
        if e.is_some_and(|e| e != cand) {
            return None;
        }
        e = Some(cand);
    }
    e
}

fn classified(pattern: Pattern, shift_h: Polynomial, scalar: Rational) -> ClassifyOutcome {
    ClassifyOutcome::Classified(RelationType { pattern, shift_h, scalar })
}

/// Classify a candidate principal relation.
pub fn classify(r: &Polynomial, d: &WeightVector) -> Result<ClassifyOutcome> {
    let dv = integer_weights(d)?;
    if r.nvars() != 3 {
        return Err(Error::VariableCountMismatch { left: 3, right: r.nvars() });
    }
    let zero = Polynomial::zero(3);
    if r.is_zero() {
        return Ok(classified(Pattern::Zero, zero, Rational::one()));
    }
    if !r.is_homogeneous(d) {
        return Ok(ClassifyOutcome::NotWeightedHomogeneous);
    }
    let outcome = match r.degree_in(2) {
        0 => classify_free_of_x3(r),
        1 => classify_linear_x3(r),
        2 => classify_square(r, d)?,
        m => ClassifyOutcome::NotInList(format!("degree {m} in x3 exceeds 2")),
    };
    let outcome = match outcome {
        ClassifyOutcome::NotInList(msg) => ClassifyOutcome::NotInList(diagnose(r, dv, msg)),
        other => other,
    };
    if let ClassifyOutcome::Classified(rt) = &outcome {
        if rt.reconstruct() != *r || !rt.pattern.side_conditions_hold() {
            return Err(Error::WitnessVerificationFailed(format!("pattern {:?} does not reproduce {r}", rt.pattern)));
        }
    }
    Ok(outcome)
}

fn classify_free_of_x3(r: &Polynomial) -> ClassifyOutcome {
    let t = binary_terms(r).expect("free of x3");
    let mut it = t.iter();
    if let (Some((&(e1, 0), a)), Some((&(0, e2), b)), None) = (it.next_back(), it.next(), it.next()) {
        if e1 >= 1 && e2 >= 1 && num_integer::Integer::gcd(&e1, &e2) == 1 {
            let c = b / a;
            return classified(Pattern::TwoVarBinomial { c, e1, e2 }, Polynomial::zero(3), a.clone());
        }
    }
    ClassifyOutcome::NotInList("free of x3 but not a binomial x1^e1 + c*x2^e2 with coprime exponents".into())
}

fn classify_linear_x3(r: &Polynomial) -> ClassifyOutcome {
    let cs = r.coefficients_in(2);
    let (a, b) = (&cs[1], &cs[0]);
    if let Some(g) = a.as_constant() {
        return classified(Pattern::ElemReducible, b.scale(&g.recip()), g);
    }
    let ta = binary_terms(a).expect("free of x3");
    if ta.contains_key(&(0, 1)) {
        let Some(split) = linear_x3_split(a, b) else {
            return ClassifyOutcome::NotInList("x3 coefficient is not of the form b*(x2 + a*x1^e1)".into());
        };
        let pt = binary_terms(&split.p0).expect("free of x3");
        return match pt.iter().next() {
            None => ClassifyOutcome::NotInList("reducible: the x3 coefficient divides R".into()),
            Some((&(k, 0), c)) if pt.len() == 1 && k >= 2 => {
                classified(Pattern::T3 { a: split.a, e1: split.e1, c: c.clone(), k }, split.h, split.b)
            }
            Some(_) => ClassifyOutcome::NotInList("remainder is not c*x1^k with k >= 2".into()),
        };
    }
    if let [((k, 0), g)] = ta.iter().collect::<Vec<_>>().as_slice() {
        let p = b.scale(&g.recip());
        return classified(Pattern::T4 { k: *k, p }, Polynomial::zero(3), (*g).clone());
    }
    ClassifyOutcome::NotInList("x3 coefficient is neither c*x1^k nor b*(x2 + a*x1^e1)".into())
}

fn classify_square(r: &Polynomial, d: &WeightVector) -> Result<ClassifyOutcome> {
    let (rp, h) = match complete_square_x3(r, d) {
        Ok(v) => v,
        Err(Error::OddLeadingX3Coefficient(c)) => {
            return Ok(ClassifyOutcome::NotInList(format!("coefficient of x3^2 is not constant: {c}")))
        }
        Err(e) => return Err(e),
    };
    let cs = rp.coefficients_in(2);
    let s = cs[2].as_constant().expect("checked by completing the square");
    let q = cs[0].scale(&s.recip());
    let t = binary_terms(&q).expect("free of x3");
    if t.is_empty() {
        return Ok(ClassifyOutcome::NotInList("reducible: R is a square".into()));
    }
    if let Some(idx) = forbidden_in_square_part(&t) {
        return Ok(ClassifyOutcome::Forbidden(idx));
    }
    Ok(match match_square_part(&t) {
        SquareMatch::Pattern(p) => classified(p, h, s),
        SquareMatch::NeedsExtension(msg) => ClassifyOutcome::NeedsExtension(msg),
        SquareMatch::None => ClassifyOutcome::NotInList("x3^2 + q with q matching no family".into()),
    })
}

#[allow(clippy::large_enum_variant)]
enum SquareMatch {
    Pattern(Pattern),
    NeedsExtension(String),
    None,
}

fn match_square_part(t: &BinTerms) -> SquareMatch {
    use SquareMatch::Pattern as P;
    if t.len() == 1 {
        let (&(a1, a2), c) = t.iter().next().expect("one term");
        let c = c.clone();
        return match (a1, a2) {
            (0, 3) => P(Pattern::T5 { c }),
            (1, 2) => P(Pattern::T6 { c }),
            (r, 0) if r >= 3 && r % 2 == 1 => P(Pattern::T7 { c, r1: r }),
            (r, 1) if r >= 1 => P(Pattern::T8 { c, r1: r }),
            _ => SquareMatch::None,
        };
    }
    if t.len() == 2 && t.contains_key(&(0, 2)) {
        if let Some(&(e, 0)) = t.keys().find(|k| **k != (0, 2)) {
            if e >= 3 && e % 2 == 1 {
                let (a, b) = (coeff(t, (e, 0)), coeff(t, (0, 2)));
                return P(Pattern::T9 { a, e1: e, b });
            }
        }
    }
    if t.len() == 2 {
        let keys: Vec<_> = t.keys().copied().collect();
        if let [(r1, 1), (m, 0)] = keys.as_slice() {
            if m > r1 {
                let (a, b) = (coeff(t, (*m, 0)), coeff(t, (*r1, 1)));
                return P(Pattern::T10 { a, e1: m - r1, b, r1: *r1 });
            }
        }
    }
    if let Some(e) = quadratic_in_u_exponent(t) {
        let (a, b, c) = (coeff(t, (2 * e, 0)), coeff(t, (e, 1)), coeff(t, (0, 2)));
        if !quadratic_discriminant(&a, &b, &c).is_zero() {
            return match split_binary(&[c, b, a]) {
                Some((lead, pairs)) => {
                    // A pair (α, β) is α x1^e + β x2.
                    let [(u1, v1), (u2, v2)] = [pairs[0].clone(), pairs[1].clone()];
                    P(Pattern::T11 { a1: &lead * &u1, b1: &lead * &v1, a2: u2, b2: v2, e1: e })
                }
                None => SquareMatch::NeedsExtension(format!(
                    "x3^2 + q with q a product of two factors a*x1^{e} + b*x2 only over an extension"
                )),
            };
        }
    }
    if t.keys().all(|(a1, a2)| a1 + a2 == 3) {
        let cs: Vec<Rational> = (0..4).map(|i| coeff(t, (i, 3 - i))).collect();
        if cubic_discriminant(&cs[3], &cs[2], &cs[1], &cs[0]).is_zero() {
            if let Some((lead, pairs)) = split_binary(&cs) {
                // Here u = x1, v = x2 and a pair (α, β) is α x1 + β x2.
                let rep = pairs.iter().find(|p| pairs.iter().filter(|q| q == p).count() >= 2).cloned();
                if let Some(rep) = rep {
                    let mut rest = pairs.clone();
                    for _ in 0..2 {
                        let i = rest.iter().position(|p| *p == rep).expect("repeated");
                        rest.remove(i);
                    }
                    let (a1, b1) = (&lead * &rest[0].0, &lead * &rest[0].1);
                    return P(Pattern::T12 { a1, b1, a2: rep.0, b2: rep.1 });
                }
            }
        }
    }
    if let Some(e) = x1_times_quadratic_exponent(t) {
        let (a, b, c) = (coeff(t, (2 * e + 1, 0)), coeff(t, (e + 1, 1)), coeff(t, (1, 2)));
        if e >= 2 && !a.is_zero() && !b.is_zero() && quadratic_discriminant(&a, &b, &c).is_zero() {
            let two = Rational::from_integer(2.into());
            return P(Pattern::T13 { a: &b / (&two * &c), c, b: Rational::one(), e1: e });
        }
    }
    SquareMatch::None
}

/// Name the first inequality among the support bound, the square-case
/// bound `d3 <= d1 + d2 - 2` and the factor-count bound that `R` violates.
fn diagnose(r: &Polynomial, d: [u64; 3], base: String) -> String {
    let w = WeightVector::from_integers(&d.map(|v| v as i64)).expect("positive");
    if !support_bound_holds(r, &w) {
        return format!("{base}; support bound a.d <= d1+d2+d3-2 fails");
    }
    if r.degree_in(2) == 2 {
        if d[2] + 2 > d[0] + d[1] {
            return format!("{base}; square-case bound d3 <= d1+d2-2 fails");
        }
        if let Ok((rp, _)) = complete_square_x3(r, &w) {
            if let Some(msg) = factor_count_violation(&rp.coefficients_in(2)[0], d) {
                return format!("{base}; {msg}");
            }
        }
    }
    base
}

fn factor_count_violation(q: &Polynomial, d: [u64; 3]) -> Option<String> {
    use num_integer::Integer;
    let t = binary_terms(q)?;
    let (&(a1, a2), _) = t.iter().next()?;
    let g = d[0].gcd(&d[1]);
    let (e1, e2) = ((d[1] / g) as u32, (d[0] / g) as u32);
    let (r1, r2) = (a1 % e1, a2 % e2);
    let k = (a1 - r1) / e1 + (a2 - r2) / e2;
    let rat = |n: u32, m: u32| Rational::new((n as i64).into(), (m as i64).into());
    let mid = Rational::from_integer((k as i64).into()) + rat(r1, e1) + rat(r2, e2);
    let lo = rat(2, e2);
    let hi = &lo + rat(2, e1);
    (!(lo <= mid && mid < hi)).then(|| format!("factor-count bound 2/e2 <= k + r1/e1 + r2/e2 < 2/e2 + 2/e1 fails (k={k}, r1={r1}, r2={r2}, e1={e1}, e2={e2})"))
}

/// A relation classified after sorting its variables by weight, with the
/// tame normal form when a family matched.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    /// Sorted `x_l` is input `x_{order[l]}`.
    pub order: Vec<usize>,
    pub d: WeightVector,
    /// The relation in the sorted variables.
    pub relation: Polynomial,
    pub outcome: ClassifyOutcome,
    pub normal_form: Option<NormalForm>,
}

/// Sort by weight, classify, and normalise.
pub fn classify_relation(r: &Polynomial, d: &WeightVector) -> Result<Classification> {
    if d.len() != 3 || r.nvars() != 3 {
        return Err(Error::InvalidWeights(format!("{d} for a relation in {} variables", r.nvars())));
    }
    let (relation, d, order) = sort_by_weights(r, d)?;
    let outcome = classify(&relation, &d)?;
    let normal_form = outcome.relation_type().map(normalize).transpose()?;
    Ok(Classification { order, d, relation, outcome, normal_form })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_poly;
    use crate::rational::int;

    fn p(s: &str) -> Polynomial {
        parse_poly(s, 3).unwrap()
    }

    fn w(d: &[i64]) -> WeightVector {
        WeightVector::from_integers(d).unwrap()
    }

    fn tag_of(r: &str, d: &[i64]) -> Option<Tag> {
        classify(&p(r), &w(d)).unwrap().tag()
    }

    #[test]
    fn zero_is_the_affine_case() {
        assert_eq!(tag_of("0", &[1, 1, 1]), Some(Tag::Zero));
    }

    #[test]
    fn cube_square() {
        let out = classify(&p("x3^2 + 5*x2^3"), &w(&[1, 2, 3])).unwrap();
        let rt = out.relation_type().unwrap();
        assert_eq!(rt.pattern, Pattern::T5 { c: int(5) });
        assert!(rt.shift_h.is_zero());
    }

    #[test]
    fn forbidden_examples() {
        let out = classify(&p("x3^2 + x1^4 + x2^3"), &w(&[3, 4, 6])).unwrap();
        assert_eq!(out, ClassifyOutcome::Forbidden(1));
        assert_eq!(forbidden_match(&p("x3^2 + x1^5 + x2^3")), Some(2));
        assert_eq!(forbidden_match(&p("x3^2 + (x1^3 + x2^2)*x2")), Some(5));
        assert_eq!(forbidden_match(&p("x3^2 + x2^3")), None);
        assert_eq!(forbidden_match(&p("x3^2 + x2*(x1 + x2)*(x1 - x2)")), Some(4));
        // A cubic divisible by x1 fits both the x1-times-quadratic family
        // and the cubic family; the first entry wins.
        assert_eq!(forbidden_match(&p("x3^2 + x1*x2*(x1 + x2)")), Some(3));
        assert_eq!(forbidden_match(&p("x3^2 + (x1 + x2)*(x1 - x2)*x1")), Some(3));
        assert_eq!(forbidden_match(&p("x3^2 + (x1^3 + x2^2)*x1")), Some(6));
    }

    #[test]
    fn nagata_relation_sorted_by_weight() {
        let (r, d, order) = sort_by_weights(&p("x2^2 + x1*x3"), &w(&[5, 3, 1])).unwrap();
        assert_eq!(order, vec![2, 1, 0]);
        assert_eq!(d, w(&[1, 3, 5]));
        let out = classify(&r, &d).unwrap();
        assert_eq!(out.relation_type().unwrap().pattern, Pattern::T4 { k: 1, p: p("x2^2") });
    }

    #[test]
    fn square_completion() {
        let (rp, h) = complete_square_x3(&p("x3^2 + 2*x1*x3 + x1^2"), &w(&[1, 1, 1])).unwrap();
        assert_eq!((rp, h), (p("x3^2"), p("x1")));
        let (rp, h) = complete_square_x3(&p("x3^2 + 5*x2^3"), &w(&[1, 2, 3])).unwrap();
        assert_eq!((rp, h.is_zero()), (p("x3^2 + 5*x2^3"), true));
        let (rp, h) = complete_square_x3(&p("x2*x3 + x1^5 + x1*x2^2"), &w(&[1, 2, 3])).unwrap();
        assert_eq!((rp, h), (p("x2*x3 + x1^5"), p("x1*x2")));
        assert!(matches!(
            complete_square_x3(&p("x1^2*x3^2 + x2^4"), &w(&[1, 1, 1])),
            Err(Error::OddLeadingX3Coefficient(_))
        ));
    }

    #[test]
    fn linear_x3_families() {
        let out = classify(&p("x2*x3 + x1^5 + x1*x2^2"), &w(&[1, 2, 3])).unwrap();
        let rt = out.relation_type().unwrap();
        assert_eq!(rt.tag(), Tag::T3);
        assert_eq!(rt.shift_h, p("x1*x2"));
        assert_eq!(tag_of("2*x3 + x1^3 - x2*x1", &[1, 2, 3]), Some(Tag::ElemReducible));
        assert_eq!(tag_of("x1^2*x3 + x2^3", &[1, 3, 7]), Some(Tag::T4));
    }

    #[test]
    fn two_variable_binomial() {
        let out = classify(&p("3*x1^3 - 6*x2^2"), &w(&[2, 3, 5])).unwrap();
        let rt = out.relation_type().unwrap();
        assert_eq!(rt.pattern, Pattern::TwoVarBinomial { c: int(-2), e1: 3, e2: 2 });
        assert_eq!(rt.scalar, int(3));
    }

    #[test]
    fn product_family_needs_extension_for_irrational_factors() {
        let out = classify(&p("x3^2 + x1^2 - 2*x2^2"), &w(&[1, 1, 1])).unwrap();
        assert!(matches!(out, ClassifyOutcome::NeedsExtension(_)));
        let out = classify(&p("x3^2 + x1^2 - 4*x2^2"), &w(&[1, 1, 1])).unwrap();
        assert_eq!(out.tag(), Some(Tag::T11));
    }

    #[test]
    fn not_homogeneous_and_not_in_list() {
        assert_eq!(classify(&p("x3^2 + x1"), &w(&[1, 1, 1])).unwrap(), ClassifyOutcome::NotWeightedHomogeneous);
        assert!(matches!(classify(&p("x3^3 + x1^3"), &w(&[1, 1, 1])).unwrap(), ClassifyOutcome::NotInList(_)));
        assert!(classify(&p("x3"), &w(&[2, 1, 1])).is_err());
    }
}
