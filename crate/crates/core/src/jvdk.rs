//! Tame decomposition of plane automorphisms.
//!
//! Repeatedly order the pair so that `deg f >= deg g`, find `c, r` with
//! `f̄ = c·ḡ^r`, and replace `f` by `f - c·g^r`. The degree sum drops at
//! every step until the map is affine. A failed step on a non-affine pair
//! proves the input is not an automorphism.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::autmap::{jacobian_constant, AutWord, Generator, PolyMap};
use crate::poly::format_poly;
use crate::{Error, Polynomial, Rational, Result, WeightVector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    /// A transposition was applied first so that `deg f >= deg g`.
    pub swapped: bool,
    #[serde(with = "crate::rational::serde_str")]
    pub c: Rational,
    pub r: u32,
    pub degree_sum_before: u64,
    pub degree_sum_after: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub word: AutWord,
    pub steps: Vec<ReductionStep>,
    /// The final affine factor; `None` when it is the identity.
    #[serde(with = "plane_generator")]
    pub affine_tail: Option<Generator>,
}

mod plane_generator {
    use super::Generator;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(g: &Option<Generator>, s: S) -> Result<S::Ok, S::Error> {
        g.as_ref().map(ToString::to_string).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Generator>, D::Error> {
        Option::<String>::deserialize(d)?.map(|t| Generator::parse(&t, 2).map_err(serde::de::Error::custom)).transpose()
    }
}

/// Why a plane map is not an automorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certificate {
    NonConstantJacobian {
        jacobian: String,
    },
    ZeroJacobian,
    ConstantCoordinate,
    SingularLinearPart,
    /// Leading terms of the non-affine pair where no step applies.
    NotReducible {
        f_bar: String,
        g_bar: String,
        after_steps: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decompose2 {
    Tame(Decomposition),
    NotAnAutomorphism(Certificate),
}

impl Decompose2 {
    pub fn decomposition(&self) -> Option<&Decomposition> {
        match self {
            Decompose2::Tame(d) => Some(d),
            Decompose2::NotAnAutomorphism(_) => None,
        }
    }
}

fn degree(p: &Polynomial) -> u64 {
    p.total_degree().unwrap_or(0)
}

/// `(c, r)` with `f̄ = c·ḡ^r` and `r = deg f / deg g`, if they exist.
pub fn reduce_step(f: &Polynomial, g: &Polynomial) -> Option<(Rational, u32)> {
    let (df, dg) = (degree(f), degree(g));
    if dg == 0 || f.is_zero() || g.is_zero() || df % dg != 0 {
        return None;
    }
    let r = u32::try_from(df / dg).ok()?;
    let w = WeightVector::standard(f.nvars());
    let fbar = f.leading_term(&w);
    let gr = g.leading_term(&w).pow(r);
    let (m, gc) = gr.lex_leading()?;
    let c = fbar.coeff(m) / gc;
    if c.is_zero() || fbar != gr.scale(&c) {
        return None;
    }
    Some((c, r))
}

fn affine_generator(f: &Polynomial, g: &Polynomial) -> Option<Generator> {
    let (bf, lf) = f.affine_parts()?;
    let (bg, lg) = g.affine_parts()?;
    Generator::affine(vec![lf, lg], vec![bf, bg]).ok()
}

fn is_identity_affine(gen: &Generator) -> bool {
    match gen {
        Generator::Affine { matrix, shift } => {
            shift.iter().all(Zero::is_zero)
                && matrix
                    .iter()
                    .enumerate()
                    .all(|(i, row)| row.iter().enumerate().all(|(j, a)| if i == j { a.is_one() } else { a.is_zero() }))
        }
        _ => false,
    }
}

/// Decompose a plane map into a tame word, or certify that it is not an
/// automorphism.
pub fn decompose2(m: &PolyMap) -> Result<Decompose2> {
    if m.nvars() != 2 {
        return Err(Error::LengthMismatch { expected: 2, found: m.nvars() });
    }
    use Decompose2::NotAnAutomorphism as Not;
    match jacobian_constant(m) {
        Ok(_) => {}
        Err(Error::NonConstantJacobian(j)) => return Ok(Not(Certificate::NonConstantJacobian { jacobian: j })),
        Err(Error::ZeroJacobian) => return Ok(Not(Certificate::ZeroJacobian)),
        Err(e) => return Err(e),
    }
    let (mut f, mut g) = (m.coords()[0].clone(), m.coords()[1].clone());
    let mut gens = Vec::new();
    let mut steps = Vec::new();
    let swap = Generator::Transposition(0, 1);
    loop {
        if degree(&f) == 0 || degree(&g) == 0 {
            return Ok(Not(Certificate::ConstantCoordinate));
        }
        if degree(&f) <= 1 && degree(&g) <= 1 {
            let Some(tail) = affine_generator(&f, &g) else {
                return Ok(Not(Certificate::SingularLinearPart));
            };
            let affine_tail = (!is_identity_affine(&tail)).then_some(tail);
            gens.extend(affine_tail.clone());
            let word = AutWord::new(2, gens)?;
            return Ok(Decompose2::Tame(Decomposition { word, steps, affine_tail }));
        }
        let swapped = degree(&f) < degree(&g);
        if swapped {
            std::mem::swap(&mut f, &mut g);
            gens.push(swap.clone());
        }
        let before = degree(&f) + degree(&g);
        let Some((c, r)) = reduce_step(&f, &g) else {
            let w = WeightVector::standard(2);
            return Ok(Not(Certificate::NotReducible {
                f_bar: format_poly(&f.leading_term(&w)),
                g_bar: format_poly(&g.leading_term(&w)),
                after_steps: steps.len(),
            }));
        };
        let addend = Polynomial::var(2, 1).pow(r).scale(&c);
        f = &f - &g.pow(r).scale(&c);
        gens.push(Generator::elementary(0, addend)?);
        steps.push(ReductionStep {
            swapped,
            c,
            r,
            degree_sum_before: before,
            degree_sum_after: degree(&f) + degree(&g),
        });
    }
}

/// The relation between the leading terms of a plane automorphism, read
/// off the first reduction step: `z_a - c·z_b^r`, or 0 for affine maps.
pub fn relation2(m: &PolyMap) -> Result<Option<Polynomial>> {
    let Decompose2::Tame(dec) = decompose2(m)? else {
        return Ok(None);
    };
    let Some(first) = dec.steps.first() else {
        return Ok(Some(Polynomial::zero(2)));
    };
    let (a, b) = if first.swapped { (1, 0) } else { (0, 1) };
    let r = &Polynomial::var(2, a) - &Polynomial::var(2, b).pow(first.r).scale(&first.c);
    Ok(Some(r))
}

/// The plane inequality `s·d₂ <= d₁ + d₂ - 2` for `R = λx^s + μy^r`, where
/// `x` is the coordinate of larger degree `d₁`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneInequality {
    pub s: u32,
    pub d1: u64,
    pub d2: u64,
    pub holds: bool,
}

/// Evaluate the plane inequality for a non-affine map and its relation.
pub fn plane_inequality(m: &PolyMap, relation: &Polynomial) -> Option<PlaneInequality> {
    let (df, dg) = (degree(&m.coords()[0]), degree(&m.coords()[1]));
    if relation.is_zero() || (df <= 1 && dg <= 1) {
        return None;
    }
    let (x, d1, d2) = if df >= dg { (0, df, dg) } else { (1, dg, df) };
    // With equal degrees either coordinate may carry the linear term.
    let s = if df == dg { relation.degree_in(0).min(relation.degree_in(1)) } else { relation.degree_in(x) };
    let holds = u64::from(s) * d2 + 2 <= d1 + d2;
    Some(PlaneInequality { s, d1, d2, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_poly;
    use crate::rational::int;

    fn p(s: &str) -> Polynomial {
        parse_poly(s, 2).unwrap()
    }

    fn map(s: &str) -> PolyMap {
        s.parse().unwrap()
    }

    #[test]
    fn reduce_step_examples() {
        assert_eq!(reduce_step(&p("x1 + x2^2"), &p("x2")), Some((int(1), 2)));
        assert_eq!(reduce_step(&p("x1^2"), &p("x2")), None);
        let g = p("x1 - 2*x2 + 1");
        let f = &g.pow(5).scale(&int(3)) + &p("x2^3");
        assert_eq!(reduce_step(&f, &g), Some((int(3), 5)));
    }

    #[test]
    fn identity_gives_empty_word() {
        let out = decompose2(&PolyMap::identity(2)).unwrap();
        let dec = out.decomposition().unwrap();
        assert!(dec.word.is_empty() && dec.steps.is_empty() && dec.affine_tail.is_none());
    }

    #[test]
    fn single_elementary() {
        let dec = decompose2(&map("x1 + x2^2; x2")).unwrap();
        let dec = dec.decomposition().unwrap();
        assert_eq!(dec.word.to_text().trim(), "E 1 x2^2");
        assert_eq!(dec.steps.len(), 1);
    }

    #[test]
    fn stacked_elementaries_recompose() {
        let m = map("x1 + x2^2; x2 + (x1 + x2^2)^3");
        let out = decompose2(&m).unwrap();
        let dec = out.decomposition().unwrap();
        assert_eq!(dec.word.expand(), m);
        assert_eq!(dec.steps.len(), 2);
        for s in &dec.steps {
            assert!(s.degree_sum_after < s.degree_sum_before);
        }
    }

    #[test]
    fn perturbed_map_is_rejected() {
        let out = decompose2(&map("x1 + x2^2; x2 + 2*x1*x2")).unwrap();
        assert!(matches!(out, Decompose2::NotAnAutomorphism(Certificate::NonConstantJacobian { .. })));
        let out = decompose2(&map("x1 + 1; 2*x1 + 2")).unwrap();
        assert!(matches!(out, Decompose2::NotAnAutomorphism(_)));
    }

    #[test]
    fn relation_examples() {
        assert_eq!(relation2(&map("2*x1 + x2; x1 - 1")).unwrap(), Some(Polynomial::zero(2)));
        assert_eq!(relation2(&map("x1 + x2^2; x2")).unwrap(), Some(p("x1 - x2^2")));
        assert_eq!(relation2(&map("x2; x1 + x2^3")).unwrap(), Some(p("x2 - x1^3")));
    }

    #[test]
    fn plane_inequality_holds_with_linear_term() {
        let m = map("x1 + x2^3; x2");
        let r = relation2(&m).unwrap().unwrap();
        let ineq = plane_inequality(&m, &r).unwrap();
        assert_eq!((ineq.s, ineq.d1, ineq.d2, ineq.holds), (1, 3, 1, true));
    }
}
