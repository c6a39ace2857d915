//! Automorphisms as words in affine, elementary and transposition
//! generators, and as expanded coordinate tuples.
//!
//! Indices in the Rust API are zero-based; the text formats are one-based.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg;
use crate::poly::{format_poly, jacobian, parse_poly};
use crate::{rational, Error, Polynomial, Rational, Result, WeightVector};

/// A tame generator acting on `n` variables.
#[derive(Clone, PartialEq, Eq)]
pub enum Generator {
    /// `x -> A x + b`, with `A` row-major and invertible.
    Affine { matrix: Vec<Vec<Rational>>, shift: Vec<Rational> },
    /// `x_target -> x_target + addend`, the addend free of `x_target`.
    Elementary { target: usize, addend: Polynomial },
    /// Swap `x_i` and `x_j`.
    Transposition(usize, usize),
}

impl Generator {
    pub fn elementary(target: usize, addend: Polynomial) -> Result<Self> {
        let n = addend.nvars();
        if target >= n {
            return Err(Error::IndexOutOfRange { index: target + 1, nvars: n });
        }
        if addend.involves(target) {
            return Err(Error::InvalidGenerator(format!("elementary addend {addend} involves x{}", target + 1)));
        }
        Ok(Generator::Elementary { target, addend })
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        for k in [i, j] {
            if k >= n {
                return Err(Error::IndexOutOfRange { index: k + 1, nvars: n });
            }
        }
        if i == j {
            return Err(Error::InvalidGenerator(format!("transposition of x{} with itself", i + 1)));
        }
        Ok(Generator::Transposition(i.min(j), i.max(j)))
    }

    pub fn affine(matrix: Vec<Vec<Rational>>, shift: Vec<Rational>) -> Result<Self> {
        let n = shift.len();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::LengthMismatch { expected: n * n, found: matrix.iter().map(Vec::len).sum() });
        }
        if linalg::determinant(&matrix).is_zero() {
            return Err(Error::InvalidGenerator("singular affine matrix".into()));
        }
        Ok(Generator::Affine { matrix, shift })
    }

    /// Invertible diagonal scaling `x_i -> s_i x_i`.
    pub fn scaling(scales: &[Rational]) -> Result<Self> {
        let n = scales.len();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { scales[i].clone() } else { Rational::zero() }).collect())
            .collect();
        Self::affine(matrix, vec![Rational::zero(); n])
    }

    /// Affine generator permuting coordinates: `x -> (x_{p(0)}, ..., x_{p(n-1)})`.
    pub fn permutation(p: &[usize]) -> Result<Self> {
        let n = p.len();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| if p[i] == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        Self::affine(matrix, vec![Rational::zero(); n])
    }

    /// Variable count when the generator itself records it.
    fn arity(&self) -> Option<usize> {
        match self {
            Generator::Affine { shift, .. } => Some(shift.len()),
            Generator::Elementary { addend, .. } => Some(addend.nvars()),
            Generator::Transposition(..) => None,
        }
    }

    fn check_arity(&self, n: usize) -> Result<()> {
        match self {
            Generator::Transposition(i, j) => {
                if *i >= n || *j >= n {
                    return Err(Error::IndexOutOfRange { index: i.max(j) + 1, nvars: n });
                }
                Ok(())
            }
            _ => match self.arity() {
                Some(a) if a != n => Err(Error::VariableCountMismatch { left: n, right: a }),
                _ => Ok(()),
            },
        }
    }

    /// Coordinates of the generator as a map on `n` variables.
    pub fn coords(&self, n: usize) -> Vec<Polynomial> {
        self.apply_left(&PolyMap::identity(n).coords)
    }

    /// `self ∘ c`: the generator applied after the map with coordinates `c`.
    pub fn apply_left(&self, c: &[Polynomial]) -> Vec<Polynomial> {
        match self {
            Generator::Transposition(i, j) => {
                let mut out = c.to_vec();
                out.swap(*i, *j);
                out
            }
            Generator::Elementary { target, addend } => {
                let mut out = c.to_vec();
                let shift = addend.compose(c).expect("arity checked");
                out[*target] = &out[*target] + &shift;
                out
            }
            Generator::Affine { matrix, shift } => {
                let nv = c[0].nvars();
                matrix
                    .iter()
                    .zip(shift)
                    .map(|(row, b)| {
                        let mut acc = Polynomial::constant(nv, b.clone());
                        for (a, ci) in row.iter().zip(c) {
                            if !a.is_zero() {
                                acc = &acc + &ci.scale(a);
                            }
                        }
                        acc
                    })
                    .collect()
            }
        }
    }

    pub fn inverse(&self) -> Generator {
        match self {
            Generator::Transposition(i, j) => Generator::Transposition(*i, *j),
            Generator::Elementary { target, addend } => Generator::Elementary { target: *target, addend: -addend },
            Generator::Affine { matrix, shift } => {
                let inv = linalg::inverse(matrix).expect("invertible by construction");
                let shift =
                    inv.iter().map(|row| -row.iter().zip(shift).map(|(a, b)| a * b).sum::<Rational>()).collect();
                Generator::Affine { matrix: inv, shift }
            }
        }
    }

    /// Jacobian determinant of the generator.
    pub fn jacobian(&self) -> Rational {
        match self {
            Generator::Transposition(..) => -Rational::one(),
            Generator::Elementary { .. } => Rational::one(),
            Generator::Affine { matrix, .. } => linalg::determinant(matrix),
        }
    }

    /// Whether the generator is an affine map.
    pub fn is_affine(&self) -> bool {
        match self {
            Generator::Elementary { addend, .. } => addend.total_degree().unwrap_or(0) <= 1,
            _ => true,
        }
    }

    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let text = text.trim();
        let syntax = |msg: &str| Error::Syntax { pos: 0, msg: format!("{msg}: `{text}`") };
        let (head, rest) = text.split_once(char::is_whitespace).ok_or_else(|| syntax("incomplete generator"))?;
        let index = |s: &str| -> Result<usize> {
            let k: usize = s.trim().parse().map_err(|_| syntax("expected a variable index"))?;
            if k == 0 || k > n {
                return Err(Error::IndexOutOfRange { index: k, nvars: n });
            }
            Ok(k - 1)
        };
        match head {
            "E" => {
                let rest = rest.trim_start();
                let (i, poly) = rest.split_once(char::is_whitespace).ok_or_else(|| syntax("missing addend"))?;
                Generator::elementary(index(i)?, parse_poly(poly, n)?)
            }
            "T" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 2 {
                    return Err(syntax("transposition takes two indices"));
                }
                Generator::transposition(n, index(parts[0])?, index(parts[1])?)
            }
            "A" => {
                let (m, b) = rest.split_once('|').ok_or_else(|| syntax("missing `|`"))?;
                let m = m.split_whitespace().map(rational::parse).collect::<Result<Vec<_>>>()?;
                let b = b.split_whitespace().map(rational::parse).collect::<Result<Vec<_>>>()?;
                if m.len() != n * n || b.len() != n {
                    return Err(Error::LengthMismatch { expected: n * n + n, found: m.len() + b.len() });
                }
                Generator::affine(m.chunks(n).map(<[Rational]>::to_vec).collect(), b)
            }
            _ => Err(syntax("unknown generator kind")),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Transposition(i, j) => write!(f, "T {} {}", i + 1, j + 1),
            Generator::Elementary { target, addend } => {
                write!(f, "E {} {}", target + 1, format_poly(addend))
            }
            Generator::Affine { matrix, shift } => {
                let m: Vec<String> = matrix.iter().flatten().map(rational::format).collect();
                let b: Vec<String> = shift.iter().map(rational::format).collect();
                write!(f, "A {} | {}", m.join(" "), b.join(" "))
            }
        }
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A composition `g_1 ∘ g_2 ∘ ... ∘ g_k` of generators; empty is the identity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AutWord {
    n: usize,
    gens: Vec<Generator>,
}

impl AutWord {
    pub fn identity(n: usize) -> Self {
        AutWord { n, gens: Vec::new() }
    }

    pub fn new(n: usize, gens: Vec<Generator>) -> Result<Self> {
        for g in &gens {
            g.check_arity(n)?;
        }
        Ok(AutWord { n, gens })
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn push(&mut self, g: Generator) -> Result<()> {
        g.check_arity(self.n)?;
        self.gens.push(g);
        Ok(())
    }

    /// The word for `self ∘ other`.
    pub fn then(&self, other: &AutWord) -> Result<AutWord> {
        if self.n != other.n {
            return Err(Error::VariableCountMismatch { left: self.n, right: other.n });
        }
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ok(AutWord { n: self.n, gens })
    }

    pub fn expand(&self) -> PolyMap {
        let mut coords = PolyMap::identity(self.n).coords;
        for g in self.gens.iter().rev() {
            coords = g.apply_left(&coords);
        }
        PolyMap { coords }
    }

    /// The word of the inverse automorphism.
    pub fn invert(&self) -> AutWord {
        AutWord { n: self.n, gens: self.gens.iter().rev().map(Generator::inverse).collect() }
    }

    /// Product of the generator Jacobians.
    pub fn jacobian(&self) -> Rational {
        self.gens.iter().map(Generator::jacobian).product()
    }

    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let gens = split_items(text).map(|line| Generator::parse(line, n)).collect::<Result<Vec<_>>>()?;
        AutWord::new(n, gens)
    }

    pub fn to_text(&self) -> String {
        self.gens.iter().map(|g| format!("{g}\n")).collect()
    }
}

pub fn invert_word(w: &AutWord) -> AutWord {
    w.invert()
}

pub fn expand(w: &AutWord) -> PolyMap {
    w.expand()
}

fn split_items(text: &str) -> impl Iterator<Item = &str> {
    text.split(['\n', ';']).map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

#[derive(Serialize, Deserialize)]
struct WordRepr {
    nvars: usize,
    gens: Vec<String>,
}

impl Serialize for AutWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WordRepr { nvars: self.n, gens: self.gens.iter().map(ToString::to_string).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AutWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = WordRepr::deserialize(d)?;
        let gens = r
            .gens
            .iter()
            .map(|g| Generator::parse(g, r.nvars))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        AutWord::new(r.nvars, gens).map_err(serde::de::Error::custom)
    }
}

/// A polynomial map `(f_1, ..., f_n)` on `n` variables.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PolyMap {
    coords: Vec<Polynomial>,
}

impl PolyMap {
    pub fn identity(n: usize) -> Self {
        PolyMap { coords: (0..n).map(|i| Polynomial::var(n, i)).collect() }
    }

    pub fn new(coords: Vec<Polynomial>) -> Result<Self> {
        let n = coords.len();
        if n == 0 {
            return Err(Error::LengthMismatch { expected: 1, found: 0 });
        }
        if let Some(bad) = coords.iter().find(|c| c.nvars() != n) {
            return Err(Error::VariableCountMismatch { left: n, right: bad.nvars() });
        }
        Ok(PolyMap { coords })
    }

    pub fn nvars(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Polynomial] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Polynomial> {
        self.coords
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &PolyMap) -> Result<PolyMap> {
        let coords = self.coords.iter().map(|c| c.compose(&other.coords)).collect::<Result<Vec<_>>>()?;
        PolyMap::new(coords)
    }

    pub fn is_identity(&self) -> bool {
        *self == PolyMap::identity(self.nvars())
    }

    /// Whether every coordinate has total degree at most one.
    pub fn is_affine(&self) -> bool {
        self.coords.iter().all(|c| c.total_degree().unwrap_or(0) <= 1)
    }

    pub fn leading_terms(&self, w: &WeightVector) -> Vec<Polynomial> {
        self.coords.iter().map(|c| c.leading_term(w)).collect()
    }

    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let coords = split_items(text).map(|line| parse_poly(line, n)).collect::<Result<Vec<_>>>()?;
        if coords.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: coords.len() });
        }
        PolyMap::new(coords)
    }

    /// Parse a map, inferring `n` as the number of coordinates.
    pub fn parse_inferred(text: &str) -> Result<Self> {
        let n = split_items(text).count();
        Self::parse(text, n)
    }

    pub fn to_text(&self) -> String {
        self.coords.iter().map(|c| format!("{}\n", format_poly(c))).collect()
    }
}

impl FromStr for PolyMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PolyMap::parse_inferred(s)
    }
}

/// `μ` when the Jacobian determinant of the map is a nonzero constant.
pub fn jacobian_constant(m: &PolyMap) -> Result<Rational> {
    let j = jacobian(&m.coords)?;
    match j.as_constant() {
        Some(c) if c.is_zero() => Err(Error::ZeroJacobian),
        Some(c) => Ok(c),
        None => Err(Error::NonConstantJacobian(format_poly(&j))),
    }
}

/// The weights `d_i = deg_w1(f_i)`.
pub fn deg2_weights(m: &PolyMap, w1: &WeightVector) -> Result<WeightVector> {
    let ds = m
        .coords
        .iter()
        .enumerate()
        .map(|(i, c)| c.wdeg(w1).finite().cloned().ok_or(Error::ZeroCoordinate(i + 1)))
        .collect::<Result<Vec<_>>>()?;
    WeightVector::new(ds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn map(s: &str) -> PolyMap {
        s.parse().unwrap()
    }

    #[test]
    fn expands_single_generators() {
        let w = AutWord::parse("E 1 x2^2", 2).unwrap();
        assert_eq!(w.expand(), map("x1+x2^2; x2"));
        let t = AutWord::parse("T 1 2", 2).unwrap();
        assert_eq!(t.expand(), map("x2; x1"));
        assert!(AutWord::identity(3).expand().is_identity());
    }

    #[test]
    fn expansion_matches_stepwise_substitution() {
        let w = AutWord::parse("E 1 x2^2; T 1 2; E 1 x2^3", 2).unwrap();
        let mut direct = PolyMap::identity(2);
        for g in w.gens() {
            direct = direct.compose(&PolyMap::new(g.coords(2)).unwrap()).unwrap();
        }
        assert_eq!(w.expand(), direct);
        assert_eq!(w.expand(), map("x2 + x1^2 + 2*x1*x2^3 + x2^6; x1 + x2^3"));
    }

    #[test]
    fn inversion() {
        let w = AutWord::parse("E 1 x2^2", 2).unwrap();
        assert_eq!(w.invert(), AutWord::parse("E 1 -x2^2", 2).unwrap());
        assert_eq!(AutWord::identity(2).invert(), AutWord::identity(2));
        let w = AutWord::parse("A 2 1 7 4 | 1 -3; E 2 x1^3 - x1; T 1 2; E 1 5*x2^2", 2).unwrap();
        assert!(w.invert().expand().compose(&w.expand()).unwrap().is_identity());
        assert!(w.expand().compose(&w.invert().expand()).unwrap().is_identity());
    }

    #[test]
    fn jacobian_constants() {
        assert_eq!(jacobian_constant(&PolyMap::identity(3)).unwrap(), int(1));
        assert_eq!(jacobian_constant(&map("x1+x2^2; x2")).unwrap(), int(1));
        assert_eq!(jacobian_constant(&map("2*x1; x2")).unwrap(), int(2));
        assert!(matches!(jacobian_constant(&map("x1^2; x2")), Err(Error::NonConstantJacobian(_))));
        assert_eq!(jacobian_constant(&map("x1; x1")), Err(Error::ZeroJacobian));
    }

    #[test]
    fn deg2_weights_examples() {
        let std2 = WeightVector::standard(2);
        assert_eq!(deg2_weights(&PolyMap::identity(2), &std2).unwrap(), std2);
        assert_eq!(deg2_weights(&map("x1+x2^2; x2"), &std2).unwrap(), WeightVector::from_integers(&[2, 1]).unwrap());
        let nagata = map("x1 - 2*x2*(x1*x3+x2^2) - x3*(x1*x3+x2^2)^2; x2 + x3*(x1*x3+x2^2); x3");
        assert_eq!(
            deg2_weights(&nagata, &WeightVector::standard(3)).unwrap(),
            WeightVector::from_integers(&[5, 3, 1]).unwrap()
        );
        assert_eq!(jacobian_constant(&nagata).unwrap(), int(1));
        assert_eq!(deg2_weights(&map("x1; 0"), &std2), Err(Error::ZeroCoordinate(2)));
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(Generator::parse("E 1 x1*x2", 2).is_err());
        assert!(Generator::parse("A 1 2 2 4 | 0 0", 2).is_err());
        assert!(Generator::parse("T 1 3", 2).is_err());
    }

    #[test]
    fn text_round_trip() {
        let w = AutWord::parse("A 2 1/2 7 4 | 1 -3; E 2 x1^3 - x1; T 1 2", 2).unwrap();
        assert_eq!(AutWord::parse(&w.to_text(), 2).unwrap(), w);
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(serde_json::from_str::<AutWord>(&json).unwrap(), w);
        let m = w.expand();
        assert_eq!(PolyMap::parse(&m.to_text(), 2).unwrap(), m);
    }

    #[test]
    fn generator_jacobians_multiply() {
        let w = AutWord::parse("A 2 1 7 4 | 1 -3; T 1 2; A 3 0 0 1 | 0 0; E 1 x2^2", 2).unwrap();
        assert_eq!(w.jacobian(), int(-3));
        assert_eq!(jacobian_constant(&w.expand()).unwrap(), int(-3));
    }
}
