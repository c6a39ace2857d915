//! Seeded random corpora: tame words, affine words and test polynomials.
//!
//! Case `i` of a corpus with seed `s` is drawn from ChaCha8 seeded with `s`
//! on stream `i`, so cases can be generated independently and in parallel.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::autmap::{AutWord, Generator};
use crate::rational::int;
use crate::{Monomial, Polynomial, Rational};

/// Shape of random tame words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordShape {
    pub nvars: usize,
    pub max_gens: usize,
    pub max_addend_degree: u32,
    /// Coefficients are drawn from `[-coeff, coeff]`.
    pub coeff: i64,
    pub max_addend_terms: usize,
    /// Bound on the product of the addend degrees, which bounds the degree
    /// of the expanded map.
    pub degree_budget: u64,
}

impl WordShape {
    /// Plane words: up to 6 generators, addends of degree at most 4,
    /// coefficients in `[-9, 9]`.
    pub fn plane() -> Self {
        WordShape { nvars: 2, max_gens: 6, max_addend_degree: 4, coeff: 9, max_addend_terms: 3, degree_budget: 64 }
    }

    /// Short words in three variables, small enough for elimination.
    pub fn space() -> Self {
        WordShape { nvars: 3, max_gens: 3, max_addend_degree: 2, coeff: 3, max_addend_terms: 2, degree_budget: 4 }
    }
}

/// The generator for case `index` of the corpus `seed`.
pub fn case_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn coefficient<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Rational {
    int(rng.random_range(-bound..=bound))
}

fn nonzero_coefficient<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Rational {
    let v = rng.random_range(1..=bound.max(1));
    int(if rng.random_bool(0.5) { v } else { -v })
}

/// A random monomial of total degree `deg` in the variables `vars`.
fn monomial<R: Rng + ?Sized>(rng: &mut R, nvars: usize, vars: &[usize], deg: u32) -> Monomial {
    let mut e = vec![0u32; nvars];
    for _ in 0..deg {
        e[vars[rng.random_range(0..vars.len())]] += 1;
    }
    Monomial::from_exponents(&e)
}

/// A random polynomial in `vars` with at most `max_terms` terms of degree
/// at most `max_deg`; the first term has degree exactly `top`.
fn polynomial_in<R: Rng + ?Sized>(
    rng: &mut R,
    nvars: usize,
    vars: &[usize],
    top: u32,
    max_deg: u32,
    max_terms: usize,
    coeff: i64,
) -> Polynomial {
    let mut p = Polynomial::monomial(monomial(rng, nvars, vars, top), nonzero_coefficient(rng, coeff));
    for _ in 1..rng.random_range(1..=max_terms.max(1)) {
        let deg = rng.random_range(0..=max_deg);
        p.add_term(monomial(rng, nvars, vars, deg), coefficient(rng, coeff));
    }
    if p.is_zero() {
        Polynomial::var(nvars, vars[0])
    } else {
        p
    }
}

/// A random invertible affine generator with small entries.
pub fn random_affine<R: Rng + ?Sized>(rng: &mut R, n: usize, coeff: i64) -> Generator {
    loop {
        let matrix = (0..n).map(|_| (0..n).map(|_| coefficient(rng, 2)).collect()).collect();
        let shift = (0..n).map(|_| coefficient(rng, coeff)).collect();
        if let Ok(g) = Generator::affine(matrix, shift) {
            return g;
        }
    }
}

/// A random elementary generator whose addend has degree `deg`.
pub fn random_elementary<R: Rng + ?Sized>(rng: &mut R, shape: &WordShape, deg: u32) -> Generator {
    let n = shape.nvars;
    let target = rng.random_range(0..n);
    let others: Vec<usize> = (0..n).filter(|&i| i != target).collect();
    let addend = polynomial_in(rng, n, &others, deg, deg, shape.max_addend_terms, shape.coeff);
    Generator::elementary(target, addend).expect("addend avoids the target")
}

/// A random generator; elementary addends have degree at most `max_deg`.
fn random_generator<R: Rng + ?Sized>(rng: &mut R, shape: &WordShape, max_deg: u32) -> Generator {
    let n = shape.nvars;
    match rng.random_range(0..6) {
        0 => random_affine(rng, n, shape.coeff),
        1 => {
            let i = rng.random_range(0..n);
            let j = (i + rng.random_range(1..n)) % n;
            Generator::transposition(n, i, j).expect("distinct indices")
        }
        _ => {
            let deg = rng.random_range(1..=max_deg.max(1));
            random_elementary(rng, shape, deg)
        }
    }
}

/// A random tame word with between 1 and `max_gens` generators.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, shape: &WordShape) -> AutWord {
    let len = rng.random_range(1..=shape.max_gens);
    word_with_budget(rng, shape, len, shape.degree_budget)
}

fn word_with_budget<R: Rng + ?Sized>(rng: &mut R, shape: &WordShape, len: usize, budget: u64) -> AutWord {
    let mut left = budget.max(1);
    let gens = (0..len)
        .map(|_| {
            let max_deg = u64::from(shape.max_addend_degree).min(left) as u32;
            let g = random_generator(rng, shape, max_deg);
            if let Generator::Elementary { addend, .. } = &g {
                left /= addend.total_degree().unwrap_or(0).max(1);
            }
            g
        })
        .collect();
    AutWord::new(shape.nvars, gens).expect("generators fit the word")
}

/// A random word whose expansion is not affine.
pub fn random_non_affine_word<R: Rng + ?Sized>(rng: &mut R, shape: &WordShape) -> AutWord {
    loop {
        let deg = rng.random_range(2..=shape.max_addend_degree.max(2));
        let len = rng.random_range(0..shape.max_gens);
        let mut w = word_with_budget(rng, shape, len, shape.degree_budget / u64::from(deg));
        let at = rng.random_range(0..=w.len());
        let mut gens = w.gens().to_vec();
        gens.insert(at, random_elementary(rng, shape, deg));
        w = AutWord::new(shape.nvars, gens).expect("generators fit the word");
        if !w.expand().is_affine() {
            return w;
        }
    }
}

/// A word of 1 to 3 affine generators.
pub fn random_affine_word<R: Rng + ?Sized>(rng: &mut R, n: usize) -> AutWord {
    let len = rng.random_range(1..=3);
    let gens = (0..len).map(|_| random_affine(rng, n, 5)).collect();
    AutWord::new(n, gens).expect("generators fit the word")
}

/// A random nonzero test polynomial of degree at most `max_deg`.
pub fn random_poly<R: Rng + ?Sized>(rng: &mut R, n: usize, max_deg: u32) -> Polynomial {
    let vars: Vec<usize> = (0..n).collect();
    let top = rng.random_range(1..=max_deg.max(1));
    polynomial_in(rng, n, &vars, top, max_deg, 4, 5)
}

/// `count` words of the given shape.
pub fn word_corpus(seed: u64, count: usize, shape: &WordShape) -> Vec<AutWord> {
    (0..count).map(|i| random_word(&mut case_rng(seed, i), shape)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpora_are_reproducible() {
        let a = word_corpus(5, 10, &WordShape::plane());
        let b = word_corpus(5, 10, &WordShape::plane());
        assert_eq!(a, b);
        assert_ne!(a, word_corpus(6, 10, &WordShape::plane()));
    }

    #[test]
    fn words_respect_shape() {
        let shape = WordShape::plane();
        for w in word_corpus(1, 50, &shape) {
            assert!(!w.is_empty() && w.len() <= shape.max_gens);
            for g in w.gens() {
                if let Generator::Elementary { addend, .. } = g {
                    assert!(addend.total_degree().unwrap_or(0) <= 4);
                }
            }
            assert!(w.expand().coords().iter().all(|c| c.total_degree().unwrap_or(0) <= shape.degree_budget));
        }
    }

    #[test]
    fn non_affine_and_affine_words() {
        let mut rng = case_rng(2, 0);
        for _ in 0..10 {
            assert!(!random_non_affine_word(&mut rng, &WordShape::space()).expand().is_affine());
            assert!(random_affine_word(&mut rng, 3).expand().is_affine());
        }
    }
}
