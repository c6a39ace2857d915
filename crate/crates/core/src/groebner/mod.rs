//! Gröbner bases, normal forms, and kernels of polynomial ring maps.

mod engine;
mod oracle;
mod order;

use serde::{Deserialize, Serialize};

pub use oracle::{graded_kernel_oracle, oracle_agreement, OracleAgreement};
pub use order::MonomialOrder;

use crate::poly::format_poly_with;
use crate::{Error, Monomial, Polynomial, Result, WeightVector};

/// Default budget of S-pair reductions.
pub const DEFAULT_PAIR_CAP: usize = 100_000;

/// A list of generators together with the order they are a basis for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealBasis {
    pub gens: Vec<Polynomial>,
    pub order: MonomialOrder,
    pub reduced: bool,
}

impl IdealBasis {
    /// An unreduced basis, e.g. for dividing by an arbitrary list.
    pub fn from_gens(gens: Vec<Polynomial>, order: MonomialOrder) -> Self {
        IdealBasis { gens, order, reduced: false }
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        normal_form(p, self).is_zero()
    }

    /// Generators printed with `letter` as variable name.
    pub fn display_with(&self, letter: char) -> Vec<String> {
        self.gens.iter().map(|g| format_poly_with(g, letter)).collect()
    }
}

/// Remainder of multivariate division by the basis, over the rationals.
pub fn normal_form(p: &Polynomial, basis: &IdealBasis) -> Polynomial {
    let compiled = basis.order.compile(p.nvars());
    let leads: Vec<(Monomial, crate::Rational)> = basis.gens.iter().filter_map(|g| compiled.leading(g)).collect();
    let gens: Vec<&Polynomial> = basis.gens.iter().filter(|g| !g.is_zero()).collect();
    let mut work = p.clone();
    let mut rem = Polynomial::zero(p.nvars());
    while let Some((m, c)) = compiled.leading(&work) {
        let hit = leads.iter().zip(&gens).find_map(|((lm, lc), g)| lm.quotient_of(&m).map(|q| (q, lc, g)));
        match hit {
            Some((q, lc, g)) => {
                work = &work - &g.mul_monomial(&q, &(&c / lc));
            }
            None => {
                let t = Polynomial::monomial(m, c);
                work = &work - &t;
                rem = &rem + &t;
            }
        }
    }
    rem
}

pub fn buchberger(gens: &[Polynomial], order: &MonomialOrder) -> Result<IdealBasis> {
    buchberger_with_cap(gens, order, DEFAULT_PAIR_CAP)
}

/// Reduced Gröbner basis; errors once `cap` S-pairs have been reduced.
pub fn buchberger_with_cap(gens: &[Polynomial], order: &MonomialOrder, cap: usize) -> Result<IdealBasis> {
    let nvars = match gens.first() {
        Some(g) => g.nvars(),
        None => return Ok(IdealBasis { gens: Vec::new(), order: order.clone(), reduced: true }),
    };
    if let Some(bad) = gens.iter().find(|g| g.nvars() != nvars) {
        return Err(Error::VariableCountMismatch { left: nvars, right: bad.nvars() });
    }
    order.validate(nvars)?;
    let compiled = order.compile(nvars);
    let engine = engine::Engine::new(&compiled, order.grading(nvars), nvars, cap);
    let gens = engine.run(gens)?;
    Ok(IdealBasis { gens, order: order.clone(), reduced: true })
}

/// Whether every S-polynomial of the basis reduces to zero.
pub fn is_groebner(basis: &IdealBasis) -> bool {
    let Some(first) = basis.gens.first() else {
        return true;
    };
    let compiled = basis.order.compile(first.nvars());
    let leads: Vec<_> = basis.gens.iter().map(|g| compiled.leading(g).expect("nonzero")).collect();
    for i in 0..basis.gens.len() {
        for j in i + 1..basis.gens.len() {
            let (mi, ci) = &leads[i];
            let (mj, cj) = &leads[j];
            let l = mi.lcm(mj);
            let ui = mi.quotient_of(&l).unwrap();
            let uj = mj.quotient_of(&l).unwrap();
            let s = &basis.gens[i].mul_monomial(&ui, &ci.recip()) - &basis.gens[j].mul_monomial(&uj, &cj.recip());
            if !normal_form(&s, basis).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Principality of an ideal from its reduced basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Principality {
    /// The zero ideal, generated by 0.
    Zero,
    Principal(Polynomial),
    NotPrincipal(Vec<Polynomial>),
}

impl Principality {
    pub fn is_principal(&self) -> bool {
        !matches!(self, Principality::NotPrincipal(_))
    }

    /// The generator, with 0 for the zero ideal.
    pub fn generator(&self, nvars: usize) -> Option<Polynomial> {
        match self {
            Principality::Zero => Some(Polynomial::zero(nvars)),
            Principality::Principal(r) => Some(r.clone()),
            Principality::NotPrincipal(_) => None,
        }
    }
}

pub fn is_principal(basis: &IdealBasis) -> Principality {
    match basis.gens.as_slice() {
        [] => Principality::Zero,
        [r] => Principality::Principal(r.clone()),
        gens => Principality::NotPrincipal(gens.to_vec()),
    }
}

/// The ideal of all `G(z)` with `G(images) = 0`, as a reduced basis under
/// weighted graded-lex by `d`.
///
/// Computed by eliminating the source variables from `z_i - images_i`.
/// `source_weights` grade the source variables (standard when absent).
pub fn kernel_ideal(images: &[Polynomial], d: &WeightVector) -> Result<IdealBasis> {
    kernel_ideal_with(images, d, None, DEFAULT_PAIR_CAP)
}

pub fn kernel_ideal_with(
    images: &[Polynomial],
    d: &WeightVector,
    source_weights: Option<&WeightVector>,
    cap: usize,
) -> Result<IdealBasis> {
    let n = images.len();
    if d.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: d.len() });
    }
    let back = MonomialOrder::graded(d);
    if n == 0 {
        return Ok(IdealBasis { gens: Vec::new(), order: back, reduced: true });
    }
    let m = images[0].nvars();
    if let Some(bad) = images.iter().find(|p| p.nvars() != m) {
        return Err(Error::VariableCountMismatch { left: m, right: bad.nvars() });
    }
    let std_m = WeightVector::standard(m);
    let wx = source_weights.unwrap_or(&std_m);
    if wx.len() != m {
        return Err(Error::LengthMismatch { expected: m, found: wx.len() });
    }
    let total = m + n;
    let x_map: Vec<usize> = (0..m).collect();
    let gens: Vec<Polynomial> =
        images.iter().enumerate().map(|(i, f)| &Polynomial::var(total, m + i) - &f.remap(total, &x_map)).collect();
    let order = MonomialOrder::block(m, MonomialOrder::graded(wx), back.clone());
    let full = buchberger_with_cap(&gens, &order, cap)?;
    let kernel = full.gens.into_iter().filter(|g| (0..m).all(|k| !g.involves(k))).map(|g| restrict(&g, n)).collect();
    Ok(IdealBasis { gens: kernel, order: back, reduced: true })
}

/// Drop the first `nvars - n` variables, which must not occur.
fn restrict(g: &Polynomial, n: usize) -> Polynomial {
    let m = g.nvars() - n;
    Polynomial::from_terms(
        n,
        g.terms().map(|(mono, c)| {
            let e: Vec<u32> = (0..n).map(|i| mono.exp(m + i)).collect();
            (Monomial::from_exponents(&e), c.clone())
        }),
    )
}

/// Whether `g` substituted at the images vanishes.
pub fn vanishes_on(g: &Polynomial, images: &[Polynomial]) -> Result<bool> {
    Ok(g.compose(images)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_poly;

    fn p(s: &str, n: usize) -> Polynomial {
        parse_poly(s, n).unwrap()
    }

    fn grlex(n: usize) -> MonomialOrder {
        MonomialOrder::graded(&WeightVector::standard(n))
    }

    #[test]
    fn normal_forms() {
        let r = p("x1 - x2^2", 2);
        let b = IdealBasis::from_gens(vec![r.clone()], MonomialOrder::Lex);
        assert!(normal_form(&r, &b).is_zero());
        let bx = IdealBasis::from_gens(vec![p("x1", 2)], grlex(2));
        assert_eq!(normal_form(&p("1", 2), &bx), p("1", 2));
        assert!(normal_form(&p("x1^2 - x2^4", 2), &b).is_zero());
    }

    #[test]
    fn buchberger_examples() {
        assert!(buchberger(&[Polynomial::zero(2)], &grlex(2)).unwrap().is_zero_ideal());
        let b = buchberger(&[p("x1 - x2^2", 2), p("x2", 2)], &grlex(2)).unwrap();
        assert_eq!(b.gens, vec![p("x2", 2), p("x1", 2)]);
        let r = p("-3*x1 + 6*x2^2 - 3/2*x3", 3);
        let b = buchberger(std::slice::from_ref(&r), &grlex(3)).unwrap();
        assert_eq!(b.gens, vec![p("x2^2 - 1/2*x1 - 1/4*x3", 3)]);
    }

    #[test]
    fn twisted_cubic_is_groebner() {
        let gens = [p("x2 - x1^2", 4), p("x3 - x1^3", 4), p("x4 - x1*x3", 4)];
        for order in [grlex(4), MonomialOrder::Lex] {
            let b = buchberger(&gens, &order).unwrap();
            assert!(is_groebner(&b));
            for g in &gens {
                assert!(b.contains(g));
            }
        }
    }

    #[test]
    fn resource_cap_is_reported() {
        let gens = [p("x2 - x1^2", 4), p("x3 - x1^3", 4), p("x4 - x1*x3", 4)];
        assert_eq!(buchberger_with_cap(&gens, &MonomialOrder::Lex, 1), Err(Error::ResourceCap(1)));
        // pairwise coprime leading terms need no reductions at all
        let coprime = [p("x1^3 - x2*x3", 3), p("x2^3 - x1*x3", 3), p("x3^3 - x1*x2", 3)];
        assert_eq!(buchberger_with_cap(&coprime, &grlex(3), 0).unwrap().len(), 3);
    }

    #[test]
    fn kernels() {
        let std = WeightVector::standard(2);
        let affine = [p("2*x1 + x2", 2), p("x1 - x2", 2)];
        assert!(kernel_ideal(&affine, &std).unwrap().is_zero_ideal());

        let d = WeightVector::from_integers(&[2, 1]).unwrap();
        let k = kernel_ideal(&[p("x2^2", 2), p("x2", 2)], &d).unwrap();
        assert_eq!(is_principal(&k), Principality::Principal(p("x1 - x2^2", 2)));

        let nagata = [p("-x3*(x1*x3+x2^2)^2", 3), p("x3*(x1*x3+x2^2)", 3), p("x3", 3)];
        let d = WeightVector::from_integers(&[5, 3, 1]).unwrap();
        let k = kernel_ideal(&nagata, &d).unwrap();
        assert_eq!(is_principal(&k), Principality::Principal(p("x2^2 + x1*x3", 3)));
    }

    #[test]
    fn principality() {
        let o = grlex(2);
        let two = IdealBasis { gens: vec![p("x1", 2), p("x2", 2)], order: o.clone(), reduced: true };
        assert!(!is_principal(&two).is_principal());
        let none = IdealBasis { gens: vec![], order: o, reduced: true };
        assert_eq!(is_principal(&none), Principality::Zero);
        assert_eq!(is_principal(&none).generator(2), Some(Polynomial::zero(2)));
    }
}
