//! Fraction-free Buchberger over the integers with the Gebauer–Möller pair
//! criteria and a sugar-ordered pair queue.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::order::{CompiledOrder, Key};
use crate::{Error, Monomial, Polynomial, Rational, Result};

type Exps = SmallVec<[u32; 8]>;

#[derive(Clone, Debug)]
struct Mono {
    exps: Exps,
    key: Key,
    mask: u64,
}

impl Mono {
    fn new(exps: Exps, order: &CompiledOrder) -> Self {
        let key = order.key(&exps);
        let mask = mask_of(&exps);
        Mono { exps, key, mask }
    }

    fn mul(&self, other: &Mono) -> Mono {
        let exps: Exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        let key = self.key.iter().zip(&other.key).map(|(a, b)| a + b).collect();
        Mono { mask: mask_of(&exps), exps, key }
    }

    fn divides(&self, other: &Mono) -> bool {
        self.mask & !other.mask == 0 && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    fn quotient(&self, other: &Mono) -> Mono {
        let exps: Exps = other.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect();
        let key = other.key.iter().zip(&self.key).map(|(a, b)| a - b).collect();
        Mono { mask: mask_of(&exps), exps, key }
    }

    fn lcm(&self, other: &Mono, order: &CompiledOrder) -> Mono {
        let exps: Exps = self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect();
        Mono::new(exps, order)
    }

    fn coprime(&self, other: &Mono) -> bool {
        self.mask & other.mask == 0 || self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    fn degree(&self, grading: &[u64]) -> u64 {
        self.exps.iter().zip(grading).map(|(&e, &w)| e as u64 * w).sum()
    }
}

fn mask_of(exps: &[u32]) -> u64 {
    exps.iter().enumerate().filter(|(_, &e)| e > 0).fold(0, |m, (i, _)| m | (1u64 << (i % 64)))
}

#[derive(Clone, Debug)]
struct Term {
    m: Mono,
    c: BigInt,
}

/// Terms sorted ascending by key; the leading term is last.
#[derive(Clone, Debug)]
struct IPoly {
    terms: Vec<Term>,
    sugar: u64,
}

impl IPoly {
    fn lead(&self) -> &Term {
        self.terms.last().expect("nonzero")
    }

    fn make_primitive(&mut self) {
        primitive(&mut self.terms);
        if self.lead().c.is_negative() {
            for t in &mut self.terms {
                t.c = -std::mem::take(&mut t.c);
            }
        }
    }
}

fn content(terms: &[Term]) -> BigInt {
    let mut g = BigInt::zero();
    for t in terms {
        g = g.gcd(&t.c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive(terms: &mut [Term]) {
    let g = content(terms);
    if !g.is_zero() && !g.is_one() {
        for t in terms.iter_mut() {
            t.c /= &g;
        }
    }
}

/// `a·f - b·(m·g)`, both inputs ascending.
fn sub_mul(f: &[Term], a: &BigInt, b: &BigInt, m: &Mono, g: &[Term]) -> Vec<Term> {
    let mut out = Vec::with_capacity(f.len() + g.len());
    let mut i = 0;
    let mut j = 0;
    let shifted = |t: &Term| Term { m: m.mul(&t.m), c: -(b * &t.c) };
    let mut pending: Option<Term> = g.first().map(shifted);
    while i < f.len() || pending.is_some() {
        let ord = match (&pending, f.get(i)) {
            (Some(p), Some(t)) => t.m.key.cmp(&p.m.key),
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (None, None) => unreachable!(),
        };
        match ord {
            Ordering::Less => {
                let t = &f[i];
                out.push(Term { m: t.m.clone(), c: a * &t.c });
                i += 1;
            }
            Ordering::Greater => {
                out.push(pending.take().unwrap());
                j += 1;
                pending = g.get(j).map(shifted);
            }
            Ordering::Equal => {
                let mut p = pending.take().unwrap();
                p.c += a * &f[i].c;
                if !p.c.is_zero() {
                    out.push(p);
                }
                i += 1;
                j += 1;
                pending = g.get(j).map(shifted);
            }
        }
    }
    out
}

pub(crate) struct Engine<'o> {
    order: &'o CompiledOrder,
    grading: Vec<u64>,
    nvars: usize,
    polys: Vec<IPoly>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
    next_seq: usize,
    reductions: usize,
    cap: usize,
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
    sugar: u64,
    seq: usize,
}

impl<'o> Engine<'o> {
    pub(crate) fn new(order: &'o CompiledOrder, grading: Vec<u64>, nvars: usize, cap: usize) -> Self {
        Engine {
            order,
            grading,
            nvars,
            polys: Vec::new(),
            active: Vec::new(),
            pairs: Vec::new(),
            next_seq: 0,
            reductions: 0,
            cap,
        }
    }

    fn to_ipoly(&self, p: &Polynomial) -> Option<IPoly> {
        if p.is_zero() {
            return None;
        }
        let den = p.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let mut terms: Vec<Term> = p
            .terms()
            .map(|(m, c)| Term {
                m: Mono::new(m.exponents().into(), self.order),
                c: (c * Rational::from_integer(den.clone())).to_integer(),
            })
            .collect();
        terms.sort_by(|a, b| a.m.key.cmp(&b.m.key));
        let sugar = terms.iter().map(|t| t.m.degree(&self.grading)).max().unwrap_or(0);
        let mut ip = IPoly { terms, sugar };
        ip.make_primitive();
        Some(ip)
    }

    fn find_reducer(&self, m: &Mono, among: &[usize]) -> Option<usize> {
        among.iter().copied().find(|&k| self.polys[k].lead().m.divides(m))
    }

    /// Full reduction of `p` by the polynomials indexed by `among`.
    fn reduce(&self, p: IPoly, among: &[usize]) -> Option<IPoly> {
        let sugar = p.sugar;
        let mut work = p.terms;
        let mut rem: Vec<Term> = Vec::new();
        let mut steps = 0usize;
        while let Some(t) = work.last() {
            match self.find_reducer(&t.m, among) {
                None => rem.push(work.pop().unwrap()),
                Some(k) => {
                    let g = &self.polys[k];
                    let lg = g.lead();
                    let gg = lg.c.gcd(&t.c);
                    let a = &lg.c / &gg;
                    let b = &t.c / &gg;
                    let q = lg.m.quotient(&t.m);
                    let mut next = sub_mul(&work, &a, &b, &q, &g.terms);
                    debug_assert!(next.last().is_none_or(|l| l.m.key < t.m.key));
                    if !a.is_one() {
                        for r in &mut rem {
                            r.c *= &a;
                        }
                    }
                    steps += 1;
                    if steps.is_multiple_of(8) {
                        let g = content(&rem).gcd(&content(&next));
                        if !g.is_zero() && !g.is_one() {
                            for r in rem.iter_mut().chain(next.iter_mut()) {
                                r.c /= &g;
                            }
                        }
                    }
                    work = next;
                }
            }
        }
        if rem.is_empty() {
            return None;
        }
        rem.reverse();
        let mut out = IPoly { terms: rem, sugar };
        out.make_primitive();
        Some(out)
    }

    fn spoly(&self, p: &Pair) -> IPoly {
        let f = &self.polys[p.i];
        let g = &self.polys[p.j];
        let (lf, lg) = (f.lead(), g.lead());
        let gg = lf.c.gcd(&lg.c);
        let a = &lg.c / &gg;
        let b = &lf.c / &gg;
        let uf = lf.m.quotient(&p.lcm);
        let ug = lg.m.quotient(&p.lcm);
        let fa: Vec<Term> = f.terms.iter().map(|t| Term { m: uf.mul(&t.m), c: t.c.clone() }).collect();
        let mut terms = sub_mul(&fa, &a, &b, &ug, &g.terms);
        // the leading terms cancel by construction
        debug_assert!(terms.last().is_none_or(|l| l.m.key < p.lcm.key));
        primitive(&mut terms);
        IPoly { terms, sugar: p.sugar }
    }

    fn pair_sugar(&self, i: usize, j: usize, lcm: &Mono) -> u64 {
        let d = lcm.degree(&self.grading);
        let side = |k: usize| {
            let p = &self.polys[k];
            p.sugar - p.lead().m.degree(&self.grading).min(p.sugar)
        };
        d + side(i).max(side(j))
    }

    /// Gebauer–Möller update with the new polynomial `h`.
    fn update(&mut self, h: IPoly) {
        let hi = self.polys.len();
        self.polys.push(h);
        let lh = self.polys[hi].lead().m.clone();

        let mut cands: Vec<(usize, Mono, bool)> = self
            .active
            .iter()
            .map(|&g| {
                let lg = &self.polys[g].lead().m;
                (g, lh.lcm(lg, self.order), lh.coprime(lg))
            })
            .collect();

        // chain criterion among the new pairs
        let mut keep = vec![true; cands.len()];
        for a in 0..cands.len() {
            if cands[a].2 {
                continue;
            }
            for b in 0..cands.len() {
                if a == b || !keep[b] {
                    continue;
                }
                let (la, lb) = (&cands[a].1, &cands[b].1);
                if lb.divides(la) && (lb.key != la.key || b < a) {
                    keep[a] = false;
                    break;
                }
            }
        }
        // product criterion
        let new_pairs: Vec<(usize, Mono)> = cands
            .drain(..)
            .zip(keep)
            .filter(|((_, _, coprime), k)| *k && !coprime)
            .map(|((g, l, _), _)| (g, l))
            .collect();

        // drop old pairs whose lcm is strictly divisible through h
        let polys = &self.polys;
        let order = self.order;
        self.pairs.retain(|p| {
            if !lh.divides(&p.lcm) {
                return true;
            }
            let li = lh.lcm(&polys[p.i].lead().m, order);
            let lj = lh.lcm(&polys[p.j].lead().m, order);
            li.key == p.lcm.key || lj.key == p.lcm.key
        });

        for (g, lcm) in new_pairs {
            let sugar = self.pair_sugar(g, hi, &lcm);
            self.pairs.push(Pair { i: g, j: hi, lcm, sugar, seq: self.next_seq });
            self.next_seq += 1;
        }

        let polys = &self.polys;
        self.active.retain(|&g| !lh.divides(&polys[g].lead().m));
        self.active.push(hi);
    }

    fn pop_pair(&mut self) -> Option<Pair> {
        let best = self
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                a.sugar.cmp(&b.sugar).then_with(|| a.lcm.key.cmp(&b.lcm.key)).then(a.seq.cmp(&b.seq))
            })
            .map(|(k, _)| k)?;
        Some(self.pairs.swap_remove(best))
    }

    /// Reduced Gröbner basis, monic, sorted by ascending leading monomial.
    pub(crate) fn run(mut self, gens: &[Polynomial]) -> Result<Vec<Polynomial>> {
        let mut inputs: Vec<IPoly> = gens.iter().filter_map(|g| self.to_ipoly(g)).collect();
        inputs.sort_by(|a, b| a.sugar.cmp(&b.sugar).then_with(|| a.lead().m.key.cmp(&b.lead().m.key)));
        for p in inputs {
            let active = self.active.clone();
            if let Some(h) = self.reduce(p, &active) {
                self.update(h);
            }
        }
        while let Some(pair) = self.pop_pair() {
            self.reductions += 1;
            if self.reductions > self.cap {
                return Err(Error::ResourceCap(self.cap));
            }
            let s = self.spoly(&pair);
            if s.terms.is_empty() {
                continue;
            }
            let active = self.active.clone();
            if let Some(h) = self.reduce(s, &active) {
                self.update(h);
            }
        }
        Ok(self.finish())
    }

    fn finish(&self) -> Vec<Polynomial> {
        let mut idx = self.active.clone();
        // minimal basis: drop elements whose leading monomial is divisible by another's
        idx.sort_by(|&a, &b| self.polys[a].lead().m.key.cmp(&self.polys[b].lead().m.key));
        let mut minimal: Vec<usize> = Vec::new();
        for &k in &idx {
            let lm = &self.polys[k].lead().m;
            if !minimal.iter().any(|&o| self.polys[o].lead().m.divides(lm)) {
                minimal.push(k);
            }
        }
        minimal
            .iter()
            .map(|&k| {
                let others: Vec<usize> = minimal.iter().copied().filter(|&o| o != k).collect();
                let p = self.polys[k].clone();
                let lead = p.lead().clone();
                let tail = IPoly { terms: p.terms[..p.terms.len() - 1].to_vec(), sugar: p.sugar };
                let reduced_tail = if tail.terms.is_empty() { None } else { self.reduce_keep_scale(tail, &others) };
                self.assemble(lead, reduced_tail)
            })
            .collect()
    }

    /// Reduce without normalising, returning `(scale, remainder)` with
    /// `scale·p ≡ remainder`.
    fn reduce_keep_scale(&self, p: IPoly, among: &[usize]) -> Option<(BigInt, Vec<Term>)> {
        let mut work = p.terms;
        let mut rem: Vec<Term> = Vec::new();
        let mut scale = BigInt::one();
        while let Some(t) = work.last() {
            match self.find_reducer(&t.m, among) {
                None => rem.push(work.pop().unwrap()),
                Some(k) => {
                    let g = &self.polys[k];
                    let lg = g.lead();
                    let gg = lg.c.gcd(&t.c);
                    let a = &lg.c / &gg;
                    let b = &t.c / &gg;
                    let q = lg.m.quotient(&t.m);
                    work = sub_mul(&work, &a, &b, &q, &g.terms);
                    if !a.is_one() {
                        for r in &mut rem {
                            r.c *= &a;
                        }
                        scale *= &a;
                    }
                }
            }
        }
        rem.reverse();
        Some((scale, rem))
    }

    fn assemble(&self, lead: Term, tail: Option<(BigInt, Vec<Term>)>) -> Polynomial {
        let lc = Rational::from_integer(lead.c.clone());
        let mut terms = vec![(Monomial::from_exponents(&lead.m.exps), Rational::one())];
        if let Some((scale, rem)) = tail {
            let denom = &lc * Rational::from_integer(scale);
            for t in rem {
                terms.push((Monomial::from_exponents(&t.m.exps), Rational::from_integer(t.c) / &denom));
            }
        }
        Polynomial::from_terms(self.nvars, terms)
    }
}
