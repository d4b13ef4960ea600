//! The fiberwise Wick product and the W+ exponential and inverse.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::index::MultiIndex;
use super::jet::JetPoly;
use super::prec::{self, EXACT};
use super::scalar::{factorial, HalfInt, Scalar};
use super::weyl::{accumulate, Key, WeylForm};
use crate::error::Error;

type Contractions = BTreeMap<(MultiIndex, MultiIndex), JetPoly>;

/// Wick product with contraction tensor `c[i][j]`, pairing `∂/∂y^i` on the left
/// factor with `∂/∂yb^j` on the right one:
/// `a ⋆ b = Σ_k hbar^k/k! c^{i1 j1}..c^{ik jk} ∂_y^k a ∂_yb^k b`.
///
/// In terms of the inverse Kähler form this is `c = (i/2) ω^{ij̄}`; the flat
/// model has `c = -δ`.
#[derive(Clone, Debug)]
pub struct Wick {
    n: usize,
    c: Vec<Vec<JetPoly>>,
    order: i32,
    cache: Vec<Contractions>,
}

const CACHED: usize = 10;

impl Wick {
    pub fn new(c: Vec<Vec<JetPoly>>) -> Self {
        let n = c.len();
        let order = c.iter().flatten().map(|j| j.jet_order()).min().unwrap_or(EXACT);
        let mut w = Wick { n, c, order, cache: Vec::new() };
        let mut cur: Contractions = BTreeMap::new();
        cur.insert((MultiIndex::ZERO, MultiIndex::ZERO), JetPoly::constant(n, order, Scalar::one()));
        for _ in 0..=CACHED {
            let next = w.step(&cur);
            w.cache.push(cur);
            cur = next;
        }
        w
    }

    /// The flat model, `y ⋆ yb = y yb - hbar`.
    pub fn flat(n: usize) -> Self {
        let c = (0..n)
            .map(|i| (0..n).map(|j| JetPoly::constant(n, EXACT, if i == j { -Scalar::one() } else { Scalar::zero() })).collect())
            .collect();
        Wick::new(c)
    }

    pub fn constant(c: &[Vec<Scalar>]) -> Self {
        let n = c.len();
        Wick::new(c.iter().map(|row| row.iter().map(|s| JetPoly::constant(n, EXACT, s.clone())).collect()).collect())
    }

    /// From the inverse Kähler form `ω^{ij̄}`.
    pub fn from_inverse_form(omega_upper: &[Vec<JetPoly>]) -> Self {
        let half_i = Scalar::imag_ratio(1, 2);
        Wick::new(omega_upper.iter().map(|row| row.iter().map(|j| j.scale(&half_i)).collect()).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tensor(&self) -> &[Vec<JetPoly>] {
        &self.c
    }

    /// Evaluates the contraction tensor at the basepoint.
    pub fn at_basepoint(&self) -> Wick {
        Wick::new(
            self.c.iter().map(|row| row.iter().map(|j| JetPoly::constant(self.n, EXACT, j.constant_term())).collect()).collect(),
        )
    }

    fn step(&self, cur: &Contractions) -> Contractions {
        let mut next: Contractions = BTreeMap::new();
        for ((a, b), m) in cur {
            for i in 0..self.n {
                for j in 0..self.n {
                    if self.c[i][j].is_zero() {
                        continue;
                    }
                    let t = m.mul_to(&self.c[i][j], self.order);
                    let key = (a.inc(i), b.inc(j));
                    match next.get_mut(&key) {
                        Some(v) => *v = v.add(&t),
                        None => {
                            next.insert(key, t);
                        }
                    }
                }
            }
        }
        next.retain(|_, v| !v.is_zero());
        next
    }

    fn contractions(&self, k: usize) -> std::borrow::Cow<'_, Contractions> {
        if k < self.cache.len() {
            return std::borrow::Cow::Borrowed(&self.cache[k]);
        }
        let mut cur = self.cache.last().unwrap().clone();
        for _ in self.cache.len() - 1..k {
            cur = self.step(&cur);
        }
        std::borrow::Cow::Owned(cur)
    }

    pub fn star(&self, a: &WeylForm, b: &WeylForm) -> WeylForm {
        let n = a.n();
        let w = prec::product(a.weight_cap(), a.min_weight(), b.weight_cap(), b.min_weight());
        let (va, vb) = (a.min_combined(), b.min_combined());
        let mut p = prec::product(a.jet_cap(), va, b.jet_cap(), vb);
        let contracts = a.has_y() && b.has_yb();
        if contracts {
            p = p.min(prec::plus(self.order, prec::plus(va, vb)));
        }
        let mut out = WeylForm::new(n, w, p);
        let kmax = if contracts {
            let ya = a.terms().keys().map(|k| k.y.degree()).max().unwrap_or(0);
            let yb = b.terms().keys().map(|k| k.yb.degree()).max().unwrap_or(0);
            ya.min(yb) as usize
        } else {
            0
        };
        let tables: Vec<_> = (0..=kmax).map(|k| self.contractions(k)).collect();
        let inv_fact: Vec<Scalar> =
            (0..=kmax).map(|k| Scalar::real(BigRational::new(BigInt::from(1), factorial(k as u32)))).collect();
        let mut acc: BTreeMap<Key, JetPoly> = BTreeMap::new();
        for (ka, ja) in a.terms() {
            for (kb, jb) in b.terms() {
                let wt = ka.weight() + kb.weight();
                if wt > out.weight_cap() {
                    continue;
                }
                let order = out.coef_order(wt);
                if order < 0 {
                    continue;
                }
                let Some((form, neg)) = ka.form.wedge(&kb.form) else { continue };
                let mut base = ja.mul_to(jb, order);
                if base.is_zero() {
                    continue;
                }
                if neg {
                    base = base.neg();
                }
                let kk = (ka.y.degree().min(kb.yb.degree()) as usize).min(kmax);
                for (k, table) in tables.iter().enumerate().take(kk + 1) {
                    for ((ia, ib), m) in table.iter() {
                        let (Some(ry), Some(rb)) = (ka.y.checked_sub(ia), kb.yb.checked_sub(ib)) else { continue };
                        let mult = ka.y.falling(ia) * kb.yb.falling(ib);
                        let s = &inv_fact[k] * &Scalar::real(BigRational::from_integer(mult));
                        let coef = if k == 0 { base.scale(&s) } else { base.mul_to(m, order).scale(&s) };
                        if coef.is_zero() {
                            continue;
                        }
                        let key = Key {
                            hbar: ka.hbar + kb.hbar + HalfInt::from_int(k as i32),
                            y: ry.add(&kb.y),
                            yb: ka.yb.add(&rb),
                            form,
                        };
                        accumulate(&mut acc, key, coef);
                    }
                }
            }
        }
        for (k, j) in acc {
            out.add_term(k, j);
        }
        out
    }

    /// Graded commutator `a ⋆ b - (-1)^{|a||b|} b ⋆ a`.
    pub fn commutator(&self, a: &WeylForm, b: &WeylForm) -> WeylForm {
        let (a0, a1) = a.parity_split();
        let (b0, b1) = b.parity_split();
        let mut r = self.star(a, b).sub(&self.star(&b0, a)).sub(&self.star(&b1, &a0));
        if !a1.is_zero() && !b1.is_zero() {
            r = r.add(&self.star(&b1, &a1));
        }
        r
    }

    /// `(1/hbar)[a, b]`, computed with the hbar division applied last.
    pub fn ad(&self, a: &WeylForm, b: &WeylForm) -> WeylForm {
        self.commutator(a, b).mul_hbar(-1)
    }

    /// Inverse of `u = 1 + v` with `v` of positive weight, by Neumann series.
    /// Exact inputs need an explicit weight cap.
    pub fn star_inverse(&self, u: &WeylForm, cap: i32) -> Result<WeylForm, Error> {
        let one = WeylForm::one(u.n());
        let v = u.sub(&one);
        if v.min_weight() < 1 || !v.symbol_free_of_forms() {
            return Err(Error::LeadingTerm);
        }
        let v = v.with_caps(cap, EXACT);
        let mut acc = one.with_caps(v.weight_cap(), v.jet_cap());
        let mut pow = acc.clone();
        let mv = v.neg();
        for _ in 0..=(cap.max(0) as usize + 1) {
            pow = self.star(&pow, &mv).with_caps(v.weight_cap(), EXACT);
            if pow.is_zero() {
                return Ok(acc);
            }
            acc = acc.add(&pow);
        }
        if pow.is_zero() {
            Ok(acc)
        } else {
            Err(Error::NotConverged { what: "star inverse".into(), passes: cap.max(0) as usize + 2 })
        }
    }
}

impl WeylForm {
    fn symbol_free_of_forms(&self) -> bool {
        self.terms().keys().all(|k| k.form.degree() == 0)
    }
}

/// `exp(phi/hbar)` under the classical product, truncated at weight `cap`.
///
/// Every term of `phi` must have form degree 0 and weight at least 2, and its
/// weight-2 part must be free of pure hbar, so `phi/hbar` has positive weight.
pub fn star_exp(phi: &WeylForm, cap: i32) -> Result<WeylForm, Error> {
    for k in phi.terms().keys() {
        if k.form.degree() != 0 {
            return Err(Error::WeightPrecondition("exponent must have form degree 0".into()));
        }
        let w = k.weight();
        if w < 2 || (w == 2 && k.is_fiber_constant()) {
            return Err(Error::WeightPrecondition(format!("exponent term of weight {w}")));
        }
    }
    let u = phi.mul_hbar(-1).with_caps(cap, EXACT);
    if !u.is_zero() && u.min_weight() < 1 {
        return Err(Error::WeightPrecondition("exponent/h has weight-0 terms; the series does not truncate".into()));
    }
    let mut acc = WeylForm::one(phi.n()).with_caps(u.weight_cap(), u.jet_cap());
    let mut pow = acc.clone();
    let mut m: i64 = 1;
    loop {
        pow = pow.mul(&u).scale(&Scalar::from_ratio(1, m)).with_caps(u.weight_cap(), EXACT);
        if pow.is_zero() {
            return Ok(acc);
        }
        acc = acc.add(&pow);
        m += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y() -> WeylForm {
        WeylForm::y(1, 0)
    }
    fn yb() -> WeylForm {
        WeylForm::yb(1, 0)
    }

    #[test]
    fn flat_basic_products() {
        let w = Wick::flat(1);
        assert_eq!(w.star(&y(), &yb()), y().mul(&yb()).sub(&WeylForm::hbar(1)));
        assert_eq!(w.star(&yb(), &y()), y().mul(&yb()));
        assert_eq!(w.commutator(&y(), &yb()), WeylForm::hbar(1).neg());
    }

    #[test]
    fn exp_and_inverse() {
        let w = Wick::flat(1);
        let phi = y().mul(&y()).mul(&yb()).mul(&yb()).scale(&Scalar::from_ratio(1, 3));
        let e = star_exp(&phi, 8).unwrap();
        let inv = w.star_inverse(&e, 8).unwrap();
        assert_eq!(w.star(&e, &inv), WeylForm::one(1).with_caps(e.weight_cap(), EXACT));
        assert_eq!(w.star(&inv, &e), WeylForm::one(1).with_caps(e.weight_cap(), EXACT));
        assert!(star_exp(&WeylForm::hbar(1), 4).is_err());
    }

    #[test]
    fn inverse_of_one_plus_y() {
        let w = Wick::flat(1);
        let u = WeylForm::one(1).add(&y());
        let inv = w.star_inverse(&u, 5).unwrap();
        let mut expect = WeylForm::zero(1).with_caps(5, EXACT);
        let mut p = WeylForm::one(1);
        for _ in 0..=5 {
            expect = expect.add(&p);
            p = p.mul(&y()).neg();
        }
        assert_eq!(inv, expect);
    }
}
