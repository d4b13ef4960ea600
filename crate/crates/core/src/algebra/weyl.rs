//! Form-valued sections of the Weyl bundle with jet coefficients.
//!
//! Precision is tracked by two caps. `weight_cap` bounds the fiber weight
//! `2*hbar + |y| + |yb|`; `jet_cap` bounds weight plus base degree, so a term
//! of weight `w` has a coefficient known up to base degree `jet_cap - w`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use super::index::{BaseMono, Form, MultiIndex, MAX_DIM};
use super::jet::JetPoly;
use super::prec::{self, EXACT};
use super::scalar::{HalfInt, Scalar};
use crate::error::Error;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Key {
    pub hbar: HalfInt,
    pub y: MultiIndex,
    pub yb: MultiIndex,
    pub form: Form,
}

impl Key {
    pub const ONE: Key = Key { hbar: HalfInt::ZERO, y: MultiIndex::ZERO, yb: MultiIndex::ZERO, form: Form::EMPTY };

    pub fn weight(&self) -> i32 {
        self.hbar.twice_value + self.y.degree() as i32 + self.yb.degree() as i32
    }

    pub fn is_fiber_constant(&self) -> bool {
        self.y.is_zero() && self.yb.is_zero()
    }

    pub fn conj(&self) -> (Key, bool) {
        let (form, neg) = self.form.conj();
        (Key { hbar: self.hbar, y: self.yb, yb: self.y, form }, neg)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeylForm {
    n: usize,
    terms: BTreeMap<Key, JetPoly>,
    weight_cap: i32,
    jet_cap: i32,
}

impl WeylForm {
    /// The zero element known to the given caps.
    pub fn new(n: usize, weight_cap: i32, jet_cap: i32) -> Self {
        assert!(n <= MAX_DIM, "dimension {n} exceeds {MAX_DIM}");
        let weight_cap = if prec::is_exact(jet_cap) { weight_cap } else { weight_cap.min(jet_cap) };
        WeylForm { n, terms: BTreeMap::new(), weight_cap, jet_cap }
    }

    pub fn zero(n: usize) -> Self {
        WeylForm::new(n, EXACT, EXACT)
    }

    pub fn one(n: usize) -> Self {
        WeylForm::scalar(n, Scalar::one())
    }

    pub fn scalar(n: usize, s: Scalar) -> Self {
        WeylForm::monomial(n, Key::ONE, s)
    }

    pub fn monomial(n: usize, key: Key, s: Scalar) -> Self {
        let mut w = WeylForm::zero(n);
        w.add_term(key, JetPoly::constant(n, EXACT, s));
        w
    }

    pub fn y(n: usize, i: usize) -> Self {
        WeylForm::monomial(n, Key { y: MultiIndex::unit(i), ..Key::ONE }, Scalar::one())
    }

    pub fn yb(n: usize, i: usize) -> Self {
        WeylForm::monomial(n, Key { yb: MultiIndex::unit(i), ..Key::ONE }, Scalar::one())
    }

    pub fn hbar(n: usize) -> Self {
        WeylForm::monomial(n, Key { hbar: HalfInt::from_int(1), ..Key::ONE }, Scalar::one())
    }

    pub fn dz(n: usize, i: usize) -> Self {
        WeylForm::monomial(n, Key { form: Form::dz(i), ..Key::ONE }, Scalar::one())
    }

    pub fn dzb(n: usize, i: usize) -> Self {
        WeylForm::monomial(n, Key { form: Form::dzb(i), ..Key::ONE }, Scalar::one())
    }

    /// A base function, as a weight-0 element whose jet cap is its jet order.
    pub fn from_jet(jet: &JetPoly) -> Self {
        WeylForm::from_jet_at(Key::ONE, jet)
    }

    /// `jet` times the fiber/form monomial `key`.
    pub fn from_jet_at(key: Key, jet: &JetPoly) -> Self {
        let mut w = WeylForm::new(jet.n(), EXACT, prec::shift(jet.jet_order(), key.weight()));
        w.add_term(key, jet.clone());
        w
    }

    /// Rebuild from raw terms; coefficients are truncated to the caps.
    pub fn from_terms(n: usize, weight_cap: i32, jet_cap: i32, terms: impl IntoIterator<Item = (Key, JetPoly)>) -> Self {
        let mut w = WeylForm::new(n, weight_cap, jet_cap);
        for (k, j) in terms {
            w.add_term(k, j);
        }
        w
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight_cap(&self) -> i32 {
        self.weight_cap
    }

    pub fn jet_cap(&self) -> i32 {
        self.jet_cap
    }

    pub fn terms(&self) -> &BTreeMap<Key, JetPoly> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Key, &JetPoly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when some term carries a negative power of hbar.
    pub fn is_plus(&self) -> bool {
        self.terms.keys().any(|k| k.hbar.twice_value < 0)
    }

    pub fn coeff(&self, key: &Key) -> JetPoly {
        self.terms.get(key).cloned().unwrap_or_else(|| JetPoly::zero(self.n, self.coef_order(key.weight())))
    }

    /// Trusted base degree for coefficients of a weight-`w` term.
    pub fn coef_order(&self, w: i32) -> i32 {
        prec::shift(self.jet_cap, -w)
    }

    /// Adds `jet * key`, truncating to the caps.
    pub fn add_term(&mut self, key: Key, jet: JetPoly) {
        let w = key.weight();
        if w > self.weight_cap {
            return;
        }
        let order = self.coef_order(w);
        if order < 0 {
            return;
        }
        if jet.jet_order() < order {
            // A coefficient known to lower order lowers the cap of the whole element.
            self.lower_jet_cap(prec::shift(jet.jet_order(), w));
            if w > self.weight_cap {
                return;
            }
        }
        let order = self.coef_order(w);
        let jet = jet.truncate(order);
        if jet.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(jet);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&jet);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn lower_jet_cap(&mut self, p: i32) {
        if p >= self.jet_cap {
            return;
        }
        self.jet_cap = p;
        self.weight_cap = self.weight_cap.min(p);
        let old = std::mem::take(&mut self.terms);
        for (k, j) in old {
            let w = k.weight();
            if w > self.weight_cap {
                continue;
            }
            let j = j.truncate(self.coef_order(w));
            if !j.is_zero() {
                self.terms.insert(k, j);
            }
        }
    }

    /// Further truncation; caps never increase.
    pub fn with_caps(&self, weight_cap: i32, jet_cap: i32) -> WeylForm {
        WeylForm::from_terms(
            self.n,
            self.weight_cap.min(weight_cap),
            self.jet_cap.min(jet_cap),
            self.terms.iter().map(|(k, j)| (*k, j.clone())),
        )
    }

    pub fn truncate_weight(&self, weight_cap: i32) -> WeylForm {
        self.with_caps(weight_cap, EXACT)
    }

    /// Lowest weight present (`EXACT` when empty).
    pub fn min_weight(&self) -> i32 {
        self.terms.keys().map(|k| k.weight()).min().unwrap_or(EXACT)
    }

    /// Lowest weight plus base degree present (`EXACT` when empty).
    pub fn min_combined(&self) -> i32 {
        self.terms.iter().map(|(k, j)| k.weight() + j.valuation()).min().unwrap_or(EXACT)
    }

    pub fn max_form_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.form.degree()).max().unwrap_or(0)
    }

    /// Largest `max(|re|, |im|)` over all coefficients; zero when empty.
    pub fn max_abs(&self) -> BigRational {
        let mut m = BigRational::zero();
        for j in self.terms.values() {
            for c in j.coeffs().values() {
                let a = c.max_abs();
                if a > m {
                    m = a;
                }
            }
        }
        m
    }

    fn combine_caps(&self, o: &WeylForm) -> (i32, i32) {
        (self.weight_cap.min(o.weight_cap), self.jet_cap.min(o.jet_cap))
    }

    pub fn add(&self, o: &WeylForm) -> WeylForm {
        let (w, p) = self.combine_caps(o);
        let mut r = self.with_caps(w, p);
        for (k, j) in &o.terms {
            r.add_term(*k, j.clone());
        }
        r
    }

    pub fn sub(&self, o: &WeylForm) -> WeylForm {
        let (w, p) = self.combine_caps(o);
        let mut r = self.with_caps(w, p);
        for (k, j) in &o.terms {
            r.add_term(*k, j.neg());
        }
        r
    }

    pub fn neg(&self) -> WeylForm {
        self.map_terms(|k, j| Some((*k, j.neg())))
    }

    pub fn scale(&self, s: &Scalar) -> WeylForm {
        if s.is_zero() {
            return WeylForm::new(self.n, self.weight_cap, self.jet_cap);
        }
        self.map_terms(|k, j| Some((*k, j.scale(s))))
    }

    pub fn scale_int(&self, k: i64) -> WeylForm {
        self.scale(&Scalar::from_int(k))
    }

    /// Applies `f` to every term, keeping the caps.
    pub fn map_terms(&self, f: impl Fn(&Key, &JetPoly) -> Option<(Key, JetPoly)>) -> WeylForm {
        WeylForm::from_terms(self.n, self.weight_cap, self.jet_cap, self.terms.iter().filter_map(|(k, j)| f(k, j)))
    }

    /// Keeps the terms selected by `pred`; caps are unchanged.
    pub fn filter(&self, pred: impl Fn(&Key) -> bool) -> WeylForm {
        let mut r = WeylForm::new(self.n, self.weight_cap, self.jet_cap);
        for (k, j) in &self.terms {
            if pred(k) {
                r.terms.insert(*k, j.clone());
            }
        }
        r
    }

    /// The component of form type `(p, q)`.
    pub fn form_part(&self, p: u32, q: u32) -> WeylForm {
        self.filter(|k| k.form.holo_degree() == p && k.form.anti_degree() == q)
    }

    pub fn form_degree_part(&self, d: u32) -> WeylForm {
        self.filter(|k| k.form.degree() == d)
    }

    /// Terms with `|y| = p` and `|yb| = q`.
    pub fn fiber_part(&self, p: u32, q: u32) -> WeylForm {
        self.filter(|k| k.y.degree() == p && k.yb.degree() == q)
    }

    pub fn weight_part(&self, w: i32) -> WeylForm {
        self.filter(|k| k.weight() == w)
    }

    /// Multiplication by `hbar^(t/2)`.
    pub fn mul_hbar_twice(&self, t: i32) -> WeylForm {
        let mut r = WeylForm::new(self.n, prec::shift(self.weight_cap, t), prec::shift(self.jet_cap, t));
        for (k, j) in &self.terms {
            let nk = Key { hbar: k.hbar + HalfInt::from_twice(t), ..*k };
            r.add_term(nk, j.clone());
        }
        r
    }

    pub fn mul_hbar(&self, k: i32) -> WeylForm {
        self.mul_hbar_twice(2 * k)
    }

    /// Commutative fiberwise product with the Koszul sign on forms.
    pub fn mul(&self, o: &WeylForm) -> WeylForm {
        let w = prec::product(self.weight_cap, self.min_weight(), o.weight_cap, o.min_weight());
        let p = prec::product(self.jet_cap, self.min_combined(), o.jet_cap, o.min_combined());
        self.mul_with_caps(o, w, p)
    }

    /// `min(weight_cap, jet_cap)`: every unknown term has weight plus base
    /// degree above this bound.
    pub fn combined_cap(&self) -> i32 {
        self.weight_cap.min(self.jet_cap)
    }

    /// Product tracked by the combined cap alone. Both caps of the result equal
    /// `min(ca + vb, cb + va)` with `c` the combined caps and `v` the combined
    /// valuations. Used where weight is not a filtration, as in the module action.
    pub fn mul_combined(&self, o: &WeylForm) -> WeylForm {
        let p = prec::product(self.combined_cap(), self.min_combined(), o.combined_cap(), o.min_combined());
        self.mul_with_caps(o, p, p)
    }

    /// Product truncated at caps that the caller has shown to be sound.
    fn mul_with_caps(&self, o: &WeylForm, w: i32, p: i32) -> WeylForm {
        let mut acc: BTreeMap<Key, JetPoly> = BTreeMap::new();
        let mut r = WeylForm::new(self.n, w, p);
        for (ka, ja) in &self.terms {
            for (kb, jb) in &o.terms {
                let wt = ka.weight() + kb.weight();
                if wt > r.weight_cap {
                    continue;
                }
                let order = r.coef_order(wt);
                if order < 0 {
                    continue;
                }
                let Some((form, neg)) = ka.form.wedge(&kb.form) else { continue };
                let mut c = ja.mul_to(jb, order);
                if c.is_zero() {
                    continue;
                }
                if neg {
                    c = c.neg();
                }
                let key = Key { hbar: ka.hbar + kb.hbar, y: ka.y.add(&kb.y), yb: ka.yb.add(&kb.yb), form };
                accumulate(&mut acc, key, c);
            }
        }
        for (k, j) in acc {
            r.add_term(k, j);
        }
        r
    }

    /// Multiplication by a base function.
    pub fn mul_jet(&self, f: &JetPoly) -> WeylForm {
        self.mul(&WeylForm::from_jet(f))
    }

    /// `∂/∂y^i`.
    pub fn d_y(&self, i: usize) -> WeylForm {
        let mut r = WeylForm::new(self.n, prec::shift(self.weight_cap, -1), prec::shift(self.jet_cap, -1));
        for (k, j) in &self.terms {
            let e = k.y.get(i);
            if e == 0 {
                continue;
            }
            let nk = Key { y: k.y.dec(i).unwrap(), ..*k };
            r.add_term(nk, j.scale(&Scalar::from_int(e as i64)));
        }
        r
    }

    /// `∂/∂yb^i`.
    pub fn d_yb(&self, i: usize) -> WeylForm {
        let mut r = WeylForm::new(self.n, prec::shift(self.weight_cap, -1), prec::shift(self.jet_cap, -1));
        for (k, j) in &self.terms {
            let e = k.yb.get(i);
            if e == 0 {
                continue;
            }
            let nk = Key { yb: k.yb.dec(i).unwrap(), ..*k };
            r.add_term(nk, j.scale(&Scalar::from_int(e as i64)));
        }
        r
    }

    /// `∂/∂z^i` of the coefficients.
    pub fn d_z(&self, i: usize) -> WeylForm {
        let mut r = WeylForm::new(self.n, self.weight_cap, prec::shift(self.jet_cap, -1));
        for (k, j) in &self.terms {
            r.add_term(*k, j.deriv_z(i));
        }
        r
    }

    /// `∂/∂zb^i` of the coefficients.
    pub fn d_zb(&self, i: usize) -> WeylForm {
        let mut r = WeylForm::new(self.n, self.weight_cap, prec::shift(self.jet_cap, -1));
        for (k, j) in &self.terms {
            r.add_term(*k, j.deriv_zb(i));
        }
        r
    }

    /// `e ∧ self` for a single wedge monomial `e`.
    pub fn wedge_left(&self, e: Form) -> WeylForm {
        self.map_terms(|k, j| {
            let (form, neg) = e.wedge(&k.form)?;
            Some((Key { form, ..*k }, if neg { j.neg() } else { j.clone() }))
        })
    }

    /// Interior product with `∂/∂z^i` (`anti = false`) or `∂/∂zb^i` (`anti = true`).
    pub fn contract(&self, i: usize, anti: bool) -> WeylForm {
        let bit = if anti { (MAX_DIM + i) as u32 } else { i as u32 };
        self.map_terms(|k, j| {
            let (form, neg) = k.form.contract_bit(bit)?;
            Some((Key { form, ..*k }, if neg { j.neg() } else { j.clone() }))
        })
    }

    /// Swaps `y` with `yb`, `z` with `zb`, `dz` with `dzb` and conjugates scalars.
    pub fn conj(&self) -> WeylForm {
        self.map_terms(|k, j| {
            let (nk, neg) = k.conj();
            let c = j.conj();
            Some((nk, if neg { c.neg() } else { c }))
        })
    }

    /// The fiber-constant part; fails on non-zero form degree.
    pub fn symbol(&self) -> Result<WeylForm, Error> {
        if let Some(k) = self.terms.keys().find(|k| k.form.degree() > 0) {
            return Err(Error::FormDegree(k.form.degree() as usize));
        }
        Ok(self.filter(|k| k.is_fiber_constant()))
    }

    /// Evaluates coefficients at `z = zb = 0`. The result has exact coefficients
    /// and is trusted up to weight `min(weight_cap, jet_cap)`.
    pub fn eval_at_zero(&self) -> WeylForm {
        let w = self.weight_cap.min(self.jet_cap);
        let mut r = WeylForm::new(self.n, w, EXACT);
        for (k, j) in &self.terms {
            let c = j.constant_term();
            if !c.is_zero() {
                r.add_term(*k, JetPoly::constant(self.n, EXACT, c));
            }
        }
        r
    }

    /// True when every coefficient is a constant.
    pub fn is_fiber_only(&self) -> bool {
        self.terms.values().all(|j| j.coeffs().keys().all(|m| *m == BaseMono::ONE))
    }

    pub fn has_yb(&self) -> bool {
        self.terms.keys().any(|k| !k.yb.is_zero())
    }

    pub fn has_y(&self) -> bool {
        self.terms.keys().any(|k| !k.y.is_zero())
    }

    /// Splits into even and odd total form degree.
    pub fn parity_split(&self) -> (WeylForm, WeylForm) {
        (self.filter(|k| k.form.degree() % 2 == 0), self.filter(|k| k.form.degree() % 2 == 1))
    }

    /// Coefficient of a fiber/form monomial, read at the basepoint.
    pub fn value_at_zero(&self, key: &Key) -> Scalar {
        self.terms.get(key).map(|j| j.constant_term()).unwrap_or_default()
    }
}

pub(crate) fn accumulate(acc: &mut BTreeMap<Key, JetPoly>, key: Key, c: JetPoly) {
    match acc.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get().add(&c);
            *e.get_mut() = s;
        }
    }
}

fn write_index(f: &mut fmt::Formatter<'_>, name: &str, idx: &MultiIndex, n: usize) -> fmt::Result {
    for i in 0..n {
        match idx.get(i) {
            0 => {}
            1 => write!(f, "*{}{}", name, i + 1)?,
            k => write!(f, "*{}{}^{}", name, i + 1, k)?,
        }
    }
    Ok(())
}

impl fmt::Display for WeylForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        let mut first = true;
        for (k, j) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if j.len() == 1 && prec::is_exact(j.jet_order()) {
                write!(f, "{}", j)?;
            } else {
                write!(f, "({})", j)?;
            }
            match k.hbar.twice_value {
                0 => {}
                2 => write!(f, "*h")?,
                _ => write!(f, "*h^({})", k.hbar)?,
            }
            write_index(f, "y", &k.y, self.n)?;
            write_index(f, "yb", &k.yb, self.n)?;
            for i in 0..self.n {
                if k.form.has_dz(i) {
                    write!(f, "*dz{}", i + 1)?;
                }
            }
            for i in 0..self.n {
                if k.form.has_dzb(i) {
                    write!(f, "*dzb{}", i + 1)?;
                }
            }
        }
        if !prec::is_exact(self.weight_cap) || !prec::is_exact(self.jet_cap) {
            write!(f, "  [caps w={}, p={}]", cap_str(self.weight_cap), cap_str(self.jet_cap))?;
        }
        Ok(())
    }
}

fn cap_str(c: i32) -> String {
    if prec::is_exact(c) {
        "exact".into()
    } else {
        c.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn koszul_sign_on_one_forms() {
        let a = WeylForm::dz(1, 0).mul(&WeylForm::y(1, 0));
        let b = WeylForm::dzb(1, 0).mul(&WeylForm::yb(1, 0));
        assert_eq!(a.mul(&b), b.mul(&a).neg());
    }

    #[test]
    fn derivative_caps() {
        let a = WeylForm::y(1, 0).mul(&WeylForm::y(1, 0)).with_caps(5, 7);
        let d = a.d_y(0);
        assert_eq!((d.weight_cap(), d.jet_cap()), (4, 6));
        assert_eq!(d, WeylForm::y(1, 0).scale_int(2).with_caps(4, 6));
    }

    #[test]
    fn truncation_drops_high_weight() {
        let h = WeylForm::hbar(1).with_caps(1, 10);
        assert!(h.is_zero());
    }

    #[test]
    fn conj_is_involutive() {
        let a = WeylForm::dz(1, 0).mul(&WeylForm::y(1, 0)).scale(&Scalar::i()).mul_jet(&JetPoly::z(1, 0));
        assert_eq!(a.conj().conj(), a);
        assert_ne!(a.conj(), a);
    }
}
