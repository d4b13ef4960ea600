//! Truncated Taylor polynomials in the base variables.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::index::{BaseMono, MultiIndex};
use super::prec::{self, EXACT};
use super::scalar::Scalar;
use crate::error::Error;

/// A polynomial in `z, zb` known exactly up to total degree `jet_order`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JetPoly {
    n: usize,
    jet_order: i32,
    coeffs: BTreeMap<BaseMono, Scalar>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JetOp {
    Add,
    Sub,
    Mul,
}

impl JetPoly {
    pub fn zero(n: usize, jet_order: i32) -> Self {
        JetPoly { n, jet_order, coeffs: BTreeMap::new() }
    }

    pub fn constant(n: usize, jet_order: i32, c: Scalar) -> Self {
        let mut j = JetPoly::zero(n, jet_order);
        j.add_term(BaseMono::ONE, c);
        j
    }

    pub fn one(n: usize) -> Self {
        JetPoly::constant(n, EXACT, Scalar::one())
    }

    pub fn monomial(n: usize, jet_order: i32, m: BaseMono, c: Scalar) -> Self {
        let mut j = JetPoly::zero(n, jet_order);
        j.add_term(m, c);
        j
    }

    pub fn z(n: usize, i: usize) -> Self {
        JetPoly::monomial(n, EXACT, BaseMono { z: MultiIndex::unit(i), zb: MultiIndex::ZERO }, Scalar::one())
    }

    pub fn zb(n: usize, i: usize) -> Self {
        JetPoly::monomial(n, EXACT, BaseMono { z: MultiIndex::ZERO, zb: MultiIndex::unit(i) }, Scalar::one())
    }

    pub fn from_map(n: usize, jet_order: i32, coeffs: BTreeMap<BaseMono, Scalar>) -> Self {
        let mut j = JetPoly { n, jet_order, coeffs };
        j.clean();
        j
    }

    fn clean(&mut self) {
        let order = self.jet_order;
        self.coeffs.retain(|m, c| !c.is_zero() && (m.degree() as i64) <= order as i64);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn jet_order(&self) -> i32 {
        self.jet_order
    }

    pub fn coeffs(&self) -> &BTreeMap<BaseMono, Scalar> {
        &self.coeffs
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BaseMono, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Adds `c * m` unless `m` lies beyond the jet order.
    pub fn add_term(&mut self, m: BaseMono, c: Scalar) {
        if c.is_zero() || m.degree() as i64 > self.jet_order as i64 {
            return;
        }
        match self.coeffs.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn coeff(&self, m: &BaseMono) -> Scalar {
        self.coeffs.get(m).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&BaseMono::ONE)
    }

    /// Lowest degree present (`EXACT` for the zero jet).
    pub fn valuation(&self) -> i32 {
        self.coeffs.keys().map(|m| m.degree() as i32).min().unwrap_or(EXACT)
    }

    pub fn truncate(&self, order: i32) -> JetPoly {
        let order = order.min(self.jet_order);
        let mut j = self.clone();
        j.jet_order = order;
        j.clean();
        j
    }

    pub fn with_order(mut self, order: i32) -> JetPoly {
        self.jet_order = self.jet_order.min(order);
        self.clean();
        self
    }

    fn check_dim(&self, o: &JetPoly) -> Result<(), Error> {
        if self.n != o.n {
            return Err(Error::DimensionMismatch(self.n, o.n));
        }
        Ok(())
    }

    pub fn arith(&self, o: &JetPoly, op: JetOp) -> Result<JetPoly, Error> {
        self.check_dim(o)?;
        Ok(match op {
            JetOp::Add => self.add(o),
            JetOp::Sub => self.sub(o),
            JetOp::Mul => self.mul(o),
        })
    }

    pub fn add(&self, o: &JetPoly) -> JetPoly {
        let order = self.jet_order.min(o.jet_order);
        let mut r = self.truncate(order);
        for (m, c) in &o.coeffs {
            r.add_term(*m, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &JetPoly) -> JetPoly {
        let order = self.jet_order.min(o.jet_order);
        let mut r = self.truncate(order);
        for (m, c) in &o.coeffs {
            r.add_term(*m, -c);
        }
        r
    }

    pub fn neg(&self) -> JetPoly {
        let mut r = self.clone();
        for c in r.coeffs.values_mut() {
            *c = -&*c;
        }
        r
    }

    pub fn scale(&self, s: &Scalar) -> JetPoly {
        if s.is_zero() {
            return JetPoly::zero(self.n, self.jet_order);
        }
        let mut r = self.clone();
        for c in r.coeffs.values_mut() {
            *c = &*c * s;
        }
        r
    }

    /// Product, known up to `min(order_a + val_b, order_b + val_a)`.
    pub fn mul(&self, o: &JetPoly) -> JetPoly {
        let order = prec::product(self.jet_order, self.valuation(), o.jet_order, o.valuation());
        self.mul_to(o, order)
    }

    /// Product truncated at the given order (which the caller guarantees is sound).
    pub fn mul_to(&self, o: &JetPoly, order: i32) -> JetPoly {
        let mut r = JetPoly::zero(self.n, order);
        for (ma, ca) in &self.coeffs {
            let da = ma.degree() as i64;
            if da > order as i64 {
                continue;
            }
            for (mb, cb) in &o.coeffs {
                if da + mb.degree() as i64 > order as i64 {
                    continue;
                }
                r.add_term(ma.mul(mb), ca * cb);
            }
        }
        r
    }

    pub fn deriv_z(&self, i: usize) -> JetPoly {
        let mut r = JetPoly::zero(self.n, prec::shift(self.jet_order, -1));
        for (m, c) in &self.coeffs {
            let k = m.z.get(i);
            if k == 0 {
                continue;
            }
            let nm = BaseMono { z: m.z.dec(i).unwrap(), zb: m.zb };
            r.add_term(nm, c.mul_int(k as i64));
        }
        r
    }

    pub fn deriv_zb(&self, i: usize) -> JetPoly {
        let mut r = JetPoly::zero(self.n, prec::shift(self.jet_order, -1));
        for (m, c) in &self.coeffs {
            let k = m.zb.get(i);
            if k == 0 {
                continue;
            }
            let nm = BaseMono { z: m.z, zb: m.zb.dec(i).unwrap() };
            r.add_term(nm, c.mul_int(k as i64));
        }
        r
    }

    pub fn conj(&self) -> JetPoly {
        let mut r = JetPoly::zero(self.n, self.jet_order);
        for (m, c) in &self.coeffs {
            r.add_term(m.conj(), c.conj());
        }
        r
    }

    /// Multiplicative inverse by Neumann series around the constant term.
    pub fn invert(&self) -> Result<JetPoly, Error> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let inv0 = c0.inv()?;
        let order = self.jet_order;
        let mut e = self.scale(&inv0);
        e.add_term(BaseMono::ONE, -Scalar::one());
        let e = e.neg();
        let mut acc = JetPoly::constant(self.n, order, Scalar::one());
        let mut pow = acc.clone();
        if !prec::is_exact(order) || e.is_zero() {
            loop {
                pow = pow.mul_to(&e, order);
                if pow.is_zero() {
                    break;
                }
                acc = acc.add(&pow);
            }
        } else {
            return Err(Error::JetExhausted("inverse of a non-constant exact polynomial needs a jet order".into()));
        }
        Ok(acc.scale(&inv0))
    }

    /// `log(a / a(0))` as a truncated series.
    pub fn log_normalized(&self) -> Result<JetPoly, Error> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let order = self.jet_order;
        let mut u = self.scale(&c0.inv()?);
        u.add_term(BaseMono::ONE, -Scalar::one());
        log1p(&u, order)
    }

    pub fn pow(&self, k: u32) -> JetPoly {
        let mut acc = JetPoly::constant(self.n, EXACT, Scalar::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitutes `z_i -> zs[i]`, `zb_i -> zbs[i]`; the substitutes must have
    /// zero constant term so that degrees do not decrease.
    pub fn compose(&self, zs: &[JetPoly], zbs: &[JetPoly]) -> Result<JetPoly, Error> {
        for s in zs.iter().chain(zbs.iter()) {
            if !s.constant_term().is_zero() {
                return Err(Error::ZeroConstantTerm);
            }
        }
        let sub_order = zs.iter().chain(zbs.iter()).map(|s| s.jet_order).min().unwrap_or(EXACT);
        let order = self.jet_order.min(sub_order);
        let mut r = JetPoly::zero(self.n, order);
        for (m, c) in &self.coeffs {
            let mut t = JetPoly::constant(self.n, order, c.clone());
            for i in 0..self.n {
                for _ in 0..m.z.get(i) {
                    t = t.mul_to(&zs[i], order);
                }
                for _ in 0..m.zb.get(i) {
                    t = t.mul_to(&zbs[i], order);
                }
            }
            r = r.add(&t);
        }
        Ok(r)
    }

    /// Coefficients with no `zb` dependence removed? No: returns true when every
    /// monomial is free of `zb`.
    pub fn is_holomorphic(&self) -> bool {
        self.coeffs.keys().all(|m| m.zb.is_zero())
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }
}

/// `log(1 + u)` for `u` without constant term, truncated at `order`.
pub fn log1p(u: &JetPoly, order: i32) -> Result<JetPoly, Error> {
    if !u.constant_term().is_zero() {
        return Err(Error::WeightPrecondition("log1p needs zero constant term".into()));
    }
    if prec::is_exact(order) && !u.is_zero() {
        return Err(Error::JetExhausted("logarithm of an exact polynomial needs a jet order".into()));
    }
    let mut acc = JetPoly::zero(u.n, order);
    let mut pow = JetPoly::constant(u.n, order, Scalar::one());
    let mut k: i64 = 1;
    loop {
        pow = pow.mul_to(u, order);
        if pow.is_zero() {
            break;
        }
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let coef = Scalar::real(BigRational::new(BigInt::from(sign), BigInt::from(k)));
        acc = acc.add(&pow.scale(&coef));
        k += 1;
    }
    Ok(acc)
}

impl fmt::Display for JetPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", c)?;
            for i in 0..self.n {
                match m.z.get(i) {
                    0 => {}
                    1 => write!(f, "*z{}", i + 1)?,
                    k => write!(f, "*z{}^{}", i + 1, k)?,
                }
                match m.zb.get(i) {
                    0 => {}
                    1 => write!(f, "*zb{}", i + 1)?,
                    k => write!(f, "*zb{}^{}", i + 1, k)?,
                }
            }
        }
        if !prec::is_exact(self.jet_order) {
            write!(f, " + O({})", self.jet_order + 1)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zzb(order: i32) -> JetPoly {
        JetPoly::z(1, 0).mul(&JetPoly::zb(1, 0)).with_order(order)
    }

    #[test]
    fn product_truncates() {
        let u = zzb(4);
        let a = JetPoly::one(1).add(&u);
        let b = JetPoly::one(1).sub(&u);
        let p = a.mul(&b);
        let expect = JetPoly::one(1).sub(&u.mul(&u)).with_order(4);
        assert_eq!(p, expect);
    }

    #[test]
    fn inverse_multiplies_back() {
        let a = JetPoly::one(1).add(&zzb(4)).with_order(4);
        let inv = a.invert().unwrap();
        assert_eq!(a.mul(&inv), JetPoly::constant(1, 4, Scalar::one()));
        let two = JetPoly::constant(1, 3, Scalar::from_int(2));
        assert_eq!(two.invert().unwrap().constant_term(), Scalar::from_ratio(1, 2));
        assert!(JetPoly::z(1, 0).with_order(3).invert().is_err());
    }

    #[test]
    fn derivative_drops_order() {
        let u = zzb(6);
        let d = u.deriv_z(0);
        assert_eq!(d.jet_order(), 5);
        assert_eq!(d, JetPoly::zb(1, 0).with_order(5));
    }

    #[test]
    fn log_series() {
        let l = log1p(&zzb(6), 6).unwrap();
        let m = |k: u8| BaseMono { z: MultiIndex::from_slice(&[k]), zb: MultiIndex::from_slice(&[k]) };
        assert_eq!(l.coeff(&m(1)), Scalar::one());
        assert_eq!(l.coeff(&m(2)), Scalar::from_ratio(-1, 2));
        assert_eq!(l.coeff(&m(3)), Scalar::from_ratio(1, 3));
        assert_eq!(l.len(), 3);
    }
}
