//! Exact Gaussian rationals and half-integer exponents.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Exact complex number `re + im*i` with rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Scalar {
    pub re: BigRational,
    pub im: BigRational,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn zero() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_int(k: i64) -> Self {
        Scalar { re: BigRational::from_integer(BigInt::from(k)), im: BigRational::zero() }
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Scalar { re: BigRational::new(BigInt::from(p), BigInt::from(q)), im: BigRational::zero() }
    }

    /// `(p/q) * i`.
    pub fn imag_ratio(p: i64, q: i64) -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::new(BigInt::from(p), BigInt::from(q)) }
    }

    pub fn real(re: BigRational) -> Self {
        Scalar { re, im: BigRational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn inv(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.im.is_zero() {
            return Ok(Scalar::real(self.re.recip()));
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Ok(Scalar { re: &self.re / &norm, im: -(&self.im / &norm) })
    }

    /// `max(|re|, |im|)`, used as an exact size measure for residuals.
    pub fn max_abs(&self) -> BigRational {
        let a = self.re.abs();
        let b = self.im.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    /// Multiply by a small integer.
    pub fn mul_int(&self, k: i64) -> Self {
        let k = BigRational::from_integer(BigInt::from(k));
        if self.im.is_zero() {
            return Scalar::real(&self.re * &k);
        }
        Scalar { re: &self.re * &k, im: &self.im * &k }
    }
}

fn mul_ref(a: &Scalar, b: &Scalar) -> Scalar {
    if a.im.is_zero() && b.im.is_zero() {
        return Scalar::real(&a.re * &b.re);
    }
    if a.im.is_zero() {
        return Scalar { re: &a.re * &b.re, im: &a.re * &b.im };
    }
    if b.im.is_zero() {
        return Scalar { re: &a.re * &b.re, im: &a.im * &b.re };
    }
    Scalar { re: &a.re * &b.re - &a.im * &b.im, im: &a.re * &b.im + &a.im * &b.re }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        mul_ref(self, rhs)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        mul_ref(&self, &rhs)
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = mul_ref(self, rhs);
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        Scalar { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        if !rhs.im.is_zero() {
            self.im += &rhs.im;
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        if !rhs.im.is_zero() {
            self.im -= &rhs.im;
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        Scalar { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        mul_ref(&self, &rhs.inv().expect("division by zero scalar"))
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parse `p` or `p/q` with optional sign.
pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let s = s.trim();
    let bad = || Error::Parse { offset: 0, message: format!("bad rational literal `{s}`") };
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

pub fn rational_to_string(q: &BigRational) -> String {
    fmt_rational(q)
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => write!(f, "{}*i", fmt_rational(&self.im)),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "({} - {}*i)", fmt_rational(&self.re), fmt_rational(&-self.im.clone()))
                } else {
                    write!(f, "({} + {}*i)", fmt_rational(&self.re), fmt_rational(&self.im))
                }
            }
        }
    }
}

/// An exponent stored as twice its value, so that `h^(1/2)` is representable.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct HalfInt {
    pub twice_value: i32,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice_value: 0 };

    pub fn from_int(k: i32) -> Self {
        HalfInt { twice_value: 2 * k }
    }

    pub fn from_twice(t: i32) -> Self {
        HalfInt { twice_value: t }
    }

    pub fn is_integer(self) -> bool {
        self.twice_value % 2 == 0
    }

    pub fn floor(self) -> i32 {
        self.twice_value.div_euclid(2)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice_value: self.twice_value + rhs.twice_value }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice_value: self.twice_value - rhs.twice_value }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice_value / 2)
        } else {
            write!(f, "{}/2", self.twice_value)
        }
    }
}

pub fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squares_to_minus_one() {
        let i = Scalar::i();
        assert_eq!(&i * &i, Scalar::from_int(-1));
    }

    #[test]
    fn inverse_of_gaussian() {
        let z = Scalar::new(BigRational::from_integer(1.into()), BigRational::from_integer(2.into()));
        assert!((&z * &z.inv().unwrap()).is_one());
        assert!(Scalar::zero().inv().is_err());
    }

    #[test]
    fn halfint_arithmetic() {
        let a = HalfInt::from_twice(1);
        assert!(!a.is_integer());
        assert_eq!(a + a, HalfInt::from_int(1));
        assert_eq!(format!("{}", HalfInt::from_twice(-3)), "-3/2");
    }

    #[test]
    fn display_forms() {
        assert_eq!(Scalar::from_ratio(-1, 2).to_string(), "-1/2");
        assert_eq!(Scalar::i().to_string(), "1*i");
        assert_eq!(parse_rational("3/6").unwrap(), BigRational::new(1.into(), 2.into()));
    }
}
