//! Multi-indices, base monomials and canonical form-index sets.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

/// Largest complex dimension supported by the packed index types.
pub const MAX_DIM: usize = 4;

/// Exponent vector; entries past the ambient dimension are zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(pub [u8; MAX_DIM]);

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex([0; MAX_DIM]);

    pub fn unit(i: usize) -> Self {
        let mut e = [0; MAX_DIM];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn from_slice(v: &[u8]) -> Self {
        let mut e = [0; MAX_DIM];
        e[..v.len()].copy_from_slice(v);
        MultiIndex(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&x| x as u32).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn get(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn add(&self, o: &MultiIndex) -> MultiIndex {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(o.0.iter()) {
            *a += *b;
        }
        MultiIndex(e)
    }

    /// `self - o`, or `None` when some entry would go negative.
    pub fn checked_sub(&self, o: &MultiIndex) -> Option<MultiIndex> {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(o.0.iter()) {
            if *a < *b {
                return None;
            }
            *a -= *b;
        }
        Some(MultiIndex(e))
    }

    pub fn inc(&self, i: usize) -> MultiIndex {
        let mut e = self.0;
        e[i] += 1;
        MultiIndex(e)
    }

    pub fn dec(&self, i: usize) -> Option<MultiIndex> {
        if self.0[i] == 0 {
            return None;
        }
        let mut e = self.0;
        e[i] -= 1;
        Some(MultiIndex(e))
    }

    pub fn factorial(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |acc, &k| acc * super::scalar::factorial(k as u32))
    }

    /// `self! / (self - o)!`, the coefficient produced by `∂^o` on `x^self`.
    pub fn falling(&self, o: &MultiIndex) -> BigInt {
        let mut acc = BigInt::one();
        for (a, b) in self.0.iter().zip(o.0.iter()) {
            for j in 0..*b {
                acc *= BigInt::from(a - j);
            }
        }
        acc
    }

    /// All multi-indices of dimension `n` with total degree exactly `d`.
    pub fn all_of_degree(n: usize, d: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = [0u8; MAX_DIM];
        fn rec(n: usize, pos: usize, left: u32, cur: &mut [u8; MAX_DIM], out: &mut Vec<MultiIndex>) {
            if pos + 1 == n {
                cur[pos] = left as u8;
                out.push(MultiIndex(*cur));
                cur[pos] = 0;
                return;
            }
            for k in 0..=left {
                cur[pos] = k as u8;
                rec(n, pos + 1, left - k, cur, out);
            }
            cur[pos] = 0;
        }
        if n == 0 {
            if d == 0 {
                out.push(MultiIndex::ZERO);
            }
            return out;
        }
        rec(n, 0, d, &mut cur, &mut out);
        out
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A monomial `z^z zb^zb` in the base variables.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct BaseMono {
    pub z: MultiIndex,
    pub zb: MultiIndex,
}

impl BaseMono {
    pub const ONE: BaseMono = BaseMono { z: MultiIndex::ZERO, zb: MultiIndex::ZERO };

    pub fn degree(&self) -> u32 {
        self.z.degree() + self.zb.degree()
    }

    pub fn mul(&self, o: &BaseMono) -> BaseMono {
        BaseMono { z: self.z.add(&o.z), zb: self.zb.add(&o.zb) }
    }

    pub fn conj(&self) -> BaseMono {
        BaseMono { z: self.zb, zb: self.z }
    }
}

/// A canonical wedge monomial. Bit `i` is `dz^i`, bit `MAX_DIM + i` is `dzb^i`;
/// the canonical order is increasing bit position, so all `dz` precede all `dzb`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct Form(pub u16);

impl Form {
    pub const EMPTY: Form = Form(0);

    pub fn dz(i: usize) -> Form {
        Form(1 << i)
    }

    pub fn dzb(i: usize) -> Form {
        Form(1 << (MAX_DIM + i))
    }

    pub fn degree(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn holo_degree(&self) -> u32 {
        (self.0 & ((1 << MAX_DIM) - 1)).count_ones()
    }

    pub fn anti_degree(&self) -> u32 {
        (self.0 >> MAX_DIM).count_ones()
    }

    pub fn has_dz(&self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn has_dzb(&self, i: usize) -> bool {
        self.0 & (1 << (MAX_DIM + i)) != 0
    }

    /// `self ∧ o` as a canonical form and a sign, or `None` when it vanishes.
    pub fn wedge(&self, o: &Form) -> Option<(Form, bool)> {
        if self.0 & o.0 != 0 {
            return None;
        }
        let mut swaps = 0u32;
        let mut b = o.0;
        while b != 0 {
            let bit = b.trailing_zeros();
            swaps += (self.0 >> (bit + 1)).count_ones();
            b &= b - 1;
        }
        Some((Form(self.0 | o.0), swaps % 2 == 1))
    }

    /// Interior product with the vector dual to the given bit: the form without
    /// that bit and the sign `(-1)^(number of earlier factors)`.
    pub fn contract_bit(&self, bit: u32) -> Option<(Form, bool)> {
        if self.0 & (1 << bit) == 0 {
            return None;
        }
        let before = (self.0 & ((1 << bit) - 1)).count_ones();
        Some((Form(self.0 & !(1 << bit)), before % 2 == 1))
    }

    /// Complex conjugate: swaps `dz^i` with `dzb^i` and reorders canonically.
    pub fn conj(&self) -> (Form, bool) {
        let mut acc = Form::EMPTY;
        let mut neg = false;
        let mut b = self.0;
        while b != 0 {
            let bit = b.trailing_zeros() as usize;
            let image = if bit < MAX_DIM { Form::dzb(bit) } else { Form::dz(bit - MAX_DIM) };
            let (f, s) = acc.wedge(&image).expect("distinct factors");
            acc = f;
            neg ^= s;
            b &= b - 1;
        }
        (acc, neg)
    }
}
