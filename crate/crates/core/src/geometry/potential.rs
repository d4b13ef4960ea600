//! Kähler potentials at the basepoint: built-in models and normal coordinates.

use std::collections::BTreeMap;

use num_traits::Signed;

use crate::algebra::index::{BaseMono, MultiIndex, MAX_DIM};
use crate::algebra::jet::{log1p, JetPoly};
use crate::algebra::scalar::Scalar;
use crate::error::Error;

/// A real Kähler potential jet `rho` around the basepoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PotentialJet {
    rho: JetPoly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    Flat,
    FubiniStudy,
    Hyperbolic,
}

impl std::str::FromStr for Builtin {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "flat" => Ok(Builtin::Flat),
            "fs" => Ok(Builtin::FubiniStudy),
            "hyp" => Ok(Builtin::Hyperbolic),
            other => Err(Error::UnknownGeometry(other.to_string())),
        }
    }
}

impl PotentialJet {
    /// Checks reality and dimension.
    pub fn new(rho: JetPoly) -> Result<Self, Error> {
        if rho.n() > MAX_DIM {
            return Err(Error::DimensionTooLarge(rho.n(), MAX_DIM));
        }
        if !rho.is_real() {
            return Err(Error::Config("potential is not real".into()));
        }
        Ok(PotentialJet { rho })
    }

    pub fn builtin(kind: Builtin, n: usize, jet_order: i32) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::Config("dimension must be positive".into()));
        }
        if n > MAX_DIM {
            return Err(Error::DimensionTooLarge(n, MAX_DIM));
        }
        let mut s = JetPoly::zero(n, jet_order);
        for i in 0..n {
            s = s.add(&JetPoly::z(n, i).mul(&JetPoly::zb(n, i)));
        }
        let s = s.with_order(jet_order);
        let rho = match kind {
            Builtin::Flat => s,
            Builtin::FubiniStudy => log1p(&s, jet_order)?,
            Builtin::Hyperbolic => log1p(&s.neg(), jet_order)?.neg(),
        };
        PotentialJet::new(rho)
    }

    pub fn by_name(name: &str, n: usize, jet_order: i32) -> Result<Self, Error> {
        PotentialJet::builtin(name.parse()?, n, jet_order)
    }

    pub fn rho(&self) -> &JetPoly {
        &self.rho
    }

    pub fn n(&self) -> usize {
        self.rho.n()
    }

    pub fn jet_order(&self) -> i32 {
        self.rho.jet_order()
    }

    /// The Hessian `∂_i ∂_{j̄} rho` at the basepoint.
    pub fn basepoint_hessian(&self) -> Vec<Vec<Scalar>> {
        let n = self.n();
        (0..n)
            .map(|i| (0..n).map(|j| self.rho.coeff(&BaseMono { z: MultiIndex::unit(i), zb: MultiIndex::unit(j) })).collect())
            .collect()
    }

    /// No pure terms, no `(m,1)`/`(1,m)` terms beyond the quadratic block, and
    /// identity Hessian at the basepoint.
    pub fn is_k_normal(&self) -> bool {
        let n = self.n();
        for (m, _) in self.rho.iter() {
            let (p, q) = (m.z.degree(), m.zb.degree());
            if m.degree() >= 1 && (p == 0 || q == 0) {
                return false;
            }
            if p.min(q) == 1 && p.max(q) > 1 {
                return false;
            }
        }
        let h = self.basepoint_hessian();
        (0..n).all(|i| (0..n).all(|j| if i == j { h[i][j].is_one() } else { h[i][j].is_zero() }))
    }
}

/// A holomorphic change of coordinates `z_i = F_i(w)` as jets in `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateChange {
    pub components: Vec<JetPoly>,
}

impl CoordinateChange {
    pub fn identity(n: usize, jet_order: i32) -> Self {
        CoordinateChange { components: (0..n).map(|i| JetPoly::z(n, i).with_order(jet_order)).collect() }
    }

    pub fn is_identity(&self) -> bool {
        let n = self.components.len();
        self.components.iter().enumerate().all(|(i, c)| {
            c.coeffs().len() == 1 && c.coeff(&BaseMono { z: MultiIndex::unit(i), zb: MultiIndex::ZERO }).is_one() && n > 0
        })
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn then(&self, inner: &CoordinateChange) -> Result<CoordinateChange, Error> {
        let zbs: Vec<JetPoly> = inner.components.iter().map(|c| c.conj()).collect();
        let components = self.components.iter().map(|c| c.compose(&inner.components, &zbs)).collect::<Result<Vec<_>, _>>()?;
        Ok(CoordinateChange { components })
    }

    /// Pulls back a function of `z, zb` to a function of `w, wb`.
    pub fn pull_back(&self, f: &JetPoly) -> Result<JetPoly, Error> {
        let zbs: Vec<JetPoly> = self.components.iter().map(|c| c.conj()).collect();
        f.compose(&self.components, &zbs)
    }

    /// The linear part at the basepoint is invertible.
    pub fn is_invertible(&self) -> bool {
        let n = self.components.len();
        let m: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                (0..n).map(|j| self.components[i].coeff(&BaseMono { z: MultiIndex::unit(j), zb: MultiIndex::ZERO })).collect()
            })
            .collect();
        !determinant(&m).is_zero()
    }
}

fn determinant(m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let mut det = Scalar::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else { return Scalar::zero() };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det = &det * &a[k][k];
        let inv = a[k][k].inv().expect("nonzero pivot");
        for r in k + 1..n {
            let f = &a[r][k] * &inv;
            for c in k..n {
                let t = &f * &a[k][c];
                a[r][c] -= &t;
            }
        }
    }
    det
}

fn is_rational_square(q: &num_rational::BigRational) -> Option<num_rational::BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(num_rational::BigRational::new(n, d))
    } else {
        None
    }
}

/// Brings a potential to normal form: pure terms removed, identity basepoint
/// Hessian, and no `(m,1)` or `(1,m)` terms for `m > 1`. Returns the new
/// potential and the change `z = F(w)` from the new coordinates to the old.
pub fn k_normalize(p: &PotentialJet) -> Result<(PotentialJet, CoordinateChange), Error> {
    let n = p.n();
    let order = p.jet_order();
    let strip_pure = |rho: &JetPoly| -> JetPoly {
        let kept: BTreeMap<BaseMono, Scalar> =
            rho.iter().filter(|(m, _)| !m.z.is_zero() && !m.zb.is_zero()).map(|(m, c)| (*m, c.clone())).collect();
        JetPoly::from_map(n, rho.jet_order(), kept)
    };
    let mut rho = strip_pure(p.rho());

    // Linear part: complete squares, z^T G zb = Σ d_k |u_k|^2 with u = B z.
    let mut g = PotentialJet { rho: rho.clone() }.basepoint_hessian();
    let mut b = vec![vec![Scalar::zero(); n]; n];
    let mut roots = Vec::with_capacity(n);
    for k in 0..n {
        let d = g[k][k].clone();
        if !d.is_real() || !d.re.is_positive() {
            return Err(Error::NonPositiveMetric);
        }
        let Some(r) = is_rational_square(&d.re) else {
            return Err(Error::IrrationalNormalization(format!("diagonal entry {d} is not a rational square")));
        };
        roots.push(Scalar::real(r));
        let dinv = d.inv()?;
        b[k][k] = Scalar::one();
        for j in k + 1..n {
            b[k][j] = &g[j][k] * &dinv;
        }
        let snapshot = g.clone();
        for j in k + 1..n {
            for l in k + 1..n {
                let t = &(&snapshot[j][k] * &snapshot[k][l]) * &dinv;
                g[j][l] -= &t;
            }
        }
    }
    // z = B^{-1} diag(1/r) w, with B unit upper triangular.
    let mut binv = vec![vec![Scalar::zero(); n]; n];
    for i in (0..n).rev() {
        binv[i][i] = Scalar::one();
        for j in i + 1..n {
            let mut s = Scalar::zero();
            for k in i + 1..=j {
                s += &(&b[i][k] * &binv[k][j]);
            }
            binv[i][j] = -s;
        }
    }
    let mut linear = Vec::with_capacity(n);
    for i in 0..n {
        let mut c = JetPoly::zero(n, order);
        for j in 0..n {
            let coef = &binv[i][j] * &roots[j].inv()?;
            c = c.add(&JetPoly::z(n, j).scale(&coef));
        }
        linear.push(c.with_order(order));
    }
    let mut change = CoordinateChange { components: linear };
    rho = change.pull_back(&rho)?;

    // Remove (m,1) terms degree by degree: w_j -> w_j - Σ_I c_{I,j} w^I.
    for m in 2..order.max(2) {
        let mut comps = Vec::with_capacity(n);
        let mut any = false;
        for j in 0..n {
            let mut c = JetPoly::z(n, j).with_order(order);
            for (mono, coef) in rho.iter() {
                if mono.z.degree() as i32 == m && mono.zb == MultiIndex::unit(j) {
                    c.add_term(BaseMono { z: mono.z, zb: MultiIndex::ZERO }, -coef);
                    any = true;
                }
            }
            comps.push(c);
        }
        if !any {
            continue;
        }
        let step = CoordinateChange { components: comps };
        rho = strip_pure(&step.pull_back(&rho)?);
        change = change.then(&step)?;
    }
    let out = PotentialJet::new(rho)?;
    debug_assert!(out.is_k_normal());
    Ok((out, change))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fs_series() {
        let p = PotentialJet::by_name("fs", 1, 6).unwrap();
        let m = |k: u8| BaseMono { z: MultiIndex::from_slice(&[k]), zb: MultiIndex::from_slice(&[k]) };
        assert_eq!(p.rho().coeff(&m(2)), Scalar::from_ratio(-1, 2));
        assert_eq!(p.rho().coeff(&m(3)), Scalar::from_ratio(1, 3));
        assert!(p.is_k_normal());
        let h = PotentialJet::by_name("hyp", 1, 4).unwrap();
        assert_eq!(h.rho().coeff(&m(2)), Scalar::from_ratio(1, 2));
        assert_eq!(h.rho().len(), 2);
        assert!(PotentialJet::by_name("sphere", 1, 4).is_err());
    }

    #[test]
    fn normalize_removes_mixed_tails() {
        let z = JetPoly::z(1, 0);
        let zb = JetPoly::zb(1, 0);
        let rho = z.mul(&zb).add(&z.mul(&z).mul(&zb)).add(&zb.mul(&zb).mul(&z)).with_order(6);
        let p = PotentialJet::new(rho).unwrap();
        assert!(!p.is_k_normal());
        let (q, change) = k_normalize(&p).unwrap();
        assert!(q.is_k_normal());
        assert!(change.is_invertible());
    }

    #[test]
    fn normalize_rescales() {
        let rho = JetPoly::z(1, 0).mul(&JetPoly::zb(1, 0)).scale(&Scalar::from_int(4)).with_order(4);
        let (q, change) = k_normalize(&PotentialJet::new(rho.clone()).unwrap()).unwrap();
        assert!(q.is_k_normal());
        assert_eq!(change.components[0], JetPoly::z(1, 0).scale(&Scalar::from_ratio(1, 2)).with_order(4));
        let two = JetPoly::z(1, 0).mul(&JetPoly::zb(1, 0)).scale(&Scalar::from_int(2)).with_order(4);
        assert!(matches!(k_normalize(&PotentialJet::new(two).unwrap()), Err(Error::IrrationalNormalization(_))));
    }

    #[test]
    fn normal_input_gives_identity() {
        let p = PotentialJet::by_name("fs", 2, 6).unwrap();
        let (q, change) = k_normalize(&p).unwrap();
        assert_eq!(q, p);
        assert!(change.is_identity());
    }
}
