//! The Kapranov operators `R_n^*` built from curvature by recursion.

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::algebra::index::{Form, MultiIndex};
use crate::algebra::jet::JetPoly;
use crate::algebra::scalar::{factorial, Scalar};
use crate::algebra::weyl::{Key, WeylForm};
use crate::geometry::{KahlerData, Part};

use super::delta::delta_holo_inv;

/// `R_n^*` stored as `comps[n][m] = Σ_l dzb^l ⊗ P_{n,m,l}(y)`, acting on
/// sections by `a ↦ Σ_m comps[n][m] ∧ ∂a/∂y^m`.
#[derive(Clone, Debug)]
pub struct KapranovTensors {
    pub n_dim: usize,
    pub comps: BTreeMap<usize, Vec<WeylForm>>,
}

impl KapranovTensors {
    /// `R_2^*` from curvature and the recursion
    /// `R_{n+1}^* = (δ^{1,0})^{-1} ∇^{1,0} R_n^*`, up to `weight_cap`.
    pub fn build(g: &KahlerData, weight_cap: i32) -> Self {
        let n = g.n;
        let half = Scalar::from_ratio(1, 2);
        let mut cur: Vec<WeylForm> = (0..n)
            .map(|m| {
                let mut s = WeylForm::zero(n);
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            let r = &g.curvature[m][i][j][k];
                            let t = WeylForm::dzb(n, j).mul(&WeylForm::y(n, i)).mul(&WeylForm::y(n, k)).mul_jet(r);
                            s = s.add(&t.scale(&half));
                        }
                    }
                }
                s.truncate_weight(weight_cap)
            })
            .collect();
        let mut comps = BTreeMap::new();
        let mut deg = 2;
        while cur.iter().any(|c| !c.is_zero()) && deg as i32 <= weight_cap + 1 {
            let next = (0..n)
                .map(|m| {
                    let mut t = g.nabla(&cur[m], Part::Holo);
                    for i in 0..n {
                        for j in 0..n {
                            let gamma = &g.christoffel[m][i][j];
                            if gamma.is_zero() && crate::algebra::prec::is_exact(gamma.jet_order()) {
                                continue;
                            }
                            t = t.sub(&cur[j].mul(&WeylForm::dz(n, i)).mul_jet(gamma));
                        }
                    }
                    delta_holo_inv(&t).truncate_weight(weight_cap)
                })
                .collect();
            comps.insert(deg, cur);
            cur = next;
            deg += 1;
        }
        KapranovTensors { n_dim: n, comps }
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.comps.keys().copied()
    }

    pub fn get(&self, deg: usize) -> Option<&Vec<WeylForm>> {
        self.comps.get(&deg)
    }

    /// The symmetric coefficient `R^m_{i_1..i_n, l̄}` for the multi-index `idx`
    /// of the lower holomorphic indices.
    pub fn coefficient(&self, deg: usize, m: usize, idx: MultiIndex, l: usize) -> JetPoly {
        let n = self.n_dim;
        let Some(c) = self.comps.get(&deg) else { return JetPoly::zero(n, crate::algebra::EXACT) };
        let key = Key { y: idx, form: Form::dzb(l), ..Key::ONE };
        let raw = c[m].coeff(&key);
        let w = BigRational::new(idx.factorial(), factorial(deg as u32));
        raw.scale(&Scalar::real(w))
    }

    /// `Σ_n R_n^*` as one operator.
    pub fn total(&self) -> Vec<WeylForm> {
        let n = self.n_dim;
        let mut tot = vec![WeylForm::zero(n); n];
        for c in self.comps.values() {
            for m in 0..n {
                tot[m] = tot[m].add(&c[m]);
            }
        }
        tot
    }
}

/// `Σ_m comps[m] ∧ ∂a/∂y^m`.
pub fn apply_holo_operator(comps: &[WeylForm], a: &WeylForm) -> WeylForm {
    let mut out = WeylForm::new(a.n(), a.weight_cap(), a.jet_cap());
    for (m, c) in comps.iter().enumerate() {
        let d = a.d_y(m);
        if d.is_zero() {
            continue;
        }
        out = out.add(&c.mul(&d));
    }
    out
}

/// `Σ_m conj(comps[m]) ∧ ∂a/∂yb^m`.
pub fn apply_anti_operator(comps: &[WeylForm], a: &WeylForm) -> WeylForm {
    let mut out = WeylForm::new(a.n(), a.weight_cap(), a.jet_cap());
    for (m, c) in comps.iter().enumerate() {
        let d = a.d_yb(m);
        if d.is_zero() {
            continue;
        }
        out = out.add(&c.conj().mul(&d));
    }
    out
}
