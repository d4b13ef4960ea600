//! Metric, connection and curvature jets from a potential, and the covariant
//! derivative on Weyl-bundle sections.

use crate::algebra::index::Form;
use crate::algebra::jet::JetPoly;
use crate::algebra::scalar::Scalar;
use crate::algebra::star::Wick;
use crate::algebra::weyl::WeylForm;
use crate::error::Error;

use super::potential::PotentialJet;

/// Which part of a connection to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Full,
    Holo,
    Anti,
}

impl Part {
    pub fn holo(self) -> bool {
        matches!(self, Part::Full | Part::Holo)
    }

    pub fn anti(self) -> bool {
        matches!(self, Part::Full | Part::Anti)
    }
}

/// Jets of the Kähler data at the basepoint.
///
/// `metric[i][j] = g_{ij̄} = ∂_i∂_{j̄} rho`, so `ω_{ij̄} = (i/2) g_{ij̄}`.
/// `inv_metric[i][j] = g^{ij̄}` with `Σ_j g^{ij̄} g_{kj̄} = δ_ik`, and the
/// inverse form is `ω^{ij̄} = 2i g^{ij̄}`, so that `ω^{ij̄} ω_{kj̄} = -δ_ik`.
#[derive(Clone, Debug)]
pub struct KahlerData {
    pub n: usize,
    pub potential: PotentialJet,
    pub metric: Vec<Vec<JetPoly>>,
    pub inv_metric: Vec<Vec<JetPoly>>,
    pub omega_lower: Vec<Vec<JetPoly>>,
    pub omega_upper: Vec<Vec<JetPoly>>,
    /// `christoffel[k][i][j] = Γ^k_{ij} = g^{kl̄} ∂_i g_{jl̄}`.
    pub christoffel: Vec<Vec<Vec<JetPoly>>>,
    /// `curvature[m][i][j][k] = R^m_{ij̄k} = ∂_{j̄} Γ^m_{ik}`.
    pub curvature: Vec<Vec<Vec<Vec<JetPoly>>>>,
    /// `ricci[i][j] = Σ_k R^k_{ij̄k}`.
    pub ricci: Vec<Vec<JetPoly>>,
    /// `log(h/h(0))` with `h = det g`.
    pub log_h: JetPoly,
    wick: Wick,
}

/// Inverse and determinant of a matrix of jets by Gaussian elimination; the
/// basepoint values of the leading minors must be nonzero.
pub fn invert_matrix(m: &[Vec<JetPoly>]) -> Result<(Vec<Vec<JetPoly>>, JetPoly), Error> {
    let n = m.len();
    let order = m.iter().flatten().map(|j| j.jet_order()).min().unwrap_or(crate::algebra::EXACT);
    let mut a: Vec<Vec<JetPoly>> = m.iter().map(|r| r.iter().map(|j| j.truncate(order)).collect()).collect();
    let mut inv: Vec<Vec<JetPoly>> = (0..n)
        .map(|i| (0..n).map(|j| JetPoly::constant(n, order, if i == j { Scalar::one() } else { Scalar::zero() })).collect())
        .collect();
    let mut det = JetPoly::constant(n, order, Scalar::one());
    for k in 0..n {
        if a[k][k].constant_term().is_zero() {
            return Err(Error::SingularMetric);
        }
        det = det.mul_to(&a[k][k], order);
        let p = a[k][k].invert()?;
        for c in 0..n {
            a[k][c] = a[k][c].mul_to(&p, order);
            inv[k][c] = inv[k][c].mul_to(&p, order);
        }
        for r in 0..n {
            if r == k || a[r][k].is_zero() {
                continue;
            }
            let f = a[r][k].clone();
            for c in 0..n {
                let t = f.mul_to(&a[k][c], order);
                a[r][c] = a[r][c].sub(&t);
                let t = f.mul_to(&inv[k][c], order);
                inv[r][c] = inv[r][c].sub(&t);
            }
        }
    }
    Ok((inv, det))
}

impl KahlerData {
    pub fn from_potential(p: &PotentialJet) -> Result<Self, Error> {
        let n = p.n();
        let rho = p.rho();
        let metric: Vec<Vec<JetPoly>> = (0..n).map(|i| (0..n).map(|j| rho.deriv_z(i).deriv_zb(j)).collect()).collect();
        // g^{ij̄} = ((g^T)^{-1})_{ij}
        let gt: Vec<Vec<JetPoly>> = (0..n).map(|i| (0..n).map(|j| metric[j][i].clone()).collect()).collect();
        let (inv_metric, det) = invert_matrix(&gt)?;
        let half_i = Scalar::imag_ratio(1, 2);
        let two_i = Scalar::imag_ratio(2, 1);
        let omega_lower = metric.iter().map(|r| r.iter().map(|j| j.scale(&half_i)).collect()).collect();
        let omega_upper = inv_metric.iter().map(|r| r.iter().map(|j| j.scale(&two_i)).collect()).collect();
        let christoffel: Vec<Vec<Vec<JetPoly>>> = (0..n)
            .map(|k| {
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                let mut s = JetPoly::zero(n, crate::algebra::EXACT);
                                for l in 0..n {
                                    s = s.add(&inv_metric[k][l].mul(&metric[j][l].deriv_z(i)));
                                }
                                s
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let curvature: Vec<Vec<Vec<Vec<JetPoly>>>> = (0..n)
            .map(|m| {
                (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| christoffel[m][i][k].deriv_zb(j)).collect()).collect()).collect()
            })
            .collect();
        let ricci = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut s = JetPoly::zero(n, crate::algebra::EXACT);
                        for k in 0..n {
                            s = s.add(&curvature[k][i][j][k]);
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        let log_h = det.log_normalized()?;
        let wick = Wick::new(inv_metric.iter().map(|r| r.iter().map(|j| j.neg()).collect()).collect());
        Ok(KahlerData {
            n,
            potential: p.clone(),
            metric,
            inv_metric,
            omega_lower,
            omega_upper,
            christoffel,
            curvature,
            ricci,
            log_h,
            wick,
        })
    }

    /// The fiberwise Wick product of this metric.
    pub fn wick(&self) -> &Wick {
        &self.wick
    }

    pub fn jet_order(&self) -> i32 {
        self.potential.jet_order()
    }

    /// `∇a` with `Γ` acting on fiber indices; form indices are not twisted.
    pub fn nabla(&self, a: &WeylForm, part: Part) -> WeylForm {
        let n = self.n;
        let mut out = WeylForm::new(n, a.weight_cap(), a.jet_cap());
        if part.holo() {
            for i in 0..n {
                let mut t = a.d_z(i);
                for k in 0..n {
                    let dk = a.d_y(k);
                    if dk.is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        let g = &self.christoffel[k][i][j];
                        if g.is_zero() && crate::algebra::prec::is_exact(g.jet_order()) {
                            continue;
                        }
                        t = t.sub(&dk.mul(&WeylForm::y(n, j)).mul_jet(g));
                    }
                }
                out = out.add(&t.wedge_left(Form::dz(i)));
            }
        }
        if part.anti() {
            for i in 0..n {
                let mut t = a.d_zb(i);
                for k in 0..n {
                    let dk = a.d_yb(k);
                    if dk.is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        let g = self.christoffel[k][i][j].conj();
                        if g.is_zero() && crate::algebra::prec::is_exact(g.jet_order()) {
                            continue;
                        }
                        t = t.sub(&dk.mul(&WeylForm::yb(n, j)).mul_jet(&g));
                    }
                }
                out = out.add(&t.wedge_left(Form::dzb(i)));
            }
        }
        out
    }

    /// `g_{ij̄} y^i yb^j`.
    pub fn metric_quadratic(&self) -> WeylForm {
        let n = self.n;
        let mut s = WeylForm::zero(n);
        for i in 0..n {
            for j in 0..n {
                s = s.add(&WeylForm::y(n, i).mul(&WeylForm::yb(n, j)).mul_jet(&self.metric[i][j]));
            }
        }
        s
    }

    /// The (1,1)-form `Σ c_{ij̄} dz^i ∧ dzb^j` for a matrix of jets.
    pub fn two_form(&self, c: &[Vec<JetPoly>]) -> WeylForm {
        let n = self.n;
        let mut s = WeylForm::zero(n);
        for i in 0..n {
            for j in 0..n {
                s = s.add(&WeylForm::dz(n, i).mul(&WeylForm::dzb(n, j)).mul_jet(&c[i][j]));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::index::BaseMono;

    fn data(name: &str, order: i32) -> KahlerData {
        KahlerData::from_potential(&PotentialJet::by_name(name, 1, order).unwrap()).unwrap()
    }

    #[test]
    fn flat_is_flat() {
        let k = data("flat", 6);
        assert!(k.christoffel[0][0][0].is_zero());
        assert!(k.curvature[0][0][0][0].is_zero());
        assert!(k.log_h.is_zero());
        assert_eq!(k.omega_lower[0][0].constant_term(), Scalar::imag_ratio(1, 2));
    }

    #[test]
    fn curvature_at_basepoint() {
        // g = (1+zzb)^{-2}: Γ = -2 zb/(1+zzb), R = ∂_zb Γ = -2 at 0.
        let fs = data("fs", 6);
        assert_eq!(fs.curvature[0][0][0][0].constant_term(), Scalar::from_int(-2));
        assert_eq!(fs.ricci[0][0].constant_term(), Scalar::from_int(-2));
        let hyp = data("hyp", 6);
        assert_eq!(hyp.curvature[0][0][0][0].constant_term(), Scalar::from_int(2));
    }

    #[test]
    fn log_volume_gives_ricci() {
        for name in ["fs", "hyp"] {
            let k = data(name, 7);
            let lhs = k.log_h.deriv_z(0).deriv_zb(0);
            assert_eq!(lhs.sub(&k.ricci[0][0]), JetPoly::zero(1, lhs.jet_order().min(k.ricci[0][0].jet_order())));
        }
    }

    #[test]
    fn volume_density_pure_derivatives_vanish() {
        let k = KahlerData::from_potential(&PotentialJet::by_name("fs", 2, 6).unwrap()).unwrap();
        for (m, _) in k.log_h.iter() {
            assert!(!m.z.is_zero() && !m.zb.is_zero(), "pure term {m:?}");
        }
        assert!(k.log_h.coeff(&BaseMono::ONE).is_zero());
    }

    #[test]
    fn metric_is_parallel() {
        for name in ["flat", "fs", "hyp"] {
            let k = data(name, 7);
            let q = k.metric_quadratic();
            assert!(k.nabla(&q, Part::Full).is_zero(), "{name}");
        }
    }
}
