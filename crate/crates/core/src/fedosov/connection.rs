//! Fedosov data `I`, `J_α`, `γ_α`, `ω_ħ` and the connections `D_K`, `D_C`, `D_F`.

use std::collections::BTreeMap;

use crate::algebra::index::Form;
use crate::algebra::jet::JetPoly;
use crate::algebra::scalar::HalfInt;
use crate::algebra::star::Wick;
use crate::algebra::weyl::{Key, WeylForm};
use crate::error::Error;
use crate::geometry::{KahlerData, Part};

use super::delta::{delta_anti, delta_holo, delta_holo_inv};
use super::kapranov::{apply_anti_operator, apply_holo_operator, KapranovTensors};

/// The twist `α = ∂∂̄ φ_α`, a closed (1,1)-form with coefficients in `ħ·A`.
#[derive(Clone, Debug, PartialEq)]
pub enum Alpha {
    Zero,
    /// `α = -ħ Ric`, with potential `-ħ log h`.
    MinusHbarRicci,
    /// An explicit fiber-free potential `φ_α`.
    Potential(WeylForm),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Connection {
    Kapranov,
    Classical,
    Fedosov,
}

#[derive(Clone, Debug)]
pub struct ConnectionData {
    pub geometry: KahlerData,
    pub alpha: Alpha,
    pub weight_cap: i32,
    pub alpha_potential: WeylForm,
    pub alpha_form: WeylForm,
    pub kapranov: KapranovTensors,
    /// `Σ_n R_n^*` as components.
    pub r_total: Vec<WeylForm>,
    /// `I_n` keyed by the holomorphic fiber degree `n`.
    pub i_n: BTreeMap<usize, WeylForm>,
    pub i_total: WeylForm,
    /// `(J_α)_n` keyed by holomorphic fiber degree.
    pub j_alpha_n: BTreeMap<usize, WeylForm>,
    pub j_alpha: WeylForm,
    pub i_alpha: WeylForm,
    /// `2√-1 ω_{ij̄}(dz^i ⊗ yb^j - dzb^j ⊗ y^i)`.
    pub gamma0: WeylForm,
    pub gamma_alpha: WeylForm,
    /// `ω_ħ = 2√-1 ω - α`.
    pub omega_hbar: WeylForm,
    /// `R_∇ = -2√-1 R^m_{ij̄k} ω_{ml̄} dz^i ∧ dzb^j ⊗ y^k yb^l`.
    pub r_nabla: WeylForm,
}

/// `∂∂̄ φ = Σ ∂_i∂_{j̄}φ dz^i ∧ dzb^j`.
pub fn ddbar(phi: &WeylForm) -> WeylForm {
    let n = phi.n();
    let mut out = WeylForm::new(n, phi.weight_cap(), crate::algebra::prec::shift(phi.jet_cap(), -2));
    for i in 0..n {
        for j in 0..n {
            out = out.add(&phi.d_z(i).d_zb(j).wedge_left(Form::dzb(j)).wedge_left(Form::dz(i)));
        }
    }
    out
}

/// `∂̄ φ = Σ dzb^j ∂_{j̄} φ`.
pub fn dbar(phi: &WeylForm) -> WeylForm {
    let n = phi.n();
    let mut out = WeylForm::new(n, phi.weight_cap(), crate::algebra::prec::shift(phi.jet_cap(), -1));
    for j in 0..n {
        out = out.add(&phi.d_zb(j).wedge_left(Form::dzb(j)));
    }
    out
}

/// `∂ φ = Σ dz^i ∂_i φ`.
pub fn del(phi: &WeylForm) -> WeylForm {
    let n = phi.n();
    let mut out = WeylForm::new(n, phi.weight_cap(), crate::algebra::prec::shift(phi.jet_cap(), -1));
    for i in 0..n {
        out = out.add(&phi.d_z(i).wedge_left(Form::dz(i)));
    }
    out
}

/// `Σ_k (∇̃^{1,0})^k a` with `∇̃^{1,0} = (δ^{1,0})^{-1} ∇^{1,0}`, up to `weight_cap`.
pub fn holo_tilde_series(g: &KahlerData, a: &WeylForm, weight_cap: i32) -> (WeylForm, Vec<WeylForm>) {
    let mut pieces = Vec::new();
    let mut t = a.truncate_weight(weight_cap);
    let mut total = WeylForm::new(a.n(), weight_cap, a.jet_cap());
    for _ in 0..=(weight_cap.max(0) as usize + 1) {
        t = delta_holo_inv(&g.nabla(&t, Part::Holo)).truncate_weight(weight_cap);
        if t.is_zero() {
            total = total.add(&t);
            break;
        }
        total = total.add(&t);
        pieces.push(t.clone());
    }
    (total, pieces)
}

fn alpha_potential(g: &KahlerData, alpha: &Alpha) -> Result<WeylForm, Error> {
    let n = g.n;
    match alpha {
        Alpha::Zero => Ok(WeylForm::zero(n)),
        Alpha::MinusHbarRicci => {
            let key = Key { hbar: HalfInt::from_int(1), ..Key::ONE };
            Ok(WeylForm::from_jet_at(key, &g.log_h).neg())
        }
        Alpha::Potential(p) => {
            for k in p.terms().keys() {
                if k.hbar.twice_value < 2 || !k.is_fiber_constant() || k.form.degree() > 0 {
                    return Err(Error::AlphaClassicalPart);
                }
            }
            Ok(p.clone())
        }
    }
}

pub fn build_connection(g: &KahlerData, alpha: &Alpha, weight_cap: i32) -> Result<ConnectionData, Error> {
    let n = g.n;
    let phi_alpha = alpha_potential(g, alpha)?;
    let alpha_form = ddbar(&phi_alpha);
    let kapranov = KapranovTensors::build(g, weight_cap);
    let r_total = kapranov.total();

    let lower_yb: Vec<WeylForm> = (0..n)
        .map(|j| {
            let mut s = WeylForm::zero(n);
            for k in 0..n {
                s = s.add(&WeylForm::yb(n, k).mul_jet(&g.metric[j][k]));
            }
            s
        })
        .collect();
    let mut i_n = BTreeMap::new();
    let mut i_total = WeylForm::new(n, weight_cap, crate::algebra::EXACT);
    for (deg, comps) in &kapranov.comps {
        let mut s = WeylForm::new(n, weight_cap, crate::algebra::EXACT);
        for j in 0..n {
            s = s.add(&comps[j].mul(&lower_yb[j]));
        }
        let s = s.truncate_weight(weight_cap);
        i_total = i_total.add(&s);
        i_n.insert(*deg, s);
    }

    let (j_alpha, pieces) = holo_tilde_series(g, &dbar(&phi_alpha), weight_cap);
    let j_alpha_n: BTreeMap<usize, WeylForm> = pieces.into_iter().enumerate().map(|(k, p)| (k + 1, p)).collect();
    let i_alpha = i_total.add(&j_alpha);

    let mut gamma0 = WeylForm::zero(n);
    for i in 0..n {
        for j in 0..n {
            let gij = &g.metric[i][j];
            gamma0 = gamma0.sub(&WeylForm::dz(n, i).mul(&WeylForm::yb(n, j)).mul_jet(gij));
            gamma0 = gamma0.add(&WeylForm::dzb(n, j).mul(&WeylForm::y(n, i)).mul_jet(gij));
        }
    }
    let gamma_alpha = gamma0.add(&i_alpha);
    let omega_hbar = g.two_form(&g.metric).neg().sub(&alpha_form);

    let mut r_nabla = WeylForm::zero(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut c = JetPoly::zero(n, crate::algebra::EXACT);
                    for m in 0..n {
                        c = c.add(&g.metric[m][l].mul(&g.curvature[m][i][j][k]));
                    }
                    let t =
                        WeylForm::dz(n, i).mul(&WeylForm::dzb(n, j)).mul(&WeylForm::y(n, k)).mul(&WeylForm::yb(n, l)).mul_jet(&c);
                    r_nabla = r_nabla.add(&t);
                }
            }
        }
    }

    Ok(ConnectionData {
        geometry: g.clone(),
        alpha: alpha.clone(),
        weight_cap,
        alpha_potential: phi_alpha,
        alpha_form,
        kapranov,
        r_total,
        i_n,
        i_total,
        j_alpha_n,
        j_alpha,
        i_alpha,
        gamma0,
        gamma_alpha,
        omega_hbar,
        r_nabla,
    })
}

impl ConnectionData {
    pub fn n(&self) -> usize {
        self.geometry.n
    }

    pub fn wick(&self) -> &Wick {
        self.geometry.wick()
    }

    pub fn nabla(&self, a: &WeylForm, part: Part) -> WeylForm {
        self.geometry.nabla(a, part)
    }

    /// `∇γ_α + (1/ħ) γ_α ⋆ γ_α + R_∇ - ω_ħ`.
    ///
    /// The square is expanded around the quadratic part so that `(1/ħ)[γ_0, I_α]`
    /// keeps the precision of `I_α`.
    pub fn fedosov_residual(&self) -> WeylForm {
        self.residual_of(&self.gamma_alpha.sub(&self.gamma0))
    }

    /// The Fedosov residual for `γ_0 + i_alpha` in place of `γ_α`.
    pub fn residual_of(&self, i_alpha: &WeylForm) -> WeylForm {
        let w = self.wick();
        let gamma = self.gamma0.add(i_alpha);
        let sq0 = w.star(&self.gamma0, &self.gamma0).mul_hbar(-1);
        let cross = w.commutator(&self.gamma0, i_alpha).mul_hbar(-1);
        let sq1 = w.star(i_alpha, i_alpha).mul_hbar(-1);
        self.nabla(&gamma, Part::Full).add(&sq0).add(&cross).add(&sq1).add(&self.r_nabla).sub(&self.omega_hbar)
    }

    /// `R^*(a) = Σ_n R_n^*(a)`.
    pub fn r_star(&self, a: &WeylForm) -> WeylForm {
        apply_holo_operator(&self.r_total, a)
    }

    /// The conjugate operator, acting on `yb`.
    pub fn r_star_bar(&self, a: &WeylForm) -> WeylForm {
        apply_anti_operator(&self.r_total, a)
    }

    /// `(1/ħ)[I_α, a]`.
    pub fn ad_i_alpha(&self, a: &WeylForm) -> WeylForm {
        self.wick().ad(&self.i_alpha, a)
    }

    pub fn apply(&self, a: &WeylForm, which: Connection, part: Part) -> WeylForm {
        let mut out = WeylForm::new(a.n(), a.weight_cap(), a.jet_cap());
        if part.holo() {
            out = out.add(&self.nabla(a, Part::Holo)).sub(&delta_holo(a));
            if which == Connection::Classical {
                out = out.add(&self.r_star_bar(a));
            }
        }
        if part.anti() {
            out = out.add(&self.nabla(a, Part::Anti));
            match which {
                Connection::Kapranov => out = out.add(&self.r_star(a)),
                Connection::Classical => out = out.sub(&delta_anti(a)).add(&self.r_star(a)),
                Connection::Fedosov => out = out.sub(&delta_anti(a)).add(&self.ad_i_alpha(a)),
            }
        }
        out
    }

    pub fn d_k(&self, a: &WeylForm) -> WeylForm {
        self.apply(a, Connection::Kapranov, Part::Full)
    }

    pub fn d_c(&self, a: &WeylForm) -> WeylForm {
        self.apply(a, Connection::Classical, Part::Full)
    }

    pub fn d_f(&self, a: &WeylForm) -> WeylForm {
        self.apply(a, Connection::Fedosov, Part::Full)
    }

    /// `D_F` written literally as `∇ + (1/ħ)[γ_α, -]`.
    pub fn d_f_literal(&self, a: &WeylForm) -> WeylForm {
        self.nabla(a, Part::Full).add(&self.wick().ad(&self.gamma_alpha, a))
    }

    /// The Ricci form `Σ Ric_{ij̄} dz^i ∧ dzb^j`.
    pub fn ricci_form(&self) -> WeylForm {
        self.geometry.two_form(&self.geometry.ricci)
    }

    /// `(J_α)_n` in the closed form `-ħ Σ_i ∂/∂y^i` of the `i`-th component of `R_{n+1}^*`.
    pub fn j_alpha_closed_form(&self, deg: usize) -> WeylForm {
        let n = self.n();
        let Some(c) = self.kapranov.get(deg + 1) else { return WeylForm::zero(n) };
        let mut s = WeylForm::zero(n);
        for i in 0..n {
            s = s.add(&c[i].d_y(i));
        }
        s.mul_hbar(1).neg()
    }
}
