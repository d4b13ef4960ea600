//! The Bargmann-Fock action on holomorphic Weyl sections with exponentials,
//! the connections `D_α` and `D_{B,α}`, and the vacuum section.

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::algebra::index::MultiIndex;
use crate::algebra::jet::JetPoly;
use crate::algebra::scalar::{HalfInt, Scalar};
use crate::algebra::weyl::{Key, WeylForm};
use crate::error::Error;
use crate::fedosov::{ddbar, del, holo_tilde_series, Alpha, ConnectionData};
use crate::geometry::{KahlerData, Part};

/// `amplitude · e^{exponent/ħ}` with both parts free of `yb`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtElt {
    pub amplitude: WeylForm,
    pub exponent: WeylForm,
}

impl ExtElt {
    /// Exponents are stored without their pure hbar-series constant part.
    pub fn new(amplitude: WeylForm, exponent: WeylForm) -> Result<Self, Error> {
        if amplitude.has_yb() || exponent.has_yb() {
            return Err(Error::NotHolomorphic("module elements may not contain yb".into()));
        }
        if exponent.max_form_degree() > 0 {
            return Err(Error::FormDegree(exponent.max_form_degree() as usize));
        }
        let exponent = exponent.map_terms(|k, j| {
            if k.is_fiber_constant() {
                let mut c = j.clone();
                c.add_term(crate::algebra::BaseMono::ONE, -j.constant_term());
                Some((*k, c))
            } else {
                Some((*k, j.clone()))
            }
        });
        Ok(ExtElt { amplitude, exponent })
    }

    pub fn plain(amplitude: WeylForm) -> Self {
        let n = amplitude.n();
        ExtElt { amplitude, exponent: WeylForm::zero(n) }
    }

    fn with_amplitude(&self, amplitude: WeylForm) -> ExtElt {
        ExtElt { amplitude, exponent: self.exponent.clone() }
    }
}

/// A module section `A e^{G/ħ} ⊗ e` with `∇_L e = (1/ħ) ∂f_L ⊗ e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockElt {
    pub base: ExtElt,
    pub line_gauge: WeylForm,
}

/// `yb^j ⊛ B = Σ_i g^{ij̄} (ħ ∂B/∂y^i + B ∂G/∂y^i)` for exponent `G`.
fn e_op(g: &KahlerData, j: usize, b: &WeylForm, exponent: &WeylForm) -> WeylForm {
    let n = g.n;
    let mut out = WeylForm::zero(n);
    for i in 0..n {
        let t = b.d_y(i).mul_hbar(1).add(&b.mul_combined(&exponent.d_y(i)));
        out = out.add(&t.mul_combined(&WeylForm::from_jet(&g.inv_metric[i][j])));
    }
    out
}

/// `o ⊛ t`: `y^I yb^J` acts by multiplying with `y^I` and then applying
/// `yb^j ⊛` for each factor of `yb^J`.
pub fn bf_action(o: &WeylForm, t: &ExtElt, g: &KahlerData) -> ExtElt {
    let n = g.n;
    // Removing yb^J costs |J| in the combined cap and each yb-action restores
    // at least one, because the exponent vanishes at the basepoint to first order.
    let cap = o.combined_cap();
    let mut groups: BTreeMap<MultiIndex, WeylForm> = BTreeMap::new();
    for (k, j) in o.iter() {
        let c = crate::algebra::prec::shift(cap, -(k.yb.degree() as i32));
        groups.entry(k.yb).or_insert_with(|| WeylForm::new(n, c, c)).add_term(Key { yb: MultiIndex::ZERO, ..*k }, j.clone());
    }
    let mut out = WeylForm::new(n, cap, cap).mul_combined(&t.amplitude);
    for (yb, y_part) in groups {
        let mut b = y_part.mul_combined(&t.amplitude);
        for j in 0..n {
            for _ in 0..yb.get(j) {
                b = e_op(g, j, &b, &t.exponent);
            }
        }
        out = out.add(&b);
    }
    t.with_amplitude(out)
}

pub fn bf_action_fock(o: &WeylForm, s: &FockElt, g: &KahlerData) -> FockElt {
    FockElt { base: bf_action(o, &s.base, g), line_gauge: s.line_gauge.clone() }
}

/// `β = Σ_{k≥1} (∇̃^{1,0})^k ρ`.
pub fn build_beta(c: &ConnectionData) -> WeylForm {
    let g = &c.geometry;
    holo_tilde_series(g, &WeylForm::from_jet(g.potential.rho()), c.weight_cap).0
}

/// The line gauge `f_L = -(ρ + φ_α + ħ log h)`, whose `∂̄∂` is `-ω_ħ + ħ Ric`.
pub fn line_gauge(c: &ConnectionData) -> WeylForm {
    let g = &c.geometry;
    let log_h = WeylForm::from_jet_at(Key { hbar: HalfInt::from_int(1), ..Key::ONE }, &g.log_h);
    WeylForm::from_jet(g.potential.rho()).add(&c.alpha_potential).add(&log_h).neg()
}

/// Checks `∂̄∂ f_L = -ω_ħ + ħ Ric` to the available order.
pub fn check_gauge(gauge: &WeylForm, c: &ConnectionData) -> Result<(), Error> {
    let lhs = ddbar(gauge).neg();
    let rhs = c.omega_hbar.neg().add(&c.ricci_form().mul_hbar(1));
    if lhs.sub(&rhs).is_zero() {
        Ok(())
    } else {
        Err(Error::GaugeMismatch)
    }
}

impl FockElt {
    pub fn new(base: ExtElt, line_gauge: WeylForm, c: &ConnectionData) -> Result<Self, Error> {
        check_gauge(&line_gauge, c)?;
        Ok(FockElt { base, line_gauge })
    }

    /// Uses the canonical gauge of `c`.
    pub fn canonical(base: ExtElt, c: &ConnectionData) -> Self {
        FockElt { base, line_gauge: line_gauge(c) }
    }
}

/// `A e^{-β/ħ} ⊗ e`.
pub fn vacuum_section(amplitude: WeylForm, c: &ConnectionData) -> FockElt {
    let beta = build_beta(c);
    FockElt::canonical(ExtElt { amplitude, exponent: beta.neg() }, c)
}

/// `D_α(A e^{G/ħ}) = (∇A + (1/ħ)∇G ∧ A + (1/ħ) γ_α ⊛ A) e^{G/ħ}`.
pub fn apply_d_alpha(t: &ExtElt, c: &ConnectionData) -> ExtElt {
    apply_d_alpha_part(t, c, Part::Full)
}

pub fn apply_d_alpha_part(t: &ExtElt, c: &ConnectionData, part: Part) -> ExtElt {
    let g = &c.geometry;
    let gamma = match part {
        Part::Full => c.gamma_alpha.clone(),
        Part::Holo => c.gamma_alpha.filter(|k| k.form.holo_degree() == 1),
        Part::Anti => c.gamma_alpha.filter(|k| k.form.anti_degree() == 1),
    };
    let nabla_a = g.nabla(&t.amplitude, part);
    let dg = g.nabla(&t.exponent, part).mul_combined(&t.amplitude).mul_hbar(-1);
    let act = bf_action(&gamma, t, g).amplitude.mul_hbar(-1);
    t.with_amplitude(nabla_a.add(&dg).add(&act))
}

/// `D_{B,α} = D_α ⊗ 1 + 1 ⊗ ∇_L`.
pub fn apply_d_b(s: &FockElt, c: &ConnectionData) -> FockElt {
    let t = apply_d_alpha(&s.base, c);
    let line = del(&s.line_gauge).mul_combined(&s.base.amplitude).mul_hbar(-1);
    FockElt { base: t.with_amplitude(t.amplitude.add(&line)), line_gauge: s.line_gauge.clone() }
}

/// Result of acting with a flat section on a flat module section.
#[derive(Clone, Debug)]
pub struct ModuleAction {
    /// The holomorphic hbar-series `s'` with output `J_{s'} e^{-β/ħ} ⊗ e`.
    pub s_prime: WeylForm,
    /// The output amplitude.
    pub amplitude: WeylForm,
    /// `D_{B,α}` of the output.
    pub residual: WeylForm,
}

/// `J_s = Σ_k (∇̃^{1,0})^k s` for a holomorphic hbar-series `s`.
pub fn holomorphic_section(s: &WeylForm, c: &ConnectionData) -> WeylForm {
    let (tail, _) = holo_tilde_series(&c.geometry, s, c.weight_cap);
    s.truncate_weight(c.weight_cap).add(&tail)
}

/// `O_f ⊛ (J_s e^{-β/ħ} ⊗ e) = J_{s'} e^{-β/ħ} ⊗ e`.
pub fn module_action(f: &WeylForm, s_hol: &JetPoly, c: &ConnectionData) -> Result<ModuleAction, Error> {
    if c.alpha != Alpha::MinusHbarRicci {
        return Err(Error::Config("module action needs the prequantum twist".into()));
    }
    if !s_hol.is_holomorphic() {
        return Err(Error::NotHolomorphic("input germ depends on zb".into()));
    }
    let of = crate::fedosov::quantum_flat_section(f, c)?;
    let js = holomorphic_section(&WeylForm::from_jet(s_hol), c);
    let s = vacuum_section(js, c);
    let out = bf_action_fock(&of, &s, &c.geometry);
    let amp = out.base.amplitude.clone();
    let s_prime = amp.filter(|k| k.is_fiber_constant());
    if s_prime.iter().any(|(_, j)| !j.is_holomorphic()) {
        return Err(Error::NotHolomorphic(format!("s' = {s_prime}")));
    }
    let expect = holomorphic_section(&s_prime, c);
    if !amp.sub(&expect).is_zero() {
        return Err(Error::NotHolomorphic("output amplitude is not a Kapranov-flat section".into()));
    }
    let residual = apply_d_b(&out, c).base.amplitude;
    Ok(ModuleAction { s_prime, amplitude: amp, residual })
}

/// `‖Σ β_i y^i‖ < r` for the hbar-free y-linear part of the exponent at the
/// basepoint, measured with the inverse metric there.
pub fn boundedness_check(s: &ExtElt, g: &KahlerData, r_bound: &BigRational) -> bool {
    let n = g.n;
    let coeffs: Vec<Scalar> = (0..n).map(|i| s.exponent.value_at_zero(&Key { y: MultiIndex::unit(i), ..Key::ONE })).collect();
    let mut norm2 = Scalar::zero();
    for i in 0..n {
        for j in 0..n {
            let gij = g.inv_metric[i][j].constant_term();
            norm2 += &(&(&gij * &coeffs[i]) * &coeffs[j].conj());
        }
    }
    norm2.re < r_bound * r_bound
}
