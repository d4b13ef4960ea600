//! Flat sections, the induced star product and the sections `Φ_ω`, `Φ_α`, `Φ`.

use crate::algebra::scalar::Scalar;
use crate::algebra::weyl::WeylForm;
use crate::error::Error;
use crate::geometry::Part;

use super::connection::ConnectionData;
use super::delta::delta_inv;

fn check_function(f: &WeylForm) -> Result<(), Error> {
    if let Some(k) = f.terms().keys().find(|k| k.form.degree() > 0) {
        return Err(Error::FormDegree(k.form.degree() as usize));
    }
    Ok(())
}

fn iterate(what: &str, f: &WeylForm, cap: i32, step: impl Fn(&WeylForm) -> WeylForm) -> Result<WeylForm, Error> {
    let f = f.truncate_weight(cap);
    let passes = cap.max(0) as usize + 3;
    let mut cur = f.clone();
    for _ in 0..passes {
        let next = f.add(&delta_inv(&step(&cur))).truncate_weight(cap);
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
    Err(Error::NotConverged { what: what.into(), passes })
}

/// `O_f = f + δ^{-1}(∇O_f + (1/ħ)[I_α, O_f])`.
pub fn quantum_flat_section(f: &WeylForm, c: &ConnectionData) -> Result<WeylForm, Error> {
    check_function(f)?;
    iterate("quantum flat section", f, c.weight_cap, |o| c.nabla(o, Part::Full).add(&c.ad_i_alpha(o)))
}

/// `J_f = f + δ^{-1}(∇J_f + R^* J_f + R̄^* J_f)`.
pub fn classical_flat_section(f: &WeylForm, c: &ConnectionData) -> Result<WeylForm, Error> {
    check_function(f)?;
    iterate("classical flat section", f, c.weight_cap, |j| c.nabla(j, Part::Full).add(&c.r_star(j)).add(&c.r_star_bar(j)))
}

/// The symbol of `O_f ⋆ O_g`.
pub fn star_product(f: &WeylForm, g: &WeylForm, c: &ConnectionData) -> Result<WeylForm, Error> {
    let of = quantum_flat_section(f, c)?;
    let og = quantum_flat_section(g, c)?;
    c.wick().star(&of, &og).symbol()
}

pub fn mixed_part(a: &WeylForm) -> WeylForm {
    a.filter(|k| !k.y.is_zero() && !k.yb.is_zero())
}

#[derive(Clone, Debug)]
pub struct PhiSections {
    pub phi_omega: WeylForm,
    pub phi_alpha: WeylForm,
    pub phi: WeylForm,
}

/// `Φ_ω`, `Φ_α` and `Φ = 2√-1(-ω_{ij̄} y^i yb^j + Φ_ω) - Φ_α`, with
/// `Φ_ω` the mixed part of `J_φ` for `φ = (√-1/2) ρ`.
pub fn phi_sections(c: &ConnectionData) -> Result<PhiSections, Error> {
    let g = &c.geometry;
    let n = g.n;
    let phi = WeylForm::from_jet(g.potential.rho()).scale(&Scalar::imag_ratio(1, 2));
    let phi_omega = mixed_part(&classical_flat_section(&phi, c)?);
    let phi_alpha = mixed_part(&classical_flat_section(&c.alpha_potential, c)?);
    let mut quad = WeylForm::zero(n);
    for i in 0..n {
        for j in 0..n {
            quad = quad.add(&WeylForm::y(n, i).mul(&WeylForm::yb(n, j)).mul_jet(&g.omega_lower[i][j]));
        }
    }
    let total = phi_omega.sub(&quad).scale(&Scalar::imag_ratio(2, 1)).sub(&phi_alpha);
    Ok(PhiSections { phi_omega, phi_alpha, phi: total })
}
