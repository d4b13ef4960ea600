//! Formal Gaussian integration, the interacting inner product, projection onto
//! the Fock space and formal Toeplitz operators, all at the basepoint.
//!
//! Fiber variables are taken in the K-normal frame, where the Gaussian weight is
//! `e^{-|y|²/ħ}` and `yb^j` acts on the Fock space as `ħ ∂/∂y^j`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;

use crate::algebra::{star_exp, HalfInt, JetPoly, Key, MultiIndex, Scalar, WeylForm, Wick, EXACT};
use crate::error::Error;
use crate::fedosov::{classical_flat_section, phi_sections, ConnectionData};
use crate::fock::holomorphic_section;

/// A holomorphic element of `C[[y]][[ħ]]` with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockSeries {
    n: usize,
    coeffs: BTreeMap<(HalfInt, MultiIndex), Scalar>,
    weight_cap: i32,
}

impl FockSeries {
    pub fn new(n: usize, weight_cap: i32) -> Self {
        FockSeries { n, coeffs: BTreeMap::new(), weight_cap }
    }

    pub fn monomial(n: usize, y: MultiIndex) -> Self {
        let mut s = FockSeries::new(n, EXACT);
        s.coeffs.insert((HalfInt::ZERO, y), Scalar::one());
        s
    }

    /// Accepts constant-coefficient form-degree-0 elements without `yb`.
    pub fn from_weyl(a: &WeylForm) -> Result<Self, Error> {
        if a.has_yb() {
            return Err(Error::NotHolomorphic("Fock series may not contain yb".into()));
        }
        if a.max_form_degree() > 0 {
            return Err(Error::FormDegree(a.max_form_degree() as usize));
        }
        let a = evaluate_at_basepoint(a)?;
        let mut s = FockSeries::new(a.n(), a.weight_cap());
        for (k, j) in a.iter() {
            s.coeffs.insert((k.hbar, k.y), j.constant_term());
        }
        Ok(s)
    }

    pub fn to_weyl(&self) -> WeylForm {
        let mut w = WeylForm::new(self.n, self.weight_cap, EXACT);
        for ((h, y), c) in &self.coeffs {
            w.add_term(Key { hbar: *h, y: *y, ..Key::ONE }, JetPoly::constant(self.n, EXACT, c.clone()));
        }
        w
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight_cap(&self) -> i32 {
        self.weight_cap
    }

    pub fn coeff(&self, hbar: HalfInt, y: MultiIndex) -> Scalar {
        self.coeffs.get(&(hbar, y)).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(HalfInt, MultiIndex), &Scalar)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl fmt::Display for FockSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_weyl())
    }
}

/// A basepoint interaction `φ` with every term of weight at least 3, and the
/// weight to which `e^{φ/ħ}` is expanded.
#[derive(Clone, Debug)]
pub struct Interaction {
    phi: WeylForm,
    cap: i32,
}

impl Interaction {
    pub fn new(phi: &WeylForm, cap: i32) -> Result<Self, Error> {
        if phi.max_form_degree() > 0 {
            return Err(Error::FormDegree(phi.max_form_degree() as usize));
        }
        if phi.iter().any(|(k, _)| k.weight() < 3) {
            return Err(Error::InteractionWeight);
        }
        if !phi.is_zero() && crate::algebra::prec::is_exact(cap) {
            return Err(Error::Config("a nonzero interaction needs a finite weight cap".into()));
        }
        Ok(Interaction { phi: evaluate_at_basepoint(phi)?, cap })
    }

    pub fn zero(n: usize) -> Self {
        Interaction { phi: WeylForm::zero(n), cap: EXACT }
    }

    pub fn phi(&self) -> &WeylForm {
        &self.phi
    }

    pub fn cap(&self) -> i32 {
        self.cap
    }

    /// `e^{φ/ħ}` through weight `cap`.
    pub fn exponential(&self) -> WeylForm {
        if self.phi.is_zero() {
            return WeylForm::one(self.phi.n());
        }
        star_exp(&self.phi, self.cap).expect("interaction weight checked on construction")
    }

    /// `Σ_{m ≤ vertices} (φ/ħ)^m / m!`, truncated at weight `cap`.
    pub fn exponential_vertices(&self, vertices: usize) -> WeylForm {
        let n = self.phi.n();
        let u = self.phi.mul_hbar(-1).with_caps(self.cap, EXACT);
        let mut acc = WeylForm::one(n).with_caps(u.weight_cap(), u.jet_cap());
        let mut pow = acc.clone();
        for m in 1..=vertices {
            pow = pow.mul(&u).scale(&Scalar::from_ratio(1, m as i64));
            acc = acc.add(&pow);
        }
        acc
    }

    /// The number of vertices after which `e^{φ/ħ}` no longer changes below
    /// weight `cap`: each vertex raises the weight by at least one.
    pub fn vertex_bound(&self) -> usize {
        if self.phi.is_zero() {
            return 0;
        }
        (self.cap.max(0) as usize) + 1
    }
}

/// Replaces every coefficient by its value at `z = zb = 0`.
pub fn evaluate_at_basepoint(a: &WeylForm) -> Result<WeylForm, Error> {
    if a.max_form_degree() > 0 {
        return Err(Error::FormDegree(a.max_form_degree() as usize));
    }
    Ok(a.eval_at_zero())
}

/// `y^I yb^J ħ^k ↦ δ_{IJ} I! ħ^{k+|I|}`, normalized so that `⟨1,1⟩ = 1`.
pub fn gaussian_moment(m: &WeylForm) -> Result<WeylForm, Error> {
    let m = evaluate_at_basepoint(m)?;
    let n = m.n();
    let mut out = WeylForm::new(n, m.weight_cap(), EXACT);
    for (k, j) in m.iter() {
        if k.y != k.yb {
            continue;
        }
        let c = j.constant_term();
        let f = Scalar::real(BigRational::from_integer(k.y.factorial()));
        let key = Key { hbar: k.hbar + HalfInt::from_int(k.y.degree() as i32), ..Key::ONE };
        out.add_term(key, JetPoly::constant(n, EXACT, &c * &f));
    }
    Ok(out)
}

/// `⟨f, g⟩_φ = M(f · conj(g) · e^{φ/ħ})`.
pub fn formal_inner_product(f: &WeylForm, g: &WeylForm, phi: &Interaction) -> Result<WeylForm, Error> {
    formal_inner_product_vertices(f, g, phi, phi.vertex_bound())
}

/// The inner product with `e^{φ/ħ}` expanded through a fixed number of vertices.
pub fn formal_inner_product_vertices(f: &WeylForm, g: &WeylForm, phi: &Interaction, vertices: usize) -> Result<WeylForm, Error> {
    let fg = evaluate_at_basepoint(f)?.mul(&evaluate_at_basepoint(g)?.conj());
    gaussian_moment(&fg.mul(&phi.exponential_vertices(vertices)))
}

/// The projection for `φ = 0`:
/// `ħ^k y^A yb^B ↦ ħ^{k+|B|} A!/(A-B)! y^{A-B}`.
fn free_projection(a: &WeylForm) -> WeylForm {
    let n = a.n();
    let mut out = WeylForm::new(n, a.weight_cap(), EXACT);
    for (k, j) in a.iter() {
        let Some(rest) = k.y.checked_sub(&k.yb) else { continue };
        let c = Scalar::real(BigRational::from_integer(k.y.falling(&k.yb)));
        let key = Key { hbar: k.hbar + HalfInt::from_int(k.yb.degree() as i32), y: rest, ..Key::ONE };
        out.add_term(key, JetPoly::constant(n, EXACT, &j.constant_term() * &c));
    }
    out
}

/// `π_φ(f)`: the holomorphic `p` with `⟨p, y^I⟩_φ = ⟨f, y^I⟩_φ` for all `I`.
///
/// Solved as the fixed point of `p = Π₀(f e) - Π₀(p (e - 1))`, `e = e^{φ/ħ}`,
/// where `Π₀` is the free projection; `e - 1` raises the weight, so each pass
/// fixes one more weight.
pub fn projection(f: &WeylForm, phi: &Interaction) -> Result<FockSeries, Error> {
    let f = evaluate_at_basepoint(f)?;
    let e = phi.exponential();
    let e1 = e.sub(&WeylForm::one(f.n()));
    let rhs = free_projection(&f.mul(&e));
    if e1.is_zero() {
        return FockSeries::from_weyl(&rhs);
    }
    let mut p = rhs.clone();
    let passes = (rhs.weight_cap().max(0) as usize).min(e.weight_cap().max(0) as usize) + 2;
    for _ in 0..passes {
        let next = rhs.sub(&free_projection(&p.mul(&e1)));
        if next == p {
            return FockSeries::from_weyl(&p);
        }
        p = next;
    }
    Err(Error::NotConverged { what: "projection".into(), passes })
}

/// `T_{f,φ}(s) = π_φ(f s)`.
pub fn toeplitz_apply(f: &WeylForm, s: &FockSeries, phi: &Interaction) -> Result<FockSeries, Error> {
    projection(&evaluate_at_basepoint(f)?.mul(&s.to_weyl()), phi)
}

/// The normal symbol `O_f = (e^{φ/ħ})^{-1} ⋆ (f e^{φ/ħ})` for the Wick product
/// at the basepoint.
pub fn normal_symbol(f: &WeylForm, phi: &Interaction, wick: &Wick) -> Result<WeylForm, Error> {
    let f = evaluate_at_basepoint(f)?;
    let wick = wick.at_basepoint();
    let e = phi.exponential();
    let cap = f.weight_cap().min(e.weight_cap());
    let inv = wick.star_inverse(&e, cap)?;
    Ok(wick.star(&inv, &f.mul(&e)))
}

/// The Bargmann-Fock action at the basepoint. A monomial `y^A yb^B` equals
/// `yb^B ⋆ y^A`, so `y^A` multiplies first and each `yb^j` then acts as
/// `-ħ Σ_i c^{ij} ∂/∂y^i` for the contraction tensor `c` of `wick`.
pub fn fock_action(o: &WeylForm, s: &FockSeries, wick: &Wick) -> Result<FockSeries, Error> {
    let o = evaluate_at_basepoint(o)?;
    let wick = wick.at_basepoint();
    let n = o.n();
    let c: Vec<Vec<Scalar>> = wick.tensor().iter().map(|r| r.iter().map(|j| -j.constant_term()).collect()).collect();
    let base = s.to_weyl();
    let mut out = WeylForm::new(n, o.weight_cap(), EXACT).mul(&base);
    for (k, j) in o.iter() {
        let mut b = WeylForm::from_jet_at(Key { yb: MultiIndex::ZERO, ..*k }, j).mul(&base);
        for jj in 0..n {
            for _ in 0..k.yb.get(jj) {
                let mut nb = WeylForm::zero(n).with_caps(b.weight_cap(), EXACT);
                for (i, row) in c.iter().enumerate() {
                    if !row[jj].is_zero() {
                        nb = nb.add(&b.d_y(i).mul_hbar(1).scale(&row[jj]));
                    }
                }
                b = nb;
            }
        }
        out = out.add(&b);
    }
    FockSeries::from_weyl(&out)
}

/// The Toeplitz side of the module comparison at the basepoint:
/// `T_{(J_f)_{x0}, Φ_{x0}}((J_s)_{x0})`.
pub fn toeplitz_at_basepoint(f: &WeylForm, s_hol: &WeylForm, c: &ConnectionData) -> Result<FockSeries, Error> {
    let jf = evaluate_at_basepoint(&classical_flat_section(f, c)?)?;
    let js = FockSeries::from_weyl(&evaluate_at_basepoint(&holomorphic_section(s_hol, c))?)?;
    let phi = evaluate_at_basepoint(&phi_sections(c)?.phi)?;
    let cap = jf.weight_cap().min(js.weight_cap());
    toeplitz_apply(&jf, &js, &Interaction::new(&phi, cap)?)
}

/// `a!` as an exact scalar.
pub fn factorial_scalar(a: &MultiIndex) -> Scalar {
    Scalar::real(BigRational::from_integer(a.factorial()))
}
