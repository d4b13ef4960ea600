//! The identity catalog. Every check evaluates both sides of an identity at
//! fixed caps and passes exactly when the residual has no terms.

use std::collections::BTreeMap;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{star_exp, BaseMono, Form, HalfInt, JetPoly, Key, MultiIndex, Scalar, WeylForm, Wick, EXACT};
use crate::error::Error;
use crate::fedosov::{
    build_connection, classical_flat_section, del, delta_anti, delta_anti_inv, delta_holo_inv, phi_sections,
    quantum_flat_section, star_product, Alpha, Connection, ConnectionData,
};
use crate::fock::{
    apply_d_alpha, apply_d_b, bf_action_fock, build_beta, holomorphic_section, module_action, vacuum_section, ExtElt, FockElt,
};
use crate::geometry::{Builtin, KahlerData, Part, PotentialJet};
use crate::toeplitz::{
    fock_action, formal_inner_product, formal_inner_product_vertices, gaussian_moment, normal_symbol, projection, toeplitz_apply,
    toeplitz_at_basepoint, FockSeries, Interaction,
};

/// Where the potential comes from; kept symbolic so caps can be raised.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeometrySpec {
    Builtin {
        kind: Builtin,
        n: usize,
    },
    /// A polynomial potential, truncated to the jet order in use.
    Table(JetPoly),
}

impl GeometrySpec {
    pub fn n(&self) -> usize {
        match self {
            GeometrySpec::Builtin { n, .. } => *n,
            GeometrySpec::Table(j) => j.n(),
        }
    }

    pub fn potential(&self, jet_order: i32) -> Result<PotentialJet, Error> {
        match self {
            GeometrySpec::Builtin { kind, n } => PotentialJet::builtin(*kind, *n, jet_order),
            GeometrySpec::Table(j) => PotentialJet::new(j.clone().with_order(jet_order)),
        }
    }

    pub fn is_flat(&self) -> bool {
        matches!(self, GeometrySpec::Builtin { kind: Builtin::Flat, .. })
    }
}

#[derive(Clone, Debug)]
pub struct Setup {
    pub geometry: GeometrySpec,
    pub alpha: Alpha,
    pub weight_cap: i32,
    pub jet_order: i32,
    pub hbar_order: i32,
    pub seed: u64,
    /// Number of random samples for randomized checks; `None` uses each check's default.
    pub samples: Option<usize>,
}

impl Setup {
    pub fn new(geometry: GeometrySpec, alpha: Alpha, weight_cap: i32, jet_order: i32) -> Self {
        Setup { geometry, alpha, weight_cap, jet_order, hbar_order: 3, seed: 0x5eed, samples: None }
    }

    pub fn builtin(kind: Builtin, n: usize, alpha: Alpha, weight_cap: i32, jet_order: i32) -> Self {
        Setup::new(GeometrySpec::Builtin { kind, n }, alpha, weight_cap, jet_order)
    }

    /// All caps raised by `by`.
    pub fn raised(&self, by: i32) -> Setup {
        Setup {
            weight_cap: self.weight_cap + by,
            jet_order: self.jet_order + by,
            hbar_order: self.hbar_order + by / 2,
            ..self.clone()
        }
    }

    fn samples_or(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }
}

/// Geometry and connection built once per setup.
pub struct Context {
    pub setup: Setup,
    pub geometry: KahlerData,
    pub connection: ConnectionData,
}

impl Context {
    pub fn new(setup: &Setup) -> Result<Self, Error> {
        let geometry = KahlerData::from_potential(&setup.geometry.potential(setup.jet_order)?)?;
        let connection = build_connection(&geometry, &setup.alpha, setup.weight_cap)?;
        Ok(Context { setup: setup.clone(), geometry, connection })
    }

    fn n(&self) -> usize {
        self.geometry.n
    }

    /// A context for the same geometry and caps with a different twist.
    fn with_alpha(&self, alpha: Alpha) -> Result<Context, Error> {
        if alpha == self.setup.alpha {
            return Ok(Context {
                setup: self.setup.clone(),
                geometry: self.geometry.clone(),
                connection: self.connection.clone(),
            });
        }
        Context::new(&Setup { alpha, ..self.setup.clone() })
    }

    fn rng(&self, id: &str) -> ChaCha8Rng {
        let h = id.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
        ChaCha8Rng::seed_from_u64(self.setup.seed ^ h)
    }
}

/// The result of one check.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: String,
    pub anchor: String,
    /// The smallest weight cap among the residuals.
    pub weight_cap: i32,
    /// The smallest jet cap among the residuals.
    pub jet_cap: i32,
    pub residual_terms: usize,
    pub residual_max_abs: BigRational,
    pub pass: bool,
    /// Named coefficients reported by the check, compared by the cap-stability rerun.
    pub values: BTreeMap<String, WeylForm>,
    pub notes: Vec<String>,
    pub seconds: f64,
}

impl Outcome {
    pub fn failure(id: &str, message: String) -> Outcome {
        Outcome {
            id: id.to_string(),
            anchor: anchor(id).unwrap_or("").to_string(),
            weight_cap: 0,
            jet_cap: 0,
            residual_terms: 0,
            residual_max_abs: BigRational::zero(),
            pass: false,
            values: BTreeMap::new(),
            notes: vec![message],
            seconds: 0.0,
        }
    }
}

struct Tally {
    weight_cap: i32,
    jet_cap: i32,
    terms: usize,
    max_abs: BigRational,
    ok: bool,
    values: BTreeMap<String, WeylForm>,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            weight_cap: EXACT,
            jet_cap: EXACT,
            terms: 0,
            max_abs: BigRational::zero(),
            ok: true,
            values: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    fn residual(&mut self, what: &str, r: &WeylForm) {
        self.weight_cap = self.weight_cap.min(r.weight_cap());
        self.jet_cap = self.jet_cap.min(r.jet_cap());
        if !r.is_zero() {
            self.terms += r.len();
            let m = r.max_abs();
            if m > self.max_abs {
                self.max_abs = m;
            }
            self.ok = false;
            self.notes.push(format!("{what}: {} nonzero terms", r.len()));
        }
    }

    /// A residual that must be known at least to weight `w`, or the check has no content.
    fn residual_at_least(&mut self, what: &str, r: &WeylForm, w: i32) {
        if r.weight_cap() < w {
            self.ok = false;
            self.notes.push(format!("{what}: known only to weight {} (< {w}); raise the caps", r.weight_cap()));
        }
        self.residual(what, r);
    }

    fn require(&mut self, cond: bool, what: &str) {
        if !cond {
            self.ok = false;
            self.notes.push(what.to_string());
        }
    }

    fn value(&mut self, name: impl Into<String>, w: WeylForm) {
        self.values.insert(name.into(), w);
    }

    fn finish(self, id: &str, seconds: f64) -> Outcome {
        Outcome {
            id: id.to_string(),
            anchor: anchor(id).unwrap_or("").to_string(),
            weight_cap: self.weight_cap,
            jet_cap: self.jet_cap,
            residual_terms: self.terms,
            residual_max_abs: self.max_abs,
            pass: self.ok,
            values: self.values,
            notes: self.notes,
            seconds,
        }
    }
}

pub struct CheckInfo {
    pub id: &'static str,
    pub anchor: &'static str,
    run: fn(&Context, &mut Tally) -> Result<(), Error>,
}

pub const CATALOG: &[CheckInfo] = &[
    CheckInfo { id: "fedosov_equation", anchor: "∇γ_α + (1/ħ)γ_α⋆γ_α + R_∇ = ω_ħ", run: fedosov_equation },
    CheckInfo { id: "fedosov_flatness", anchor: "D_F(D_F a) = 0 on random sections", run: fedosov_flatness },
    CheckInfo { id: "fedosov_extends_kapranov", anchor: "D_F a = D_K a for yb-free a", run: fedosov_extends_kapranov },
    CheckInfo {
        id: "flat_wick_product", anchor: "f⋆g = Σ (-ħ)^|I|/I! ∂^I f ∂̄^I g on the flat model", run: flat_wick_product
    },
    CheckInfo { id: "poisson_bracket", anchor: "f⋆g - g⋆f = ħ{f,g} + O(ħ²)", run: poisson_bracket },
    CheckInfo {
        id: "star_associativity", anchor: "(f⋆g)⋆h = f⋆(g⋆h) and O_{f⋆g} = O_f⋆O_g", run: star_associativity
    },
    CheckInfo {
        id: "quantum_section_holomorphic",
        anchor: "O_f = Σ_k (∇̃^{1,0})^k f for holomorphic f",
        run: quantum_section_holomorphic,
    },
    CheckInfo {
        id: "classical_section_components",
        anchor: "(J_f)_{1,k} = (∇̃^{0,1})^k ∇̃^{1,0} f, (J_f)_{k,1} = (∇̃^{1,0})^k ∇̃^{0,1} f",
        run: classical_section_components,
    },
    CheckInfo {
        id: "phi_omega_mixed_vanishing",
        anchor: "(Φ_ω)_{1,k} = (Φ_ω)_{k,1} = 0 for 2 ≤ k ≤ 4",
        run: phi_omega_mixed_vanishing,
    },
    CheckInfo { id: "phi_i_relation", anchor: "δ^{0,1}(Φ_ω)_{n,2} = (√-1/2) I_n", run: phi_i_relation },
    CheckInfo { id: "classical_quantum_gauge", anchor: "J_f e^{Φ/ħ} = e^{Φ/ħ} ⋆ O_f", run: classical_quantum_gauge },
    CheckInfo { id: "module_curvature", anchor: "D_α² = (1/ħ)ω_ħ - Ric", run: module_curvature },
    CheckInfo { id: "module_flatness", anchor: "D_{B,α}² = 0", run: module_flatness },
    CheckInfo { id: "action_compatibility", anchor: "D_B(O⊛s) = D_F(O)⊛s + O⊛D_B(s)", run: action_compatibility },
    CheckInfo {
        id: "action_representation",
        anchor: "(O_f⋆O_g)⊛s = O_f⊛(O_g⊛s), flat sections act on flat sections",
        run: action_representation,
    },
    CheckInfo {
        id: "gauge_identity_01",
        anchor: "(∇^{0,1} - δ^{0,1})(E⋆O⋆E⁻¹) = E⋆D_F^{0,1}(O)⋆E⁻¹, E = e^{Φ/ħ}",
        run: gauge_identity_01,
    },
    CheckInfo {
        id: "connection_intertwining",
        anchor: "D_C(A) e^{Φ/ħ} = e^{Φ/ħ} ⋆ D_F(A_q), A_q = E⁻¹⋆(A E)",
        run: connection_intertwining,
    },
    CheckInfo {
        id: "jalpha_closed_form", anchor: "(J_α)_n = -ħ Σ_i ∂_{y^i} R_{n+1}^i for α = -ħ Ric", run: jalpha_closed_form
    },
    CheckInfo { id: "beta_kapranov", anchor: "D_K β = g_{ij̄} dzb^j y^i - ∂ρ", run: beta_kapranov },
    CheckInfo { id: "vacuum_flatness", anchor: "D_B(A e^{-β/ħ} ⊗ e) = 0 iff D_K A = 0", run: vacuum_flatness },
    CheckInfo { id: "gaussian_orthonormality", anchor: "⟨y^a, y^b⟩ = δ_{ab} a! ħ^|a|", run: gaussian_orthonormality },
    CheckInfo { id: "toeplitz_ybar", anchor: "T_{yb} y^a = a ħ y^{a-1}", run: toeplitz_ybar },
    CheckInfo { id: "toeplitz_composition", anchor: "T_f ∘ T_g = T_{f⋆g}", run: toeplitz_composition },
    CheckInfo { id: "projection_idempotent", anchor: "π_φ∘π_φ = π_φ, π_φ(s) = s", run: projection_idempotent },
    CheckInfo {
        id: "normal_symbol_paths", anchor: "π_φ(f s) = O_f⊛s with f e^{φ/ħ} = e^{φ/ħ}⋆O_f", run: normal_symbol_paths
    },
    CheckInfo {
        id: "toeplitz_module_agreement",
        anchor: "O_f⊛(J_s e^{-β/ħ}⊗e) at x0 = T_{J_f,Φ}(J_s)",
        run: toeplitz_module_agreement,
    },
];

pub fn anchor(id: &str) -> Option<&'static str> {
    CATALOG.iter().find(|c| c.id == id).map(|c| c.anchor)
}

pub fn ids() -> impl Iterator<Item = &'static str> {
    CATALOG.iter().map(|c| c.id)
}

/// Runs one check; errors from the engine become failed outcomes.
pub fn run_check(id: &str, ctx: &Context) -> Outcome {
    let Some(info) = CATALOG.iter().find(|c| c.id == id) else {
        return Outcome::failure(id, format!("unknown check `{id}`"));
    };
    let t = Instant::now();
    let mut tally = Tally::new();
    match (info.run)(ctx, &mut tally) {
        Ok(()) => tally.finish(id, t.elapsed().as_secs_f64()),
        Err(e) => {
            let mut o = Outcome::failure(id, e.to_string());
            o.seconds = t.elapsed().as_secs_f64();
            o
        }
    }
}

/// Builds the context and runs `id`.
pub fn run(id: &str, setup: &Setup) -> Outcome {
    match Context::new(setup) {
        Ok(ctx) => run_check(id, &ctx),
        Err(e) => Outcome::failure(id, e.to_string()),
    }
}

/// Reruns `id` with all caps raised by `by` and compares every reported value
/// on the overlap of the two precision regions.
pub fn cap_stability(id: &str, setup: &Setup, by: i32) -> Outcome {
    let t = Instant::now();
    let a = run(id, setup);
    let b = run(id, &setup.raised(by));
    let mut tally = Tally::new();
    tally.require(a.pass, &format!("{id} fails at the base caps"));
    tally.require(b.pass, &format!("{id} fails at the raised caps"));
    tally.require(!a.values.is_empty(), &format!("{id} reports no values"));
    for (name, va) in &a.values {
        match b.values.get(name) {
            Some(vb) => tally.residual(name, &va.sub(vb)),
            None => tally.require(false, &format!("value {name} missing after raising caps")),
        }
    }
    let mut o = tally.finish(id, t.elapsed().as_secs_f64());
    o.anchor = format!("values of {id} unchanged with caps +{by}");
    o
}

// ---------------------------------------------------------------------------
// random inputs

fn small_scalar(rng: &mut ChaCha8Rng, complex: bool) -> Scalar {
    loop {
        let re = rng.gen_range(-3i64..=3);
        let im = if complex { rng.gen_range(-2i64..=2) } else { 0 };
        let s = Scalar::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()));
        if !s.is_zero() {
            return s;
        }
    }
}

fn random_index(rng: &mut ChaCha8Rng, n: usize, degree: u32) -> MultiIndex {
    let all = MultiIndex::all_of_degree(n, degree);
    all[rng.gen_range(0..all.len())]
}

/// A polynomial in `z, zb` of total degree at most `max_deg`.
pub fn random_polynomial(rng: &mut ChaCha8Rng, n: usize, max_deg: u32, terms: usize, complex: bool) -> JetPoly {
    let mut j = JetPoly::zero(n, EXACT);
    for _ in 0..terms {
        let d = rng.gen_range(0..=max_deg);
        let p = rng.gen_range(0..=d);
        let m = BaseMono { z: random_index(rng, n, p), zb: random_index(rng, n, d - p) };
        j.add_term(m, small_scalar(rng, complex));
    }
    j
}

/// Shape of a random Weyl section.
#[derive(Clone, Copy, Debug)]
pub struct SectionShape {
    pub max_weight: i32,
    pub max_base: u32,
    pub terms: usize,
    pub yb_free: bool,
    pub form_degree: u32,
}

pub fn random_section(rng: &mut ChaCha8Rng, n: usize, shape: SectionShape) -> WeylForm {
    let mut w = WeylForm::zero(n);
    for _ in 0..shape.terms {
        let weight = rng.gen_range(0..=shape.max_weight);
        let h = rng.gen_range(0..=weight / 2);
        let fiber = (weight - 2 * h) as u32;
        let p = if shape.yb_free { fiber } else { rng.gen_range(0..=fiber) };
        let mut form = Form::EMPTY;
        for _ in 0..shape.form_degree {
            let i = rng.gen_range(0..n);
            let e = if rng.gen_bool(0.5) { Form::dz(i) } else { Form::dzb(i) };
            if let Some((f, _)) = form.wedge(&e) {
                form = f;
            }
        }
        let key = Key { hbar: HalfInt::from_int(h), y: random_index(rng, n, p), yb: random_index(rng, n, fiber - p), form };
        let jet = random_polynomial(rng, n, shape.max_base, 2, true);
        w.add_term(key, jet);
    }
    w
}

// ---------------------------------------------------------------------------
// helpers

fn fn_of(j: JetPoly) -> WeylForm {
    WeylForm::from_jet(&j)
}

fn z(n: usize, i: usize) -> WeylForm {
    fn_of(JetPoly::z(n, i))
}

fn zb(n: usize, i: usize) -> WeylForm {
    fn_of(JetPoly::zb(n, i))
}

/// The polynomial inputs named by the criteria: `zzb`, `z²zb`, `z + zb`.
fn standard_functions(n: usize) -> Vec<(&'static str, WeylForm)> {
    let (a, b) = (z(n, 0), zb(n, 0));
    vec![("z1*zb1", a.mul(&b)), ("z1^2*zb1", a.mul(&a).mul(&b)), ("z1 + zb1", a.add(&b))]
}

fn hbar_part(a: &WeylForm, k: i32) -> WeylForm {
    a.filter(|key| key.hbar == HalfInt::from_int(k))
}

fn up_to_hbar(a: &WeylForm, k: i32) -> WeylForm {
    a.filter(|key| key.hbar <= HalfInt::from_int(k))
}

fn tilde(g: &KahlerData, a: &WeylForm, part: Part, k: usize) -> WeylForm {
    let mut t = a.clone();
    for _ in 0..k {
        let d = g.nabla(&t, part);
        t = match part {
            Part::Anti => delta_anti_inv(&d),
            _ => delta_holo_inv(&d),
        };
    }
    t
}

fn require_prequantum(ctx: &Context) -> Result<(), Error> {
    if ctx.setup.alpha != Alpha::MinusHbarRicci {
        return Err(Error::Config("this check needs alpha = minus-hbar-ricci".into()));
    }
    Ok(())
}

fn e_phi(c: &ConnectionData) -> Result<(WeylForm, WeylForm), Error> {
    let phi = phi_sections(c)?.phi;
    let e = star_exp(&phi, c.weight_cap)?;
    let inv = c.wick().star_inverse(&e, c.weight_cap)?;
    Ok((e, inv))
}

// ---------------------------------------------------------------------------
// Fedosov connection

fn fedosov_equation(ctx: &Context, t: &mut Tally) -> Result<(), Error> {
    let c = &ctx.connection;
    t.residual_at_least("residual", &c.fedosov_residual(), 2);
    t.value("gamma_alpha", c.gamma_alpha.clone());
    Ok(())
}

fn fedosov_flatness(ctx: &Context, t: &mut Tally) -> Result<(), Error> {
    let c = &ctx.connection;
    let mut rng = ctx.rng("fedosov_flatness");
    let shape = SectionShape { max_weight: 3, max_base: 2, terms: 3, yb_free: false, form_degree: 0 };
    for k in 0..ctx.setup.samples_or(20) {
        let a = random_section(&mut rng, ctx.n(), shape);
        t.residual_at_least(&format!("D_F² a#{k}"), &c.d_f(&c.d_f(&a)), 1);
    }
    Ok(())
}

fn fedosov_extends_kapranov(ctx: &Context, t: &mut Tally) -> Result<(), Error> {
    let c = &ctx.connection;
    let mut rng = ctx.rng("fedosov_extends_kapranov");
    let shape = SectionShape { max_weight: 3, max_base: 2, terms: 3, yb_free: true, form_degree: 0 };
    for k in 0..ctx.setup.samples_or(20) {
        let a = random_section(&mut rng, ctx.n(), shape);
        t.residual(&format!("a#{k}"), &c.d_f(&a).sub(&c.d_k(&a)));
        t.residual(&format!("literal a#{k}"), &c.d_f(&a).sub(&c.d_f_literal(&a)));
    }
    Ok(())
}

/// `Σ_I (-ħ)^{|I|}/I! ∂_z^I f ∂_zb^I g`, computed on polynomials directly.
pub fn flat_wick_oracle(f: &JetPoly, g: &JetPoly, max_order: u32) -> WeylForm {
    let n = f.n();
    let mut out = WeylForm::zero(n);
    for k in 0..=max_order {
        for idx in MultiIndex::all_of_degree(n, k) {
            let mut df = f.clone();
            let mut dg = g.clone();
            for i in 0..n {
                for _ in 0..idx.get(i) {
                    df = df.deriv_z(i);
                    dg = dg.deriv_zb(i);
                }
            }
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let c = Scalar::real(BigRational::new(sign.into(), idx.factorial()));
            let key = Key { hbar: HalfInt::from_int(k as i32), ..Key::ONE };
            out = out.add(&WeylForm::from_jet_at(key, &df.mul(&dg).scale(&c)));
        }
    }
    out
}

fn flat_wick_product(ctx: &Context, t: &mut Tally) -> Result<(), Error> {
    let n = ctx.n();
    let cap = ctx.setup.weight_cap;
    let flat = Context::new(&Setup {
        geometry: GeometrySpec::Builtin { kind: Builtin::Flat, n },
        alpha: Alpha::Zero,
        ..ctx.setup.clone()
    })?;
    let mut rng = ctx.rng("flat_wick_product");
    let half = ((cap - 1) / 2).max(1) as u32;
    for k in 0..ctx.setup.samples_or(50) {
        let da = rng.gen_range(0..=half);
        let db = rng.gen_range(0..=half);
        let mono = |rng: &mut ChaCha8Rng, d: u32| {
            let p = rng.gen_range(0..=d);
            JetPoly::monomial(n, EXACT, BaseMono { z: random_index(rng, n, p), zb: random_index(rng, n, d - p) }, Scalar::one())
        };
        let f = mono(&mut rng, da);
        let g = mono(&mut rng, db);
        let lhs = star_product(&fn_of(f.clone()), &fn_of(g.clone()), &flat.connection)?;
        t.residual_at_least(&format!("pair#{k} {f} ⋆ {g}"), &lhs.sub(&flat_wick_oracle(&f, &g, half * 2)), (da + db) as i32);
    }
    let (a, b) = (z(n, 0), zb(n, 0));
    let comm = star_product(&a, &b, &flat.connection)?.sub(&star_product(&b, &a, &flat.connection)?);
    t.residual("[z,zb] + ħ", &comm.add(&WeylForm::hbar(n)));
    t.value("z⋆zb", star_product(&a, &b, &flat.connection)?);
    Ok(())
}

/// `{f,g} = Σ g^{ij̄} (∂_{j̄}f ∂_i g - ∂_i f ∂_{j̄} g)`.
pub fn poisson(g: &KahlerData, f: &JetPoly, h: &JetPoly) -> JetPoly {
    let n = g.n;
    let mut out = JetPoly::zero(n, EXACT);
    for i in 0..n {
        for j in 0..n {
            let t = f.deriv_zb(j).mul(&h.deriv_z(i)).sub(&f.deriv_z(i).mul(&h.deriv_zb(j)));
            out = out.add(&t.mul(&g.inv_metric[i][j]));
        }
    }
    out
}

fn poisson_bracket(ctx: &Context, t: &mut Tally) -> Result<(), Error> {
    let c = &ctx.connection;
    let n = ctx.n();
    let mut rng = ctx.rng("poisson_bracket");
    let mut pairs: Vec<(JetPoly, JetPoly)> = vec![(JetPoly::z(n, 0), JetPoly::zb(n, 0))];
    for _ in 0..ctx.setup.samples_or(5) {
        pairs.push((random_polynomial(&mut rng, n, 2, 3, false), random_polynomial(&mut rng, n, 2, 3, false)));
    }
    for (k, (f, g)) in pairs.iter().enumerate() {
        let (wf, wg) = (fn_of(f.clone()), fn_of(g.clone()));
        let comm = star_product(&wf, &wg, c)?.sub(&star_product(&wg, &wf, c)?);
        t.residual(&format!("pair#{k} classical part"), &hbar_part(&comm, 0));
        let key = Key { hbar: HalfInt::from_int(1), ..Key::ONE };
        let expect = WeylForm::from_jet_at(key, &poisson(&ctx.geometry, f, g));
        t.residual_at_least(&format!("pair#{k} first order"), &hbar_part(&comm, 1).sub(&expect), 2);
    }
    Ok(())
}

fn star_associativity(ctx: &Context, t: &mut Tally) -> Result<(), Error> {
    let c = &ctx.connection;
    let n = ctx.n();
    let order = ctx.setup.hbar_order;
    let mut rng = ctx.rng("star_associativity");
    for k in 0..ctx.setup.samples_or(10) {
        let f = fn_of(random_polynomial(&mut rng, n, 2, 2, true));
        let g = fn_of(random_polynomial(&mut rng, n, 2, 2, true));
        let h = fn_of(random_polynomial(&mut rng, n, 2, 2, true));
        let left = star_product(&star_product(&f, &g, c)?, &h, c)?;
        let right = star_product(&f, &star_product(&g, &h, c)?, c)?;
        t.residual_at_least(&format!("triple#{k}"), &up_to_hbar(&left.sub(&right), order), 2);
        let of = quantum_flat_section(&f, c)?;
        let og = quantum_flat_section(&g, c)?;
        let ofg = quantum_flat_section(&star_product(&f, &g, c)?, c)?;
        t.residual(&format!("homomorphism#{k}"), &ofg.sub(&c.wick().star(&of, &og)));
    }
    Ok(())
}

fn quantum_section_holomorphic(ctx: &Context, t: &mut Tally) -> Result<(), Error> {
    let c = &ctx.connection;
    let n = ctx.n();
    let a = z(n, 0);
    for (name, f) in [("z1^2", a.mul(&a)), ("z1^3 + z1", a.mul(&a).mul(&a).add(&a)), ("1", WeylForm::one(n))] {
        let o = quantum_flat_section(&f, c)?;
        t.residual(name, &o.sub(&holomorphic_section(&f, c)));
        t.residual(&format!("D_K J_{name}"), &c.d_k(&o));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// classical sections and Φ

fn classical_section_components(ctx: &Context, t: &mut Tally) -> Result<(), Error> {
    let c = &ctx.connection;
    let g = &ctx.geometry;
    let n = ctx.n();
    let mut rng = ctx.rng("classical_section_components");
    let mut fs = vec![z(n, 0).mul(&zb(n, 0))];
    for _ in 0..ctx.setup.samples_or(2) {
        fs.push(fn_of(random_polynomial(&mut rng, n, 3, 3, true)));
    }
    for (m, f) in fs.iter().enumerate() {
        let j = classical_flat_section(f, c)?;
        t.residual(&format!("D_C J_f#{m}"), &c.d_c(&j));
        for k in 1..=3u32 {
            let a = j.fiber_part(1, k).sub(&tilde(g, &tilde(g, f, Part::Holo, 1), Part::Anti, k as usize));
            let b = j.fiber_part(k, 1).sub(&tilde(g, &tilde(g, f, Part::Anti, 1), Part::Holo, k as usize));
            t.residual_at_least(&format!("f#{m} (1,{k})"), &a, (k + 1) as i32);
            t.residual_at_least(&format!("f#{m} ({k},1)"), &b, (k + 1) as i32);
        }
        for k in 1..=3u32 {
            t.residual(&format!("f#{m} ({k},0)"), &j.fiber_part(k, 0).sub(&tilde(g, f, Part::Holo, k as usize)));
        }
    }
    Ok(())
}

fn phi_omega_mixed_vanishing(ctx: &Context, t: &mut Tally) -> Result<(), Error> {
    let ps = phi_sections(&ctx.connection)?;
    let quad = ctx.geometry.metric_quadratic();
    t.residual("(1,1) part", &ps.phi_omega.fiber_part(1, 1).sub(&quad.scale(&Scalar::imag_ratio(1, 2))));
    for k in 2..=4u32 {
        t.residual_at_least(&format!("(1,{k})"), &ps.phi_omega.fiber_part(1, k), (k + 1) as i32);
        t.residual_at_least(&format!("({k},1)"), &ps.phi_omega.fiber_part(k, 1), (k + 1) as i32);
    }
    Ok(())
}

fn phi_i_relation(ctx: &Context, t: &mut Tally) -> Result<(), Error> {
    let c = &ctx.connection;
    let ps = phi_sections(c)?;
    for deg in 2..=3usize {
        let lhs = delta_anti(&ps.phi_omega.fiber_part(deg as u32, 2));
        let i_n = c.i_n.get(&deg).cloned().unwrap_or_else(|| WeylForm::zero(ctx.n()));
        t.residual_at_least(&format!("n = {deg}"), &lhs.sub(&i_n.scale(&Scalar::imag_ratio(1, 2))), deg as i32 + 1);
    }
    Ok(())
}

fn classical_quantum_gauge(ctx: &Context, t: &mut Tally) -> Result<(), Error> {
    let c = &ctx.connection;
    let ps = phi_sections(c)?;
    t.require(ps.phi.min_weight() >= 3 || ps.phi.is_zero(), "Φ has a term of weight below 3");
    let e = star_exp(&ps.phi, c.weight_cap)?;
    for (name, f) in standard_functions(ctx.n()) {
        let j = classical_flat_section(&f, c)?;
        let o = quantum_flat_section(&f, c)?;
        t.residual_at_least(name, &j.mul(&e).sub(&c.wick().star(&e, &o)), 3);
    }
    t.value("Phi", ps.phi);
    Ok(())
}

// ---------------------------------------------------------------------------
// module

fn random_ext(rng: &mut ChaCha8Rng, c: &ConnectionData, form_degree: u32) -> ExtElt {
    let n = c.n();
    let shape = SectionShape { max_weight: 2, max_base: 2, terms: 3, yb_free: true, form_degree };
    let amp = random_section(rng, n, shape);
    let extra = random_section(rng, n, SectionShape { max_weight: 3, max_base: 1, terms: 2, yb_free: true, form_degree: 0 })
        .filter(|k| k.weight() >= 2)
        .mul(&zb(n, 0));
    let exponent = build_beta(c).neg().add(&extra);
    ExtElt::new(amp, exponent).expect("yb-free by construction")
}

fn module_curvature(ctx: &Context, t: &mut Tally) -> Result<(), Error> {
    let c = &ctx.connection;
    let mut rng = ctx.rng("module_curvature");
    let curv = c.omega_hbar.mul_hbar(-1).sub(&c.ricci_form());
    for k in 0..ctx.setup.samples_or(5) {
        let e = random_ext(&mut rng, c, 0);
        let d2 = apply_d_alpha(&apply_d_alpha(&e, c), c).amplitude;
        t.residual_at_least(&format!("t#{k}"), &d2.sub(&curv.mul_combined(&e.amplitude)), 0);
    }
    Ok(())
}

fn module_flatness(ctx: &Context, t: &mut Tally) -> Result<(), Error> {
    let c = &ctx.connection;
    let mut rng = ctx.rng("module_flatness");
    for k in 0..ctx.setup.samples_or(5) {
        let s = FockElt::canonical(random_ext(&mut rng, c, 0), c);
        t.residual_at_least(&format!("s#{k}"), &apply_d_b(&apply_d_b(&s, c), c).base.amplitude, 0);
    }
    let bad = FockElt {
        line_gauge: crate::fock::line_gauge(c).add(&zb(ctx.n(), 0).mul(&zb(ctx.n(), 0)).mul(&z(ctx.n(), 0))),
        ..FockElt::canonical(random_ext(&mut rng, c, 0), c)
    };
    t.require(crate::fock::check_gauge(&bad.line_gauge, c).is_err(), "corrupted gauge passes the gauge check");
    Ok(())
}

fn action_compatibility(ctx: &Context, t: &mut Tally) -> Result<(), Error> {
    let c = &ctx.connection;
    let g = &ctx.geometry;
    let mut rng = ctx.rng("action_compatibility");
    let shape = SectionShape { max_weight: 2, max_base: 2, terms: 3, yb_free: false, form_degree: 0 };
    for k in 0..ctx.setup.samples_or(10) {
        let o = random_section(&mut rng, ctx.n(), shape);
        let s = FockElt::canonical(random_ext(&mut rng, c, 0), c);
        let lhs = apply_d_b(&bf_action_fock(&o, &s, g), c).base.amplitude;
        let r1 = bf_action_fock(&c.d_f(&o), &s, g).base.amplitude;
        let r2 = bf_action_fock(&o, &apply_d_b(&s, c), g).base.amplitude;
        t.residual_at_least(&format!("pair#{k}"), &lhs.sub(&r1).sub(&r2), 0);
    }
    Ok(())
}

fn action_representation(ctx: &Context, t: &mut Tally) -> Result<(), Error> {
    require_prequantum(ctx)?;
    let c = &ctx.connection;
    let g = &ctx.geometry;
    let n = ctx.n();
    let mut rng = ctx.rng("action_representation");
    for k in 0..ctx.setup.samples_or(10) {
        let f = fn_of(random_polynomial(&mut rng, n, 2, 2, true));
        let h = fn_of(random_polynomial(&mut rng, n, 2, 2, true));
        let s = random_polynomial(&mut rng, n, 2, 2, true);
        let s = JetPoly::from_map(n, EXACT, s.iter().filter(|(m, _)| m.zb.is_zero()).map(|(m, c)| (*m, c.clone())).collect());
        let of = quantum_flat_section(&f, c)?;
        let oh = quantum_flat_section(&h, c)?;
        let vac = vacuum_section(holomorphic_section(&fn_of(s.clone()), c), c);
        let lhs = bf_action_fock(&c.wick().star(&of, &oh), &vac, g).base.amplitude;
        let rhs = bf_action_fock(&of, &bf_action_fock(&oh, &vac, g), g).base.amplitude;
        t.residual_at_least(&format!("triple#{k}"), &lhs.sub(&rhs), 1);
        let m = module_action(&f, &s.with_order(ctx.setup.jet_order), c)?;
        t.residual(&format!("flat output#{k}"), &m.residual);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// gauge equivalence

fn gauge_identity_01(ctx: &Context, t: &mut Tally) -> Result<(), Error> {
    let c = &ctx.connection;
    let g = &ctx.geometry;
    let w = c.wick();
    let (e, inv) = e_phi(c)?;
    t.residual("E⋆E⁻¹ - 1", &w.star(&e, &inv).sub(&WeylForm::one(ctx.n())));
    let mut rng = ctx.rng("gauge_identity_01");
    let shape = SectionShape { max_weight: 3, max_base: 2, terms: 3, yb_free: false, form_degree: 0 };
    for k in 0..ctx.setup.samples_or(10) {
        let o = random_section(&mut rng, ctx.n(), shape);
        let conj = w.star(&w.star(&e, &o), &inv);
        let lhs = g.nabla(&conj, Part::Anti).sub(&delta_anti(&conj));
        let rhs = w.star(&w.star(&e, &c.apply(&o, Connection::Fedosov, Part::Anti)), &inv);
        t.residual_at_least(&format!("O#{k}"), &lhs.sub(&rhs), 1);
    }
    Ok(())
}

fn connection_intertwining(ctx: &Context, t: &mut Tally) -> Result<(), Error> {
    let c = &ctx.connection;
    let w = c.wick();
    let (e, inv) = e_phi(c)?;
    let mut rng = ctx.rng("connection_intertwining");
    let shape = SectionShape { max_weight: 3, max_base: 2, terms: 3, yb_free: false, form_degree: 0 };
    for k in 0..ctx.setup.samples_or(10) {
        let a = random_section(&mut rng, ctx.n(), shape);
        let aq = w.star(&inv, &a.mul(&e));
        t.residual_at_least(&format!("A#{k}"), &c.d_c(&a).mul(&e).sub(&w.star(&e, &c.d_f(&aq))), 1);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// prequantum data

fn jalpha_closed_form(ctx: &Context, t: &mut Tally) -> Result<(), Error> {
    require_prequantum(ctx)?;
    let c = &ctx.connection;
    for deg in 1..=3usize {
        let j = c.j_alpha_n.get(&deg).cloned().unwrap_or_else(|| WeylForm::zero(ctx.n()));
        t.residual(&format!("n = {deg}"), &j.sub(&c.j_alpha_closed_form(deg)));
    }
    let zero = ctx.with_alpha(Alpha::Zero)?;
    let trivial = (1..=3).all(|d| zero.connection.j_alpha_closed_form(d).is_zero());
    if !trivial {
        let differs = (1..=3usize).any(|d| {
            let j = zero.connection.j_alpha_n.get(&d).cloned().unwrap_or_else(|| WeylForm::zero(ctx.n()));
            !j.sub(&zero.connection.j_alpha_closed_form(d)).is_zero()
        });
        t.require(differs, "closed form also matches for alpha = 0");
    }
    Ok(())
}

fn beta_kapranov(ctx: &Context, t: &mut Tally) -> Result<(), Error> {
    let c = &ctx.connection;
    let g = &ctx.geometry;
    let n = ctx.n();
    let beta = build_beta(c);
    t.require(beta.eval_at_zero().is_zero(), "β does not vanish at the basepoint");
    let mut expect = del(&WeylForm::from_jet(g.potential.rho())).neg();
    for i in 0..n {
        for j in 0..n {
            expect = expect.add(&WeylForm::y(n, i).wedge_left(Form::dzb(j)).mul_jet(&g.metric[i][j]));
        }
    }
    t.residual_at_least("D_K β", &c.d_k(&beta).sub(&expect), 1);
    t.value("beta", beta);
    Ok(())
}

fn vacuum_flatness(ctx: &Context, t: &mut Tally) -> Result<(), Error> {
    require_prequantum(ctx)?;
    let c = &ctx.connection;
    let n = ctx.n();
    let mut rng = ctx.rng("vacuum_flatness");
    t.residual_at_least("e^{-β/ħ}", &apply_d_b(&vacuum_section(WeylForm::one(n), c), c).base.amplitude, 1);
    for k in 0..ctx.setup.samples_or(3) {
        let s = random_polynomial(&mut rng, n, 3, 3, true);
        let s = JetPoly::from_map(n, EXACT, s.iter().filter(|(m, _)| m.zb.is_zero()).map(|(m, c)| (*m, c.clone())).collect());
        let a = holomorphic_section(&fn_of(s), c);
        t.residual(&format!("D_K J_s#{k}"), &c.d_k(&a));
        t.residual_at_least(&format!("J_s#{k}"), &apply_d_b(&vacuum_section(a, c), c).base.amplitude, 1);
    }
    let not_flat = apply_d_b(&vacuum_section(WeylForm::y(n, 0), c), c).base.amplitude;
    t.require(!not_flat.is_zero(), "y e^{-β/ħ} is flat");
    let wrong = FockElt::canonical(ExtElt::new(WeylForm::one(n), build_beta(c))?, c);
    t.require(!apply_d_b(&wrong, c).base.amplitude.is_zero(), "e^{+β/ħ} is flat");
    Ok(())
}

// ---------------------------------------------------------------------------
// Toeplitz layer

fn y_pow(n: usize, a: u8) -> WeylForm {
    let mut idx = [0u8; crate::algebra::MAX_DIM];
    idx[0] = a;
    WeylForm::monomial(n, Key { y: MultiIndex::from_slice(&idx[..n]), ..Key::ONE }, Scalar::one())
}

fn yb_pow(n: usize, a: u8) -> WeylForm {
    y_pow(n, a).conj()
}

fn gaussian_orthonormality(ctx: &Context, t: &mut Tally) -> Result<(), Error> {
    let n = ctx.n();
    let free = Interaction::zero(n);
    for a in 0..=4u8 {
        for b in 0..=4u8 {
            let ip = formal_inner_product(&y_pow(n, a), &y_pow(n, b), &free)?;
            let expect = if a == b {
                let key = Key { hbar: HalfInt::from_int(a as i32), ..Key::ONE };
                WeylForm::monomial(n, key, Scalar::real(BigRational::from_integer(crate::algebra::scalar::factorial(a as u32))))
            } else {
                WeylForm::zero(n)
            };
            t.residual(&format!("<y^{a}, y^{b}>"), &ip.sub(&expect));
        }
    }
    let c = Scalar::from_ratio(1, 3);
    let phi = Interaction::new(&y_pow(n, 2).mul(&yb_pow(n, 2)).scale(&c), 6)?;
    let one = formal_inner_product(&WeylForm::one(n), &WeylForm::one(n), &phi)?;
    let first = WeylForm::one(n).add(&WeylForm::hbar(n).scale(&Scalar::from_ratio(2, 3)));
    t.residual("one vertex", &up_to_hbar(&one, 1).sub(&first));
    let more = formal_inner_product_vertices(&WeylForm::one(n), &WeylForm::one(n), &phi, phi.vertex_bound() + 1)?;
    t.residual("vertex bound stable", &one.sub(&more));
    let brute = gaussian_moment(&star_exp(phi.phi(), phi.cap())?)?;
    t.residual("against the exponential", &one.sub(&brute));
    Ok(())
}

fn toeplitz_ybar(ctx: &Context, t: &mut Tally) -> Result<(), Error> {
    let n = ctx.n();
    let free = Interaction::zero(n);
    for a in 0..=5u8 {
        let out = toeplitz_apply(&yb_pow(n, 1), &FockSeries::from_weyl(&y_pow(n, a))?, &free)?;
        let expect = if a == 0 { WeylForm::zero(n) } else { y_pow(n, a - 1).mul_hbar(1).scale_int(a as i64) };
        t.residual(&format!("T_yb y^{a}"), &out.to_weyl().sub(&expect));
        let one = toeplitz_apply(&WeylForm::one(n), &FockSeries::from_weyl(&y_pow(n, a))?, &free)?;
        t.residual(&format!("T_1 y^{a}"), &one.to_weyl().sub(&y_pow(n, a)));
    }
    let p = projection(&y_pow(n, 1).mul(&yb_pow(n, 1)), &free)?;
    t.residual("π(y yb)", &p.to_weyl().sub(&WeylForm::hbar(n)));
    Ok(())
}

fn monomials_up_to(n: usize, max_weight: u32) -> Vec<WeylForm> {
    let mut out = Vec::new();
    for w in 0..=max_weight {
        for p in 0..=w {
            for a in MultiIndex::all_of_degree(n, p) {
                for b in MultiIndex::all_of_degree(n, w - p) {
                    out.push(WeylForm::monomial(n, Key { y: a, yb: b, ..Key::ONE }, Scalar::one()));
                }
            }
        }
    }
    out
}

fn toeplitz_composition(ctx: &Context, t: &mut Tally) -> Result<(), Error> {
    let n = ctx.n();
    let free = Interaction::zero(n);
    let wick = Wick::flat(n);
    let order = ctx.setup.hbar_order;
    let monos: Vec<WeylForm> = monomials_up_to(n, 4).into_iter().filter(|m| m.min_weight() <= 4).collect();
    let mut rng = ctx.rng("toeplitz_composition");
    let pairs = ctx.setup.samples_or(20);
    for k in 0..pairs {
        let f = &monos[rng.gen_range(0..monos.len())];
        let g = &monos[rng.gen_range(0..monos.len())];
        let fg = wick.star(f, g);
        for a in 0..=2u8 {
            let s = FockSeries::from_weyl(&y_pow(n, a))?;
            let lhs = toeplitz_apply(f, &toeplitz_apply(g, &s, &free)?, &free)?;
            let rhs = toeplitz_apply(&fg, &s, &free)?;
            t.residual(&format!("pair#{k} s = y^{a}"), &up_to_hbar(&lhs.to_weyl().sub(&rhs.to_weyl()), order));
        }
    }
    Ok(())
}

fn projection_idempotent(ctx: &Context, t: &mut Tally) -> Result<(), Error> {
    let n = ctx.n();
    let mut rng = ctx.rng("projection_idempotent");
    let phi = Interaction::new(
        &y_pow(n, 2)
            .mul(&yb_pow(n, 1))
            .add(&y_pow(n, 1).mul(&yb_pow(n, 2)))
            .add(&y_pow(n, 2).mul(&yb_pow(n, 2)).scale(&Scalar::from_ratio(1, 3))),
        7,
    )?;
    for (name, phi) in [("free", Interaction::zero(n)), ("cubic", phi)] {
        for k in 0..ctx.setup.samples_or(5) {
            let f = random_section(
                &mut rng,
                n,
                SectionShape { max_weight: 3, max_base: 0, terms: 3, yb_free: false, form_degree: 0 },
            );
            let p = projection(&f, &phi)?;
            let pp = projection(&p.to_weyl(), &phi)?;
            t.residual(&format!("{name} f#{k}"), &pp.to_weyl().sub(&p.to_weyl()));
            for a in 0..=2u8 {
                let lhs = formal_inner_product(&p.to_weyl(), &y_pow(n, a), &phi)?;
                let rhs = formal_inner_product(&f, &y_pow(n, a), &phi)?;
                t.residual(&format!("{name} f#{k} defining equation y^{a}"), &lhs.sub(&rhs));
            }
        }
    }
    Ok(())
}

fn normal_symbol_paths(ctx: &Context, t: &mut Tally) -> Result<(), Error> {
    let n = ctx.n();
    let wick = Wick::flat(n);
    let mut rng = ctx.rng("normal_symbol_paths");
    let mut phis = vec![Interaction::zero(n)];
    for _ in 0..3 {
        let p =
            random_section(&mut rng, n, SectionShape { max_weight: 4, max_base: 0, terms: 3, yb_free: false, form_degree: 0 })
                .filter(|k| k.weight() >= 3);
        phis.push(Interaction::new(&p, ctx.setup.weight_cap)?);
    }
    let lead = Interaction::new(&y_pow(n, 2).mul(&yb_pow(n, 2)).scale(&Scalar::from_ratio(1, 2)), ctx.setup.weight_cap)?;
    let f = y_pow(n, 2).mul(&yb_pow(n, 1));
    let o = normal_symbol(&f, &lead, &wick)?;
    t.residual("leading term of O_{y²yb}", &o.weight_part(3).sub(&f));
    for (m, phi) in phis.iter().enumerate() {
        for k in 0..ctx.setup.samples_or(4) {
            let f = random_section(
                &mut rng,
                n,
                SectionShape { max_weight: 3, max_base: 0, terms: 2, yb_free: false, form_degree: 0 },
            );
            let o = normal_symbol(&f, phi, &wick)?;
            if m == 0 {
                t.residual(&format!("O_f = f for φ = 0, f#{k}"), &o.sub(&evaluate(&f)));
            }
            for a in 0..=2u8 {
                let s = FockSeries::from_weyl(&y_pow(n, a))?;
                let lhs = toeplitz_apply(&f, &s, phi)?;
                let rhs = fock_action(&o, &s, &wick)?;
                t.residual(&format!("φ#{m} f#{k} s = y^{a}"), &lhs.to_weyl().sub(&rhs.to_weyl()));
            }
        }
    }
    Ok(())
}

fn evaluate(a: &WeylForm) -> WeylForm {
    a.eval_at_zero()
}

fn toeplitz_module_agreement(ctx: &Context, t: &mut Tally) -> Result<(), Error> {
    require_prequantum(ctx)?;
    let c = &ctx.connection;
    let n = ctx.n();
    let (a, b) = (z(n, 0), zb(n, 0));
    let zzb = a.mul(&b);
    let cases = vec![("z1*zb1", zzb.clone()), ("z1^2*zb1^2", zzb.mul(&zzb)), ("z1*zb1^2", zzb.mul(&b)), ("z1", a.clone())];
    let one = JetPoly::one(n).with_order(ctx.setup.jet_order);
    for (name, f) in cases {
        let m = module_action(&f, &one, c)?;
        t.residual(&format!("{name}: output flat"), &m.residual);
        let lhs = m.amplitude.eval_at_zero();
        let rhs = toeplitz_at_basepoint(&f, &WeylForm::one(n), c)?;
        t.residual_at_least(&format!("{name}: s = 1"), &lhs.sub(&rhs.to_weyl()), 4);
        t.value(format!("s' for {name}"), m.s_prime.eval_at_zero());
    }
    if ctx.setup.geometry.is_flat() {
        let m = module_action(&zzb, &one, c)?;
        t.residual("flat: s' = ħ", &m.s_prime.sub(&WeylForm::hbar(n)));
    }
    let s = fn_of(JetPoly::z(n, 0));
    let m = module_action(&zzb, &JetPoly::z(n, 0).with_order(ctx.setup.jet_order), c)?;
    let rhs = toeplitz_at_basepoint(&zzb, &s, c)?;
    t.residual_at_least("z1*zb1: s = z1", &m.amplitude.eval_at_zero().sub(&rhs.to_weyl()), 3);
    Ok(())
}

/// The sign and normalization conventions the checks assume. Reports carry a
/// hash of these lines so results from different conventions are never mixed.
pub const CONVENTIONS: &[&str] = &[
    "metric g_{ij̄} = ∂_i∂_{j̄}ρ, ω = (√-1/2) g",
    "Wick contraction c^{ij̄} = -g^{ij̄}, so y⋆yb = y yb - ħ on the flat model",
    "log h = log(det g / det g(0))",
    "vacuum section e^{-β/ħ} ⊗ e with D_K β = g_{ij̄} dzb^j y^i - ∂ρ",
    "line gauge f_L = -(ρ + φ_α + ħ log h)",
    "δ^{-1} vanishes on fiber-degree zero",
    "Gaussian functional normalized so that ⟨1,1⟩ = 1",
    "module products use the combined cap min(weight cap, jet cap)",
    "fiber monomial y^A yb^B acts on Fock space as yb^B ⋆ y^A",
];
