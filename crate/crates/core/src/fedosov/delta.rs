//! The fiberwise de Rham operator `δ`, its adjoints and normalized inverses.

use crate::algebra::index::Form;
use crate::algebra::scalar::Scalar;
use crate::algebra::weyl::WeylForm;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaOp {
    Holo,
    Anti,
    Full,
    HoloStar,
    AntiStar,
    FullStar,
    HoloInverse,
    AntiInverse,
    FullInverse,
}

/// `δ^{1,0} a = dz^i ∧ ∂a/∂y^i`.
pub fn delta_holo(a: &WeylForm) -> WeylForm {
    let n = a.n();
    let mut out = WeylForm::new(n, crate::algebra::prec::shift(a.weight_cap(), -1), crate::algebra::prec::shift(a.jet_cap(), -1));
    for i in 0..n {
        out = out.add(&a.d_y(i).wedge_left(Form::dz(i)));
    }
    out
}

/// `δ^{0,1} a = dzb^j ∧ ∂a/∂yb^j`.
pub fn delta_anti(a: &WeylForm) -> WeylForm {
    let n = a.n();
    let mut out = WeylForm::new(n, crate::algebra::prec::shift(a.weight_cap(), -1), crate::algebra::prec::shift(a.jet_cap(), -1));
    for i in 0..n {
        out = out.add(&a.d_yb(i).wedge_left(Form::dzb(i)));
    }
    out
}

pub fn delta(a: &WeylForm) -> WeylForm {
    delta_holo(a).add(&delta_anti(a))
}

/// `(δ^{1,0})^* a = y^i ι_{∂/∂z^i} a`.
pub fn delta_holo_star(a: &WeylForm) -> WeylForm {
    let n = a.n();
    let mut out = WeylForm::new(n, crate::algebra::prec::shift(a.weight_cap(), 1), crate::algebra::prec::shift(a.jet_cap(), 1));
    for i in 0..n {
        out = out.add(&a.contract(i, false).mul(&WeylForm::y(n, i)));
    }
    out
}

/// `(δ^{0,1})^* a = yb^j ι_{∂/∂zb^j} a`.
pub fn delta_anti_star(a: &WeylForm) -> WeylForm {
    let n = a.n();
    let mut out = WeylForm::new(n, crate::algebra::prec::shift(a.weight_cap(), 1), crate::algebra::prec::shift(a.jet_cap(), 1));
    for i in 0..n {
        out = out.add(&a.contract(i, true).mul(&WeylForm::yb(n, i)));
    }
    out
}

pub fn delta_star(a: &WeylForm) -> WeylForm {
    delta_holo_star(a).add(&delta_anti_star(a))
}

/// Applies `op` to each term and divides by `norm(term)`; terms with zero
/// normalization are sent to zero.
fn normalized(a: &WeylForm, op: fn(&WeylForm) -> WeylForm, norm: impl Fn(&crate::algebra::weyl::Key) -> u32) -> WeylForm {
    let mut groups: std::collections::BTreeMap<u32, WeylForm> = std::collections::BTreeMap::new();
    for (k, j) in a.iter() {
        let d = norm(k);
        if d == 0 {
            continue;
        }
        groups.entry(d).or_insert_with(|| WeylForm::new(a.n(), a.weight_cap(), a.jet_cap())).add_term(*k, j.clone());
    }
    let mut out = op(&WeylForm::new(a.n(), a.weight_cap(), a.jet_cap()));
    for (d, part) in groups {
        out = out.add(&op(&part).scale(&Scalar::from_ratio(1, d as i64)));
    }
    out
}

/// `(δ^{1,0})^{-1} = (δ^{1,0})^* / (p1 + p2)` on forms of holomorphic degree
/// `p1` with `|y| = p2`.
pub fn delta_holo_inv(a: &WeylForm) -> WeylForm {
    normalized(a, delta_holo_star, |k| k.form.holo_degree() + k.y.degree())
}

/// `(δ^{0,1})^{-1} = (δ^{0,1})^* / (q1 + q2)`.
pub fn delta_anti_inv(a: &WeylForm) -> WeylForm {
    normalized(a, delta_anti_star, |k| k.form.anti_degree() + k.yb.degree())
}

/// `δ^{-1} = δ^* / (p + q)` with `p` the form degree and `q` the fiber degree;
/// zero on the `p + q = 0` part.
pub fn delta_inv(a: &WeylForm) -> WeylForm {
    normalized(a, delta_star, |k| k.form.degree() + k.y.degree() + k.yb.degree())
}

pub fn delta_family(a: &WeylForm, op: DeltaOp) -> WeylForm {
    match op {
        DeltaOp::Holo => delta_holo(a),
        DeltaOp::Anti => delta_anti(a),
        DeltaOp::Full => delta(a),
        DeltaOp::HoloStar => delta_holo_star(a),
        DeltaOp::AntiStar => delta_anti_star(a),
        DeltaOp::FullStar => delta_star(a),
        DeltaOp::HoloInverse => delta_holo_inv(a),
        DeltaOp::AntiInverse => delta_anti_inv(a),
        DeltaOp::FullInverse => delta_inv(a),
    }
}
