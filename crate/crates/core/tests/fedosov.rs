use kahlerq::checks::{random_polynomial, random_section, Context, GeometrySpec, SectionShape, Setup};
use kahlerq::fedosov::{
    classical_flat_section, delta, delta_anti, delta_holo, delta_holo_inv, delta_inv, phi_sections, quantum_flat_section,
    star_product, Alpha,
};
use kahlerq::geometry::Builtin;
use kahlerq::{Form, HalfInt, JetPoly, Key, MultiIndex, Scalar, WeylForm};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ctx(kind: Builtin, n: usize, alpha: Alpha, w: i32, j: i32) -> Context {
    Context::new(&Setup::builtin(kind, n, alpha, w, j)).unwrap()
}

fn f(j: JetPoly) -> WeylForm {
    WeylForm::from_jet(&j)
}

fn z(n: usize) -> WeylForm {
    f(JetPoly::z(n, 0))
}

fn zb(n: usize) -> WeylForm {
    f(JetPoly::zb(n, 0))
}

fn y2() -> WeylForm {
    WeylForm::y(1, 0).mul(&WeylForm::y(1, 0))
}

#[test]
fn delta_examples() {
    let y = WeylForm::y(1, 0);
    let dz = WeylForm::dz(1, 0);
    assert!(delta_holo(&y2()).sub(&y.mul(&dz).scale_int(2)).is_zero());
    let y_dz = y.mul(&dz);
    let inv = delta_holo_inv(&y_dz);
    assert!(inv.sub(&y2().scale(&Scalar::from_ratio(1, 2))).is_zero());
    // δ δ^{-1} + δ^{-1} δ = id on this element
    assert!(delta_holo(&inv).add(&delta_holo_inv(&delta_holo(&y_dz))).sub(&y_dz).is_zero());
    let holo = f(JetPoly::z(1, 0).pow(3));
    assert!(delta_anti(&holo).is_zero());
    assert!(delta_anti(&holo.mul(&WeylForm::y(1, 0))).is_zero());
}

#[test]
fn delta_hodge_decomposition_on_random_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for deg in 0..=2 {
        for _ in 0..10 {
            let shape = SectionShape { max_weight: 4, max_base: 2, terms: 4, yb_free: false, form_degree: deg };
            let a = random_section(&mut rng, 2, shape);
            let pi0 = a.filter(|k| k.form.degree() == 0 && k.y.is_zero() && k.yb.is_zero());
            let lhs = delta(&delta_inv(&a)).add(&delta_inv(&delta(&a)));
            assert!(lhs.add(&pi0).sub(&a).is_zero());
            assert!(delta(&delta(&a)).is_zero());
        }
    }
}

#[test]
fn kapranov_tensors() {
    let flat = ctx(Builtin::Flat, 2, Alpha::Zero, 6, 8);
    assert!(flat.connection.kapranov.total().iter().all(|c| c.is_zero()));
    assert!(flat.connection.i_total.is_zero());

    let fs = ctx(Builtin::FubiniStudy, 1, Alpha::Zero, 6, 8);
    let k = &fs.connection.kapranov;
    let key = Key { y: MultiIndex::from_slice(&[2]), form: Form::dzb(0), ..Key::ONE };
    let r = &fs.geometry.curvature[0][0][0][0];
    let raw = k.get(2).unwrap()[0].coeff(&key);
    assert!(raw.sub(&r.scale(&Scalar::from_ratio(1, 2))).truncate(4).is_zero());
    // ∇R = 0 on a symmetric space, so the recursion stops after degree 2
    assert!(k.comps.iter().filter(|(d, _)| **d > 2).all(|(_, c)| c.iter().all(|w| w.is_zero())));

    let s = JetPoly::z(1, 0).mul(&JetPoly::zb(1, 0));
    let rho = s.add(&s.pow(2).scale(&Scalar::from_ratio(-1, 4))).add(&s.pow(3).scale(&Scalar::from_ratio(1, 5)));
    let generic = Context::new(&Setup::new(GeometrySpec::Table(rho), Alpha::Zero, 6, 8)).unwrap();
    let r3 = &generic.connection.kapranov.get(3).unwrap()[0];
    assert!(!r3.is_zero());
}

#[test]
fn kapranov_connection_is_flat() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let s = JetPoly::z(1, 0).mul(&JetPoly::zb(1, 0));
    let rho = s.add(&s.pow(2).scale(&Scalar::from_ratio(-1, 4))).add(&s.pow(3).scale(&Scalar::from_ratio(1, 5)));
    let geometries = [
        GeometrySpec::Builtin { kind: Builtin::FubiniStudy, n: 1 },
        GeometrySpec::Builtin { kind: Builtin::Hyperbolic, n: 1 },
        GeometrySpec::Table(rho),
    ];
    for kind in geometries {
        let c = Context::new(&Setup::new(kind.clone(), Alpha::Zero, 6, 8)).unwrap();
        for _ in 0..4 {
            let shape = SectionShape { max_weight: 3, max_base: 2, terms: 3, yb_free: true, form_degree: 0 };
            let a = random_section(&mut rng, 1, shape).with_caps(6, 8);
            let r = c.connection.d_k(&c.connection.d_k(&a));
            assert!(r.filter(|k| k.weight() <= 2).is_zero(), "{kind:?}: {r}");
        }
    }
}

#[test]
fn connection_assembly_on_flat_space() {
    let c = ctx(Builtin::Flat, 1, Alpha::Zero, 6, 8).connection;
    assert!(c.i_alpha.is_zero());
    assert!(c.gamma_alpha.sub(&c.gamma0).is_zero());
    assert!(c.gamma0.iter().all(|(k, _)| k.weight() == 1 && k.form.degree() == 1));
    assert!(c.fedosov_residual().is_zero());
}

#[test]
fn fedosov_equation_and_mutation() {
    for alpha in [Alpha::Zero, Alpha::MinusHbarRicci] {
        let c = ctx(Builtin::FubiniStudy, 1, alpha.clone(), 6, 8).connection;
        assert!(c.fedosov_residual().is_zero(), "{alpha:?}");
        let mut bad = c.clone();
        let kick = WeylForm::y(1, 0).mul(&WeylForm::dzb(1, 0)).mul_hbar(1);
        bad.gamma_alpha = bad.gamma_alpha.add(&kick);
        assert!(!bad.fedosov_residual().is_zero());
    }
}

#[test]
fn fedosov_equation_generic_two_dimensional_potential() {
    let s = (0..2).fold(JetPoly::zero(2, kahlerq::EXACT), |a, i| a.add(&JetPoly::z(2, i).mul(&JetPoly::zb(2, i))));
    let mut rho = s.add(&s.pow(2).scale(&Scalar::from_ratio(-1, 4)));
    rho.add_term(
        kahlerq::BaseMono { z: MultiIndex::from_slice(&[2, 0]), zb: MultiIndex::from_slice(&[1, 1]) },
        Scalar::from_ratio(1, 3),
    );
    rho.add_term(
        kahlerq::BaseMono { z: MultiIndex::from_slice(&[1, 1]), zb: MultiIndex::from_slice(&[2, 0]) },
        Scalar::from_ratio(1, 3),
    );
    let setup = Setup::new(GeometrySpec::Table(rho), Alpha::MinusHbarRicci, 4, 6);
    let c = Context::new(&setup).unwrap().connection;
    assert!(!c.i_total.is_zero());
    assert!(c.fedosov_residual().is_zero());
}

#[test]
fn connection_examples() {
    let fs = ctx(Builtin::FubiniStudy, 1, Alpha::Zero, 6, 8);
    let c = &fs.connection;
    let j = classical_flat_section(&f(JetPoly::z(1, 0).pow(2)), c).unwrap();
    assert!(!j.has_yb());
    assert!(c.d_k(&j).is_zero());
    assert!(c.d_c(&WeylForm::one(1)).is_zero());
    let flat = ctx(Builtin::Flat, 1, Alpha::Zero, 6, 8);
    assert!(flat.connection.d_f(&z(1).add(&WeylForm::y(1, 0))).is_zero());
    assert!(flat.connection.d_f_literal(&z(1).add(&WeylForm::y(1, 0))).is_zero());
    assert!(!flat.connection.d_f(&z(1)).is_zero());
}

#[test]
fn flat_sections_on_flat_space_are_taylor_expansions() {
    let c = ctx(Builtin::Flat, 1, Alpha::Zero, 6, 8).connection;
    let zzb = z(1).mul(&zb(1));
    let (y, yb) = (WeylForm::y(1, 0), WeylForm::yb(1, 0));
    // (z + y)(zb + yb)
    let taylor = z(1).add(&y).mul(&zb(1).add(&yb));
    let o = quantum_flat_section(&zzb, &c).unwrap();
    assert!(o.sub(&taylor).is_zero());
    assert!(classical_flat_section(&zzb, &c).unwrap().sub(&taylor).is_zero());
    assert!(quantum_flat_section(&WeylForm::one(1), &c).unwrap().sub(&WeylForm::one(1)).is_zero());
    assert!(classical_flat_section(&WeylForm::one(1), &c).unwrap().sub(&WeylForm::one(1)).is_zero());
    assert!(quantum_flat_section(&WeylForm::dz(1, 0), &c).is_err());
}

#[test]
fn holomorphic_functions_have_no_quantum_corrections() {
    for kind in [Builtin::FubiniStudy, Builtin::Hyperbolic] {
        let c = ctx(kind, 1, Alpha::Zero, 6, 8).connection;
        let g = f(JetPoly::z(1, 0).pow(2).add(&JetPoly::z(1, 0).scale(&Scalar::i())));
        let o = quantum_flat_section(&g, &c).unwrap();
        let j = classical_flat_section(&g, &c).unwrap();
        assert!(o.sub(&j).is_zero());
        assert!(!o.has_yb());
        assert!(o.iter().all(|(k, _)| k.hbar == HalfInt::from_int(0)));
    }
}

#[test]
fn star_product_examples() {
    let flat = ctx(Builtin::Flat, 1, Alpha::Zero, 6, 8).connection;
    let zzb = z(1).mul(&zb(1));
    assert!(star_product(&z(1), &zb(1), &flat).unwrap().sub(&zzb.sub(&WeylForm::hbar(1))).is_zero());
    assert!(star_product(&zb(1), &z(1), &flat).unwrap().sub(&zzb).is_zero());
    for kind in [Builtin::Flat, Builtin::FubiniStudy] {
        let c = ctx(kind, 1, Alpha::Zero, 6, 8).connection;
        let g = zzb.add(&z(1).mul(&z(1)).mul_hbar(1));
        assert!(star_product(&g, &WeylForm::one(1), &c).unwrap().sub(&g).is_zero());
        assert!(star_product(&WeylForm::one(1), &g, &c).unwrap().sub(&g).is_zero());
    }
    // holomorphic on the left, antiholomorphic on the right: plain product
    let fs = ctx(Builtin::FubiniStudy, 1, Alpha::Zero, 6, 8).connection;
    assert!(star_product(&zb(1), &z(1), &fs).unwrap().sub(&zzb).is_zero());
}

#[test]
fn phi_sections_on_flat_space() {
    let c = ctx(Builtin::Flat, 1, Alpha::Zero, 6, 8).connection;
    let ps = phi_sections(&c).unwrap();
    let yyb = WeylForm::y(1, 0).mul(&WeylForm::yb(1, 0));
    assert!(ps.phi_omega.sub(&yyb.scale(&Scalar::imag_ratio(1, 2))).is_zero());
    assert!(ps.phi.is_zero());
    assert!(ps.phi_alpha.is_zero());
}

#[test]
fn phi_has_weight_at_least_three() {
    let c = ctx(Builtin::FubiniStudy, 1, Alpha::MinusHbarRicci, 6, 8).connection;
    let ps = phi_sections(&c).unwrap();
    assert!(!ps.phi.is_zero());
    assert!(ps.phi.min_weight() >= 3);
    for k in 2..=4u8 {
        let one_k = Key { y: MultiIndex::from_slice(&[1]), yb: MultiIndex::from_slice(&[k]), ..Key::ONE };
        let k_one = Key { y: MultiIndex::from_slice(&[k]), yb: MultiIndex::from_slice(&[1]), ..Key::ONE };
        assert!(ps.phi_omega.coeff(&one_k).is_zero() && ps.phi_omega.coeff(&k_one).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn flat_sections_round_trip(seed in any::<u64>(), prequantum in any::<bool>()) {
        let alpha = if prequantum { Alpha::MinusHbarRicci } else { Alpha::Zero };
        let c = ctx(Builtin::FubiniStudy, 1, alpha, 5, 7).connection;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = f(random_polynomial(&mut rng, 1, 3, 3, true));
        let o = quantum_flat_section(&g, &c).unwrap();
        prop_assert!(o.symbol().unwrap().sub(&g).is_zero());
        let back = quantum_flat_section(&o.symbol().unwrap(), &c).unwrap();
        prop_assert!(back.sub(&o).is_zero());
        prop_assert!(c.d_f(&o).filter(|k| k.weight() <= 2).is_zero());
        let j = classical_flat_section(&g, &c).unwrap();
        prop_assert!(c.d_c(&j).filter(|k| k.weight() <= 2).is_zero());
    }
}
