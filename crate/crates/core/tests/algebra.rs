use kahlerq::algebra::star_exp;
use kahlerq::geometry::{Builtin, KahlerData, PotentialJet};
use kahlerq::{BaseMono, Form, HalfInt, JetPoly, Key, MultiIndex, Scalar, WeylForm, Wick, EXACT};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn q(p: i64, d: i64) -> Scalar {
    Scalar::from_ratio(p, d)
}

fn mono(n: usize, h: i32, y: &[u8], yb: &[u8]) -> WeylForm {
    let key = Key { hbar: HalfInt::from_int(h), y: MultiIndex::from_slice(y), yb: MultiIndex::from_slice(yb), form: Form::EMPTY };
    WeylForm::monomial(n, key, Scalar::one())
}

fn fs_wick() -> Wick {
    let g = KahlerData::from_potential(&PotentialJet::builtin(Builtin::FubiniStudy, 1, 6).unwrap()).unwrap();
    g.wick().clone()
}

#[test]
fn jet_examples() {
    let z = JetPoly::z(1, 0);
    let zb = JetPoly::zb(1, 0);
    assert!(z.mul(&JetPoly::zero(1, EXACT)).is_zero());
    let s = z.add(&zb).with_order(2);
    let sq = s.mul(&s);
    let expect = z.mul(&z).add(&z.mul(&zb).scale(&Scalar::from_int(2))).add(&zb.mul(&zb));
    assert_eq!(sq.sub(&expect.with_order(2)), JetPoly::zero(1, 2));
    let one_plus = JetPoly::one(1).add(&z.mul(&zb)).with_order(4);
    let inv = one_plus.invert().unwrap();
    let zz = z.mul(&zb);
    let expect = JetPoly::one(1).sub(&zz).add(&zz.mul(&zz)).with_order(4);
    assert!(inv.sub(&expect).is_zero());
    assert!(one_plus.mul(&inv).sub(&JetPoly::one(1).with_order(4)).is_zero());
    let two = JetPoly::constant(1, EXACT, Scalar::from_int(2));
    assert_eq!(two.invert().unwrap(), JetPoly::constant(1, EXACT, q(1, 2)));
    assert!(JetPoly::zero(1, 4).invert().is_err());
}

#[test]
fn classical_product_examples() {
    let y = WeylForm::y(1, 0);
    let yb = WeylForm::yb(1, 0);
    assert_eq!(y.mul(&yb), mono(1, 0, &[1], &[1]));
    let a = y.wedge_left(Form::dz(0));
    let b = yb.wedge_left(Form::dzb(0));
    assert_eq!(a.mul(&b), b.mul(&a).neg());
    let r = WeylForm::one(1).mul(&a);
    assert_eq!(r, a);
}

#[test]
fn flat_wick_examples() {
    let w = Wick::flat(1);
    let (y, yb) = (WeylForm::y(1, 0), WeylForm::yb(1, 0));
    assert_eq!(w.star(&y, &yb), y.mul(&yb).sub(&WeylForm::hbar(1)));
    assert_eq!(w.star(&yb, &y), y.mul(&yb));
    assert_eq!(w.commutator(&y, &yb), WeylForm::hbar(1).neg());
    let a = mono(1, 1, &[2], &[1]).add(&yb);
    assert!(w.commutator(&a, &a).is_zero());
    assert!(w.commutator(&WeylForm::one(1), &a).is_zero());
    assert_eq!(w.star(&WeylForm::one(1), &a), a);
}

#[test]
fn symbol_and_conjugation_examples() {
    let n = 1;
    let f = WeylForm::from_jet(&JetPoly::z(n, 0).mul(&JetPoly::zb(n, 0)));
    let g = WeylForm::y(n, 0).mul(&WeylForm::from_jet(&JetPoly::z(n, 0)));
    assert_eq!(f.add(&g).symbol().unwrap(), f);
    let hf = f.mul_hbar(1);
    assert_eq!(hf.symbol().unwrap(), hf);
    assert!(WeylForm::zero(n).symbol().unwrap().is_zero());
    assert_eq!(WeylForm::y(n, 0).conj(), WeylForm::yb(n, 0));
    let iz = WeylForm::from_jet(&JetPoly::z(n, 0)).scale(&Scalar::i());
    assert_eq!(iz.conj(), WeylForm::from_jet(&JetPoly::zb(n, 0)).scale(&Scalar::i()).neg());
}

#[test]
fn star_exp_examples() {
    let n = 1;
    assert!(star_exp(&WeylForm::zero(n), 8).unwrap().sub(&WeylForm::one(n)).is_zero());
    let c = q(1, 3);
    let phi = mono(n, 0, &[2], &[2]).scale(&c);
    let e = star_exp(&phi, 8).unwrap();
    // term by term: Σ_k c^k y^{2k} yb^{2k} / (k! ħ^k)
    let mut expect = WeylForm::zero(n);
    let mut ck = Scalar::one();
    for k in 0..=4u8 {
        expect = expect.add(&mono(n, -(k as i32), &[2 * k], &[2 * k]).scale(&ck));
        ck = &(&ck * &c) * &q(1, k as i64 + 1);
    }
    assert!(e.sub(&expect).filter(|k| k.weight() <= 7).is_zero());
    let w = Wick::flat(n);
    let inv = w.star_inverse(&e, 8).unwrap();
    assert!(w.star(&inv, &e).sub(&WeylForm::one(n)).is_zero());
    assert!(w.star_inverse(&WeylForm::one(n), 8).unwrap().sub(&WeylForm::one(n)).is_zero());
    let one_y = WeylForm::one(n).add(&WeylForm::y(n, 0));
    let inv = w.star_inverse(&one_y, 5).unwrap();
    let mut expect = WeylForm::zero(n);
    for k in 0..=5u8 {
        expect = expect.add(&mono(n, 0, &[k], &[0]).scale(&Scalar::from_int(if k % 2 == 0 { 1 } else { -1 })));
    }
    assert!(inv.sub(&expect).is_zero());
    assert!(star_exp(&WeylForm::y(n, 0).mul(&WeylForm::yb(n, 0)), 6).is_err());
}

/// Brute-force symbol of `y^a yb^b ⋆ y^c yb^d` at the origin for constant
/// contraction `c = -1`: count the perfect matchings between the `yb` of the
/// right factor and the `y` of the left factor, leaving nothing behind.
fn matchings_at_origin(a: u32, b: u32, c: u32, d: u32) -> WeylForm {
    // all of a's y must pair with d's yb, and nothing else can remain
    if b != 0 || c != 0 || a != d {
        return WeylForm::zero(1);
    }
    let k = a;
    let ways: BigInt = (1..=k).map(BigInt::from).product();
    let sign = if k.is_multiple_of(2) { 1 } else { -1 };
    mono(1, k as i32, &[0], &[0]).scale(&Scalar::real(BigRational::from_integer(ways * sign)))
}

#[test]
fn origin_symbol_against_matchings() {
    let w = Wick::flat(1);
    for a in 0..4u8 {
        for b in 0..2u8 {
            for c in 0..2u8 {
                for d in 0..4u8 {
                    let l = mono(1, 0, &[a], &[b]);
                    let r = mono(1, 0, &[c], &[d]);
                    let at0 = w.star(&l, &r).filter(|k| k.y.is_zero() && k.yb.is_zero());
                    assert_eq!(at0, matchings_at_origin(a as u32, b as u32, c as u32, d as u32), "{a} {b} {c} {d}");
                }
            }
        }
    }
}

fn element(n: usize, cap: i32) -> impl Strategy<Value = WeylForm> {
    let term = (0i32..2, prop::collection::vec(0u8..3, n), prop::collection::vec(0u8..3, n), 0u8..2, 0u8..2, -3i64..4, -2i64..3);
    prop::collection::vec(term, 1..4).prop_map(move |ts| {
        let mut w = WeylForm::new(n, cap, EXACT);
        for (h, y, yb, zd, zbd, re, im) in ts {
            let key = Key {
                hbar: HalfInt::from_int(h),
                y: MultiIndex::from_slice(&y),
                yb: MultiIndex::from_slice(&yb),
                form: Form::EMPTY,
            };
            let m = BaseMono { z: MultiIndex::from_slice(&[zd]), zb: MultiIndex::from_slice(&[zbd]) };
            let c = Scalar::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()));
            w.add_term(key, JetPoly::monomial(n, EXACT, m, c));
        }
        w.truncate_weight(cap)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn flat_star_is_associative(a in element(2, 6), b in element(2, 6), c in element(2, 6)) {
        let w = Wick::flat(2);
        prop_assert_eq!(w.star(&w.star(&a, &b), &c), w.star(&a, &w.star(&b, &c)));
    }

    #[test]
    fn curved_star_is_associative(a in element(1, 6), b in element(1, 6), c in element(1, 6)) {
        let w = fs_wick();
        prop_assert_eq!(w.star(&w.star(&a, &b), &c), w.star(&a, &w.star(&b, &c)));
    }

    #[test]
    fn conjugation_reverses_products(a in element(1, 6), b in element(1, 6)) {
        let w = fs_wick();
        prop_assert_eq!(w.star(&a, &b).conj(), w.star(&b.conj(), &a.conj()));
        prop_assert_eq!(a.conj().conj(), a);
    }

    #[test]
    fn star_terms_keep_weight(a in element(1, 6), b in element(1, 6)) {
        // each contraction trades y·yb for ħ, so total weight is additive termwise
        let w = Wick::flat(1);
        let p = w.star(&a, &b);
        let lowest = a.min_weight() + b.min_weight();
        prop_assert!(p.is_zero() || p.min_weight() >= lowest);
    }

    #[test]
    fn exponential_is_invertible(c2 in -3i64..4, c3 in -3i64..4, d in 1i64..4) {
        let n = 1;
        let phi = mono(n, 0, &[2], &[1]).scale(&q(c2, d)).add(&mono(n, 0, &[1], &[2]).scale(&q(c2, d)))
            .add(&mono(n, 0, &[2], &[2]).scale(&q(c3, d)));
        let e = star_exp(&phi, 7).unwrap();
        let w = fs_wick();
        let inv = w.star_inverse(&e, 7).unwrap();
        prop_assert!(w.star(&e, &inv).sub(&WeylForm::one(n)).is_zero());
        prop_assert!(w.star(&inv, &e).sub(&WeylForm::one(n)).is_zero());
    }
}
