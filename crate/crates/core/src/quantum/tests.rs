use proptest::prelude::*;

use super::modes::sugawara_charge_from_modes;
use super::*;
use crate::liealg;

fn l(gen: usize, t: u32) -> VaExpr {
    VaExpr::letter(Letter { gen, t })
}

fn lam(pairs: &[(u32, VaExpr)]) -> VaLambda {
    entry(pairs)
}

#[test]
fn translation_basics() {
    let v = free_boson();
    let a = l(0, 0);
    assert!(v.t(&VaExpr::vac()).is_zero());
    let aa = v.no(&a, &a);
    assert_eq!(v.t(&aa), v.no(&a, &l(0, 1)).scale(&Coeff::int(2)));
    assert_eq!(v.display(&aa, Style::Text), ":a a:");
    assert_eq!(v.display(&v.t(&aa), Style::Text), "2*:a T(a):");
}

#[test]
fn free_boson_virasoro() {
    let v = free_boson();
    let a = l(0, 0);
    let big_l = v.no(&a, &a).scale(&Coeff::ratio(1, 2));
    assert_eq!(v.bracket(&a, &big_l), lam(&[(1, a.clone())]));
    assert!(v.primary_residual(&big_l, &a, &Coeff::one()).is_zero());
    let form = v.virasoro_extract(&big_l);
    assert!(form.is_virasoro);
    assert_eq!(form.c, Some(Coeff::one()));
    assert_eq!(
        v.display_lambda(&form.bracket, Style::Text),
        "1/12*l^3*vac + l*:a a: + :a T(a):"
    );
    assert!(!v.virasoro_extract(&a).is_virasoro);
}

#[test]
fn quasiassociativity_example() {
    let v = free_boson();
    let a = l(0, 0);
    let aa = v.no(&a, &a);
    let lhs = v.no(&aa, &a).sub(&v.no(&a, &aa));
    assert_eq!(lhs, l(0, 2));
    assert_eq!(v.no(&a, &VaExpr::vac()), a);
    assert_eq!(v.no(&VaExpr::vac(), &a), a);
    let ta = l(0, 1);
    assert_eq!(v.no(&ta, &a).add(&v.no(&a, &ta)), v.t(&aa));
}

#[test]
fn free_fermion_basics() {
    let v = free_fermion();
    let phi = l(0, 0);
    assert_eq!(v.bracket(&phi, &phi), VaLambda::constant(VaExpr::vac()));
    assert!(v.no(&phi, &phi).is_zero());
    assert!(v.check_skewsymmetry().is_empty());
    let big_l = v.no(&l(0, 1), &phi).scale(&Coeff::ratio(1, 2));
    let form = v.virasoro_extract(&big_l);
    assert!(form.is_virasoro);
    assert_eq!(form.c, Some(Coeff::ratio(1, 2)));
}

#[test]
fn bundled_tables_are_lcas() {
    let c = Coeff::param("c");
    let k = Coeff::param("k");
    for lca in [
        virasoro(&c),
        free_boson(),
        free_fermion(),
        current(&liealg::sl2(), &k),
    ] {
        assert!(lca.check_skewsymmetry().is_empty(), "{:?}", lca.names);
        assert!(lca.check_jacobi().is_empty(), "{:?}", lca.names);
    }
}

#[test]
fn sugawara_sl2() {
    let k = Coeff::param("k");
    let alg = liealg::sl2();
    let (lca, big_l) = sugawara(&alg, &k).unwrap();
    for g in 0..3 {
        let a = VaExpr::gen(g);
        assert!(lca.primary_residual(&big_l, &a, &Coeff::one()).is_zero());
    }
    let form = lca.virasoro_extract(&big_l);
    assert!(form.is_virasoro, "{}", lca.display_lambda(&form.residual, Style::Text));
    let c = form.c.unwrap();
    let want = (&k * &Coeff::int(3)).checked_div(&(&k + &Coeff::int(2))).unwrap();
    assert_eq!(c, want);
    let one = Coeff::one();
    let c1 = c.substitute("k", &one).unwrap();
    assert_eq!(sugawara_charge_from_modes(&alg, &one).unwrap(), c1);
}

#[test]
fn abelian_sugawara_is_free_boson() {
    let (lca, big_l) = sugawara(&liealg::abelian1(), &Coeff::one()).unwrap();
    let a = VaExpr::gen(0);
    assert_eq!(big_l, lca.no(&a, &a).scale(&Coeff::ratio(1, 2)));
}

#[test]
fn mode_oracle_free_boson_level() {
    // abelian at level 1: c = 1
    assert_eq!(
        sugawara_charge_from_modes(&liealg::abelian1(), &Coeff::one()).unwrap(),
        Coeff::one()
    );
}

#[test]
fn virasoro_grading() {
    let v = virasoro(&Coeff::param("c"));
    let big_l = VaExpr::gen(0);
    let ll = v.no(&big_l, &big_l);
    assert!(v.grading_failures(&big_l, &ll).unwrap().is_empty());
    assert!(v.grading_failures(&ll, &ll).unwrap().is_empty());
}

fn arb_boson_expr() -> impl Strategy<Value = VaExpr> {
    let letter = (0u32..3).prop_map(|t| l(0, t));
    prop::collection::vec((prop::collection::vec(letter, 1..3), -3i64..4), 1..3).prop_map(|ws| {
        let v = free_boson();
        ws.into_iter().fold(VaExpr::zero(), |acc, (w, c)| {
            let p = w.iter().skip(1).fold(w[0].clone(), |x, y| v.no(&x, y));
            acc.add(&p.scale(&Coeff::int(c)))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn boson_skew_and_quasicommutativity(a in arb_boson_expr(), b in arb_boson_expr()) {
        let v = free_boson();
        prop_assert!(v.skew_residual(&a, &b).is_zero());
        prop_assert!(v.quasicommutativity_residual(&a, &b).is_zero());
    }

    #[test]
    fn boson_jacobi(a in arb_boson_expr(), b in arb_boson_expr(), c in arb_boson_expr()) {
        let v = free_boson();
        prop_assert!(v.jacobi_residual(&a, &b, &c).is_empty());
    }

    #[test]
    fn boson_grading(a in arb_boson_expr(), b in arb_boson_expr()) {
        let v = free_boson();
        if let (Some(_), Some(_)) = (v.weight(&a), v.weight(&b)) {
            prop_assert!(v.grading_failures(&a, &b).unwrap().is_empty());
        }
    }
}
