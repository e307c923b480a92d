//! Variational calculus on P_ℓ: variational and Fréchet derivatives, the
//! Helmholtz criterion, homotopy reconstruction of densities, the quotient
//! V/∂V and evolutionary vector fields.

use std::collections::BTreeMap;

use crate::coeff::Coeff;
use crate::diffalg::{DerivVar, DiffOp, DiffPoly, Monomial};
use crate::error::{Error, Result};
use crate::syntax::Names;

/// A vector of ℓ differential polynomials.
pub type Characteristic = Vec<DiffPoly>;

/// δf/δu_i = Σ_n (−∂)^n ∂f/∂u_i^(n).
pub fn variational_derivative(f: &DiffPoly, ngens: usize) -> Characteristic {
    let mut out = vec![DiffPoly::zero(); ngens];
    let vars = f.vars();
    for (gen, slot) in out.iter_mut().enumerate() {
        let Some(top) = vars.iter().filter(|v| v.gen == gen).map(|v| v.order).max() else {
            continue;
        };
        // Horner: Σ_n (−∂)^n p_n = p_0 − ∂(p_1 − ∂(p_2 − …))
        let mut acc = DiffPoly::zero();
        for n in (0..=top).rev() {
            let p = f.partial(DerivVar::new(gen, n));
            acc = &p - &acc.derivative();
        }
        *slot = acc;
    }
    out
}

/// (D_F)_{ij} = Σ_n ∂F_i/∂u_j^(n) ∂^n.
pub fn frechet_derivative(f: &[DiffPoly], ngens: usize) -> DiffOp {
    let mut op = DiffOp::zero(f.len(), ngens);
    for (i, fi) in f.iter().enumerate() {
        for v in fi.vars() {
            let mut e = op.get(i, v.gen).clone();
            e.add_at(v.order, &fi.partial(v));
            op.set(i, v.gen, e);
        }
    }
    op
}

/// D_F − D_F*, zero exactly when F is closed.
pub fn closedness_defect(f: &[DiffPoly]) -> DiffOp {
    let d = frechet_derivative(f, f.len());
    d.sub(&d.adjoint()).expect("square operator")
}

/// Helmholtz criterion: D_F selfadjoint.
pub fn is_closed(f: &[DiffPoly]) -> bool {
    closedness_defect(f).is_zero()
}

/// Reconstruct a density h with δh/δu = ξ via h = Δ⁻¹(u·ξ).
///
/// A constant component ξ_i = c contributes c·u_i, which is what Δ⁻¹ does
/// to the degree-1 monomial c·u_i.
pub fn homotopy_integrate(xi: &[DiffPoly]) -> Result<DiffPoly> {
    let defect = closedness_defect(xi);
    if !defect.is_zero() {
        return Err(Error::NotClosed(
            Names::generic(xi.len()).op_matrix(&defect),
        ));
    }
    let mut h = DiffPoly::zero();
    for (i, x) in xi.iter().enumerate() {
        let ux = x.mul_monomial(&Monomial::var(DerivVar::new(i, 0)), &Coeff::one());
        for (m, c) in ux.terms() {
            h.add_term(m.clone(), &(c / &Coeff::int(m.degree() as i64)));
        }
    }
    Ok(h)
}

fn antiderivative_in(f: &DiffPoly, v: DerivVar) -> DiffPoly {
    let mut out = DiffPoly::zero();
    for (m, c) in f.terms() {
        let e = m.exponent(v) as i64;
        out.add_term(m.mul_var(v), &(c / &Coeff::int(e + 1)));
    }
    out
}

/// A witness g with ∂g = f and zero constant term, if one exists.
///
/// Works from the top derivative order down: an element of Im ∂ of order N
/// is affine in the variables u_i^(N), and the coefficient of u_i^(N) is
/// ∂g/∂u_i^(N−1), which is integrated in u_i^(N−1) and subtracted.
pub fn is_total_derivative(f: &DiffPoly) -> Option<DiffPoly> {
    if !f.constant_term().is_zero() {
        return None;
    }
    let mut rest = f.clone();
    let mut g = DiffPoly::zero();
    while let Some(top) = rest.max_order() {
        if top == 0 {
            return None;
        }
        let gens: Vec<usize> = rest
            .vars()
            .iter()
            .filter(|v| v.order == top)
            .map(|v| v.gen)
            .collect();
        for gen in gens {
            let v = DerivVar::new(gen, top);
            let a = rest.partial(v);
            if a.vars().iter().any(|w| w.order == top) {
                return None;
            }
            if a.is_zero() {
                continue;
            }
            let piece = antiderivative_in(&a, DerivVar::new(gen, top - 1));
            rest -= &piece.derivative();
            g += &piece;
        }
        if rest.max_order().is_some_and(|o| o >= top) {
            return None;
        }
    }
    if rest.is_zero() && g.derivative() == *f {
        Some(g)
    } else {
        None
    }
}

/// ∫f ∈ V/∂V, stored through a canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunctionalClass {
    rep: DiffPoly,
}

impl FunctionalClass {
    pub fn new(f: &DiffPoly, ngens: usize) -> Self {
        FunctionalClass {
            rep: reduce_mod_image(f, ngens),
        }
    }

    pub fn zero() -> Self {
        FunctionalClass {
            rep: DiffPoly::zero(),
        }
    }

    pub fn rep(&self) -> &DiffPoly {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
}

/// ∫f = 0 in V/∂V: δf/δu = 0 and no constant term.
pub fn is_zero_functional(f: &DiffPoly, ngens: usize) -> bool {
    f.constant_term().is_zero() && variational_derivative(f, ngens).iter().all(DiffPoly::is_zero)
}

/// All monomials in `ngens` generators with the given multidegree and weight.
fn monomials_of(multideg: &[u32], weight: u32) -> Vec<Monomial> {
    fn orders(count: u32, weight: u32, max: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if count == 0 {
            if weight == 0 {
                out.push(acc.clone());
            }
            return;
        }
        for o in (0..=max.min(weight)).rev() {
            if o * count < weight {
                break;
            }
            acc.push(o);
            orders(count - 1, weight - o, o, acc, out);
            acc.pop();
        }
    }
    let mut result = vec![(Vec::new(), weight)];
    for (gen, &d) in multideg.iter().enumerate() {
        let mut next = Vec::new();
        for (factors, left) in &result {
            for w in 0..=*left {
                let mut parts = Vec::new();
                orders(d, w, w, &mut Vec::new(), &mut parts);
                for p in parts {
                    let mut f: Vec<(DerivVar, u32)> = factors.clone();
                    f.extend(p.into_iter().map(|o| (DerivVar::new(gen, o), 1)));
                    next.push((f, left - w));
                }
            }
        }
        result = next;
    }
    result
        .into_iter()
        .filter(|(_, left)| *left == 0)
        .map(|(f, _)| Monomial::from_factors(f))
        .collect()
}

/// Canonical representative of f mod ∂V: within each component of fixed
/// multidegree and weight, reduce fully against an echelon basis of the
/// image of ∂, pivoting on the greatest monomial.
pub fn reduce_mod_image(f: &DiffPoly, ngens: usize) -> DiffPoly {
    let mut comps: BTreeMap<(Vec<u32>, u32), DiffPoly> = BTreeMap::new();
    for (m, c) in f.terms() {
        let key = (m.multidegree(ngens), m.weight());
        comps.entry(key).or_default().add_term(m.clone(), c);
    }
    let mut out = DiffPoly::zero();
    for ((multideg, weight), comp) in comps {
        if weight == 0 || multideg.iter().all(|d| *d == 0) {
            out += &comp;
            continue;
        }
        let rows: Vec<DiffPoly> = monomials_of(&multideg, weight - 1)
            .into_iter()
            .map(|m| DiffPoly::term(m, Coeff::one()).derivative())
            .collect();
        let basis = echelon(rows);
        let mut rem = comp;
        loop {
            let hit = rem
                .terms()
                .rev()
                .find_map(|(m, c)| basis.get(m).map(|row| (c.clone(), row)));
            match hit {
                Some((c, row)) => rem -= &row.scale(&c),
                None => break,
            }
        }
        out += &rem;
    }
    out
}

/// Echelon basis keyed by pivot (greatest monomial), each row monic.
fn echelon(rows: Vec<DiffPoly>) -> BTreeMap<Monomial, DiffPoly> {
    let mut basis: BTreeMap<Monomial, DiffPoly> = BTreeMap::new();
    for mut r in rows {
        loop {
            let hit = r
                .terms()
                .rev()
                .find_map(|(m, c)| basis.get(m).map(|row| (c.clone(), row)));
            match hit {
                Some((c, row)) => r -= &row.scale(&c),
                None => break,
            }
        }
        if let Some((m, c)) = r.leading() {
            let (m, inv) = (m.clone(), c.inv().expect("nonzero"));
            let r = r.scale(&inv);
            // keep earlier rows free of the new pivot
            for row in basis.values_mut() {
                let k = row.coeff_of(&m);
                if !k.is_zero() {
                    *row -= &r.scale(&k);
                }
            }
            basis.insert(m, r);
        }
    }
    basis
}

/// X_P f = Σ_{i,n} (∂^n P_i) ∂f/∂u_i^(n).
pub fn evol_apply(p: &[DiffPoly], f: &DiffPoly) -> DiffPoly {
    let mut out = DiffPoly::zero();
    let mut ders: BTreeMap<DerivVar, DiffPoly> = BTreeMap::new();
    for v in f.vars() {
        if v.gen >= p.len() {
            continue;
        }
        let d = ders
            .entry(v)
            .or_insert_with(|| p[v.gen].derivative_n(v.order));
        out += &(&*d * &f.partial(v));
    }
    out
}

/// [F, G] = X_F G − X_G F.
pub fn evol_bracket(f: &[DiffPoly], g: &[DiffPoly]) -> Characteristic {
    f.iter()
        .zip(g)
        .map(|(fi, gi)| &evol_apply(f, gi) - &evol_apply(g, fi))
        .collect()
}

/// The density Σ_i a_i b_i of the pairing ⟨a, b⟩.
pub fn pairing(a: &[DiffPoly], b: &[DiffPoly]) -> DiffPoly {
    a.iter()
        .zip(b)
        .fold(DiffPoly::zero(), |acc, (x, y)| &acc + &(x * y))
}

/// D_F(G), computed as X_G applied componentwise to F.
pub fn directional_derivative(f: &[DiffPoly], g: &[DiffPoly]) -> Characteristic {
    f.iter().map(|fi| evol_apply(g, fi)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffalg::OpEntry;
    use crate::diffalg::testgen::arb_poly;
    use crate::diffalg::u;
    use proptest::prelude::*;

    fn c() -> Coeff {
        Coeff::param("c")
    }
    fn q(n: i64, d: i64) -> Coeff {
        Coeff::ratio(n, d)
    }

    fn xi2() -> DiffPoly {
        &u(0, 0).pow(2).scale(&q(3, 2)) + &u(0, 2).scale(&c())
    }

    fn h2() -> DiffPoly {
        (&u(0, 0).pow(3) + &(&u(0, 0) * &u(0, 2)).scale(&c())).scale(&q(1, 2))
    }

    fn xi3() -> DiffPoly {
        let x = u(0, 0);
        let c2 = &c() * &c();
        &(&(&x.pow(3).scale(&q(5, 2)) + &(&x * &u(0, 2)).scale(&(&c() * &Coeff::int(5))))
            + &u(0, 1).pow(2).scale(&(&c() * &q(5, 2))))
            + &u(0, 4).scale(&c2)
    }

    #[test]
    fn variational_examples() {
        let half_sq = u(0, 0).pow(2).scale(&q(1, 2));
        assert_eq!(variational_derivative(&half_sq, 1), vec![u(0, 0)]);
        assert_eq!(variational_derivative(&h2(), 1), vec![xi2()]);
    }

    #[test]
    fn frechet_examples() {
        assert_eq!(frechet_derivative(&[u(0, 0)], 1), DiffOp::identity(1));
        let mut e = OpEntry::mult(u(0, 0).scale(&Coeff::int(3)));
        e.add_at(2, &DiffPoly::constant(c()));
        assert_eq!(frechet_derivative(&[xi2()], 1), DiffOp::scalar(e));
        assert_eq!(frechet_derivative(&[u(0, 1)], 1), DiffOp::scalar(OpEntry::d(1)));
    }

    #[test]
    fn closedness() {
        assert!(is_closed(&[u(0, 0)]));
        assert!(!is_closed(&[u(0, 1)]));
        assert!(is_closed(&[xi3()]));
    }

    #[test]
    fn homotopy_examples() {
        assert_eq!(homotopy_integrate(&[u(0, 0)]).unwrap(), u(0, 0).pow(2).scale(&q(1, 2)));
        assert_eq!(homotopy_integrate(&[xi2()]).unwrap(), h2());
        assert_eq!(homotopy_integrate(&[DiffPoly::one()]).unwrap(), u(0, 0));
        assert!(matches!(homotopy_integrate(&[u(0, 1)]), Err(Error::NotClosed(_))));
    }

    #[test]
    fn total_derivative_witnesses() {
        let f = &u(0, 0) * &u(0, 1);
        assert_eq!(is_total_derivative(&f), Some(u(0, 0).pow(2).scale(&q(1, 2))));
        let eq1 = &(&u(0, 0) * &u(0, 1)).scale(&Coeff::int(3)) + &u(0, 3).scale(&c());
        assert_eq!(is_total_derivative(&eq1), Some(xi2()));
        assert_eq!(is_total_derivative(&u(0, 0).pow(2)), None);
    }

    #[test]
    fn evol_examples() {
        let f = &u(0, 0).pow(2) * &u(0, 2);
        assert_eq!(evol_apply(&[u(0, 1)], &f), f.derivative());
        assert_eq!(evol_apply(&[u(0, 2)], &u(0, 0)), u(0, 2));
        // X_{u u'} (u² u') = (u·u²)' u'² + u·u² u''
        let lhs = evol_apply(&[&u(0, 0) * &u(0, 1)], &(&u(0, 0).pow(2) * &u(0, 1)));
        let rhs = &(&u(0, 0).pow(2) * &u(0, 1).pow(2)).scale(&Coeff::int(3))
            + &(&u(0, 0).pow(3) * &u(0, 2));
        assert_eq!(lhs, rhs);
        assert!(evol_bracket(&[u(0, 2)], &[u(0, 5)]).iter().all(DiffPoly::is_zero));
        let a = vec![&u(0, 0) * &u(0, 1)];
        let b = vec![&u(0, 0).pow(2) * &u(0, 1)];
        assert!(evol_bracket(&a, &b).iter().all(DiffPoly::is_zero));
    }

    #[test]
    fn canonical_representatives() {
        let x = u(0, 0);
        let h3_expected = &(&(&x.pow(4).scale(&q(5, 8))
            + &(&x.pow(2) * &u(0, 2)).scale(&(&c() * &q(5, 3))))
            + &(&x * &u(0, 1).pow(2)).scale(&(&c() * &q(5, 6))))
            + &(&x * &u(0, 4)).scale(&(&(&c() * &c()) * &q(1, 2)));
        let from_xi = homotopy_integrate(&[xi3()]).unwrap();
        assert_eq!(FunctionalClass::new(&h3_expected, 1), FunctionalClass::new(&from_xi, 1));
        assert_eq!(FunctionalClass::new(&h2(), 1).rep(), &h2());
        assert!(FunctionalClass::new(&(&x * &u(0, 1)), 1).is_zero());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn delta_kills_derivatives(g in arb_poly(2, 3, 3, 5)) {
            prop_assert!(variational_derivative(&g.derivative(), 2).iter().all(DiffPoly::is_zero));
        }

        #[test]
        fn witness_exact(g in arb_poly(2, 3, 3, 5), k in -2i64..3) {
            let g0 = &g - &DiffPoly::constant(g.constant_term());
            let f = &g0.derivative() + &DiffPoly::constant(Coeff::int(k));
            match is_total_derivative(&f) {
                Some(w) => {
                    prop_assert_eq!(k, 0);
                    prop_assert_eq!(w.derivative(), f);
                    prop_assert!(w.constant_term().is_zero());
                }
                None => prop_assert!(k != 0),
            }
        }

        #[test]
        fn homotopy_inverts_delta(h in arb_poly(1, 4, 3, 5)) {
            let xi = variational_derivative(&h, 1);
            prop_assert!(is_closed(&xi));
            let back = homotopy_integrate(&xi).unwrap();
            let diff = &(&back - &h) - &DiffPoly::constant((&back - &h).constant_term());
            prop_assert!(is_total_derivative(&diff).is_some() || diff.is_zero());
        }

        #[test]
        fn canonical_form_is_class_function(h in arb_poly(2, 3, 3, 4), g in arb_poly(2, 3, 2, 4)) {
            let a = FunctionalClass::new(&h, 2);
            let b = FunctionalClass::new(&(&h + &g.derivative()), 2);
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(a.is_zero(), is_zero_functional(&h, 2));
        }

        #[test]
        fn evol_commutator(f in arb_poly(1, 2, 2, 3), g in arb_poly(1, 2, 2, 3), h in arb_poly(1, 3, 2, 4)) {
            let (f, g) = (vec![f], vec![g]);
            let lhs = &evol_apply(&f, &evol_apply(&g, &h)) - &evol_apply(&g, &evol_apply(&f, &h));
            prop_assert_eq!(lhs, evol_apply(&evol_bracket(&f, &g), &h));
            prop_assert_eq!(evol_apply(&f, &h.derivative()), evol_apply(&f, &h).derivative());
        }
    }
}
