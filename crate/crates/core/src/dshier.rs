//! The homogeneous Drinfeld–Sokolov hierarchy on the affine PVA of 𝔤.

use std::collections::BTreeMap;

use crate::coeff::Coeff;
use crate::diffalg::DiffPoly;
use crate::error::{Error, Result};
use crate::liealg::LieAlgebraData;
use crate::linalg::{self, Matrix};
use crate::pva::{self, PvaSpec};
use crate::varcalc;

/// Element of 𝔤 ⊗ V: one coefficient per basis vector of 𝔤.
pub type GValued = Vec<DiffPoly>;

/// Truncated series Σ c_n z^{−n}; the key is n, so z¹ has key −1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZSeries {
    pub terms: BTreeMap<i32, GValued>,
    pub order: i32,
}

fn gzero(d: usize) -> GValued {
    vec![DiffPoly::zero(); d]
}

fn gis_zero(x: &[DiffPoly]) -> bool {
    x.iter().all(DiffPoly::is_zero)
}

fn gadd(x: &mut GValued, y: &[DiffPoly]) {
    for (a, b) in x.iter_mut().zip(y) {
        *a += b;
    }
}

fn gscale(x: &[DiffPoly], c: &Coeff) -> GValued {
    x.iter().map(|f| f.scale(c)).collect()
}

fn gconst(v: &[Coeff]) -> GValued {
    v.iter().map(|c| DiffPoly::constant(c.clone())).collect()
}

fn gapply(m: &Matrix, x: &[DiffPoly]) -> GValued {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .filter(|(c, _)| !c.is_zero())
                .fold(DiffPoly::zero(), |acc, (c, f)| &acc + &f.scale(c))
        })
        .collect()
}

/// [X, Y] in 𝔤 ⊗ V.
pub fn gbracket(l: &LieAlgebraData, x: &[DiffPoly], y: &[DiffPoly]) -> GValued {
    let d = l.dim();
    let mut out = gzero(d);
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            let p = xi * yj;
            for (k, c) in l.structure[i][j].iter().enumerate() {
                if !c.is_zero() {
                    out[k] += &p.scale(c);
                }
            }
        }
    }
    out
}

/// (a ⊗ 1 | X) for a constant a.
pub fn gpair(l: &LieAlgebraData, a: &[Coeff], x: &[DiffPoly]) -> DiffPoly {
    let ga = linalg::mul_vec(&l.form, a);
    ga.iter()
        .zip(x)
        .filter(|(c, _)| !c.is_zero())
        .fold(DiffPoly::zero(), |acc, (c, f)| &acc + &f.scale(c))
}

impl ZSeries {
    pub fn new(order: i32) -> Self {
        ZSeries {
            terms: BTreeMap::new(),
            order,
        }
    }

    pub fn get(&self, n: i32, d: usize) -> GValued {
        self.terms.get(&n).cloned().unwrap_or_else(|| gzero(d))
    }

    pub fn add_at(&mut self, n: i32, x: &[DiffPoly]) {
        if n > self.order || gis_zero(x) {
            return;
        }
        match self.terms.get_mut(&n) {
            Some(e) => {
                gadd(e, x);
                if gis_zero(e) {
                    self.terms.remove(&n);
                }
            }
            None => {
                self.terms.insert(n, x.to_vec());
            }
        }
    }

    pub fn add(&mut self, other: &ZSeries) {
        for (n, x) in &other.terms {
            self.add_at(*n, x);
        }
    }

    pub fn scale(&self, c: &Coeff) -> ZSeries {
        let mut out = ZSeries::new(self.order);
        for (n, x) in &self.terms {
            out.add_at(*n, &gscale(x, c));
        }
        out
    }

    pub fn bracket(&self, l: &LieAlgebraData, other: &ZSeries) -> ZSeries {
        let mut out = ZSeries::new(self.order.min(other.order));
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if a + b <= out.order {
                    out.add_at(a + b, &gbracket(l, x, y));
                }
            }
        }
        out
    }

    /// Componentwise total derivative.
    pub fn derivative(&self) -> ZSeries {
        let mut out = ZSeries::new(self.order);
        for (n, x) in &self.terms {
            out.add_at(*n, &x.iter().map(DiffPoly::derivative).collect::<Vec<_>>());
        }
        out
    }
}

fn factorial(m: u32) -> Coeff {
    (1..=m as i64).fold(Coeff::one(), |acc, k| &acc * &Coeff::int(k))
}

/// e^{ad U} applied to Y (a multiplication operator), truncated.
fn ad_exp(l: &LieAlgebraData, u: &ZSeries, y: &ZSeries, sign: i64) -> ZSeries {
    let mut total = y.clone();
    let mut term = y.clone();
    let su = u.scale(&Coeff::int(sign));
    for m in 1..=(total.order + 2).max(1) as u32 {
        term = su.bracket(l, &term);
        if term.terms.is_empty() {
            break;
        }
        total.add(&term.scale(&factorial(m).inv().expect("nonzero")));
    }
    total
}

/// e^{ad U}(∂) − ∂ = Σ_{m≥1} (ad U)^{m−1}(−U′)/m!.
fn ad_exp_on_d(l: &LieAlgebraData, u: &ZSeries) -> ZSeries {
    let mut cur = u.derivative().scale(&Coeff::int(-1));
    let mut total = ZSeries::new(u.order);
    for m in 1..=(u.order + 2).max(1) as u32 {
        if cur.terms.is_empty() {
            break;
        }
        total.add(&cur.scale(&factorial(m).inv().expect("nonzero")));
        cur = u.bracket(l, &cur);
    }
    total
}

/// Output of the gauge recursion.
#[derive(Clone, Debug)]
pub struct DsGauge {
    pub order: usize,
    /// U_1..U_{N+1}, keyed by n.
    pub u: ZSeries,
    /// f_0..f_N.
    pub f: ZSeries,
    s: Vec<Coeff>,
    centralizer: Vec<Vec<Coeff>>,
    proj_h: Matrix,
    proj_perp: Matrix,
}

fn linear_map_matrix(d: usize, f: impl Fn(&[Coeff]) -> Vec<Coeff>) -> Matrix {
    let cols: Vec<Vec<Coeff>> = (0..d)
        .map(|j| {
            let mut e = vec![Coeff::zero(); d];
            e[j] = Coeff::one();
            f(&e)
        })
        .collect();
    linalg::transpose(&cols)
}

/// L(z) = ∂ + q − z s with q = Σ u^i ⊗ u_i, as the multiplication part.
fn lax_potential(l: &LieAlgebraData, s: &[Coeff], order: i32) -> Result<ZSeries> {
    let (_, duals) = l.dual_bases()?;
    let d = l.dim();
    let mut q = gzero(d);
    for (i, b) in duals.iter().enumerate() {
        for (k, c) in b.iter().enumerate() {
            if !c.is_zero() {
                q[k] += &DiffPoly::var(i, 0).scale(c);
            }
        }
    }
    let mut y = ZSeries::new(order);
    y.add_at(-1, &gscale(&gconst(s), &Coeff::int(-1)));
    y.add_at(0, &q);
    Ok(y)
}

fn gauged(l: &LieAlgebraData, s: &[Coeff], u: &ZSeries, order: i32) -> Result<ZSeries> {
    let y = lax_potential(l, s, order)?;
    let mut total = ad_exp(l, u, &y, 1);
    total.add(&ad_exp_on_d(l, u));
    Ok(total)
}

/// Solve e^{ad U} L(z) = ∂ + f(z) − z s through order z^{−N}.
pub fn ds_gauge(l: &LieAlgebraData, s: &[Coeff], n: usize) -> Result<DsGauge> {
    if n < 1 {
        return Err(Error::Invalid("truncation must be at least 1".into()));
    }
    let d = l.dim();
    let dec = l.s_decomposition(s)?;
    let proj_h = linear_map_matrix(d, |x| dec.proj_h(x));
    let proj_perp = linear_map_matrix(d, |x| dec.proj_perp(x));
    let ad_inv = linear_map_matrix(d, |x| dec.ad_s_inv(x));
    let order = n as i32;
    let mut u = ZSeries::new(order + 1);
    let mut f = ZSeries::new(order);
    for k in 0..=order {
        let total = gauged(l, s, &ZSeries { order: k, ..u.clone() }, k)?;
        let r = total.get(k, d);
        f.add_at(k, &gapply(&proj_h, &r));
        let next = gscale(&gapply(&ad_inv, &gapply(&proj_perp, &r)), &Coeff::int(-1));
        u.add_at(k + 1, &next);
    }
    Ok(DsGauge {
        order: n,
        u,
        f,
        s: s.to_vec(),
        centralizer: dec.centralizer.clone(),
        proj_h,
        proj_perp,
    })
}

impl DsGauge {
    /// Nonzero coefficients of e^{ad U}L − (∂ + f − zs) through z^{−N},
    /// recomputed from the stored U.
    pub fn residual(&self, l: &LieAlgebraData) -> Result<Vec<(i32, GValued)>> {
        let d = l.dim();
        let order = self.order as i32;
        let total = gauged(l, &self.s, &self.u, order)?;
        let mut out = Vec::new();
        for k in -1..=order {
            let mut want = if k == -1 {
                gscale(&gconst(&self.s), &Coeff::int(-1))
            } else {
                self.f.get(k, d)
            };
            for x in want.iter_mut() {
                *x = -&*x;
            }
            let mut got = total.get(k, d);
            gadd(&mut got, &want);
            if !gis_zero(&got) {
                out.push((k, got));
            }
        }
        Ok(out)
    }

    /// Components of f outside 𝔥 and of U inside 𝔥 (all should vanish).
    pub fn projection_residuals(&self) -> Vec<GValued> {
        let mut out = Vec::new();
        for x in self.f.terms.values() {
            let r = gapply(&self.proj_perp, x);
            if !gis_zero(&r) {
                out.push(r);
            }
        }
        for x in self.u.terms.values() {
            let r = gapply(&self.proj_h, x);
            if !gis_zero(&r) {
                out.push(r);
            }
        }
        out
    }

    /// Check that `a` lies in the center of 𝔥.
    pub fn check_central(&self, l: &LieAlgebraData, a: &[Coeff]) -> Result<()> {
        let pa = linalg::mul_vec(&self.proj_perp, a);
        if pa.iter().any(|c| !c.is_zero()) {
            return Err(Error::Invalid("a is not in the centralizer of s".into()));
        }
        for c in &self.centralizer {
            if l.bracket(a, c).iter().any(|x| !x.is_zero()) {
                return Err(Error::Invalid("a is not central in the centralizer of s".into()));
            }
        }
        Ok(())
    }

    /// h^a_n = (a ⊗ 1 | f_n) for n = 0..N.
    pub fn densities(&self, l: &LieAlgebraData, a: &[Coeff]) -> Result<Vec<DiffPoly>> {
        self.check_central(l, a)?;
        let d = l.dim();
        Ok((0..=self.order as i32).map(|n| gpair(l, a, &self.f.get(n, d))).collect())
    }

    /// F^a(z) = e^{−ad U}(a ⊗ 1), coefficients 0..N.
    pub fn f_a(&self, l: &LieAlgebraData, a: &[Coeff]) -> Vec<GValued> {
        let d = l.dim();
        let mut y = ZSeries::new(self.order as i32);
        y.add_at(0, &gconst(a));
        let u = ZSeries {
            order: self.order as i32,
            ..self.u.clone()
        };
        let series = ad_exp(l, &u, &y, -1);
        (0..=self.order as i32).map(|n| series.get(n, d)).collect()
    }
}

/// Outcome of the structural checks of the DS construction.
#[derive(Clone, Debug)]
pub struct DsReport {
    pub densities: Vec<DiffPoly>,
    /// du/dt_n = H δh_n/δu for each n.
    pub equations: Vec<Vec<DiffPoly>>,
    pub gauge_residual: Vec<(i32, GValued)>,
    pub projection_residuals: usize,
    /// n for which F^a_n ≠ δh_n/δu.
    pub variational_failures: Vec<usize>,
    /// n for which {∫h_n, u}_H ≠ {∫h_{n+1}, u}_K.
    pub lenard_magri_failures: Vec<usize>,
    /// Pairs (m, n) with a nonzero H- or K-bracket.
    pub involution_failures: Vec<(usize, usize)>,
}

impl DsReport {
    pub fn passed(&self) -> bool {
        self.gauge_residual.is_empty()
            && self.projection_residuals == 0
            && self.variational_failures.is_empty()
            && self.lenard_magri_failures.is_empty()
            && self.involution_failures.is_empty()
    }
}

/// Run the DS construction and verify it against the pair
/// {a λ b}_H = [a,b] + (a|b)λ, {a λ b}_K = (s|[a,b]).
pub fn ds_verify(l: &LieAlgebraData, s: &[Coeff], a: &[Coeff], n: usize) -> Result<DsReport> {
    let gauge = ds_gauge(l, s, n)?;
    let dens = gauge.densities(l, a)?;
    let h = pva::affine(l, &Coeff::one(), None)?;
    let k = pva::affine_cocycle(l, s)?;
    verify_with(l, &gauge, a, &dens, &h, &k)
}

fn verify_with(
    l: &LieAlgebraData,
    gauge: &DsGauge,
    a: &[Coeff],
    dens: &[DiffPoly],
    h: &PvaSpec,
    k: &PvaSpec,
) -> Result<DsReport> {
    let d = l.dim();
    let fa = gauge.f_a(l, a);
    let variational_failures = dens
        .iter()
        .zip(&fa)
        .enumerate()
        .filter(|(_, (hn, fan))| varcalc::variational_derivative(hn, d) != **fan)
        .map(|(i, _)| i)
        .collect();
    let equations: Vec<Vec<DiffPoly>> = dens.iter().map(|x| h.hamiltonian_flow(x)).collect();
    let lenard_magri_failures = (0..dens.len().saturating_sub(1))
        .filter(|&i| equations[i] != k.hamiltonian_flow(&dens[i + 1]))
        .collect();
    let mut involution_failures = Vec::new();
    for m in 0..dens.len() {
        for n in m + 1..dens.len() {
            for spec in [h, k] {
                let dd = spec.functional_bracket_density(&dens[m], &dens[n]);
                if !varcalc::is_zero_functional(&dd, d) {
                    involution_failures.push((m, n));
                    break;
                }
            }
        }
    }
    Ok(DsReport {
        densities: dens.to_vec(),
        equations,
        gauge_residual: gauge.residual(l)?,
        projection_residuals: gauge.projection_residuals().len(),
        variational_failures,
        lenard_magri_failures,
        involution_failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffalg::u;
    use crate::liealg;

    #[test]
    fn abelian_gauge_is_trivial() {
        let l = liealg::abelian1();
        let g = ds_gauge(&l, &[Coeff::one()], 2);
        // s central: ad s = 0 so 𝔥 = 𝔤 and U = 0
        let g = g.unwrap();
        assert!(g.u.terms.is_empty());
        assert_eq!(g.f.get(0, 1), vec![u(0, 0)]);
        assert!(g.residual(&l).unwrap().is_empty());
    }

    #[test]
    fn sl2_structure_holds() {
        let kappa = Coeff::param("kappa");
        let l = liealg::sl2_kappa(&kappa);
        let s = l.unit(2);
        let rep = ds_verify(&l, &s, &s, 3).unwrap();
        assert!(rep.gauge_residual.is_empty());
        assert_eq!(rep.projection_residuals, 0);
        assert!(rep.variational_failures.is_empty());
        assert!(rep.lenard_magri_failures.is_empty());
        assert!(rep.involution_failures.is_empty());
        // h0 = a = s: (s|q) is the s-variable
        assert_eq!(rep.densities[0], u(2, 0));
        // the gauge fixes h1 = −e_α e_{−α}; computed by hand from U_1 = −ad_s⁻¹ q⊥
        assert_eq!(rep.densities[1], -&(&u(0, 0) * &u(1, 0)));
        let k2 = kappa.pow(2);
        let want = &(&(&(&u(0, 2) + &(&u(0, 1) * &u(2, 0)).scale(&(&kappa * &Coeff::int(2))))
            + &(&u(0, 0) * &u(2, 1)).scale(&kappa))
            + &(&u(0, 0).pow(2) * &u(1, 0)).scale(&kappa))
            + &(&u(0, 0) * &u(2, 0).pow(2)).scale(&k2);
        assert_eq!(rep.equations[2][0], want);
        assert!(rep.equations.iter().all(|e| e[2].is_zero()));
    }

    #[test]
    fn first_order_gauge_by_hand() {
        let l = liealg::sl2();
        let s = l.unit(1);
        let g = ds_gauge(&l, &s, 1).unwrap();
        // q = f⊗u_e + (h/2)⊗u_h + e⊗u_f; U_1 = −ad_h⁻¹ π⊥ q
        let u1 = g.u.get(1, 3);
        assert_eq!(u1[0], u(2, 0).scale(&Coeff::ratio(-1, 2)));
        assert_eq!(u1[2], u(0, 0).scale(&Coeff::ratio(1, 2)));
        assert_eq!(g.f.get(0, 3), vec![DiffPoly::zero(), u(1, 0).scale(&Coeff::ratio(1, 2)), DiffPoly::zero()]);
    }
}
