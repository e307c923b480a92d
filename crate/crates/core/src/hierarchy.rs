//! The Lenard–Magri scheme for a compatible pair (H, K).

use crate::coeff::Coeff;
use crate::diffalg::{DiffOp, DiffPoly, Monomial};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::pva::PvaSpec;
use crate::syntax::Names;
use crate::varcalc::{self, Characteristic, FunctionalClass};

/// Operators K for which K ξ = g can be solved.
#[derive(Clone, Debug)]
enum KClass {
    /// K = D∘∂ with D constant and invertible; stores D⁻¹.
    ConstTimesD(Matrix),
    /// K a constant invertible matrix; stores K⁻¹.
    Const(Matrix),
}

fn constant_matrix(k: &DiffOp, power: u32) -> Option<Matrix> {
    let mut m = linalg::zeros(k.rows(), k.cols());
    for i in 0..k.rows() {
        for j in 0..k.cols() {
            for (p, f) in k.get(i, j).terms() {
                if p != power {
                    return None;
                }
                m[i][j] = f.as_constant()?;
            }
        }
    }
    Some(m)
}

fn classify(k: &DiffOp) -> Result<KClass> {
    if k.rows() != k.cols() {
        return Err(Error::Unsupported("K is not square".into()));
    }
    if let Some(d) = constant_matrix(k, 1) {
        if let Some(inv) = linalg::inverse(&d) {
            return Ok(KClass::ConstTimesD(inv));
        }
    }
    if let Some(c) = constant_matrix(k, 0) {
        if let Some(inv) = linalg::inverse(&c) {
            return Ok(KClass::Const(inv));
        }
    }
    Err(Error::Unsupported(
        "K must be D∘∂ or a constant matrix, with D invertible and constant".into(),
    ))
}

fn apply_const(m: &Matrix, v: &[DiffPoly]) -> Vec<DiffPoly> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(DiffPoly::zero(), |acc, (c, f)| &acc + &f.scale(c))
        })
        .collect()
}

/// Basis of the constant solutions of K ξ = 0.
pub fn seed_kernel(k: &DiffOp) -> Result<Vec<Characteristic>> {
    match classify(k)? {
        KClass::ConstTimesD(_) => Ok((0..k.cols())
            .map(|i| {
                let mut v = vec![DiffPoly::zero(); k.cols()];
                v[i] = DiffPoly::one();
                v
            })
            .collect()),
        KClass::Const(_) => Ok(Vec::new()),
    }
}

/// Solve K ξ = g, returning the solution with no kernel component.
pub fn solve_k(k: &DiffOp, g: &[DiffPoly]) -> Result<Characteristic> {
    match classify(k)? {
        KClass::Const(inv) => Ok(apply_const(&inv, g)),
        KClass::ConstTimesD(inv) => {
            let y = apply_const(&inv, g);
            let names = Names::generic(g.len());
            y.iter()
                .enumerate()
                .map(|(i, yi)| {
                    varcalc::is_total_derivative(yi).ok_or_else(|| {
                        Error::NotInImage(format!("component {}: {}", i, names.poly(yi)))
                    })
                })
                .collect()
        }
    }
}

/// ξ_{n+1} with K ξ_{n+1} = H ξ_n.
pub fn lm_step(h: &DiffOp, k: &DiffOp, xi: &[DiffPoly]) -> Result<Characteristic> {
    let g = h.apply(xi)?;
    solve_k(k, &g)
}

#[derive(Clone, Debug)]
pub struct Step {
    pub xi: Characteristic,
    /// Density reconstructed from ξ_n by the homotopy formula.
    pub h: DiffPoly,
    pub eq: Characteristic,
}

#[derive(Clone, Debug)]
pub struct HierarchyState {
    pub h_spec: PvaSpec,
    pub k_spec: PvaSpec,
    pub steps: Vec<Step>,
}

/// Run the scheme from ξ_0 through ξ_N.
pub fn lm_run(h_spec: &PvaSpec, k_spec: &PvaSpec, xi0: &[DiffPoly], n: usize) -> Result<HierarchyState> {
    let h = h_spec.poisson_structure();
    let k = k_spec.poisson_structure();
    let names = h_spec.display_names();
    let kx = k.apply(xi0)?;
    if kx.iter().any(|f| !f.is_zero()) {
        return Err(Error::Invalid(format!(
            "seed is not in Ker K: K ξ0 = {}",
            names.vector(&kx, crate::syntax::Style::Text)
        )));
    }
    let mut steps = Vec::with_capacity(n + 1);
    let mut xi = xi0.to_vec();
    for step in 0..=n {
        let density = varcalc::homotopy_integrate(&xi).map_err(|e| match e {
            Error::NotClosed(d) => Error::NotClosed(format!("step {step}: {d}")),
            other => other,
        })?;
        let eq = h.apply(&xi)?;
        let next = if step < n { Some(lm_step(&h, &k, &xi)?) } else { None };
        steps.push(Step {
            xi: xi.clone(),
            h: density,
            eq,
        });
        if let Some(x) = next {
            xi = x;
        }
    }
    Ok(HierarchyState {
        h_spec: h_spec.clone(),
        k_spec: k_spec.clone(),
        steps,
    })
}

fn functional(spec: &PvaSpec, f: &DiffPoly, g: &DiffPoly) -> FunctionalClass {
    let d = spec.functional_bracket_density(f, g);
    if varcalc::is_zero_functional(&d, spec.ngens()) {
        FunctionalClass::zero()
    } else {
        FunctionalClass::new(&d, spec.ngens())
    }
}

/// {∫h_m, ∫h_n} under H and under K.
#[derive(Clone, Debug)]
pub struct InvolutionTable {
    pub h: Vec<Vec<FunctionalClass>>,
    pub k: Vec<Vec<FunctionalClass>>,
}

impl InvolutionTable {
    pub fn all_zero(&self) -> bool {
        self.h.iter().chain(&self.k).flatten().all(FunctionalClass::is_zero)
    }
}

pub fn involution_table(state: &HierarchyState) -> InvolutionTable {
    let table = |spec: &PvaSpec| -> Vec<Vec<FunctionalClass>> {
        state
            .steps
            .iter()
            .map(|a| state.steps.iter().map(|b| functional(spec, &a.h, &b.h)).collect())
            .collect()
    };
    InvolutionTable {
        h: table(&state.h_spec),
        k: table(&state.k_spec),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceReport {
    /// Differential order of each equation (None for a zero equation).
    pub orders: Vec<Option<u32>>,
    pub rank: usize,
    pub independent: bool,
}

/// Orders and linear independence over the coefficient field.
pub fn independence(eqs: &[Characteristic]) -> IndependenceReport {
    let orders = eqs
        .iter()
        .map(|e| e.iter().filter_map(DiffPoly::max_order).max())
        .collect();
    let mut cols: Vec<(usize, Monomial)> = Vec::new();
    for e in eqs {
        for (i, f) in e.iter().enumerate() {
            for (m, _) in f.terms() {
                cols.push((i, m.clone()));
            }
        }
    }
    cols.sort();
    cols.dedup();
    let m: Matrix = eqs
        .iter()
        .map(|e| {
            cols.iter()
                .map(|(i, mono)| e.get(*i).map_or_else(Coeff::zero, |f| f.coeff_of(mono)))
                .collect()
        })
        .collect();
    let rank = linalg::rank(&m);
    IndependenceReport {
        orders,
        rank,
        independent: rank == eqs.len(),
    }
}

pub fn independence_check(state: &HierarchyState) -> IndependenceReport {
    let eqs: Vec<Characteristic> = state.steps.iter().map(|s| s.eq.clone()).collect();
    independence(&eqs)
}

impl HierarchyState {
    /// K ξ_{n+1} − H ξ_n for every recorded step.
    pub fn lenard_magri_residuals(&self) -> Vec<Characteristic> {
        let h = self.h_spec.poisson_structure();
        let k = self.k_spec.poisson_structure();
        self.steps
            .windows(2)
            .map(|w| {
                let a = k.apply(&w[1].xi).expect("shape");
                let b = h.apply(&w[0].xi).expect("shape");
                a.iter().zip(&b).map(|(x, y)| x - y).collect()
            })
            .collect()
    }

    /// δh_n/δu − ξ_n for every step.
    pub fn density_residuals(&self) -> Vec<Characteristic> {
        let n = self.h_spec.ngens();
        self.steps
            .iter()
            .map(|s| {
                varcalc::variational_derivative(&s.h, n)
                    .iter()
                    .zip(&s.xi)
                    .map(|(a, b)| a - b)
                    .collect()
            })
            .collect()
    }

    /// Whether ⟨ξ_m, H ξ_n⟩ and ⟨ξ_m, K ξ_n⟩ vanish in V/∂V for all m, n.
    pub fn lenard_pairings_vanish(&self) -> bool {
        let n = self.h_spec.ngens();
        let ops = [self.h_spec.poisson_structure(), self.k_spec.poisson_structure()];
        self.steps.iter().all(|a| {
            self.steps.iter().all(|b| {
                ops.iter().all(|op| {
                    let d = varcalc::pairing(&a.xi, &op.apply(&b.xi).expect("shape"));
                    varcalc::is_zero_functional(&d, n)
                })
            })
        })
    }

    /// Pairs (m, n), m < n ≤ upto, whose flows fail to commute.
    pub fn noncommuting_flows(&self, upto: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let top = upto.min(self.steps.len().saturating_sub(1));
        for m in 0..=top {
            for n in m + 1..=top {
                let br = varcalc::evol_bracket(&self.steps[m].eq, &self.steps[n].eq);
                if br.iter().any(|f| !f.is_zero()) {
                    out.push((m, n));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffalg::{u, OpEntry};
    use crate::pva::{gfz, magri_virasoro};

    fn c() -> Coeff {
        Coeff::param("c")
    }

    #[test]
    fn kernels() {
        let d = DiffOp::scalar(OpEntry::d(1));
        assert_eq!(seed_kernel(&d).unwrap(), vec![vec![DiffPoly::one()]]);
        let j = DiffOp::from_rows(vec![
            vec![OpEntry::zero(), OpEntry::mult(DiffPoly::constant(Coeff::int(-1)))],
            vec![OpEntry::one(), OpEntry::zero()],
        ])
        .unwrap();
        assert!(seed_kernel(&j).unwrap().is_empty());
        let dd = DiffOp::from_rows(vec![
            vec![OpEntry::d(1), OpEntry::zero()],
            vec![OpEntry::zero(), OpEntry::d(1)],
        ])
        .unwrap();
        assert_eq!(seed_kernel(&dd).unwrap().len(), 2);
        assert!(seed_kernel(&DiffOp::scalar(OpEntry::d(3))).is_err());
    }

    #[test]
    fn kdv_steps() {
        let h = magri_virasoro(&c(), &Coeff::zero()).poisson_structure();
        let k = gfz().poisson_structure();
        let xi1 = lm_step(&h, &k, &[DiffPoly::one()]).unwrap();
        assert_eq!(xi1, vec![u(0, 0)]);
        let xi2 = lm_step(&h, &k, &xi1).unwrap();
        assert_eq!(xi2, vec![&u(0, 0).pow(2).scale(&Coeff::ratio(3, 2)) + &u(0, 2).scale(&c())]);
        let err = lm_step(&h, &k, &[u(0, 1)]);
        assert!(matches!(err, Err(Error::NotInImage(_))));
    }

    #[test]
    fn kdv_run_invariants() {
        let state = lm_run(&magri_virasoro(&c(), &Coeff::zero()), &gfz(), &[DiffPoly::one()], 3).unwrap();
        assert_eq!(state.steps[0].h, u(0, 0));
        assert!(state.lenard_magri_residuals().iter().flatten().all(DiffPoly::is_zero));
        assert!(state.density_residuals().iter().flatten().all(DiffPoly::is_zero));
        assert!(involution_table(&state).all_zero());
        assert!(state.lenard_pairings_vanish());
        assert!(state.noncommuting_flows(3).is_empty());
        let rep = independence_check(&state);
        assert_eq!(rep.orders, vec![Some(1), Some(3), Some(5), Some(7)]);
        assert!(rep.independent);
    }

    #[test]
    fn dispersionless_limit_stays_independent() {
        let state = lm_run(&magri_virasoro(&Coeff::zero(), &Coeff::zero()), &gfz(), &[DiffPoly::one()], 2).unwrap();
        let rep = independence_check(&state);
        assert_eq!(rep.orders, vec![Some(1), Some(1), Some(1)]);
        assert!(rep.independent);
    }

    #[test]
    fn corrupted_density_breaks_involution() {
        let mut state = lm_run(&magri_virasoro(&c(), &Coeff::zero()), &gfz(), &[DiffPoly::one()], 2).unwrap();
        state.steps[2].h = &state.steps[2].h + &u(0, 1).pow(2);
        assert!(!involution_table(&state).all_zero());
    }
}
