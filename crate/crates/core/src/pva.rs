//! Poisson vertex algebra structures on P_ℓ given by generator bracket
//! tables, extended by the Master Formula.

use crate::coeff::Coeff;
use crate::diffalg::{DiffOp, DiffPoly, LambdaMu, LambdaPoly, OpEntry};
use crate::error::{Error, Result};
use crate::liealg::LieAlgebraData;
use crate::syntax::Names;
use crate::varcalc::{self, FunctionalClass};

/// Generator names plus the table `table[i][j] = {u_i λ u_j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PvaSpec {
    pub names: Vec<String>,
    pub table: Vec<Vec<LambdaPoly>>,
}

/// A nonzero skewsymmetry residual {u_i λ u_j} + {u_j −λ−∂ u_i}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairResidual {
    pub indices: (usize, usize),
    pub residual: LambdaPoly,
}

/// A nonzero Jacobi residual as a polynomial in (λ, μ).
#[derive(Clone, Debug, PartialEq)]
pub struct TripleResidual {
    pub indices: (usize, usize, usize),
    pub residual: LambdaMu,
}

impl PvaSpec {
    pub fn new(names: Vec<String>, table: Vec<Vec<LambdaPoly>>) -> Result<Self> {
        let n = names.len();
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::Shape(format!("bracket table must be {n}x{n}")));
        }
        Ok(PvaSpec { names, table })
    }

    /// The zero bracket on `n` generators.
    pub fn zero(names: Vec<String>) -> Self {
        let n = names.len();
        PvaSpec {
            names,
            table: vec![vec![LambdaPoly::zero(); n]; n],
        }
    }

    pub fn ngens(&self) -> usize {
        self.names.len()
    }

    pub fn display_names(&self) -> Names {
        Names::new(self.names.clone())
    }

    /// H(∂) with H_{ji}(λ) = {u_i λ u_j}.
    pub fn poisson_structure(&self) -> DiffOp {
        let n = self.ngens();
        let mut h = DiffOp::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                h.set(j, i, OpEntry::from_symbol(&self.table[i][j]));
            }
        }
        h
    }

    /// Inverse of `poisson_structure`.
    pub fn from_operator(names: Vec<String>, h: &DiffOp) -> Result<Self> {
        let n = names.len();
        if h.rows() != n || h.cols() != n {
            return Err(Error::Shape("operator does not match generators".into()));
        }
        let table = (0..n)
            .map(|i| (0..n).map(|j| h.get(j, i).symbol()).collect())
            .collect();
        PvaSpec::new(names, table)
    }

    /// {f λ g} by the Master Formula.
    pub fn bracket(&self, f: &DiffPoly, g: &DiffPoly) -> LambdaPoly {
        let n = self.ngens();
        let fvars = f.vars();
        let gvars = g.vars();
        let mut a: Vec<LambdaPoly> = vec![LambdaPoly::zero(); n];
        for v in &fvars {
            a[v.gen] += &LambdaPoly::constant(f.partial(*v)).neg_shift(v.order);
        }
        let mut out = LambdaPoly::zero();
        for j in 0..n {
            if !gvars.iter().any(|v| v.gen == j) {
                continue;
            }
            let mut c = LambdaPoly::zero();
            for (i, ai) in a.iter().enumerate() {
                if !ai.is_zero() && !self.table[i][j].is_zero() {
                    c += &self.table[i][j].compose_shift(ai);
                }
            }
            if c.is_zero() {
                continue;
            }
            for v in gvars.iter().filter(|v| v.gen == j) {
                out += &c.shift(v.order).scale(&g.partial(*v));
            }
        }
        out
    }

    /// (H δh/δu)_j = {∫h, u_j}, the right side of du/dt = H(∂) δh/δu.
    pub fn hamiltonian_flow(&self, h: &DiffPoly) -> Vec<DiffPoly> {
        let xi = varcalc::variational_derivative(h, self.ngens());
        self.poisson_structure().apply(&xi).expect("square")
    }

    /// The density ∫ δg/δu · H(∂) δf/δu, unreduced.
    pub fn functional_bracket_density(&self, f: &DiffPoly, g: &DiffPoly) -> DiffPoly {
        let dg = varcalc::variational_derivative(g, self.ngens());
        varcalc::pairing(&dg, &self.hamiltonian_flow(f))
    }

    pub fn functional_bracket(&self, f: &DiffPoly, g: &DiffPoly) -> FunctionalClass {
        FunctionalClass::new(&self.functional_bracket_density(f, g), self.ngens())
    }

    pub fn check_skewsymmetry(&self) -> Vec<PairResidual> {
        let n = self.ngens();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                let r = &self.table[i][j] + &self.table[j][i].reflect();
                if !r.is_zero() {
                    out.push(PairResidual {
                        indices: (i, j),
                        residual: r,
                    });
                }
            }
        }
        out
    }

    /// Jacobi residual for one triple.
    pub fn jacobi_residual(&self, i: usize, j: usize, k: usize) -> LambdaMu {
        let ui = DiffPoly::var(i, 0);
        let uj = DiffPoly::var(j, 0);
        let uk = DiffPoly::var(k, 0);
        let mut res = LambdaMu::zero();
        for (n, c) in self.table[j][k].coeffs() {
            res.add_lambda_times_mu(&self.bracket(&ui, c), n);
        }
        let mut second = LambdaMu::zero();
        for (n, d) in self.table[i][k].coeffs() {
            second.add_mu_times_lambda(&self.bracket(&uj, d), n);
        }
        let mut third = LambdaMu::zero();
        for (n, a) in self.table[i][j].coeffs() {
            third.add_sum_times_lambda(&self.bracket(a, &uk), n);
        }
        res.sub_assign(&second);
        res.sub_assign(&third);
        res
    }

    pub fn check_jacobi(&self) -> Vec<TripleResidual> {
        let n = self.ngens();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let r = self.jacobi_residual(i, j, k);
                    if !r.is_zero() {
                        out.push(TripleResidual {
                            indices: (i, j, k),
                            residual: r,
                        });
                    }
                }
            }
        }
        out
    }

    /// Parameters occurring in the table.
    pub fn params(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for row in &self.table {
            for p in row {
                for (_, f) in p.coeffs() {
                    for (_, c) in f.terms() {
                        out.extend(c.params().iter().map(|s| s.to_string()));
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Table of `self + t·other`.
    pub fn pencil(&self, other: &PvaSpec, t: &Coeff) -> Result<PvaSpec> {
        if self.ngens() != other.ngens() {
            return Err(Error::Shape("brackets on different generator sets".into()));
        }
        let table = self
            .table
            .iter()
            .zip(&other.table)
            .map(|(r, s)| r.iter().zip(s).map(|(a, b)| a + &b.scale_coeff(t)).collect())
            .collect();
        PvaSpec::new(self.names.clone(), table)
    }
}

/// Magri compatibility: Jacobi for B_H + t·B_K with a fresh parameter t.
/// Returns the parameter name used and the nonzero residuals.
pub fn check_compatibility(h: &PvaSpec, k: &PvaSpec) -> Result<(String, Vec<TripleResidual>)> {
    let mut used = h.params();
    used.extend(k.params());
    let t = std::iter::once("t".to_string())
        .chain((1..).map(|i| format!("t_{i}")))
        .find(|n| !used.contains(n))
        .expect("unbounded supply of names");
    let pencil = h.pencil(k, &Coeff::param(&t))?;
    Ok((t, pencil.check_jacobi()))
}

fn single(name: &str, p: LambdaPoly) -> PvaSpec {
    PvaSpec {
        names: vec![name.to_string()],
        table: vec![vec![p]],
    }
}

/// Gardner–Faddeev–Zakharov: {u λ u} = λ.
pub fn gfz() -> PvaSpec {
    single("u", LambdaPoly::lambda())
}

/// Magri–Virasoro: {u λ u} = (∂ + 2λ)u + cλ³ + αλ.
pub fn magri_virasoro(c: &Coeff, alpha: &Coeff) -> PvaSpec {
    let mut p = LambdaPoly::constant(DiffPoly::var(0, 1));
    p.add_at(1, &DiffPoly::var(0, 0).scale(&Coeff::int(2)));
    p.add_at(1, &DiffPoly::constant(alpha.clone()));
    p.add_at(3, &DiffPoly::constant(c.clone()));
    single("u", p)
}

/// Affine PVA: {a λ b} = [a,b] + λ(a|b)k + (s|[a,b]) on the basis of 𝔤.
pub fn affine(l: &LieAlgebraData, k: &Coeff, s: Option<&[Coeff]>) -> Result<PvaSpec> {
    if let Some(issue) = l.validate().first() {
        return Err(Error::InvalidLie(format!(
            "{} failure at {:?}: {}",
            issue.kind, issue.indices, issue.residual
        )));
    }
    let d = l.dim();
    let mut table = vec![vec![LambdaPoly::zero(); d]; d];
    for (i, row) in table.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let br = &l.structure[i][j];
            let mut val = DiffPoly::zero();
            for (m, c) in br.iter().enumerate() {
                val += &DiffPoly::var(m, 0).scale(c);
            }
            if let Some(s) = s {
                val += &DiffPoly::constant(l.pair(s, br));
            }
            entry.add_at(0, &val);
            entry.add_at(1, &DiffPoly::constant(&l.form[i][j] * k));
        }
    }
    PvaSpec::new(l.basis.clone(), table)
}

/// The cocycle bracket {a λ b} = (s|[a,b]).
pub fn affine_cocycle(l: &LieAlgebraData, s: &[Coeff]) -> Result<PvaSpec> {
    let d = l.dim();
    let mut table = vec![vec![LambdaPoly::zero(); d]; d];
    for (i, row) in table.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            entry.add_at(0, &DiffPoly::constant(l.pair(s, &l.structure[i][j])));
        }
    }
    PvaSpec::new(l.basis.clone(), table)
}
