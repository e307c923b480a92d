//! Truncated Laurent symbols in λ⁻¹ and Dirac reduction of a PVA by
//! constraints.

use std::collections::BTreeMap;

use crate::coeff::{binomial_signed, Coeff};
use crate::diffalg::{DiffPoly, LambdaPoly};
use crate::dshier;
use crate::error::{Error, Result};
use crate::liealg;
use crate::linalg;
use crate::pva::{self, PvaSpec};
use crate::syntax::{Names, Style};

pub const DEFAULT_FLOOR: u32 = 6;

/// Σ_{k ≥ floor} f_k λ^k; coefficients below the floor are discarded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSymbol {
    coeffs: BTreeMap<i32, DiffPoly>,
    floor: i32,
}

impl LaurentSymbol {
    pub fn zero(floor: i32) -> Self {
        LaurentSymbol {
            coeffs: BTreeMap::new(),
            floor,
        }
    }

    pub fn constant(f: DiffPoly, floor: i32) -> Self {
        let mut s = Self::zero(floor);
        s.add_at(0, &f);
        s
    }

    pub fn from_lambda(p: &LambdaPoly, floor: i32) -> Self {
        let mut s = Self::zero(floor);
        for (k, f) in p.coeffs() {
            s.add_at(k as i32, f);
        }
        s
    }

    pub fn floor(&self) -> i32 {
        self.floor
    }

    pub fn add_at(&mut self, k: i32, f: &DiffPoly) {
        if k < self.floor || f.is_zero() {
            return;
        }
        let e = self.coeffs.entry(k).or_insert_with(DiffPoly::zero);
        *e += f;
        if e.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn coeff(&self, k: i32) -> DiffPoly {
        self.coeffs.get(&k).cloned().unwrap_or_else(DiffPoly::zero)
    }

    pub fn coeffs(&self) -> impl DoubleEndedIterator<Item = (i32, &DiffPoly)> {
        self.coeffs.iter().map(|(k, f)| (*k, f))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn truncate(&self, floor: i32) -> Self {
        let mut s = Self::zero(floor);
        for (k, f) in self.coeffs() {
            s.add_at(k, f);
        }
        s
    }

    /// Nonnegative part as a λ-polynomial.
    pub fn local_part(&self) -> LambdaPoly {
        let mut p = LambdaPoly::zero();
        for (k, f) in self.coeffs().filter(|(k, _)| *k >= 0) {
            p.add_at(k as u32, f);
        }
        p
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut s = self.truncate(self.floor.max(other.floor));
        for (k, f) in other.coeffs() {
            s.add_at(k, f);
        }
        s
    }

    pub fn neg(&self) -> Self {
        self.map(|f| -f)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, g: &DiffPoly) -> Self {
        self.map(|f| f * g)
    }

    fn map(&self, mut op: impl FnMut(&DiffPoly) -> DiffPoly) -> Self {
        let mut s = Self::zero(self.floor);
        for (k, f) in self.coeffs() {
            s.add_at(k, &op(f));
        }
        s
    }

    /// Σ_k a_k (λ+∂)^k x, with ∂ acting on the coefficients of x.
    pub fn shift_apply(&self, x: &LaurentSymbol) -> LaurentSymbol {
        let floor = self.floor.max(x.floor);
        let mut out = LaurentSymbol::zero(floor);
        for (k, a) in self.coeffs() {
            let px = shift_power(k, x, floor);
            for (e, f) in px.coeffs() {
                out.add_at(e, &(a * f));
            }
        }
        out
    }

    /// B(−λ−∂) = Σ_k (−λ−∂)^k b_k.
    pub fn reflect(&self) -> LaurentSymbol {
        let mut out = LaurentSymbol::zero(self.floor);
        for (k, b) in self.coeffs() {
            let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
            let x = LaurentSymbol::constant(b.scale(&Coeff::int(sign)), self.floor);
            for (e, f) in shift_power(k, &x, self.floor).coeffs() {
                out.add_at(e, f);
            }
        }
        out
    }

    pub fn display(&self, names: &Names, style: Style) -> String {
        names.laurent_styled(self.coeffs(), "l", style)
    }
}

/// (λ+∂)^n x = Σ_j C(n,j) λ^{n−j} ∂^j x, truncated at `floor`.
fn shift_power(n: i32, x: &LaurentSymbol, floor: i32) -> LaurentSymbol {
    let mut out = LaurentSymbol::zero(floor);
    for (k, f) in x.coeffs() {
        let mut df = f.clone();
        let mut j = 0u32;
        while n - j as i32 + k >= floor {
            if n >= 0 && j as i32 > n {
                break;
            }
            if df.is_zero() {
                break;
            }
            let c = binomial_signed(n as i64, j);
            out.add_at(n - j as i32 + k, &df.scale(&c));
            df = df.derivative();
            j += 1;
        }
    }
    out
}

/// (λ+∂)^n f for a differential polynomial f, truncated at λ^{−m}.
pub fn binom_expand(n: i32, m: u32, f: &DiffPoly) -> LaurentSymbol {
    shift_power(n, &LaurentSymbol::constant(f.clone(), -(m as i32)), -(m as i32))
}

pub type SymbolMatrix = Vec<Vec<LaurentSymbol>>;

/// Symbol of the composition A(∂)∘B(∂).
pub fn compose(a: &SymbolMatrix, b: &SymbolMatrix, floor: i32) -> SymbolMatrix {
    let n = a.len();
    let p = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..p)
                .map(|k| {
                    (0..b.len()).fold(LaurentSymbol::zero(floor), |acc, j| {
                        acc.add(&a[i][j].shift_apply(&b[j][k]).truncate(floor))
                    })
                })
                .collect()
        })
        .collect()
}

pub fn identity(n: usize, floor: i32) -> SymbolMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        LaurentSymbol::constant(DiffPoly::one(), floor)
                    } else {
                        LaurentSymbol::zero(floor)
                    }
                })
                .collect()
        })
        .collect()
}

/// Inverse of a square matrix symbol whose top λ-coefficient is a
/// constant invertible matrix.
pub fn symbol_invert(c: &SymbolMatrix, m: u32) -> Result<SymbolMatrix> {
    let floor = -(m as i32);
    let n = c.len();
    if c.iter().any(|r| r.len() != n) {
        return Err(Error::Shape("symbol matrix must be square".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let d = c
        .iter()
        .flatten()
        .filter_map(LaurentSymbol::degree)
        .max()
        .ok_or_else(|| Error::Singular("constraint matrix is zero".into()))?;
    let mut lead = vec![vec![Coeff::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            lead[i][j] = c[i][j]
                .coeff(d)
                .as_constant()
                .ok_or_else(|| Error::Singular("leading form is not constant".into()))?;
        }
    }
    let linv = linalg::inverse(&lead)
        .ok_or_else(|| Error::Singular("leading form is not invertible".into()))?;
    let mut x: SymbolMatrix = (0..n).map(|_| (0..n).map(|_| LaurentSymbol::zero(floor)).collect()).collect();
    let place = |x: &mut SymbolMatrix, e: i32, rows: &[Vec<DiffPoly>]| {
        for i in 0..n {
            for j in 0..n {
                let f = (0..n).fold(DiffPoly::zero(), |acc, k| &acc + &rows[k][j].scale(&linv[i][k]));
                x[i][j].add_at(e, &f);
            }
        }
    };
    let id: Vec<Vec<DiffPoly>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { DiffPoly::one() } else { DiffPoly::zero() }).collect())
        .collect();
    place(&mut x, -d, &id);
    for e in (floor..-d).rev() {
        let p = compose(c, &x, e + d);
        let err: Vec<Vec<DiffPoly>> = p.iter().map(|r| r.iter().map(|s| -&s.coeff(e + d)).collect()).collect();
        place(&mut x, e, &err);
    }
    Ok(x)
}

/// A bracket table reduced by constraints.
#[derive(Clone, Debug)]
pub struct DiracReduction {
    pub names: Vec<String>,
    pub constraints: Vec<DiffPoly>,
    pub floor: u32,
    /// {u_i λ u_j}^D on all generators.
    pub table: SymbolMatrix,
    /// Generators surviving the quotient and the table restricted to them,
    /// when every constraint is a multiple of a single generator.
    pub quotient: Option<(Vec<String>, SymbolMatrix)>,
}

struct Reducer<'a> {
    spec: &'a PvaSpec,
    theta: &'a [DiffPoly],
    cinv: Option<SymbolMatrix>,
    floor: i32,
}

impl<'a> Reducer<'a> {
    fn new(spec: &'a PvaSpec, theta: &'a [DiffPoly], m: u32) -> Result<Self> {
        let dmax = spec
            .table
            .iter()
            .flatten()
            .filter_map(LambdaPoly::degree)
            .max()
            .unwrap_or(0) as i32;
        let floor = -(m as i32) - 2 * dmax - 2;
        let n = spec.ngens();
        let central = theta.iter().all(|t| {
            (0..n).all(|i| spec.bracket(t, &DiffPoly::var(i, 0)).is_zero())
        });
        let cinv = if central || theta.is_empty() {
            None
        } else {
            let c: SymbolMatrix = theta
                .iter()
                .map(|ta| {
                    theta
                        .iter()
                        .map(|tb| LaurentSymbol::from_lambda(&spec.bracket(tb, ta), floor))
                        .collect()
                })
                .collect();
            Some(symbol_invert(&c, (-floor) as u32)?)
        };
        Ok(Reducer {
            spec,
            theta,
            cinv,
            floor,
        })
    }

    fn bracket(&self, f: &DiffPoly, g: &DiffPoly) -> LaurentSymbol {
        let base = LaurentSymbol::from_lambda(&self.spec.bracket(f, g), self.floor);
        let Some(cinv) = &self.cinv else {
            return base;
        };
        let f_theta: Vec<LaurentSymbol> = self
            .theta
            .iter()
            .map(|t| LaurentSymbol::from_lambda(&self.spec.bracket(f, t), self.floor))
            .collect();
        let mut corr = LaurentSymbol::zero(self.floor);
        for (b, tb) in self.theta.iter().enumerate() {
            let outer = LaurentSymbol::from_lambda(&self.spec.bracket(tb, g), self.floor);
            if outer.is_zero() {
                continue;
            }
            let inner = f_theta
                .iter()
                .enumerate()
                .fold(LaurentSymbol::zero(self.floor), |acc, (a, x)| {
                    acc.add(&cinv[b][a].shift_apply(x))
                });
            corr = corr.add(&outer.shift_apply(&inner));
        }
        base.sub(&corr)
    }
}

fn constraint_gen(t: &DiffPoly) -> Option<usize> {
    let (m, _) = t.leading()?;
    if t.num_terms() != 1 || m.degree() != 1 || t.max_order() != Some(0) {
        return None;
    }
    m.max_var().map(|v| v.gen)
}

/// Reduced bracket {f λ g}^D with all coefficients down to λ^{−m}.
pub fn dirac_bracket(spec: &PvaSpec, theta: &[DiffPoly], m: u32, f: &DiffPoly, g: &DiffPoly) -> Result<LaurentSymbol> {
    let r = Reducer::new(spec, theta, m)?;
    Ok(r.bracket(f, g).truncate(-(m as i32)))
}

pub fn dirac_reduce(spec: &PvaSpec, theta: &[DiffPoly], m: u32) -> Result<DiracReduction> {
    let r = Reducer::new(spec, theta, m)?;
    let n = spec.ngens();
    let floor = -(m as i32);
    let table: SymbolMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| r.bracket(&DiffPoly::var(i, 0), &DiffPoly::var(j, 0)).truncate(floor))
                .collect()
        })
        .collect();
    let gens: Option<Vec<usize>> = theta.iter().map(constraint_gen).collect();
    let quotient = gens.map(|dropped| {
        let keep: Vec<usize> = (0..n).filter(|i| !dropped.contains(i)).collect();
        let remap = |g: usize| keep.iter().position(|&k| k == g);
        let names = keep.iter().map(|&i| spec.names[i].clone()).collect();
        let t = keep
            .iter()
            .map(|&i| keep.iter().map(|&j| table[i][j].map(|f| f.map_gens(remap))).collect())
            .collect();
        (names, t)
    });
    Ok(DiracReduction {
        names: spec.names.clone(),
        constraints: theta.to_vec(),
        floor: m,
        table,
        quotient,
    })
}

impl DiracReduction {
    /// Pairs (α, i) for which θ_α fails to be central against u_i.
    pub fn centrality_failures(&self, spec: &PvaSpec) -> Result<Vec<(usize, usize)>> {
        let r = Reducer::new(spec, &self.constraints, self.floor)?;
        let floor = -(self.floor as i32);
        let mut out = Vec::new();
        for (a, t) in self.constraints.iter().enumerate() {
            for i in 0..spec.ngens() {
                let u = DiffPoly::var(i, 0);
                if !r.bracket(t, &u).truncate(floor).is_zero() || !r.bracket(&u, t).truncate(floor).is_zero() {
                    out.push((a, i));
                }
            }
        }
        Ok(out)
    }

    /// Pairs (i, j) violating {u_i λ u_j} = −{u_j −λ−∂ u_i}.
    pub fn skewsymmetry_failures(&self) -> Vec<(usize, usize)> {
        let n = self.table.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                if !self.table[i][j].add(&self.table[j][i].reflect()).is_zero() {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Recompute at a floor two lower and compare after truncation.
    pub fn coherent(&self, spec: &PvaSpec) -> Result<bool> {
        let deeper = dirac_reduce(spec, &self.constraints, self.floor + 2)?;
        let floor = -(self.floor as i32);
        Ok(deeper
            .table
            .iter()
            .flatten()
            .zip(self.table.iter().flatten())
            .all(|(a, b)| a.truncate(floor) == *b))
    }
}

/// Split an entry as local part + c·x(λ+∂)⁻¹y for generators x, y.
pub fn split_nonlocal(entry: &LaurentSymbol, x: usize, y: usize) -> Option<(LambdaPoly, Coeff)> {
    let local = entry.local_part();
    let rest = entry.sub(&LaurentSymbol::from_lambda(&local, entry.floor()));
    let xy = &DiffPoly::var(x, 0) * &DiffPoly::var(y, 0);
    let lead = rest.coeff(-1);
    let c = if lead.is_zero() {
        Coeff::zero()
    } else {
        let m = xy.leading()?.0.clone();
        let c = lead.coeff_of(&m);
        if lead != xy.scale(&c) {
            return None;
        }
        c
    };
    let model = binom_expand(-1, (-entry.floor()) as u32, &DiffPoly::var(y, 0)).scale(&DiffPoly::var(x, 0).scale(&c));
    (model == rest).then_some((local, c))
}

/// Outcome of the NLS reduction of V¹(sl2, s).
#[derive(Clone, Debug)]
pub struct NlsReport {
    pub h: DiracReduction,
    pub k: DiracReduction,
    /// The t₂ flow with the Cartan generator set to zero, on (u, v).
    pub equations: Vec<DiffPoly>,
    pub kappa_eff: Coeff,
    /// Whether the reduced K-flow of h₃ reproduces the same equations.
    pub k_flow_agrees: bool,
}

/// Dirac-reduce the affine pair on sl2 by θ = s and derive the NLS system.
pub fn nls_demo(kappa: &Coeff, m: u32) -> Result<NlsReport> {
    if kappa.is_zero() {
        return Err(Error::Invalid("kappa must be nonzero".into()));
    }
    let l = liealg::sl2_kappa(kappa);
    let s = l.unit(2);
    let h_spec = pva::affine(&l, &Coeff::one(), None)?;
    let k_spec = pva::affine_cocycle(&l, &s)?;
    let theta = [DiffPoly::var(2, 0)];
    let h = dirac_reduce(&h_spec, &theta, m)?;
    let k = dirac_reduce(&k_spec, &theta, m)?;

    let gauge = dshier::ds_gauge(&l, &s, 3)?;
    let dens = gauge.densities(&l, &s)?;
    let drop = |f: &DiffPoly| f.map_gens(|g| (g < 2).then_some(g));
    let eq2 = h_spec.hamiltonian_flow(&dens[2]);
    let equations: Vec<DiffPoly> = eq2[..2].iter().map(drop).collect();

    let (u, v) = (DiffPoly::var(0, 0), DiffPoly::var(1, 0));
    let u2v = &(&u * &u) * &v;
    let kappa_eff = equations[0].coeff_of(u2v.leading().expect("nonzero").0);
    let want_u = &DiffPoly::var(0, 2) + &u2v.scale(&kappa_eff);
    let want_v = -&(&DiffPoly::var(1, 2) + &(&(&u * &v) * &v).scale(&kappa_eff));
    if equations[0] != want_u || equations[1] != want_v {
        return Err(Error::Invalid("reduced t2 flow is not of NLS form".into()));
    }

    let (knames, ktable) = k.quotient.clone().expect("constraint is a generator");
    let local: Vec<Vec<LambdaPoly>> = ktable.iter().map(|r| r.iter().map(LaurentSymbol::local_part).collect()).collect();
    let k_local = PvaSpec::new(knames, local)?;
    let k_flow_agrees = k_local.hamiltonian_flow(&drop(&dens[3])) == equations;
    Ok(NlsReport {
        h,
        k,
        equations,
        kappa_eff,
        k_flow_agrees,
    })
}
