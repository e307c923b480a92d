//! Finite-dimensional Lie algebras given by structure constants, with an
//! invariant symmetric bilinear form and optional root data.

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// A root vector `e_α` with the values of α on the Cartan basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub vector: usize,
    pub values: Vec<Coeff>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RootData {
    pub cartan: Vec<usize>,
    pub roots: Vec<Root>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraData {
    pub basis: Vec<String>,
    /// `structure[i][j][k]` is the coefficient of x_k in [x_i, x_j].
    pub structure: Vec<Vec<Vec<Coeff>>>,
    pub form: Matrix,
    pub roots: Option<RootData>,
}

/// A failed identity in a validation run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Issue {
    pub kind: &'static str,
    pub indices: Vec<usize>,
    pub residual: String,
}

fn unit(d: usize, i: usize) -> Vec<Coeff> {
    let mut v = vec![Coeff::zero(); d];
    v[i] = Coeff::one();
    v
}

fn vec_is_zero(v: &[Coeff]) -> bool {
    v.iter().all(Coeff::is_zero)
}

fn vec_sub(a: &[Coeff], b: &[Coeff]) -> Vec<Coeff> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn vec_scale(a: &[Coeff], c: &Coeff) -> Vec<Coeff> {
    a.iter().map(|x| x * c).collect()
}

impl LieAlgebraData {
    /// Empty structure constants and zero form on the given basis.
    pub fn new(basis: Vec<String>) -> Self {
        let d = basis.len();
        LieAlgebraData {
            basis,
            structure: vec![vec![vec![Coeff::zero(); d]; d]; d],
            form: linalg::zeros(d, d),
            roots: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == label)
    }

    /// Set [x_i, x_j] = v and [x_j, x_i] = −v.
    pub fn set_bracket(&mut self, i: usize, j: usize, v: Vec<Coeff>) {
        self.structure[j][i] = v.iter().map(|c| -c).collect();
        self.structure[i][j] = v;
    }

    pub fn set_form(&mut self, i: usize, j: usize, c: Coeff) {
        self.form[i][j] = c.clone();
        self.form[j][i] = c;
    }

    pub fn unit(&self, i: usize) -> Vec<Coeff> {
        unit(self.dim(), i)
    }

    pub fn bracket(&self, x: &[Coeff], y: &[Coeff]) -> Vec<Coeff> {
        let d = self.dim();
        let mut out = vec![Coeff::zero(); d];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let f = xi * yj;
                for (k, c) in self.structure[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &(&f * c);
                    }
                }
            }
        }
        out
    }

    pub fn pair(&self, x: &[Coeff], y: &[Coeff]) -> Coeff {
        let gy = linalg::mul_vec(&self.form, y);
        x.iter().zip(&gy).fold(Coeff::zero(), |acc, (a, b)| &acc + &(a * b))
    }

    /// Matrix of ad x acting on coordinate columns.
    pub fn ad(&self, x: &[Coeff]) -> Matrix {
        let d = self.dim();
        let cols: Vec<Vec<Coeff>> = (0..d).map(|j| self.bracket(x, &self.unit(j))).collect();
        linalg::transpose(&cols)
    }

    pub fn validate(&self) -> Vec<Issue> {
        let d = self.dim();
        let mut issues = Vec::new();
        let show = |v: &[Coeff]| -> String {
            let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
            format!("({})", parts.join(", "))
        };
        for i in 0..d {
            for j in 0..d {
                let s: Vec<Coeff> = self.structure[i][j]
                    .iter()
                    .zip(&self.structure[j][i])
                    .map(|(a, b)| a + b)
                    .collect();
                if !vec_is_zero(&s) {
                    issues.push(Issue {
                        kind: "antisymmetry",
                        indices: vec![i, j],
                        residual: show(&s),
                    });
                }
                let f = &self.form[i][j] - &self.form[j][i];
                if !f.is_zero() {
                    issues.push(Issue {
                        kind: "form-symmetry",
                        indices: vec![i, j],
                        residual: f.to_string(),
                    });
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let (x, y, z) = (self.unit(i), self.unit(j), self.unit(k));
                    let a = self.bracket(&x, &self.bracket(&y, &z));
                    let b = self.bracket(&y, &self.bracket(&z, &x));
                    let c = self.bracket(&z, &self.bracket(&x, &y));
                    let sum: Vec<Coeff> = a.iter().zip(&b).zip(&c).map(|((p, q), r)| &(p + q) + r).collect();
                    if !vec_is_zero(&sum) {
                        issues.push(Issue {
                            kind: "jacobi",
                            indices: vec![i, j, k],
                            residual: show(&sum),
                        });
                    }
                    let inv = &self.pair(&x, &self.bracket(&y, &z)) - &self.pair(&self.bracket(&x, &y), &z);
                    if !inv.is_zero() {
                        issues.push(Issue {
                            kind: "invariance",
                            indices: vec![i, j, k],
                            residual: inv.to_string(),
                        });
                    }
                }
            }
        }
        if let Some(rd) = &self.roots {
            for r in &rd.roots {
                for (h, val) in rd.cartan.iter().zip(&r.values) {
                    let lhs = self.bracket(&self.unit(*h), &self.unit(r.vector));
                    let res = vec_sub(&lhs, &vec_scale(&self.unit(r.vector), val));
                    if !vec_is_zero(&res) {
                        issues.push(Issue {
                            kind: "root",
                            indices: vec![*h, r.vector],
                            residual: show(&res),
                        });
                    }
                }
            }
        }
        issues
    }

    /// Pairs (a^i, b^i) with (b^i|a^j) = δ_ij; a^i is the i-th basis vector.
    pub fn dual_bases(&self) -> Result<(Vec<Vec<Coeff>>, Vec<Vec<Coeff>>)> {
        let inv = linalg::inverse(&self.form).ok_or(Error::DegenerateForm)?;
        let a = (0..self.dim()).map(|i| self.unit(i)).collect();
        Ok((a, inv))
    }

    /// The eigenvalue of Σ ad(a^i) ad(b^i) on the adjoint module (= 2h∨).
    pub fn casimir_adjoint_eigenvalue(&self) -> Result<Coeff> {
        let (a, b) = self.dual_bases()?;
        let d = self.dim();
        let mut cas = linalg::zeros(d, d);
        for (ai, bi) in a.iter().zip(&b) {
            let p = linalg::mul(&self.ad(ai), &self.ad(bi));
            for r in 0..d {
                for c in 0..d {
                    cas[r][c] += &p[r][c];
                }
            }
        }
        let ev = cas[0][0].clone();
        for r in 0..d {
            for c in 0..d {
                let want = if r == c { ev.clone() } else { Coeff::zero() };
                if cas[r][c] != want {
                    return Err(Error::CasimirNotScalar);
                }
            }
        }
        if ev.is_zero() {
            return Err(Error::CasimirNotScalar);
        }
        Ok(ev)
    }

    /// Dual Coxeter number relative to the stored form.
    pub fn dual_coxeter(&self) -> Result<Coeff> {
        Ok(&self.casimir_adjoint_eigenvalue()? / &Coeff::int(2))
    }

    pub fn s_decomposition(&self, s: &[Coeff]) -> Result<SDecomposition> {
        let d = self.dim();
        let ad = self.ad(s);
        let centralizer = linalg::nullspace(&ad, d);
        let image = linalg::column_basis(&ad);
        let mut cols = centralizer.clone();
        cols.extend(image.iter().cloned());
        let change = linalg::transpose(&cols);
        let to_coords = if cols.len() == d {
            linalg::inverse(&change)
        } else {
            None
        }
        .ok_or_else(|| Error::NotSemisimple("ker ad s and Im ad s do not span".into()))?;
        // ad s restricted to the image, in image coordinates
        let nh = centralizer.len();
        let mut restricted = linalg::zeros(image.len(), image.len());
        for (j, w) in image.iter().enumerate() {
            let aw = linalg::mul_vec(&ad, w);
            let c = linalg::mul_vec(&to_coords, &aw);
            for i in 0..image.len() {
                restricted[i][j] = c[nh + i].clone();
            }
        }
        let restricted_inv = linalg::inverse(&restricted)
            .ok_or_else(|| Error::NotSemisimple("ad s singular on its image".into()))?;
        Ok(SDecomposition {
            centralizer,
            complement: image,
            to_coords,
            restricted_inv,
        })
    }
}

/// 𝔤 = 𝔥 ⊕ 𝔥^⊥ with 𝔥 = ker ad s and 𝔥^⊥ = Im ad s.
#[derive(Clone, Debug)]
pub struct SDecomposition {
    pub centralizer: Vec<Vec<Coeff>>,
    pub complement: Vec<Vec<Coeff>>,
    to_coords: Matrix,
    restricted_inv: Matrix,
}

impl SDecomposition {
    fn split(&self, x: &[Coeff]) -> (Vec<Coeff>, Vec<Coeff>) {
        let c = linalg::mul_vec(&self.to_coords, x);
        let nh = self.centralizer.len();
        (c[..nh].to_vec(), c[nh..].to_vec())
    }

    fn combine(basis: &[Vec<Coeff>], coords: &[Coeff], d: usize) -> Vec<Coeff> {
        let mut out = vec![Coeff::zero(); d];
        for (w, c) in basis.iter().zip(coords) {
            for (o, wi) in out.iter_mut().zip(w) {
                *o += &(c * wi);
            }
        }
        out
    }

    pub fn proj_h(&self, x: &[Coeff]) -> Vec<Coeff> {
        Self::combine(&self.centralizer, &self.split(x).0, x.len())
    }

    pub fn proj_perp(&self, x: &[Coeff]) -> Vec<Coeff> {
        Self::combine(&self.complement, &self.split(x).1, x.len())
    }

    /// (ad s)⁻¹ on 𝔥^⊥; the 𝔥-component of `x` is ignored.
    pub fn ad_s_inv(&self, x: &[Coeff]) -> Vec<Coeff> {
        let y = self.split(x).1;
        let c = linalg::mul_vec(&self.restricted_inv, &y);
        Self::combine(&self.complement, &c, x.len())
    }
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// sl2 with basis (e, h, f), [e,f] = h, [h,e] = 2e, [h,f] = −2f and the
/// trace form of the defining representation.
pub fn sl2() -> LieAlgebraData {
    let mut l = LieAlgebraData::new(labels(&["e", "h", "f"]));
    let q = Coeff::int;
    l.set_bracket(0, 2, vec![q(0), q(1), q(0)]);
    l.set_bracket(1, 0, vec![q(2), q(0), q(0)]);
    l.set_bracket(1, 2, vec![q(0), q(0), q(-2)]);
    l.set_form(0, 2, q(1));
    l.set_form(1, 1, q(2));
    l.roots = Some(RootData {
        cartan: vec![1],
        roots: vec![
            Root { vector: 0, values: vec![q(2)] },
            Root { vector: 2, values: vec![q(-2)] },
        ],
    });
    l
}

/// sl2 with basis (ea, fa, s) = (e_α, e_{−α}, s): [s, e_{±α}] = ±e_{±α},
/// (e_α|e_{−α}) = 1 and (α|α) = −κ. Invariance then forces
/// [e_α, e_{−α}] = −κ s and (s|s) = −1/κ.
pub fn sl2_kappa(kappa: &Coeff) -> LieAlgebraData {
    let mut l = LieAlgebraData::new(labels(&["ea", "fa", "s"]));
    let (z, one) = (Coeff::zero(), Coeff::one());
    l.set_bracket(0, 1, vec![z.clone(), z.clone(), -kappa]);
    l.set_bracket(2, 0, vec![one.clone(), z.clone(), z.clone()]);
    l.set_bracket(2, 1, vec![z.clone(), -&one, z.clone()]);
    l.set_form(0, 1, one.clone());
    l.set_form(2, 2, -&kappa.inv().expect("kappa nonzero"));
    l.roots = Some(RootData {
        cartan: vec![2],
        roots: vec![
            Root { vector: 0, values: vec![one.clone()] },
            Root { vector: 1, values: vec![-&one] },
        ],
    });
    l
}

/// One-dimensional abelian algebra with (a|a) = 1.
pub fn abelian1() -> LieAlgebraData {
    let mut l = LieAlgebraData::new(labels(&["a"]));
    l.set_form(0, 0, Coeff::one());
    l
}

/// Lie algebra spanned by the given matrices, bracket the commutator and
/// form the trace form. Fails if the span is not closed.
pub fn from_matrices(names: Vec<String>, mats: &[Matrix]) -> Result<LieAlgebraData> {
    let d = mats.len();
    let flat = |m: &Matrix| -> Vec<Coeff> { m.iter().flatten().cloned().collect() };
    let columns: Matrix = linalg::transpose(&mats.iter().map(flat).collect::<Vec<_>>());
    let mut l = LieAlgebraData::new(names);
    for i in 0..d {
        for j in 0..d {
            let ab = linalg::mul(&mats[i], &mats[j]);
            let ba = linalg::mul(&mats[j], &mats[i]);
            let comm: Matrix = ab
                .iter()
                .zip(&ba)
                .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
                .collect();
            let coords = linalg::solve(&columns, &flat(&comm))
                .ok_or_else(|| Error::InvalidLie("span not closed under commutator".into()))?;
            l.structure[i][j] = coords;
            let tr = (0..ab.len()).fold(Coeff::zero(), |acc, k| &acc + &ab[k][k]);
            l.form[i][j] = tr;
        }
    }
    Ok(l)
}

fn elementary(n: usize, i: usize, j: usize) -> Matrix {
    let mut m = linalg::zeros(n, n);
    m[i][j] = Coeff::one();
    m
}

/// gl_n with basis E_ij and the trace form.
pub fn gl(n: usize) -> LieAlgebraData {
    let mut names = Vec::new();
    let mut mats = Vec::new();
    for i in 0..n {
        for j in 0..n {
            names.push(format!("E{}{}", i + 1, j + 1));
            mats.push(elementary(n, i, j));
        }
    }
    from_matrices(names, &mats).expect("gl_n is closed")
}

/// sl_n with basis E_ij (i ≠ j), H_i = E_ii − E_{i+1,i+1} and the trace form.
pub fn sl(n: usize) -> LieAlgebraData {
    let mut names = Vec::new();
    let mut mats = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                names.push(format!("E{}{}", i + 1, j + 1));
                mats.push(elementary(n, i, j));
            }
        }
    }
    for i in 0..n - 1 {
        names.push(format!("H{}", i + 1));
        let mut m = elementary(n, i, i);
        m[i + 1][i + 1] = Coeff::int(-1);
        mats.push(m);
    }
    from_matrices(names, &mats).expect("sl_n is closed")
}
