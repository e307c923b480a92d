use std::collections::BTreeMap;

use super::{DiffPoly, LambdaPoly};
use crate::coeff::{binomial, Coeff};
use crate::error::{Error, Result};

/// Scalar differential operator Σ_k f_k ∂^k, coefficients on the left.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct OpEntry {
    terms: BTreeMap<u32, DiffPoly>,
}

impl OpEntry {
    pub fn zero() -> Self {
        OpEntry::default()
    }

    pub fn one() -> Self {
        OpEntry::mult(DiffPoly::one())
    }

    /// Multiplication by `f`.
    pub fn mult(f: DiffPoly) -> Self {
        OpEntry::term(f, 0)
    }

    /// ∂^k.
    pub fn d(k: u32) -> Self {
        OpEntry::term(DiffPoly::one(), k)
    }

    /// f ∂^k.
    pub fn term(f: DiffPoly, k: u32) -> Self {
        let mut e = OpEntry::zero();
        e.add_at(k, &f);
        e
    }

    pub fn add_at(&mut self, k: u32, f: &DiffPoly) {
        if f.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_default();
        *e += f;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn coeff(&self, k: u32) -> DiffPoly {
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u32, &DiffPoly)> {
        self.terms.iter().map(|(k, f)| (*k, f))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn add(&self, other: &OpEntry) -> OpEntry {
        let mut out = self.clone();
        for (k, f) in &other.terms {
            out.add_at(*k, f);
        }
        out
    }

    pub fn neg(&self) -> OpEntry {
        OpEntry {
            terms: self.terms.iter().map(|(k, f)| (*k, -f)).collect(),
        }
    }

    pub fn sub(&self, other: &OpEntry) -> OpEntry {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Coeff) -> OpEntry {
        let mut out = OpEntry::zero();
        for (k, f) in &self.terms {
            out.add_at(*k, &f.scale(c));
        }
        out
    }

    /// Left multiplication by a function.
    pub fn left_mul(&self, g: &DiffPoly) -> OpEntry {
        let mut out = OpEntry::zero();
        for (k, f) in &self.terms {
            out.add_at(*k, &(g * f));
        }
        out
    }

    /// `self ∘ other`, using ∂^a ∘ g = Σ_k C(a,k) g^(k) ∂^(a−k).
    pub fn compose(&self, other: &OpEntry) -> OpEntry {
        let mut out = OpEntry::zero();
        for (b, g) in &other.terms {
            let max_a = self.order().unwrap_or(0);
            let mut ders = Vec::with_capacity(max_a as usize + 1);
            ders.push(g.clone());
            for i in 0..max_a as usize {
                let next = ders[i].derivative();
                ders.push(next);
            }
            for (a, f) in &self.terms {
                for k in 0..=*a {
                    let t = (f * &ders[k as usize]).scale(&binomial(*a, k));
                    out.add_at(a - k + b, &t);
                }
            }
        }
        out
    }

    /// Formal adjoint: f∂^k ↦ (−∂)^k ∘ f.
    pub fn adjoint(&self) -> OpEntry {
        let mut out = OpEntry::zero();
        for (k, f) in &self.terms {
            let sign = if k % 2 == 0 { Coeff::one() } else { Coeff::int(-1) };
            let mut fj = f.clone();
            for j in 0..=*k {
                out.add_at(k - j, &fj.scale(&(&sign * &binomial(*k, j))));
                if j < *k {
                    fj = fj.derivative();
                }
            }
        }
        out
    }

    pub fn apply(&self, g: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        let mut d = g.clone();
        let top = self.order().unwrap_or(0);
        for k in 0..=top {
            let f = self.coeff(k);
            if !f.is_zero() {
                out += &(&f * &d);
            }
            if k < top {
                d = d.derivative();
            }
        }
        out
    }

    /// The symbol: ∂ replaced by λ.
    pub fn symbol(&self) -> LambdaPoly {
        let mut p = LambdaPoly::zero();
        for (k, f) in &self.terms {
            p.add_at(*k, f);
        }
        p
    }

    pub fn from_symbol(p: &LambdaPoly) -> OpEntry {
        let mut e = OpEntry::zero();
        for (k, f) in p.coeffs() {
            e.add_at(k, f);
        }
        e
    }
}

/// Matrix differential operator, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffOp {
    rows: usize,
    cols: usize,
    entries: Vec<OpEntry>,
}

impl DiffOp {
    pub fn zero(rows: usize, cols: usize) -> Self {
        DiffOp {
            rows,
            cols,
            entries: vec![OpEntry::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DiffOp::zero(n, n);
        for i in 0..n {
            m.set(i, i, OpEntry::one());
        }
        m
    }

    pub fn scalar(e: OpEntry) -> Self {
        DiffOp {
            rows: 1,
            cols: 1,
            entries: vec![e],
        }
    }

    pub fn from_rows(rows: Vec<Vec<OpEntry>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged operator rows".into()));
        }
        Ok(DiffOp {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &OpEntry {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: OpEntry) {
        self.entries[i * self.cols + j] = e;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(OpEntry::is_zero)
    }

    pub fn order(&self) -> Option<u32> {
        self.entries.iter().filter_map(OpEntry::order).max()
    }

    fn zip(&self, other: &DiffOp, f: impl Fn(&OpEntry, &OpEntry) -> OpEntry) -> Result<DiffOp> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(DiffOp {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &DiffOp) -> Result<DiffOp> {
        self.zip(other, OpEntry::add)
    }

    pub fn sub(&self, other: &DiffOp) -> Result<DiffOp> {
        self.zip(other, OpEntry::sub)
    }

    pub fn neg(&self) -> DiffOp {
        self.map(OpEntry::neg)
    }

    pub fn scale(&self, c: &Coeff) -> DiffOp {
        self.map(|e| e.scale(c))
    }

    fn map(&self, f: impl Fn(&OpEntry) -> OpEntry) -> DiffOp {
        DiffOp {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> DiffOp {
        let mut out = DiffOp::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn compose(&self, other: &DiffOp) -> Result<DiffOp> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot compose {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = DiffOp::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = OpEntry::zero();
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.compose(b));
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// (A*)_{ij} = (A_{ji})*.
    pub fn adjoint(&self) -> DiffOp {
        let mut out = DiffOp::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).adjoint());
            }
        }
        out
    }

    pub fn apply(&self, f: &[DiffPoly]) -> Result<Vec<DiffPoly>> {
        if f.len() != self.cols {
            return Err(Error::Shape(format!(
                "operator has {} columns, vector has {} entries",
                self.cols,
                f.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = DiffPoly::zero();
                for (j, fj) in f.iter().enumerate() {
                    acc += &self.get(i, j).apply(fj);
                }
                acc
            })
            .collect())
    }

    pub fn is_skewadjoint(&self) -> bool {
        self.adjoint() == self.neg()
    }

    pub fn is_selfadjoint(&self) -> bool {
        self.adjoint() == *self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffalg::testgen::arb_poly;
    use crate::diffalg::u;
    use proptest::prelude::*;

    fn mv() -> OpEntry {
        let c = Coeff::param("c");
        let mut e = OpEntry::mult(u(0, 1));
        e.add_at(1, &u(0, 0).scale(&Coeff::int(2)));
        e.add_at(3, &DiffPoly::constant(c));
        e
    }

    #[test]
    fn leibniz_normalization() {
        let e = OpEntry::d(1).compose(&OpEntry::mult(u(0, 0)));
        let mut expect = OpEntry::term(u(0, 0), 1);
        expect.add_at(0, &u(0, 1));
        assert_eq!(e, expect);
        assert_eq!(OpEntry::d(1).compose(&OpEntry::d(1)), OpEntry::d(2));
    }

    #[test]
    fn adjoints() {
        assert_eq!(OpEntry::d(1).adjoint(), OpEntry::d(1).neg());
        assert_eq!(OpEntry::d(2).adjoint(), OpEntry::d(2));
        assert_eq!(mv().adjoint(), mv().neg());
    }

    #[test]
    fn mv_application() {
        let c = Coeff::param("c");
        assert_eq!(mv().apply(&DiffPoly::one()), u(0, 1));
        let eq1 = &(&u(0, 0) * &u(0, 1)).scale(&Coeff::int(3)) + &u(0, 3).scale(&c);
        assert_eq!(mv().apply(&u(0, 0)), eq1);
        let via_compose = mv().compose(&OpEntry::one()).apply(&u(0, 0));
        assert_eq!(via_compose, eq1);
    }

    #[test]
    fn shape_errors() {
        let a = DiffOp::zero(2, 3);
        assert!(a.compose(&DiffOp::zero(2, 2)).is_err());
        assert!(a.apply(&[DiffPoly::one()]).is_err());
    }

    fn arb_entry() -> impl Strategy<Value = OpEntry> {
        prop::collection::vec(arb_poly(1, 2, 2, 3), 1..=4).prop_map(|fs| {
            let mut e = OpEntry::zero();
            for (k, f) in fs.iter().enumerate() {
                e.add_at(k as u32, f);
            }
            e
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn adjoint_anti_involution(a in arb_entry(), b in arb_entry()) {
            prop_assert_eq!(a.adjoint().adjoint(), a.clone());
            prop_assert_eq!(a.compose(&b).adjoint(), b.adjoint().compose(&a.adjoint()));
        }

        #[test]
        fn composition_is_application(a in arb_entry(), b in arb_entry(), f in arb_poly(1, 2, 2, 3)) {
            prop_assert_eq!(a.compose(&b).apply(&f), a.apply(&b.apply(&f)));
        }
    }
}
