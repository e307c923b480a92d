use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use super::DiffPoly;
use crate::coeff::{binomial, Coeff};

/// Polynomial in λ with differential polynomial coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LambdaPoly {
    coeffs: BTreeMap<u32, DiffPoly>,
}

impl LambdaPoly {
    pub fn zero() -> Self {
        LambdaPoly::default()
    }

    pub fn constant(f: DiffPoly) -> Self {
        LambdaPoly::monomial(0, f)
    }

    /// `f λ^k`.
    pub fn monomial(k: u32, f: DiffPoly) -> Self {
        let mut p = LambdaPoly::zero();
        p.add_at(k, &f);
        p
    }

    pub fn lambda() -> Self {
        LambdaPoly::monomial(1, DiffPoly::one())
    }

    pub fn add_at(&mut self, k: u32, f: &DiffPoly) {
        if f.is_zero() {
            return;
        }
        let e = self.coeffs.entry(k).or_default();
        *e += f;
        if e.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn coeff(&self, k: u32) -> DiffPoly {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> impl DoubleEndedIterator<Item = (u32, &DiffPoly)> {
        self.coeffs.iter().map(|(k, f)| (*k, f))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Value at λ = 0.
    pub fn at_zero(&self) -> DiffPoly {
        self.coeff(0)
    }

    pub fn scale(&self, f: &DiffPoly) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        for (k, g) in &self.coeffs {
            out.add_at(*k, &(g * f));
        }
        out
    }

    pub fn scale_coeff(&self, c: &Coeff) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        for (k, g) in &self.coeffs {
            out.add_at(*k, &g.scale(c));
        }
        out
    }

    pub fn mul_lambda_pow(&self, n: u32) -> LambdaPoly {
        LambdaPoly {
            coeffs: self.coeffs.iter().map(|(k, f)| (k + n, f.clone())).collect(),
        }
    }

    /// Apply ∂ to every coefficient.
    pub fn derivative(&self) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        for (k, f) in &self.coeffs {
            out.add_at(*k, &f.derivative());
        }
        out
    }

    /// (λ+∂)^n applied to this polynomial, ∂ acting on the coefficients.
    pub fn shift(&self, n: u32) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        let mut d = self.clone();
        for k in 0..=n {
            let b = binomial(n, k);
            for (j, f) in &d.coeffs {
                out.add_at(j + n - k, &f.scale(&b));
            }
            if k < n {
                d = d.derivative();
            }
        }
        out
    }

    /// (−λ−∂)^n applied to this polynomial.
    pub fn neg_shift(&self, n: u32) -> LambdaPoly {
        let s = self.shift(n);
        if n.is_multiple_of(2) {
            s
        } else {
            -&s
        }
    }

    /// Substitute λ ↦ −λ−∂ with ∂ acting on the coefficients:
    /// Σ_n b_n λ^n ↦ Σ_n (−λ−∂)^n b_n.
    pub fn reflect(&self) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        for (n, b) in &self.coeffs {
            out += &LambdaPoly::constant(b.clone()).neg_shift(*n);
        }
        out
    }

    /// Σ_n b_n (λ+∂)^n P: substitute λ ↦ λ+∂ in self, ∂ acting on `p`.
    pub fn compose_shift(&self, p: &LambdaPoly) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        for (n, b) in &self.coeffs {
            out += &p.shift(*n).scale(b);
        }
        out
    }

    pub fn map_coeffs<F: FnMut(&DiffPoly) -> DiffPoly>(&self, mut f: F) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        for (k, g) in &self.coeffs {
            out.add_at(*k, &f(g));
        }
        out
    }
}

impl From<DiffPoly> for LambdaPoly {
    fn from(f: DiffPoly) -> Self {
        LambdaPoly::constant(f)
    }
}

impl AddAssign<&LambdaPoly> for LambdaPoly {
    fn add_assign(&mut self, rhs: &LambdaPoly) {
        for (k, f) in &rhs.coeffs {
            self.add_at(*k, f);
        }
    }
}

impl SubAssign<&LambdaPoly> for LambdaPoly {
    fn sub_assign(&mut self, rhs: &LambdaPoly) {
        for (k, f) in &rhs.coeffs {
            self.add_at(*k, &-f);
        }
    }
}

impl Add<&LambdaPoly> for &LambdaPoly {
    type Output = LambdaPoly;
    fn add(self, rhs: &LambdaPoly) -> LambdaPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&LambdaPoly> for &LambdaPoly {
    type Output = LambdaPoly;
    fn sub(self, rhs: &LambdaPoly) -> LambdaPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &LambdaPoly {
    type Output = LambdaPoly;
    fn neg(self) -> LambdaPoly {
        LambdaPoly {
            coeffs: self.coeffs.iter().map(|(k, f)| (*k, -f)).collect(),
        }
    }
}

impl Mul<&LambdaPoly> for &LambdaPoly {
    type Output = LambdaPoly;
    fn mul(self, rhs: &LambdaPoly) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        for (a, f) in &self.coeffs {
            for (b, g) in &rhs.coeffs {
                out.add_at(a + b, &(f * g));
            }
        }
        out
    }
}

/// Polynomial in two commuting variables λ, μ with DiffPoly coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LambdaMu {
    coeffs: BTreeMap<(u32, u32), DiffPoly>,
}

impl LambdaMu {
    pub fn zero() -> Self {
        LambdaMu::default()
    }

    pub fn add_at(&mut self, a: u32, b: u32, f: &DiffPoly) {
        if f.is_zero() {
            return;
        }
        let e = self.coeffs.entry((a, b)).or_default();
        *e += f;
        if e.is_zero() {
            self.coeffs.remove(&(a, b));
        }
    }

    /// Add `p(λ) μ^m`.
    pub fn add_lambda_times_mu(&mut self, p: &LambdaPoly, m: u32) {
        for (a, f) in p.coeffs() {
            self.add_at(a, m, f);
        }
    }

    /// Add `λ^m p(μ)`.
    pub fn add_mu_times_lambda(&mut self, p: &LambdaPoly, m: u32) {
        for (b, f) in p.coeffs() {
            self.add_at(m, b, f);
        }
    }

    /// Add `λ^m p(λ+μ)`.
    pub fn add_sum_times_lambda(&mut self, p: &LambdaPoly, m: u32) {
        for (n, f) in p.coeffs() {
            for k in 0..=n {
                self.add_at(m + k, n - k, &f.scale(&binomial(n, k)));
            }
        }
    }

    pub fn sub_assign(&mut self, other: &LambdaMu) {
        for ((a, b), f) in &other.coeffs {
            self.add_at(*a, *b, &-f);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero coefficients keyed by (λ-power, μ-power).
    pub fn coeffs(&self) -> impl Iterator<Item = ((u32, u32), &DiffPoly)> {
        self.coeffs.iter().map(|(k, f)| (*k, f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffalg::u;

    #[test]
    fn shift_expands_binomially() {
        let p = LambdaPoly::constant(u(0, 0));
        let s = p.shift(2);
        assert_eq!(s.coeff(2), u(0, 0));
        assert_eq!(s.coeff(1), u(0, 1).scale(&Coeff::int(2)));
        assert_eq!(s.coeff(0), u(0, 2));
    }

    #[test]
    fn reflect_is_involutive() {
        let mut p = LambdaPoly::monomial(3, u(0, 0));
        p.add_at(1, &(&u(0, 0) * &u(0, 1)));
        assert_eq!(p.reflect().reflect(), p);
    }

    #[test]
    fn sum_substitution() {
        let mut m = LambdaMu::zero();
        m.add_sum_times_lambda(&LambdaPoly::monomial(2, DiffPoly::one()), 0);
        assert_eq!(m.coeffs().count(), 3);
    }
}
