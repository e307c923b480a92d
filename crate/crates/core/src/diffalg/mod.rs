//! The differential polynomial algebra P_ℓ = 𝔽[u_i^(n)] over ℚ(params).

mod lambda;
mod op;

use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::coeff::Coeff;

pub use lambda::{LambdaMu, LambdaPoly};
pub use op::{DiffOp, OpEntry};

/// The jet variable u_gen^(order).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DerivVar {
    pub gen: usize,
    pub order: u32,
}

impl DerivVar {
    pub fn new(gen: usize, order: u32) -> Self {
        DerivVar { gen, order }
    }

    pub fn next(self) -> Self {
        DerivVar::new(self.gen, self.order + 1)
    }
}

/// Power product of jet variables, sorted, exponents positive.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(DerivVar, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: DerivVar) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_factors(mut f: Vec<(DerivVar, u32)>) -> Self {
        f.retain(|(_, e)| *e > 0);
        f.sort();
        let mut out: Vec<(DerivVar, u32)> = Vec::with_capacity(f.len());
        for (v, e) in f {
            match out.last_mut() {
                Some((w, x)) if *w == v => *x += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn factors(&self) -> &[(DerivVar, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    /// Total number of derivatives, Σ order·exponent.
    pub fn weight(&self) -> u32 {
        self.0.iter().map(|(v, e)| v.order * e).sum()
    }

    pub fn exponent(&self, v: DerivVar) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| *w == v)
            .map_or(0, |(_, e)| *e)
    }

    /// Degree in each generator, `out[g]` for `g < ngens`.
    pub fn multidegree(&self, ngens: usize) -> Vec<u32> {
        let mut out = vec![0; ngens];
        for (v, e) in &self.0 {
            out[v.gen] += e;
        }
        out
    }

    pub fn max_var(&self) -> Option<DerivVar> {
        self.0.last().map(|(v, _)| *v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Remove one factor `v`, returning the old exponent, if present.
    pub fn remove_one(&self, v: DerivVar) -> Option<(Monomial, u32)> {
        let pos = self.0.iter().position(|(w, _)| *w == v)?;
        let mut out = self.0.clone();
        let e = out[pos].1;
        if e == 1 {
            out.remove(pos);
        } else {
            out[pos].1 -= 1;
        }
        Some((Monomial(out), e))
    }

    pub fn mul_var(&self, v: DerivVar) -> Monomial {
        self.mul(&Monomial::var(v))
    }
}

/// Element of P_ℓ: a finite map from monomials to nonzero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DiffPoly {
    terms: BTreeMap<Monomial, Coeff>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly::default()
    }

    pub fn one() -> Self {
        DiffPoly::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Self {
        DiffPoly::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: Coeff) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        DiffPoly { terms }
    }

    /// The variable u_gen^(order).
    pub fn var(gen: usize, order: u32) -> Self {
        DiffPoly::term(Monomial::var(DerivVar::new(gen, order)), Coeff::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Coeff)>>(it: I) -> Self {
        let mut p = DiffPoly::zero();
        for (m, c) in it {
            p.add_term(m, &c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: &Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn as_constant(&self) -> Option<Coeff> {
        if self.is_constant() {
            Some(self.constant_term())
        } else {
            None
        }
    }

    pub fn constant_term(&self) -> Coeff {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(Coeff::zero)
    }

    pub fn coeff_of(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Leading term in the monomial order.
    pub fn leading(&self) -> Option<(&Monomial, &Coeff)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Maximal derivative order among occurring variables, if any.
    pub fn max_order(&self) -> Option<u32> {
        self.vars().iter().map(|v| v.order).max()
    }

    pub fn max_order_in(&self, gen: usize) -> Option<u32> {
        self.vars()
            .iter()
            .filter(|v| v.gen == gen)
            .map(|v| v.order)
            .max()
    }

    pub fn vars(&self) -> BTreeSet<DerivVar> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| *v))
            .collect()
    }

    pub fn max_gen(&self) -> Option<usize> {
        self.vars().iter().map(|v| v.gen).max()
    }

    pub fn scale(&self, c: &Coeff) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Coeff) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(n, x)| (n.mul(m), x * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> DiffPoly {
        let mut acc = DiffPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// The total derivative ∂.
    pub fn derivative(&self) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            for (v, e) in &m.0 {
                let (rest, _) = m.remove_one(*v).expect("factor present");
                out.add_term(rest.mul_var(v.next()), &(c * &Coeff::int(*e as i64)));
            }
        }
        out
    }

    /// ∂^n.
    pub fn derivative_n(&self, n: u32) -> DiffPoly {
        let mut p = self.clone();
        for _ in 0..n {
            p = p.derivative();
        }
        p
    }

    /// Partial derivative ∂/∂u_i^(n).
    pub fn partial(&self, v: DerivVar) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            if let Some((rest, e)) = m.remove_one(v) {
                out.add_term(rest, &(c * &Coeff::int(e as i64)));
            }
        }
        out
    }

    /// Split into components of equal total degree.
    pub fn by_degree(&self) -> BTreeMap<u32, DiffPoly> {
        let mut out: BTreeMap<u32, DiffPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree()).or_default().add_term(m.clone(), c);
        }
        out
    }

    /// Apply a map to every coefficient.
    pub fn map_coeffs<F: FnMut(&Coeff) -> Coeff>(&self, mut f: F) -> DiffPoly {
        DiffPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Substitute a differential polynomial for each generator; `sub[g]`
    /// replaces u_g and its derivatives are taken accordingly.
    pub fn substitute_gens(&self, sub: &[DiffPoly]) -> DiffPoly {
        let mut cache: BTreeMap<DerivVar, DiffPoly> = BTreeMap::new();
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let mut acc = DiffPoly::constant(c.clone());
            for (v, e) in &m.0 {
                let val = cache
                    .entry(*v)
                    .or_insert_with(|| sub[v.gen].derivative_n(v.order))
                    .clone();
                acc = &acc * &val.pow(*e);
            }
            out += &acc;
        }
        out
    }

    /// Relabel generators; monomials containing a dropped generator vanish.
    pub fn map_gens<F: Fn(usize) -> Option<usize>>(&self, f: F) -> DiffPoly {
        let mut out = DiffPoly::zero();
        'terms: for (m, c) in &self.terms {
            let mut fs = Vec::with_capacity(m.0.len());
            for (v, e) in &m.0 {
                match f(v.gen) {
                    Some(g) => fs.push((DerivVar::new(g, v.order), *e)),
                    None => continue 'terms,
                }
            }
            out.add_term(Monomial::from_factors(fs), c);
        }
        out
    }
}

impl From<Coeff> for DiffPoly {
    fn from(c: Coeff) -> Self {
        DiffPoly::constant(c)
    }
}

impl AddAssign<&DiffPoly> for DiffPoly {
    fn add_assign(&mut self, rhs: &DiffPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c);
        }
    }
}

impl SubAssign<&DiffPoly> for DiffPoly {
    fn sub_assign(&mut self, rhs: &DiffPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), &-c);
        }
    }
}

impl Add<&DiffPoly> for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&DiffPoly> for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        DiffPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul<&DiffPoly> for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<DiffPoly> for DiffPoly {
            type Output = DiffPoly;
            fn $m(self, rhs: DiffPoly) -> DiffPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&DiffPoly> for DiffPoly {
            type Output = DiffPoly;
            fn $m(self, rhs: &DiffPoly) -> DiffPoly {
                (&self).$m(rhs)
            }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        -&self
    }
}

/// Shorthand for u_gen^(order) used throughout tests and builders.
pub fn u(gen: usize, order: u32) -> DiffPoly {
    DiffPoly::var(gen, order)
}

/// A coefficient as a constant polynomial.
pub fn cst(c: Coeff) -> DiffPoly {
    DiffPoly::constant(c)
}

#[cfg(test)]
pub(crate) mod testgen {
    use super::*;
    use proptest::prelude::*;

    /// Random polynomial in `ngens` generators with degree ≤ `deg`, order ≤ `ord`.
    pub fn arb_poly(ngens: usize, deg: u32, ord: u32, max_terms: usize) -> BoxedStrategy<DiffPoly> {
        let var = (0..ngens, 0..=ord).prop_map(|(g, o)| DerivVar::new(g, o));
        let mono = prop::collection::vec(var, 0..=deg as usize)
            .prop_map(|vs| Monomial::from_factors(vs.into_iter().map(|v| (v, 1)).collect()));
        let coeff = prop_oneof![
            4 => (-4i64..5, 1i64..4).prop_map(|(n, d)| Coeff::ratio(n, d)),
            1 => (-2i64..3).prop_map(|n| &Coeff::param("c") * &Coeff::int(n)),
        ];
        prop::collection::vec((mono, coeff), 0..=max_terms)
            .prop_map(DiffPoly::from_terms)
            .boxed()
    }
}
