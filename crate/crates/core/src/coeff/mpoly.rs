//! Multivariate polynomials with arbitrary-precision integer coefficients in
//! named parameters.
//!
//! Terms are kept in descending lexicographic order, where parameters are
//! compared by name and a smaller name is a more significant variable.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A parameter name such as `c`, `k` or `kappa`.
pub type Param = Arc<str>;

/// Power product of parameters, sorted by name, exponents positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PMono(Vec<(Param, u32)>);

impl PMono {
    pub fn one() -> Self {
        PMono(Vec::new())
    }

    pub fn var(name: Param) -> Self {
        PMono(vec![(name, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Param, u32)] {
        &self.0
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        self.0
            .iter()
            .find(|(n, _)| n.as_ref() == name)
            .map_or(0, |(_, e)| *e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &PMono) -> PMono {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        PMono(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &PMono) -> Option<PMono> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (name, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < *name {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == *name {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((name.clone(), e - f)),
                }
            } else {
                out.push((name.clone(), *e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(PMono(out))
    }

    fn without(&self, name: &str) -> PMono {
        PMono(
            self.0
                .iter()
                .filter(|(n, _)| n.as_ref() != name)
                .cloned()
                .collect(),
        )
    }

    fn with_power(&self, name: &Param, exp: u32) -> PMono {
        if exp == 0 {
            return self.clone();
        }
        self.mul(&PMono(vec![(name.clone(), exp)]))
    }
}

impl Ord for PMono {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((na, ea)), Some((nb, eb))) => match na.cmp(nb) {
                    Ordering::Equal => match ea.cmp(eb) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        o => return o,
                    },
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                },
            }
        }
    }
}

impl PartialOrd for PMono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Integer polynomial in named parameters. Terms sorted descending, no zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: Vec<(PMono, BigInt)>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            MPoly {
                terms: vec![(PMono::one(), c)],
            }
        }
    }

    pub fn param(name: Param) -> Self {
        MPoly {
            terms: vec![(PMono::var(name), BigInt::one())],
        }
    }

    pub fn term(m: PMono, c: BigInt) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            MPoly { terms: vec![(m, c)] }
        }
    }

    fn from_map(map: BTreeMap<PMono, BigInt>) -> Self {
        MPoly {
            terms: map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn terms(&self) -> &[(PMono, BigInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one_poly(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<BigInt> {
        match self.terms.as_slice() {
            [] => Some(BigInt::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(PMono, BigInt)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.terms.first().map_or_else(BigInt::zero, |t| t.1.clone())
    }

    pub fn params(&self) -> Vec<Param> {
        let mut out: Vec<Param> = self
            .terms
            .iter()
            .flat_map(|(m, _)| m.0.iter().map(|(n, _)| n.clone()))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut map: BTreeMap<PMono, BigInt> = BTreeMap::new();
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            *map.entry(m.clone()).or_insert_with(BigInt::zero) += c;
        }
        Self::from_map(map)
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some(c) = other.constant_value() {
            return self.scale(&c);
        }
        if let Some(c) = self.constant_value() {
            return other.scale(&c);
        }
        let mut map: BTreeMap<PMono, BigInt> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *map.entry(ma.mul(mb)).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        Self::from_map(map)
    }

    pub fn scale(&self, c: &BigInt) -> MPoly {
        if c.is_zero() {
            return Self::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Gcd of the integer coefficients (non-negative).
    pub fn content(&self) -> BigInt {
        self.terms
            .iter()
            .fold(BigInt::zero(), |g, (_, c)| g.gcd(c))
    }

    /// Divide every coefficient by an integer that divides all of them.
    pub fn div_int_exact(&self, d: &BigInt) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c / d)).collect(),
        }
    }

    /// Exact quotient `self / other`, or `None` if `other` does not divide.
    pub fn div_exact(&self, other: &MPoly) -> Option<MPoly> {
        assert!(!other.is_zero(), "division by zero polynomial");
        if let Some(c) = other.constant_value() {
            if self.terms.iter().all(|(_, x)| x.is_multiple_of(&c)) {
                return Some(self.div_int_exact(&c));
            }
            return None;
        }
        let (lm, lc) = other.terms[0].clone();
        let mut rem = self.clone();
        let mut quot: BTreeMap<PMono, BigInt> = BTreeMap::new();
        while let Some((rm, rc)) = rem.terms.first().cloned() {
            let m = rm.div(&lm)?;
            if !rc.is_multiple_of(&lc) {
                return None;
            }
            let c = &rc / &lc;
            let t = MPoly::term(m.clone(), c.clone());
            rem = rem.sub(&t.mul(other));
            *quot.entry(m).or_insert_with(BigInt::zero) += c;
        }
        Some(Self::from_map(quot))
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.degree_in(name))
            .max()
            .unwrap_or(0)
    }

    /// Coefficient of `name^k`, as a polynomial free of `name`.
    pub fn coeff_in(&self, name: &str, k: u32) -> MPoly {
        let mut map = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.degree_in(name) == k {
                map.insert(m.without(name), c.clone());
            }
        }
        Self::from_map(map)
    }

    fn shift_in(&self, name: &Param, k: u32) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.with_power(name, k), c.clone()))
                .collect(),
        }
    }

    /// Substitute a polynomial for a parameter.
    pub fn substitute(&self, name: &str, value: &MPoly) -> MPoly {
        let mut acc = MPoly::zero();
        for (m, c) in &self.terms {
            let e = m.degree_in(name);
            let rest = MPoly::term(m.without(name), c.clone());
            acc = acc.add(&rest.mul(&value.pow(e)));
        }
        acc
    }

    /// Sign-normalized: leading coefficient positive.
    pub fn normalize_sign(self) -> MPoly {
        if self.leading_coeff().is_negative() {
            self.neg()
        } else {
            self
        }
    }

    fn content_in(&self, name: &str) -> MPoly {
        let d = self.degree_in(name);
        let mut g = MPoly::zero();
        for k in 0..=d {
            let c = self.coeff_in(name, k);
            if !c.is_zero() {
                g = gcd(&g, &c);
                if g.constant_value().is_some_and(|v| v.is_one()) {
                    break;
                }
            }
        }
        g
    }

    fn primitive_in(&self, name: &str) -> MPoly {
        let c = self.content_in(name);
        self.div_exact(&c).expect("content divides")
    }
}

fn pseudo_rem(p: &MPoly, q: &MPoly, name: &Param) -> MPoly {
    let dq = q.degree_in(name);
    let lq = q.coeff_in(name, dq);
    let mut r = p.clone();
    while !r.is_zero() {
        let dr = r.degree_in(name);
        if dr < dq {
            break;
        }
        let lr = r.coeff_in(name, dr);
        r = r.mul(&lq).sub(&lr.shift_in(name, dr - dq).mul(q));
    }
    r
}

/// Greatest common divisor over the integers, normalized to a positive
/// leading coefficient. `gcd(0, 0) = 0`.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.clone().normalize_sign();
    }
    if b.is_zero() {
        return a.clone().normalize_sign();
    }
    if let (Some(x), Some(y)) = (a.constant_value(), b.constant_value()) {
        return MPoly::constant(x.gcd(&y));
    }
    if let Some(x) = a.constant_value() {
        return MPoly::constant(x.gcd(&b.content()));
    }
    if let Some(y) = b.constant_value() {
        return MPoly::constant(y.gcd(&a.content()));
    }
    let mut vars = a.params();
    vars.extend(b.params());
    vars.sort();
    let x = vars[0].clone();
    let (da, db) = (a.degree_in(&x), b.degree_in(&x));
    if da == 0 {
        return gcd(a, &b.content_in(&x));
    }
    if db == 0 {
        return gcd(&a.content_in(&x), b);
    }
    let (ca, cb) = (a.content_in(&x), b.content_in(&x));
    let gc = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree_in(&x) < q.degree_in(&x) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = pseudo_rem(&p, &q, &x);
        if r.is_zero() {
            break;
        }
        if r.degree_in(&x) == 0 {
            q = MPoly::one();
            break;
        }
        p = q;
        q = r.primitive_in(&x);
    }
    q.primitive_in(&x).mul(&gc).normalize_sign()
}

fn fmt_pmono(m: &PMono, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for (i, (n, e)) in m.0.iter().enumerate() {
        if i > 0 {
            write!(f, "*")?;
        }
        if *e == 1 {
            write!(f, "{n}")?;
        } else {
            write!(f, "{n}^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                fmt_pmono(m, f)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(name: &str) -> MPoly {
        MPoly::param(Arc::from(name))
    }

    fn n(v: i64) -> MPoly {
        MPoly::constant(BigInt::from(v))
    }

    #[test]
    fn lex_order_prefers_smaller_names() {
        let a = PMono::var(Arc::from("a"));
        let b2 = PMono(vec![(Arc::from("b"), 2)]);
        assert!(a > b2);
        assert!(b2 > PMono::one());
    }

    #[test]
    fn exact_division() {
        let k = p("k");
        let f = k.add(&n(2)).mul(&k.sub(&n(1)));
        assert_eq!(f.div_exact(&k.add(&n(2))), Some(k.sub(&n(1))));
        assert_eq!(f.div_exact(&k.add(&n(3))), None);
    }

    #[test]
    fn gcd_univariate_and_multivariate() {
        let (k, c) = (p("k"), p("c"));
        let f = k.add(&n(2)).mul(&n(6));
        let g = k.add(&n(2)).mul(&k).mul(&n(4));
        assert_eq!(gcd(&f, &g), k.add(&n(2)).mul(&n(2)));
        let a = c.mul(&k).sub(&n(1)).mul(&c.add(&k));
        let b = c.add(&k).mul(&c.sub(&k));
        assert_eq!(gcd(&a, &b), c.add(&k));
        assert_eq!(gcd(&c, &k), n(1));
    }

    #[test]
    fn display() {
        let f = p("c").mul(&p("c")).scale(&BigInt::from(3)).sub(&p("k")).add(&n(-2));
        assert_eq!(f.to_string(), "3*c^2 - k - 2");
    }
}
