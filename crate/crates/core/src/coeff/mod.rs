//! The coefficient field: rational functions in named parameters with
//! rational coefficients, stored as reduced fractions of integer polynomials.

mod mpoly;

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

pub use mpoly::{gcd, MPoly, PMono, Param};

/// Element of ℚ(params). `num/den` with `gcd(num, den) = 1` over ℤ[params]
/// and `den` having a positive leading coefficient.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coeff {
    num: MPoly,
    den: MPoly,
}

impl Default for Coeff {
    fn default() -> Self {
        Coeff::zero()
    }
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff {
            num: MPoly::zero(),
            den: MPoly::one(),
        }
    }

    pub fn one() -> Self {
        Coeff::int(1)
    }

    pub fn int(v: i64) -> Self {
        Coeff {
            num: MPoly::constant(BigInt::from(v)),
            den: MPoly::one(),
        }
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Coeff::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Coeff {
            num: MPoly::constant(v),
            den: MPoly::one(),
        }
    }

    pub fn from_rational(r: BigRational) -> Self {
        let (n, d) = (r.numer().clone(), r.denom().clone());
        Coeff {
            num: MPoly::constant(n),
            den: MPoly::constant(d),
        }
    }

    pub fn param(name: &str) -> Self {
        Coeff {
            num: MPoly::param(Arc::from(name)),
            den: MPoly::one(),
        }
    }

    /// Build `num/den` and reduce. Panics if `den` is zero.
    pub fn from_parts(num: MPoly, den: MPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Coeff::zero();
        }
        let (num, den) = if let Some(d) = den.constant_value() {
            let g = num.content().gcd(&d);
            let (mut n, mut d) = (num.div_int_exact(&g), d / &g);
            if d.is_negative() {
                n = n.neg();
                d = -d;
            }
            (n, MPoly::constant(d))
        } else {
            let g = gcd(&num, &den);
            let mut n = num.div_exact(&g).expect("gcd divides numerator");
            let mut d = den.div_exact(&g).expect("gcd divides denominator");
            if d.leading_coeff().is_negative() {
                n = n.neg();
                d = d.neg();
            }
            (n, d)
        };
        Coeff { num, den }
    }

    pub fn numer(&self) -> &MPoly {
        &self.num
    }

    pub fn denom(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.constant_value().is_some_and(|d| d.is_one())
            && self.num.constant_value().is_some_and(|n| n.is_one())
    }

    /// True when free of parameters.
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        Some(BigRational::new(
            self.num.constant_value()?,
            self.den.constant_value()?,
        ))
    }

    pub fn to_i64(&self) -> Option<i64> {
        let r = self.to_rational()?;
        if r.is_integer() {
            i64::try_from(r.to_integer()).ok()
        } else {
            None
        }
    }

    /// Sign of the leading numerator coefficient.
    pub fn is_negative(&self) -> bool {
        self.num.leading_coeff().is_negative()
    }

    pub fn params(&self) -> Vec<Param> {
        let mut p = self.num.params();
        p.extend(self.den.params());
        p.sort();
        p.dedup();
        p
    }

    pub fn inv(&self) -> Option<Coeff> {
        if self.is_zero() {
            return None;
        }
        Some(Coeff::from_parts(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &Coeff) -> Option<Coeff> {
        Some(self * &other.inv()?)
    }

    pub fn pow(&self, e: i32) -> Coeff {
        let base = if e < 0 {
            self.inv().expect("negative power of zero")
        } else {
            self.clone()
        };
        let mut acc = Coeff::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    /// Replace a parameter by a coefficient. `None` if a denominator vanishes.
    pub fn substitute(&self, name: &str, value: &Coeff) -> Option<Coeff> {
        let sub = |p: &MPoly| -> Coeff {
            let mut acc = Coeff::zero();
            let d = p.degree_in(name);
            for k in 0..=d {
                let c = p.coeff_in(name, k);
                if !c.is_zero() {
                    acc += &(&Coeff::from_parts(c, MPoly::one()) * &value.pow(k as i32));
                }
            }
            acc
        };
        let (n, d) = (sub(&self.num), sub(&self.den));
        n.checked_div(&d)
    }

    /// Split as `r * p` with `r` rational and `p` a primitive integer
    /// polynomial with positive leading coefficient, when the denominator is
    /// constant.
    pub fn split_content(&self) -> Option<(BigRational, MPoly)> {
        let d = self.den.constant_value()?;
        let mut c = self.num.content();
        if self.num.leading_coeff().is_negative() {
            c = -c;
        }
        let p = self.num.div_int_exact(&c);
        Some((BigRational::new(c, d), p))
    }

    /// Render as a factor preceding a product: returns `None` for 1, `Some("-")`
    /// style output is never produced; the sign is reported separately.
    /// Output is `(negative, text)` where `text` is empty for magnitude 1.
    pub fn factor_parts(&self) -> (bool, String) {
        let neg = self.is_negative();
        let mag = if neg { -self.clone() } else { self.clone() };
        if mag.is_one() {
            return (neg, String::new());
        }
        if let Some(r) = mag.to_rational() {
            return (neg, fmt_rational(&r));
        }
        if let Some((r, p)) = mag.split_content() {
            let body = if p.terms().len() == 1 {
                p.to_string()
            } else {
                format!("({p})")
            };
            if r.is_one() {
                return (neg, body);
            }
            return (neg, format!("{}*{}", fmt_rational(&r), body));
        }
        (neg, frac_text(&mag.num, &mag.den))
    }

}

/// Numerator over denominator, parenthesizing anything but a bare number or
/// a single parameter.
fn frac_text(num: &MPoly, den: &MPoly) -> String {
    let atom = |p: &MPoly| {
        p.is_constant()
            || (p.terms().len() == 1 && p.terms()[0].1.is_one() && {
                let f = p.terms()[0].0.factors();
                f.len() == 1 && f[0].1 == 1
            })
    };
    let wrap = |p: &MPoly| if atom(p) { p.to_string() } else { format!("({p})") };
    format!("{}/{}", wrap(num), wrap(den))
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if let Some(r) = self.to_rational() {
            return write!(f, "{}", fmt_rational(&r));
        }
        if self.den.is_one_poly() {
            return write!(f, "{}", self.num);
        }
        if self.den.is_constant() {
            let (neg, body) = self.factor_parts();
            return write!(f, "{}{body}", if neg { "-" } else { "" });
        }
        if self.num.terms().len() == 1 && self.num.leading_coeff().is_negative() {
            return write!(f, "-{}", frac_text(&self.num.neg(), &self.den));
        }
        write!(f, "{}", frac_text(&self.num, &self.den))
    }
}

impl fmt::Debug for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coeff({self})")
    }
}

impl From<i64> for Coeff {
    fn from(v: i64) -> Self {
        Coeff::int(v)
    }
}

impl From<BigRational> for Coeff {
    fn from(r: BigRational) -> Self {
        Coeff::from_rational(r)
    }
}

impl<'a> Add<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn add(self, rhs: &Coeff) -> Coeff {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return Coeff::from_parts(self.num.add(&rhs.num), self.den.clone());
        }
        Coeff::from_parts(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl<'a> Sub<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn sub(self, rhs: &Coeff) -> Coeff {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Coeff) -> Coeff {
        if self.is_zero() || rhs.is_zero() {
            return Coeff::zero();
        }
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        Coeff::from_parts(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl<'a> Div<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn div(self, rhs: &Coeff) -> Coeff {
        self.checked_div(rhs).expect("division by zero coefficient")
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Coeff> for Coeff {
            type Output = Coeff;
            fn $m(self, rhs: Coeff) -> Coeff {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Coeff> for Coeff {
            type Output = Coeff;
            fn $m(self, rhs: &Coeff) -> Coeff {
                (&self).$m(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl AddAssign<&Coeff> for Coeff {
    fn add_assign(&mut self, rhs: &Coeff) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Coeff> for Coeff {
    fn sub_assign(&mut self, rhs: &Coeff) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Coeff> for Coeff {
    fn mul_assign(&mut self, rhs: &Coeff) {
        *self = &*self * rhs;
    }
}

/// Binomial coefficient as a `Coeff`.
pub fn binomial(n: u32, k: u32) -> Coeff {
    if k > n {
        return Coeff::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Coeff::from_bigint(acc)
}

/// Generalized binomial `C(n, k)` for any integer `n`.
pub fn binomial_signed(n: i64, k: u32) -> Coeff {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i as i64);
        den *= BigInt::from(i + 1);
    }
    Coeff::from_rational(BigRational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rational_arithmetic() {
        let a = Coeff::ratio(1, 2);
        let b = Coeff::ratio(1, 3);
        assert_eq!(&a + &b, Coeff::ratio(5, 6));
        assert_eq!(&a * &b, Coeff::ratio(1, 6));
        assert_eq!(&a - &a, Coeff::zero());
        assert_eq!(Coeff::ratio(2, -4), Coeff::ratio(-1, 2));
    }

    #[test]
    fn rational_functions_reduce() {
        let k = Coeff::param("k");
        let two = Coeff::int(2);
        let x = &Coeff::int(3) * &k;
        let y = &(&k + &two) * &two;
        let q = &x / &y;
        assert_eq!(q.to_string(), "(3*k)/(2*k + 4)");
        assert_eq!(&q * &y, x);
        let kk = &k * &k;
        let r = &(&kk - &Coeff::int(4)) / &(&k + &two);
        assert_eq!(r, &k - &two);
        assert!(r.denom().is_constant());
    }

    #[test]
    fn display_forms() {
        let c = Coeff::param("c");
        assert_eq!((&c * &Coeff::ratio(1, 2)).to_string(), "1/2*c");
        assert_eq!((&(&c + &Coeff::one()) * &Coeff::int(3)).to_string(), "3*c + 3");
        assert_eq!((-&c).to_string(), "-c");
        let (neg, body) = (&(&c + &Coeff::one()) * &Coeff::ratio(-3, 2)).factor_parts();
        assert!(neg);
        assert_eq!(body, "3/2*(c + 1)");
    }

    #[test]
    fn substitution() {
        let c = Coeff::param("c");
        let e = &(&c * &c) + &Coeff::int(1);
        assert_eq!(e.substitute("c", &Coeff::int(2)), Some(Coeff::int(5)));
        let f = &Coeff::one() / &c;
        assert_eq!(f.substitute("c", &Coeff::zero()), None);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), Coeff::int(10));
        assert_eq!(binomial_signed(-1, 3), Coeff::int(-1));
        assert_eq!(binomial_signed(-2, 2), Coeff::int(3));
    }

    fn arb_coeff() -> impl Strategy<Value = Coeff> {
        let atom = prop_oneof![
            (-5i64..6, 1i64..4).prop_map(|(n, d)| Coeff::ratio(n, d)),
            Just(Coeff::param("c")),
            Just(Coeff::param("k")),
        ];
        prop::collection::vec((atom.clone(), atom), 1..4).prop_map(|v| {
            v.into_iter()
                .fold(Coeff::zero(), |acc, (a, b)| &acc + &(&a * &b))
        })
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_coeff(), b in arb_coeff(), c in arb_coeff()) {
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            if let Some(bi) = b.inv() {
                prop_assert_eq!(&(&a * &b) * &bi, a.clone());
                let q = &a / &b;
                prop_assert_eq!(&(&q * &b), &a);
            }
        }
    }
}
