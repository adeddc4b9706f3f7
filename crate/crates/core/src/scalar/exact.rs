use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ParseError;

/// Gaussian rational `re + im·i`.
///
/// `BigRational` keeps both parts reduced with a positive denominator, so
/// structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactScalar {
    re: BigRational,
    im: BigRational,
}

impl ExactScalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    /// `n/d`; panics on `d == 0`.
    pub fn ratio(n: i64, d: i64) -> Self {
        Self::new(BigRational::new(n.into(), d.into()), BigRational::zero())
    }

    /// `(a/d) + (b/d)i`.
    pub fn gaussian(a: i64, b: i64, d: i64) -> Self {
        Self::new(
            BigRational::new(a.into(), d.into()),
            BigRational::new(b.into(), d.into()),
        )
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::new(r, BigRational::zero())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|²`, always rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn checked_inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn inv(&self) -> Self {
        self.checked_inv().expect("inverse of zero Gaussian rational")
    }

    pub fn pow(&self, e: i32) -> Self {
        if e < 0 {
            return self.inv().pow(-e);
        }
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e as u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
}

fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back for huge numerators/denominators
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for ExactScalar {
    fn from(r: BigRational) -> Self {
        Self::from_rational(r)
    }
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: &ExactScalar) -> ExactScalar {
        ExactScalar::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn sub(self, o: &ExactScalar) -> ExactScalar {
        ExactScalar::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: &ExactScalar) -> ExactScalar {
        if self.im.is_zero() && o.im.is_zero() {
            return ExactScalar::from_rational(&self.re * &o.re);
        }
        ExactScalar::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl<'a> Div<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: &ExactScalar) -> ExactScalar {
        self * &o.inv()
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, o: ExactScalar) -> ExactScalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, o: &ExactScalar) -> ExactScalar {
                (&self).$m(o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, o: &ExactScalar) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, o: &ExactScalar) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&ExactScalar> for ExactScalar {
    fn mul_assign(&mut self, o: &ExactScalar) {
        *self = &*self * o;
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::new(-self.re, -self.im)
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::new(-self.re.clone(), -self.im.clone())
    }
}

/// Canonical text: `5/24`, `-3`, `(0+3/2i)`, `(-113/960-11/80i)`.
///
/// Anything with a nonzero imaginary part is parenthesised so it can sit in
/// front of a monomial without ambiguity.
impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "({}{}{}i)", self.re, sign, self.im.abs())
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let bad = || ParseError::Scalar(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl FromStr for ExactScalar {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let t = s.trim();
        let Some(inner) = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) else {
            return Ok(Self::from_rational(parse_rational(t)?));
        };
        let body = inner
            .strip_suffix('i')
            .ok_or_else(|| ParseError::Scalar(s.to_string()))?;
        // split at the sign that starts the imaginary part (never at index 0)
        let cut = body
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(k, _)| k)
            .last()
            .ok_or_else(|| ParseError::Scalar(s.to_string()))?;
        let re = parse_rational(&body[..cut])?;
        let im = parse_rational(body[cut..].trim_start_matches('+'))?;
        Ok(Self::new(re, im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gaussian_norm() {
        let z = ExactScalar::gaussian(1, 1, 1);
        assert_eq!(&z * &z.conj(), ExactScalar::from_int(2));
    }

    #[test]
    fn lowest_terms_after_ops() {
        let a = ExactScalar::ratio(5, 24);
        let b = ExactScalar::ratio(-1, 8);
        let s = &a + &b;
        assert_eq!(s, ExactScalar::ratio(1, 12));
        assert_eq!(s.re().denom(), &BigInt::from(12));
    }

    #[test]
    fn powers_of_minus_i() {
        let m = -ExactScalar::i();
        assert_eq!(m.pow(2), ExactScalar::from_int(-1));
        assert_eq!(m.pow(3), ExactScalar::i());
        assert_eq!(m.pow(4), ExactScalar::one());
        assert_eq!(ExactScalar::i().pow(-1), -ExactScalar::i());
    }

    #[test]
    fn render_and_parse() {
        for z in [
            ExactScalar::ratio(5, 24),
            ExactScalar::from_int(-3),
            ExactScalar::gaussian(0, 3, 2),
            ExactScalar::gaussian(-113, -132, 960),
            ExactScalar::gaussian(129, -44, 320),
        ] {
            let s = z.to_string();
            assert_eq!(s.parse::<ExactScalar>().unwrap(), z, "{s}");
        }
        assert_eq!(ExactScalar::gaussian(0, 3, 2).to_string(), "(0+3/2i)");
        assert!("(1+2)".parse::<ExactScalar>().is_err());
        assert!("1/0".parse::<ExactScalar>().is_err());
    }

    fn small() -> impl Strategy<Value = ExactScalar> {
        (-1000i64..1000, 1i64..50, -1000i64..1000, 1i64..50).prop_map(|(a, b, c, d)| {
            ExactScalar::new(
                BigRational::new(a.into(), b.into()),
                BigRational::new(c.into(), d.into()),
            )
        })
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() <= 1e-12 * (1.0 + a.norm().max(b.norm()))
    }

    proptest! {
        #[test]
        fn field_axioms(a in small(), b in small(), c in small()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inv(), ExactScalar::one());
            }
        }

        #[test]
        fn agrees_with_f64(a in small(), b in small()) {
            let (fa, fb) = (a.to_complex64(), b.to_complex64());
            prop_assert!(close((&a + &b).to_complex64(), fa + fb));
            prop_assert!(close((&a * &b).to_complex64(), fa * fb));
            if !b.is_zero() {
                prop_assert!(close((&a / &b).to_complex64(), fa / fb));
            }
        }

        #[test]
        fn text_round_trip(a in small()) {
            prop_assert_eq!(a.to_string().parse::<ExactScalar>().unwrap(), a);
        }
    }
}
