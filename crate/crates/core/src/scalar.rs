//! Exact arithmetic in the quadratic field Q[√2].
//!
//! Every Haar amplitude `±2^{-k/2}` and every coefficient produced by the
//! shift lives in this field, so the engine never rounds.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An element `a + b·√2` with big-rational `a`, `b`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Sqrt2Scalar {
    a: BigRational,
    b: BigRational,
}

/// Exact power of two as a big rational; negative exponents allowed.
pub fn pow2(exp: i64) -> BigRational {
    let mag = BigInt::one() << exp.unsigned_abs();
    if exp >= 0 {
        BigRational::from_integer(mag)
    } else {
        BigRational::new_raw(BigInt::one(), mag)
    }
}

impl Sqrt2Scalar {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Self { a, b }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    /// The number √2 itself.
    pub fn sqrt2() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn rational(a: BigRational) -> Self {
        Self {
            a,
            b: BigRational::zero(),
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::rational(BigRational::from_integer(n.into()))
    }

    /// `num/den`; panics on a zero denominator.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::rational(BigRational::new(num.into(), den.into()))
    }

    /// `(√2)^k` for any integer `k`.
    pub fn sqrt2_pow(k: i64) -> Self {
        let half = k.div_euclid(2);
        if k.rem_euclid(2) == 0 {
            Self::rational(pow2(half))
        } else {
            Self::new(BigRational::zero(), pow2(half))
        }
    }

    /// `2^{-scale/2}`, the Haar amplitude of an interval of length `2^scale`.
    pub fn inv_sqrt_len(scale: i32) -> Self {
        Self::sqrt2_pow(-(scale as i64))
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn sqrt2_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The rational value, if the √2 part vanishes.
    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.a.clone())
    }

    /// `self · (√2)^k`, computed without a general multiplication.
    pub fn mul_sqrt2_pow(&self, k: i64) -> Self {
        let half = k.div_euclid(2);
        let p = pow2(half);
        if k.rem_euclid(2) == 0 {
            Self::new(&self.a * &p, &self.b * &p)
        } else {
            // (a + b√2)·√2 = 2b + a√2
            Self::new(&self.b * &p * BigRational::from_integer(2.into()), &self.a * &p)
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self::new(&self.a * r, &self.b * r)
    }

    /// `(a² + 2b²) + 2ab·√2`.
    pub fn square(&self) -> Self {
        let two = BigRational::from_integer(2.into());
        Self::new(
            &self.a * &self.a + &two * &self.b * &self.b,
            two * &self.a * &self.b,
        )
    }

    /// Field norm `a² − 2b²`; nonzero exactly when the element is invertible.
    pub fn norm_form(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(2.into()) * &self.b * &self.b
    }

    pub fn invert(&self) -> Result<Self> {
        let n = self.norm_form();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::new(&self.a / &n, -&self.b / &n))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.invert()?)
    }

    /// Exact sign as an ordering against zero.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        match (sa, sb) {
            (x, Ordering::Equal) => x,
            (Ordering::Equal, y) => y,
            (x, y) if x == y => x,
            // opposite signs: compare a² against 2b²
            (x, _) => {
                let lhs = &self.a * &self.a;
                let rhs = BigRational::from_integer(2.into()) * &self.b * &self.b;
                match lhs.cmp(&rhs) {
                    Ordering::Greater => x,
                    Ordering::Less => x.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * std::f64::consts::SQRT_2
    }
}

impl PartialOrd for Sqrt2Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Sqrt2Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&Sqrt2Scalar> for &Sqrt2Scalar {
            type Output = Sqrt2Scalar;
            fn $method(self, rhs: &Sqrt2Scalar) -> Sqrt2Scalar {
                let f: fn(&Sqrt2Scalar, &Sqrt2Scalar) -> Sqrt2Scalar = $body;
                f(self, rhs)
            }
        }
        impl $tr<Sqrt2Scalar> for Sqrt2Scalar {
            type Output = Sqrt2Scalar;
            fn $method(self, rhs: Sqrt2Scalar) -> Sqrt2Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Sqrt2Scalar> for Sqrt2Scalar {
            type Output = Sqrt2Scalar;
            fn $method(self, rhs: &Sqrt2Scalar) -> Sqrt2Scalar {
                (&self).$method(rhs)
            }
        }
        impl $tr<Sqrt2Scalar> for &Sqrt2Scalar {
            type Output = Sqrt2Scalar;
            fn $method(self, rhs: Sqrt2Scalar) -> Sqrt2Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |x, y| Sqrt2Scalar::new(&x.a + &y.a, &x.b + &y.b));
forward_binop!(Sub, sub, |x, y| Sqrt2Scalar::new(&x.a - &y.a, &x.b - &y.b));
forward_binop!(Mul, mul, |x, y| {
    let two = BigRational::from_integer(2.into());
    Sqrt2Scalar::new(
        &x.a * &y.a + two * &x.b * &y.b,
        &x.a * &y.b + &x.b * &y.a,
    )
});

impl AddAssign<&Sqrt2Scalar> for Sqrt2Scalar {
    fn add_assign(&mut self, rhs: &Sqrt2Scalar) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl AddAssign for Sqrt2Scalar {
    fn add_assign(&mut self, rhs: Sqrt2Scalar) {
        *self += &rhs;
    }
}

impl SubAssign<&Sqrt2Scalar> for Sqrt2Scalar {
    fn sub_assign(&mut self, rhs: &Sqrt2Scalar) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl Neg for Sqrt2Scalar {
    type Output = Sqrt2Scalar;
    fn neg(self) -> Sqrt2Scalar {
        Sqrt2Scalar::new(-self.a, -self.b)
    }
}

impl Neg for &Sqrt2Scalar {
    type Output = Sqrt2Scalar;
    fn neg(self) -> Sqrt2Scalar {
        Sqrt2Scalar::new(-&self.a, -&self.b)
    }
}

impl From<BigRational> for Sqrt2Scalar {
    fn from(a: BigRational) -> Self {
        Self::rational(a)
    }
}

impl From<i64> for Sqrt2Scalar {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

fn fmt_ratio(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical text form: `p/q`, `r/s√2`, or `p/q+r/s√2` (lowest terms; a
/// denominator of 1 is omitted).
impl fmt::Display for Sqrt2Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", fmt_ratio(&self.a)),
            (true, false) => write!(f, "{}√2", fmt_ratio(&self.b)),
            (false, false) => {
                let sign = if self.b.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{}√2", fmt_ratio(&self.a), sign, fmt_ratio(&self.b.abs()))
            }
        }
    }
}

impl fmt::Debug for Sqrt2Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn parse_ratio(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let s = s.strip_prefix('+').unwrap_or(s);
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
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

impl FromStr for Sqrt2Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = t
            .strip_suffix("√2")
            .or_else(|| t.strip_suffix("sqrt2"))
            .or_else(|| t.strip_suffix("*sqrt(2)"));
        let Some(body) = body else {
            return Ok(Self::rational(parse_ratio(&t)?));
        };
        let body = body.strip_suffix('*').unwrap_or(body);
        // split at the last sign that is not leading and not an exponent-free numerator sign
        let split = body
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i)
            .last();
        match split {
            Some(i) => {
                let a = parse_ratio(&body[..i])?;
                let b_text = &body[i..];
                let b = match b_text {
                    "+" => BigRational::one(),
                    "-" => -BigRational::one(),
                    _ => parse_ratio(b_text)?,
                };
                Ok(Self::new(a, b))
            }
            None => {
                let b = match body {
                    "" | "+" => BigRational::one(),
                    "-" => -BigRational::one(),
                    _ => parse_ratio(body)?,
                };
                Ok(Self::new(BigRational::zero(), b))
            }
        }
    }
}

/// Scalars the Haar model can be instantiated over: exact `Sqrt2Scalar`
/// for the engine, `f64` for oracle-side and Poincaré–Wirtinger inputs.
pub trait Amplitude:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    /// `self · (√2)^k`.
    fn mul_sqrt2_pow(&self, k: i64) -> Self;
    fn to_f64(&self) -> f64;
}

impl Amplitude for Sqrt2Scalar {
    fn zero() -> Self {
        Sqrt2Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Sqrt2Scalar::is_zero(self)
    }
    fn mul_sqrt2_pow(&self, k: i64) -> Self {
        Sqrt2Scalar::mul_sqrt2_pow(self, k)
    }
    fn to_f64(&self) -> f64 {
        Sqrt2Scalar::to_f64(self)
    }
}

impl Amplitude for f64 {
    fn zero() -> Self {
        0.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn mul_sqrt2_pow(&self, k: i64) -> Self {
        let half = k.div_euclid(2) as i32;
        let base = self * 2f64.powi(half);
        if k.rem_euclid(2) == 0 {
            base
        } else {
            base * std::f64::consts::SQRT_2
        }
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}
