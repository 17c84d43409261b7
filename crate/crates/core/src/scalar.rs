//! Scalar traits shared by the polynomial and polytope code.
//!
//! Laurent coefficients only need ring operations plus an exact zero test, so
//! [`Coeff`] is a thin blanket over `num_traits::Num`. Polytope predicates
//! additionally need a total order and signs, which is what [`Scalar`] adds.
//! Floating-point types satisfy `Coeff` but deliberately not `Scalar`: every
//! geometric predicate in this crate is evaluated exactly.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed, ToPrimitive, Zero};

/// Exact rational numbers with unbounded numerator and denominator.
pub type Rational = BigRational;

/// Coefficient ring of a Laurent polynomial.
pub trait Coeff: Clone + Debug + Display + PartialEq + Num + Neg<Output = Self> + Send + Sync {}

impl<T> Coeff for T where T: Clone + Debug + Display + PartialEq + Num + Neg<Output = T> + Send + Sync {}

/// Ordered exact scalar used for polytope coordinates.
pub trait Scalar: Coeff + Ord + Signed {
    fn from_i64(v: i64) -> Self;

    fn to_rational(&self) -> Rational;

    /// The value as a machine integer when it is integral and fits.
    fn to_int(&self) -> Option<i64>;

    fn floor_i64(&self) -> Option<i64>;

    fn ceil_i64(&self) -> Option<i64>;
}

impl Scalar for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn to_rational(&self) -> Rational {
        Rational::from_integer(BigInt::from(*self))
    }
    fn to_int(&self) -> Option<i64> {
        Some(*self)
    }
    fn floor_i64(&self) -> Option<i64> {
        Some(*self)
    }
    fn ceil_i64(&self) -> Option<i64> {
        Some(*self)
    }
}

impl Scalar for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn to_rational(&self) -> Rational {
        Rational::from_integer(BigInt::from(*self))
    }
    fn to_int(&self) -> Option<i64> {
        i64::try_from(*self).ok()
    }
    fn floor_i64(&self) -> Option<i64> {
        self.to_int()
    }
    fn ceil_i64(&self) -> Option<i64> {
        self.to_int()
    }
}

impl Scalar for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn to_rational(&self) -> Rational {
        Rational::from_integer(self.clone())
    }
    fn to_int(&self) -> Option<i64> {
        ToPrimitive::to_i64(self)
    }
    fn floor_i64(&self) -> Option<i64> {
        self.to_int()
    }
    fn ceil_i64(&self) -> Option<i64> {
        self.to_int()
    }
}

impl<T> Scalar for Ratio<T>
where
    T: Clone + Integer + Signed + Debug + Display + Send + Sync + ToPrimitive + From<i64> + Into<BigInt>,
    Ratio<T>: Signed,
{
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(T::from(v))
    }
    fn to_rational(&self) -> Rational {
        Rational::new(self.numer().clone().into(), self.denom().clone().into())
    }
    fn to_int(&self) -> Option<i64> {
        if self.denom().is_one() {
            self.numer().to_i64()
        } else {
            None
        }
    }
    fn floor_i64(&self) -> Option<i64> {
        self.floor().numer().to_i64()
    }
    fn ceil_i64(&self) -> Option<i64> {
        self.ceil().numer().to_i64()
    }
}

/// Parse `"p"` or `"p/q"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Greatest common divisor of the absolute values of a vector's entries.
pub fn content(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

pub fn is_primitive(v: &[i64]) -> bool {
    content(v) == 1
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn dot_i64(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn to_scalar_vec<S: Scalar>(v: &[i64]) -> Vec<S> {
    v.iter().map(|&x| S::from_i64(x)).collect()
}
