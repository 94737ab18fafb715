//! Scalar fields used by matrix operators: exact Gaussian rationals and `f64` complex numbers.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Whether a matrix carries exact or floating-point entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalarMode {
    Exact,
    Float64,
}

/// Ring operations shared by the exact and float scalar types.
pub trait Scalar:
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
    const MODE: ScalarMode;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn conj(&self) -> Self;
    fn from_i64(v: i64) -> Self;
}

/// A complex number `re + i·im` with rational parts.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Rational64,
    pub im: Rational64,
}

impl GaussianRational {
    pub fn new(re: Rational64, im: Rational64) -> Self {
        Self { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(Rational64::from_integer(re), Rational64::from_integer(im))
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// `[re_num, re_den, im_num, im_den]`, the report encoding.
    pub fn to_quad(&self) -> [i64; 4] {
        [*self.re.numer(), *self.re.denom(), *self.im.numer(), *self.im.denom()]
    }

    pub fn from_quad(q: [i64; 4]) -> Option<Self> {
        if q[1] == 0 || q[3] == 0 {
            return None;
        }
        Some(Self::new(Rational64::new(q[0], q[1]), Rational64::new(q[2], q[3])))
    }

    /// True when the value is one of `0, ±1, ±i`.
    pub fn is_unit_or_zero(&self) -> bool {
        let (re, im) = (self.re, self.im);
        let one = Rational64::from_integer(1);
        (re.is_zero() && im.is_zero())
            || (im.is_zero() && (re == one || re == -one))
            || (re.is_zero() && (im == one || im == -one))
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => write!(f, "({}{:+}i)", self.re, self.im),
        }
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl AddAssign for GaussianRational {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Scalar for GaussianRational {
    const MODE: ScalarMode = ScalarMode::Exact;

    fn zero() -> Self {
        Self::from_ints(0, 0)
    }
    fn one() -> Self {
        Self::from_ints(1, 0)
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn conj(&self) -> Self {
        Self::new(self.re, -self.im)
    }
    fn from_i64(v: i64) -> Self {
        Self::from_ints(v, 0)
    }
}

impl Scalar for Complex64 {
    const MODE: ScalarMode = ScalarMode::Float64;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
}
