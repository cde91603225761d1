//! Number types the rational coefficient tables are evaluated over.
//!
//! The normal-form and KAM tables are long sums of rational functions of the
//! frequencies with a few `sqrt(3)` factors. They are written once, generic
//! over [`Scalar`], and evaluated either in `f64` (with Neumaier-compensated
//! summation of the numerator terms) or exactly in the field `Q(sqrt 3)`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Field operations needed by the coefficient tables.
pub trait Scalar:
    Clone
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn int(n: i64) -> Self;

    fn ratio(num: i64, den: i64) -> Self {
        Self::int(num) / Self::int(den)
    }

    fn sqrt3() -> Self;

    /// Whether a denominator factor should be treated as zero.
    fn is_negligible(&self) -> bool;

    /// Sums numerator terms that share a denominator.
    fn sum(terms: Vec<Self>) -> Self;

    fn to_f64(&self) -> f64;

    fn powi(&self, k: u32) -> Self {
        let mut acc = Self::int(1);
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }
}

/// Absolute threshold below which an `f64` denominator factor counts as zero.
pub const SINGULAR_TOL: f64 = 1e-12;

impl Scalar for f64 {
    fn int(n: i64) -> Self {
        n as f64
    }

    fn sqrt3() -> Self {
        3f64.sqrt()
    }

    fn is_negligible(&self) -> bool {
        self.abs() <= SINGULAR_TOL
    }

    fn sum(terms: Vec<Self>) -> Self {
        neumaier_sum(terms)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn powi(&self, k: u32) -> Self {
        f64::powi(*self, k as i32)
    }
}

/// Kahan-Babuska-Neumaier summation.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for t in terms {
        let next = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - next) + t;
        } else {
            comp += (t - next) + sum;
        }
        sum = next;
    }
    sum + comp
}

/// An exact element `a + b*sqrt(3)` with rational `a`, `b`.
#[derive(Clone, PartialEq, Eq)]
pub struct QSqrt3 {
    pub rational: BigRational,
    pub surd: BigRational,
}

impl QSqrt3 {
    pub fn new(rational: BigRational, surd: BigRational) -> Self {
        Self { rational, surd }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.surd.is_zero()
    }

    /// True when the value is rational (no `sqrt(3)` component).
    pub fn is_rational(&self) -> bool {
        self.surd.is_zero()
    }

    fn conjugate(&self) -> Self {
        Self::new(self.rational.clone(), -self.surd.clone())
    }

    /// `a^2 - 3 b^2`, the field norm.
    fn norm(&self) -> BigRational {
        &self.rational * &self.rational - BigRational::from_integer(3.into()) * &self.surd * &self.surd
    }
}

impl fmt::Debug for QSqrt3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.surd.is_zero() {
            write!(f, "{}", self.rational)
        } else {
            write!(f, "{} + {}*sqrt(3)", self.rational, self.surd)
        }
    }
}

impl Add for QSqrt3 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.rational + rhs.rational, self.surd + rhs.surd)
    }
}

impl Sub for QSqrt3 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.rational - rhs.rational, self.surd - rhs.surd)
    }
}

impl Mul for QSqrt3 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let three = BigRational::from_integer(3.into());
        let rational = &self.rational * &rhs.rational + three * &self.surd * &rhs.surd;
        let surd = &self.rational * &rhs.surd + &self.surd * &rhs.rational;
        Self::new(rational, surd)
    }
}

impl Div for QSqrt3 {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let norm = rhs.norm();
        assert!(!norm.is_zero(), "division by zero in Q(sqrt 3)");
        let num = self * rhs.conjugate();
        Self::new(num.rational / &norm, num.surd / norm)
    }
}

impl Neg for QSqrt3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.rational, -self.surd)
    }
}

impl Scalar for QSqrt3 {
    fn int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_ratio(num, den)
    }

    fn sqrt3() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn sum(terms: Vec<Self>) -> Self {
        terms.into_iter().fold(Self::zero(), |acc, t| acc + t)
    }

    fn to_f64(&self) -> f64 {
        let a = self.rational.to_f64().unwrap_or(f64::NAN);
        let b = self.surd.to_f64().unwrap_or(f64::NAN);
        if b.is_zero() {
            a
        } else if a.signum() == b.signum() || a.is_zero() {
            a + b * 3f64.sqrt()
        } else {
            // a + b*sqrt3 = norm / (a - b*sqrt3), avoids cancellation
            let norm = self.norm().to_f64().unwrap_or(f64::NAN);
            let den = a - b * 3f64.sqrt();
            if norm.abs() > 0.0 && den.abs() > a.abs().max(b.abs()) * 1e-3 {
                norm / den
            } else {
                a + b * 3f64.sqrt()
            }
        }
    }
}

impl QSqrt3 {
    /// Sign of the exact value.
    pub fn signum(&self) -> i32 {
        // sign of a + b sqrt3 decided by exact comparison of a^2 and 3 b^2
        let a_sign = sign_of(&self.rational);
        let b_sign = sign_of(&self.surd);
        if b_sign == 0 {
            return a_sign;
        }
        if a_sign == 0 || a_sign == b_sign {
            return b_sign;
        }
        let n = self.norm();
        if n.is_zero() {
            0
        } else if n.is_positive() {
            a_sign
        } else {
            b_sign
        }
    }
}

fn sign_of(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let naive: f64 = [1e16, 1.0, -1e16].iter().sum();
        assert_eq!(naive, 0.0);
        assert_eq!(neumaier_sum([1e16, 1.0, -1e16]), 1.0);
    }

    #[test]
    fn sqrt3_squares_to_three() {
        let s = QSqrt3::sqrt3();
        assert_eq!(s.clone() * s, QSqrt3::int(3));
    }

    #[test]
    fn division_by_irrational_is_exact() {
        // 1 / (2 + sqrt3) = 2 - sqrt3
        let x = QSqrt3::int(2) + QSqrt3::sqrt3();
        let inv = QSqrt3::int(1) / x;
        assert_eq!(inv, QSqrt3::int(2) - QSqrt3::sqrt3());
        assert!((inv.to_f64() - (2.0 - 3f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn signum_handles_mixed_signs() {
        assert_eq!((QSqrt3::int(2) - QSqrt3::sqrt3()).signum(), 1);
        assert_eq!((QSqrt3::int(1) - QSqrt3::sqrt3()).signum(), -1);
        assert_eq!(QSqrt3::zero().signum(), 0);
    }
}
