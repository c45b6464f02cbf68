//! The scalar contract shared by every field used in the crate.
//!
//! Elements carry their own context (cyclotomic index, prime modulus), so
//! constants are produced from an existing element rather than from a type.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

pub trait Field: Clone + PartialEq + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    /// The image of a rational number in this element's field.
    fn from_rational(&self, q: &Rational) -> Self;

    fn from_int(&self, k: i64) -> Self {
        self.from_rational(&Rational::from_integer(BigInt::from(k)))
    }

    fn is_one(&self) -> bool {
        self.sub(&self.one_like()).is_zero()
    }

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }

    /// Rank by a route faster than elimination over the field, if there is
    /// one; [`crate::linalg::rank`] falls back to Gaussian elimination.
    fn fast_rank(_m: &crate::linalg::Mat<Self>) -> Option<usize>
    where
        Self: Sized,
    {
        None
    }
}

impl Field for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_rational(&self, q: &Rational) -> Self {
        q.clone()
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat2(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Bit length of the larger of numerator and denominator.
pub fn rational_bits(q: &Rational) -> u64 {
    q.numer().abs().bits().max(q.denom().bits())
}

pub fn qzero() -> Rational {
    <Rational as Zero>::zero()
}

pub fn qone() -> Rational {
    <Rational as One>::one()
}
