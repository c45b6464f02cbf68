//! Elements of K = Q(ζ_N)(y, w) as reduced fractions of bivariate polynomials.

use crate::error::{Error, Result};
use crate::field::{Field, Rational};

use super::bipoly::BiPoly;
use super::cyclo::CycloNumber;

/// A reduced rational function `num/den` with `gcd(num, den) = 1` and `den`
/// monic under the lexicographic (y, w) term order. Zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FieldScalar {
    num: BiPoly,
    den: BiPoly,
}

impl FieldScalar {
    pub fn normalize(num: BiPoly, den: BiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.index() != den.index() {
            return Err(Error::IndexMismatch(num.index(), den.index()));
        }
        if num.is_zero() {
            return Ok(Self::zero(num.index()));
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
        };
        let lc = den.leading().unwrap().1.inv().unwrap();
        Ok(FieldScalar { num: num.scale(&lc), den: den.scale(&lc) })
    }

    /// A polynomial viewed as a field element (denominator 1).
    pub fn from_poly(num: BiPoly) -> Self {
        let den = BiPoly::one(num.index());
        FieldScalar { num, den }
    }

    pub fn from_cyclo(c: CycloNumber) -> Self {
        Self::from_poly(BiPoly::constant(c))
    }

    pub fn zero(index: u64) -> Self {
        Self::from_poly(BiPoly::zero(index))
    }

    pub fn one(index: u64) -> Self {
        Self::from_poly(BiPoly::one(index))
    }

    pub fn y(index: u64) -> Self {
        Self::from_poly(BiPoly::y(index))
    }

    pub fn w(index: u64) -> Self {
        Self::from_poly(BiPoly::w(index))
    }

    pub fn rational(index: u64, q: Rational) -> Self {
        Self::from_cyclo(CycloNumber::from_rational(index, q))
    }

    pub fn index(&self) -> u64 {
        self.num.index()
    }

    pub fn num(&self) -> &BiPoly {
        &self.num
    }

    pub fn den(&self) -> &BiPoly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// The constant value, when the element lies in Q(ζ_N).
    pub fn as_cyclo(&self) -> Option<CycloNumber> {
        if self.num.is_constant() && self.den.is_constant() {
            Some(self.num.constant_term())
        } else {
            None
        }
    }

    pub fn embed(&self, m: u64) -> Result<Self> {
        Ok(FieldScalar { num: self.num.embed(m)?, den: self.den.embed(m)? })
    }

    pub fn restrict(&self, n: u64) -> Option<Self> {
        Some(FieldScalar { num: self.num.restrict(n)?, den: self.den.restrict(n)? })
    }

    /// σ^j where σ: y ↦ ζ_ℓ·y fixes Q(ζ_N), w and y^ℓ. Requires ℓ | N.
    pub fn galois_shift(&self, j: i64, ell: u64) -> Self {
        let n = self.index();
        assert!(ell >= 1 && n.is_multiple_of(ell), "galois_shift needs ℓ | N");
        let e = (n / ell) as i64 * j;
        Self::normalize(self.num.twist_y(e), self.den.twist_y(e)).expect("nonzero denominator")
    }

    /// Specializes y and w to values in Q(ζ_N); `None` if the denominator vanishes.
    pub fn eval(&self, y0: &CycloNumber, w0: &CycloNumber) -> Option<CycloNumber> {
        let d = self.den.eval(y0, w0);
        let n = self.num.eval(y0, w0);
        n.div(&d)
    }
}

impl Field for FieldScalar {
    fn zero_like(&self) -> Self {
        Self::zero(self.index())
    }
    fn one_like(&self) -> Self {
        Self::one(self.index())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        if self.den.is_constant() && rhs.den.is_constant() {
            return Self::from_poly(self.num.add(&rhs.num));
        }
        if self.den == rhs.den {
            return Self::normalize(self.num.add(&rhs.num), self.den.clone()).unwrap();
        }
        let n = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        Self::normalize(n, self.den.mul(&rhs.den)).unwrap()
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.den.is_constant() && rhs.den.is_constant() {
            return Self::from_poly(self.num.mul(&rhs.num));
        }
        if self.is_zero() || rhs.is_zero() {
            return self.zero_like();
        }
        Self::normalize(self.num.mul(&rhs.num), self.den.mul(&rhs.den)).unwrap()
    }
    fn neg(&self) -> Self {
        FieldScalar { num: self.num.neg(), den: self.den.clone() }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::normalize(self.den.clone(), self.num.clone()).unwrap())
    }
    fn from_rational(&self, q: &Rational) -> Self {
        Self::rational(self.index(), q.clone())
    }
    // Elimination over the fraction field spends its time in gcds; minors
    // over the polynomial ring stay small.
    fn fast_rank(m: &crate::linalg::Mat<Self>) -> Option<usize> {
        Some(crate::linalg::bareiss_rank(&crate::linalg::clear_denominators(m)))
    }
}
