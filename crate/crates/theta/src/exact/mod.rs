//! Exact scalar substrate: arbitrary-precision rationals and Gaussian
//! rationals.
//!
//! Every public value in this crate is exact.  `Rational` is backed by
//! `num_rational::BigRational`, which keeps values in lowest terms with a
//! positive denominator.

mod matrix;
mod simplex;

pub use matrix::{ExactMatrix, MatrixError};
pub use simplex::{simplex_max, LpError, LpProblem, LpSolution};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// Arbitrary-precision integer.
pub type Int = BigInt;

/// Arbitrary-precision rational, always in lowest terms, denominator > 0.
pub type Rational = num_rational::BigRational;

/// Rational from an `i64`.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(Int::from(n))
}

/// Rational `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(Int::from(n), Int::from(d))
}

/// Floor of the square root of a nonnegative rational.
pub fn floor_sqrt(x: &Rational) -> Int {
    assert!(!x.is_negative(), "floor_sqrt of negative rational");
    // floor(sqrt(p/q)) = floor(sqrt(p*q)) / q computed as floor(sqrt(p*q) / q)
    let pq = x.numer() * x.denom();
    pq.sqrt() / x.denom()
}

/// Element of Q(i): `re + im*i` with exact rational parts.
///
/// Conjugation is an involution and multiplication follows the usual ring
/// law `(a+bi)(c+di) = (ac-bd) + (ad+bc)i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_rational(re: Rational) -> Self {
        GaussianRational { re, im: Rational::zero() }
    }

    pub fn from_parts(re: i64, im: i64) -> Self {
        GaussianRational { re: rat(re), im: rat(im) }
    }

    pub fn zero() -> Self {
        Self::from_parts(0, 0)
    }

    pub fn one() -> Self {
        Self::from_parts(1, 0)
    }

    pub fn i() -> Self {
        Self::from_parts(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: GaussianRational) -> GaussianRational {
        &self + &rhs
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: GaussianRational) -> GaussianRational {
        &self - &rhs
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: GaussianRational) -> GaussianRational {
        &self * &rhs
    }
}

impl AddAssign for GaussianRational {
    fn add_assign(&mut self, rhs: GaussianRational) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl SubAssign for GaussianRational {
    fn sub_assign(&mut self, rhs: GaussianRational) {
        self.re -= rhs.re;
        self.im -= rhs.im;
    }
}

impl MulAssign for GaussianRational {
    fn mul_assign(&mut self, rhs: GaussianRational) {
        *self = &*self * &rhs;
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        GaussianRational::one()
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-200i64..200, 1i64..40).prop_map(|(n, d)| ratio(n, d))
    }

    fn arb_gaussian() -> impl Strategy<Value = GaussianRational> {
        (arb_rational(), arb_rational()).prop_map(|(re, im)| GaussianRational::new(re, im))
    }

    proptest! {
        #[test]
        fn rational_ring_axioms(a in arb_rational(), b in arb_rational(), c in arb_rational()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
            prop_assert_eq!(&a + &b, &b + &a);
        }

        #[test]
        fn gaussian_ring_axioms(a in arb_gaussian(), b in arb_gaussian(), c in arb_gaussian()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn conjugation_is_multiplicative(a in arb_gaussian(), b in arb_gaussian()) {
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            prop_assert_eq!(a.conj().conj(), a);
        }
    }

    #[test]
    fn gaussian_i_has_order_four() {
        let i = GaussianRational::i();
        assert_eq!(i.pow(2), GaussianRational::from_parts(-1, 0));
        assert_eq!(i.pow(4), GaussianRational::one());
    }

    #[test]
    fn floor_sqrt_small_values() {
        assert_eq!(floor_sqrt(&rat(0)), Int::from(0));
        assert_eq!(floor_sqrt(&rat(8)), Int::from(2));
        assert_eq!(floor_sqrt(&rat(9)), Int::from(3));
        assert_eq!(floor_sqrt(&ratio(9, 4)), Int::from(1));
        assert_eq!(floor_sqrt(&ratio(25, 4)), Int::from(2));
        assert_eq!(floor_sqrt(&ratio(1, 2)), Int::from(0));
    }
}
