//! The coefficient rings measures and power series are generic over.

use core::fmt::Debug;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::padic::{max_precision, PadicNumber};

pub type Rational = Ratio<i128>;

/// A commutative ring with enough structure for measure arithmetic.
///
/// Constants are produced from an existing element so that p-adic values can
/// carry their prime along.
pub trait Ring: Clone + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_i64_like(&self, n: i64) -> Self;
    fn radd(&self, other: &Self) -> Self;
    fn rsub(&self, other: &Self) -> Self;
    fn rmul(&self, other: &Self) -> Self;
    fn rneg(&self) -> Self;
    fn try_inv(&self) -> Option<Self>;
    /// Zero at the working precision (exact for rationals, `|x| <= tol` for
    /// complex numbers, zero modulo the known digits for p-adics).
    fn is_negligible(&self, tol: f64) -> bool;
    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.rsub(other).is_negligible(tol)
    }
}

impl Ring for PadicNumber {
    fn zero_like(&self) -> Self {
        PadicNumber::zero(self.prime(), i64::from(max_precision(self.prime())) * 4)
    }
    fn one_like(&self) -> Self {
        self.from_i64_like(1)
    }
    fn from_i64_like(&self, n: i64) -> Self {
        let p = self.prime();
        if n == 0 {
            return self.zero_like();
        }
        PadicNumber::from_i128(p, i128::from(n), max_precision(p)).expect("bounded precision")
    }
    fn radd(&self, other: &Self) -> Self {
        self.try_add(other).expect("p-adic operands share a prime")
    }
    fn rsub(&self, other: &Self) -> Self {
        self.try_sub(other).expect("p-adic operands share a prime")
    }
    fn rmul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("p-adic operands share a prime")
    }
    fn rneg(&self) -> Self {
        self.neg()
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }
}

impl Ring for Complex64 {
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one_like(&self) -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64_like(&self, n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn radd(&self, other: &Self) -> Self {
        self + other
    }
    fn rsub(&self, other: &Self) -> Self {
        self - other
    }
    fn rmul(&self, other: &Self) -> Self {
        self * other
    }
    fn rneg(&self) -> Self {
        -self
    }
    fn try_inv(&self) -> Option<Self> {
        (self.norm_sqr() > 0.0).then(|| self.inv())
    }
    fn is_negligible(&self, tol: f64) -> bool {
        self.norm() <= tol
    }
}

impl Ring for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::from_integer(1)
    }
    fn from_i64_like(&self, n: i64) -> Self {
        Rational::from_integer(i128::from(n))
    }
    fn radd(&self, other: &Self) -> Self {
        self + other
    }
    fn rsub(&self, other: &Self) -> Self {
        self - other
    }
    fn rmul(&self, other: &Self) -> Self {
        self * other
    }
    fn rneg(&self) -> Self {
        -self
    }
    fn try_inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }
}

/// Rings with a fixed embedding into the complex numbers.
pub trait ToComplex {
    fn to_complex(&self) -> Complex64;
}

impl ToComplex for Complex64 {
    fn to_complex(&self) -> Complex64 {
        *self
    }
}

impl ToComplex for Rational {
    fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Rational with `p`-adic image at the given relative precision.
pub fn rational_to_padic(r: &Rational, p: u64, prec: u32) -> crate::Result<PadicNumber> {
    PadicNumber::from_rational(p, *r.numer(), *r.denom(), prec)
}

pub fn rational_abs(r: &Rational) -> Rational {
    r.abs()
}
