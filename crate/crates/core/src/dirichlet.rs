//! Truncated formal Dirichlet series `sum a_n n^(-z)` and their level-`r`
//! measures on `(Z/p^r)^x`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::measure::{IndexKind, LevelElement};
use crate::padic::pow_checked;
use crate::ring::Ring;

#[derive(Clone, Debug)]
pub struct FormalDirichletSeries<R> {
    p: u64,
    /// `coeffs[n - 1] = a_n` for `1 <= n <= nmax`.
    coeffs: Vec<R>,
    prime_to_p: bool,
}

impl<R: Ring> FormalDirichletSeries<R> {
    pub fn new(p: u64, coeffs: Vec<R>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("truncation bound must be positive".into()));
        }
        let prime_to_p = coeffs.iter().enumerate().all(|(i, c)| !(i as u64 + 1).is_multiple_of(p) || c.is_negligible(0.0));
        Ok(FormalDirichletSeries { p, coeffs, prime_to_p })
    }

    pub fn zero(p: u64, nmax: usize, proto: &R) -> Self {
        FormalDirichletSeries { p, coeffs: vec![proto.zero_like(); nmax], prime_to_p: true }
    }

    /// The convolution identity `1^(-z)`.
    pub fn unit(p: u64, nmax: usize, proto: &R) -> Self {
        let mut s = Self::zero(p, nmax, proto);
        s.coeffs[0] = proto.one_like();
        s
    }

    /// `D_b(z) = b^(1-z)`: the single coefficient `b` at `n = b`.
    pub fn d_b(p: u64, nmax: usize, b: u64, proto: &R) -> Result<Self> {
        if b == 0 || b as usize > nmax {
            return Err(Error::InvalidInput("b outside the truncation".into()));
        }
        let mut s = Self::zero(p, nmax, proto);
        s.coeffs[b as usize - 1] = proto.from_i64_like(b as i64);
        s.prime_to_p = !b.is_multiple_of(p);
        Ok(s)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn nmax(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_prime_to_p(&self) -> bool {
        self.prime_to_p
    }

    pub fn coeff(&self, n: usize) -> &R {
        &self.coeffs[n - 1]
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// Drops the coefficients at multiples of `p`.
    pub fn restrict_prime_to_p(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if (i as u64 + 1).is_multiple_of(self.p) { c.zero_like() } else { c.clone() })
            .collect();
        FormalDirichletSeries { p: self.p, coeffs, prime_to_p: true }
    }

    /// `A_(r,a)`: the terms with `n = a mod p^r`.
    pub fn partial(&self, r: u32, a: u64) -> Result<Self> {
        let m = pow_checked(self.p, r)?;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if (i as u64 + 1) % m == a % m { c.clone() } else { c.zero_like() })
            .collect();
        Ok(FormalDirichletSeries { p: self.p, coeffs, prime_to_p: self.prime_to_p || !a.is_multiple_of(self.p) })
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        if self.nmax() != other.nmax() {
            return Err(Error::InvalidInput("truncation bounds differ".into()));
        }
        Ok(())
    }

    /// Dirichlet convolution `c_n = sum_(de = n) a_d b_e`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.nmax();
        let mut out = vec![self.coeffs[0].zero_like(); n];
        for d in 1..=n {
            let a = &self.coeffs[d - 1];
            if a.is_negligible(0.0) {
                continue;
            }
            for e in 1..=n / d {
                out[d * e - 1] = out[d * e - 1].radd(&a.rmul(&other.coeffs[e - 1]));
            }
        }
        Ok(FormalDirichletSeries { p: self.p, coeffs: out, prime_to_p: self.prime_to_p && other.prime_to_p })
    }

    /// `mu_(O,r)(A) = sum_a eval(A_(r,a)) [a]_r` over the units of `Z/p^r`.
    pub fn to_level_measure<S: Ring>(&self, r: u32, proto: &S, eval: impl Fn(&Self) -> S) -> Result<LevelElement<S>> {
        if let Some(i) = self.coeffs.iter().enumerate().position(|(i, c)| (i as u64 + 1).is_multiple_of(self.p) && !c.is_negligible(0.0)) {
            return Err(Error::SupportViolation(i as u64 + 1));
        }
        let m = pow_checked(self.p, r)?;
        let mut coeffs = vec![proto.zero_like(); m as usize];
        for (a, slot) in coeffs.iter_mut().enumerate() {
            if r > 0 && (a as u64).is_multiple_of(self.p) {
                continue;
            }
            *slot = eval(&self.partial(r, a as u64)?);
        }
        LevelElement::new(self.p, r, IndexKind::Units, coeffs)
    }
}

impl<R: Ring> Ring for FormalDirichletSeries<R> {
    fn zero_like(&self) -> Self {
        Self::zero(self.p, self.nmax(), &self.coeffs[0])
    }
    fn one_like(&self) -> Self {
        Self::unit(self.p, self.nmax(), &self.coeffs[0])
    }
    fn from_i64_like(&self, n: i64) -> Self {
        let mut s = self.zero_like();
        s.coeffs[0] = self.coeffs[0].from_i64_like(n);
        s
    }
    fn radd(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.radd(b)).collect();
        FormalDirichletSeries { p: self.p, coeffs, prime_to_p: self.prime_to_p && other.prime_to_p }
    }
    fn rsub(&self, other: &Self) -> Self {
        self.radd(&other.rneg())
    }
    fn rmul(&self, other: &Self) -> Self {
        self.convolve(other).expect("series share prime and truncation")
    }
    fn rneg(&self) -> Self {
        FormalDirichletSeries { coeffs: self.coeffs.iter().map(Ring::rneg).collect(), ..self.clone() }
    }
    /// Dirichlet inverse, defined when `a_1` is invertible.
    fn try_inv(&self) -> Option<Self> {
        let inv1 = self.coeffs[0].try_inv()?;
        let n = self.nmax();
        let mut b = vec![inv1.zero_like(); n];
        b[0] = inv1.clone();
        for m in 2..=n {
            let mut acc = inv1.zero_like();
            for d in 1..m {
                if m % d == 0 {
                    acc = acc.radd(&self.coeffs[m / d - 1].rmul(&b[d - 1]));
                }
            }
            b[m - 1] = acc.rmul(&inv1).rneg();
        }
        Some(FormalDirichletSeries { p: self.p, coeffs: b, prime_to_p: false })
    }
    fn is_negligible(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.is_negligible(tol))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Rational;

    fn q(n: i128) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn partial_keeps_congruent_indices() {
        let s = FormalDirichletSeries::new(5, (1..=20).map(q).collect()).unwrap();
        let t = s.partial(1, 2).unwrap();
        let kept: Vec<usize> = (1..=20).filter(|&n| *t.coeff(n) != q(0)).collect();
        assert_eq!(kept, vec![2, 7, 12, 17]);
    }

    #[test]
    fn d_b_products() {
        let one = q(1);
        let a = FormalDirichletSeries::d_b(5, 60, 3, &one).unwrap();
        let b = FormalDirichletSeries::d_b(5, 60, 7, &one).unwrap();
        let c = a.convolve(&b).unwrap();
        assert!(c.approx_eq(&FormalDirichletSeries::d_b(5, 60, 21, &one).unwrap(), 0.0));
        let u = FormalDirichletSeries::unit(5, 60, &one);
        assert!(a.convolve(&u).unwrap().approx_eq(&a, 0.0));
    }

    #[test]
    fn d_b_is_a_point_mass() {
        let one = q(1);
        let a = FormalDirichletSeries::d_b(5, 60, 13, &one).unwrap();
        let m = a.to_level_measure(2, &one, |s| s.coeffs().iter().fold(q(0), |x, y| x + y) / q(13)).unwrap();
        for (i, c) in m.coeffs().iter().enumerate() {
            assert_eq!(*c, if i == 13 { one } else { q(0) });
        }
    }

    #[test]
    fn support_violation_is_reported() {
        let one = q(1);
        let a = FormalDirichletSeries::d_b(5, 60, 10, &one).unwrap();
        assert_eq!(a.to_level_measure(1, &one, |_| one).unwrap_err(), Error::SupportViolation(10));
    }
}
