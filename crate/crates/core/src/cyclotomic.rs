//! Elements of `R[x] / Phi_m(x)`, with `x` standing for a primitive `m`-th
//! root of unity.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::ring::{Ring, ToComplex};

/// Integer coefficients of `Phi_m`, constant term first.
pub fn cyclotomic_poly(m: u64) -> Vec<i64> {
    assert!(m >= 1);
    // x^m - 1 divided by Phi_d for every proper divisor d
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            num = div_monic(&num, &cyclotomic_poly(d));
        }
    }
    num
}

fn div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quo = vec![0i64; num.len() - dn];
    for i in (0..quo.len()).rev() {
        let c = rem[i + dn];
        quo[i] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quo
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            while n.is_multiple_of(q) {
                n /= q;
            }
            result -= result / q;
        }
        q += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

#[derive(Clone, Debug)]
pub struct Cyclotomic<R> {
    m: u64,
    phi: Arc<[i64]>,
    coeffs: Vec<R>,
}

pub type CyclotomicPadic = Cyclotomic<crate::padic::PadicNumber>;

impl<R: Ring> Cyclotomic<R> {
    fn with_poly(m: u64, phi: Arc<[i64]>, mut raw: Vec<R>, proto: &R) -> Self {
        let deg = phi.len() - 1;
        // reduce modulo the monic Phi_m, top coefficient downwards
        for i in (deg..raw.len()).rev() {
            let c = raw[i].clone();
            if c.is_negligible(0.0) {
                continue;
            }
            for (j, &d) in phi.iter().enumerate().take(deg) {
                if d != 0 {
                    let t = c.rmul(&proto.from_i64_like(d));
                    raw[i - deg + j] = raw[i - deg + j].rsub(&t);
                }
            }
        }
        raw.truncate(deg);
        while raw.len() < deg {
            raw.push(proto.zero_like());
        }
        Cyclotomic { m, phi, coeffs: raw }
    }

    /// `sum_e c_e zeta_m^e` for the given exponents, taken modulo `m`.
    pub fn from_exponents(m: u64, terms: &[(u64, R)], proto: &R) -> Self {
        let phi: Arc<[i64]> = cyclotomic_poly(m).into();
        let mut raw = vec![proto.zero_like(); m as usize];
        for (e, c) in terms {
            let i = (*e % m) as usize;
            raw[i] = raw[i].radd(c);
        }
        Self::with_poly(m, phi, raw, proto)
    }

    /// Same, reusing this element's modulus.
    pub fn sibling_from_exponents(&self, terms: &[(u64, R)], proto: &R) -> Self {
        let mut raw = vec![proto.zero_like(); self.m as usize];
        for (e, c) in terms {
            let i = (*e % self.m) as usize;
            raw[i] = raw[i].radd(c);
        }
        Self::with_poly(self.m, self.phi.clone(), raw, proto)
    }

    pub fn from_scalar(m: u64, c: R) -> Self {
        let proto = c.clone();
        Self::from_exponents(m, &[(0, c)], &proto)
    }

    pub fn zeta(m: u64, proto: &R) -> Self {
        Self::from_exponents(m, &[(1, proto.one_like())], proto)
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficients on the power basis `1, zeta, ..., zeta^(deg-1)`.
    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.m, other.m, "cyclotomic orders differ");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.radd(b)).collect();
        Cyclotomic { m: self.m, phi: self.phi.clone(), coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Cyclotomic { m: self.m, phi: self.phi.clone(), coeffs: self.coeffs.iter().map(Ring::rneg).collect() }
    }

    pub fn scale(&self, c: &R) -> Self {
        Cyclotomic { m: self.m, phi: self.phi.clone(), coeffs: self.coeffs.iter().map(|a| a.rmul(c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let proto = &self.coeffs[0];
        let n = self.coeffs.len();
        let mut raw = vec![proto.zero_like(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_negligible(0.0) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                raw[i + j] = raw[i + j].radd(&a.rmul(b));
            }
        }
        Self::with_poly(self.m, self.phi.clone(), raw, proto)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let proto = &self.coeffs[0];
        let mut acc = self.sibling_from_exponents(&[(0, proto.one_like())], proto);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_negligible(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.is_negligible(tol))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.sub(other).is_negligible(tol)
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Cyclotomic<S> {
        Cyclotomic { m: self.m, phi: self.phi.clone(), coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn try_map<S: Ring, E>(&self, f: impl Fn(&R) -> Result<S, E>) -> Result<Cyclotomic<S>, E> {
        Ok(Cyclotomic { m: self.m, phi: self.phi.clone(), coeffs: self.coeffs.iter().map(f).collect::<Result<_, _>>()? })
    }
}

impl<R: Ring + ToComplex> Cyclotomic<R> {
    /// Image under `zeta_m -> exp(2 pi i / m)`.
    pub fn to_complex(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate() {
            let t = 2.0 * core::f64::consts::PI * k as f64 / self.m as f64;
            acc += c.to_complex() * Complex64::new(libm::cos(t), libm::sin(t));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PadicNumber;
    use crate::ring::Rational;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(5), vec![1, 1, 1, 1, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        let p25 = cyclotomic_poly(25);
        assert_eq!(p25.len(), 21);
        assert_eq!(p25.iter().filter(|&&c| c == 1).count(), 5);
    }

    #[test]
    fn zeta_has_exact_order() {
        let one = Rational::from_integer(1);
        for m in [1u64, 2, 3, 4, 5, 25, 12] {
            let z = Cyclotomic::zeta(m, &one);
            let id = Cyclotomic::from_scalar(m, one);
            assert!(z.pow(m).approx_eq(&id, 0.0));
            for d in 1..m {
                if m % d == 0 {
                    assert!(!z.pow(d).approx_eq(&id, 0.0));
                }
            }
        }
    }

    #[test]
    fn sum_of_primitive_roots_is_mobius() {
        let one = Rational::from_integer(1);
        let terms: Vec<(u64, Rational)> = (1..5).map(|e| (e, one)).collect();
        let s = Cyclotomic::from_exponents(5, &terms, &one);
        assert!(s.approx_eq(&Cyclotomic::from_scalar(5, Rational::from_integer(-1)), 0.0));
        let c = s.to_complex();
        assert!((c.re + 1.0).abs() < 1e-12 && c.im.abs() < 1e-12);
    }

    #[test]
    fn padic_coefficients() {
        let one = PadicNumber::one(5, 6).unwrap();
        let z = Cyclotomic::zeta(25, &one);
        let w = z.pow(7).mul(&z.pow(18));
        assert!(w.approx_eq(&Cyclotomic::from_scalar(25, one), 0.0));
    }
}
