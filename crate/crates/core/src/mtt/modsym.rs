//! Plus modular symbols `[a/m]^+`, normalized by the real period.
//!
//! Two routes: period integrals of the newform between cusps, and finite
//! Fourier inversion of twisted L-values (only for `p` prime to `N`).

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::curve::gcd_u64;
use crate::cyclotomic::euler_phi;
use crate::error::{Error, Result};
use crate::lvalues::{gauss_sum, CompensatedSum, ComplexSum, DirichletCharacter, LSeriesData};
use crate::padic::{inv_mod, pow_checked};
use crate::rational::rational_reconstruct_adaptive;
use crate::ring::Rational;

/// Terms needed for the period integral at denominator `m`.
pub fn period_terms_needed(conductor: u64, m: u64) -> usize {
    let q = conductor / gcd_u64(m, conductor);
    (42.0 * m as f64 * libm::sqrt(q as f64) / (2.0 * PI)) as usize + 20
}

/// `sum a_n/n exp(2 pi i n (u/c + i y))` with the phase reduced exactly.
fn q_sum(an: &[i64], u: i128, c: i128, y: f64, stop: usize) -> Complex64 {
    let mut acc = ComplexSum::default();
    let cu = c.unsigned_abs();
    for (n, &a) in an.iter().enumerate().take(stop + 1).skip(1) {
        if a == 0 {
            continue;
        }
        let ph = ((n as i128 * u).rem_euclid(c)) as f64 / cu as f64;
        let z = Complex64::from_polar(libm::exp(-2.0 * PI * n as f64 * y), 2.0 * PI * ph);
        acc.add(z * (a as f64 / n as f64));
    }
    acc.value()
}

/// Atkin-Lehner sign of `f` at the Hall divisor `Q` of `N`, from the
/// root number and the `a_q` at the complementary primes (or at `Q`).
fn atkin_lehner_sign(data: &LSeriesData, q: u64, a: i64, m: u64) -> Result<f64> {
    let n = data.conductor();
    if q == 1 {
        return Ok(1.0);
    }
    let sign_of = |d: u64| -> Result<f64> {
        let mut s = 1.0;
        for (r, e) in crate::curve::arith::factor(i128::from(d))? {
            if e > 1 || n.is_multiple_of(r * r) {
                return Err(Error::UnsupportedCusp(a, m));
            }
            s *= -(data.an()[r as usize] as f64);
        }
        Ok(s)
    };
    let w = f64::from(data.root_number());
    // eps_N = -w = eps_P eps_Q
    match sign_of(n / q) {
        Ok(ep) => Ok(-w * ep),
        Err(_) => sign_of(q),
    }
}

/// `lambda(a/m) = 2 pi i int_(i inf)^(a/m) f(z) dz`, un-normalized.
///
/// With `P = gcd(m, N)` a Hall divisor of `N` and `Q = N/P`, the matrix
/// `W = [[Q a, y], [Q m, Q w]]` of determinant `Q` lies in the Atkin-Lehner
/// coset of `Q` and sends `inf` to `a/m`, so
/// `lambda(a/m) = lambda(W z0) - eps_Q lambda(z0)` for any `z0`.
pub fn period_lambda(data: &LSeriesData, a: i64, m: u64) -> Result<Complex64> {
    if m == 0 {
        return Err(Error::InvalidInput("zero denominator".into()));
    }
    let n_cond = data.conductor();
    let g = gcd_u64(a.unsigned_abs(), m);
    let (a, m) = (a / g as i64, m / g);
    if m == 1 {
        return Ok(data.l_value(0)?.value);
    }
    let p_part = gcd_u64(m, n_cond);
    let q = n_cond / p_part;
    if gcd_u64(p_part, q) != 1 {
        return Err(Error::UnsupportedCusp(a, m));
    }
    let eps = atkin_lehner_sign(data, q, a, m)?;
    let stop = period_terms_needed(n_cond, m);
    if data.nmax() < stop {
        return Err(Error::InvalidInput("a_n table too short for this cusp".into()));
    }
    let mi = m as i128;
    // Q a w - m y = 1
    let qa = (q as i128 * a as i128).rem_euclid(mi) as u64;
    let w = inv_mod(qa, m).ok_or(Error::UnsupportedCusp(a, m))? as i128;
    // z0 = -w/m + i/(m sqrt Q), W z0 = a/m + i/(m sqrt Q)
    let y = 1.0 / (m as f64 * libm::sqrt(q as f64));
    let an = data.an();
    Ok(q_sum(an, a as i128, mi, y, stop) - q_sum(an, -w, mi, y, stop) * eps)
}

/// `[a/m]^+ = Re lambda(a/m) / Omega`.
pub fn period_symbol(data: &LSeriesData, omega: f64, a: i64, m: u64) -> Result<f64> {
    Ok(period_lambda(data, a, m)?.re / omega)
}

/// `[b/p^k]^+` for every unit `b` modulo `p^k` (zero at non-units) by
/// Fourier inversion of `S_k(psi) = sum_b psi(b) [b/p^k]^+`.
pub fn inversion_symbols(data: &LSeriesData, omega: f64, p: u64, k: u32) -> Result<Vec<f64>> {
    if k == 0 || data.conductor().is_multiple_of(p) {
        return Err(Error::BadConductor);
    }
    let ap = data.an().get(p as usize).copied().ok_or(Error::InvalidInput("a_p beyond the table".into()))? as f64;
    let zero_symbol = data.l_value(0)?.value.re / omega;
    let mut memo: BTreeMap<(u32, u64), Complex64> = BTreeMap::new();
    let chars = DirichletCharacter::all(p, k)?;
    let mut sums = Vec::with_capacity(chars.len());
    for chi in &chars {
        sums.push(s_value(data, omega, ap, zero_symbol, chi, &mut memo)?);
    }
    let m = pow_checked(p, k)?;
    let phi = euler_phi(m) as f64;
    let mut out = vec![0.0; m as usize];
    for (b, slot) in out.iter_mut().enumerate() {
        if (b as u64).is_multiple_of(p) {
            continue;
        }
        let mut acc = ComplexSum::default();
        for (chi, s) in chars.iter().zip(&sums) {
            acc.add(chi.value(b as i64).conj() * s);
        }
        *slot = acc.value().re / phi;
    }
    Ok(out)
}

fn s_value(data: &LSeriesData, omega: f64, ap: f64, zero_symbol: f64, chi: &DirichletCharacter, memo: &mut BTreeMap<(u32, u64), Complex64>) -> Result<Complex64> {
    let k = level_of(chi);
    let key = (k, chi.exponent(primitive_generator(chi)).unwrap_or(0));
    if let Some(v) = memo.get(&key) {
        return Ok(*v);
    }
    let p = chi.prime();
    let c = chi.conductor_exponent();
    let zero = Complex64::new(0.0, 0.0);
    let v = if c == k {
        if chi.is_even() {
            gauss_sum(chi)? * data.twisted_l_value(&chi.conj())?.value / omega
        } else {
            zero
        }
    } else if k == 1 {
        Complex64::new((ap - 2.0) * zero_symbol, 0.0)
    } else {
        // Hecke relation for U_p summed against chi
        let lower = s_value(data, omega, ap, zero_symbol, &chi.at_level(k - 1)?, memo)?;
        let t = if k == 2 && c == 0 {
            Complex64::new((p - 1) as f64 * zero_symbol, 0.0)
        } else if c + 1 == k {
            zero
        } else {
            s_value(data, omega, ap, zero_symbol, &chi.at_level(k - 2)?, memo)? * p as f64
        };
        lower * ap - t
    };
    memo.insert(key, v);
    Ok(v)
}

fn level_of(chi: &DirichletCharacter) -> u32 {
    let mut r = 0;
    let mut m = chi.modulus();
    while m > 1 {
        m /= chi.prime();
        r += 1;
    }
    r
}

fn primitive_generator(chi: &DirichletCharacter) -> i64 {
    crate::lvalues::primitive_root(chi.prime(), level_of(chi)) as i64
}

/// Exact plus modular symbols `[a/p^k]^+` for `k <= depth`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolTable {
    p: u64,
    /// `levels[k][a] = [a/p^k]^+` for `a` modulo `p^k`.
    levels: Vec<Vec<Rational>>,
    denom_bound: u64,
    max_error: f64,
}

impl SymbolTable {
    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn depth(&self) -> u32 {
        self.levels.len() as u32 - 1
    }

    /// `[a/p^k]^+`.
    pub fn get(&self, a: i64, k: u32) -> Rational {
        let row = &self.levels[k as usize];
        row[a.rem_euclid(row.len() as i64) as usize]
    }

    pub fn level(&self, k: u32) -> &[Rational] {
        &self.levels[k as usize]
    }

    /// Largest denominator bound the reconstruction needed.
    pub fn denom_bound(&self) -> u64 {
        self.denom_bound
    }

    /// Largest distance between a floating value and its reconstruction.
    pub fn max_error(&self) -> f64 {
        self.max_error
    }

    /// Smallest common denominator of all entries.
    pub fn common_denominator(&self) -> i128 {
        self.levels.iter().flatten().fold(1i128, |acc, r| num_integer::Integer::lcm(&acc, r.denom()))
    }
}

/// Options for symbol reconstruction.
#[derive(Clone, Copy, Debug)]
pub struct SymbolOptions {
    pub denom_bound: u64,
    pub max_denom_bound: u64,
    /// Error assumed for the floating values before reconstruction.
    pub error: f64,
}

impl Default for SymbolOptions {
    fn default() -> Self {
        SymbolOptions { denom_bound: 64, max_denom_bound: 1 << 10, error: 1e-7 }
    }
}

/// Floating symbols `[a/p^k]^+` for every `a` modulo `p^k`, by inversion when
/// `p` is prime to `N` and by period integrals otherwise.
pub fn symbol_floats(data: &LSeriesData, omega: f64, p: u64, k: u32) -> Result<Vec<f64>> {
    let m = pow_checked(p, k)?;
    if k == 0 {
        return Ok(vec![data.l_value(0)?.value.re / omega]);
    }
    let mut row = if !data.conductor().is_multiple_of(p) {
        inversion_symbols(data, omega, p, k)?
    } else {
        let mut r = vec![0.0; m as usize];
        for (a, slot) in r.iter_mut().enumerate() {
            if !(a as u64).is_multiple_of(p) {
                *slot = period_symbol(data, omega, a as i64, m)?;
            }
        }
        r
    };
    let lower = symbol_floats(data, omega, p, k - 1)?;
    for a in (0..m as usize).step_by(p as usize) {
        row[a] = lower[a / p as usize];
    }
    Ok(row)
}

/// Reconstructed symbol table up to `p^depth`.
pub fn modular_symbol_values(data: &LSeriesData, omega: f64, p: u64, depth: u32, opts: &SymbolOptions) -> Result<SymbolTable> {
    let mut levels = Vec::with_capacity(depth as usize + 1);
    let mut bound = opts.denom_bound;
    let mut max_error: f64 = 0.0;
    for k in 0..=depth {
        let row = symbol_floats(data, omega, p, k)?;
        let m = row.len();
        let mut out = Vec::with_capacity(m);
        for (a, &x) in row.iter().enumerate() {
            let mirror = row[(m - a) % m];
            if libm::fabs(x - mirror) > opts.error {
                return Err(Error::ReconstructionFailed(alloc::format!("plus symmetry broken at {a}/{m}")));
            }
            let r = rational_reconstruct_adaptive((x + mirror) / 2.0, opts.error, bound, opts.max_denom_bound)
                .map_err(|e| Error::ReconstructionFailed(alloc::format!("[{a}/{m}] = {x}: {e}")))?;
            bound = bound.max(*r.denom() as u64);
            let q = Rational::new(i128::from(*r.numer()), i128::from(*r.denom()));
            max_error = max_error.max(libm::fabs(x - crate::ring::rational_to_f64(&q)));
            out.push(q);
        }
        levels.push(out);
    }
    Ok(SymbolTable { p, levels, denom_bound: bound, max_error })
}

/// Largest `|a_p [b/p^(k-1)] - sum_j [(b + j p^(k-1))/p^k] - [b/p^(k-2)]|`
/// over the table (the `U_p` distribution relation). The last term is
/// dropped when `good` is false.
pub fn hecke_defect(table: &SymbolTable, ap: i64, good: bool) -> Rational {
    let p = table.prime() as i64;
    let mut worst = Rational::from_integer(0);
    for k in 2..=table.depth() {
        let m1 = p.pow(k - 1);
        for b in 0..m1 {
            let mut s = Rational::from_integer(i128::from(ap)) * table.get(b, k - 1);
            if good {
                s -= table.get(b, k - 2);
            }
            for j in 0..p {
                s -= table.get(b + j * m1, k);
            }
            let s = if s < Rational::from_integer(0) { -s } else { s };
            if s > worst {
                worst = s;
            }
        }
    }
    worst
}

/// `sum_(b unit mod p) [b/p]^+` as a float, for the orthogonality check.
pub fn unit_sum(row: &[f64], p: u64) -> f64 {
    let mut acc = CompensatedSum::default();
    for (b, x) in row.iter().enumerate() {
        if !(b as u64).is_multiple_of(p) {
            acc.add(*x);
        }
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{named_curve, real_period};

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    fn data_for(label: &str, m: u64) -> (LSeriesData, f64) {
        let e = named_curve(label).unwrap();
        let n = crate::lvalues::terms_needed(e.conductor(), m).max(period_terms_needed(e.conductor(), m));
        (LSeriesData::with_nmax(&e, n).unwrap(), real_period(&e))
    }

    #[test]
    fn period_route_matches_table_mod_5() {
        let (d, om) = data_for("11a1", 5);
        let expect = [q(1, 5), q(6, 5), q(-13, 10), q(-13, 10), q(6, 5)];
        for (a, x) in expect.iter().enumerate() {
            let v = period_symbol(&d, om, a as i64, 5).unwrap();
            assert!((v - crate::ring::rational_to_f64(x)).abs() < 1e-9, "a={a} v={v}");
        }
    }

    #[test]
    fn routes_agree_mod_25() {
        let (d, om) = data_for("11a1", 25);
        let inv = inversion_symbols(&d, om, 5, 2).unwrap();
        for a in 1..25 {
            if a % 5 == 0 {
                continue;
            }
            let v = period_symbol(&d, om, a, 25).unwrap();
            assert!((v - inv[a as usize]).abs() < 1e-8, "a={a} {v} {}", inv[a as usize]);
        }
    }

    #[test]
    fn split_prime_symbols() {
        let (d, om) = data_for("11a1", 11);
        let t = modular_symbol_values(&d, om, 11, 1, &SymbolOptions::default()).unwrap();
        let expect = [q(1, 5), q(0, 1), q(1, 1), q(1, 2), q(-1, 2), q(-1, 1), q(-1, 1), q(-1, 2), q(1, 2), q(1, 1), q(0, 1)];
        assert_eq!(t.level(1), &expect);
    }

    #[test]
    fn distribution_relation_holds() {
        for (label, p, good) in [("11a1", 5u64, true), ("14a1", 7, false), ("20a1", 5, false)] {
            let (d, om) = data_for(label, p * p);
            let t = modular_symbol_values(&d, om, p, 2, &SymbolOptions::default()).unwrap();
            assert_eq!(hecke_defect(&t, d.an()[p as usize], good), q(0, 1), "{label}");
        }
    }

    #[test]
    fn mixed_cusp_of_level_14() {
        let (d, om) = data_for("14a1", 49);
        let t = modular_symbol_values(&d, om, 7, 2, &SymbolOptions::default()).unwrap();
        assert!(t.denom_bound() <= 64);
        assert!(t.max_error() < 1e-9);
    }
}
