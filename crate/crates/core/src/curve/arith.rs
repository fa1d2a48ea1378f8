//! Integer helpers: primes, factorization, Legendre symbols, discriminants.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::padic::pow_mod;

const TRIAL_BOUND: u64 = 1_000_000;

/// Primes up to `n` (inclusive).
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64).collect()
}

/// Smallest prime factor for every `n <= bound` (0 and 1 map to 0).
pub fn smallest_prime_factors(bound: usize) -> Vec<u32> {
    let mut spf = vec![0u32; bound + 1];
    for i in 2..=bound {
        if spf[i] == 0 {
            let mut j = i;
            while j <= bound {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

fn mul_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    if let Some(x) = a.checked_mul(b) {
        return x % m;
    }
    let (mut a, mut b, mut r) = (a % m, b % m, 0u128);
    while b > 0 {
        if b & 1 == 1 {
            r = (r + a) % m;
            if r >= m {
                r -= m;
            }
        }
        a = if a >= m - a { a - (m - a) } else { a + a };
        b >>= 1;
    }
    r
}

fn pow_mod_u128(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod_u128(r, b, m);
        }
        b = mul_mod_u128(b, b, m);
        e >>= 1;
    }
    r
}

/// Miller-Rabin with the first twelve prime bases: deterministic below
/// `3.3 * 10^24`, probabilistic beyond.
pub fn is_probable_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u128; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for a in BASES {
        let mut x = pow_mod_u128(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u128(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A nontrivial factor of the odd composite `n` (Pollard-Brent).
fn pollard_brent(n: u128) -> Option<u128> {
    for c in 1..50u128 {
        let f = |x: u128| (mul_mod_u128(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u128, 1u64, 1u128);
        let mut g = 1u128;
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(128.min(r - k)) {
                    y = f(y);
                    q = mul_mod_u128(q, x.abs_diff(y), n);
                }
                g = gcd_u128(q, n);
                k += 128;
            }
            r *= 2;
            if r > 1 << 26 {
                break;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u128(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g > 1 && g < n {
            return Some(g);
        }
    }
    None
}

/// Prime factorization `[(q, e)]` of `|n|`, sorted by `q`.
pub fn factor(n: i128) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::FactorizationFailed(0));
    }
    let mut m = n.unsigned_abs();
    let mut out: Vec<(u64, u32)> = Vec::new();
    let push = |q: u64, out: &mut Vec<(u64, u32)>| match out.iter_mut().find(|(p, _)| *p == q) {
        Some(e) => e.1 += 1,
        None => out.push((q, 1)),
    };
    let mut q = 2u64;
    while q <= TRIAL_BOUND && (q as u128) * (q as u128) <= m {
        while m.is_multiple_of(q as u128) {
            m /= q as u128;
            push(q, &mut out);
        }
        q += if q == 2 { 1 } else { 2 };
    }
    let mut stack = vec![m];
    while let Some(x) = stack.pop() {
        if x == 1 {
            continue;
        }
        if is_probable_prime(x) {
            let q = u64::try_from(x).map_err(|_| Error::FactorizationFailed(n))?;
            push(q, &mut out);
            continue;
        }
        let f = pollard_brent(x).ok_or(Error::FactorizationFailed(n))?;
        stack.push(f);
        stack.push(x / f);
    }
    out.sort_unstable();
    Ok(out)
}

pub fn is_squarefree(n: i64) -> bool {
    if n == 0 {
        return false;
    }
    let m = n.unsigned_abs();
    let mut q = 2u64;
    while q * q <= m {
        if m.is_multiple_of(q * q) {
            return false;
        }
        q += 1;
    }
    true
}

/// Legendre symbol `(d / q)` for an odd prime `q`, by Euler's criterion.
pub fn legendre(d: i64, q: u64) -> i8 {
    let r = (d as i128).rem_euclid(q as i128) as u64;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (q - 1) / 2, q) == 1 {
        1
    } else {
        -1
    }
}

/// Kronecker symbol `(d / n)` for `n > 0`.
pub fn kronecker(d: i64, n: u64) -> i8 {
    let mut n = n;
    let mut result: i8 = 1;
    while n.is_multiple_of(2) {
        n /= 2;
        let r = d.rem_euclid(8);
        result *= match r {
            0 | 2 | 4 | 6 => 0,
            1 | 7 => 1,
            _ => -1,
        };
    }
    if n == 1 {
        return result;
    }
    for (q, e) in factor(n as i128).expect("small modulus") {
        if e % 2 == 1 {
            result *= legendre(d, q);
        } else if d.rem_euclid(q as i64) == 0 {
            result = 0;
        }
    }
    result
}

pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m)
        }
        _ => false,
    }
}

/// Fundamental discriminants `|D| < x` with `(D / p_i) = eps_i`, ordered by
/// `|D|` with negative first.
pub fn fundamental_discriminants(primes: &[u64], signs: &[i8], x: u64) -> Result<Vec<i64>> {
    if primes.len() != signs.len() {
        return Err(Error::InvalidInput("prime and sign lists differ in length".into()));
    }
    let mut out = Vec::new();
    for a in 1..x as i64 {
        for d in [-a, a] {
            if is_fundamental_discriminant(d) && primes.iter().zip(signs).all(|(&q, &e)| legendre(d, q) == e) {
                out.push(d);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(1, 7), 1);
        assert_eq!(legendre(5, 11), 1);
        assert_eq!(legendre(22, 11), 0);
        assert_eq!(legendre(2, 5), -1);
    }

    #[test]
    fn fundamental_discriminant_definition() {
        assert!(is_fundamental_discriminant(5));
        assert!(!is_fundamental_discriminant(15));
        assert!(is_fundamental_discriminant(-4));
        assert!(is_fundamental_discriminant(8));
        assert!(!is_fundamental_discriminant(-16));
    }

    #[test]
    fn factorization() {
        assert_eq!(factor(-161051).unwrap(), vec![(11, 5)]);
        assert_eq!(factor(1_000_003i128 * 1_000_033 * 4).unwrap(), vec![(2, 2), (1_000_003, 1), (1_000_033, 1)]);
        let big = 4_294_967_311i128 * 4_294_967_357;
        assert_eq!(factor(big).unwrap(), vec![(4_294_967_311, 1), (4_294_967_357, 1)]);
    }

    #[test]
    fn kronecker_matches_legendre_at_odd_primes() {
        for d in -30..30 {
            assert_eq!(kronecker(d, 7), legendre(d, 7));
        }
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(-7, 2), 1);
    }
}
