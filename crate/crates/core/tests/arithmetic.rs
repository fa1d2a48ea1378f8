use iwasawa_core::curve::arith::*;
use iwasawa_core::curve::*;
use iwasawa_core::lvalues::{gauss_sum, DirichletCharacter};

const SWEEP: [&str; 5] = ["11a1", "14a1", "37a1", "389a1", "5077a1"];

fn brute_trace(e: &CurveModel, p: u64) -> i64 {
    let [a1, a2, a3, a4, a6] = e.minimal_model().map(|c| c.rem_euclid(p as i128) as u64);
    let mut pts = 1u64;
    for x in 0..p {
        let rhs = (x * x % p * x + a2 * x % p * x + a4 * x + a6) % p;
        for y in 0..p {
            if (y * y + a1 * x % p * y + a3 * y) % p == rhs {
                pts += 1;
            }
        }
    }
    p as i64 + 1 - pts as i64
}

#[test]
fn hasse_bound_below_1000() {
    for label in SWEEP {
        let e = named_curve(label).unwrap();
        let n = e.conductor();
        for p in primes_up_to(999) {
            if n.is_multiple_of(p) {
                continue;
            }
            let a = e.a_p(p);
            assert!((a * a) as u64 <= 4 * p, "{label} p={p} a_p={a}");
        }
    }
}

#[test]
fn traces_match_point_enumeration() {
    for label in SWEEP {
        let e = named_curve(label).unwrap();
        for p in primes_up_to(150) {
            if !e.conductor().is_multiple_of(p) {
                assert_eq!(e.a_p(p), brute_trace(&e, p), "{label} p={p}");
            }
        }
    }
}

#[test]
fn coefficients_are_multiplicative() {
    let nmax = 10_000;
    for label in ["11a1", "37a1"] {
        let e = named_curve(label).unwrap();
        let an = an_coeffs(&e, nmax);
        assert_eq!(an[1], 1);
        for m in 2..=nmax {
            for n in 2..=nmax / m {
                if num_integer::Integer::gcd(&m, &n) == 1 {
                    assert_eq!(an[m * n], an[m] * an[n], "{label} {m}*{n}");
                }
            }
        }
        let cond = e.conductor();
        for p in primes_up_to(100) {
            let mut q = p as usize;
            while q * (p as usize) <= nmax {
                let next = q * p as usize;
                let expect = if cond.is_multiple_of(p) { an[p as usize] * an[q] } else { an[p as usize] * an[q] - p as i64 * an[q / p as usize] };
                assert_eq!(an[next], expect, "{label} p^k={next}");
                q = next;
            }
        }
    }
}

fn fundamental_by_squares(d: i64) -> bool {
    if d == 0 || d == 1 || !matches!(d.rem_euclid(4), 0 | 1) {
        return false;
    }
    let mut f = 2i64;
    while f * f <= d.abs() {
        if d % (f * f) == 0 && matches!((d / (f * f)).rem_euclid(4), 0 | 1) {
            return false;
        }
        f += 1;
    }
    true
}

#[test]
fn discriminant_enumeration_matches_brute_force() {
    let x = 500u64;
    for (primes, signs) in [(vec![], vec![]), (vec![5u64], vec![1i8]), (vec![5, 11], vec![1, -1]), (vec![7], vec![-1])] {
        let got = fundamental_discriminants(&primes, &signs, x).unwrap();
        let mut expect = Vec::new();
        for a in 1..x as i64 {
            for d in [-a, a] {
                if fundamental_by_squares(d) && primes.iter().zip(&signs).all(|(&q, &s)| legendre(d, q) == s) {
                    expect.push(d);
                }
            }
        }
        assert_eq!(got, expect, "{primes:?}");
    }
}

#[test]
fn gauss_sums_have_modulus_sqrt_conductor() {
    for p in primes_up_to(125).into_iter().filter(|&p| p > 2) {
        let mut r = 1;
        while p.pow(r) <= 125 {
            for chi in DirichletCharacter::all(p, r).unwrap() {
                if !chi.is_primitive() {
                    assert!(gauss_sum(&chi).is_err() || chi.is_trivial());
                    continue;
                }
                let g = gauss_sum(&chi).unwrap();
                assert!((g.norm_sqr() - chi.conductor() as f64).abs() < 1e-10 * chi.conductor() as f64, "p^r={} {g}", p.pow(r));
            }
            r += 1;
        }
    }
}

#[test]
fn twists_keep_j_and_twice_is_identity() {
    let e = named_curve("11a1").unwrap();
    for d in [-4i64, -3, 5, -11, 8, 13] {
        let t = quadratic_twist(&e, d).unwrap();
        assert_eq!(t.j_invariant(), e.j_invariant());
        let tt = quadratic_twist(&t, d).unwrap();
        assert_eq!(an_coeffs(&tt, 200), an_coeffs(&e, 200), "D={d}");
        let at = an_coeffs(&t, 200);
        let ae = an_coeffs(&e, 200);
        for p in primes_up_to(199) {
            if !t.conductor().is_multiple_of(p) && !e.conductor().is_multiple_of(p) {
                assert_eq!(at[p as usize], i64::from(kronecker(d, p)) * ae[p as usize], "D={d} p={p}");
            }
        }
    }
}

#[test]
fn singular_models_are_rejected() {
    assert!(CurveModel::from_integers("x", [0, 0, 0, 0, 0]).is_err());
    assert!(CurveModel::from_integers("node", [0, 1, 0, 0, 0]).is_err());
}
