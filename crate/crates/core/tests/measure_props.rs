use iwasawa_core::dirichlet::FormalDirichletSeries;
use iwasawa_core::measure::*;
use iwasawa_core::padic::*;
use iwasawa_core::ring::{Rational, Ring};
use num_complex::Complex64;
use proptest::prelude::*;

const PREC: u32 = 10;

fn pad(p: u64, n: i64) -> PadicNumber {
    PadicNumber::from_i128(p, i128::from(n), PREC).unwrap()
}

fn tower(p: u64, n: u32, vals: &[i64]) -> MeasureTower<PadicNumber> {
    let size = p.pow(n) as usize;
    let coeffs = (0..size).map(|i| pad(p, vals[i % vals.len()])).collect();
    MeasureTower::from_top(LevelElement::new(p, n, IndexKind::Gamma, coeffs).unwrap()).unwrap()
}

fn series_agree(f: &SPowerSeries<PadicNumber>, g: &SPowerSeries<PadicNumber>) -> bool {
    f.coeffs().iter().zip(g.coeffs()).all(|(a, b)| a.eq_at_precision(b))
}

fn small_case() -> impl Strategy<Value = (u64, u32, usize, Vec<i64>)> {
    (prop_oneof![Just(5u64), Just(7u64)], 1u32..=3, 1usize..=5, prop::collection::vec(-50i64..50, 1..40))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dirac_transforms_to_a_power((p, n, d, _) in small_case(), c in 0u64..1000) {
        let a = pow_mod(1 + p, c, p.pow(n + 3)) as i128;
        let t = dirac(p, a, n, &pad(p, 1)).unwrap();
        let f = tau(&t, d).unwrap();
        let l = padic_log(&PadicNumber::from_i128(p, a, PREC).unwrap()).unwrap();
        let mut expect = pad(p, 1);
        for k in 0..d {
            prop_assert!(f.coeff(k).eq_at_precision(&expect), "k={} {} vs {}", k, f.coeff(k), expect);
            expect = expect.try_mul(&l.neg()).unwrap().try_div(&pad(p, k as i64 + 1)).unwrap();
        }
    }

    #[test]
    fn constant_term_is_the_augmentation((p, n, d, vals) in small_case()) {
        let t = tower(p, n, &vals);
        let f = tau(&t, d).unwrap();
        prop_assert!(f.coeff(0).eq_at_precision(&t.top().augmentation()));
        for r in 0..=n {
            prop_assert!(t.level(r).augmentation().eq_at_precision(&t.top().augmentation()));
        }
    }

    #[test]
    fn phi_rescales_by_p_minus_one((p, n, d, vals) in small_case()) {
        let t = tower(p, n, &vals);
        let lhs = tau(&t.phi_push(), d).unwrap();
        let rhs = tau(&t, d).unwrap().rescale(&pad(p, p as i64 - 1));
        prop_assert!(series_agree(&lhs, &rhs));
    }

    #[test]
    fn iota_negates_s((p, n, d, vals) in small_case()) {
        let t = tower(p, n, &vals);
        let lhs = tau(&t.iota_push(), d).unwrap();
        let rhs = tau(&t, d).unwrap().rescale(&pad(p, -1));
        prop_assert!(series_agree(&lhs, &rhs));
    }

    #[test]
    fn iota_phi_substitutes_one_minus_p((p, n, d, vals) in small_case()) {
        let t = tower(p, n, &vals);
        let lhs = tau(&t.phi_push().iota_push(), d).unwrap();
        let rhs = tau(&t, d).unwrap().rescale(&pad(p, 1 - p as i64));
        prop_assert!(series_agree(&lhs, &rhs));
    }

    #[test]
    fn projection_is_a_ring_map((p, n, _, vals) in small_case(), shift in 0usize..7) {
        let a = tower(p, n, &vals).top().clone();
        let rot: Vec<i64> = vals.iter().cycle().skip(shift).take(vals.len()).copied().collect();
        let b = tower(p, n, &rot).top().clone();
        let lhs = a.mul(&b).unwrap().project().unwrap();
        let rhs = a.project().unwrap().mul(&b.project().unwrap()).unwrap();
        prop_assert!(lhs.approx_eq(&rhs, 0.0));
        prop_assert!(a.phi_push().project().unwrap().approx_eq(&a.project().unwrap().phi_push(), 0.0));
        prop_assert!(a.iota_push().project().unwrap().approx_eq(&a.project().unwrap().iota_push(), 0.0));
    }

    #[test]
    fn transform_is_multiplicative((p, n, d, vals) in small_case()) {
        let t = tower(p, n, &vals);
        let u = dirac(p, 1 + p as i128, n, &pad(p, 1)).unwrap();
        let prod = MeasureTower::from_top(t.top().mul(u.top()).unwrap()).unwrap();
        let lhs = tau(&prod, d).unwrap();
        let rhs = tau(&t, d).unwrap().mul(&tau(&u, d).unwrap());
        prop_assert!(series_agree(&lhs, &rhs));
    }

    #[test]
    fn basis_change_round_trip_padic(p in prop_oneof![Just(5u64), Just(7u64)], c in 1i64..200, r in 1usize..=8) {
        let a = 1 + p as i128 * i128::from(c);
        let bc = basis_change_padic(a, p, r, PREC).unwrap();
        for j in 0..r {
            let mut e = vec![pad(p, 0); r];
            e[j] = pad(p, 1);
            let back = mat_vec(&bc.inverse, &mat_vec(&bc.forward, &e));
            for (i, x) in back.iter().enumerate() {
                prop_assert!(x.eq_at_precision(&e[i]), "r={} j={} i={} {}", r, j, i, x);
            }
        }
    }

    #[test]
    fn basis_change_round_trip_complex(p in prop_oneof![Just(5u64), Just(7u64)], b in 2u64..30, r in 1usize..=8) {
        let bc = basis_change_complex(b, p, r).unwrap();
        for j in 0..r {
            let mut e = vec![Complex64::new(0.0, 0.0); r];
            e[j] = Complex64::new(1.0, 0.0);
            let back = mat_vec(&bc.inverse, &mat_vec(&bc.forward, &e));
            for (i, x) in back.iter().enumerate() {
                prop_assert!((x - e[i]).norm() < 1e-9, "r={} j={} i={} {}", r, j, i, x);
            }
        }
    }
}

fn random_series(p: u64, nmax: usize, seed: &[i64]) -> FormalDirichletSeries<Rational> {
    let coeffs = (1..=nmax)
        .map(|n| if (n as u64).is_multiple_of(p) { Rational::from_integer(0) } else { Rational::from_integer(i128::from(seed[n % seed.len()])) })
        .collect();
    FormalDirichletSeries::new(p, coeffs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn level_measure_respects_convolution(r in 1u32..=3, s1 in prop::collection::vec(-9i64..9, 1..30), s2 in prop::collection::vec(-9i64..9, 1..30)) {
        let (p, nmax) = (5u64, 500usize);
        let a = random_series(p, nmax, &s1);
        let b = random_series(p, nmax, &s2);
        let m = p.pow(r);
        let lhs = a.convolve(&b).unwrap().to_level_measure(r, &a, |x| x.clone()).unwrap();
        let rhs = a.to_level_measure(r, &a, |x| x.clone()).unwrap().mul(&b.to_level_measure(r, &b, |x| x.clone()).unwrap()).unwrap();
        prop_assert!(lhs.approx_eq(&rhs, 0.0));
        // residue-pair oracle
        let mut oracle = vec![vec![Rational::from_integer(0); nmax]; m as usize];
        for i in 1..=nmax {
            for j in 1..=nmax / i {
                let v = a.coeff(i) * b.coeff(j);
                oracle[(i * j) % m as usize][i * j - 1] += v;
            }
        }
        for (res, row) in oracle.iter().enumerate() {
            prop_assert_eq!(lhs.coeffs()[res].coeffs(), row.as_slice());
        }
    }
}

#[test]
fn partial_series_cover_the_whole() {
    let a = random_series(5, 200, &[3, -1, 4, 1, -5, 9]);
    let mut total = a.zero_like();
    for res in 0..25 {
        total = total.radd(&a.partial(2, res).unwrap());
    }
    assert!(total.approx_eq(&a, 0.0));
}

#[test]
fn degree_cap_is_enforced() {
    let t = tower(5, 1, &[1]);
    assert!(tau(&t, MAX_DEGREE + 1).is_err());
    assert!(tau(&t, 0).is_err());
}
