use iwasawa_core::padic::*;
use iwasawa_core::Error;
use proptest::prelude::*;

const PRIMES: [u64; 4] = [2, 5, 7, 11];

fn pad(p: u64, n: i64, prec: u32) -> PadicNumber {
    PadicNumber::from_i128(p, i128::from(n), prec).unwrap()
}

proptest! {
    #[test]
    fn ring_axioms(pi in 0usize..4, a in -10_000i64..10_000, b in -10_000i64..10_000, c in -10_000i64..10_000) {
        let p = PRIMES[pi];
        let (x, y, z) = (pad(p, a, 8), pad(p, b, 8), pad(p, c, 8));
        let lhs = x.try_mul(&y.try_add(&z).unwrap()).unwrap();
        let rhs = x.try_mul(&y).unwrap().try_add(&x.try_mul(&z).unwrap()).unwrap();
        prop_assert!(lhs.eq_at_precision(&rhs));
        prop_assert!(x.try_add(&y).unwrap().eq_at_precision(&y.try_add(&x).unwrap()));
        prop_assert!(x.try_mul(&y).unwrap().eq_at_precision(&y.try_mul(&x).unwrap()));
        let assoc_l = x.try_mul(&y).unwrap().try_mul(&z).unwrap();
        let assoc_r = x.try_mul(&y.try_mul(&z).unwrap()).unwrap();
        prop_assert!(assoc_l.eq_at_precision(&assoc_r));
        prop_assert!(x.try_sub(&x).unwrap().is_zero());
    }

    #[test]
    fn integers_agree_with_residues(pi in 0usize..4, a in -1_000_000i64..1_000_000, b in -1_000_000i64..1_000_000) {
        let p = PRIMES[pi];
        let m = pow_checked(p, 6).unwrap() as i128;
        let s = pad(p, a, 12).try_mul(&pad(p, b, 12)).unwrap();
        let expect = (i128::from(a) * i128::from(b)).rem_euclid(m);
        if s.valuation_lower_bound() >= 0 {
            prop_assert_eq!(i128::from(s.residue(6).unwrap()), expect);
        }
    }

    #[test]
    fn division_inverts_multiplication(pi in 0usize..4, a in 1i64..100_000, b in 1i64..100_000) {
        let p = PRIMES[pi];
        let x = pad(p, a, 10);
        let y = pad(p, b, 10);
        let q = x.try_mul(&y).unwrap().try_div(&y).unwrap();
        prop_assert!(q.eq_at_precision(&x));
    }

    #[test]
    fn log_is_a_homomorphism(pi in 1usize..4, a in 0i64..5_000, b in 0i64..5_000) {
        let p = PRIMES[pi];
        let x = pad(p, 1 + p as i64 * a, 10);
        let y = pad(p, 1 + p as i64 * b, 10);
        let lhs = padic_log(&x.try_mul(&y).unwrap()).unwrap();
        let rhs = padic_log(&x).unwrap().try_add(&padic_log(&y).unwrap()).unwrap();
        prop_assert!(lhs.eq_at_precision(&rhs), "{} vs {}", lhs, rhs);
        prop_assert!(lhs.valuation_lower_bound() >= 1);
    }

    #[test]
    fn unit_root_solves_frobenius_polynomial(pi in 1usize..4, ap in -20i64..20) {
        let p = PRIMES[pi];
        prop_assume!(ap.rem_euclid(p as i64) != 0);
        let prec = 8;
        let a = hensel_unit_root(ap, p, prec, UnitRootCase::GoodOrdinary).unwrap();
        let f = a.try_mul(&a).unwrap().try_sub(&a.scale_i64(ap).unwrap()).unwrap().try_add(&pad(p, p as i64, prec)).unwrap();
        prop_assert!(f.is_zero() || f.valuation_lower_bound() >= i64::from(prec));
        prop_assert_eq!(a.valuation(), Some(0));
    }

    #[test]
    fn tate_parameter_round_trip(pi in 1usize..4, v in 1i64..4, u in 1i64..2_000) {
        let p = PRIMES[pi];
        prop_assume!(u % p as i64 != 0);
        let q = pad(p, u * (p as i64).pow(v as u32), 8);
        let j = j_from_q(&q).unwrap();
        let back = tate_period_from_j(&j, 6).unwrap();
        prop_assert!(back.try_sub(&q).unwrap().valuation_lower_bound() >= v + 6);
    }

    #[test]
    fn rational_reconstruction_round_trip(pi in 1usize..4, a in -200i128..200, b in 1i128..200) {
        let p = PRIMES[pi];
        let g = num_integer::Integer::gcd(&a, &b);
        prop_assume!(a != 0 && b % p as i128 != 0);
        let (a, b) = (a / g, b / g);
        let x = PadicNumber::from_rational(p, a, b, max_precision(p) - 2).unwrap();
        prop_assert_eq!(padic_rational_reconstruct(&x).unwrap(), (a, b));
    }
}

#[test]
fn log_rejects_non_units() {
    assert_eq!(padic_log(&pad(5, 2, 6)), Err(Error::NotOneUnit));
    assert_eq!(padic_log(&pad(5, 5, 6)), Err(Error::NotOneUnit));
}

#[test]
fn precision_is_bounded_by_word_size() {
    assert!(matches!(PadicNumber::from_i128(5, 1, max_precision(5) + 1), Err(Error::PrecisionTooLarge { .. })));
    assert_eq!(max_precision(2), 62);
}

#[test]
fn iwasawa_log_kills_p() {
    let l = iwasawa_log(&pad(7, 7 * 8, 8)).unwrap();
    let r = iwasawa_log(&pad(7, 8, 8)).unwrap();
    assert!(l.eq_at_precision(&r));
}
