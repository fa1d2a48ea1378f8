use iwasawa_core::curve::*;
use iwasawa_core::measure::GammaCharacter;
use iwasawa_core::mtt::modsym::hecke_defect;
use iwasawa_core::mtt::*;
use iwasawa_core::padic::PadicNumber;
use iwasawa_core::ring::{rational_to_padic, Rational};

fn context(label: &str, p: u64, level: u32) -> CurveContext {
    CurveContext::new(&named_curve(label).unwrap(), p, level).unwrap()
}

fn run(label: &str, p: u64) -> (CurveContext, PadicLData) {
    let c = context(label, p, 1);
    let d = mtt_measure(&c, p, &MttConfig::default()).unwrap();
    (c, d)
}

fn shown(d: &PadicLData) -> Vec<String> {
    d.series.coeffs().iter().map(ToString::to_string).collect()
}

#[test]
fn eleven_a_at_five() {
    let (c, d) = run("11a1", 5);
    assert_eq!(shown(&d), ["1*5 + 4*5^2 + 4*5^3 + O(5^6)", "1*5^2 + O(5^3)", "3*5^3 + O(5^4)"]);
    assert_eq!(d.ledger, [None, Some(3), Some(4)]);
    let r = c.l_over_omega(&SymbolOptions::default()).unwrap();
    assert_eq!(r, Rational::new(1, 5));
    let expect = d.euler_factor().unwrap().try_mul(&rational_to_padic(&r, 5, 20).unwrap()).unwrap();
    assert!(d.value_at_zero().try_sub(&expect).unwrap().truncate(4).is_zero());
    assert!(interpolation_check(&c, &d, 1e-5).unwrap().holds());
    assert_eq!(iota_phi_substitution_check(&d, 3).unwrap(), None);
}

#[test]
fn symbols_satisfy_plus_symmetry_and_distribution() {
    let c = context("11a1", 5, 2);
    let t = modular_symbol_values(&c.data, c.omega, 5, 3, &SymbolOptions::default()).unwrap();
    for k in 0..=3 {
        let m = 5i64.pow(k);
        for a in 0..m {
            assert_eq!(t.get(a, k), t.get(-a, k), "[{a}/{m}]");
        }
    }
    assert_eq!(hecke_defect(&t, 1, true), Rational::from_integer(0));
    assert_eq!(t.get(0, 0), Rational::new(1, 5));
}

#[test]
fn characters_come_in_conjugate_pairs() {
    let (_, d) = run("11a1", 5);
    let lvl = d.tower.level(1);
    for chi in GammaCharacter::all_of_level(5, 1) {
        let bar = GammaCharacter { e: (5 - chi.e) % 5, ..chi }.reduced();
        let x = sigma_bridge(lvl, &chi, &d.alpha, d.reduction).unwrap();
        let y = sigma_bridge(lvl, &bar, &d.alpha, d.reduction).unwrap();
        assert!((x - y.conj()).norm() < 1e-9, "{chi:?}");
    }
}

#[test]
fn rank_one_curve_has_a_simple_zero() {
    let (c, d) = run("37a1", 5);
    assert_eq!(shown(&d), ["O(5^6)", "4*5 + O(5^2)", "1*5^2 + O(5^3)"]);
    let v = conj_mtt_verdict(&c, 5, &MttConfig::default()).unwrap();
    assert!(v.holds());
    assert_eq!(v.evidence("order"), Some("1"));
    assert_eq!(v.evidence("analytic_rank"), Some("1"));
}

#[test]
fn multiplicative_primes_interpolate() {
    for (label, p) in [("11a1", 11u64), ("14a1", 7), ("15a1", 5), ("20a1", 5)] {
        let (c, d) = run(label, p);
        let v = interpolation_check(&c, &d, 1e-5).unwrap();
        assert!(v.holds(), "{label}@{p} {:?}", v.evidence);
    }
}

#[test]
fn nonsplit_value_at_zero_keeps_the_euler_factor() {
    let (c, d) = run("20a1", 5);
    assert_eq!(d.reduction, ReductionType::NonSplitMultiplicative);
    assert_eq!(c.l_over_omega(&SymbolOptions::default()).unwrap(), Rational::new(1, 6));
    let third = PadicNumber::from_rational(5, 1, 3, 6).unwrap();
    assert!(d.value_at_zero().eq_at_precision(&third));
}

#[test]
fn split_prime_extra_zero_and_derivative() {
    let c = context("11a1", 11, 1);
    let v = gs_check(&c, 11, &MttConfig::default(), 2).unwrap();
    assert_eq!(v.evidence("value_at_zero_vanishes"), Some("true"));
    assert_eq!(v.evidence("s1"), Some("1*11 + O(11^2)"));
    assert_eq!(v.evidence("l_over_omega"), Some("1/5"));
    // the derivative matches L-invariant * L/Omega only up to sign
    assert_eq!(v.status, VerdictStatus::Fails);
    assert_eq!(v.evidence("opposite_sign_agrees"), Some("true"));
}

#[test]
fn l_invariant_is_twist_invariant() {
    let e = named_curve("11a1").unwrap();
    let a = l_invariant(&e, 11, 6).unwrap();
    for d in [-7i64, 5] {
        let t = quadratic_twist(&e, d).unwrap();
        if arith::legendre(d, 11) != 1 {
            continue;
        }
        let b = l_invariant(&t, 11, 6).unwrap();
        assert!(a.value.eq_at_precision(&b.value), "D={d}");
    }
}

#[test]
fn first_twists_of_11a1_at_5() {
    let e = named_curve("11a1").unwrap();
    let found = twist_search(&e, 5, 50, &[], 3).unwrap();
    let ds: Vec<i64> = found.iter().map(|t| t.d).collect();
    assert_eq!(ds, [-4, -11, -31]);
    assert_eq!(found[0].conductor, 176);
    assert!((found[0].l_value - 1.458816616938).abs() < 1e-9);
    assert!(found.iter().all(|t| t.same_type && !t.sha_verified));
}

#[test]
fn pair_with_first_twist() {
    let e = named_curve("11a1").unwrap();
    let t = quadratic_twist(&e, -4).unwrap();
    let cfg = MttConfig::default();
    let a = CurveContext::new(&e, 5, cfg.level).unwrap();
    let b = CurveContext::new(&t, 5, cfg.level).unwrap();
    let v = finite_level_product_check(&a, &b, 5, &cfg, 1e-5).unwrap();
    assert!(v.holds(), "{:?}", v.evidence);
    let v = conj11_verdict(&a, &b, 5, &cfg).unwrap();
    assert!(v.holds());
    assert_eq!(v.evidence("differences"), Some("0 0"));
    let v = conj21_leading_check(&a, &b, 5, &cfg).unwrap();
    assert!(v.holds(), "{:?}", v.evidence);
    let w = conj11_verdict(&b, &a, 5, &cfg).unwrap();
    assert_eq!(w.status, v.status);
}

#[test]
fn unsupported_inputs_are_errors() {
    let e = named_curve("11a1").unwrap();
    let c = CurveContext::new(&e, 2, 1).unwrap();
    assert!(mtt_measure(&c, 2, &MttConfig::default()).is_err());
    let c = context("11a1", 5, 1);
    assert!(gs_check(&c, 5, &MttConfig::default(), 2).is_err());
}
