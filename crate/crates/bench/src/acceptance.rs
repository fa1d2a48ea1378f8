//! The acceptance suite: one result per criterion, shared by `selfcheck`
//! and the `acceptance` test target.

use std::time::Instant;

use anyhow::{ensure, Context};
use iwasawa_core::curve::arith::{fundamental_discriminants, kronecker, legendre, primes_up_to};
use iwasawa_core::curve::{an_coeffs, count_trace, named_curve, quadratic_twist, ReductionType};
use iwasawa_core::dirichlet::FormalDirichletSeries;
use iwasawa_core::lvalues::{archimedean_measure_level, fourier_slice_check, gauss_sum, DirichletCharacter, LSeriesData};
use iwasawa_core::measure::*;
use iwasawa_core::mtt::modsym::hecke_defect;
use iwasawa_core::mtt::*;
use iwasawa_core::padic::{padic_log, pow_mod, PadicNumber};
use iwasawa_core::ring::{rational_to_padic, Rational};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x5eed;

#[derive(Clone, Debug)]
pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
    pub tolerance: f64,
    /// Known not to hold with the implemented normalisation.
    pub expected_failure: bool,
}

type Outcome = anyhow::Result<(bool, String)>;

fn run(id: u32, name: &'static str, tolerance: f64, expected_failure: bool, f: impl FnOnce() -> Outcome) -> Criterion {
    let t = Instant::now();
    let (pass, detail) = f().unwrap_or_else(|e| (false, format!("error: {e:#}")));
    Criterion { id, name, pass, detail, seconds: t.elapsed().as_secs_f64(), tolerance, expected_failure }
}

pub fn run_all() -> Vec<Criterion> {
    vec![
        run(1, "tau lemmas", 0.0, false, tau_lemmas),
        run(2, "convolution", 0.0, false, convolution),
        run(3, "basis change", 1e-9, false, basis_change),
        run(4, "fourier slices", 0.0, false, fourier_slices),
        run(5, "archimedean measure", 1e-6, false, archimedean),
        run(6, "mtt measure", 1e-5, false, mtt_measure_checks),
        run(7, "conj mtt", 1e-8, false, conj_mtt),
        run(8, "extra zero derivative", 0.0, true, extra_zero),
        run(9, "twist search", 1e-5, false, twists),
        run(10, "pair conjectures", 0.0, false, pairs),
        run(11, "arithmetic sweeps", 1e-10, false, sweeps),
    ]
}

const PREC: u32 = 10;

fn pad(p: u64, n: i64) -> PadicNumber {
    PadicNumber::from_i128(p, i128::from(n), PREC).expect("small prime")
}

fn agree(f: &SPowerSeries<PadicNumber>, g: &SPowerSeries<PadicNumber>) -> bool {
    f.coeffs().iter().zip(g.coeffs()).all(|(a, b)| a.eq_at_precision(b))
}

fn tau_lemmas() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut cases = 0;
    for _ in 0..60 {
        let p: u64 = if rng.gen_bool(0.5) { 5 } else { 7 };
        let n = rng.gen_range(1..=3u32);
        let d = rng.gen_range(1..=5usize);
        let size = p.pow(n) as usize;
        let coeffs = (0..size).map(|_| pad(p, rng.gen_range(-50..50))).collect();
        let t = MeasureTower::from_top(LevelElement::new(p, n, IndexKind::Gamma, coeffs)?)?;
        let f = tau(&t, d)?;
        ensure!(f.coeff(0).eq_at_precision(&t.top().augmentation()), "augmentation p={p} n={n}");
        ensure!(agree(&tau(&t.phi_push(), d)?, &f.rescale(&pad(p, p as i64 - 1))), "phi p={p} n={n} d={d}");
        ensure!(agree(&tau(&t.iota_push(), d)?, &f.rescale(&pad(p, -1))), "iota p={p} n={n} d={d}");
        ensure!(agree(&tau(&t.phi_push().iota_push(), d)?, &f.rescale(&pad(p, 1 - p as i64))), "iota phi p={p} n={n} d={d}");

        let a = pow_mod(1 + p, rng.gen_range(0..1000), p.pow(n + 3)) as i128;
        let g = tau(&dirac(p, a, n, &pad(p, 1))?, d)?;
        let l = padic_log(&PadicNumber::from_i128(p, a, PREC)?)?;
        let mut expect = pad(p, 1);
        for k in 0..d {
            ensure!(g.coeff(k).eq_at_precision(&expect), "dirac p={p} a={a} k={k}");
            expect = expect.try_mul(&l.neg())?.try_div(&pad(p, k as i64 + 1))?;
        }
        cases += 1;
    }
    Ok((true, format!("{cases} random towers, p in {{5,7}}, n <= 3, d <= 5")))
}

fn random_series(rng: &mut ChaCha8Rng, p: u64, nmax: usize) -> anyhow::Result<FormalDirichletSeries<Rational>> {
    let coeffs = (1..=nmax).map(|n| Rational::from_integer(if (n as u64).is_multiple_of(p) { 0 } else { rng.gen_range(-9..9) })).collect();
    Ok(FormalDirichletSeries::new(p, coeffs)?)
}

fn convolution() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let (p, nmax) = (5u64, 500usize);
    for case in 0..100 {
        let r = rng.gen_range(1..=3u32);
        let a = random_series(&mut rng, p, nmax)?;
        let b = random_series(&mut rng, p, nmax)?;
        let m = p.pow(r) as usize;
        let lhs = a.convolve(&b)?.to_level_measure(r, &a, |x| x.clone())?;
        let rhs = a.to_level_measure(r, &a, |x| x.clone())?.mul(&b.to_level_measure(r, &b, |x| x.clone())?)?;
        ensure!(lhs.approx_eq(&rhs, 0.0), "case {case}: measure of product");
        let mut oracle = vec![vec![Rational::from_integer(0); nmax]; m];
        for i in 1..=nmax {
            for j in 1..=nmax / i {
                oracle[(i * j) % m][i * j - 1] += a.coeff(i) * b.coeff(j);
            }
        }
        for (res, row) in oracle.iter().enumerate() {
            ensure!(lhs.coeffs()[res].coeffs() == row.as_slice(), "case {case}: residue {res} differs from brute force");
        }
    }
    Ok((true, "100 pairs, p = 5, r <= 3, Nmax = 500, exact".into()))
}

fn basis_change() -> Outcome {
    let mut worst: f64 = 0.0;
    for p in [5u64, 7] {
        for r in 1..=8usize {
            let a = 1 + p as i128 * (r as i128 + 2);
            let bp = basis_change_padic(a, p, r, PREC)?;
            let bc = basis_change_complex(r as u64 + 2, p, r)?;
            for j in 0..r {
                let mut e = vec![pad(p, 0); r];
                e[j] = pad(p, 1);
                let back = mat_vec(&bp.inverse, &mat_vec(&bp.forward, &e));
                ensure!(back.iter().zip(&e).all(|(x, y)| x.eq_at_precision(y)), "p-adic p={p} r={r} j={j}");
                let mut z = vec![Complex64::new(0.0, 0.0); r];
                z[j] = Complex64::new(1.0, 0.0);
                let back = mat_vec(&bc.inverse, &mat_vec(&bc.forward, &z));
                for (x, y) in back.iter().zip(&z) {
                    worst = worst.max((x - y).norm());
                }
            }
        }
    }
    Ok((worst < 1e-9, format!("r <= 8, p in {{5,7}}, complex round trip error {worst:.2e}")))
}

fn fourier_slices() -> Outcome {
    let e = named_curve("11a1").context("11a1")?;
    let an = an_coeffs(&e, 200);
    let c = fourier_slice_check(&an[1..], 5);
    Ok((c.max_deviation == 0 && c.vandermonde_nonzero, format!("11a1, 200 coefficients, m = 5: deviation {} vandermonde nonzero {}", c.max_deviation, c.vandermonde_nonzero)))
}

fn archimedean() -> Outcome {
    let (p, r) = (5u64, 2u32);
    let e = named_curve("11a1").context("11a1")?;
    let data = LSeriesData::new(&e, p.pow(r))?;
    let lvl = archimedean_measure_level(&data, p, r)?;
    let dagger = data.modified_l_value(p)?.value;
    let aug_err = (lvl.units.augmentation() - dagger).norm();
    let mut worst: f64 = 0.0;
    for chi in GammaCharacter::all_of_level(p, r - 1) {
        let got = lvl.pushed.eval_character(&chi)?.to_complex();
        let psi = DirichletCharacter::from_gamma(&chi)?.pow(p as i64 - 1).at_level(r)?;
        let want = data.twisted_l_value(&psi)?.value;
        worst = worst.max((got - want).norm());
    }
    Ok((aug_err < 1e-8 && worst < 1e-6, format!("11a1 at 5^2: augmentation error {aug_err:.2e}, character error {worst:.2e}")))
}

fn mtt_measure_checks() -> Outcome {
    let cfg = MttConfig::default();
    let e = named_curve("11a1").context("11a1")?;
    let c = CurveContext::new(&e, 5, cfg.level)?;
    let d = mtt_measure(&c, 5, &cfg)?;
    let deep = CurveContext::new(&e, 5, 2)?;
    let t = modular_symbol_values(&deep.data, deep.omega, 5, 3, &SymbolOptions::default())?;
    let defect = hecke_defect(&t, e.a_p(5), true);
    ensure!(defect == Rational::from_integer(0), "distribution defect {defect}");
    ensure!(d.tower.is_compatible(0.0), "tower is not compatible");
    let interp = interpolation_check(&c, &d, 1e-5)?;
    ensure!(interp.holds(), "interpolation: {:?}", interp.evidence);
    let r = c.l_over_omega(&SymbolOptions::default())?;
    ensure!(r == Rational::new(1, 5), "L/Omega = {r}");
    let expect = d.euler_factor()?.try_mul(&rational_to_padic(&r, 5, 20)?)?;
    ensure!(d.value_at_zero().try_sub(&expect)?.truncate(4).is_zero(), "value at zero {}", d.value_at_zero());

    let f = named_curve("20a1").context("20a1")?;
    let c2 = CurveContext::new(&f, 5, cfg.level)?;
    let d2 = mtt_measure(&c2, 5, &cfg)?;
    ensure!(d2.reduction == ReductionType::NonSplitMultiplicative, "20a1 at 5 is {}", d2.reduction.name());
    ensure!(d2.value_at_zero().eq_at_precision(&PadicNumber::from_rational(5, 1, 3, 6)?), "20a1 value at zero {}", d2.value_at_zero());
    let interp2 = interpolation_check(&c2, &d2, 1e-5)?;
    ensure!(interp2.holds(), "20a1 interpolation: {:?}", interp2.evidence);
    Ok((true, "11a1 at 5: defect 0, interpolation, L(0) = (1-1/alpha)^2 / 5 mod 5^4; 20a1 at 5: L(0) = 1/3".into()))
}

fn conj_mtt() -> Outcome {
    let cfg = MttConfig::default();
    let mut detail = Vec::new();
    for (label, order) in [("11a1", "0"), ("37a1", "1")] {
        let e = named_curve(label).context("curve")?;
        let v = conj_mtt_verdict(&CurveContext::new(&e, 5, cfg.level)?, 5, &cfg)?;
        ensure!(v.holds(), "{label}: {:?}", v.evidence);
        ensure!(v.evidence("order") == Some(order), "{label}: order {:?}", v.evidence("order"));
        detail.push(format!("{label} order {order}"));
    }
    Ok((true, detail.join(", ")))
}

fn extra_zero() -> Outcome {
    let e = named_curve("11a1").context("11a1")?;
    let cfg = MttConfig::default();
    let v = gs_check(&CurveContext::new(&e, 11, cfg.level)?, 11, &cfg, 2)?;
    let ev = |k| v.evidence(k).unwrap_or("?").to_string();
    Ok((v.holds(), format!("11a1 at 11: {} ; s1 {} ; L/Omega {} ; opposite sign agrees {}", v.status.name(), ev("s1"), ev("l_over_omega"), ev("opposite_sign_agrees"))))
}

fn twists() -> Outcome {
    let e = named_curve("11a1").context("11a1")?;
    let found = twist_search(&e, 5, 50, &[], 1)?;
    let first = found.first().context("no twist found")?;
    ensure!(first.d == -4, "first D = {}", first.d);
    let cfg = MttConfig::default();
    let t = quadratic_twist(&e, first.d)?;
    let v = finite_level_product_check(&CurveContext::new(&e, 5, cfg.level)?, &CurveContext::new(&t, 5, cfg.level)?, 5, &cfg, 1e-5)?;
    Ok((v.holds(), format!("first D = -4, conductor {}, product check {}", first.conductor, v.status.name())))
}

fn pairs() -> Outcome {
    let e = named_curve("11a1").context("11a1")?;
    let cfg = MttConfig::default();
    let a = CurveContext::new(&e, 5, cfg.level)?;
    let b = CurveContext::new(&quadratic_twist(&e, -4)?, 5, cfg.level)?;
    let v11 = conj11_verdict(&a, &b, 5, &cfg)?;
    let v21 = conj21_leading_check(&a, &b, 5, &cfg)?;
    Ok((v11.holds() && v21.holds(), format!("11a1 with its -4 twist at 5: {} / {}", v11.status.name(), v21.status.name())))
}

fn sweeps() -> Outcome {
    let labels = ["11a1", "14a1", "37a1", "389a1", "5077a1"];
    for label in labels {
        let e = named_curve(label).context("curve")?;
        let n = e.conductor();
        let model = e.minimal_model();
        for p in primes_up_to(999) {
            if n % p == 0 {
                continue;
            }
            let a = e.a_p(p);
            ensure!(((a * a) as u64) <= 4 * p, "{label}: Hasse fails at {p}");
            if p < 150 {
                ensure!(a == count_trace(&model, p), "{label}: trace differs at {p}");
            }
        }
        let an = an_coeffs(&e, 2000);
        for m in 2..=2000usize {
            for k in 2..=2000 / m {
                if num_integer::gcd(m, k) == 1 {
                    ensure!(an[m * k] == an[m] * an[k], "{label}: a_{m}a_{k}");
                }
            }
        }
    }
    let ds = fundamental_discriminants(&[5], &[1], 500)?;
    ensure!(ds.iter().all(|&d| legendre(d, 5) == 1), "sign filter");
    for p in primes_up_to(125).into_iter().filter(|&p| p > 2) {
        let mut r = 1;
        while p.pow(r) <= 125 {
            for chi in DirichletCharacter::all(p, r)?.into_iter().filter(|c| c.is_primitive()) {
                let g = gauss_sum(&chi)?;
                let c = chi.conductor() as f64;
                ensure!((g.norm_sqr() - c).abs() < 1e-10 * c, "gauss sum mod {}", p.pow(r));
            }
            r += 1;
        }
    }
    let e = named_curve("11a1").context("11a1")?;
    let ae = an_coeffs(&e, 200);
    for d in [-4i64, 5, -11] {
        let t = quadratic_twist(&e, d)?;
        ensure!(t.j_invariant() == e.j_invariant(), "twist by {d} changes j");
        let at = an_coeffs(&t, 200);
        for p in primes_up_to(199) {
            if t.conductor() % p != 0 && e.conductor() % p != 0 {
                ensure!(at[p as usize] == i64::from(kronecker(d, p)) * ae[p as usize], "twist {d} at {p}");
            }
        }
    }
    Ok((true, format!("{} curves: Hasse to 1000, point counts to 150, multiplicativity to 2000; discriminants, Gauss sums, twists", labels.len())))
}
