//! Elliptic curves over Q: minimal models, reduction data, Hecke
//! eigenvalues, quadratic twists and the real period.

pub mod arith;
pub mod tate;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic::{hensel_unit_root, max_precision, PadicNumber, UnitRootCase};
use crate::ring::Rational;

pub use arith::{fundamental_discriminants, legendre};
use tate::{invariants, standardize, LocalData, LocalKind, Model};

#[derive(Clone, Debug)]
pub struct CurveModel {
    label: String,
    coeffs: [Rational; 5],
    minimal: Model,
    local: Vec<LocalData>,
    conductor: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReductionType {
    GoodOrdinary,
    GoodSupersingular,
    SplitMultiplicative,
    NonSplitMultiplicative,
    Additive,
}

impl ReductionType {
    pub fn name(&self) -> &'static str {
        match self {
            ReductionType::GoodOrdinary => "good-ordinary",
            ReductionType::GoodSupersingular => "good-supersingular",
            ReductionType::SplitMultiplicative => "split-multiplicative",
            ReductionType::NonSplitMultiplicative => "nonsplit-multiplicative",
            ReductionType::Additive => "additive",
        }
    }

    pub fn is_multiplicative(&self) -> bool {
        matches!(self, ReductionType::SplitMultiplicative | ReductionType::NonSplitMultiplicative)
    }
}

#[derive(Clone, Debug)]
pub struct ReductionData {
    pub p: u64,
    pub kind: ReductionType,
    pub a_p: i64,
    pub conductor_exponent: u32,
    /// Unit root of `x^2 - a_p x + p` (good ordinary) or `a_p` (multiplicative).
    pub alpha: Option<PadicNumber>,
}

impl ReductionData {
    /// The unit root at the requested relative precision.
    pub fn unit_root(&self, prec: u32) -> Result<PadicNumber> {
        let case = match self.kind {
            ReductionType::GoodOrdinary => UnitRootCase::GoodOrdinary,
            ReductionType::GoodSupersingular => UnitRootCase::GoodSupersingular,
            ReductionType::SplitMultiplicative => UnitRootCase::SplitMultiplicative,
            ReductionType::NonSplitMultiplicative => UnitRootCase::NonSplitMultiplicative,
            ReductionType::Additive => return Err(Error::AdditiveReduction(self.p)),
        };
        hensel_unit_root(self.a_p, self.p, prec, case)
    }
}

fn integral_scaling(coeffs: &[Rational; 5]) -> Result<Model> {
    // smallest u with u^i a_i integral
    let mut u: i128 = 1;
    for c in coeffs {
        for (q, _) in arith::factor(*c.denom())? {
            let q = q as i128;
            while !scaled_integral(coeffs, u) && c.denom() % q == 0 {
                let cand = u * q;
                let ok_for_c = |u: i128, w: u32| (Rational::from_integer(u.pow(w)) * *c).is_integer();
                u = cand;
                if [1u32, 2, 3, 4, 6].iter().any(|&w| ok_for_c(u, w)) && scaled_integral(coeffs, u) {
                    break;
                }
            }
        }
    }
    if !scaled_integral(coeffs, u) {
        return Err(Error::Overflow);
    }
    let mut out = [0i128; 5];
    for (i, w) in [1u32, 2, 3, 4, 6].iter().enumerate() {
        let v = Rational::from_integer(u.checked_pow(*w).ok_or(Error::Overflow)?) * coeffs[i];
        out[i] = v.to_integer();
    }
    Ok(out)
}

fn scaled_integral(coeffs: &[Rational; 5], u: i128) -> bool {
    [1u32, 2, 3, 4, 6].iter().zip(coeffs).all(|(&w, c)| match u.checked_pow(w) {
        Some(x) => (Rational::from_integer(x) * *c).is_integer(),
        None => false,
    })
}

impl CurveModel {
    pub fn new(label: impl Into<String>, coeffs: [Rational; 5]) -> Result<Self> {
        let integral = integral_scaling(&coeffs)?;
        let inv = invariants(&integral)?;
        if inv.disc == 0 {
            return Err(Error::SingularCurve);
        }
        let mut model = integral;
        let mut local = Vec::new();
        for (p, _) in arith::factor(inv.disc)? {
            let data = tate::tate(&model, p)?;
            model = data.model;
            if data.kind != LocalKind::Good {
                local.push(data);
            }
        }
        let minimal = standardize(&model)?;
        let mut conductor: u64 = 1;
        for d in &local {
            conductor = conductor.checked_mul(d.p.pow(d.conductor_exponent)).ok_or(Error::Overflow)?;
        }
        Ok(CurveModel { label: label.into(), coeffs, minimal, local, conductor })
    }

    pub fn from_integers(label: impl Into<String>, a: [i64; 5]) -> Result<Self> {
        Self::new(label, a.map(|x| Rational::from_integer(i128::from(x))))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn coeffs(&self) -> &[Rational; 5] {
        &self.coeffs
    }

    /// Global minimal model in reduced form.
    pub fn minimal_model(&self) -> Model {
        self.minimal
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn minimal_discriminant(&self) -> i128 {
        invariants(&self.minimal).expect("checked at construction").disc
    }

    pub fn bad_primes(&self) -> Vec<u64> {
        self.local.iter().map(|d| d.p).collect()
    }

    /// `j = c4^3 / disc`.
    pub fn j_invariant(&self) -> Rational {
        let inv = invariants(&self.minimal).expect("checked at construction");
        let c4 = Rational::from_integer(inv.c4);
        c4 * c4 * c4 / Rational::from_integer(inv.disc)
    }

    /// `j` as a p-adic number.
    pub fn j_padic(&self, p: u64, prec: u32) -> Result<PadicNumber> {
        let inv = invariants(&self.minimal)?;
        let c4 = PadicNumber::from_i128(p, inv.c4, prec)?;
        c4.pow(3)?.try_div(&PadicNumber::from_i128(p, inv.disc, prec)?)
    }

    fn local_data(&self, p: u64) -> Option<&LocalData> {
        self.local.iter().find(|d| d.p == p)
    }

    /// `p + 1 - #E(F_p)` on the minimal model (singular point included).
    pub fn a_p(&self, p: u64) -> i64 {
        count_trace(&self.minimal, p)
    }

    pub fn reduce_at(&self, p: u64) -> ReductionData {
        let a_p = self.a_p(p);
        let (kind, f) = match self.local_data(p) {
            None if (a_p as i128).rem_euclid(p as i128) == 0 => (ReductionType::GoodSupersingular, 0),
            None => (ReductionType::GoodOrdinary, 0),
            Some(d) => (
                match d.kind {
                    LocalKind::Split => ReductionType::SplitMultiplicative,
                    LocalKind::NonSplit => ReductionType::NonSplitMultiplicative,
                    LocalKind::Additive => ReductionType::Additive,
                    LocalKind::Good => unreachable!("only bad primes are stored"),
                },
                d.conductor_exponent,
            ),
        };
        let mut data = ReductionData { p, kind, a_p, conductor_exponent: f, alpha: None };
        data.alpha = data.unit_root(max_precision(p).min(12)).ok();
        data
    }

    /// Split/non-split as decided by Tate's tangent test, independent of
    /// the point count.
    pub fn tangent_split(&self, p: u64) -> Option<bool> {
        self.local_data(p).and_then(|d| match d.kind {
            LocalKind::Split => Some(true),
            LocalKind::NonSplit => Some(false),
            _ => None,
        })
    }

    /// Kodaira symbol at a bad prime.
    pub fn kodaira(&self, p: u64) -> tate::Kodaira {
        self.local_data(p).map_or(tate::Kodaira::I0, |d| d.kodaira)
    }
}

/// Trace of Frobenius `p + 1 - #E(F_p)`, counting the point at infinity and
/// any singular point.
pub fn count_trace(a: &Model, p: u64) -> i64 {
    let pi = p as i128;
    if p == 2 {
        let mut affine = 0i64;
        for x in 0..2i128 {
            for y in 0..2i128 {
                let lhs = y * y + a[0] * x * y + a[2] * y;
                let rhs = x * x * x + a[1] * x * x + a[3] * x + a[4];
                if (lhs - rhs).rem_euclid(2) == 0 {
                    affine += 1;
                }
            }
        }
        return 3 - (affine + 1);
    }
    let inv = invariants(a).expect("model invariants fit in i128");
    let b2 = inv.b2.rem_euclid(pi) as u64;
    let b4 = inv.b4.rem_euclid(pi) as u64;
    let b6 = inv.b6.rem_euclid(pi) as u64;
    let mut is_square = vec![false; p as usize];
    for x in 1..p {
        is_square[(x * x % p) as usize] = true;
    }
    let mut sum: i64 = 0;
    for x in 0..p {
        // 4x^3 + b2 x^2 + 2 b4 x + b6
        let v = ((((4 * x % p + b2) % p * x % p + 2 * b4 % p) % p) * x % p + b6) % p;
        if v != 0 {
            sum += if is_square[v as usize] { 1 } else { -1 };
        }
    }
    -sum
}

/// `a_n` for `0 <= n <= nmax` (`a_0 = 0`) from the prime traces through the
/// Hecke recursions.
pub fn an_coeffs(e: &CurveModel, nmax: usize) -> Vec<i64> {
    let mut a = vec![0i64; nmax + 1];
    if nmax == 0 {
        return a;
    }
    a[1] = 1;
    let spf = arith::smallest_prime_factors(nmax);
    let n_cond = e.conductor();
    for n in 2..=nmax {
        let p = spf[n] as usize;
        let mut m = n;
        let mut k = 0;
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        if m > 1 {
            a[n] = a[m] * a[n / m];
            continue;
        }
        // n = p^k
        if k == 1 {
            a[n] = e.a_p(p as u64);
        } else if n_cond.is_multiple_of(p as u64) {
            a[n] = a[p] * a[n / p];
        } else {
            a[n] = a[p] * a[n / p] - p as i64 * a[n / p / p];
        }
    }
    a
}

/// `y^2 = x^3 - 27 c4 D^2 x - 54 c6 D^3`, minimized.
pub fn quadratic_twist(e: &CurveModel, d: i64) -> Result<CurveModel> {
    if d == 0 {
        return Err(Error::ZeroD);
    }
    let inv = invariants(&e.minimal_model())?;
    let d = d as i128;
    let d2 = d.checked_mul(d).ok_or(Error::Overflow)?;
    let d3 = d2.checked_mul(d).ok_or(Error::Overflow)?;
    let a4 = (-27i128).checked_mul(inv.c4).and_then(|x| x.checked_mul(d2)).ok_or(Error::Overflow)?;
    let a6 = (-54i128).checked_mul(inv.c6).and_then(|x| x.checked_mul(d3)).ok_or(Error::Overflow)?;
    let label = alloc::format!("{}^({})", e.label(), d);
    CurveModel::new(label, [Rational::zero(), Rational::zero(), Rational::zero(), Rational::from_integer(a4), Rational::from_integer(a6)])
}

/// Same ordinary or same multiplicative reduction type at `p`.
pub fn same_type(e: &CurveModel, f: &CurveModel, p: u64) -> Result<bool> {
    let (a, b) = (e.reduce_at(p), f.reduce_at(p));
    for r in [&a, &b] {
        if matches!(r.kind, ReductionType::GoodSupersingular | ReductionType::Additive) {
            return Err(Error::NotOrdinary(p));
        }
    }
    Ok(match (a.kind, b.kind) {
        (ReductionType::GoodOrdinary, ReductionType::GoodOrdinary) => a.a_p == b.a_p,
        (x, y) => x == y,
    })
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if libm::fabs(a - b) <= 1e-16 * libm::fabs(a) {
            break;
        }
        (a, b) = ((a + b) / 2.0, libm::sqrt(a * b));
    }
    a
}

/// Real roots of the monic cubic `x^3 + a x^2 + b x + c`, descending, and
/// one complex root when only one is real.
fn cubic_roots(a: f64, b: f64, c: f64) -> (Vec<f64>, Option<(f64, f64)>) {
    use core::f64::consts::PI;
    let q = (a * a - 3.0 * b) / 9.0;
    let r = (2.0 * a * a * a - 9.0 * a * b + 27.0 * c) / 54.0;
    let polish = |mut x: f64| {
        for _ in 0..4 {
            let f = ((x + a) * x + b) * x + c;
            let df = (3.0 * x + 2.0 * a) * x + b;
            if df == 0.0 {
                break;
            }
            x -= f / df;
        }
        x
    };
    if r * r < q * q * q {
        let th = libm::acos(r / libm::sqrt(q * q * q));
        let s = -2.0 * libm::sqrt(q);
        let mut v = vec![
            polish(s * libm::cos(th / 3.0) - a / 3.0),
            polish(s * libm::cos((th + 2.0 * PI) / 3.0) - a / 3.0),
            polish(s * libm::cos((th - 2.0 * PI) / 3.0) - a / 3.0),
        ];
        v.sort_by(|x, y| y.partial_cmp(x).expect("finite roots"));
        (v, None)
    } else {
        let big_a = -libm::copysign(1.0, r) * libm::cbrt(libm::fabs(r) + libm::sqrt(r * r - q * q * q));
        let big_b = if big_a == 0.0 { 0.0 } else { q / big_a };
        let e1 = polish(big_a + big_b - a / 3.0);
        // remaining quadratic x^2 + (a + e1) x + (b + e1 (a + e1))
        let p1 = a + e1;
        let q1 = b + e1 * p1;
        let re = -p1 / 2.0;
        let im = libm::sqrt(libm::fabs(q1 - re * re));
        (vec![e1], Some((re, im)))
    }
}

/// Least positive real period of the invariant differential on the minimal
/// model, and the number of real components.
pub fn least_real_period(e: &CurveModel) -> (f64, u32) {
    use core::f64::consts::PI;
    let inv = invariants(&e.minimal_model()).expect("checked at construction");
    let (a, b, c) = (inv.b2 as f64 / 4.0, inv.b4 as f64 / 2.0, inv.b6 as f64 / 4.0);
    let (real, cx) = cubic_roots(a, b, c);
    if inv.disc > 0 {
        let (e1, e2, e3) = (real[0], real[1], real[2]);
        (PI / agm(libm::sqrt(e1 - e3), libm::sqrt(e1 - e2)), 2)
    } else {
        let e1 = real[0];
        let (re, im) = cx.expect("complex pair");
        let r = libm::sqrt((e1 - re) * (e1 - re) + im * im);
        let c = e1 - re;
        (PI / agm(libm::sqrt(r), libm::sqrt((r + c) / 2.0)), 1)
    }
}

/// `Omega_E`: the least real period times the number of real components.
pub fn real_period(e: &CurveModel) -> f64 {
    let (w, comps) = least_real_period(e);
    w * comps as f64
}

/// Labelled test curves with their minimal models.
pub fn named_curve(label: &str) -> Option<CurveModel> {
    let a: [i64; 5] = match label {
        "11a1" => [0, -1, 1, -10, -20],
        "14a1" => [1, 0, 1, 4, -6],
        "15a1" => [1, 1, 1, -10, -10],
        "20a1" => [0, 1, 0, 4, 4],
        "24a1" => [0, -1, 0, -4, 4],
        "27a1" => [0, 0, 1, 0, -7],
        "32a1" => [0, 0, 0, 4, 0],
        "36a1" => [0, 0, 0, 0, 1],
        "37a1" => [0, 0, 1, -1, 0],
        "64a1" => [0, 0, 0, -4, 0],
        "389a1" => [0, 1, 1, -2, 0],
        "5077a1" => [0, 0, 1, -7, 6],
        _ => return None,
    };
    CurveModel::from_integers(label, a).ok()
}

/// `gcd` helper re-exported for callers assembling conductors.
pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

impl PartialEq for CurveModel {
    fn eq(&self, other: &Self) -> bool {
        self.minimal == other.minimal
    }
}

#[allow(dead_code)]
fn is_one(r: &Rational) -> bool {
    r.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conductors_of_named_curves() {
        for (l, n) in [
            ("11a1", 11u64),
            ("14a1", 14),
            ("15a1", 15),
            ("20a1", 20),
            ("24a1", 24),
            ("27a1", 27),
            ("32a1", 32),
            ("36a1", 36),
            ("37a1", 37),
            ("64a1", 64),
            ("389a1", 389),
            ("5077a1", 5077),
        ] {
            assert_eq!(named_curve(l).unwrap().conductor(), n, "{l}");
        }
        let e = CurveModel::from_integers("x3m2", [0, 0, 0, 0, -2]).unwrap();
        assert_eq!(e.conductor(), 1728);
        let e = CurveModel::from_integers("x3p5", [0, 0, 0, 0, 5]).unwrap();
        assert_eq!(e.conductor(), 2700);
    }

    #[test]
    fn reduction_examples() {
        let e = named_curve("11a1").unwrap();
        let r = e.reduce_at(11);
        assert_eq!((r.kind, r.conductor_exponent, r.a_p), (ReductionType::SplitMultiplicative, 1, 1));
        let r = e.reduce_at(5);
        assert_eq!((r.kind, r.a_p), (ReductionType::GoodOrdinary, 1));
        let f = CurveModel::from_integers("x3p5", [0, 0, 0, 0, 5]).unwrap();
        let r = f.reduce_at(5);
        assert_eq!((r.kind, r.a_p), (ReductionType::Additive, 0));
    }

    #[test]
    fn hecke_recursion_values() {
        let e = named_curve("11a1").unwrap();
        let a = an_coeffs(&e, 100);
        assert_eq!(a[1], 1);
        assert_eq!(a[25], -4);
        assert_eq!(a[15], a[3] * a[5]);
        assert_eq!(&a[1..12], &[1, -2, -1, 2, 1, 2, -2, 0, -2, -2, 1]);
    }

    #[test]
    fn twist_by_minus_four() {
        let e = named_curve("11a1").unwrap();
        let t = quadratic_twist(&e, -4).unwrap();
        assert_eq!(t.minimal_model(), [0, 1, 0, -165, 1427]);
        assert_eq!(t.conductor(), 176);
        assert_eq!(t.j_invariant(), e.j_invariant());
        assert_eq!(quadratic_twist(&e, 29).unwrap().conductor(), 9251);
        assert_eq!(quadratic_twist(&e, 1).unwrap().minimal_model(), e.minimal_model());
    }

    #[test]
    fn periods_match_reference() {
        let (w, _) = least_real_period(&named_curve("11a1").unwrap());
        assert!((w - 1.26920930427955).abs() < 1e-12);
        let e = named_curve("37a1").unwrap();
        assert!((real_period(&e) - 2.0 * 2.99345864623196).abs() < 1e-11);
        let (w, _) = least_real_period(&named_curve("14a1").unwrap());
        assert!((w - 1.98134195606688).abs() < 1e-12);
    }
}
