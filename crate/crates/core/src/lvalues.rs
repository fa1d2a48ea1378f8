//! Complex L-values of elliptic curves and their Dirichlet twists, Gauss
//! sums, and the finite-level archimedean measure.
//!
//! Series are summed in `f64` with Neumaier compensation; every value
//! carries an explicit tail bound.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::curve::{an_coeffs, CurveModel, ReductionType};
use crate::cyclotomic::{euler_phi, Cyclotomic};
use crate::error::{Error, Result};
use crate::measure::{teichmuller_bracket, GammaCharacter, GammaIndex, IndexKind, LevelElement};
use crate::padic::{mul_mod, pow_checked, pow_mod};
use crate::ring::Rational;

/// Compensated (Neumaier) summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// A complex value with a bound on its absolute error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexLValue {
    pub value: Complex64,
    pub error_bound: f64,
    pub terms: usize,
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if libm::fabs(dx) < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Composite Gauss-Legendre quadrature of `f` over `[a, b]`.
fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, rule: &[(f64, f64)]) -> f64 {
    let h = (b - a) / panels as f64;
    let mut acc = CompensatedSum::default();
    for k in 0..panels {
        let lo = a + k as f64 * h;
        for &(x, w) in rule {
            acc.add(w * h / 2.0 * f(lo + h * (x + 1.0) / 2.0));
        }
    }
    acc.value()
}

fn factorial(r: u32) -> f64 {
    (1..=r).map(f64::from).product()
}

/// `G_r(x) = 1/(r-1)! int_0^inf exp(-x e^u) u^(r-1) du` for `r >= 1`, and
/// `G_0(x) = exp(-x)`.
pub fn weight_g(r: u32, x: f64, rule: &[(f64, f64)]) -> f64 {
    if r == 0 {
        return libm::exp(-x);
    }
    let upper = libm::log(1.0 + 60.0 / x).max(1.0);
    let f = |u: f64| libm::exp(-x * libm::exp(u)) * libm::pow(u, f64::from(r - 1));
    integrate(f, 0.0, upper, 48, rule) / factorial(r - 1)
}

/// A Dirichlet character of `(Z/p^r)^x`, `p` odd, with values
/// `exp(2 pi i j(n) / phi(p^r))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletCharacter {
    p: u64,
    r: u32,
    phi: u64,
    /// Exponent at `n` for each residue, `None` at non-units.
    exps: Vec<Option<u64>>,
    /// `chi(g) = exp(2 pi i k / phi)` for the generator `g`.
    k: u64,
}

/// Least primitive root modulo `p^r` (odd `p`).
pub fn primitive_root(p: u64, r: u32) -> u64 {
    let phi_p = p - 1;
    let mut factors = Vec::new();
    let mut m = phi_p;
    let mut q = 2;
    while q * q <= m {
        if m.is_multiple_of(q) {
            factors.push(q);
            while m.is_multiple_of(q) {
                m /= q;
            }
        }
        q += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    for g in 2..p {
        if factors.iter().all(|&q| pow_mod(g, phi_p / q, p) != 1) {
            if r >= 2 && pow_mod(g, phi_p, p * p) == 1 {
                return g + p;
            }
            return g;
        }
    }
    1
}

impl DirichletCharacter {
    /// The character with `chi(g) = exp(2 pi i k / phi(p^r))`, `g` the least
    /// primitive root.
    pub fn from_generator(p: u64, r: u32, k: u64) -> Result<Self> {
        if p == 2 || r == 0 {
            return Err(Error::InvalidInput("odd prime power modulus required".into()));
        }
        let m = pow_checked(p, r)?;
        let phi = euler_phi(m);
        let g = primitive_root(p, r);
        let k = k % phi;
        let mut exps = vec![None; m as usize];
        let mut x = 1 % m;
        for i in 0..phi {
            exps[x as usize] = Some(mul_mod(i, k, phi));
            x = mul_mod(x, g, m);
        }
        Ok(DirichletCharacter { p, r, phi, exps, k })
    }

    pub fn trivial(p: u64, r: u32) -> Result<Self> {
        Self::from_generator(p, r, 0)
    }

    /// `n -> chi(<n>)` for a character of `Gamma`, as a character modulo
    /// `p^(k+1)` (modulo `p` when trivial).
    pub fn from_gamma(chi: &GammaCharacter) -> Result<Self> {
        let c = chi.reduced();
        let r = c.k + 1;
        let p = c.p;
        let m = pow_checked(p, r)?;
        let phi = euler_phi(m);
        let index = GammaIndex::new(p, c.k)?;
        let order = pow_checked(p, c.k)?;
        let mut exps = vec![None; m as usize];
        for n in 1..m {
            if n % p == 0 {
                continue;
            }
            let coord = index.coordinate(teichmuller_bracket(n, p, r, m))?;
            // zeta_(p^k)^(e c) = exp(2 pi i (p-1) e c / phi)
            exps[n as usize] = Some(mul_mod(mul_mod(c.e % order, coord, order), p - 1, phi));
        }
        let g = primitive_root(p, r);
        let k = exps[g as usize].expect("generator is a unit");
        Ok(DirichletCharacter { p, r, phi, exps, k })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn modulus(&self) -> u64 {
        self.exps.len() as u64
    }

    pub fn exponent(&self, n: i64) -> Option<u64> {
        self.exps[n.rem_euclid(self.modulus() as i64) as usize]
    }

    pub fn value(&self, n: i64) -> Complex64 {
        match self.exponent(n) {
            None => Complex64::new(0.0, 0.0),
            Some(j) => Complex64::from_polar(1.0, 2.0 * PI * j as f64 / self.phi as f64),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.k == 0
    }

    pub fn is_even(&self) -> bool {
        self.exponent(-1) == Some(0)
    }

    /// Exponent of `p` in the conductor (0 for the trivial character).
    pub fn conductor_exponent(&self) -> u32 {
        if self.k == 0 {
            return 0;
        }
        let mut v = 0;
        let mut k = self.k;
        while k.is_multiple_of(self.p) && v < self.r - 1 {
            k /= self.p;
            v += 1;
        }
        self.r - v
    }

    pub fn conductor(&self) -> u64 {
        self.p.pow(self.conductor_exponent())
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor_exponent() == self.r
    }

    /// The same character viewed modulo `p^r`, for `r` at least the
    /// conductor exponent.
    pub fn at_level(&self, r: u32) -> Result<Self> {
        if r == 0 || r < self.conductor_exponent() {
            return Err(Error::LevelMismatch(r, self.conductor_exponent()));
        }
        if r == self.r {
            return Ok(self.clone());
        }
        let m = pow_checked(self.p, r)?;
        let phi = euler_phi(m);
        let own = self.modulus();
        let mut exps = vec![None; m as usize];
        for (n, slot) in exps.iter_mut().enumerate() {
            if (n as u64).is_multiple_of(self.p) {
                continue;
            }
            let j = self.exps[(n as u64 % own) as usize].expect("unit");
            // j / phi_own = j' / phi
            *slot = Some(if phi >= self.phi { j * (phi / self.phi) } else { j / (self.phi / phi) });
        }
        let g = primitive_root(self.p, r);
        let k = exps[g as usize].expect("generator is a unit");
        Ok(DirichletCharacter { p: self.p, r, phi, exps, k })
    }

    /// The primitive character inducing this one.
    pub fn primitive(&self) -> Result<Self> {
        match self.conductor_exponent() {
            0 => Ok(self.clone()),
            c => self.at_level(c),
        }
    }

    pub fn conj(&self) -> Self {
        let exps = self.exps.iter().map(|e| e.map(|j| (self.phi - j) % self.phi)).collect();
        DirichletCharacter { exps, k: (self.phi - self.k) % self.phi, ..self.clone() }
    }

    pub fn pow(&self, j: i64) -> Self {
        let jj = j.rem_euclid(self.phi as i64) as u64;
        let exps = self.exps.iter().map(|e| e.map(|x| mul_mod(x, jj, self.phi))).collect();
        DirichletCharacter { exps, k: mul_mod(self.k, jj, self.phi), ..self.clone() }
    }

    /// Every character modulo `p^r`, indexed by the generator exponent.
    pub fn all(p: u64, r: u32) -> Result<Vec<Self>> {
        let phi = euler_phi(pow_checked(p, r)?);
        (0..phi).map(|k| Self::from_generator(p, r, k)).collect()
    }
}

/// `W(chi) = sum_a chi(a) exp(2 pi i a / p^k)` for a primitive character.
pub fn gauss_sum(chi: &DirichletCharacter) -> Result<Complex64> {
    if chi.is_trivial() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if !chi.is_primitive() {
        return Err(Error::Imprimitive);
    }
    let m = chi.modulus();
    let mut acc = ComplexSum::default();
    for a in 1..m {
        if a % chi.p != 0 {
            acc.add(chi.value(a as i64) * Complex64::from_polar(1.0, 2.0 * PI * a as f64 / m as f64));
        }
    }
    Ok(acc.value())
}

/// Exact Gauss sum of `n -> chi(<n>)` in `Q(zeta_(p^(k+1)))`.
pub fn gauss_sum_exact(chi: &GammaCharacter) -> Result<Cyclotomic<Rational>> {
    let c = chi.reduced();
    let one = Rational::from_integer(1);
    if c.k == 0 {
        return Ok(Cyclotomic::from_scalar(1, one));
    }
    let p = c.p;
    let m = pow_checked(p, c.k + 1)?;
    let order = pow_checked(p, c.k)?;
    let index = GammaIndex::new(p, c.k)?;
    let mut terms = Vec::new();
    for a in 1..m {
        if a % p == 0 {
            continue;
        }
        let coord = index.coordinate(teichmuller_bracket(a, p, c.k + 1, m))?;
        // zeta_(p^k) = zeta_(p^(k+1))^p
        let e = (mul_mod(c.e % order, coord, order) * p + a) % m;
        terms.push((e, one));
    }
    Ok(Cyclotomic::from_exponents(m, &terms, &one))
}

/// Conductor, `a_n` table and root number of an elliptic curve.
#[derive(Clone, Debug)]
pub struct LSeriesData {
    conductor: u64,
    an: Vec<i64>,
    root_number: i8,
    ap_bad: Vec<(u64, i64)>,
}

/// Terms needed so that `exp(-2 pi n / (t m sqrt N))` drops below `1e-18`
/// for `t <= 1.3`.
pub fn terms_needed(conductor: u64, modulus: u64) -> usize {
    (42.0 * 1.3 * modulus as f64 * libm::sqrt(conductor as f64) / (2.0 * PI)) as usize + 20
}

impl LSeriesData {
    /// Data sufficient for twists of modulus up to `max_modulus`.
    pub fn new(e: &CurveModel, max_modulus: u64) -> Result<Self> {
        let nmax = terms_needed(e.conductor(), max_modulus);
        Self::from_table(e.conductor(), an_coeffs(e, nmax))
    }

    /// Data with at least `nmax` coefficients.
    pub fn with_nmax(e: &CurveModel, nmax: usize) -> Result<Self> {
        Self::from_table(e.conductor(), an_coeffs(e, nmax.max(terms_needed(e.conductor(), 1))))
    }

    /// From a precomputed table `an[0..=nmax]` (`an[0]` ignored).
    pub fn from_table(conductor: u64, an: Vec<i64>) -> Result<Self> {
        let ap_bad = crate::curve::arith::factor(i128::from(conductor))?
            .into_iter()
            .map(|(q, _)| (q, an.get(q as usize).copied().unwrap_or(0)))
            .collect();
        let mut d = LSeriesData { conductor, an, root_number: 1, ap_bad };
        d.root_number = d.compute_root_number()?;
        Ok(d)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn root_number(&self) -> i8 {
        self.root_number
    }

    pub fn an(&self) -> &[i64] {
        &self.an
    }

    pub fn nmax(&self) -> usize {
        self.an.len() - 1
    }

    /// `sum a_n/n (exp(-2 pi n t / sqrt N) + w exp(-2 pi n / (t sqrt N)))`.
    fn central_sum(&self, t: f64, w: f64) -> f64 {
        let c = 2.0 * PI / libm::sqrt(self.conductor as f64);
        let mut acc = CompensatedSum::default();
        let n_stop = self.nmax().min(terms_needed(self.conductor, 1));
        for n in 1..=n_stop {
            let a = self.an[n];
            if a == 0 {
                continue;
            }
            let x = c * n as f64;
            acc.add(a as f64 / n as f64 * (libm::exp(-x * t) + w * libm::exp(-x / t)));
        }
        acc.value()
    }

    fn compute_root_number(&self) -> Result<i8> {
        if self.nmax() < terms_needed(self.conductor, 1) {
            return Err(Error::InvalidInput("a_n table too short for the conductor".into()));
        }
        let spread = |w: f64| {
            let base = self.central_sum(1.0, w);
            [1.1, 1.3].iter().map(|&t| libm::fabs(self.central_sum(t, w) - base)).fold(0.0, f64::max)
        };
        let (dp, dm) = (spread(1.0), spread(-1.0));
        let best = if dp <= dm { (1, dp) } else { (-1, dm) };
        if best.1 > 1e-8 {
            return Err(Error::Inconsistent(alloc::format!("t-spread {:e} for both signs", best.1)));
        }
        Ok(best.0)
    }

    /// `L^(r)(E, 1)` for `r <= 3`.
    pub fn l_value(&self, r: u32) -> Result<ComplexLValue> {
        if r > 3 {
            return Err(Error::RankCapExceeded);
        }
        let parity = if r.is_multiple_of(2) { 1 } else { -1 };
        if self.root_number != parity {
            return Ok(ComplexLValue { value: Complex64::new(0.0, 0.0), error_bound: 0.0, terms: 0 });
        }
        let c = 2.0 * PI / libm::sqrt(self.conductor as f64);
        let rule = gauss_legendre(20);
        let n_stop = self.nmax().min(terms_needed(self.conductor, 1));
        let mut acc = CompensatedSum::default();
        for n in 1..=n_stop {
            let a = self.an[n];
            if a != 0 {
                acc.add(a as f64 / n as f64 * weight_g(r, c * n as f64, &rule));
            }
        }
        let scale = 2.0 * factorial(r);
        // G_r(x) <= exp(-x)/x beyond the cutoff and |a_n| <= n
        let x = c * (n_stop + 1) as f64;
        let tail = scale * libm::exp(-x) / (x * (1.0 - libm::exp(-c)));
        Ok(ComplexLValue { value: Complex64::new(scale * acc.value(), 0.0), error_bound: tail + 1e-14 * libm::fabs(scale * acc.value()), terms: n_stop })
    }

    /// Smallest `r` with `|L^(r)(E,1)| > tol`.
    pub fn analytic_rank(&self, tol: f64) -> Result<u32> {
        for r in 0..=3 {
            if self.l_value(r)?.value.norm() > tol {
                return Ok(r);
            }
        }
        Err(Error::RankCapExceeded)
    }

    /// `L(E, s)` for real `s`, through the completed function
    /// `Lambda(s) = (sqrt N / 2 pi)^s Gamma(s) L(E, s)`.
    pub fn l_at_real(&self, s: f64) -> f64 {
        let a = libm::sqrt(self.conductor as f64) / (2.0 * PI);
        let rule = gauss_legendre(20);
        // Gamma(s, x) = x^s int_0^inf exp(s v - x e^v) dv
        let inc_gamma = |s: f64, x: f64| {
            let upper = libm::log(1.0 + 60.0 / x).max(1.0) + 2.0;
            libm::pow(x, s) * integrate(|v| libm::exp(s * v - x * libm::exp(v)), 0.0, upper, 48, &rule)
        };
        let n_stop = self.nmax().min(terms_needed(self.conductor, 1));
        let w = f64::from(self.root_number);
        let mut acc = CompensatedSum::default();
        for n in 1..=n_stop {
            let an = self.an[n];
            if an == 0 {
                continue;
            }
            let x = n as f64 / a;
            let nf = n as f64;
            acc.add(an as f64 * (inc_gamma(s, x) / libm::pow(nf, s) * libm::pow(a, s) + w * inc_gamma(2.0 - s, x) / libm::pow(nf, 2.0 - s) * libm::pow(a, 2.0 - s)));
        }
        acc.value() / (libm::pow(a, s) * libm::tgamma(s))
    }

    /// `L(E, chi, 1)` for a character modulo `p^r` with `p` prime to `N`.
    ///
    /// The trivial character gives the value with the Euler factor at `p`
    /// removed; an imprimitive one gives the value of its primitive version.
    pub fn twisted_l_value(&self, chi: &DirichletCharacter) -> Result<ComplexLValue> {
        if self.conductor.is_multiple_of(chi.prime()) {
            return Err(Error::BadConductor);
        }
        if chi.is_trivial() {
            return self.modified_l_value(chi.prime());
        }
        let chi = chi.primitive()?;
        let m = chi.modulus();
        if self.nmax() < terms_needed(self.conductor, m) {
            return Err(Error::InvalidInput("a_n table too short for this modulus".into()));
        }
        let a = self.twisted_sum(&chi, 1.0)?;
        let b = self.twisted_sum(&chi, 1.2)?;
        Ok(ComplexLValue { value: a.0, error_bound: (a.0 - b.0).norm() + a.1, terms: a.2 })
    }

    fn twisted_sum(&self, chi: &DirichletCharacter, t: f64) -> Result<(Complex64, f64, usize)> {
        let m = chi.modulus();
        let tau = gauss_sum(chi)?;
        let w = f64::from(self.root_number) * chi.value(self.conductor as i64) * tau * tau / m as f64;
        let c = 2.0 * PI / (m as f64 * libm::sqrt(self.conductor as f64));
        let n_stop = self.nmax().min(terms_needed(self.conductor, m));
        let mut acc = ComplexSum::default();
        for n in 1..=n_stop {
            let an = self.an[n];
            if an == 0 || (n as u64).is_multiple_of(chi.prime()) {
                continue;
            }
            let x = c * n as f64;
            let v = chi.value(n as i64);
            let term = v * libm::exp(-x * t) + w * v.conj() * libm::exp(-x / t);
            acc.add(term * (an as f64 / n as f64));
        }
        let x = c * (n_stop + 1) as f64 / 1.3;
        let tail = 2.0 * libm::exp(-x) / (1.0 - libm::exp(-c / 1.3));
        Ok((acc.value(), tail, n_stop))
    }

    /// `L(E,1)` times the Euler factor at `p`: `1 - a_p/p + 1/p` at good
    /// primes, `1 - a_p/p` at multiplicative ones.
    pub fn modified_l_value(&self, p: u64) -> Result<ComplexLValue> {
        let l = self.l_value(0)?;
        let f = self.euler_factor_at_one(p)?;
        Ok(ComplexLValue { value: l.value * f, error_bound: l.error_bound * libm::fabs(f), terms: l.terms })
    }

    /// `1 - a_p/p + eps/p` with `eps = 1` at good and `0` at multiplicative
    /// primes.
    pub fn euler_factor_at_one(&self, p: u64) -> Result<f64> {
        let pf = p as f64;
        if let Some(&(_, ap)) = self.ap_bad.iter().find(|(q, _)| *q == p) {
            if ap == 0 {
                return Err(Error::AdditiveReduction(p));
            }
            return Ok(1.0 - ap as f64 / pf);
        }
        let ap = *self.an.get(p as usize).ok_or(Error::InvalidInput("a_p beyond the table".into()))?;
        Ok(1.0 - ap as f64 / pf + 1.0 / pf)
    }
}

/// `sum a_n chi(n)/n exp(-n/X)` over `n < 40 X`: an independent check of
/// twisted values that uses no functional equation.
pub fn smoothed_twisted_sum(an: &[i64], chi: &DirichletCharacter, x: f64) -> Complex64 {
    let stop = ((40.0 * x) as usize).min(an.len() - 1);
    let mut acc = ComplexSum::default();
    for n in 1..=stop {
        if an[n] != 0 {
            acc.add(chi.value(n as i64) * (an[n] as f64 / n as f64 * libm::exp(-(n as f64) / x)));
        }
    }
    acc.value()
}

/// `L(E, chi, 1)` for a nontrivial character whose twist has conductor
/// `twist_conductor`, with the root number unknown: it is solved from the
/// functional-equation sums at two values of `t` and checked at a third.
/// Valid also when `p | N`.
pub fn twisted_l_value_free_sign(an: &[i64], chi: &DirichletCharacter, twist_conductor: u64) -> Result<(ComplexLValue, Complex64)> {
    let sq = libm::sqrt(twist_conductor as f64);
    let stop = (42.0 * 1.5 * sq / (2.0 * PI)) as usize + 20;
    if an.len() <= stop {
        return Err(Error::InvalidInput("a_n table too short for the twist".into()));
    }
    let sums = |t: f64| {
        let (mut a, mut b) = (ComplexSum::default(), ComplexSum::default());
        let c = 2.0 * PI / sq;
        for (n, &x) in an.iter().enumerate().take(stop + 1).skip(1) {
            if x == 0 {
                continue;
            }
            let v = chi.value(n as i64) * (x as f64 / n as f64);
            a.add(v * libm::exp(-c * n as f64 * t));
            b.add(v.conj() * libm::exp(-c * n as f64 / t));
        }
        (a.value(), b.value())
    };
    let (a1, b1) = sums(1.0);
    let (a2, b2) = sums(1.25);
    let eps = (a1 - a2) / (b2 - b1);
    let (a3, b3) = sums(1.5);
    let value = a1 + eps * b1;
    let check = a3 + eps * b3;
    let drift = libm::fabs(eps.norm() - 1.0);
    Ok((ComplexLValue { value, error_bound: (value - check).norm() + drift + 1e-13, terms: stop }, eps))
}

/// `sum_(n = a mod p^r) a_n/n exp(-n/X)` over `n < 40 X`.
pub fn smoothed_partial_sum(an: &[i64], p: u64, r: u32, a: u64, x: f64) -> f64 {
    let m = p.pow(r) as usize;
    let stop = ((40.0 * x) as usize).min(an.len() - 1);
    let mut acc = CompensatedSum::default();
    let mut n = (a as usize) % m;
    if n == 0 {
        n = m;
    }
    while n <= stop {
        acc.add(an[n] as f64 / n as f64 * libm::exp(-(n as f64) / x));
        n += m;
    }
    acc.value()
}

/// `L(E, 1)` with the Euler factor at `p` removed.
pub fn modified_l(e: &CurveModel, data: &LSeriesData, p: u64) -> Result<ComplexLValue> {
    if e.reduce_at(p).kind == ReductionType::Additive {
        return Err(Error::AdditiveReduction(p));
    }
    data.modified_l_value(p)
}

/// Level-`r` archimedean measure on `(Z/p^r)^x` and its pushforward along
/// `x -> x^(p-1)` to `Gamma_(r-1)`.
#[derive(Clone, Debug)]
pub struct ArchimedeanLevel {
    pub units: LevelElement<Complex64>,
    pub pushed: LevelElement<Complex64>,
    pub max_error: f64,
}

/// Coefficient at `a` is `(1/phi(p^r)) sum_chi conj(chi(a)) L(E, chi, 1)`.
pub fn archimedean_measure_level(data: &LSeriesData, p: u64, r: u32) -> Result<ArchimedeanLevel> {
    if r == 0 {
        return Err(Error::InvalidInput("level must be at least 1".into()));
    }
    let chars = DirichletCharacter::all(p, r)?;
    let mut values = Vec::with_capacity(chars.len());
    let mut max_error: f64 = 0.0;
    for chi in &chars {
        let l = data.twisted_l_value(chi)?;
        max_error = max_error.max(l.error_bound);
        values.push(l.value);
    }
    let m = pow_checked(p, r)?;
    let phi = chars.len() as f64;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); m as usize];
    for (a, slot) in coeffs.iter_mut().enumerate() {
        if (a as u64).is_multiple_of(p) {
            continue;
        }
        let mut acc = ComplexSum::default();
        for (chi, l) in chars.iter().zip(&values) {
            acc.add(chi.value(a as i64).conj() * l);
        }
        *slot = acc.value() / phi;
    }
    let units = LevelElement::new(p, r, IndexKind::Units, coeffs)?;
    let pushed = units.phi_to_gamma()?;
    Ok(ArchimedeanLevel { units, pushed, max_error })
}

/// Outcome of comparing the shifted series `phi_m^a` against the sliced
/// series `f_m^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceCheck {
    pub max_deviation: i128,
    pub vandermonde_nonzero: bool,
}

/// Checks `phi_m^a = sum_k zeta_m^(a k) f_m^k` coefficientwise in exact
/// cyclotomic arithmetic, where `phi_m^a = sum_n a_n zeta_m^(a n) q^n` and
/// `f_m^k = sum_(n = k mod m) a_n q^n`.
pub fn fourier_slice_check(coeffs: &[i64], m: u64) -> SliceCheck {
    let one = Rational::from_integer(1);
    let mut worst: i128 = 0;
    for a in 0..m {
        for (i, &c) in coeffs.iter().enumerate() {
            let n = i as u64 + 1;
            let lhs = Cyclotomic::from_exponents(m, &[(mul_mod(a, n % m, m), Rational::from_integer(i128::from(c)))], &one);
            // only the slice with k = n mod m carries q^n
            let k = n % m;
            let rhs = Cyclotomic::from_exponents(m, &[(mul_mod(a, k, m), Rational::from_integer(i128::from(c)))], &one);
            let d = lhs.sub(&rhs);
            for x in d.coeffs() {
                worst = worst.max(x.numer().abs());
            }
        }
    }
    SliceCheck { max_deviation: worst, vandermonde_nonzero: vandermonde_nonzero(m) }
}

/// `prod_(i<j) (zeta^j - zeta^i) != 0` for the powers of a primitive
/// `m`-th root of unity, in exact arithmetic.
pub fn vandermonde_nonzero(m: u64) -> bool {
    let one = Rational::from_integer(1);
    let z = Cyclotomic::zeta(m, &one);
    let mut prod = Cyclotomic::from_scalar(m, one);
    for i in 0..m {
        for j in i + 1..m {
            prod = prod.mul(&z.pow(j).sub(&z.pow(i)));
        }
    }
    !prod.is_negligible(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::named_curve;

    #[test]
    fn root_numbers() {
        let d = LSeriesData::new(&named_curve("11a1").unwrap(), 1).unwrap();
        assert_eq!(d.root_number(), 1);
        let d = LSeriesData::new(&named_curve("37a1").unwrap(), 1).unwrap();
        assert_eq!(d.root_number(), -1);
        assert_eq!(d.l_value(0).unwrap().value.norm(), 0.0);
    }

    #[test]
    fn central_values_match_reference() {
        let d = LSeriesData::new(&named_curve("11a1").unwrap(), 1).unwrap();
        assert!((d.l_value(0).unwrap().value.re - 0.253841860855911).abs() < 1e-13);
        let d = LSeriesData::new(&named_curve("37a1").unwrap(), 1).unwrap();
        assert!((d.l_value(1).unwrap().value.re - 0.305999773834052).abs() < 1e-12);
        assert_eq!(d.analytic_rank(1e-8).unwrap(), 1);
        let d = LSeriesData::new(&named_curve("389a1").unwrap(), 1).unwrap();
        assert!((d.l_value(2).unwrap().value.re - 1.51863300057685).abs() < 1e-11);
        assert_eq!(d.analytic_rank(1e-8).unwrap(), 2);
    }

    #[test]
    fn twisted_values_match_reference() {
        let d = LSeriesData::new(&named_curve("11a1").unwrap(), 25).unwrap();
        let chi = DirichletCharacter::from_generator(5, 1, 1).unwrap();
        let v = d.twisted_l_value(&chi).unwrap().value;
        assert!((v - Complex64::new(0.685976714588516, -1.10993363969521)).norm() < 1e-12, "{v}");
        let chi = DirichletCharacter::from_generator(5, 2, 4).unwrap();
        let v = d.twisted_l_value(&chi).unwrap().value;
        assert!((v - Complex64::new(0.925213764451151, -0.868833556062333)).norm() < 1e-12, "{v}");
        let chi = DirichletCharacter::from_generator(5, 1, 2).unwrap();
        let v = d.twisted_l_value(&chi).unwrap().value;
        assert!((v - Complex64::new(2.83803828204430, 0.0)).norm() < 1e-12, "{v}");
    }

    #[test]
    fn gauss_sum_identities() {
        for r in 1..=3 {
            for chi in DirichletCharacter::all(5, r).unwrap() {
                if !chi.is_primitive() {
                    assert_eq!(gauss_sum(&chi).err(), if chi.is_trivial() { None } else { Some(Error::Imprimitive) });
                    continue;
                }
                let w = gauss_sum(&chi).unwrap();
                let m = chi.modulus() as f64;
                assert!((w.norm_sqr() - m).abs() < 1e-10);
                let sign = if chi.is_even() { 1.0 } else { -1.0 };
                assert!((w * gauss_sum(&chi.conj()).unwrap() - sign * m).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn exact_gauss_sum_matches_complex() {
        for (k, e) in [(1u32, 1u64), (1, 3), (2, 7)] {
            let g = GammaCharacter { p: 5, k, e };
            let exact = gauss_sum_exact(&g).unwrap().to_complex();
            let chi = DirichletCharacter::from_gamma(&g).unwrap();
            assert!((exact - gauss_sum(&chi).unwrap()).norm() < 1e-10);
        }
    }

    #[test]
    fn slice_check_examples() {
        let c: Vec<i64> = (0..200).map(|i| (i * 7919 % 23) - 11).collect();
        assert_eq!(fourier_slice_check(&c, 5).max_deviation, 0);
        assert_eq!(fourier_slice_check(&c[..10], 1).max_deviation, 0);
        assert!(vandermonde_nonzero(5));
    }
}
