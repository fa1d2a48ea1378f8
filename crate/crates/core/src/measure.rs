//! Finite-level group rings, measure towers and the `tau` transform.
//!
//! `Gamma` elements live in `R[Gamma_r]` with `Gamma = 1 + pZ_p`, topological
//! generator `gamma = 1 + p`, and index `c` standing for the class of
//! `gamma^c` modulo `p^r`. `Units` elements live in `R[(Z/p^r)^x]`, indexed by
//! residues, with zero coefficients at non-units.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::padic::{inv_mod, max_precision, mul_mod, padic_log, pow_checked, pow_mod, valuation_i128, PadicNumber};
use crate::ring::Ring;

/// Extra digits kept when lifting a class to an integer for the Riemann sum.
pub const GUARD_DIGITS: u32 = 2;
/// Largest truncation degree accepted by the transforms.
pub const MAX_DEGREE: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IndexKind {
    Gamma,
    Units,
}

#[derive(Clone, Debug)]
pub struct LevelElement<R> {
    p: u64,
    level: u32,
    kind: IndexKind,
    coeffs: Vec<R>,
}

fn size(p: u64, level: u32) -> Result<usize> {
    Ok(pow_checked(p, level)? as usize)
}

impl<R: Ring> LevelElement<R> {
    pub fn new(p: u64, level: u32, kind: IndexKind, coeffs: Vec<R>) -> Result<Self> {
        if coeffs.len() != size(p, level)? {
            return Err(Error::InvalidInput("coefficient vector has the wrong length".into()));
        }
        if kind == IndexKind::Units && level > 0 {
            for (a, c) in coeffs.iter().enumerate() {
                if (a as u64).is_multiple_of(p) && !c.is_negligible(0.0) {
                    return Err(Error::SupportViolation(a as u64));
                }
            }
        }
        Ok(LevelElement { p, level, kind, coeffs })
    }

    pub fn zero(p: u64, level: u32, kind: IndexKind, proto: &R) -> Result<Self> {
        Ok(LevelElement { p, level, kind, coeffs: vec![proto.zero_like(); size(p, level)?] })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn kind(&self) -> IndexKind {
        self.kind
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, i: u64) -> &R {
        &self.coeffs[(i % self.coeffs.len() as u64) as usize]
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        if self.level != other.level {
            return Err(Error::LevelMismatch(self.level, other.level));
        }
        if self.kind != other.kind {
            return Err(Error::InvalidInput("index kinds differ".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.radd(b)).collect();
        Ok(LevelElement { coeffs, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.rsub(b)).collect();
        Ok(LevelElement { coeffs, ..self.clone() })
    }

    pub fn scale(&self, c: &R) -> Self {
        LevelElement { coeffs: self.coeffs.iter().map(|a| a.rmul(c)).collect(), ..self.clone() }
    }

    /// Product in the group ring.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let n = self.coeffs.len() as u64;
        let mut out = vec![self.coeffs[0].zero_like(); n as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_negligible(0.0) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let k = match self.kind {
                    IndexKind::Gamma => (i as u64 + j as u64) % n,
                    IndexKind::Units => mul_mod(i as u64, j as u64, n),
                };
                out[k as usize] = out[k as usize].radd(&a.rmul(b));
            }
        }
        Ok(LevelElement { coeffs: out, ..self.clone() })
    }

    /// Sum of coefficients (the augmentation, i.e. the trivial character).
    pub fn augmentation(&self) -> R {
        let mut acc = self.coeffs[0].zero_like();
        for c in &self.coeffs {
            acc = acc.radd(c);
        }
        acc
    }

    /// Image under the projection to the level below.
    pub fn project(&self) -> Result<Self> {
        if self.level == 0 {
            return Err(Error::LevelMismatch(0, 0));
        }
        let m = size(self.p, self.level - 1)? as u64;
        let mut out = vec![self.coeffs[0].zero_like(); m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = (i as u64 % m) as usize;
            out[k] = out[k].radd(c);
        }
        Ok(LevelElement { p: self.p, level: self.level - 1, kind: self.kind, coeffs: out })
    }

    fn permute(&self, f: impl Fn(u64) -> u64) -> Self {
        let mut out = vec![self.coeffs[0].zero_like(); self.coeffs.len()];
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = f(i as u64) as usize;
            out[k] = out[k].radd(c);
        }
        LevelElement { coeffs: out, ..self.clone() }
    }

    /// Pushforward along `x -> x^(p-1)`.
    pub fn phi_push(&self) -> Self {
        let n = self.coeffs.len() as u64;
        match self.kind {
            IndexKind::Gamma => self.permute(|c| mul_mod(c, self.p - 1, n)),
            IndexKind::Units => self.permute(|a| pow_mod(a, self.p - 1, n)),
        }
    }

    /// Pushforward along `x -> x^(-1)`.
    pub fn iota_push(&self) -> Self {
        let n = self.coeffs.len() as u64;
        match self.kind {
            IndexKind::Gamma => self.permute(|c| (n - c) % n),
            IndexKind::Units => self.permute(|a| if a % self.p == 0 && n > 1 { a } else { inv_mod(a, n).unwrap_or(0) }),
        }
    }

    /// Pushforward of a units-level element at level `r` to `Gamma_(r-1)`
    /// along `x -> x^(p-1)`.
    pub fn phi_to_gamma(&self) -> Result<Self> {
        self.units_to_gamma(|a, modulus| pow_mod(a, self.p - 1, modulus))
    }

    /// Pushforward of a units-level element at level `r` to `Gamma_(r-1)`
    /// along `x -> <x> = x / omega(x)`.
    pub fn bracket_to_gamma(&self) -> Result<Self> {
        let p = self.p;
        let r = self.level;
        self.units_to_gamma(|a, modulus| teichmuller_bracket(a, p, r, modulus))
    }

    fn units_to_gamma(&self, f: impl Fn(u64, u64) -> u64) -> Result<Self> {
        if self.kind != IndexKind::Units || self.level == 0 {
            return Err(Error::InvalidInput("expected a units-level element of level >= 1".into()));
        }
        let modulus = size(self.p, self.level)? as u64;
        let index = GammaIndex::new(self.p, self.level - 1)?;
        let mut out = LevelElement::zero(self.p, self.level - 1, IndexKind::Gamma, &self.coeffs[0])?;
        for (a, c) in self.coeffs.iter().enumerate() {
            if (a as u64).is_multiple_of(self.p) {
                continue;
            }
            let k = index.coordinate(f(a as u64, modulus))? as usize;
            out.coeffs[k] = out.coeffs[k].radd(c);
        }
        Ok(out)
    }

    /// `sum_c mu(c) zeta^(e c)` for the character `gamma -> zeta_(p^k)^e`.
    pub fn eval_character(&self, chi: &GammaCharacter) -> Result<Cyclotomic<R>> {
        if self.kind != IndexKind::Gamma {
            return Err(Error::InvalidInput("characters of Gamma need a Gamma-level element".into()));
        }
        if chi.p != self.p {
            return Err(Error::PrimeMismatch(chi.p, self.p));
        }
        if chi.k > self.level {
            return Err(Error::LevelMismatch(chi.k, self.level));
        }
        let order = pow_checked(self.p, chi.k)?;
        let terms: Vec<(u64, R)> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(c, v)| (mul_mod(chi.e % order, c as u64 % order, order), v.clone()))
            .collect();
        Ok(Cyclotomic::from_exponents(order, &terms, &self.coeffs[0]))
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> LevelElement<S> {
        LevelElement { p: self.p, level: self.level, kind: self.kind, coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.same_shape(other).is_ok() && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a.approx_eq(b, tol))
    }
}

/// The character of `Gamma` sending `1 + p` to `zeta_(p^k)^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GammaCharacter {
    pub p: u64,
    pub k: u32,
    pub e: u64,
}

impl GammaCharacter {
    pub fn trivial(p: u64) -> Self {
        GammaCharacter { p, k: 0, e: 0 }
    }

    pub fn is_trivial(&self) -> bool {
        self.k == 0 || self.e.is_multiple_of(pow_checked(self.p, self.k).unwrap_or(1))
    }

    /// The same character with `e` prime to `p` (or `k = 0`).
    pub fn reduced(&self) -> Self {
        let mut c = *self;
        if c.is_trivial() {
            return GammaCharacter::trivial(c.p);
        }
        c.e %= pow_checked(c.p, c.k).expect("small order");
        while c.e.is_multiple_of(c.p) {
            c.e /= c.p;
            c.k -= 1;
        }
        c
    }

    pub fn pow(&self, j: u64) -> Self {
        let order = pow_checked(self.p, self.k).expect("small order");
        GammaCharacter { e: mul_mod(self.e % order, j % order, order), ..*self }
    }

    /// Conductor of the associated Dirichlet character: `p^(k+1)` for a
    /// character of exact order `p^k`, `1` for the trivial one.
    pub fn conductor(&self) -> u64 {
        let c = self.reduced();
        if c.k == 0 {
            1
        } else {
            pow_checked(c.p, c.k + 1).expect("small order")
        }
    }

    /// All characters of `Gamma_n`, each once, trivial first.
    pub fn all_of_level(p: u64, n: u32) -> Vec<Self> {
        let order = pow_checked(p, n).expect("small level");
        (0..order).map(|e| GammaCharacter { p, k: n, e }.reduced()).collect()
    }
}

/// `<a> = a / omega(a)` reduced modulo `modulus = p^r`.
pub fn teichmuller_bracket(a: u64, p: u64, r: u32, modulus: u64) -> u64 {
    let omega = pow_mod(a, pow_checked(p, r.saturating_sub(1)).expect("small level"), modulus);
    mul_mod(a % modulus, inv_mod(omega, modulus).expect("unit"), modulus)
}

/// Teichmuller representative `omega(a)` modulo `p^r`.
pub fn teichmuller(a: u64, p: u64, r: u32) -> u64 {
    let modulus = pow_checked(p, r).expect("small level");
    pow_mod(a, pow_checked(p, r.saturating_sub(1)).expect("small level"), modulus)
}

/// Coordinate lookup `a -> c` with `(1+p)^c = a` modulo `p^(n+1)`.
#[derive(Clone, Debug)]
pub struct GammaIndex {
    p: u64,
    n: u32,
    modulus: u64,
    table: Vec<u32>,
}

impl GammaIndex {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        let modulus = pow_checked(p, n + 1)?;
        let order = pow_checked(p, n)?;
        let mut table = vec![u32::MAX; modulus as usize];
        let mut g = 1 % modulus;
        for c in 0..order {
            table[g as usize] = c as u32;
            g = mul_mod(g, 1 + p, modulus);
        }
        Ok(GammaIndex { p, n, modulus, table })
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    pub fn coordinate(&self, a: u64) -> Result<u64> {
        match self.table[(a % self.modulus) as usize] {
            u32::MAX => Err(Error::NotOneUnit),
            c => Ok(u64::from(c)),
        }
    }

    /// Integer lift of the class `c`: `(1+p)^c` modulo `p^(n+1+guard)`.
    pub fn lift(&self, c: u64) -> u64 {
        let m = pow_checked(self.p, self.n + 1 + GUARD_DIGITS).expect("small level");
        pow_mod(1 + self.p, c, m)
    }
}

/// Coordinate `c(a) = log a / log(1+p)` modulo `p^n`, through the p-adic log.
pub fn gamma_coordinate(p: u64, a: i128, n: u32) -> Result<u64> {
    if a.rem_euclid(p as i128) != 1 {
        return Err(Error::NotOneUnit);
    }
    let prec = n + 3;
    let la = padic_log(&PadicNumber::from_i128(p, a, prec)?)?;
    let lg = padic_log(&PadicNumber::from_i128(p, 1 + p as i128, prec)?)?;
    let c = la.try_div(&lg)?;
    if n == 0 {
        return Ok(0);
    }
    c.residue(n)
}

/// A projection-compatible sequence of level elements, levels `0..=n`.
#[derive(Clone, Debug)]
pub struct MeasureTower<R> {
    levels: Vec<LevelElement<R>>,
}

impl<R: Ring> MeasureTower<R> {
    /// Tower determined by its top level.
    pub fn from_top(top: LevelElement<R>) -> Result<Self> {
        let mut levels = vec![top];
        while levels.last().expect("nonempty").level() > 0 {
            let next = levels.last().expect("nonempty").project()?;
            levels.push(next);
        }
        levels.reverse();
        Ok(MeasureTower { levels })
    }

    /// Tower from explicit levels `0..=n`, checked for compatibility.
    pub fn from_levels(levels: Vec<LevelElement<R>>, tol: f64) -> Result<Self> {
        for (r, l) in levels.iter().enumerate() {
            if l.level() != r as u32 {
                return Err(Error::LevelMismatch(l.level(), r as u32));
            }
        }
        let t = MeasureTower { levels };
        if !t.is_compatible(tol) {
            return Err(Error::InvalidInput("levels are not projection compatible".into()));
        }
        Ok(t)
    }

    pub fn is_compatible(&self, tol: f64) -> bool {
        self.levels.windows(2).all(|w| w[1].project().map(|p| p.approx_eq(&w[0], tol)).unwrap_or(false))
    }

    pub fn depth(&self) -> u32 {
        self.levels.len() as u32 - 1
    }

    pub fn prime(&self) -> u64 {
        self.levels[0].prime()
    }

    pub fn level(&self, r: u32) -> &LevelElement<R> {
        &self.levels[r as usize]
    }

    pub fn top(&self) -> &LevelElement<R> {
        self.levels.last().expect("nonempty")
    }

    pub fn levels(&self) -> &[LevelElement<R>] {
        &self.levels
    }

    fn map_levels(&self, f: impl Fn(&LevelElement<R>) -> Result<LevelElement<R>>) -> Result<Self> {
        Ok(MeasureTower { levels: self.levels.iter().map(f).collect::<Result<_>>()? })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.depth() != other.depth() {
            return Err(Error::LevelMismatch(self.depth(), other.depth()));
        }
        Ok(MeasureTower { levels: self.levels.iter().zip(&other.levels).map(|(a, b)| a.add(b)).collect::<Result<_>>()? })
    }

    pub fn scale(&self, c: &R) -> Self {
        MeasureTower { levels: self.levels.iter().map(|l| l.scale(c)).collect() }
    }

    pub fn phi_push(&self) -> Self {
        self.map_levels(|l| Ok(l.phi_push())).expect("permutation")
    }

    pub fn iota_push(&self) -> Self {
        self.map_levels(|l| Ok(l.iota_push())).expect("permutation")
    }

    pub fn eval_character(&self, chi: &GammaCharacter) -> Result<Cyclotomic<R>> {
        self.top().eval_character(chi)
    }
}

/// Point mass at `a` as a tower over levels `0..=n`.
pub fn dirac<R: Ring>(p: u64, a: i128, n: u32, proto: &R) -> Result<MeasureTower<R>> {
    if a.rem_euclid(p as i128) != 1 {
        return Err(Error::NotOneUnit);
    }
    let c = gamma_coordinate(p, a, n)?;
    let mut top = LevelElement::zero(p, n, IndexKind::Gamma, proto)?;
    top.coeffs[c as usize] = proto.one_like();
    MeasureTower::from_top(top)
}

/// Power series truncated at degree `d` (coefficients of `s^0..s^(d-1)`).
#[derive(Clone, Debug)]
pub struct SPowerSeries<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> SPowerSeries<R> {
    pub fn new(coeffs: Vec<R>) -> Self {
        assert!(!coeffs.is_empty(), "series needs a truncation degree of at least 1");
        SPowerSeries { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &R {
        &self.coeffs[k]
    }

    pub fn add(&self, other: &Self) -> Self {
        SPowerSeries { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.radd(b)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        SPowerSeries { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.rsub(b)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.coeffs.len().min(other.coeffs.len());
        let mut out = vec![self.coeffs[0].zero_like(); d];
        for i in 0..d {
            for j in 0..d - i {
                out[i + j] = out[i + j].radd(&self.coeffs[i].rmul(&other.coeffs[j]));
            }
        }
        SPowerSeries { coeffs: out }
    }

    /// `f(c s)`.
    pub fn rescale(&self, c: &R) -> Self {
        let mut pw = c.one_like();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a.rmul(&pw));
            pw = pw.rmul(c);
        }
        SPowerSeries { coeffs: out }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.coeffs.len() == other.coeffs.len() && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a.approx_eq(b, tol))
    }
}

fn factorial_i64(k: usize) -> i64 {
    (1..=k as i64).product()
}

/// Riemann-sum `tau` with an explicit value `L` of `log gamma`: the class
/// `c` contributes `(c L)^k`. Used for complex and rational coefficients.
pub fn tau_with_log<R: Ring>(mu: &MeasureTower<R>, d: usize, log_gamma: &R) -> Result<SPowerSeries<R>> {
    if d == 0 || d > MAX_DEGREE {
        return Err(Error::DegreeOverflow(d));
    }
    let top = mu.top();
    let proto = &top.coeffs()[0];
    let mut sums = vec![proto.zero_like(); d];
    for (c, v) in top.coeffs().iter().enumerate() {
        if v.is_negligible(0.0) {
            continue;
        }
        let x = proto.from_i64_like(c as i64).rmul(log_gamma);
        let mut pw = v.clone();
        for s in sums.iter_mut() {
            *s = s.radd(&pw);
            pw = pw.rmul(&x);
        }
    }
    let mut out = Vec::with_capacity(d);
    for (k, s) in sums.into_iter().enumerate() {
        let f = proto.from_i64_like(factorial_i64(k)).try_inv().ok_or(Error::DivisionByZero)?;
        let sign = if k % 2 == 0 { proto.one_like() } else { proto.one_like().rneg() };
        out.push(s.rmul(&f).rmul(&sign));
    }
    Ok(SPowerSeries::new(out))
}

/// Valuation below which the Riemann-sum error of the `s^k` coefficient may
/// intrude: `n + k + d_min - v_p(k!)` for a level-`n` tower whose values have
/// valuation at least `d_min`. The constant term is exact.
pub fn tau_error_valuation(p: u64, n: u32, k: usize, d_min: i64) -> Option<i64> {
    if k == 0 {
        return None;
    }
    let vk: i64 = (1..=k as i128).map(|j| i64::from(valuation_i128(j, p))).sum();
    Some(i64::from(n) + k as i64 + d_min - vk)
}

/// Smallest valuation among the top-level values (zeros contribute their
/// absolute precision).
pub fn min_valuation(mu: &MeasureTower<PadicNumber>) -> i64 {
    mu.top().coeffs().iter().map(PadicNumber::valuation_lower_bound).min().unwrap_or(0)
}

/// The `tau` transform of a p-adic tower, `s^k` coefficient
/// `(-1)^k/k! sum_c mu(c) (log a_c)^k` with the lifts `a_c = (1+p)^c`,
/// truncated to the precision the Riemann sum can certify.
pub fn tau(mu: &MeasureTower<PadicNumber>, d: usize) -> Result<SPowerSeries<PadicNumber>> {
    if d == 0 || d > MAX_DEGREE {
        return Err(Error::DegreeOverflow(d));
    }
    let p = mu.prime();
    let n = mu.depth();
    let top = mu.top();
    let index = GammaIndex::new(p, n)?;
    let lift_prec = n + 1 + GUARD_DIGITS;
    if lift_prec > max_precision(p) {
        return Err(Error::PrecisionTooLarge { p, exp: lift_prec });
    }
    let proto = &top.coeffs()[0];
    let mut sums = vec![proto.zero_like(); d];
    for (c, v) in top.coeffs().iter().enumerate() {
        if v.is_zero() && v.abs_precision() > 4 * i64::from(max_precision(p)) / 2 {
            continue;
        }
        let lift = PadicNumber::from_i128(p, index.lift(c as u64) as i128, lift_prec)?;
        let x = padic_log(&lift)?;
        let mut pw = v.clone();
        for s in sums.iter_mut() {
            *s = s.try_add(&pw)?;
            pw = pw.try_mul(&x)?;
        }
    }
    let d_min = min_valuation(mu);
    let mut out = Vec::with_capacity(d);
    for (k, s) in sums.into_iter().enumerate() {
        let f = PadicNumber::from_i128(p, i128::from(factorial_i64(k)), max_precision(p))?;
        let mut c = s.try_div(&f)?;
        if k % 2 == 1 {
            c = c.neg();
        }
        if let Some(cap) = tau_error_valuation(p, n, k, d_min) {
            c = c.truncate(cap);
        }
        out.push(c);
    }
    Ok(SPowerSeries::new(out))
}

/// Matrices between the `X_a^k` basis of `R[X_a]/(X_a^r)` and `s^k`
/// coefficients, `X_a -> exp(-s L) - 1` with `L = log a`.
#[derive(Clone, Debug)]
pub struct BasisChange<R> {
    /// Column `k` holds the `s`-coefficients of `(exp(-sL) - 1)^k`.
    pub forward: Vec<Vec<R>>,
    pub inverse: Vec<Vec<R>>,
}

pub fn basis_change_xa_s<R: Ring>(log_a: &R, r: usize) -> Result<BasisChange<R>> {
    if r == 0 || r > MAX_DEGREE {
        return Err(Error::DegreeOverflow(r));
    }
    if log_a.is_negligible(0.0) {
        return Err(Error::SingularMatrix);
    }
    // exp(-sL) - 1
    let mut base = vec![log_a.zero_like(); r];
    let minus_l = log_a.rneg();
    let mut pw = log_a.one_like();
    for (j, b) in base.iter_mut().enumerate() {
        if j > 0 {
            pw = pw.rmul(&minus_l);
            let f = log_a.from_i64_like(factorial_i64(j)).try_inv().ok_or(Error::SingularMatrix)?;
            *b = pw.rmul(&f);
        }
    }
    let base = SPowerSeries::new(base);
    let mut col = vec![log_a.zero_like(); r];
    col[0] = log_a.one_like();
    let mut col = SPowerSeries::new(col);
    let mut forward = vec![vec![log_a.zero_like(); r]; r];
    for k in 0..r {
        for j in 0..r {
            forward[j][k] = col.coeff(j).clone();
        }
        col = col.mul(&base);
    }
    let inverse = lower_triangular_inverse(&forward)?;
    Ok(BasisChange { forward, inverse })
}

fn lower_triangular_inverse<R: Ring>(m: &[Vec<R>]) -> Result<Vec<Vec<R>>> {
    let r = m.len();
    let proto = &m[0][0];
    let diag_inv: Vec<R> = (0..r).map(|i| m[i][i].try_inv().ok_or(Error::SingularMatrix)).collect::<Result<_>>()?;
    let mut inv = vec![vec![proto.zero_like(); r]; r];
    for col in 0..r {
        for i in col..r {
            let mut acc = if i == col { proto.one_like() } else { proto.zero_like() };
            for k in col..i {
                acc = acc.rsub(&m[i][k].rmul(&inv[k][col]));
            }
            inv[i][col] = acc.rmul(&diag_inv[i]);
        }
    }
    Ok(inv)
}

pub fn mat_vec<R: Ring>(m: &[Vec<R>], v: &[R]) -> Vec<R> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(v[0].zero_like(), |acc, (a, b)| acc.radd(&a.rmul(b))))
        .collect()
}

/// Complex basis change for `a = b^(p-1)`, `L = ln a`.
pub fn basis_change_complex(b: u64, p: u64, r: usize) -> Result<BasisChange<Complex64>> {
    if b < 2 {
        return Err(Error::SingularMatrix);
    }
    let l = (p - 1) as f64 * libm::log(b as f64);
    basis_change_xa_s(&Complex64::new(l, 0.0), r)
}

/// p-adic basis change for `a = 1 mod p`, `L = log_p a`.
pub fn basis_change_padic(a: i128, p: u64, r: usize, prec: u32) -> Result<BasisChange<PadicNumber>> {
    if a == 1 {
        return Err(Error::SingularMatrix);
    }
    let l = padic_log(&PadicNumber::from_i128(p, a, prec)?)?;
    basis_change_xa_s(&l, r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderVerdict {
    Order(usize),
    Indeterminate,
}

/// Index of the first coefficient that is not negligible at `tol`.
pub fn vanishing_order<R: Ring>(f: &SPowerSeries<R>, tol: f64) -> OrderVerdict {
    f.coeffs().iter().position(|c| !c.is_negligible(tol)).map_or(OrderVerdict::Indeterminate, OrderVerdict::Order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Rational;

    fn padic(p: u64, n: i128) -> PadicNumber {
        PadicNumber::from_i128(p, n, 8).unwrap()
    }

    #[test]
    fn dirac_of_generator_and_square() {
        let one = Rational::from_integer(1);
        let t = dirac(5, 6, 3, &one).unwrap();
        for r in 0..=3 {
            let l = t.level(r);
            assert_eq!(l.coeffs().iter().position(|c| *c == one), Some(if r == 0 { 0 } else { 1 }));
        }
        let t = dirac(5, 36, 3, &one).unwrap();
        assert_eq!(t.top().coeffs().iter().position(|c| *c == one), Some(2));
        assert!(t.is_compatible(0.0));
        assert_eq!(dirac(5, 7, 2, &one).unwrap_err(), Error::NotOneUnit);
    }

    #[test]
    fn coordinate_by_log_matches_table() {
        for p in [5u64, 7, 11] {
            let n = 3;
            let idx = GammaIndex::new(p, n).unwrap();
            let m = p.pow(n + 1);
            for a in (1..m).step_by(p as usize).take(200) {
                assert_eq!(gamma_coordinate(p, a as i128, n).unwrap(), idx.coordinate(a).unwrap());
            }
        }
    }

    #[test]
    fn tau_of_dirac_is_power() {
        // tau(delta_a) = a^{-s} = exp(-s log a)
        let one = padic(5, 1);
        let a = 31;
        let t = dirac(5, a, 3, &one).unwrap();
        let f = tau(&t, 5).unwrap();
        let l = padic_log(&padic(5, a)).unwrap();
        let mut expect = one.clone();
        for k in 0..5 {
            assert!(f.coeff(k).eq_at_precision(&expect), "k={k}");
            expect = expect.try_mul(&l.neg()).unwrap().try_div(&padic(5, k as i128 + 1)).unwrap();
        }
    }

    #[test]
    fn vanishing_order_cases() {
        let one = padic(5, 1);
        let z = PadicNumber::zero(5, 6);
        assert_eq!(vanishing_order(&SPowerSeries::new(vec![one.clone()]), 0.0), OrderVerdict::Order(0));
        assert_eq!(vanishing_order(&SPowerSeries::new(vec![z.clone(), z.clone(), one]), 0.0), OrderVerdict::Order(2));
        assert_eq!(vanishing_order(&SPowerSeries::new(vec![z.clone(), z]), 0.0), OrderVerdict::Indeterminate);
    }

    #[test]
    fn basis_change_first_column() {
        let bc = basis_change_padic(6, 5, 4, 8).unwrap();
        let l = padic_log(&padic(5, 6)).unwrap();
        assert!(bc.forward[0][0].eq_at_precision(&padic(5, 1)));
        assert!(bc.forward[1][1].eq_at_precision(&l.neg()));
        let half = PadicNumber::from_rational(5, 1, 2, 8).unwrap();
        assert!(bc.forward[2][1].eq_at_precision(&l.try_mul(&l).unwrap().try_mul(&half).unwrap()));
        assert_eq!(basis_change_padic(1, 5, 3, 8).unwrap_err(), Error::SingularMatrix);
    }

    #[test]
    fn characters_of_dirac() {
        let one = Rational::from_integer(1);
        let t = dirac(5, 36, 2, &one).unwrap();
        let chi = GammaCharacter { p: 5, k: 2, e: 3 };
        let v = t.eval_character(&chi).unwrap();
        let z = Cyclotomic::zeta(25, &one).pow(6);
        assert!(v.approx_eq(&z, 0.0));
        assert_eq!(t.eval_character(&GammaCharacter { p: 5, k: 3, e: 1 }).unwrap_err(), Error::LevelMismatch(3, 2));
    }
}
