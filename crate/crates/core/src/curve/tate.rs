//! Weierstrass coordinate changes and Tate's algorithm.

use crate::error::{Error, Result};

/// Integral Weierstrass coefficients `[a1, a2, a3, a4, a6]`.
pub type Model = [i128; 5];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub b2: i128,
    pub b4: i128,
    pub b6: i128,
    pub b8: i128,
    pub c4: i128,
    pub c6: i128,
    pub disc: i128,
}

fn ck(x: Option<i128>) -> Result<i128> {
    x.ok_or(Error::Overflow)
}

macro_rules! m {
    ($a:expr, $b:expr) => {
        ck(i128::checked_mul($a, $b))?
    };
}
macro_rules! ad {
    ($($x:expr),+) => {{
        let mut acc: i128 = 0;
        $( acc = ck(acc.checked_add($x))?; )+
        acc
    }};
}

pub fn invariants(a: &Model) -> Result<Invariants> {
    let [a1, a2, a3, a4, a6] = *a;
    let b2 = ad!(m!(a1, a1), m!(4, a2));
    let b4 = ad!(m!(2, a4), m!(a1, a3));
    let b6 = ad!(m!(a3, a3), m!(4, a6));
    let b8 = ad!(m!(m!(a1, a1), a6), m!(m!(4, a2), a6), -m!(m!(a1, a3), a4), m!(m!(a2, a3), a3), -m!(a4, a4));
    let c4 = ad!(m!(b2, b2), -m!(24, b4));
    let c6 = ad!(-m!(m!(b2, b2), b2), m!(m!(36, b2), b4), -m!(216, b6));
    let disc = ad!(-m!(m!(b2, b2), b8), -m!(m!(m!(8, b4), b4), b4), -m!(m!(27, b6), b6), m!(m!(m!(9, b2), b4), b6));
    Ok(Invariants { b2, b4, b6, b8, c4, c6, disc })
}

/// Coordinate change `x = x' + r`, `y = y' + s x' + t`.
pub fn rst(a: &Model, r: i128, s: i128, t: i128) -> Result<Model> {
    let [a1, a2, a3, a4, a6] = *a;
    Ok([
        ad!(a1, m!(2, s)),
        ad!(a2, -m!(s, a1), m!(3, r), -m!(s, s)),
        ad!(a3, m!(r, a1), m!(2, t)),
        ad!(a4, -m!(s, a3), m!(m!(2, r), a2), -m!(ad!(t, m!(r, s)), a1), m!(m!(3, r), r), -m!(m!(2, s), t)),
        ad!(a6, m!(r, a4), m!(m!(r, r), a2), m!(m!(r, r), r), -m!(t, a3), -m!(t, t), -m!(m!(r, t), a1)),
    ])
}

/// Divides `a_i` by `u^i`; fails unless all divisions are exact.
pub fn scale_down(a: &Model, u: i128) -> Result<Model> {
    let mut out = *a;
    for (i, w) in [1u32, 2, 3, 4, 6].iter().enumerate() {
        let d = u.checked_pow(*w).ok_or(Error::Overflow)?;
        if a[i] % d != 0 {
            return Err(Error::InvalidInput("model is not divisible by the scaling".into()));
        }
        out[i] = a[i] / d;
    }
    Ok(out)
}

/// Normalizes to `a1, a3 in {0, 1}`, `a2 in {-1, 0, 1}`.
pub fn standardize(a: &Model) -> Result<Model> {
    let s = -a[0].div_euclid(2);
    let b = rst(a, 0, s, 0)?;
    let r = -(b[1] + 1).div_euclid(3);
    let c = rst(&b, r, 0, 0)?;
    let t = -c[2].div_euclid(2);
    rst(&c, 0, 0, t)
}

pub fn val(n: i128, p: u64) -> u32 {
    if n == 0 {
        return u32::MAX;
    }
    crate::padic::valuation_i128(n, p)
}

fn md(n: i128, p: i128) -> i128 {
    n.rem_euclid(p)
}

fn inv_p(n: i128, p: i128) -> i128 {
    crate::padic::inv_mod(md(n, p) as u64, p as u64).expect("unit modulo p") as i128
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kodaira {
    I0,
    In(u32),
    II,
    III,
    IV,
    I0Star,
    InStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalKind {
    Good,
    Split,
    NonSplit,
    Additive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalData {
    pub p: u64,
    pub kind: LocalKind,
    pub kodaira: Kodaira,
    pub conductor_exponent: u32,
    /// Model minimal at `p`, reached by integral changes of coordinates.
    pub model: Model,
}

/// Does `x^2 + b x + c` split over `F_p`?
fn quadratic_has_root(b: i128, c: i128, p: i128) -> bool {
    if p == 2 {
        return (0..2).any(|x| md(x * x + b * x + c, 2) == 0);
    }
    let d = md(b * b - 4 * c, p);
    d == 0 || crate::curve::arith::legendre(d as i64, p as u64) == 1
}

/// Tate's algorithm at `p` on an integral model.
pub fn tate(model: &Model, p: u64) -> Result<LocalData> {
    let pi = p as i128;
    let mut a = *model;
    loop {
        let inv = invariants(&a)?;
        if inv.disc == 0 {
            return Err(Error::SingularCurve);
        }
        let vd = val(inv.disc, p);
        if vd == 0 {
            return Ok(LocalData { p, kind: LocalKind::Good, kodaira: Kodaira::I0, conductor_exponent: 0, model: a });
        }
        // move the singular point of the reduction to (0, 0)
        let (r, t) = singular_point(&a, &inv, p)?;
        a = rst(&a, r, 0, t)?;
        let inv = invariants(&a)?;
        if md(inv.c4, pi) != 0 {
            let kind = if quadratic_has_root(a[0], -a[1], pi) { LocalKind::Split } else { LocalKind::NonSplit };
            return Ok(LocalData { p, kind, kodaira: Kodaira::In(vd), conductor_exponent: 1, model: a });
        }
        let additive = |k: Kodaira, f: u32, a: Model| Ok(LocalData { p, kind: LocalKind::Additive, kodaira: k, conductor_exponent: f, model: a });
        if val(a[4], p) < 2 {
            return additive(Kodaira::II, vd, a);
        }
        if val(inv.b8, p) < 3 {
            return additive(Kodaira::III, vd - 1, a);
        }
        if val(inv.b6, p) < 3 {
            return additive(Kodaira::IV, vd - 2, a);
        }
        // arrange p | a1, a2; p^2 | a3, a4; p^3 | a6
        let (s, t) = if p == 2 { (md(a[1], 2), 2 * md(a[4] / 4, 2)) } else { (md(-a[0] * inv_p(2, pi), pi), md(-a[2] * inv_p(2, pi * pi), pi * pi)) };
        a = rst(&a, 0, s, t)?;
        let b = a[1] / pi;
        let c = a[3] / (pi * pi);
        let d = a[4] / (pi * pi * pi);
        let w = 27 * d * d - b * b * c * c + 4 * b * b * b * d - 18 * b * c * d + 4 * c * c * c;
        let x = 3 * c - b * b;
        if md(w, pi) != 0 {
            return additive(Kodaira::I0Star, vd - 4, a);
        }
        if md(x, pi) != 0 {
            // double root: move it to T = 0
            let r = match p {
                2 => c,
                3 => b * c,
                _ => (b * c - 9 * d) * inv_p(2 * x, pi),
            };
            a = rst(&a, pi * md(r, pi), 0, 0)?;
            let (mut ix, mut iy) = (3u32, 3u32);
            let (mut mx, mut my) = (pi * pi, pi * pi);
            loop {
                let a3t = a[2] / my;
                let a6t = a[4] / (mx * my);
                if md(a3t * a3t + 4 * a6t, pi) != 0 {
                    break;
                }
                let t = if p == 2 { my * md(a6t, 2) } else { my * md(-a3t * inv_p(2, pi), pi) };
                a = rst(&a, 0, 0, t)?;
                my *= pi;
                iy += 1;
                let a2t = a[1] / pi;
                let a4t = a[3] / (pi * mx);
                let a6t = a[4] / (mx * my);
                if md(a4t * a4t - 4 * a6t * a2t, pi) != 0 {
                    break;
                }
                let r = if p == 2 { mx * md(a6t * a2t, 2) } else { mx * md(-a4t * inv_p(2 * a2t, pi), pi) };
                a = rst(&a, r, 0, 0)?;
                mx *= pi;
                ix += 1;
            }
            let m = ix + iy - 5;
            return additive(Kodaira::InStar(m), vd - m - 4, a);
        }
        // triple root: move it to T = 0
        let r = match p {
            2 => b,
            3 => -d,
            _ => -b * inv_p(3, pi),
        };
        a = rst(&a, pi * md(r, pi), 0, 0)?;
        let a3t = a[2] / (pi * pi);
        let a6t = a[4] / (pi * pi * pi * pi);
        if md(a3t * a3t + 4 * a6t, pi) != 0 {
            return additive(Kodaira::IVStar, vd - 6, a);
        }
        let t = if p == 2 { pi * pi * md(a6t, 2) } else { pi * pi * md(-a3t * inv_p(2, pi), pi) };
        a = rst(&a, 0, 0, t)?;
        if val(a[3], p) < 4 {
            return additive(Kodaira::IIIStar, vd - 7, a);
        }
        if val(a[4], p) < 6 {
            return additive(Kodaira::IIStar, vd - 8, a);
        }
        a = scale_down(&a, pi)?;
    }
}

/// `(r, t)` moving the singular point of the reduction mod `p` to `(0, 0)`.
fn singular_point(a: &Model, inv: &Invariants, p: u64) -> Result<(i128, i128)> {
    let pi = p as i128;
    let is_singular_at_origin = |m: &Model| md(m[2], pi) == 0 && md(m[3], pi) == 0 && md(m[4], pi) == 0;
    if p <= 3 {
        for r in 0..pi {
            for t in 0..pi {
                let m = rst(a, r, 0, t)?;
                if is_singular_at_origin(&m) {
                    return Ok((r, t));
                }
            }
        }
        return Err(Error::InvalidInput("no singular point found".into()));
    }
    let r = if md(inv.c4, pi) == 0 {
        md(-inv.b2 * inv_p(12, pi), pi)
    } else {
        md(-inv_p(12 * md(inv.c4, pi), pi) * md(inv.c6 + inv.b2 * md(inv.c4, pi), pi), pi)
    };
    let t = md(-inv_p(2, pi) * md(a[0] * r + a[2], pi), pi);
    let m = rst(a, r, 0, t)?;
    if !is_singular_at_origin(&m) {
        return Err(Error::InvalidInput("singular point formula failed".into()));
    }
    Ok((r, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rst_preserves_discriminant() {
        let a: Model = [0, -1, 1, -10, -20];
        let d = invariants(&a).unwrap();
        let b = rst(&a, 3, -2, 5).unwrap();
        let e = invariants(&b).unwrap();
        assert_eq!(d.disc, e.disc);
        assert_eq!(d.c4, e.c4);
        assert_eq!(d.c6, e.c6);
        assert_eq!(d.disc, -161051);
    }

    #[test]
    fn kodaira_of_small_curves() {
        let t = tate(&[0, -1, 1, -10, -20], 11).unwrap();
        assert_eq!((t.kind, t.kodaira, t.conductor_exponent), (LocalKind::Split, Kodaira::In(5), 1));
        let t = tate(&[0, 0, 0, 0, 5], 5).unwrap();
        assert_eq!(t.kind, LocalKind::Additive);
        assert_eq!(t.kodaira, Kodaira::II);
        assert_eq!(t.conductor_exponent, 2);
    }
}
