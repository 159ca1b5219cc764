//! Rigorous elementary functions on intervals.
//!
//! Each function is built from argument reduction in interval arithmetic plus
//! a truncated Taylor series with an explicit remainder enclosure, so the
//! result does not depend on libm accuracy. Monotone functions evaluate at
//! the endpoints with the appropriate rounding direction baked in by the
//! interval operations themselves.

use crate::real::Interval;
use crate::IvError;

/// pi enclosed in two ulps. The f64 nearest to pi is below the true value.
pub fn pi() -> Interval {
    Interval::new(std::f64::consts::PI, std::f64::consts::PI.next_up())
}

/// ln 2 enclosed in two ulps (safe regardless of the rounding direction of
/// the stored constant).
pub fn ln_2() -> Interval {
    Interval::new(
        std::f64::consts::LN_2.next_down(),
        std::f64::consts::LN_2.next_up(),
    )
}

fn half_pi() -> Interval {
    pi().ldexp(-1)
}

/// exp(r) for |r| <= 0.36 by series with remainder |r|^(J+1)/(J+1)! * e^0.36.
fn exp_reduced(r: Interval) -> Interval {
    debug_assert!(r.mag() <= 0.36);
    const J: usize = 13;
    let mut sum = Interval::ONE;
    let mut term = Interval::ONE;
    for j in 1..=J {
        term = term * r / Interval::from(j as i32);
        sum += term;
    }
    let mut tail = Interval::point(r.mag());
    tail = tail.powi((J + 1) as i32);
    let mut fact = 1.0f64;
    for j in 2..=(J + 1) {
        fact *= j as f64;
    }
    // e^0.36 < 1.44
    let bound = (tail * Interval::point(1.44) / Interval::point(fact)).hi();
    sum + Interval::symmetric(bound)
}

pub fn exp(x: Interval) -> Interval {
    #[inline]
    fn exp_half(x: f64, upper: bool) -> f64 {
        if x == f64::INFINITY {
            return f64::INFINITY;
        }
        if x == f64::NEG_INFINITY {
            return 0.0;
        }
        if x > 710.0 {
            return if upper { f64::INFINITY } else { f64::MAX };
        }
        if x < -746.0 {
            // exp(x) < 2^-1074, below the smallest subnormal
            return if upper { f64::from_bits(1) } else { 0.0 };
        }
        let k = (x / std::f64::consts::LN_2).round();
        let r = Interval::point(x) - Interval::point(k) * ln_2();
        let e = exp_reduced(r).ldexp(k as i32);
        if upper {
            e.hi()
        } else {
            e.lo().max(0.0)
        }
    }
    Interval::new(exp_half(x.lo(), false), exp_half(x.hi(), true))
}

/// atanh by odd series, |t| <= 0.18; remainder is geometric.
fn atanh_reduced(t: Interval) -> Interval {
    debug_assert!(t.mag() <= 0.18);
    const K: usize = 10;
    let t2 = t.sqr();
    let mut sum = t;
    let mut pow = t;
    for k in 1..=K {
        pow = pow * t2;
        sum += pow / Interval::from((2 * k + 1) as i32);
    }
    let m = t.mag();
    let mut mp = Interval::point(m).powi((2 * K + 3) as i32);
    mp = mp / (Interval::ONE - Interval::point(m).sqr());
    let bound = (mp / Interval::from((2 * K + 3) as i32)).hi();
    sum + Interval::symmetric(bound)
}

pub fn ln(x: Interval) -> Result<Interval, IvError> {
    if x.lo() <= 0.0 {
        return Err(IvError::Domain("ln of interval touching (-inf, 0]"));
    }
    #[inline]
    fn ln_half(x: f64, upper: bool) -> f64 {
        if x == f64::INFINITY {
            return f64::INFINITY;
        }
        // x = m * 2^e with m in [1/sqrt2, sqrt2)
        let (mut m, mut e) = frexp(x);
        if m < std::f64::consts::FRAC_1_SQRT_2 {
            m *= 2.0;
            e -= 1;
        }
        let mi = Interval::point(m);
        let t = (mi - Interval::ONE) / (mi + Interval::ONE);
        let l = atanh_reduced(t).ldexp(1) + Interval::from(e) * ln_2();
        if upper {
            l.hi()
        } else {
            l.lo()
        }
    }
    Ok(Interval::new(ln_half(x.lo(), false), ln_half(x.hi(), true)))
}

pub fn log1p(x: Interval) -> Result<Interval, IvError> {
    if x.lo() <= -1.0 {
        return Err(IvError::Domain("log1p of interval touching (-inf, -1]"));
    }
    if x.mag() <= 0.17 {
        // ln(1+x) = 2 atanh(x / (2 + x)); the reduction keeps |t| <= 0.18
        let t = x / (Interval::from(2) + x);
        return Ok(atanh_reduced(t).ldexp(1));
    }
    ln(Interval::ONE + x)
}

fn frexp(x: f64) -> (f64, i32) {
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    if exp == 0 {
        // subnormal: scale up first
        let (m, e) = frexp(x * f64::powi(2.0, 64));
        return (m, e - 64);
    }
    let mantissa = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
    (mantissa, exp - 1022)
}

/// sin on |r| <= 0.79 (pi/4 plus reduction slack) by alternating series.
fn sin_reduced(r: Interval) -> Interval {
    const J: usize = 8;
    let r2 = r.sqr();
    let mut sum = r;
    let mut term = r;
    for j in 1..=J {
        let d = (2 * j) * (2 * j + 1);
        term = -term * r2 / Interval::from(d as i32);
        sum += term;
    }
    let m = Interval::point(r.mag()).powi((2 * J + 3) as i32);
    let mut fact = 1.0f64;
    for j in 2..=(2 * J + 3) {
        fact *= j as f64;
    }
    let bound = (m / Interval::point(fact)).hi();
    (sum + Interval::symmetric(bound))
        .intersect(&Interval::new(-1.0, 1.0))
        .unwrap_or(Interval::new(-1.0, 1.0))
}

fn cos_reduced(r: Interval) -> Interval {
    const J: usize = 8;
    let r2 = r.sqr();
    let mut sum = Interval::ONE;
    let mut term = Interval::ONE;
    for j in 1..=J {
        let d = (2 * j - 1) * (2 * j);
        term = -term * r2 / Interval::from(d as i32);
        sum += term;
    }
    let m = Interval::point(r.mag()).powi((2 * J + 2) as i32);
    let mut fact = 1.0f64;
    for j in 2..=(2 * J + 2) {
        fact *= j as f64;
    }
    let bound = (m / Interval::point(fact)).hi();
    (sum + Interval::symmetric(bound))
        .intersect(&Interval::new(-1.0, 1.0))
        .unwrap_or(Interval::new(-1.0, 1.0))
}

/// Quadrant-reduced sine of a point (as a thin interval input).
fn sin_point(x: f64) -> Interval {
    if x == 0.0 {
        return Interval::ZERO;
    }
    let n = (x / std::f64::consts::FRAC_PI_2).round();
    let r = Interval::point(x) - Interval::point(n) * half_pi();
    match (n as i64).rem_euclid(4) {
        0 => sin_reduced(r),
        1 => cos_reduced(r),
        2 => -sin_reduced(r),
        _ => -cos_reduced(r),
    }
}

fn cos_point(x: f64) -> Interval {
    let n = (x / std::f64::consts::FRAC_PI_2).round();
    let r = Interval::point(x) - Interval::point(n) * half_pi();
    match (n as i64).rem_euclid(4) {
        0 => cos_reduced(r),
        1 => -sin_reduced(r),
        2 => -cos_reduced(r),
        _ => sin_reduced(r),
    }
}

/// Whether some integer k ~= rem (mod 4) lies in [a, b].
fn int_in_mod4(a: f64, b: f64, rem: i64) -> bool {
    let mut k = a.ceil();
    let mut steps = 0;
    while k <= b && steps < 16 {
        if (k as i64).rem_euclid(4) == rem {
            return true;
        }
        k += 1.0;
        steps += 1;
    }
    steps >= 16
}

pub fn sin(x: Interval) -> Interval {
    if !x.is_finite() || x.width() > 7.0 || x.mag() > 1e15 {
        return Interval::new(-1.0, 1.0);
    }
    let mut r = sin_point(x.lo()).hull(&sin_point(x.hi()));
    // extrema at k * pi/2 with k = 1 mod 4 (max) and k = 3 mod 4 (min);
    // the 0.01 slack absorbs the inexact division.
    let a = x.lo() / std::f64::consts::FRAC_PI_2 - 0.01;
    let b = x.hi() / std::f64::consts::FRAC_PI_2 + 0.01;
    if int_in_mod4(a, b, 1) {
        r = r.hull(&Interval::point(1.0));
    }
    if int_in_mod4(a, b, 3) {
        r = r.hull(&Interval::point(-1.0));
    }
    r.intersect(&Interval::new(-1.0, 1.0))
        .unwrap_or(Interval::new(-1.0, 1.0))
}

pub fn cos(x: Interval) -> Interval {
    if !x.is_finite() || x.width() > 7.0 || x.mag() > 1e15 {
        return Interval::new(-1.0, 1.0);
    }
    let mut r = cos_point(x.lo()).hull(&cos_point(x.hi()));
    let a = x.lo() / std::f64::consts::FRAC_PI_2 - 0.01;
    let b = x.hi() / std::f64::consts::FRAC_PI_2 + 0.01;
    if int_in_mod4(a, b, 0) {
        r = r.hull(&Interval::point(1.0));
    }
    if int_in_mod4(a, b, 2) {
        r = r.hull(&Interval::point(-1.0));
    }
    r.intersect(&Interval::new(-1.0, 1.0))
        .unwrap_or(Interval::new(-1.0, 1.0))
}

/// atan by double half-angle reduction plus odd series on [0, 0.2].
fn atan_series(t: Interval) -> Interval {
    const K: usize = 10;
    let t2 = t.sqr();
    let mut sum = t;
    let mut pow = t;
    for k in 1..=K {
        pow = -pow * t2;
        sum += pow / Interval::from((2 * k + 1) as i32);
    }
    let m = Interval::point(t.mag()).powi((2 * K + 3) as i32);
    let bound = (m / Interval::from((2 * K + 3) as i32)).hi();
    sum + Interval::symmetric(bound)
}

fn atan_point(x: f64) -> Interval {
    if x == 0.0 {
        return Interval::ZERO;
    }
    if x < 0.0 {
        return -atan_point(-x);
    }
    if x.is_infinite() {
        return half_pi();
    }
    if x > 1.0 {
        let inv = Interval::ONE / Interval::point(x);
        return half_pi() - atan_point_iv(inv);
    }
    atan_point_iv(Interval::point(x))
}

fn atan_point_iv(x: Interval) -> Interval {
    // two half-angle reductions: maps [0,1] -> [0, ~0.2]
    let x1 = x / (Interval::ONE + (Interval::ONE + x.sqr()).sqrt().unwrap());
    let x2 = x1 / (Interval::ONE + (Interval::ONE + x1.sqr()).sqrt().unwrap());
    atan_series(x2).ldexp(2)
}

pub fn atan(x: Interval) -> Interval {
    atan_point(x.lo()).hull(&atan_point(x.hi()))
}

/// Principal-value atan2 on intervals; errors if the box touches the branch
/// cut (negative real axis including the origin).
pub fn atan2(y: Interval, x: Interval) -> Result<Interval, IvError> {
    if x.contains(0.0) && y.contains(0.0) {
        return Err(IvError::Domain("atan2 of box containing the origin"));
    }
    if x.hi() <= 0.0 && y.contains(0.0) {
        return Err(IvError::Domain("atan2 of box crossing the branch cut"));
    }
    if x.lo() > 0.0 {
        return Ok(atan(y / x));
    }
    if y.lo() > 0.0 {
        return Ok(half_pi() - atan(x / y));
    }
    if y.hi() < 0.0 {
        return Ok(-half_pi() + atan(x / (-y)));
    }
    // remaining case is x <= 0 with y crossing zero, rejected above
    Err(IvError::Domain("atan2 of box crossing the branch cut"))
}

/// x^y for x > 0 via exp(y ln x).
pub fn pow(x: Interval, y: Interval) -> Result<Interval, IvError> {
    Ok(exp(y * ln(x)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_zero_tight() {
        let e = exp(Interval::ZERO);
        assert!(e.contains(1.0));
        assert!(e.width() <= 2.0 * f64::EPSILON);
    }

    #[test]
    fn exp_one_contains_e() {
        let e = exp(Interval::ONE);
        assert!(e.contains(std::f64::consts::E));
        assert!(e.width() < 1e-14);
    }

    #[test]
    fn ln_exp_roundtrip() {
        for &x in &[1e-8, 0.1, 1.0, 2.0, 10.0, 12345.678, 1e12] {
            let l = ln(Interval::point(x)).unwrap();
            let back = exp(l);
            assert!(back.contains(x) || back.width() < 1e-10 * x, "x={x}");
            assert!(back.lo() <= x * (1.0 + 1e-13) && x * (1.0 - 1e-13) <= back.hi());
        }
    }

    #[test]
    fn ln_2_value() {
        let l = ln(Interval::point(2.0)).unwrap();
        assert!(l.contains(std::f64::consts::LN_2));
    }

    #[test]
    fn sin_known() {
        let s = sin(Interval::point(std::f64::consts::FRAC_PI_6));
        assert!(s.contains(0.5) || (s.lo() - 0.5).abs() < 1e-15);
        let s2 = sin(pi());
        assert!(s2.contains(0.0));
    }

    #[test]
    fn sin_interval_extremum() {
        let s = sin(Interval::new(1.0, 2.0));
        assert!(s.hi() >= 1.0 - 1e-15);
        assert!(s.lo() <= f64::sin(1.0));
    }

    #[test]
    fn cos_interval_extremum() {
        let c = cos(Interval::new(-0.5, 0.5));
        assert!(c.hi() >= 1.0 - 1e-15);
        assert!(c.lo() <= f64::cos(0.5));
    }

    #[test]
    fn atan_one_is_quarter_pi() {
        let a = atan(Interval::ONE);
        assert!(a.contains(std::f64::consts::FRAC_PI_4));
        assert!(a.width() < 1e-14);
    }

    #[test]
    fn atan2_quadrants() {
        let q2 = atan2(Interval::point(1.0), Interval::point(-1.0)).unwrap();
        assert!(q2.contains(3.0 * std::f64::consts::FRAC_PI_4));
        let q3 = atan2(Interval::point(-1.0), Interval::point(-1.0)).unwrap();
        assert!(q3.contains(-3.0 * std::f64::consts::FRAC_PI_4));
        assert!(atan2(Interval::new(-0.1, 0.1), Interval::point(-1.0)).is_err());
    }

    #[test]
    fn pow_simple() {
        let p = pow(Interval::point(2.0), Interval::point(10.0)).unwrap();
        assert!(p.contains(1024.0));
        assert!(p.width() < 1e-10);
    }

    #[test]
    fn log1p_small() {
        let l = log1p(Interval::point(1e-10)).unwrap();
        assert!(l.contains(1e-10 - 0.5e-20) || l.hi() >= 1e-10 - 0.5e-20);
        assert!(l.lo() <= 1e-10);
    }
}

/// x^y for x >= 0 possibly touching zero, y >= 0 (continuous extension
/// 0^y = 0 for y > 0; the exactly-zero exponent yields 1).
pub fn pow0(x: Interval, y: Interval) -> Result<Interval, IvError> {
    if x.lo() < 0.0 {
        return Err(IvError::Domain("pow0 of interval with negative part"));
    }
    if y == Interval::ZERO {
        return Ok(Interval::ONE);
    }
    if !(y.lo() > 0.0) {
        return Err(IvError::Domain("pow0 needs a nonnegative exponent"));
    }
    if x.lo() == 0.0 {
        if x.hi() == 0.0 {
            return Ok(Interval::ZERO);
        }
        let hi = pow(Interval::point(x.hi()), y)?;
        return Ok(Interval::new(0.0, hi.hi()));
    }
    pow(x, y)
}
