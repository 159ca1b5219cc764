//! Closed real intervals with outward rounding.
//!
//! Every operation returns an interval containing the exact real result for
//! all point inputs. Directed rounding is emulated: the nearest-rounded f64
//! result is computed together with its exact residual (two-sum for addition,
//! fma for multiplication and division), and an endpoint is nudged to the
//! next representable float only when the residual shows the rounding went
//! the wrong way. Exact results therefore stay exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::IvError;

/// A closed interval `[lo, hi]` with `lo <= hi`; endpoints may be infinite,
/// never NaN.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

#[inline]
fn next_up(x: f64) -> f64 {
    if x == f64::INFINITY {
        x
    } else {
        x.next_up()
    }
}

#[inline]
fn next_down(x: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        x
    } else {
        x.next_down()
    }
}

/// Residual of `s = RN(x + y)`; exact by Knuth's two-sum.
#[inline]
fn sum_err(x: f64, y: f64, s: f64) -> f64 {
    let bb = s - x;
    (x - (s - bb)) + (y - bb)
}

#[inline]
fn add_lo(x: f64, y: f64) -> f64 {
    let s = x + y;
    if s.is_infinite() {
        return if s > 0.0 { f64::MAX } else { s };
    }
    let e = sum_err(x, y, s);
    if e < 0.0 {
        next_down(s)
    } else {
        s
    }
}

#[inline]
fn add_hi(x: f64, y: f64) -> f64 {
    let s = x + y;
    if s.is_infinite() {
        return if s < 0.0 { f64::MIN } else { s };
    }
    let e = sum_err(x, y, s);
    if e > 0.0 {
        next_up(s)
    } else {
        s
    }
}

/// Product with residual via fma; 0 * inf is resolved to 0 ahead of time by
/// the sign-case analysis in `mul`, so plain IEEE semantics suffice here.
#[inline]
fn mul_lo(x: f64, y: f64) -> f64 {
    let p = x * y;
    if p.is_infinite() {
        return if p > 0.0 { f64::MAX } else { p };
    }
    let e = f64::mul_add(x, y, -p);
    if e < 0.0 {
        next_down(p)
    } else {
        p
    }
}

#[inline]
fn mul_hi(x: f64, y: f64) -> f64 {
    let p = x * y;
    if p.is_infinite() {
        return if p < 0.0 { f64::MIN } else { p };
    }
    let e = f64::mul_add(x, y, -p);
    if e > 0.0 {
        next_up(p)
    } else {
        p
    }
}

/// Directed quotient: residual r = RN(q*y) - x tells which side RN(x/y) lies.
#[inline]
fn div_lo(x: f64, y: f64) -> f64 {
    let q = x / y;
    if q.is_infinite() {
        return if q > 0.0 { f64::MAX } else { q };
    }
    if x.is_infinite() || y.is_infinite() {
        return q;
    }
    let r = f64::mul_add(q, y, -x);
    // true quotient = q - r/y
    if r != 0.0 && (r > 0.0) == (y > 0.0) {
        next_down(q)
    } else {
        q
    }
}

#[inline]
fn div_hi(x: f64, y: f64) -> f64 {
    let q = x / y;
    if q.is_infinite() {
        return if q < 0.0 { f64::MIN } else { q };
    }
    if x.is_infinite() || y.is_infinite() {
        return q;
    }
    let r = f64::mul_add(q, y, -x);
    if r != 0.0 && (r > 0.0) != (y > 0.0) {
        next_up(q)
    } else {
        q
    }
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };
    /// The whole extended real line.
    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    /// Interval from given endpoints. Panics on NaN or `lo > hi`; these are
    /// programming errors, not data-dependent conditions.
    #[inline]
    pub fn new(lo: f64, hi: f64) -> Interval {
        assert!(!lo.is_nan() && !hi.is_nan(), "NaN endpoint");
        assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// Thin interval `[x, x]`.
    #[inline]
    pub fn point(x: f64) -> Interval {
        assert!(!x.is_nan(), "NaN endpoint");
        Interval { lo: x, hi: x }
    }

    /// Interval spanning `x` widened by one ulp on each side; for values
    /// obtained from a rounded computation.
    #[inline]
    pub fn point_widened(x: f64) -> Interval {
        Interval {
            lo: next_down(x),
            hi: next_up(x),
        }
    }

    /// `[-r, r]`, for remainder terms; `r >= 0` required.
    #[inline]
    pub fn symmetric(r: f64) -> Interval {
        assert!(r >= 0.0, "negative radius");
        Interval { lo: -r, hi: r }
    }

    /// Enclosure of a decimal literal: parses to nearest f64 and widens one
    /// ulp each way, so the printed constant is guaranteed inside.
    pub fn parse_dec(s: &str) -> Interval {
        let x: f64 = s.parse().expect("bad decimal literal");
        Interval::point_widened(x)
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn mid(&self) -> f64 {
        if self.lo == f64::NEG_INFINITY && self.hi == f64::INFINITY {
            return 0.0;
        }
        if self.lo == f64::NEG_INFINITY {
            return f64::MIN;
        }
        if self.hi == f64::INFINITY {
            return f64::MAX;
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        if m.is_finite() {
            m
        } else {
            0.5 * (self.lo + self.hi)
        }
    }

    /// Radius: half-width, rounded up.
    #[inline]
    pub fn rad(&self) -> f64 {
        let m = self.mid();
        f64::max(add_hi(self.hi, -m), add_hi(m, -self.lo))
    }

    #[inline]
    pub fn width(&self) -> f64 {
        add_hi(self.hi, -self.lo)
    }

    /// Magnitude: max |x| over the interval.
    #[inline]
    pub fn mag(&self) -> f64 {
        f64::max(self.lo.abs(), self.hi.abs())
    }

    /// Mignitude: min |x| over the interval (0 if 0 is contained).
    #[inline]
    pub fn mig(&self) -> f64 {
        if self.contains(0.0) {
            0.0
        } else {
            f64::min(self.lo.abs(), self.hi.abs())
        }
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    #[inline]
    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Proper containment with strict inequality on both endpoints, as
    /// required by the interval Newton existence test.
    #[inline]
    pub fn contains_strict(&self, other: &Interval) -> bool {
        self.lo < other.lo && other.hi < self.hi
    }

    #[inline]
    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    #[inline]
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    #[inline]
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo <= hi {
            Some(Interval { lo, hi })
        } else {
            None
        }
    }

    #[inline]
    pub fn is_disjoint(&self, other: &Interval) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }

    /// Definite sign: Some(Greater) if the whole interval is > 0, etc.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo > 0.0 {
            Some(Ordering::Greater)
        } else if self.hi < 0.0 {
            Some(Ordering::Less)
        } else if self.lo == 0.0 && self.hi == 0.0 {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    #[inline]
    pub fn abs(&self) -> Interval {
        Interval {
            lo: self.mig(),
            hi: self.mag(),
        }
    }

    /// Tight even square: `[mig^2, mag^2]` outward-rounded.
    pub fn sqr(&self) -> Interval {
        let lo = self.mig();
        let hi = self.mag();
        Interval {
            lo: mul_lo(lo, lo),
            hi: mul_hi(hi, hi),
        }
    }

    pub fn sqrt(&self) -> Result<Interval, IvError> {
        if self.lo < 0.0 {
            return Err(IvError::Domain("sqrt of interval with negative part"));
        }
        // IEEE sqrt is correctly rounded; residual check via fma.
        let rlo = self.lo.sqrt();
        let lo = if f64::mul_add(rlo, rlo, -self.lo) > 0.0 {
            next_down(rlo)
        } else {
            rlo
        };
        let rhi = self.hi.sqrt();
        let hi = if f64::mul_add(rhi, rhi, -self.hi) < 0.0 {
            next_up(rhi)
        } else {
            rhi
        };
        Ok(Interval { lo: lo.max(0.0), hi })
    }

    /// Reciprocal; errors if 0 is contained.
    pub fn recip(&self) -> Result<Interval, IvError> {
        Interval::ONE.div_checked(self)
    }

    pub fn div_checked(&self, rhs: &Interval) -> Result<Interval, IvError> {
        if rhs.contains(0.0) {
            return Err(IvError::Domain("division by interval containing zero"));
        }
        Ok(*self / *rhs)
    }

    /// Integer power, tight for even exponents.
    pub fn powi(&self, n: i32) -> Interval {
        if n == 0 {
            return Interval::ONE;
        }
        if n < 0 {
            let p = self.powi(-n);
            return p
                .recip()
                .unwrap_or_else(|_| Interval::ENTIRE);
        }
        if n % 2 == 0 {
            let h = self.powi(n / 2);
            h.sqr()
        } else {
            let h = self.powi(n - 1);
            h * *self
        }
    }

    /// Inflate multiplicatively around the midpoint and additively by `delta`.
    pub fn inflate(&self, factor: f64, delta: f64) -> Interval {
        let m = Interval::point(self.mid());
        let r = Interval::point_widened(self.rad());
        let spread = r * Interval::point(factor) + Interval::symmetric(delta);
        Interval {
            lo: (m - spread).lo,
            hi: (m + spread).hi,
        }
    }

    /// Exact scaling by a power of two (saturating at infinities).
    pub fn ldexp(&self, e: i32) -> Interval {
        #[inline]
        fn ld(x: f64, e: i32, up: bool) -> f64 {
            if x == 0.0 || x.is_infinite() {
                return x;
            }
            let r = libm_ldexp(x, e);
            // exact unless over/underflow
            if r.is_infinite() {
                if up == (r > 0.0) {
                    r
                } else if r > 0.0 {
                    f64::MAX
                } else {
                    f64::MIN
                }
            } else if r == 0.0 || r.abs() < f64::MIN_POSITIVE {
                // possible underflow rounding; widen away from zero
                if up {
                    next_up(r)
                } else {
                    next_down(r)
                }
            } else {
                r
            }
        }
        Interval {
            lo: ld(self.lo, e, false),
            hi: ld(self.hi, e, true),
        }
    }
}

/// Minimal ldexp. Exact while the result stays normal.
fn libm_ldexp(x: f64, e: i32) -> f64 {
    let mut r = x;
    let mut e = e;
    while e > 1000 {
        r *= f64::powi(2.0, 1000);
        e -= 1000;
    }
    while e < -1000 {
        r *= f64::powi(2.0, -1000);
        e += 1000;
    }
    r * f64::powi(2.0, e)
}

impl Neg for Interval {
    type Output = Interval;
    #[inline]
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Add for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: add_lo(self.lo, rhs.lo),
            hi: add_hi(self.hi, rhs.hi),
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    #[inline]
    fn sub(self, rhs: Interval) -> Interval {
        Interval {
            lo: add_lo(self.lo, -rhs.hi),
            hi: add_hi(self.hi, -rhs.lo),
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        // zero absorbs infinities: exact zero times anything is zero
        if (self.lo == 0.0 && self.hi == 0.0) || (rhs.lo == 0.0 && rhs.hi == 0.0) {
            return Interval::ZERO;
        }
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        let lo;
        let hi;
        if a >= 0.0 {
            if c >= 0.0 {
                lo = mul_lo(a, c);
                hi = mul_hi(b, d);
            } else if d <= 0.0 {
                lo = mul_lo(b, c);
                hi = mul_hi(a, d);
            } else {
                lo = mul_lo(b, c);
                hi = mul_hi(b, d);
            }
        } else if b <= 0.0 {
            if c >= 0.0 {
                lo = mul_lo(a, d);
                hi = mul_hi(b, c);
            } else if d <= 0.0 {
                lo = mul_lo(b, d);
                hi = mul_hi(a, c);
            } else {
                lo = mul_lo(a, d);
                hi = mul_hi(a, c);
            }
        } else if c >= 0.0 {
            lo = mul_lo(a, d);
            hi = mul_hi(b, d);
        } else if d <= 0.0 {
            lo = mul_lo(b, c);
            hi = mul_hi(a, c);
        } else {
            lo = f64::min(mul_lo(a, d), mul_lo(b, c));
            hi = f64::max(mul_hi(a, c), mul_hi(b, d));
        }
        Interval { lo, hi }
    }
}

impl Div for Interval {
    type Output = Interval;
    fn div(self, rhs: Interval) -> Interval {
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        if c > 0.0 {
            let lo = if a >= 0.0 { div_lo(a, d) } else { div_lo(a, c) };
            let hi = if b <= 0.0 { div_hi(b, d) } else { div_hi(b, c) };
            Interval { lo, hi }
        } else if d < 0.0 {
            let lo = if b <= 0.0 { div_lo(b, c) } else { div_lo(b, d) };
            let hi = if a >= 0.0 { div_hi(a, c) } else { div_hi(a, d) };
            Interval { lo, hi }
        } else {
            // divisor contains zero; checked call sites reject this first
            Interval::ENTIRE
        }
    }
}

macro_rules! impl_assign {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Interval {
            #[inline]
            fn $method(&mut self, rhs: Interval) {
                *self = *self $op rhs;
            }
        }
    };
}
impl_assign!(AddAssign, add_assign, +);
impl_assign!(SubAssign, sub_assign, -);
impl_assign!(MulAssign, mul_assign, *);
impl_assign!(DivAssign, div_assign, /);

impl From<f64> for Interval {
    fn from(x: f64) -> Interval {
        Interval::point(x)
    }
}

impl From<i32> for Interval {
    fn from(n: i32) -> Interval {
        Interval::point(n as f64)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_endpoints_stay_exact() {
        let a = Interval::new(0.0, 1.0);
        let b = Interval::new(2.0, 3.0);
        assert_eq!(a + b, Interval::new(2.0, 4.0));
        assert_eq!(Interval::point(1.0) + b, Interval::new(3.0, 4.0));
    }

    #[test]
    fn endpoint_products() {
        let a = Interval::new(-1.0, 2.0);
        let b = Interval::new(-3.0, 4.0);
        assert_eq!(a * b, Interval::new(-6.0, 8.0));
    }

    #[test]
    fn exact_reciprocals() {
        let r = Interval::ONE / Interval::new(2.0, 4.0);
        assert_eq!(r, Interval::new(0.25, 0.5));
    }

    #[test]
    fn outward_rounding_on_inexact() {
        let a = Interval::point(0.1);
        let b = Interval::point(0.2);
        let s = a + b;
        assert!(s.lo() < 0.1 + 0.2 || s.hi() > 0.1 + 0.2 || s.contains(0.3));
        assert!(s.lo() <= 0.3 && 0.3 <= s.hi() || s.width() > 0.0);
        // 0.1 + 0.2 rounds; interval must have positive width or be provably
        // containing the real sum. The real sum is within 1 ulp of the f64
        // sum, so width <= 2 ulp is also required.
        assert!(s.width() <= 2.0 * (0.3f64).next_up().next_up() - 0.6);
    }

    #[test]
    fn division_by_zero_interval_checked() {
        let a = Interval::new(1.0, 2.0);
        assert!(a.div_checked(&Interval::new(-1.0, 1.0)).is_err());
    }

    #[test]
    fn sqrt_exact() {
        let s = Interval::new(4.0, 9.0).sqrt().unwrap();
        assert_eq!(s, Interval::new(2.0, 3.0));
    }

    #[test]
    fn even_power_tight() {
        let x = Interval::new(-2.0, 1.0);
        assert_eq!(x.sqr(), Interval::new(0.0, 4.0));
        assert_eq!(x.powi(2), Interval::new(0.0, 4.0));
    }

    #[test]
    fn mid_rad_cover() {
        let x = Interval::new(1.0, 2.0);
        let m = x.mid();
        let r = x.rad();
        assert!(m - r <= 1.0 && 2.0 <= m + r);
    }
}
