//! Rectangular complex interval boxes.
//!
//! Multiplication is plain rectangular (four real products); log and powers
//! use the principal branch and reject boxes crossing the cut instead of
//! splitting them.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::elem;
use crate::real::Interval;
use crate::IvError;

#[derive(Clone, Copy, PartialEq)]
pub struct Complex {
    pub re: Interval,
    pub im: Interval,
}

impl Complex {
    pub const ZERO: Complex = Complex {
        re: Interval::ZERO,
        im: Interval::ZERO,
    };
    pub const ONE: Complex = Complex {
        re: Interval::ONE,
        im: Interval::ZERO,
    };
    pub const I: Complex = Complex {
        re: Interval::ZERO,
        im: Interval::ONE,
    };

    #[inline]
    pub fn new(re: Interval, im: Interval) -> Complex {
        Complex { re, im }
    }

    #[inline]
    pub fn real(re: Interval) -> Complex {
        Complex {
            re,
            im: Interval::ZERO,
        }
    }

    #[inline]
    pub fn point(re: f64, im: f64) -> Complex {
        Complex {
            re: Interval::point(re),
            im: Interval::point(im),
        }
    }

    /// Centered disk as the smallest covering box.
    pub fn disk(radius: f64) -> Complex {
        Complex {
            re: Interval::symmetric(radius),
            im: Interval::symmetric(radius),
        }
    }

    #[inline]
    pub fn conj(&self) -> Complex {
        Complex {
            re: self.re,
            im: -self.im,
        }
    }

    pub fn mid(&self) -> (f64, f64) {
        (self.re.mid(), self.im.mid())
    }

    /// |z|^2 as a real interval.
    pub fn norm_sqr(&self) -> Interval {
        self.re.sqr() + self.im.sqr()
    }

    /// |z| >= 0 as a real interval.
    pub fn abs(&self) -> Interval {
        self.norm_sqr().sqrt().expect("norm_sqr is nonnegative")
    }

    pub fn contains(&self, re: f64, im: f64) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    pub fn contains_box(&self, other: &Complex) -> bool {
        self.re.contains_interval(&other.re) && self.im.contains_interval(&other.im)
    }

    pub fn hull(&self, other: &Complex) -> Complex {
        Complex {
            re: self.re.hull(&other.re),
            im: self.im.hull(&other.im),
        }
    }

    pub fn intersect(&self, other: &Complex) -> Option<Complex> {
        Some(Complex {
            re: self.re.intersect(&other.re)?,
            im: self.im.intersect(&other.im)?,
        })
    }

    /// Largest coordinate width.
    pub fn width(&self) -> f64 {
        self.re.width().max(self.im.width())
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn scale(&self, s: Interval) -> Complex {
        Complex {
            re: self.re * s,
            im: self.im * s,
        }
    }

    pub fn recip(&self) -> Result<Complex, IvError> {
        let n = self.norm_sqr();
        if n.contains(0.0) {
            return Err(IvError::Domain("reciprocal of box containing zero"));
        }
        Ok(Complex {
            re: self.re / n,
            im: -self.im / n,
        })
    }

    pub fn div_checked(&self, rhs: &Complex) -> Result<Complex, IvError> {
        let n = rhs.norm_sqr();
        if n.contains(0.0) {
            return Err(IvError::Domain("division by box containing zero"));
        }
        let num = *self * rhs.conj();
        Ok(Complex {
            re: num.re / n,
            im: num.im / n,
        })
    }

    pub fn exp(&self) -> Complex {
        let r = elem::exp(self.re);
        Complex {
            re: r * elem::cos(self.im),
            im: r * elem::sin(self.im),
        }
    }

    /// Principal log; rejects boxes touching the cut (-inf, 0].
    pub fn ln(&self) -> Result<Complex, IvError> {
        if self.im.contains(0.0) && self.re.lo() <= 0.0 {
            return Err(IvError::Domain("log of box crossing the branch cut"));
        }
        let modulus = elem::ln(self.norm_sqr())?.ldexp(-1);
        let arg = elem::atan2(self.im, self.re)?;
        Ok(Complex {
            re: modulus,
            im: arg,
        })
    }

    /// Principal argument.
    pub fn arg(&self) -> Result<Interval, IvError> {
        elem::atan2(self.im, self.re)
    }

    /// Principal-branch complex power z^w = exp(w log z).
    pub fn powc(&self, w: &Complex) -> Result<Complex, IvError> {
        Ok((*w * self.ln()?).exp())
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, n: i32) -> Result<Complex, IvError> {
        if n == 0 {
            return Ok(Complex::ONE);
        }
        if n < 0 {
            return self.powi(-n)?.recip();
        }
        let mut base = *self;
        let mut n = n as u32;
        let mut acc = Complex::ONE;
        loop {
            if n & 1 == 1 {
                acc = acc * base;
            }
            n >>= 1;
            if n == 0 {
                break;
            }
            base = base * base;
        }
        Ok(acc)
    }

    /// Principal square root via exp(log/2).
    pub fn sqrt(&self) -> Result<Complex, IvError> {
        let l = self.ln()?;
        Ok(l.scale(Interval::point(0.5)).exp())
    }

    pub fn sin(&self) -> Complex {
        // sin(x+iy) = sin x cosh y + i cos x sinh y
        let (sh, ch) = sinh_cosh(self.im);
        Complex {
            re: elem::sin(self.re) * ch,
            im: elem::cos(self.re) * sh,
        }
    }

    pub fn cos(&self) -> Complex {
        let (sh, ch) = sinh_cosh(self.im);
        Complex {
            re: elem::cos(self.re) * ch,
            im: -elem::sin(self.re) * sh,
        }
    }
}

fn sinh_cosh(x: Interval) -> (Interval, Interval) {
    let e = elem::exp(x);
    let en = elem::exp(-x);
    ((e - en).ldexp(-1), (e + en).ldexp(-1))
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Add for Complex {
    type Output = Complex;
    fn add(self, rhs: Complex) -> Complex {
        Complex {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for Complex {
    type Output = Complex;
    fn sub(self, rhs: Complex) -> Complex {
        Complex {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for Complex {
    type Output = Complex;
    fn mul(self, rhs: Complex) -> Complex {
        Complex {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl Div for Complex {
    type Output = Complex;
    fn div(self, rhs: Complex) -> Complex {
        self.div_checked(&rhs)
            .expect("complex division by box containing zero")
    }
}

impl AddAssign for Complex {
    fn add_assign(&mut self, rhs: Complex) {
        *self = *self + rhs;
    }
}

impl SubAssign for Complex {
    fn sub_assign(&mut self, rhs: Complex) {
        *self = *self - rhs;
    }
}

impl MulAssign for Complex {
    fn mul_assign(&mut self, rhs: Complex) {
        *self = *self * rhs;
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?} i)", self.re, self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abs_three_four_five() {
        let z = Complex::point(3.0, 4.0);
        let a = z.abs();
        assert!(a.contains(5.0));
        assert!(a.width() < 1e-14);
    }

    #[test]
    fn mul_i_squared() {
        let z = Complex::I * Complex::I;
        assert!(z.re.contains(-1.0) && z.im.contains(0.0));
        assert_eq!(z.re, Interval::point(-1.0));
    }

    #[test]
    fn exp_log_roundtrip() {
        let z = Complex::point(0.3, -1.2);
        let l = z.ln().unwrap();
        let back = l.exp();
        assert!(back.contains(0.3, -1.2));
    }

    #[test]
    fn log_branch_cut_rejected() {
        let z = Complex::new(Interval::new(-2.0, -1.0), Interval::new(-0.1, 0.1));
        assert!(z.ln().is_err());
    }

    #[test]
    fn powc_identity() {
        let z = Complex::point(2.0, 1.0);
        let p = z.powc(&Complex::ONE).unwrap();
        assert!(p.contains(2.0, 1.0));
    }

    #[test]
    fn powi_matches_mul() {
        let z = Complex::point(1.2, -0.7);
        let p3 = z.powi(3).unwrap();
        let m3 = z * z * z;
        assert!(p3.re.intersect(&m3.re).is_some());
        assert!(p3.im.intersect(&m3.im).is_some());
    }

    #[test]
    fn division() {
        let z = Complex::point(1.0, 2.0);
        let w = Complex::point(3.0, -1.0);
        let q = z / w;
        let back = q * w;
        assert!(back.contains(1.0, 2.0));
    }
}
