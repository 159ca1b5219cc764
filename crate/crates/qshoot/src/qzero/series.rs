//! Truncated power series with interval coefficients, used both for the
//! expansion at the removable singularity and for the integrator jets.

use ival::{elem, Interval};

use crate::{Error, Result};

/// Coefficients c[0..len) of a series in the local time variable.
#[derive(Clone, Debug)]
pub struct Jet {
    pub c: Vec<Interval>,
}

impl Jet {
    pub fn zeros(len: usize) -> Jet {
        Jet {
            c: vec![Interval::ZERO; len],
        }
    }

    pub fn constant(v: Interval, len: usize) -> Jet {
        let mut j = Jet::zeros(len);
        j.c[0] = v;
        j
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    /// Convolution coefficient n of self * other.
    pub fn conv_at(&self, other: &Jet, n: usize) -> Interval {
        let mut acc = Interval::ZERO;
        for k in 0..=n {
            acc += self.c[k] * other.c[n - k];
        }
        acc
    }

    pub fn mul_trunc(&self, other: &Jet, len: usize) -> Jet {
        let mut out = Jet::zeros(len);
        for (n, slot) in out.c.iter_mut().enumerate() {
            let mut acc = Interval::ZERO;
            for k in 0..=n {
                if k < self.len() && n - k < other.len() {
                    acc += self.c[k] * other.c[n - k];
                }
            }
            *slot = acc;
        }
        out
    }

    pub fn add(&self, other: &Jet) -> Jet {
        let len = self.len().max(other.len());
        let mut out = Jet::zeros(len);
        for n in 0..len {
            let a = if n < self.len() { self.c[n] } else { Interval::ZERO };
            let b = if n < other.len() { other.c[n] } else { Interval::ZERO };
            out.c[n] = a + b;
        }
        out
    }

    pub fn sub(&self, other: &Jet) -> Jet {
        let len = self.len().max(other.len());
        let mut out = Jet::zeros(len);
        for n in 0..len {
            let a = if n < self.len() { self.c[n] } else { Interval::ZERO };
            let b = if n < other.len() { other.c[n] } else { Interval::ZERO };
            out.c[n] = a - b;
        }
        out
    }

    pub fn scale(&self, s: Interval) -> Jet {
        Jet {
            c: self.c.iter().map(|x| *x * s).collect(),
        }
    }

    /// Evaluate at t by Horner.
    pub fn eval(&self, t: Interval) -> Interval {
        let mut acc = Interval::ZERO;
        for c in self.c.iter().rev() {
            acc = acc * t + *c;
        }
        acc
    }

    /// Evaluate the derivative series at t.
    pub fn eval_deriv(&self, t: Interval) -> Interval {
        let mut acc = Interval::ZERO;
        for (n, c) in self.c.iter().enumerate().skip(1).rev() {
            acc = acc * t + *c * Interval::from(n as i32);
        }
        acc
    }

    /// Antiderivative coefficient shift: (int self)_n = self_(n-1) / n.
    pub fn integrate(&self, len: usize) -> Jet {
        let mut out = Jet::zeros(len);
        for n in 1..len {
            if n - 1 < self.len() {
                out.c[n] = self.c[n - 1] / Interval::from(n as i32);
            }
        }
        out
    }
}

/// w = v^s for a series v with v_0 strictly positive, by the standard power
/// recurrence n v_0 w_n = sum_(k=1..n) (k s - (n - k)) v_k w_(n-k).
/// An exactly-zero exponent yields the constant series 1.
pub fn real_power(v: &Jet, s: Interval, len: usize) -> Result<Jet> {
    if s == Interval::ZERO {
        return Ok(Jet::constant(Interval::ONE, len));
    }
    let v0 = v.c[0];
    if !(v0.lo() > 0.0) {
        return Err(Error::Domain(
            "series power needs a positive leading coefficient".into(),
        ));
    }
    let mut w = Jet::zeros(len);
    w.c[0] = elem::pow(v0, s)?;
    for n in 1..len {
        let mut acc = Interval::ZERO;
        for k in 1..=n {
            if k < v.len() {
                let coef = Interval::from(k as i32) * s - Interval::from((n - k) as i32);
                acc += coef * v.c[k] * w.c[n - k];
            }
        }
        w.c[n] = acc / (Interval::from(n as i32) * v0);
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_matches_poly() {
        // (1 + 2t)(3 - t) = 3 + 5t - 2t^2
        let a = Jet {
            c: vec![Interval::ONE, Interval::from(2)],
        };
        let b = Jet {
            c: vec![Interval::from(3), -Interval::ONE],
        };
        let p = a.mul_trunc(&b, 3);
        assert!(p.c[0].contains(3.0));
        assert!(p.c[1].contains(5.0));
        assert!(p.c[2].contains(-2.0));
    }

    #[test]
    fn power_of_square_series() {
        // v = (1 + t)^2 = 1 + 2t + t^2; v^(1/2) = 1 + t
        let v = Jet {
            c: vec![Interval::ONE, Interval::from(2), Interval::ONE, Interval::ZERO],
        };
        let w = real_power(&v, Interval::point(0.5), 4).unwrap();
        assert!(w.c[0].contains(1.0));
        assert!(w.c[1].contains(1.0));
        assert!(w.c[2].contains(0.0) && w.c[2].width() < 1e-14);
    }

    #[test]
    fn power_integer_matches_mul() {
        let v = Jet {
            c: vec![
                Interval::point(2.0),
                Interval::point(0.5),
                Interval::point(-0.25),
                Interval::ZERO,
                Interval::ZERO,
            ],
        };
        let w = real_power(&v, Interval::point(2.0), 5).unwrap();
        let direct = v.mul_trunc(&v, 5);
        for n in 0..5 {
            assert!(
                w.c[n].intersect(&direct.c[n]).is_some(),
                "coefficient {n}: {:?} vs {:?}",
                w.c[n],
                direct.c[n]
            );
        }
    }

    #[test]
    fn eval_and_deriv() {
        let j = Jet {
            c: vec![Interval::ONE, Interval::from(3), Interval::from(2)],
        };
        let t = Interval::point(0.5);
        assert!(j.eval(t).contains(1.0 + 1.5 + 0.5));
        assert!(j.eval_deriv(t).contains(3.0 + 2.0));
    }
}
