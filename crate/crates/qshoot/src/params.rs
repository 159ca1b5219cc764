//! The parameter bundle for the profile equation and the weighted norm.

use ival::{Complex, Interval};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Parameters of the profile equation together with the matching point and
/// norm weight. All scalar fields are interval-valued so that whole parameter
/// boxes can be pushed through every computation.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Params {
    /// Coefficient of the decaying solution at infinity.
    pub gamma: Complex,
    pub kappa: Interval,
    pub omega: Interval,
    pub epsilon: Interval,
    pub delta: Interval,
    pub sigma: Interval,
    /// Spatial dimension.
    pub d: u32,
    /// Weight of the norm sup |xi^(1/sigma - v) u(xi)|.
    pub v: Interval,
    /// Matching point.
    pub xi1: Interval,
}

impl Params {
    /// Validate the standing hypotheses: kappa > 0, epsilon >= 0, sigma > 0,
    /// xi1 > 1, v > 0, (2 sigma + 1) v < 2 + 2/sigma - d and 2/d < sigma.
    pub fn validate(&self) -> Result<()> {
        if !(self.kappa.lo() > 0.0) {
            return Err(Error::Domain("kappa must be positive".into()));
        }
        if !(self.epsilon.lo() >= 0.0) {
            return Err(Error::Domain("epsilon must be nonnegative".into()));
        }
        if !(self.sigma.lo() > 0.0) {
            return Err(Error::Domain("sigma must be positive".into()));
        }
        if !(self.xi1.lo() > 1.0) {
            return Err(Error::Domain("xi1 must exceed 1".into()));
        }
        if !(self.v.lo() > 0.0) {
            return Err(Error::Hypothesis("norm weight v must be positive".into()));
        }
        let two = Interval::from(2);
        let lhs = (two * self.sigma + Interval::ONE) * self.v;
        let rhs = two + two / self.sigma - Interval::from(self.d as i32);
        if !(lhs.hi() < rhs.lo()) {
            return Err(Error::Hypothesis(
                "(2 sigma + 1) v < 2 + 2/sigma - d fails".into(),
            ));
        }
        if !((two / Interval::from(self.d as i32)).hi() < self.sigma.lo()) {
            return Err(Error::Hypothesis("2/d < sigma fails".into()));
        }
        Ok(())
    }

    /// Same parameters at the box midpoints (thin intervals).
    pub fn midpoint(&self) -> Params {
        Params {
            gamma: Complex::point(self.gamma.re.mid(), self.gamma.im.mid()),
            kappa: Interval::point(self.kappa.mid()),
            omega: Interval::point(self.omega.mid()),
            epsilon: Interval::point(self.epsilon.mid()),
            delta: Interval::point(self.delta.mid()),
            sigma: self.sigma,
            d: self.d,
            v: self.v,
            xi1: self.xi1,
        }
    }

    /// Exponent helper (2 sigma + 1) v.
    pub fn sv(&self) -> Interval {
        (Interval::from(2) * self.sigma + Interval::ONE) * self.v
    }
}
