//! The matching map between the solution from zero and the solution from
//! infinity, its interval Jacobian, the interval Newton certificate, and the
//! monotone-interval count of |Q|.

use ival::{linear_solve, Complex, Interval, IntervalMatrix};
use serde::{Deserialize, Serialize};

use crate::coeffs::coefficient_table;
use crate::params::Params;
use crate::qinf::{self, MonotonicityTail};
use crate::qzero::{self, IntegrateOptions};
use crate::{Error, Result};

/// Which parameter is held fixed; the four Newton unknowns are mu, Re gamma,
/// Im gamma and the remaining one of kappa/epsilon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FreeVars {
    FixEpsilon,
    FixKappa,
}

/// A point (or box) in the matching variable space.
#[derive(Clone, Copy, Debug)]
pub struct MatchVars {
    pub mu: Interval,
    pub gamma: Complex,
    pub kappa: Interval,
    pub epsilon: Interval,
}

impl MatchVars {
    pub fn from_params(p: &Params, mu: Interval) -> MatchVars {
        MatchVars {
            mu,
            gamma: p.gamma,
            kappa: p.kappa,
            epsilon: p.epsilon,
        }
    }

    pub fn apply(&self, base: &Params) -> Params {
        let mut p = *base;
        p.gamma = self.gamma;
        p.kappa = self.kappa;
        p.epsilon = self.epsilon;
        p
    }

    /// The four free coordinates in Newton order.
    pub fn free_box(&self, fv: FreeVars) -> [Interval; 4] {
        let last = match fv {
            FreeVars::FixEpsilon => self.kappa,
            FreeVars::FixKappa => self.epsilon,
        };
        [self.mu, self.gamma.re, self.gamma.im, last]
    }

    /// Rebuild from free coordinates, keeping the fixed variable from self.
    /// Boxes dipping into mu <= 0 are clamped; the flag is reported.
    pub fn with_free_box(&self, x: &[Interval; 4], fv: FreeVars) -> (MatchVars, bool) {
        let mut clamped = false;
        let mu = if x[0].lo() <= 0.0 {
            clamped = true;
            Interval::new(f64::MIN_POSITIVE, x[0].hi().max(f64::MIN_POSITIVE * 2.0))
        } else {
            x[0]
        };
        let mut out = *self;
        out.mu = mu;
        out.gamma = Complex::new(x[1], x[2]);
        match fv {
            FreeVars::FixEpsilon => out.kappa = x[3],
            FreeVars::FixKappa => out.epsilon = x[3],
        }
        (out, clamped)
    }

    pub fn midpoint(&self) -> MatchVars {
        MatchVars {
            mu: Interval::point(self.mu.mid()),
            gamma: Complex::point(self.gamma.re.mid(), self.gamma.im.mid()),
            kappa: Interval::point(self.kappa.mid()),
            epsilon: Interval::point(self.epsilon.mid()),
        }
    }
}

/// Value and Jacobian of the matching map at a point/box.
#[derive(Clone, Debug)]
pub struct GValue {
    /// (Re dQ, Im dQ, Re dQ', Im dQ') with dQ = Q0 - Qinf at xi1
    pub value: [Interval; 4],
    /// columns ordered (mu, Re gamma, Im gamma, kappa or epsilon)
    pub jac: IntervalMatrix,
}

/// Expansion length used for the asymptotic machinery.
const EXPANSION_N: usize = 5;

/// Evaluate the matching map and its Jacobian over the given variables.
pub fn eval_g(base: &Params, vars: &MatchVars, fv: FreeVars, opts: &IntegrateOptions) -> Result<GValue> {
    let p = vars.apply(base);
    p.validate()?;
    // solution from infinity at xi1
    let ct = coefficient_table(&p, EXPANSION_N)?;
    let con = qinf::fixed_point_radius(&p, &ct)?;
    let nb = qinf::norm_bounds(&p, &ct, &con)?;
    let qi = qinf::q_inf_enclosure(&p, &ct, &nb)?;
    // solution from zero at xi1
    let q0 = qzero::solve_from_zero(&p, vars.mu, p.xi1.mid(), opts)?;

    let dq_val = q0.q - qi.q;
    let dq_der = q0.dq - qi.dq;
    let value = [dq_val.re, dq_val.im, dq_der.re, dq_der.im];

    // columns: d/dmu from the zero side only; gamma block from the infinity
    // side with the analytic structure; kappa/epsilon from both sides
    let col_mu = [q0.q_mu.re, q0.q_mu.im, q0.dq_mu.re, q0.dq_mu.im];
    let g_v = qi.q_gamma;
    let g_d = qi.dq_gamma;
    let col_regamma = [-g_v.re, -g_v.im, -g_d.re, -g_d.im];
    let col_imgamma = [g_v.im, -g_v.re, g_d.im, -g_d.re];
    let (dpar_v, dpar_d) = match fv {
        FreeVars::FixEpsilon => (q0.q_kappa - qi.q_kappa, q0.dq_kappa - qi.dq_kappa),
        FreeVars::FixKappa => (q0.q_eps - qi.q_eps, q0.dq_eps - qi.dq_eps),
    };
    let col_par = [dpar_v.re, dpar_v.im, dpar_d.re, dpar_d.im];

    let mut jac = IntervalMatrix::zeros(4, 4);
    for r in 0..4 {
        jac[(r, 0)] = col_mu[r];
        jac[(r, 1)] = col_regamma[r];
        jac[(r, 2)] = col_imgamma[r];
        jac[(r, 3)] = col_par[r];
    }
    Ok(GValue { value, jac })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NewtonStatus {
    UniqueZero,
    NoZero,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct NewtonResult {
    pub status: NewtonStatus,
    /// Newton image: contains the zero when status is UniqueZero.
    pub existence: [Interval; 4],
    /// the candidate box: contains at most one zero when UniqueZero.
    pub uniqueness: [Interval; 4],
    /// G at the midpoint used for the test.
    pub g_residual: [Interval; 4],
    pub mu_clamped: bool,
}

/// Newton test for a generic 4-dim map: `eval` returns G(mid X) and an
/// enclosure of the Jacobian over X.
pub fn newton_test<F>(x: &[Interval; 4], eval: F) -> Result<NewtonResult>
where
    F: Fn(&[Interval; 4]) -> Result<([Interval; 4], IntervalMatrix)>,
{
    let (g_mid, jac) = eval(x)?;
    let correction = match linear_solve(&jac, &g_mid) {
        Ok(c) => c,
        Err(_) => {
            return Ok(NewtonResult {
                status: NewtonStatus::Inconclusive,
                existence: *x,
                uniqueness: *x,
                g_residual: g_mid,
                mu_clamped: false,
            })
        }
    };
    let mut image = [Interval::ZERO; 4];
    let mut proper = true;
    let mut disjoint = false;
    for i in 0..4 {
        image[i] = Interval::point(x[i].mid()) - correction[i];
        if !x[i].contains_strict(&image[i]) {
            proper = false;
        }
        if x[i].is_disjoint(&image[i]) {
            disjoint = true;
        }
    }
    let status = if proper {
        NewtonStatus::UniqueZero
    } else if disjoint {
        NewtonStatus::NoZero
    } else {
        NewtonStatus::Inconclusive
    };
    Ok(NewtonResult {
        status,
        existence: image,
        uniqueness: *x,
        g_residual: g_mid,
        mu_clamped: false,
    })
}

/// The matching-map Newton test on a box of free variables.
pub fn interval_newton(
    x: &[Interval; 4],
    base: &Params,
    fixed: &MatchVars,
    fv: FreeVars,
    opts: &IntegrateOptions,
) -> Result<NewtonResult> {
    let (vars_box, clamped) = fixed.with_free_box(x, fv);
    let mut result = newton_test(x, |bx| {
        let (vars, _) = fixed.with_free_box(bx, fv);
        let mid = MatchVars {
            // midpoint over the free variables only; the fixed variable
            // keeps its (possibly interval) value
            mu: Interval::point(vars.mu.mid()),
            gamma: Complex::point(vars.gamma.re.mid(), vars.gamma.im.mid()),
            kappa: match fv {
                FreeVars::FixEpsilon => Interval::point(vars.kappa.mid()),
                FreeVars::FixKappa => vars.kappa,
            },
            epsilon: match fv {
                FreeVars::FixEpsilon => vars.epsilon,
                FreeVars::FixKappa => Interval::point(vars.epsilon.mid()),
            },
        };
        let g_mid = eval_g(base, &mid, fv, opts)?;
        let g_box = eval_g(base, &vars, fv, opts)?;
        Ok((g_mid.value, g_box.jac))
    })?;
    let _ = vars_box;
    result.mu_clamped = clamped;
    Ok(result)
}

/// Search for a verified box around an approximate zero: inflate the Newton
/// image until the contraction condition holds, then grow the uniqueness box
/// geometrically while it keeps holding.
pub fn find_box(
    approx: &MatchVars,
    base: &Params,
    fv: FreeVars,
    opts: &IntegrateOptions,
) -> Result<NewtonResult> {
    let mut x = approx.free_box(fv);
    let mut last: Option<NewtonResult> = None;
    for _ in 0..25 {
        let res = interval_newton(&x, base, approx, fv, opts)?;
        match res.status {
            NewtonStatus::UniqueZero => {
                last = Some(res);
                break;
            }
            NewtonStatus::NoZero => return Ok(res),
            NewtonStatus::Inconclusive => {
                // inflate the Newton image and retry; the image of a thin
                // box already has the scale of the achievable enclosure
                let source = res.existence;
                let mut grown = [Interval::ZERO; 4];
                for i in 0..4 {
                    grown[i] = source[i].hull(&x[i]).inflate(1.2, 1e-14);
                }
                x = grown;
            }
        }
    }
    let mut best = match last {
        Some(r) => r,
        None => {
            return Ok(NewtonResult {
                status: NewtonStatus::Inconclusive,
                existence: x,
                uniqueness: x,
                g_residual: [Interval::ZERO; 4],
                mu_clamped: false,
            })
        }
    };
    // grow the uniqueness box while the Newton condition survives
    for _ in 0..6 {
        let mut grown = [Interval::ZERO; 4];
        for i in 0..4 {
            grown[i] = best.uniqueness[i].inflate(3.0, 0.0);
        }
        match interval_newton(&grown, base, approx, fv, opts) {
            Ok(res) if res.status == NewtonStatus::UniqueZero => best = res,
            _ => break,
        }
    }
    Ok(best)
}

/// Count the monotone intervals of |Q| on (0, inf) for a verified zero.
///
/// The tail beyond xi2 is covered by the monotonicity certificate, the
/// near-zero cell by the sign of the second derivative, and each interior
/// sign change of d|Q|^2/dxi must be isolated by a definite-sign second
/// derivative across the undecided cells.
pub fn count_monotone_intervals(
    base: &Params,
    vars: &MatchVars,
    tail: &MonotonicityTail,
    opts: &IntegrateOptions,
) -> Result<usize> {
    let p = vars.apply(base);
    let curve = qzero::enclose_curve(&p, vars.mu, tail.xi2.hi(), opts)?;
    let mut sign_changes = 0usize;
    let mut current_sign: Option<bool> = None; // true = positive
    let mut pending: Vec<&qzero::CurveCell> = Vec::new();

    for cell in &curve.cells {
        let sign = if cell.d1.lo() > 0.0 {
            Some(true)
        } else if cell.d1.hi() < 0.0 {
            Some(false)
        } else {
            None
        };
        match sign {
            Some(s) => {
                if let Some(prev) = current_sign {
                    if !pending.is_empty() {
                        // a run of undecided cells: needs a definite second
                        // derivative throughout to isolate at most one zero
                        let mut d2 = pending[0].d2;
                        for c in &pending[1..] {
                            d2 = d2.hull(&c.d2);
                        }
                        if d2.contains(0.0) {
                            return Err(Error::CountInconclusive);
                        }
                        if prev != s {
                            sign_changes += 1;
                        }
                    } else if prev != s {
                        // adjacent definite cells of opposite sign without an
                        // undecided crossing cell: grid too coarse
                        return Err(Error::CountInconclusive);
                    }
                } else {
                    // leading run from the boundary zero at xi = 0: the
                    // second derivative must be definite and agree with the
                    // first definite sign
                    if !pending.is_empty() {
                        let mut d2 = pending[0].d2;
                        for c in &pending[1..] {
                            d2 = d2.hull(&c.d2);
                        }
                        if d2.contains(0.0) || (d2.lo() > 0.0) != s {
                            return Err(Error::CountInconclusive);
                        }
                    }
                }
                current_sign = Some(s);
                pending.clear();
            }
            None => pending.push(cell),
        }
    }
    if current_sign.is_none() {
        return Err(Error::CountInconclusive);
    }
    if !pending.is_empty() {
        // trailing undecided cells must be sign-consistent with the tail
        let mut d2 = pending[0].d2;
        for c in &pending[1..] {
            d2 = d2.hull(&c.d2);
        }
        if d2.contains(0.0) {
            return Err(Error::CountInconclusive);
        }
    }
    Ok(1 + sign_changes)
}

/// Everything a certificate needs about one verified zero.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub case: String,
    pub j: usize,
    pub fv_mode: FreeVars,
    pub xi1: f64,
    pub status: NewtonStatus,
    pub existence_box: Vec<Interval>,
    pub uniqueness_box: Vec<Interval>,
    pub g_residual: Vec<Interval>,
    pub monotone_count: Option<usize>,
    pub mu_clamped: bool,
    pub wall_time_s: f64,
    pub params: Params,
    pub version: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cases;

    #[test]
    fn zero_mu_zero_gamma_gives_zero_g() {
        let mut base = cases::case2_params(1).unwrap();
        base.gamma = Complex::ZERO;
        let vars = MatchVars::from_params(&base, Interval::ZERO);
        let opts = IntegrateOptions::default();
        // shrink the run: xi1 = 5 keeps it fast
        let mut b2 = base;
        b2.xi1 = Interval::point(5.0);
        let g = eval_g(&b2, &vars, FreeVars::FixEpsilon, &opts).unwrap();
        for (i, v) in g.value.iter().enumerate() {
            assert!(v.mag() < 1e-20, "component {i}: {v:?}");
        }
    }

    #[test]
    fn newton_test_on_linear_system() {
        // F(x) = A (x - r) with known root r: one Newton step from any box
        // containing r certifies it
        let root = [0.3, -0.7, 1.1, 0.05];
        let a = [
            [2.0, 0.1, 0.0, 0.3],
            [0.0, 1.5, 0.2, 0.0],
            [0.1, 0.0, 3.0, 0.0],
            [0.0, 0.2, 0.0, 1.0],
        ];
        let x0: [Interval; 4] = std::array::from_fn(|i| {
            Interval::new(root[i] - 0.5, root[i] + 0.5)
        });
        let res = newton_test(&x0, |bx| {
            let mid: Vec<f64> = bx.iter().map(|v| v.mid()).collect();
            let mut g = [Interval::ZERO; 4];
            for i in 0..4 {
                let mut acc = Interval::ZERO;
                for j in 0..4 {
                    acc += Interval::point(a[i][j])
                        * (Interval::point(mid[j]) - Interval::point(root[j]));
                }
                g[i] = acc;
            }
            let mut jac = IntervalMatrix::zeros(4, 4);
            for i in 0..4 {
                for j in 0..4 {
                    jac[(i, j)] = Interval::point(a[i][j]);
                }
            }
            Ok((g, jac))
        })
        .unwrap();
        assert_eq!(res.status, NewtonStatus::UniqueZero);
        for i in 0..4 {
            assert!(res.existence[i].contains(root[i]));
        }
    }

    #[test]
    fn newton_no_zero_far_away() {
        let res = newton_test(
            &[Interval::new(5.0, 5.1); 4],
            |bx| {
                let mid: Vec<f64> = bx.iter().map(|v| v.mid()).collect();
                let g = std::array::from_fn(|i| Interval::point(mid[i]));
                let jac = IntervalMatrix::identity(4);
                Ok((g, jac))
            },
        )
        .unwrap();
        assert_eq!(res.status, NewtonStatus::NoZero);
    }
}
