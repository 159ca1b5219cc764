//! Validated forward integration by high-order Taylor steps with a
//! Lohner-style set representation.
//!
//! The set is x_hat + C r (tight anchor, frame matrix, coordinate box). Each
//! accepted step (i) validates an a priori enclosure over the step by a
//! Picard check, (ii) advances the anchor with interval Taylor jets, (iii)
//! bounds the truncation with the order-(K+1) jet coefficient over the a
//! priori enclosure, and (iv) propagates the frame through the enclosed
//! variational monodromy with a QR re-factorization against wrapping.
//!
//! The three parameter-derivative quadruples obey linear equations sharing
//! the primary linearization, so their spread is propagated by the same
//! 4x4 monodromy block while their anchors absorb the primary's set width
//! through wide-coefficient jets.

use ival::{linear_solve, Interval, IntervalMatrix};

use crate::params::Params;
use crate::qzero::field::{self, primary_jets, rhs, variational_jets, Inhom, DIM};
use crate::qzero::CurveCell;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct IntegrateOptions {
    /// Taylor order of each step.
    pub order: usize,
    /// initial step size
    pub h0: f64,
    /// relative width target for the per-step truncation remainder
    pub tol: f64,
    /// budget of step halvings before declaring blowup
    pub max_halvings: u32,
    /// expansion point for the Taylor bridge across the singularity (d > 1)
    pub xi0: f64,
    /// truncation order of the Taylor bridge
    pub taylor_n: usize,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions {
            order: 20,
            h0: 0.05,
            tol: 1e-14,
            max_halvings: 40,
            xi0: 0.01,
            taylor_n: 20,
        }
    }
}

/// Lohner set: xi + x_hat + frame * r.
#[derive(Clone, Debug)]
pub struct IntegratorState {
    pub xi: Interval,
    x_hat: Vec<Interval>,
    frame: Vec<Vec<Interval>>,
    r: Vec<Interval>,
}

impl IntegratorState {
    pub fn new(xi: Interval, y: [Interval; DIM]) -> IntegratorState {
        let x_hat: Vec<Interval> = y.iter().map(|v| Interval::point(v.mid())).collect();
        let mut frame = vec![vec![Interval::ZERO; DIM]; DIM];
        for (i, row) in frame.iter_mut().enumerate() {
            row[i] = Interval::ONE;
        }
        let r: Vec<Interval> = y
            .iter()
            .zip(&x_hat)
            .map(|(v, m)| *v - *m)
            .collect();
        IntegratorState {
            xi,
            x_hat,
            frame,
            r,
        }
    }

    /// Full interval enclosure of the represented set.
    pub fn enclosure(&self) -> [Interval; DIM] {
        let mut out = [Interval::ZERO; DIM];
        for i in 0..DIM {
            let mut acc = self.x_hat[i];
            for j in 0..DIM {
                acc += self.frame[i][j] * self.r[j];
            }
            out[i] = acc;
        }
        out
    }

    /// Width diagnostic: largest component width of the enclosure.
    pub fn width(&self) -> f64 {
        self.enclosure().iter().map(|v| v.width()).fold(0.0, f64::max)
    }
}

/// A priori enclosure of the full system over [0, h] by a Picard check.
fn a_priori(
    p: &Params,
    xi: Interval,
    x_full: &[Interval; DIM],
    h: f64,
) -> Result<[Interval; DIM]> {
    let xi_range = xi.hull(&(xi + Interval::point(h)));
    let hspan = Interval::new(0.0, h);
    let mut guess = *x_full;
    // initial inflation from a forward Euler probe
    let f0 = rhs(p, xi_range, x_full)?;
    for (g, f) in guess.iter_mut().zip(&f0) {
        *g = g.hull(&(*g + hspan * *f));
        *g = g.inflate(1.1, 1e-14 + 1e-10 * g.mag());
    }
    for _ in 0..12 {
        let f = rhs(p, xi_range, &guess)?;
        let mut ok = true;
        let mut cand = [Interval::ZERO; DIM];
        for i in 0..DIM {
            cand[i] = x_full[i] + hspan * f[i];
            if !guess[i].contains_interval(&cand[i]) {
                ok = false;
            }
        }
        if ok {
            return Ok(guess);
        }
        for i in 0..DIM {
            guess[i] = cand[i].inflate(1.2, 1e-14 + 1e-10 * cand[i].mag());
        }
    }
    Err(Error::IntegrationBlowup(xi.mid()))
}

/// Evaluate a jet family at h, returning the truncated sum (through `order`).
fn eval_jets(jets: &[&crate::qzero::series::Jet], h: f64, order: usize) -> Vec<Interval> {
    let hi = Interval::point(h);
    jets.iter()
        .map(|j| {
            let mut acc = Interval::ZERO;
            for n in (0..=order.min(j.len() - 1)).rev() {
                acc = acc * hi + j.c[n];
            }
            acc
        })
        .collect()
}

struct StepData {
    value: [Interval; DIM],
    monodromy: [[Interval; 4]; 4],
    remainder_width: f64,
    curve: CurveCell,
}

/// One validated step of size h; returns the new anchor values, the 4x4
/// monodromy enclosure and diagnostics, or an error if validation failed.
fn try_step(
    p: &Params,
    st: &IntegratorState,
    h: f64,
    order: usize,
) -> Result<StepData> {
    let x_full = st.enclosure();
    let w = a_priori(p, st.xi, &x_full, h)?;
    let k1 = order + 1;

    // thin jets advance the primary anchor
    let prim_seed = [st.x_hat[0], st.x_hat[1], st.x_hat[2], st.x_hat[3]];
    let pj_thin = primary_jets(p, st.xi, &prim_seed, order)?;
    // set-seeded jets source the linearization coefficients: their width is
    // the set width, not the step's motion span
    let set_prim = [x_full[0], x_full[1], x_full[2], x_full[3]];
    let pj_set = primary_jets(p, st.xi, &set_prim, order)?;
    // a-priori-seeded jets feed only the order-(K+1) remainders, where the
    // motion-span width is crushed by h^(K+1)
    let w_prim = [w[0], w[1], w[2], w[3]];
    let pj_wide = primary_jets(p, st.xi, &w_prim, k1)?;

    // primary remainder: order-(K+1) coefficient over the a priori enclosure
    let hk1 = Interval::point(h).powi(k1 as i32);
    let mut value = [Interval::ZERO; DIM];
    let mut rem_width = 0.0f64;
    {
        let vals = eval_jets(
            &[&pj_thin.y[0], &pj_thin.y[1], &pj_thin.y[2], &pj_thin.y[3]],
            h,
            order,
        );
        for i in 0..4 {
            let rem = pj_wide.y[i].c[k1] * hk1;
            value[i] = vals[i] + rem;
            rem_width = rem_width.max(rem.width());
        }
    }

    // monodromy of the shared linear block: columns seeded at identity with
    // wide coefficients; remainder from identity-seeded columns over their
    // own a priori enclosure (crudely inflated by the Picard argument)
    let mut monodromy = [[Interval::ZERO; 4]; 4];
    for col in 0..4 {
        let mut seed = [Interval::ZERO; 4];
        seed[col] = Interval::ONE;
        let vj = variational_jets(p, &pj_set, &seed, Inhom::None, order)?;
        let vals = eval_jets(&[&vj[0], &vj[1], &vj[2], &vj[3]], h, order);
        // a priori for the column: inflate the truncated column enclosure
        // over [0, h] and verify with one Picard pass of the linear system
        let col_ap = linear_column_apriori(p, &pj_wide, &seed, h)?;
        let vj_ap = variational_jets_seeded(p, &pj_wide, &col_ap, k1)?;
        for row in 0..4 {
            let rem = vj_ap[row].c[k1] * hk1;
            monodromy[row][col] = vals[row] + rem;
        }
    }

    // variational value quadruples: set-coefficient jets from the anchors
    for (block, inhom) in [(1, Inhom::None), (2, Inhom::Kappa), (3, Inhom::Epsilon)] {
        let seed = [
            st.x_hat[4 * block],
            st.x_hat[4 * block + 1],
            st.x_hat[4 * block + 2],
            st.x_hat[4 * block + 3],
        ];
        let vj = variational_jets(p, &pj_set, &seed, inhom, order)?;
        let vals = eval_jets(&[&vj[0], &vj[1], &vj[2], &vj[3]], h, order);
        let w_seed = [
            w[4 * block],
            w[4 * block + 1],
            w[4 * block + 2],
            w[4 * block + 3],
        ];
        let vj_w = variational_jets(p, &pj_wide, &w_seed, inhom, k1)?;
        for i in 0..4 {
            let rem = vj_w[i].c[k1] * hk1;
            value[4 * block + i] = vals[i] + rem;
            rem_width = rem_width.max(rem.width());
        }
    }

    // curve data over the step from the a priori enclosure
    let f_w = rhs(p, st.xi.hull(&(st.xi + Interval::point(h))), &w)?;
    let d1 = (w[0] * w[1] + w[2] * w[3]).ldexp(1);
    let d2 = (w[1].sqr() + w[3].sqr() + w[0] * f_w[1] + w[2] * f_w[3]).ldexp(1);
    let curve = CurveCell {
        xi_lo: st.xi.lo(),
        xi_hi: (st.xi + Interval::point(h)).hi(),
        d1,
        d2,
    };

    Ok(StepData {
        value,
        monodromy,
        remainder_width: rem_width,
        curve,
    })
}

/// A priori enclosure for one identity-seeded monodromy column of the shared
/// linear block.
fn linear_column_apriori(
    p: &Params,
    pj_wide: &field::PrimaryJets,
    seed: &[Interval; 4],
    h: f64,
) -> Result<[Interval; 4]> {
    let hspan = Interval::new(0.0, h);
    let mut guess = *seed;
    for g in guess.iter_mut() {
        *g = g.inflate(1.5, 1e-12);
    }
    for _ in 0..10 {
        // one derivative evaluation of the linear RHS at order 0
        let vj = variational_jets_seeded(p, pj_wide, &guess, 1)?;
        let mut ok = true;
        let mut cand = [Interval::ZERO; 4];
        for i in 0..4 {
            let deriv = vj[i].c[1]; // first jet coefficient = derivative
            cand[i] = seed[i] + hspan * deriv;
            if !guess[i].contains_interval(&cand[i]) {
                ok = false;
            }
        }
        if ok {
            return Ok(guess);
        }
        for i in 0..4 {
            guess[i] = cand[i].inflate(1.3, 1e-12);
        }
    }
    Err(Error::IntegrationBlowup(pj_wide.xi.c[0].mid()))
}

fn variational_jets_seeded(
    p: &Params,
    pj: &field::PrimaryJets,
    seed: &[Interval; 4],
    order: usize,
) -> Result<[crate::qzero::series::Jet; 4]> {
    variational_jets(p, pj, seed, Inhom::None, order)
}

/// QR factor of the midpoint matrix by modified Gram-Schmidt with column
/// pivoting kept implicit; returns an orthogonal-ish point matrix.
fn qr_orthogonal(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    // columns of m
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| m[i][j]).collect()).collect();
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = cols[j].clone();
        for qc in &q {
            let dot: f64 = v.iter().zip(qc).map(|(a, b)| a * b).sum();
            for (vi, qi) in v.iter_mut().zip(qc) {
                *vi -= dot * qi;
            }
        }
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-300 {
            // degenerate direction: fall back to a unit vector orthogonal to
            // the span so the frame stays invertible
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            for qc in &q {
                let dot: f64 = e.iter().zip(qc).map(|(a, b)| a * b).sum();
                for (vi, qi) in e.iter_mut().zip(qc) {
                    *vi -= dot * qi;
                }
            }
            let en: f64 = e.iter().map(|x| x * x).sum::<f64>().sqrt();
            v = e.iter().map(|x| x / en.max(1e-300)).collect();
        } else {
            for vi in v.iter_mut() {
                *vi /= norm;
            }
        }
        q.push(v);
        let _ = &mut cols;
    }
    // q holds columns; return as a row-major matrix
    (0..n)
        .map(|i| (0..n).map(|j| q[j][i]).collect())
        .collect()
}

/// Integrate to xi_end (xi_end > current xi), adapting the step size.
pub fn integrate(
    st: IntegratorState,
    p: &Params,
    xi_end: f64,
    opts: &IntegrateOptions,
) -> Result<IntegratorState> {
    let (state, _) = drive(st, p, xi_end, opts, false)?;
    Ok(state)
}

/// Integrate and collect per-step curve cells.
pub fn integrate_with_curve(
    st: IntegratorState,
    p: &Params,
    xi_end: f64,
    opts: &IntegrateOptions,
) -> Result<(IntegratorState, Vec<CurveCell>)> {
    drive(st, p, xi_end, opts, true)
}

fn drive(
    mut st: IntegratorState,
    p: &Params,
    xi_end: f64,
    opts: &IntegrateOptions,
    keep_curve: bool,
) -> Result<(IntegratorState, Vec<CurveCell>)> {
    let mut cells = Vec::new();
    let mut h = opts.h0;
    let mut halvings = 0u32;
    let mut steps = 0usize;
    while st.xi.hi() < xi_end {
        if steps > 500_000 {
            return Err(Error::IntegrationBlowup(st.xi.mid()));
        }
        let h_step = h.min(xi_end - st.xi.hi()).max(1e-12);
        match try_step(p, &st, h_step, opts.order) {
            Ok(data) => {
                let scale = data
                    .value
                    .iter()
                    .map(|v| v.mag())
                    .fold(1.0f64, f64::max);
                if data.remainder_width > opts.tol * scale && h_step > 1e-9 {
                    h = h_step * 0.5;
                    halvings += 1;
                    if halvings > opts.max_halvings {
                        return Err(Error::IntegrationBlowup(st.xi.mid()));
                    }
                    continue;
                }
                commit_step(&mut st, &data, h_step)?;
                steps += 1;
                halvings = 0;
                if keep_curve {
                    cells.push(data.curve);
                }
                if data.remainder_width < 0.1 * opts.tol * scale {
                    h = (h_step * 1.4).min(opts.h0 * 8.0);
                } else {
                    h = h_step;
                }
            }
            Err(Error::IntegrationBlowup(_)) | Err(Error::Domain(_)) => {
                h = h_step * 0.5;
                halvings += 1;
                if halvings > opts.max_halvings {
                    return Err(Error::IntegrationBlowup(st.xi.mid()));
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok((st, cells))
}

/// Fold a validated step into the set representation with the QR frame.
fn commit_step(st: &mut IntegratorState, data: &StepData, h: f64) -> Result<()> {
    // block-diagonal monodromy applied to the old frame
    let mut mc = vec![vec![Interval::ZERO; DIM]; DIM];
    for block in 0..4 {
        for i in 0..4 {
            for j in 0..DIM {
                let mut acc = Interval::ZERO;
                for k in 0..4 {
                    acc += data.monodromy[i][k] * st.frame[4 * block + k][j];
                }
                mc[4 * block + i][j] = acc;
            }
        }
    }
    // new anchor and residual
    let mut new_hat = Vec::with_capacity(DIM);
    let mut delta = Vec::with_capacity(DIM);
    for i in 0..DIM {
        let m = Interval::point(data.value[i].mid());
        new_hat.push(m);
        delta.push(data.value[i] - m);
    }
    // QR of mid(mc) for the new frame
    let mid: Vec<Vec<f64>> = (0..DIM)
        .map(|i| (0..DIM).map(|j| mc[i][j].mid()).collect())
        .collect();
    let q = qr_orthogonal(&mid);
    let q_iv = IntervalMatrix::from_rows(
        &q.iter()
            .map(|row| row.iter().map(|x| Interval::point(*x)).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    );
    // classical ordering: contract with r only after the frame change, so a
    // near-rotation step costs no width. B = Q^-1 (M C) stays near upper
    // triangular with unit-size rows.
    let delta_w: f64 = delta.iter().map(|x| x.width()).fold(0.0f64, f64::max);
    let mut b = vec![vec![Interval::ZERO; DIM]; DIM];
    for col in 0..DIM {
        let col_vec: Vec<Interval> = (0..DIM).map(|i| mc[i][col]).collect();
        let solved = linear_solve(&q_iv, &col_vec).map_err(|_| Error::SingularEnclosure)?;
        for (i, v) in solved.into_iter().enumerate() {
            b[i][col] = v;
        }
    }
    let delta_solved = linear_solve(&q_iv, &delta).map_err(|_| Error::SingularEnclosure)?;
    let mut new_r = delta_solved;
    for i in 0..DIM {
        let mut acc = new_r[i];
        for j in 0..DIM {
            acc += b[i][j] * st.r[j];
        }
        new_r[i] = acc;
    }
    if std::env::var("LOHNER_TRACE").is_ok() {
        let wmax = |v: &[Interval]| v.iter().map(|x| x.width()).fold(0.0f64, f64::max);
        let mmax = |m: &[Vec<Interval>]| {
            m.iter().flatten().map(|x| x.width()).fold(0.0f64, f64::max)
        };
        eprintln!(
            "xi={:8.4} h={:7.1e} w(r)={:9.2e} w(r')={:9.2e} w(delta)={:9.2e} w(MC)={:9.2e} w(B)={:9.2e}",
            st.xi.mid(), h, wmax(&st.r), wmax(&new_r), delta_w, mmax(&mc), mmax(&b)
        );
    }
    st.x_hat = new_hat;
    st.frame = q.iter()
        .map(|row| row.iter().map(|x| Interval::point(*x)).collect())
        .collect();
    st.r = new_r;
    st.xi = st.xi + Interval::point(h);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cases;

    #[test]
    fn zero_mu_integrates_to_zero() {
        let p = cases::case2_params(1).unwrap();
        let mut y = [Interval::ZERO; DIM];
        y[4] = Interval::ONE;
        let st = IntegratorState::new(Interval::point(0.01), y);
        let opts = IntegrateOptions::default();
        let end = integrate(st, &p, 1.0, &opts).unwrap();
        let enc = end.enclosure();
        for i in 0..4 {
            assert!(enc[i].mag() < 1e-12, "component {i}: {:?}", enc[i]);
        }
        // the mu-variational moved away from its seed
        assert!(enc[4].mag() > 0.0);
    }

    #[test]
    fn short_case1_integration_stays_tight() {
        let p = cases::case1_params(1).unwrap();
        let mut y = [Interval::ZERO; DIM];
        y[0] = Interval::point(1.2320375232100302);
        y[4] = Interval::ONE;
        let st = IntegratorState::new(Interval::ZERO, y);
        let opts = IntegrateOptions::default();
        let end = integrate(st, &p, 2.0, &opts).unwrap();
        let enc = end.enclosure();
        assert!(enc[0].width() < 1e-9, "a width {:?}", enc[0]);
        assert!(enc[0].mag() < 2.0);
    }
}
