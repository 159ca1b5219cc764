//! Branch continuation for the dissipative family: a non-rigorous
//! predictor-corrector polyline in (eps, mu, gamma, kappa), rigorous
//! verification of segments by subinterval Newton runs with the chaining
//! condition, and joining of differently parameterized parts through a
//! common verified point.

use ival::{Complex, Interval};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cases::Case;
use crate::matching::{eval_g, find_box, FreeVars, MatchVars, NewtonStatus};
use crate::params::Params;
use crate::qzero::IntegrateOptions;
use crate::{Error, Result};

/// One point of the numerical approximation polyline.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct BranchPoint {
    pub eps: f64,
    pub mu: f64,
    pub gamma_re: f64,
    pub gamma_im: f64,
    pub kappa: f64,
}

/// Non-rigorous approximation of (a part of) a branch.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BranchApprox {
    pub case: String,
    pub j: usize,
    pub points: Vec<BranchPoint>,
    /// set when the corrector diverged before reaching eps_max
    pub truncated: bool,
}

/// Midpoint Newton correction (non-rigorous): a few damped steps on the
/// midpoint evaluation of the matching map.
fn refine_point(
    base: &Params,
    vars: &MatchVars,
    fv: FreeVars,
    opts: &IntegrateOptions,
    steps: usize,
) -> Result<MatchVars> {
    let mut v = vars.midpoint();
    for _ in 0..steps {
        let g = eval_g(base, &v, fv, opts)?;
        let jac_mid: Vec<Vec<f64>> = (0..4)
            .map(|i| (0..4).map(|j| g.jac[(i, j)].mid()).collect())
            .collect();
        let rhs: Vec<f64> = g.value.iter().map(|x| x.mid()).collect();
        let delta = solve4(&jac_mid, &rhs).ok_or(Error::SingularEnclosure)?;
        let x = v.free_box(fv);
        let newx: [Interval; 4] =
            std::array::from_fn(|i| Interval::point(x[i].mid() - delta[i]));
        let (nv, _) = v.with_free_box(&newx, fv);
        v = nv;
        if delta.iter().all(|d| d.abs() < 1e-13) {
            break;
        }
    }
    Ok(v)
}

fn solve4(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut r = b.to_vec();
    for col in 0..n {
        let mut piv = col;
        for row in (col + 1)..n {
            if m[row][col].abs() > m[piv][col].abs() {
                piv = row;
            }
        }
        if m[piv][col] == 0.0 || !m[piv][col].is_finite() {
            return None;
        }
        m.swap(col, piv);
        r.swap(col, piv);
        for row in (col + 1)..n {
            let f = m[row][col] / m[col][col];
            for j in col..n {
                m[row][j] -= f * m[col][j];
            }
            r[row] -= f * r[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut acc = r[col];
        for j in (col + 1)..n {
            acc -= m[col][j] * x[j];
        }
        x[col] = acc / m[col][col];
    }
    Some(x)
}

/// March the branch from its eps = 0 root by natural continuation in eps
/// with a tangent predictor and midpoint Newton corrector.
pub fn approx_branch(
    case: Case,
    j: usize,
    eps_max: f64,
    step: f64,
    opts: &IntegrateOptions,
) -> Result<BranchApprox> {
    let base = case.params(j)?;
    let mu0 = crate::cases::mu_seed(case, j)?;
    let start = MatchVars::from_params(&base, Interval::point(mu0));
    // polish the starting zero
    let v0 = refine_point(&base, &start, FreeVars::FixEpsilon, opts, 4)?;
    let mut points = vec![BranchPoint {
        eps: 0.0,
        mu: v0.mu.mid(),
        gamma_re: v0.gamma.re.mid(),
        gamma_im: v0.gamma.im.mid(),
        kappa: v0.kappa.mid(),
    }];
    let mut v = v0;
    let mut truncated = false;
    let mut eps = 0.0f64;
    while eps < eps_max {
        let eps_next = (eps + step).min(eps_max);
        let mut cand = v;
        cand.epsilon = Interval::point(eps_next);
        match refine_point(&base, &cand, FreeVars::FixEpsilon, opts, 6) {
            Ok(nv) => {
                v = nv;
                eps = eps_next;
                points.push(BranchPoint {
                    eps,
                    mu: v.mu.mid(),
                    gamma_re: v.gamma.re.mid(),
                    gamma_im: v.gamma.im.mid(),
                    kappa: v.kappa.mid(),
                });
            }
            Err(_) => {
                truncated = true;
                break;
            }
        }
    }
    Ok(BranchApprox {
        case: format!("{case:?}"),
        j,
        points,
        truncated,
    })
}

/// One verified subinterval of a segment.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubIntervalResult {
    pub index: usize,
    /// the fixed-variable interval of this subinterval
    pub fixed_lo: f64,
    pub fixed_hi: f64,
    pub existence: Vec<Interval>,
    pub uniqueness: Vec<Interval>,
}

/// A verified branch segment: per-epsilon (or per-kappa) existence and
/// uniqueness boxes plus the chaining flag.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifiedSegment {
    pub fv_mode: FreeVars,
    pub subintervals: Vec<SubIntervalResult>,
    /// existence_i contained in uniqueness_(i-1) for all i >= 1
    pub chained: bool,
}

fn interpolate(points: &[BranchPoint], fv: FreeVars, t: f64) -> BranchPoint {
    // linear interpolation along the fixed variable
    let coord = |p: &BranchPoint| match fv {
        FreeVars::FixEpsilon => p.eps,
        FreeVars::FixKappa => p.kappa,
    };
    let mut best = (0, 1);
    for i in 0..points.len() - 1 {
        let (a, b) = (coord(&points[i]), coord(&points[i + 1]));
        if (a - t) * (b - t) <= 0.0 {
            best = (i, i + 1);
            break;
        }
    }
    let (pa, pb) = (&points[best.0], &points[best.1]);
    let (ca, cb) = (coord(pa), coord(pb));
    let s = if (cb - ca).abs() < 1e-300 {
        0.0
    } else {
        (t - ca) / (cb - ca)
    };
    BranchPoint {
        eps: pa.eps + s * (pb.eps - pa.eps),
        mu: pa.mu + s * (pb.mu - pa.mu),
        gamma_re: pa.gamma_re + s * (pb.gamma_re - pa.gamma_re),
        gamma_im: pa.gamma_im + s * (pb.gamma_im - pa.gamma_im),
        kappa: pa.kappa + s * (pb.kappa - pa.kappa),
    }
}

fn vars_at(_base: &Params, pt: &BranchPoint, fixed: Interval, fv: FreeVars) -> MatchVars {
    match fv {
        FreeVars::FixEpsilon => MatchVars {
            mu: Interval::point(pt.mu),
            gamma: Complex::point(pt.gamma_re, pt.gamma_im),
            kappa: Interval::point(pt.kappa),
            epsilon: fixed,
        },
        FreeVars::FixKappa => MatchVars {
            mu: Interval::point(pt.mu),
            gamma: Complex::point(pt.gamma_re, pt.gamma_im),
            kappa: fixed,
            epsilon: Interval::point(pt.eps),
        },
    }
}

/// Verify one subinterval, bisecting recursively on failure (depth <= 6).
fn verify_subinterval(
    base: &Params,
    approx: &BranchApprox,
    fv: FreeVars,
    lo: f64,
    hi: f64,
    depth: usize,
    opts: &IntegrateOptions,
) -> Result<Vec<(f64, f64, crate::matching::NewtonResult)>> {
    let fixed = Interval::new(lo, hi);
    let mid_pt = interpolate(&approx.points, fv, 0.5 * (lo + hi));
    let seed = vars_at(base, &mid_pt, fixed, fv);
    let res = find_box(&seed, base, fv, opts)?;
    if res.status == NewtonStatus::UniqueZero {
        return Ok(vec![(lo, hi, res)]);
    }
    if depth >= 6 {
        return Err(Error::SegmentFailed(0));
    }
    let mid = 0.5 * (lo + hi);
    let mut left = verify_subinterval(base, approx, fv, lo, mid, depth + 1, opts)?;
    let right = verify_subinterval(base, approx, fv, mid, hi, depth + 1, opts)?;
    left.extend(right);
    Ok(left)
}

/// Verify a segment of the approximation between the fixed-variable values
/// of its first and last points, uniformly split into n_split subintervals.
pub fn verify_segment(
    base: &Params,
    approx: &BranchApprox,
    fv: FreeVars,
    range: (f64, f64),
    n_split: usize,
    opts: &IntegrateOptions,
) -> Result<VerifiedSegment> {
    let (lo, hi) = range;
    if lo == hi {
        // degenerate: single pointwise Newton
        let pt = interpolate(&approx.points, fv, lo);
        let seed = vars_at(base, &pt, Interval::point(lo), fv);
        let res = find_box(&seed, base, fv, opts)?;
        if res.status != NewtonStatus::UniqueZero {
            return Err(Error::SegmentFailed(0));
        }
        return Ok(VerifiedSegment {
            fv_mode: fv,
            subintervals: vec![SubIntervalResult {
                index: 0,
                fixed_lo: lo,
                fixed_hi: hi,
                existence: res.existence.to_vec(),
                uniqueness: res.uniqueness.to_vec(),
            }],
            chained: true,
        });
    }
    let splits: Vec<(usize, f64, f64)> = (0..n_split)
        .map(|i| {
            let a = lo + (hi - lo) * i as f64 / n_split as f64;
            let b = lo + (hi - lo) * (i + 1) as f64 / n_split as f64;
            (i, a, b)
        })
        .collect();
    // verify in parallel, merge deterministically by index
    let results: Vec<Result<Vec<(f64, f64, crate::matching::NewtonResult)>>> = splits
        .par_iter()
        .map(|(i, a, b)| {
            verify_subinterval(base, approx, fv, *a, *b, 0, opts)
                .map_err(|_| Error::SegmentFailed(*i))
        })
        .collect();
    let mut subintervals = Vec::new();
    for chunk in results {
        let chunk = chunk?;
        for (a, b, res) in chunk {
            subintervals.push(SubIntervalResult {
                index: subintervals.len(),
                fixed_lo: a,
                fixed_hi: b,
                existence: res.existence.to_vec(),
                uniqueness: res.uniqueness.to_vec(),
            });
        }
    }
    // chaining: existence_i inside uniqueness_(i-1)
    let mut chained = true;
    for i in 1..subintervals.len() {
        let prev = &subintervals[i - 1];
        let cur = &subintervals[i];
        let inside = cur
            .existence
            .iter()
            .zip(&prev.uniqueness)
            .all(|(e, u)| u.contains_interval(e));
        if !inside {
            chained = false;
        }
    }
    Ok(VerifiedSegment {
        fv_mode: fv,
        subintervals,
        chained,
    })
}

/// Certificate that two differently parameterized parts share a point.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JoinCertificate {
    pub point_box: Vec<Interval>,
    /// indices of the subintervals (left segment, right segment) whose
    /// uniqueness boxes contain the point
    pub left_index: usize,
    pub right_index: usize,
}

/// The five coordinates of a verified box in a canonical order
/// (eps, mu, Re gamma, Im gamma, kappa).
fn five_box(sub: &SubIntervalResult, fv: FreeVars) -> [Interval; 5] {
    let fixed = Interval::new(sub.fixed_lo, sub.fixed_hi);
    match fv {
        FreeVars::FixEpsilon => [
            fixed,
            sub.uniqueness[0],
            sub.uniqueness[1],
            sub.uniqueness[2],
            sub.uniqueness[3],
        ],
        FreeVars::FixKappa => [
            sub.uniqueness[3],
            sub.uniqueness[0],
            sub.uniqueness[1],
            sub.uniqueness[2],
            fixed,
        ],
    }
}

/// Join two verified segments by a high-accuracy pointwise verification at a
/// parameter in their overlap: the point's existence box must lie inside a
/// uniqueness box of each segment.
pub fn join_parts(
    base: &Params,
    s1: &VerifiedSegment,
    s2: &VerifiedSegment,
    opts: &IntegrateOptions,
) -> Result<JoinCertificate> {
    for (i1, a) in s1.subintervals.iter().enumerate() {
        let ba = five_box(a, s1.fv_mode);
        for (i2, b) in s2.subintervals.iter().enumerate() {
            let bb = five_box(b, s2.fv_mode);
            let overlap: Option<Vec<Interval>> = ba
                .iter()
                .zip(&bb)
                .map(|(x, y)| x.intersect(y))
                .collect();
            let Some(overlap) = overlap else { continue };
            // pointwise verification at the overlap midpoint
            let eps = overlap[0].mid();
            let pt = BranchPoint {
                eps,
                mu: overlap[1].mid(),
                gamma_re: overlap[2].mid(),
                gamma_im: overlap[3].mid(),
                kappa: overlap[4].mid(),
            };
            let seed = vars_at(base, &pt, Interval::point(eps), FreeVars::FixEpsilon);
            let Ok(res) = find_box(&seed, base, FreeVars::FixEpsilon, opts) else {
                continue;
            };
            if res.status != NewtonStatus::UniqueZero {
                continue;
            }
            // the verified point in five coordinates
            let point5 = [
                Interval::point(eps),
                res.existence[0],
                res.existence[1],
                res.existence[2],
                res.existence[3],
            ];
            let inside = |seg_box: &[Interval; 5]| {
                seg_box
                    .iter()
                    .zip(&point5)
                    .all(|(u, p)| u.contains_interval(p))
            };
            if inside(&ba) && inside(&bb) {
                return Ok(JoinCertificate {
                    point_box: point5.to_vec(),
                    left_index: i1,
                    right_index: i2,
                });
            }
        }
    }
    Err(Error::JoinFailed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolate_endpoints() {
        let pts = vec![
            BranchPoint {
                eps: 0.0,
                mu: 1.0,
                gamma_re: 0.5,
                gamma_im: -0.5,
                kappa: 0.9,
            },
            BranchPoint {
                eps: 1.0,
                mu: 2.0,
                gamma_re: 1.5,
                gamma_im: -1.5,
                kappa: 0.8,
            },
        ];
        let mid = interpolate(&pts, FreeVars::FixEpsilon, 0.5);
        assert!((mid.mu - 1.5).abs() < 1e-12);
        assert!((mid.kappa - 0.85).abs() < 1e-12);
    }

    #[test]
    fn identical_segments_join_trivially() {
        // two single-box segments with identical data must share any point:
        // exercised structurally through five_box containment
        let sub = SubIntervalResult {
            index: 0,
            fixed_lo: 0.0,
            fixed_hi: 0.1,
            existence: vec![Interval::new(0.9, 1.1); 4],
            uniqueness: vec![Interval::new(0.8, 1.2); 4],
        };
        let b = five_box(&sub, FreeVars::FixEpsilon);
        assert!(b[0].contains(0.05));
        assert!(b[1].contains(1.0));
    }

    #[test]
    fn disjoint_boxes_have_no_overlap() {
        let s1 = SubIntervalResult {
            index: 0,
            fixed_lo: 0.0,
            fixed_hi: 0.1,
            existence: vec![Interval::new(0.9, 1.0); 4],
            uniqueness: vec![Interval::new(0.9, 1.0); 4],
        };
        let s2 = SubIntervalResult {
            index: 0,
            fixed_lo: 0.2,
            fixed_hi: 0.3,
            existence: vec![Interval::new(0.9, 1.0); 4],
            uniqueness: vec![Interval::new(0.9, 1.0); 4],
        };
        let b1 = five_box(&s1, FreeVars::FixEpsilon);
        let b2 = five_box(&s2, FreeVars::FixEpsilon);
        assert!(b1[0].intersect(&b2[0]).is_none());
    }
}
