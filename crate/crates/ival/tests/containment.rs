//! Fundamental containment fuzzing: for random interval operands and random
//! point samples inside them, the exact point result must lie in the interval
//! result. Exactness of point results is established with two-sum / fma
//! residuals so the oracle itself is not subject to rounding.

use ival::elem;
use ival::{linear_solve, Interval, IntervalMatrix};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

const CASES: usize = 10_000;

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x51_0C_AF_FE)
}

fn sample_interval(rng: &mut ChaCha8Rng) -> Interval {
    let scale = 10f64.powi(rng.gen_range(-6..7));
    let a = rng.gen_range(-1.0..1.0) * scale;
    let w = rng.gen_range(0.0..1.0) * scale * rng.gen_range(0.0..1.0);
    Interval::new(a, a + w)
}

fn sample_in(rng: &mut ChaCha8Rng, iv: &Interval) -> f64 {
    if iv.lo() == iv.hi() {
        return iv.lo();
    }
    let t: f64 = rng.gen_range(0.0..=1.0);
    let x = iv.lo() + t * (iv.hi() - iv.lo());
    x.clamp(iv.lo(), iv.hi())
}

/// check lo <= s + e <= hi where s + e is an exact unevaluated sum,
/// |e| < ulp(s). The endpoint differences are exact by Sterbenz.
fn contains_pair(iv: &Interval, s: f64, e: f64) -> bool {
    let dlo = iv.lo() - s;
    let dhi = iv.hi() - s;
    dlo <= e && e <= dhi
}

#[test]
fn containment_add_sub() {
    let mut rng = rng();
    for _ in 0..CASES {
        let x = sample_interval(&mut rng);
        let y = sample_interval(&mut rng);
        let sum = x + y;
        let dif = x - y;
        for _ in 0..4 {
            let a = sample_in(&mut rng, &x);
            let b = sample_in(&mut rng, &y);
            let s = a + b;
            let bb = s - a;
            let e = (a - (s - bb)) + (b - bb);
            assert!(contains_pair(&sum, s, e), "{x:?} + {y:?} at {a}, {b}");
            let d = a - b;
            let bb = d - a;
            let e = (a - (d - bb)) + (-b - bb);
            assert!(contains_pair(&dif, d, e), "{x:?} - {y:?} at {a}, {b}");
        }
    }
}

#[test]
fn containment_mul() {
    let mut rng = rng();
    for _ in 0..CASES {
        let x = sample_interval(&mut rng);
        let y = sample_interval(&mut rng);
        let prod = x * y;
        for _ in 0..4 {
            let a = sample_in(&mut rng, &x);
            let b = sample_in(&mut rng, &y);
            let p = a * b;
            let e = f64::mul_add(a, b, -p);
            assert!(contains_pair(&prod, p, e), "{x:?} * {y:?} at {a}, {b}");
        }
    }
}

#[test]
fn containment_div() {
    let mut rng = rng();
    let mut done = 0;
    while done < CASES {
        let x = sample_interval(&mut rng);
        let y = sample_interval(&mut rng);
        if y.contains(0.0) {
            continue;
        }
        done += 1;
        let quot = x / y;
        for _ in 0..4 {
            let a = sample_in(&mut rng, &x);
            let b = sample_in(&mut rng, &y);
            let q = a / b;
            // true quotient within 0.5 ulp of q; require containment of q
            // with one-ulp slack
            assert!(
                quot.lo().next_down() <= q && q <= quot.hi().next_up(),
                "{x:?} / {y:?} at {a}, {b}: {q} not in {quot:?}"
            );
        }
    }
}

#[test]
fn containment_elem_functions() {
    let mut rng = rng();
    for _ in 0..CASES {
        let x = sample_interval(&mut rng);
        let p = sample_in(&mut rng, &x);

        let e = elem::exp(x);
        let ep = elem::exp(Interval::point(p));
        assert!(
            e.lo() <= ep.hi() && ep.lo() <= e.hi(),
            "exp point outside: {x:?} at {p}"
        );

        if x.lo() > 0.0 {
            let l = elem::ln(x).unwrap();
            let lp = elem::ln(Interval::point(p)).unwrap();
            assert!(l.lo() <= lp.hi() && lp.lo() <= l.hi(), "ln at {p}");
            let s = x.sqrt().unwrap();
            let sp = Interval::point(p).sqrt().unwrap();
            assert!(s.lo() <= sp.hi() && sp.lo() <= s.hi(), "sqrt at {p}");
        }

        if x.is_finite() && x.mag() < 1e6 {
            let s = elem::sin(x);
            let spt = elem::sin(Interval::point(p));
            assert!(s.lo() <= spt.hi() && spt.lo() <= s.hi(), "sin {x:?} at {p}");
            let c = elem::cos(x);
            let cpt = elem::cos(Interval::point(p));
            assert!(c.lo() <= cpt.hi() && cpt.lo() <= c.hi(), "cos {x:?} at {p}");
        }

        let a = elem::atan(x);
        let apt = elem::atan(Interval::point(p));
        assert!(a.lo() <= apt.hi() && apt.lo() <= a.hi(), "atan at {p}");
    }
}

#[test]
fn inclusion_monotonicity() {
    let mut rng = rng();
    for _ in 0..2000 {
        let outer = sample_interval(&mut rng);
        let a = sample_in(&mut rng, &outer);
        let b = sample_in(&mut rng, &outer);
        let inner = Interval::new(a.min(b), a.max(b));
        let outer2 = sample_interval(&mut rng);
        let c = sample_in(&mut rng, &outer2);
        let d = sample_in(&mut rng, &outer2);
        let inner2 = Interval::new(c.min(d), c.max(d));

        assert!((outer + outer2).contains_interval(&(inner + inner2)));
        assert!((outer - outer2).contains_interval(&(inner - inner2)));
        assert!((outer * outer2).contains_interval(&(inner * inner2)));
        if !outer2.contains(0.0) {
            assert!((outer / outer2).contains_interval(&(inner / inner2)));
        }
        // elementary enclosures may jitter by a few ulps across reduction
        // boundaries; allow that slack
        let sub_slack = |big: Interval, small: Interval| {
            let eps = 4.0 * f64::EPSILON * big.mag().max(f64::MIN_POSITIVE);
            big.lo() - eps <= small.lo() && small.hi() <= big.hi() + eps
        };
        assert!(sub_slack(elem::exp(outer), elem::exp(inner)));
        if outer.lo() > 0.0 {
            assert!(sub_slack(
                elem::ln(outer).unwrap(),
                elem::ln(inner).unwrap()
            ));
        }
        if outer.is_finite() && outer.mag() < 1e6 {
            assert!(sub_slack(elem::sin(outer), elem::sin(inner)));
            assert!(sub_slack(elem::cos(outer), elem::cos(inner)));
        }
    }
}

/// High-precision tables: each entry is (x, 25-digit decimal of f(x)).
/// The parsed decimal is within 0.5 ulp of the true value; enclosures carry
/// at least one ulp of outward slack, so containment of the parsed value is
/// required.
#[test]
fn elem_against_precomputed_tables() {
    let data: serde_json::Value =
        serde_json::from_str(include_str!("data_oracles.json")).unwrap();
    let tables = &data["elem_tables"];
    let check = |name: &str, f: &dyn Fn(Interval) -> Interval| {
        for row in tables[name].as_array().unwrap() {
            let x: f64 = row["x"].as_str().unwrap().parse().unwrap();
            let y: f64 = row["y"].as_str().unwrap().parse().unwrap();
            let iv = f(Interval::point(x));
            // y is the nearest f64 to the true value: one ulp of slack
            assert!(
                iv.lo() <= y.next_up() && y.next_down() <= iv.hi(),
                "{name}({x}) = {y} not in {iv:?}"
            );
            // periodic functions lose ~|x| ulps to argument reduction
            let cap = (1e-12 * iv.mag()).max(1e-15 * (1.0 + x.abs()));
            assert!(
                iv.width() <= cap,
                "{name}({x}) enclosure too wide: {iv:?}"
            );
        }
    };
    check("exp", &|x| elem::exp(x));
    check("ln", &|x| elem::ln(x).unwrap());
    check("sin", &|x| elem::sin(x));
    check("cos", &|x| elem::cos(x));
    check("atan", &|x| elem::atan(x));
    check("log1p", &|x| elem::log1p(x).unwrap());
}

#[test]
fn linear_solve_contains_point_solutions() {
    let mut rng = rng();
    for _ in 0..100 {
        let n = 4;
        // diagonally dominant midpoint + small interval widths
        let mut a = IntervalMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let base = if i == j {
                    rng.gen_range(2.0..4.0)
                } else {
                    rng.gen_range(-0.3..0.3)
                };
                let w = rng.gen_range(0.0..1e-3);
                a[(i, j)] = Interval::new(base - w, base + w);
            }
        }
        let b: Vec<Interval> = (0..n)
            .map(|_| {
                let v: f64 = rng.gen_range(-2.0..2.0);
                Interval::new(v - 1e-4, v + 1e-4)
            })
            .collect();
        let x = linear_solve(&a, &b).unwrap();

        for _ in 0..100 {
            // random point selection
            let ap: Vec<Vec<f64>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let iv = a[(i, j)];
                            iv.lo() + rng.gen_range(0.0..=1.0) * (iv.hi() - iv.lo())
                        })
                        .collect()
                })
                .collect();
            let bp: Vec<f64> = b
                .iter()
                .map(|iv| iv.lo() + rng.gen_range(0.0..=1.0) * (iv.hi() - iv.lo()))
                .collect();
            let xp = solve_point(&ap, &bp);
            for i in 0..n {
                assert!(
                    x[i].lo() - 1e-12 <= xp[i] && xp[i] <= x[i].hi() + 1e-12,
                    "component {i}: {} not in {:?}",
                    xp[i],
                    x[i]
                );
            }
        }
    }
}

/// plain f64 Gaussian elimination, test oracle
fn solve_point(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
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
    x
}

#[test]
fn complex_containment() {
    use ival::Complex;
    let mut rng = rng();
    for _ in 0..2000 {
        let z = Complex::new(sample_interval(&mut rng), sample_interval(&mut rng));
        let w = Complex::new(sample_interval(&mut rng), sample_interval(&mut rng));
        let zr = sample_in(&mut rng, &z.re);
        let zi = sample_in(&mut rng, &z.im);
        let wr = sample_in(&mut rng, &w.re);
        let wi = sample_in(&mut rng, &w.im);

        let p = z * w;
        let pr = zr * wr - zi * wi;
        let pi = zr * wi + zi * wr;
        // products of up to two rounded terms: allow tiny relative slack
        let slack = 4.0 * f64::EPSILON * (pr.abs() + pi.abs() + 1e-300);
        assert!(p.re.lo() - slack <= pr && pr <= p.re.hi() + slack);
        assert!(p.im.lo() - slack <= pi && pi <= p.im.hi() + slack);

        if z.is_finite() && z.re.mag() < 100.0 && z.im.mag() < 100.0 {
            let e = z.exp();
            let em = zr.exp();
            let er = em * zi.cos();
            let ei = em * zi.sin();
            let slack = 1e-12 * em.max(1e-300);
            assert!(e.re.lo() - slack <= er && er <= e.re.hi() + slack);
            assert!(e.im.lo() - slack <= ei && ei <= e.im.hi() + slack);
        }
    }
}
