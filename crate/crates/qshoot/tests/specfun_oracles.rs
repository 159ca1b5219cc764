//! Containment of precomputed high-precision values in the special-function
//! enclosures. The fixture values were computed before the build with an
//! independent evaluation route (quadrature of the integral representation,
//! cross-checked against a series implementation, and finite differences for
//! the derivative cases).

use ival::{Complex, Interval};
use qshoot::specfun;

fn fixture() -> serde_json::Value {
    serde_json::from_str(include_str!("data/oracles.json")).unwrap()
}

fn parse_c(v: &serde_json::Value) -> Complex {
    let re: f64 = v["re"].as_str().unwrap().parse().unwrap();
    let im: f64 = v["im"].as_str().unwrap().parse().unwrap();
    Complex::point(re, im)
}

/// True value is within 0.5 ulp of the stored decimal: containment with one
/// ulp of slack on each side.
fn contains_approx(enc: &Complex, val: &Complex) -> bool {
    let (vr, vi) = (val.re.lo(), val.im.lo());
    enc.re.lo() <= vr.next_up()
        && vr.next_down() <= enc.re.hi()
        && enc.im.lo() <= vi.next_up()
        && vi.next_down() <= enc.im.hi()
}

#[test]
fn gamma_modulus_on_critical_line() {
    let fix = fixture();
    let oracle: f64 = fix["gamma_half_plus_0545i_abs"]
        .as_str()
        .unwrap()
        .parse()
        .unwrap();
    let g = specfun::gamma_enclosure(Complex::point(0.5, 0.545)).unwrap();
    let a = g.abs();
    assert!(
        a.lo() <= oracle.next_up() && oracle.next_down() <= a.hi(),
        "|Gamma(0.5+0.545i)| = {oracle} not in {a:?}"
    );
}

#[test]
fn gamma_table_containment() {
    let fix = fixture();
    for row in fix["gamma_table"].as_array().unwrap() {
        let z = parse_c(&row["z"]);
        let val = parse_c(&row["gamma"]);
        let g = specfun::gamma_enclosure(z).unwrap();
        assert!(contains_approx(&g, &val), "Gamma({z:?}) = {val:?} not in {g:?}");
    }
}

#[test]
fn digamma_against_oracle() {
    let fix = fixture();
    let val = parse_c(&fix["digamma_c"]);
    let d = specfun::digamma_enclosure(Complex::point(0.5, 0.545)).unwrap();
    assert!(contains_approx(&d, &val), "{val:?} not in {d:?}");
    let real: f64 = fix["digamma_5p5"].as_str().unwrap().parse().unwrap();
    let d = specfun::digamma_enclosure(Complex::point(5.5, 0.0)).unwrap();
    assert!(d.re.lo() <= real.next_up() && real.next_down() <= d.re.hi());
}

#[test]
fn u_at_reference_point() {
    let fix = fixture();
    let case = &fix["u_case2"];
    let a = parse_c(&case["a"]);
    let b = parse_c(&case["b"]);
    let z = parse_c(&case["z"]);
    let val = parse_c(&case["u"]);
    let u = specfun::u_enclosure(a, b, z, 5).unwrap();
    assert!(contains_approx(&u, &val), "U oracle {val:?} not in {u:?}");
    // the enclosure at |z| ~ 1651 and n = 5 is tight
    assert!(u.width() < 1e-9, "{u:?}");
}

#[test]
fn u_table_containment() {
    let fix = fixture();
    for row in fix["u_table"].as_array().unwrap() {
        let a = parse_c(&row["a"]);
        let b = parse_c(&row["b"]);
        let z = parse_c(&row["z"]);
        let val = parse_c(&row["u"]);
        let u = specfun::u_enclosure_adaptive(a, b, z).unwrap();
        assert!(
            contains_approx(&u, &val),
            "U({a:?},{b:?},{z:?}) = {val:?} not in {u:?}"
        );
    }
}

#[test]
fn u_derivative_against_finite_differences() {
    let fix = fixture();
    let case = &fix["u_case2"];
    let a = parse_c(&case["a"]);
    let b = parse_c(&case["b"]);
    let z = parse_c(&case["z"]);
    let fd = parse_c(&fix["u_case2_dz"]["value"]);
    let err: f64 = fix["u_case2_dz"]["fd_err"].as_str().unwrap().parse().unwrap();
    let d = specfun::u_deriv_enclosure(a, b, z, 1, 5).unwrap();
    let wide = d + Complex::disk(err);
    assert!(contains_approx(&wide, &fd), "{fd:?} not in {d:?} + {err}");
}

#[test]
fn ua_at_reference_point() {
    let fix = fixture();
    let case = &fix["u_case2"];
    let a = parse_c(&case["a"]);
    let b = parse_c(&case["b"]);
    let z = parse_c(&case["z"]);
    let fd = parse_c(&fix["u_case2_da"]["value"]);
    let err: f64 = fix["u_case2_da"]["fd_err"].as_str().unwrap().parse().unwrap();
    let ua = specfun::ua_enclosure(a, b, z, 5).unwrap();
    let wide = ua + Complex::disk(err);
    assert!(contains_approx(&wide, &fd), "{fd:?} not in {ua:?} + {err}");
}

#[test]
fn ua_table_containment() {
    let fix = fixture();
    for row in fix["ua_table"].as_array().unwrap() {
        let a = parse_c(&row["a"]);
        let b = parse_c(&row["b"]);
        let z = parse_c(&row["z"]);
        let val = parse_c(&row["ua"]);
        let err: f64 = row["fd_err"].as_str().unwrap().parse().unwrap();
        let mut ok = false;
        for n in 2..=10 {
            if let Ok(ua) = specfun::ua_enclosure(a, b, z, n) {
                let wide = ua + Complex::disk(err);
                if contains_approx(&wide, &val) {
                    ok = true;
                    break;
                }
            }
        }
        assert!(ok, "U_a({a:?},{b:?},{z:?}) = {val:?} never enclosed");
    }
}

#[test]
fn ua_uniform_bound_consistency() {
    // |U_a| <= C_{U,a} |log(z) z^-a| along the ray through z1
    let a = Complex::point(0.5, 0.545);
    let b = Complex::point(1.5, 0.0);
    let z1 = Complex::point(0.0, -800.0);
    let k = specfun::ua_bound(a, b, 5, z1).unwrap();
    for mag in [800.0, 1600.0, 6400.0] {
        let z = Complex::point(0.0, -mag);
        let ua = specfun::ua_enclosure(a, b, z, 5).unwrap();
        let profile = (z.ln().unwrap() * z.powc(&-a).unwrap()).abs();
        let bound = (k.c_ua * profile).hi();
        assert!(
            ua.abs().lo() <= bound,
            "uniform bound violated at |z| = {mag}: {} > {bound}",
            ua.abs().lo()
        );
    }
}

#[test]
fn interval_argument_widens_but_contains() {
    // interval-valued z containing the reference point still encloses oracle
    let fix = fixture();
    let case = &fix["u_case2"];
    let a = parse_c(&case["a"]);
    let b = parse_c(&case["b"]);
    let val = parse_c(&case["u"]);
    let z = Complex::new(
        Interval::new(-1e-6, 1e-6),
        Interval::new(-1651.2401, -1651.2399),
    );
    let u = specfun::u_enclosure(a, b, z, 5).unwrap();
    assert!(contains_approx(&u, &val));
}
