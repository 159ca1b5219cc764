//! Enclosures of the gamma, digamma and second-kind confluent hypergeometric
//! functions, with the explicit asymptotic remainder constants used by every
//! coefficient bound downstream.
//!
//! The U(a,b,z) expansion carries the remainder bound
//!
//! ```text
//! |R_U(a,b,n,z)| <= |p_n| 2 sqrt(1 + pi n / 2) / (1 - s) exp(pi rho / ((1-s)|z|))
//! ```
//!
//! with `s = |b - 2a| / |z|`, which only depends on z through |z| and is
//! decreasing in |z|. The a-derivative expansion needs three extra remainder
//! pieces built from gamma values on the real axis.

use ival::{elem, Complex, Interval};

use crate::{Error, Result};

// Bernoulli numbers B_2 .. B_22 as exact fractions.
const BERNOULLI: [(f64, f64); 11] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
];

fn bernoulli(k2: usize) -> Interval {
    let (num, den) = BERNOULLI[k2 / 2 - 1];
    Interval::point(num) / Interval::point(den)
}

fn half_log_two_pi() -> Interval {
    let two_pi = elem::pi().ldexp(1);
    elem::ln(two_pi).expect("2 pi > 0").ldexp(-1)
}

/// log Gamma(z) for boxes with Re(z) bounded and off the poles, via
/// recurrence shifting to Re >= 8 followed by the Stirling series with a
/// rigorous remainder. The shifted terms use principal logs, so the box (and
/// its shifts) must stay off the cut.
pub fn log_gamma(z: Complex) -> Result<Complex> {
    const N: usize = 8;
    let shift = (8.0 - z.re.lo()).ceil().max(0.0) as i32;
    let mut correction = Complex::ZERO;
    for j in 0..shift {
        let zj = z + Complex::real(Interval::from(j));
        correction += zj
            .ln()
            .map_err(|_| Error::Domain("log-gamma box touches a pole or the cut".into()))?;
    }
    let w = z + Complex::real(Interval::from(shift));
    let lw = w.ln()?;
    let half = Complex::real(Interval::point(0.5));
    let mut acc = (w - half) * lw - w + Complex::real(half_log_two_pi());
    // series terms B_2k / ((2k-1)(2k) w^(2k-1))
    let winv = w.recip()?;
    let winv2 = winv * winv;
    let mut wpow = winv;
    for k in 1..=N {
        let denom = Interval::point(((2 * k - 1) * (2 * k)) as f64);
        acc += wpow.scale(bernoulli(2 * k) / denom);
        wpow = wpow * winv2;
    }
    // |R| <= |B_(2N+2)| / ((2N+1)(2N+2) |w|^(2N+1) cos(arg w))
    let wabs = w.abs();
    let cos_arg = w.re / wabs;
    if !(cos_arg.lo() > 0.0) {
        return Err(Error::Hypothesis("stirling remainder needs Re w > 0".into()));
    }
    let denom = Interval::point(((2 * N + 1) * (2 * N + 2)) as f64)
        * elem::pow(wabs, Interval::point((2 * N + 1) as f64))?
        * cos_arg;
    let r = (bernoulli(2 * N + 2).abs() / denom).hi();
    acc += Complex::new(Interval::symmetric(r), Interval::symmetric(r));
    Ok(acc - correction)
}

pub fn gamma_enclosure(z: Complex) -> Result<Complex> {
    Ok(log_gamma(z)?.exp())
}

/// digamma via the same shift and the Stirling series for psi.
pub fn digamma_enclosure(z: Complex) -> Result<Complex> {
    const N: usize = 8;
    let shift = (8.0 - z.re.lo()).ceil().max(0.0) as i32;
    let mut correction = Complex::ZERO;
    for j in 0..shift {
        let zj = z + Complex::real(Interval::from(j));
        correction += zj
            .recip()
            .map_err(|_| Error::Domain("digamma box touches a pole".into()))?;
    }
    let w = z + Complex::real(Interval::from(shift));
    let winv = w.recip()?;
    let winv2 = winv * winv;
    let mut acc = w.ln()? - winv.scale(Interval::point(0.5));
    let mut wpow = winv2;
    for k in 1..=N {
        acc -= wpow.scale(bernoulli(2 * k) / Interval::point((2 * k) as f64));
        wpow = wpow * winv2;
    }
    let wabs = w.abs();
    let cos_arg = w.re / wabs;
    if !(cos_arg.lo() > 0.0) {
        return Err(Error::Hypothesis("stirling remainder needs Re w > 0".into()));
    }
    let denom = Interval::point((2 * N + 2) as f64)
        * elem::pow(wabs, Interval::point((2 * N + 2) as f64))?
        * cos_arg;
    let r = (bernoulli(2 * N + 2).abs() / denom).hi();
    acc += Complex::new(Interval::symmetric(r), Interval::symmetric(r));
    Ok(acc - correction)
}

/// Gamma on positive real intervals.
pub fn gamma_real(x: Interval) -> Result<Interval> {
    if !(x.lo() > 0.0) {
        return Err(Error::Hypothesis(format!(
            "gamma of non-positive real argument {x:?}"
        )));
    }
    let g = gamma_enclosure(Complex::real(x))?;
    Ok(g.re)
}

/// Rising factorial (a)_k together with its derivative in a, by recurrence.
fn rising_with_da(a: Complex, k: usize) -> (Complex, Complex) {
    let mut p = Complex::ONE;
    let mut dp = Complex::ZERO;
    for j in 0..k {
        let aj = a + Complex::real(Interval::from(j as i32));
        dp = dp * aj + p;
        p = p * aj;
    }
    (p, dp)
}

fn rising(a: Complex, k: usize) -> Complex {
    rising_with_da(a, k).0
}

/// Expansion coefficient p_{U,k}(a,b) = (a)_k (a-b+1)_k / k!.
pub(crate) fn p_uk(a: Complex, b: Complex, k: usize) -> Complex {
    let q = a - b + Complex::ONE;
    let mut fact = 1.0f64;
    for j in 2..=k {
        fact *= j as f64;
    }
    (rising(a, k) * rising(q, k)).scale(Interval::ONE / Interval::point(fact))
}

/// d/da p_{U,k}(a,b).
fn p_uk_da(a: Complex, b: Complex, k: usize) -> Complex {
    let q = a - b + Complex::ONE;
    let (pa, dpa) = rising_with_da(a, k);
    let (pq, dpq) = rising_with_da(q, k);
    let mut fact = 1.0f64;
    for j in 2..=k {
        fact *= j as f64;
    }
    (dpa * pq + pa * dpq).scale(Interval::ONE / Interval::point(fact))
}

/// Check the standing hypothesis |Im z| > |Im(b - 2a)| and s < 1; returns s.
fn hypothesis_s(a: Complex, b: Complex, z: Complex) -> Result<Interval> {
    let b2a = b - a - a;
    if !(z.im.abs().lo() > b2a.im.abs().hi()) {
        return Err(Error::Hypothesis(
            "expansion needs |Im z| > |Im(b - 2a)|".into(),
        ));
    }
    let s = b2a.abs() / z.abs();
    if !(s.hi() < 1.0) {
        return Err(Error::Hypothesis("expansion needs s(a,b,z) < 1".into()));
    }
    Ok(s)
}

/// Remainder constant C_{R_U}(a, b, n, z); depends on z only through |z|.
pub fn c_ru(a: Complex, b: Complex, n: usize, z: Complex) -> Result<Interval> {
    let s = hypothesis_s(a, b, z)?;
    let zabs = z.abs();
    let pn = p_uk(a, b, n).abs();
    let sqrt_term = (Interval::ONE + elem::pi() * Interval::point(0.5 * n as f64))
        .sqrt()?
        .ldexp(1);
    let rho = (a * a - a * b + b.scale(Interval::point(0.5))).abs()
        + s * (Interval::ONE + s.ldexp(-2)) / (Interval::ONE - s).sqr();
    let expo = elem::exp(elem::pi() * rho / ((Interval::ONE - s) * zabs));
    Ok(pn * sqrt_term / (Interval::ONE - s) * expo)
}

/// Uniform bound C_U(a, b, n, z1): |U(a,b,z)| <= C_U |z^-a| whenever
/// |Im z| >= |Im z1| and |z| >= |z1|.
pub fn c_u(a: Complex, b: Complex, n: usize, z1: Complex) -> Result<Interval> {
    let z1abs = z1.abs();
    let mut sum = Interval::ZERO;
    let mut zpow = Interval::ONE;
    for k in 0..n {
        sum += p_uk(a, b, k).abs() / zpow;
        zpow = zpow * z1abs;
    }
    let rem = c_ru(a, b, n, z1)? / zpow;
    Ok(sum + rem)
}

/// C_{U^(m)}(a, b, n, z1) = C_U(a+m, b+m, n, z1) |(a)_m|, bounding the m-th
/// z-derivative of U against |z^(-a-m)|.
pub fn c_u_deriv(a: Complex, b: Complex, m: usize, n: usize, z1: Complex) -> Result<Interval> {
    let shift = Complex::real(Interval::from(m as i32));
    Ok(c_u(a + shift, b + shift, n, z1)? * rising(a, m).abs())
}

/// Enclosure of U(a, b, z) from the asymptotic expansion with the remainder
/// disk; the true value is contained for any point inputs in the boxes.
pub fn u_enclosure(a: Complex, b: Complex, z: Complex, n: usize) -> Result<Complex> {
    let rem = c_ru(a, b, n, z)?;
    let zinv = z.recip()?;
    let neg_zinv = -zinv;
    let mut sum = Complex::ZERO;
    let mut pw = Complex::ONE;
    for k in 0..n {
        sum += p_uk(a, b, k) * pw;
        pw = pw * neg_zinv;
    }
    let zabs_inv_n = elem::pow(z.abs(), Interval::point(-(n as f64)))?;
    sum += Complex::disk((rem * zabs_inv_n).hi());
    let za = z.powc(&-a)?;
    Ok(sum * za)
}

/// Adaptive variant: tries several expansion lengths and keeps the tightest.
pub fn u_enclosure_adaptive(a: Complex, b: Complex, z: Complex) -> Result<Complex> {
    let mut best: Option<Complex> = None;
    for n in 3..=12 {
        if let Ok(enc) = u_enclosure(a, b, z, n) {
            best = Some(match best {
                None => enc,
                Some(prev) => {
                    // both contain the true value: intersect
                    let both = prev.intersect(&enc).unwrap_or(if enc.width() < prev.width() {
                        enc
                    } else {
                        prev
                    });
                    both
                }
            });
        }
    }
    best.ok_or_else(|| Error::Hypothesis("no expansion length admissible".into()))
}

/// m-th z-derivative enclosure: U^(m)(a,b,z) = (-1)^m U(a+m, b+m, z) (a)_m.
pub fn u_deriv_enclosure(
    a: Complex,
    b: Complex,
    z: Complex,
    m: usize,
    n: usize,
) -> Result<Complex> {
    assert!(m <= 3, "derivative order at most 3");
    if m == 0 {
        return u_enclosure(a, b, z, n);
    }
    let shift = Complex::real(Interval::from(m as i32));
    let u = u_enclosure(a + shift, b + shift, z, n)?;
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    Ok((u * rising(a, m)).scale(Interval::point(sign)))
}

/// The explicit constants entering the a-derivative remainder bounds.
#[derive(Clone, Copy, Debug)]
pub struct UaBoundConstants {
    pub c_chi: Interval,
    pub c_chi_a: Interval,
    pub c_1: Interval,
    pub c_2: Interval,
    pub rho_gamma: Interval,
    pub c_ru1: Interval,
    pub c_ru2: Interval,
    /// |U_a(a,b,z)| <= C_{U,a} |log(z) z^-a| for |z| >= |z1|, arg z = arg z1.
    pub c_ua: Interval,
}

fn check_ua_hypotheses(a: Complex, b: Complex, z: Complex, n: usize) -> Result<()> {
    hypothesis_s(a, b, z)?;
    if !(a.re.lo() > 0.0 && a.re.hi() < b.re.lo()) {
        return Err(Error::Hypothesis("need 0 < Re a < Re b".into()));
    }
    if n < 1 {
        return Err(Error::Hypothesis("a-derivative expansion needs n >= 1".into()));
    }
    let shifted = (a - b).re + Interval::point((n + 1) as f64);
    if !(shifted.lo() > 0.0) {
        return Err(Error::Hypothesis("need Re(a - b + n + 1) > 0".into()));
    }
    Ok(())
}

/// rho_gamma for gamma = arg z: 1 on |gamma| <= pi/2, 1/sin(pi - |gamma|)
/// beyond; hulled over the interval argument.
fn rho_gamma_of(arg: Interval) -> Result<Interval> {
    let g = arg.abs();
    let half_pi = elem::pi().ldexp(-1);
    if g.hi() <= half_pi.lo() {
        return Ok(Interval::ONE);
    }
    let s = elem::sin(elem::pi() - g);
    if !(s.lo() > 0.0) {
        return Err(Error::Hypothesis("arg z too close to the cut".into()));
    }
    Ok((Interval::ONE / s).hull(&Interval::ONE))
}

/// Compute the a-derivative bound constants at z1 (|z1| > 1).
pub fn ua_bound(a: Complex, b: Complex, n: usize, z1: Complex) -> Result<UaBoundConstants> {
    check_ua_hypotheses(a, b, z1, n)?;
    let z1abs = z1.abs();
    if !(z1abs.lo() > 1.0) {
        return Err(Error::Hypothesis("a-derivative bound needs |z1| > 1".into()));
    }
    let arg = z1.arg()?;
    let rho_gamma = rho_gamma_of(arg)?;

    let pi = elem::pi();
    let amb = (a - b).re; // Re(a - b) < 0
    let phase = (a - b + Complex::ONE).scale(pi);
    let sin_abs = phase.sin().abs();
    let cos_abs = phase.cos().abs();
    let mut fact_n = 1.0f64;
    for j in 2..=n {
        fact_n *= j as f64;
    }
    let gamma_neg = gamma_real(-amb)?;
    let gamma_n1 = gamma_real(amb + Interval::point((n + 1) as f64))?;
    let c_chi = sin_abs / pi * gamma_neg * gamma_n1 / Interval::point(fact_n);
    let gamma_n0 = gamma_real(amb + Interval::point(n as f64))?;
    let mut fact_nm1 = 1.0f64;
    for j in 2..n {
        fact_nm1 *= j as f64;
    }
    let c_chi_a = cos_abs * gamma_neg * gamma_n1 / Interval::point(fact_n)
        + sin_abs / pi
            * (Interval::ONE / amb.sqr() + gamma_neg * gamma_n0 / Interval::point(fact_nm1));

    let re_an = a.re + Interval::point(n as f64);
    let c_1 = gamma_real(re_an)?;
    let c_2 = Interval::ONE / re_an.sqr() + gamma_real(re_an + Interval::ONE)?;

    let gamma_a_abs = gamma_enclosure(a)?.abs();
    let exp_factor = elem::exp(-arg * a.im);
    let log_abs_z = elem::ln(z1abs)?.abs();
    let inv_log_abs = Interval::ONE / log_abs_z;
    let c_ru1 = rho_gamma * c_chi * exp_factor / gamma_a_abs
        * (c_1 + (arg.abs() * c_1 + c_2) * inv_log_abs);
    let log_z1 = z1.ln()?;
    let inv_log_mod = Interval::ONE / log_z1.abs();
    let c_ru2 = rho_gamma * c_chi_a * c_1 * exp_factor / gamma_a_abs * inv_log_mod;

    // C_{U,a}: termwise series plus the three remainder contributions
    let neg_z1_inv = (-z1).recip()?;
    let mut sum0 = Interval::ZERO;
    let mut sum1 = Interval::ZERO;
    let mut pw = Complex::ONE;
    for k in 0..n {
        sum0 += (p_uk(a, b, k) * pw).abs();
        sum1 += (p_uk_da(a, b, k) * pw).abs();
        pw = pw * neg_z1_inv;
    }
    let psi_a = digamma_enclosure(a)?;
    let psi_term = Interval::ONE + (psi_a.abs() * inv_log_mod);
    let cru = c_ru(a, b, n, z1)?;
    let z1_pow_neg_n = elem::pow(z1abs, Interval::point(-(n as f64)))?;
    let c_ua = sum0 + inv_log_mod * sum1 + (psi_term * cru + c_ru1 + c_ru2) * z1_pow_neg_n;

    Ok(UaBoundConstants {
        c_chi,
        c_chi_a,
        c_1,
        c_2,
        rho_gamma,
        c_ru1,
        c_ru2,
        c_ua,
    })
}

/// Enclosure of the a-derivative U_a(a, b, z) from its expansion: main terms,
/// the differentiated series, and three remainder disks, all times
/// log(z) z^-a.
pub fn ua_enclosure(a: Complex, b: Complex, z: Complex, n: usize) -> Result<Complex> {
    check_ua_hypotheses(a, b, z, n)?;
    let consts = ua_bound(a, b, n, z)?;
    let log_z = z.ln()?;
    let log_z_inv = log_z.recip()?;
    let neg_zinv = (-z).recip()?;
    let mut main = Complex::ZERO;
    let mut dseries = Complex::ZERO;
    let mut pw = Complex::ONE;
    for k in 0..n {
        main += p_uk(a, b, k) * pw;
        dseries += p_uk_da(a, b, k) * pw;
        pw = pw * neg_zinv;
    }
    let psi_a = digamma_enclosure(a)?;
    let ru = Complex::disk(c_ru(a, b, n, z)?.hi());
    let ru1 = Complex::disk(consts.c_ru1.hi());
    let ru2 = Complex::disk(consts.c_ru2.hi());
    let z_pow_neg_n = Complex::disk(0.0)
        + z.powi(n as i32)?.recip()?;
    let inner = -main
        + log_z_inv * dseries
        + ((Complex::ONE - psi_a * log_z_inv) * ru + ru1 + ru2) * z_pow_neg_n;
    let za = z.powc(&-a)?;
    Ok(inner * log_z * za)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::point(re, im)
    }

    #[test]
    fn gamma_at_one() {
        let g = gamma_enclosure(c(1.0, 0.0)).unwrap();
        assert!(g.contains(1.0, 0.0), "{g:?}");
        assert!(g.re.width() < 1e-12);
    }

    #[test]
    fn gamma_at_half_is_sqrt_pi() {
        let g = gamma_enclosure(c(0.5, 0.0)).unwrap();
        let sqrt_pi = 1.7724538509055160273;
        assert!(g.re.contains(sqrt_pi) || (g.re.mid() - sqrt_pi).abs() < 1e-13);
        assert!(g.re.lo() <= sqrt_pi && sqrt_pi <= g.re.hi());
    }

    #[test]
    fn gamma_factorial_recurrence() {
        let g5 = gamma_enclosure(c(5.0, 0.0)).unwrap();
        assert!(g5.re.contains(24.0));
        let g = gamma_real(Interval::point(5.5)).unwrap();
        assert!(g.contains(52.34277778455352));
    }

    #[test]
    fn digamma_at_one_is_minus_euler() {
        let d = digamma_enclosure(c(1.0, 0.0)).unwrap();
        let euler = 0.5772156649015328606;
        assert!(d.re.contains(-euler));
        assert!(d.re.width() < 1e-12);
    }

    #[test]
    fn u_with_a_zero_is_one() {
        // (0)_k = 0 for k >= 1 kills all terms but the first
        let u = u_enclosure(c(0.0, 0.0), c(1.5, 0.0), c(0.0, -100.0), 5).unwrap();
        assert!(u.contains(1.0, 0.0), "{u:?}");
    }

    #[test]
    fn u_with_b_a_plus_one_is_z_pow_minus_a() {
        let a = c(0.7, 0.3);
        let b = a + Complex::ONE;
        let z = c(5.0, -80.0);
        let u = u_enclosure(a, b, z, 6).unwrap();
        let za = z.powc(&-a).unwrap();
        assert!(u.intersect(&za).is_some(), "{u:?} vs {za:?}");
    }

    #[test]
    fn u_deriv_order_zero_matches() {
        let a = c(0.5, 0.545);
        let b = c(1.5, 0.0);
        let z = c(0.0, -1651.24);
        let u0 = u_enclosure(a, b, z, 5).unwrap();
        let d0 = u_deriv_enclosure(a, b, z, 0, 5).unwrap();
        assert_eq!(u0.re.lo(), d0.re.lo());
    }

    #[test]
    fn u_deriv_a_zero_vanishes() {
        let d = u_deriv_enclosure(c(0.0, 0.0), c(1.5, 0.0), c(0.0, -100.0), 1, 5).unwrap();
        assert!(d.contains(0.0, 0.0));
        assert_eq!(d.abs().hi(), 0.0);
    }

    #[test]
    fn expansion_lengths_intersect() {
        let a = c(0.5, 0.545);
        let b = c(1.5, 0.0);
        let z = c(0.0, -1651.24);
        let mut encs = Vec::new();
        for n in 2..=10 {
            encs.push(u_enclosure(a, b, z, n).unwrap());
        }
        let mut inter = encs[0];
        for e in &encs[1..] {
            for (x, y) in encs.iter().zip(encs.iter().skip(1)) {
                assert!(x.intersect(y).is_some());
            }
            inter = inter.intersect(e).expect("all contain the true value");
        }
        assert!(inter.width() > 0.0 || inter.re.lo() <= inter.re.hi());
    }

    #[test]
    fn c_ru_decreasing_in_abs_z() {
        let a = c(0.5, 0.545);
        let b = c(1.5, 0.0);
        let mut prev = f64::INFINITY;
        for mag in [50.0, 100.0, 400.0, 1600.0, 6400.0] {
            let z = c(0.0, -mag);
            let v = c_ru(a, b, 5, z).unwrap().hi();
            assert!(v <= prev * (1.0 + 1e-12), "C_RU not decreasing at |z|={mag}");
            prev = v;
        }
    }

    #[test]
    fn rho_gamma_is_one_in_right_half_plane() {
        let z = c(30.0, 25.0);
        let r = rho_gamma_of(z.arg().unwrap()).unwrap();
        assert_eq!(r, Interval::ONE);
    }

    #[test]
    fn c1_is_gamma_of_shifted_re() {
        // a = 0.5 + 0.545i, n = 5: C_1 = Gamma(5.5)
        let a = c(0.5, 0.545);
        let b = c(1.5, 0.0);
        let z1 = c(0.0, -1651.24);
        let k = ua_bound(a, b, 5, z1).unwrap();
        assert!(k.c_1.contains(52.34277778455352), "{:?}", k.c_1);
    }
}

/// Adaptive-length variant of [`u_deriv_enclosure`].
pub fn u_deriv_enclosure_adaptive(a: Complex, b: Complex, z: Complex, m: usize) -> Result<Complex> {
    assert!(m <= 3);
    if m == 0 {
        return u_enclosure_adaptive(a, b, z);
    }
    let shift = Complex::real(Interval::from(m as i32));
    let u = u_enclosure_adaptive(a + shift, b + shift, z)?;
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    Ok((u * rising(a, m)).scale(Interval::point(sign)))
}

/// Adaptive-length variant of [`ua_enclosure`].
pub fn ua_enclosure_adaptive(a: Complex, b: Complex, z: Complex) -> Result<Complex> {
    let mut best: Option<Complex> = None;
    for n in 2..=10 {
        if let Ok(enc) = ua_enclosure(a, b, z, n) {
            best = Some(match best {
                None => enc,
                Some(prev) => prev.intersect(&enc).unwrap_or(if enc.width() < prev.width() {
                    enc
                } else {
                    prev
                }),
            });
        }
    }
    best.ok_or_else(|| Error::Hypothesis("no expansion length admissible for U_a".into()))
}
