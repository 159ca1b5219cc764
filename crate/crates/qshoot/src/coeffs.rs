//! The fundamental-solution data: (a, b, c) and B_W with their parameter
//! derivatives, asymptotic coefficient constants C_* bounding P, E, W, J_P,
//! J_E, D, H and their xi/kappa/epsilon derivatives for xi >= xi1, and point
//! enclosures of the same functions at a given xi.
//!
//! Each constant transcribes the explicit expression from its bound proof.
//! Where a function combines several oscillating terms of similar size
//! (P'', P''', J_E', J_E''), the terms are merged into a single asymptotic
//! expansion before taking absolute values; everything else is bounded
//! termwise.

use ival::{elem, Complex, Interval};
use serde_json::json;

use crate::params::Params;
use crate::specfun::{self, c_ru, c_u, c_u_deriv, p_uk, ua_bound};
use crate::{Error, Result};

/// (a, b, c), B_W and their kappa/epsilon derivatives.
#[derive(Clone, Copy, Debug)]
pub struct Abc {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub a_kappa: Complex,
    pub c_kappa: Complex,
    pub c_epsilon: Complex,
    pub b_w: Complex,
    pub b_w_kappa: Complex,
    pub b_w_epsilon: Complex,
}

/// a = (1/sigma + i omega/kappa)/2, b = d/2, c = -i kappa / (2 (1 - i eps)),
/// B_W = -((1 + i delta)/(i kappa)) e^(pi i (b - a)) c^b; derivative fields by
/// differentiating the closed forms.
pub fn abc_params(p: &Params) -> Result<Abc> {
    p.validate()?;
    let i = Complex::I;
    let half = Interval::point(0.5);
    let a = Complex::new(
        (Interval::ONE / p.sigma).ldexp(-1),
        (p.omega / p.kappa).ldexp(-1),
    );
    let b = Complex::real(Interval::point(p.d as f64).ldexp(-1));
    let one_m_ieps = Complex::ONE - i.scale(p.epsilon);
    let c = (-i).scale(p.kappa * half).div_checked(&one_m_ieps)?;
    // Im c = -kappa / (2 (1 + eps^2)) < 0 pins the W phase sign
    if !(c.im.hi() < 0.0) {
        return Err(Error::Domain("Im c must be negative".into()));
    }
    let a_kappa = (-i).scale(p.omega * half / p.kappa.sqr());
    let c_kappa = (-i).scale(half).div_checked(&one_m_ieps)?;
    let c_epsilon = Complex::real(p.kappa * half).div_checked(&(one_m_ieps * one_m_ieps))?;

    let one_p_idelta = Complex::ONE + i.scale(p.delta);
    let phase = ((b - a) * i.scale(elem::pi())).exp();
    let c_pow_b = c.powc(&b)?;
    let b_w = -(one_p_idelta.div_checked(&i.scale(p.kappa))?) * phase * c_pow_b;
    // d/dkappa log B_W = -1/kappa - pi i a_kappa + b c_kappa / c
    let log_der_k = -Complex::real(Interval::ONE / p.kappa) - a_kappa * i.scale(elem::pi())
        + b * c_kappa.div_checked(&c)?;
    let b_w_kappa = b_w * log_der_k;
    let b_w_epsilon = b_w * (b * c_epsilon.div_checked(&c)?);

    Ok(Abc {
        a,
        b,
        c,
        a_kappa,
        c_kappa,
        c_epsilon,
        b_w,
        b_w_kappa,
        b_w_epsilon,
    })
}

/// Upper bounds C_* for the asymptotic profiles on [xi1, inf). All entries
/// are finite and nonnegative.
#[derive(Clone, Copy, Debug)]
pub struct CoefficientTable {
    pub c_p: Interval,
    pub c_p1: Interval,
    pub c_p2: Interval,
    pub c_p3: Interval,
    pub c_p_k: Interval,
    pub c_p1_k: Interval,
    pub c_p2_k: Interval,
    pub c_p_e: Interval,
    pub c_p1_e: Interval,
    pub c_p2_e: Interval,
    pub c_e: Interval,
    pub c_e1: Interval,
    pub c_e2: Interval,
    pub c_e3: Interval,
    pub c_e_k: Interval,
    pub c_e1_k: Interval,
    pub c_e_e: Interval,
    pub c_e1_e: Interval,
    pub c_jp: Interval,
    pub c_jp1: Interval,
    pub c_jp2: Interval,
    pub c_jp_k: Interval,
    pub c_jp_e: Interval,
    pub c_je: Interval,
    pub c_je1: Interval,
    pub c_je2: Interval,
    pub c_je_k: Interval,
    pub c_je_e: Interval,
    pub c_d: Interval,
    pub c_d1: Interval,
    pub c_d2: Interval,
    pub c_h: Interval,
    pub c_h1: Interval,
    pub c_h2: Interval,
}

/// Upper bound of sup over [xi1, inf) of log(xi)^p xi^e, for e < 0 and
/// p in {0, 1}. For p = 1 the maximizer is exp(-1/e) with value -1/(e e^1).
pub fn sup_log_profile(p: u32, e: Interval, xi1: Interval) -> Result<Interval> {
    if !(e.hi() < 0.0) {
        return Err(Error::Hypothesis("profile exponent must be negative".into()));
    }
    let at_xi1 = elem::pow(xi1, e)?;
    if p == 0 {
        return Ok(at_xi1);
    }
    let xstar = elem::exp(-e.recip()?);
    let log_xi1 = elem::ln(xi1)?;
    if xi1.lo() >= xstar.hi() {
        Ok(log_xi1 * at_xi1)
    } else {
        // global maximum, also valid when xi1 straddles the maximizer
        let e_const = elem::exp(Interval::ONE);
        let global = -(e * e_const).recip()?;
        Ok(global.hull(&(log_xi1 * at_xi1)).hull(&Interval::ZERO))
    }
}

fn upper(v: Interval) -> Interval {
    Interval::new(v.lo().max(0.0).min(v.hi().max(0.0)), v.hi().max(0.0))
}

fn t_complex(t: Interval) -> Complex {
    Complex::real(t)
}

/// Evaluate all coefficient constants at expansion length n.
pub fn coefficient_table(p: &Params, n: usize) -> Result<CoefficientTable> {
    let abc = abc_params(p)?;
    let (a, b, c) = (abc.a, abc.b, abc.c);
    let xi1 = p.xi1;
    let z1 = c.scale(xi1.sqr());
    let w1 = -z1;
    let ba = b - a;
    let one = Complex::ONE;
    let two = one + one;
    let three = two + one;

    // recurring magnitudes
    let c_pow_neg_a = c.powc(&-a)?.abs();
    let negc_pow_amb = (-c).powc(&(a - b))?.abs();
    let c_abs = c.abs();
    let xi1_m2 = xi1.sqr().recip()?;
    let t = Interval::new(0.0, xi1_m2.hi()); // range of xi^-2 on [xi1, inf)
    let log_xi1 = elem::ln(xi1)?;
    let inv_log_xi1 = log_xi1.recip()?;
    let log_c_abs = c.ln()?.abs();
    let log_negc_abs = (-c).ln()?.abs();
    // |log(z xi^2)| <= 2 log xi + |log z| splits off the log-premium factors
    let prem_c = Interval::from(2) + log_c_abs * inv_log_xi1;
    let prem_negc = Interval::from(2) + log_negc_abs * inv_log_xi1;
    let sup_log_xi_m2 = sup_log_profile(1, Interval::point(-2.0), xi1)?;
    let sup_log_xi_m4 = sup_log_profile(1, Interval::point(-4.0), xi1)?;

    let cu = |aa: Complex, bb: Complex, zz: Complex| c_u(aa, bb, n, zz);
    let cud = |aa: Complex, bb: Complex, m: usize, zz: Complex| c_u_deriv(aa, bb, m, n, zz);
    let sh = |m: usize| Complex::real(Interval::from(m as i32));

    // --- P family ---
    let cu_p1 = cud(a, b, 1, z1)?;
    let cu_p2 = cud(a, b, 2, z1)?;
    let cu_p3 = cud(a, b, 3, z1)?;
    let c_p = cu(a, b, z1)? * c_pow_neg_a;
    let c_p1 = cu_p1 * c_pow_neg_a.ldexp(1);

    let z1_inv_abs = z1.abs().recip()?;
    // combined expansion of two shifted series with complex coefficients
    let combined = |base: Complex, base_b: Complex, terms: &[(Complex, usize)]| -> Result<Interval> {
        let mut sum = Interval::ZERO;
        let mut zp = Interval::ONE;
        for k in 0..n {
            let mut acc = Complex::ZERO;
            for (coef, m) in terms {
                acc += *coef * p_uk(base + sh(*m), base_b + sh(*m), k);
            }
            sum += acc.abs() * zp;
            zp = zp * z1_inv_abs;
        }
        let mut rem = Interval::ZERO;
        for (coef, m) in terms {
            rem += coef.abs() * c_ru(base + sh(*m), base_b + sh(*m), n, z1)?;
        }
        Ok(sum + rem * zp)
    };
    // P'' = 2 a c^-a (c xi^2)^-a xi^-2 [2(a+1) S_(a+2,b+2) - S_(a+1,b+1)]
    let c_p2 =
        (a * two).abs() * c_pow_neg_a * combined(a, b, &[(two * (a + one), 2), (-one, 1)])?;
    // P''' = 4 a (a+1) c^-a ... [-2(a+2) S_(a+3,b+3) + 3 S_(a+2,b+2)]
    let c_p3 = (a * (a + one)).abs().ldexp(2)
        * c_pow_neg_a
        * combined(a, b, &[(-(two * (a + two)), 3), (three, 2)])?;

    // --- P kappa/epsilon derivatives ---
    let ua_ab = ua_bound(a, b, n, z1)?.c_ua;
    let ua_a1 = ua_bound(a + one, b + one, n, z1)?.c_ua;
    let ua_a2 = ua_bound(a + two, b + two, n, z1)?.c_ua;
    let cu_a1 = cu(a + one, b + one, z1)?;
    let cu_a2 = cu(a + two, b + two, z1)?;
    let ck_abs = abc.c_kappa.abs();
    let ce_abs = abc.c_epsilon.abs();
    let ak_abs = abc.a_kappa.abs();
    let c_pow_neg_a_m1 = c_pow_neg_a / c_abs;

    let c_p_k =
        c_pow_neg_a_m1 * ck_abs * cu_p1 * inv_log_xi1 + c_pow_neg_a * ak_abs * ua_ab * prem_c;
    let c_p1_k = (c_pow_neg_a_m1 * ck_abs * (cu_p1 + cu_p2) * inv_log_xi1
        + c_pow_neg_a * ak_abs * (cu_a1 * inv_log_xi1 + a.abs() * ua_a1 * prem_c))
        .ldexp(1);
    let c_p2_k = c_pow_neg_a_m1 * ck_abs * cu_p1.ldexp(1) * inv_log_xi1
        + c_pow_neg_a_m1 * ck_abs * cu_p2 * Interval::point(10.0) * inv_log_xi1
        + c_pow_neg_a_m1 * ck_abs * cu_p3.ldexp(2) * inv_log_xi1
        + c_pow_neg_a * ak_abs * cu_a1.ldexp(1) * inv_log_xi1
        + c_pow_neg_a * (a.abs() * ak_abs).ldexp(1) * ua_a1 * prem_c
        + c_pow_neg_a * ((two * a + one).abs() * ak_abs).ldexp(2) * cu_a2 * inv_log_xi1
        + c_pow_neg_a * (a * (a + one)).abs().ldexp(2) * ak_abs * ua_a2 * prem_c;

    let c_p_e = c_pow_neg_a_m1 * ce_abs * cu_p1;
    let c_p1_e = (c_pow_neg_a_m1 * ce_abs * (cu_p1 + cu_p2)).ldexp(1);
    let c_p2_e = c_pow_neg_a_m1
        * ce_abs
        * (cu_p1.ldexp(1) + cu_p2 * Interval::point(10.0) + cu_p3.ldexp(2));

    // --- E family ---
    let cu_e0 = cu(ba, b, w1)?;
    let cu_e1 = cud(ba, b, 1, w1)?;
    let cu_e2 = cud(ba, b, 2, w1)?;
    let cu_e3 = cud(ba, b, 3, w1)?;
    let negc_m = |m: i32| -> Result<Interval> { Ok(negc_pow_amb * elem::pow(c_abs, Interval::from(-m))?) };
    let c_e = cu_e0 * negc_pow_amb;
    let c_e1 =
        c_abs.ldexp(1) * negc_pow_amb * cu_e0 + c_abs.ldexp(1) * negc_m(1)? * cu_e1 * xi1_m2;
    // |4 c^2 xi^2 + 2 c| / xi^2 ranges over |4 c^2 + 2 c t|, t in [0, xi1^-2]
    let tfac = |p_hi: Complex, p_lo: Complex| (p_hi + p_lo * t_complex(t)).abs();
    let c2 = c * c;
    let c3 = c2 * c;
    let c_e2 = tfac(c2.scale(Interval::from(4)), c.scale(Interval::from(2))) * negc_pow_amb * cu_e0
        + tfac(c2.scale(Interval::from(8)), c.scale(Interval::from(2))) * negc_m(1)? * cu_e1 * xi1_m2
        + c2.abs().ldexp(2) * negc_m(2)? * cu_e2 * xi1_m2.sqr();
    let c_e3 = tfac(c3.scale(Interval::from(8)), c2.scale(Interval::from(12)))
        * negc_pow_amb
        * cu_e0
        + tfac(c3.scale(Interval::from(24)), c2.scale(Interval::from(24)))
            * negc_m(1)?
            * cu_e1
            * xi1_m2
        + tfac(c3.scale(Interval::from(24)), c2.scale(Interval::from(12)))
            * negc_m(2)?
            * cu_e2
            * xi1_m2.sqr()
        + c3.abs().ldexp(3) * negc_m(3)? * cu_e3 * xi1_m2 * xi1_m2.sqr();

    let ua_e0 = ua_bound(ba, b, n, w1)?.c_ua;
    let ua_e1 = ua_bound(ba + one, b + one, n, w1)?.c_ua;
    let cu_ba1 = cu(ba + one, b + one, w1)?;
    let c_e_k = negc_pow_amb * ck_abs * cu_e0
        + negc_pow_amb * ak_abs * ua_e0 * prem_negc * sup_log_xi_m2
        + negc_m(1)? * ck_abs * cu_e1 * xi1_m2;
    let c_e1_k = (negc_pow_amb * ck_abs * (c + t_complex(t)).abs() * cu_e0
        + negc_m(1)? * ck_abs * (c.scale(Interval::from(2)) + t_complex(t)).abs() * cu_e1 * xi1_m2
        + negc_pow_amb * ak_abs * c_abs * ua_e0 * prem_negc * sup_log_xi_m2
        + negc_m(2)? * ck_abs * c_abs * cu_e2 * xi1_m2.sqr()
        + negc_m(1)? * ak_abs * c_abs * cu_ba1 * xi1_m2.sqr()
        + negc_m(1)? * (ba.abs() * ak_abs) * c_abs * ua_e1 * prem_negc * sup_log_xi_m4)
        .ldexp(1);

    let c_e_e = negc_pow_amb * ce_abs * cu_e0 + negc_m(1)? * ce_abs * cu_e1 * xi1_m2;
    let c_e1_e = (negc_pow_amb * ce_abs * (c + t_complex(t)).abs() * cu_e0
        + negc_m(1)? * ce_abs * (c.scale(Interval::from(2)) + t_complex(t)).abs() * cu_e1 * xi1_m2
        + negc_m(2)? * ce_abs * c_abs * cu_e2 * xi1_m2.sqr())
    .ldexp(1);

    // --- J_P family ---
    let bw_abs = abc.b_w.abs();
    let bwk_abs = abc.b_w_kappa.abs();
    let bwe_abs = abc.b_w_epsilon.abs();
    let d = p.d as f64;
    let dm1 = Interval::point(d - 1.0);
    let c_jp = bw_abs * c_p;
    let c_jp1 = bw_abs
        * (c_p * (c.scale(Interval::from(-2)) + t_complex(t).scale(dm1)).abs() + c_p1 * xi1_m2);
    let c_jp2 = bw_abs
        * (c_p
            * (c2.scale(Interval::from(4)) + c.scale(Interval::point(-2.0 * (2.0 * d - 1.0)) * t)
                + t_complex(t.sqr()).scale(Interval::point((d - 1.0) * (d - 2.0))))
            .abs()
            + c_p1
                * (c.scale(Interval::from(-4)) + t_complex(t).scale(dm1.ldexp(1))).abs()
                * xi1_m2
            + c_p2 * xi1_m2.sqr());
    let c_jp_k = c_p * (ck_abs * bw_abs + bwk_abs * xi1_m2) + c_p_k * bw_abs * sup_log_xi_m2;
    let c_jp_e = c_p * (ce_abs * bw_abs + bwe_abs * xi1_m2) + c_p_e * bw_abs * xi1_m2;

    // --- J_E family ---
    let c_je = bw_abs * c_e;
    let combined_e = |terms: &[(Complex, usize)]| combined(ba, b, terms);
    // the combined helper evaluates C_RU against z1; only |z1| enters, so the
    // sign flip to -c xi1^2 is immaterial
    let c_je1 = bw_abs
        * negc_pow_amb
        * combined_e(&[(Complex::real(dm1), 0), (-(ba.scale(Interval::from(2))), 1)])?;
    let c_je2 = bw_abs
        * negc_pow_amb
        * combined_e(&[
            (Complex::real(dm1 * Interval::point(d - 2.0)), 0),
            (-(ba.scale(Interval::point(2.0 * (2.0 * d - 1.0)))), 1),
            ((ba * (ba + one)).scale(Interval::from(4)), 2),
        ])?;
    let c_je_k = ua_e0 * bw_abs * negc_pow_amb * ak_abs * prem_negc
        + cu_e0 * bwk_abs * negc_pow_amb * inv_log_xi1
        + cu_e1 * bw_abs * negc_m(1)? * ck_abs * inv_log_xi1;
    let c_je_e = cu_e0 * bwe_abs * negc_pow_amb + cu_e1 * bw_abs * negc_m(1)? * ce_abs;

    // --- D and H ---
    let c_d = ck_abs * bw_abs * c_p + bwk_abs * c_p * xi1_m2 + bw_abs * c_p_k * sup_log_xi_m2;
    let c_d1 = ck_abs * bw_abs * c_p1
        + (bwk_abs * (c_p1 + c_p.ldexp(1))) * xi1_m2
        + bw_abs * (c_p1_k + c_p_k.ldexp(1)) * sup_log_xi_m2;
    let c_d2 = ck_abs * bw_abs * c_p2
        + (bwk_abs * (c_p2 + c_p1.ldexp(2) + c_p * Interval::from(6))) * xi1_m2
        + bw_abs * (c_p2_k + c_p1_k.ldexp(2) + c_p_k * Interval::from(6)) * sup_log_xi_m2;
    let c_h = ce_abs * bw_abs * c_p + (bwe_abs * c_p + bw_abs * c_p_e) * xi1_m2;
    let c_h1 = ce_abs * bw_abs * c_p1
        + (bwe_abs * (c_p1 + c_p.ldexp(1)) + bw_abs * (c_p1_e + c_p_e.ldexp(1))) * xi1_m2;
    let c_h2 = ce_abs * bw_abs * c_p2
        + (bwe_abs * (c_p2 + c_p1.ldexp(2) + c_p * Interval::from(6))
            + bw_abs * (c_p2_e + c_p1_e.ldexp(2) + c_p_e * Interval::from(6)))
            * xi1_m2;

    let table = CoefficientTable {
        c_p: upper(c_p),
        c_p1: upper(c_p1),
        c_p2: upper(c_p2),
        c_p3: upper(c_p3),
        c_p_k: upper(c_p_k),
        c_p1_k: upper(c_p1_k),
        c_p2_k: upper(c_p2_k),
        c_p_e: upper(c_p_e),
        c_p1_e: upper(c_p1_e),
        c_p2_e: upper(c_p2_e),
        c_e: upper(c_e),
        c_e1: upper(c_e1),
        c_e2: upper(c_e2),
        c_e3: upper(c_e3),
        c_e_k: upper(c_e_k),
        c_e1_k: upper(c_e1_k),
        c_e_e: upper(c_e_e),
        c_e1_e: upper(c_e1_e),
        c_jp: upper(c_jp),
        c_jp1: upper(c_jp1),
        c_jp2: upper(c_jp2),
        c_jp_k: upper(c_jp_k),
        c_jp_e: upper(c_jp_e),
        c_je: upper(c_je),
        c_je1: upper(c_je1),
        c_je2: upper(c_je2),
        c_je_k: upper(c_je_k),
        c_je_e: upper(c_je_e),
        c_d: upper(c_d),
        c_d1: upper(c_d1),
        c_d2: upper(c_d2),
        c_h: upper(c_h),
        c_h1: upper(c_h1),
        c_h2: upper(c_h2),
    };
    for (name, v) in table.entries() {
        if !(v.is_finite() && v.hi() >= 0.0) {
            return Err(Error::Hypothesis(format!("coefficient {name} not finite")));
        }
    }
    Ok(table)
}

impl CoefficientTable {
    pub fn entries(&self) -> Vec<(&'static str, Interval)> {
        vec![
            ("C_P", self.c_p),
            ("C_P'", self.c_p1),
            ("C_P''", self.c_p2),
            ("C_P'''", self.c_p3),
            ("C_P,k", self.c_p_k),
            ("C_P',k", self.c_p1_k),
            ("C_P'',k", self.c_p2_k),
            ("C_P,e", self.c_p_e),
            ("C_P',e", self.c_p1_e),
            ("C_P'',e", self.c_p2_e),
            ("C_E", self.c_e),
            ("C_E'", self.c_e1),
            ("C_E''", self.c_e2),
            ("C_E'''", self.c_e3),
            ("C_E,k", self.c_e_k),
            ("C_E',k", self.c_e1_k),
            ("C_E,e", self.c_e_e),
            ("C_E',e", self.c_e1_e),
            ("C_JP", self.c_jp),
            ("C_JP'", self.c_jp1),
            ("C_JP''", self.c_jp2),
            ("C_JP,k", self.c_jp_k),
            ("C_JP,e", self.c_jp_e),
            ("C_JE", self.c_je),
            ("C_JE'", self.c_je1),
            ("C_JE''", self.c_je2),
            ("C_JE,k", self.c_je_k),
            ("C_JE,e", self.c_je_e),
            ("C_D", self.c_d),
            ("C_D'", self.c_d1),
            ("C_D''", self.c_d2),
            ("C_H", self.c_h),
            ("C_H'", self.c_h1),
            ("C_H''", self.c_h2),
        ]
    }

    /// Audit dump: constant name -> interval string.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (name, v) in self.entries() {
            map.insert(name.to_string(), json!(v.to_string()));
        }
        serde_json::Value::Object(map)
    }
}

/// Point enclosures of the fundamental solutions and derived functions at a
/// single xi.
#[derive(Clone, Copy, Debug)]
pub struct PointFunctions {
    pub p: Complex,
    pub p1: Complex,
    pub p2: Complex,
    pub p3: Complex,
    pub p_k: Complex,
    pub p1_k: Complex,
    pub p2_k: Complex,
    pub p_e: Complex,
    pub p1_e: Complex,
    pub p2_e: Complex,
    pub e: Complex,
    pub e1: Complex,
    pub e2: Complex,
    pub e3: Complex,
    pub e_k: Complex,
    pub e1_k: Complex,
    pub e_e: Complex,
    pub e1_e: Complex,
    pub w: Complex,
    pub jp: Complex,
    pub je: Complex,
    pub je_k: Complex,
    pub je_e: Complex,
    pub d_fn: Complex,
    pub d1_fn: Complex,
    pub h_fn: Complex,
    pub h1_fn: Complex,
}

/// Evaluate P, E, W, J_P, J_E, D, H and derivatives at xi through the
/// hypergeometric enclosures (adaptive expansion length).
pub fn pew_point(p: &Params, xi: Interval) -> Result<PointFunctions> {
    let abc = abc_params(p)?;
    let (a, b, c) = (abc.a, abc.b, abc.c);
    let xi2 = xi.sqr();
    let z = c.scale(xi2);
    let w_arg = -z;
    let ba = b - a;
    let one = Complex::ONE;
    let two = one + one;

    let u = |aa: Complex, bb: Complex, zz: Complex| specfun::u_enclosure_adaptive(aa, bb, zz);
    let sh = |m: i32| Complex::real(Interval::from(m));

    let u_p = [
        u(a, b, z)?,
        specfun::u_deriv_enclosure_adaptive(a, b, z, 1)?,
        specfun::u_deriv_enclosure_adaptive(a, b, z, 2)?,
        specfun::u_deriv_enclosure_adaptive(a, b, z, 3)?,
    ];
    let u_e = [
        u(ba, b, w_arg)?,
        specfun::u_deriv_enclosure_adaptive(ba, b, w_arg, 1)?,
        specfun::u_deriv_enclosure_adaptive(ba, b, w_arg, 2)?,
        specfun::u_deriv_enclosure_adaptive(ba, b, w_arg, 3)?,
    ];
    let xi_c = Complex::real(xi);
    let xi2_c = Complex::real(xi2);
    let xi3_c = xi_c * xi2_c;
    let c2 = c * c;
    let c3 = c2 * c;

    let p0 = u_p[0];
    let p1 = c.scale(Interval::from(2)) * xi_c * u_p[1];
    let p2 = c2.scale(Interval::from(4)) * xi2_c * u_p[2] + c.scale(Interval::from(2)) * u_p[1];
    let p3 = c3.scale(Interval::from(8)) * xi3_c * u_p[3]
        + c2.scale(Interval::from(12)) * xi_c * u_p[2];

    let exp_cz = z.exp();
    let e0 = exp_cz * u_e[0];
    let e1 = c.scale(Interval::from(2)) * xi_c * exp_cz * (u_e[0] - u_e[1]);
    let e2 = exp_cz
        * ((c2.scale(Interval::from(4)) * xi2_c + c.scale(Interval::from(2))) * u_e[0]
            - (c2.scale(Interval::from(8)) * xi2_c + c.scale(Interval::from(2))) * u_e[1]
            + c2.scale(Interval::from(4)) * xi2_c * u_e[2]);
    let e3 = exp_cz
        * ((c3.scale(Interval::from(8)) * xi3_c + c2.scale(Interval::from(12)) * xi_c) * u_e[0]
            - (c3.scale(Interval::from(24)) * xi3_c + c2.scale(Interval::from(24)) * xi_c)
                * u_e[1]
            + (c3.scale(Interval::from(24)) * xi3_c + c2.scale(Interval::from(12)) * xi_c)
                * u_e[2]
            - c3.scale(Interval::from(8)) * xi3_c * u_e[3]);

    let ua_p0 = specfun::ua_enclosure_adaptive(a, b, z)?;
    let ua_p1 = specfun::ua_enclosure_adaptive(a + one, b + one, z)?;
    let ua_p2 = specfun::ua_enclosure_adaptive(a + two, b + two, z)?;
    let u_a1 = u(a + sh(1), b + sh(1), z)?;
    let u_a2 = u(a + sh(2), b + sh(2), z)?;
    let ua_e0 = specfun::ua_enclosure_adaptive(ba, b, w_arg)?;
    let ua_e1 = specfun::ua_enclosure_adaptive(ba + one, b + one, w_arg)?;
    let u_ba1 = u(ba + one, b + one, w_arg)?;

    let ak = abc.a_kappa;
    let ck = abc.c_kappa;
    let ce = abc.c_epsilon;

    let p_k = ck * u_p[1] * xi2_c + ak * ua_p0;
    let p1_k = (ck * u_p[1] * xi_c + ck * c * u_p[2] * xi3_c
        - ak * c * u_a1 * xi_c
        - ak * a * c * ua_p1 * xi_c)
        .scale(Interval::from(2));
    let p2_k = ck.scale(Interval::from(2)) * u_p[1]
        + ck.scale(Interval::from(10)) * c * u_p[2] * xi2_c
        + ck.scale(Interval::from(4)) * c2 * u_p[3] * xi2_c * xi2_c
        - ak.scale(Interval::from(2)) * c * u_a1
        - (ak * a).scale(Interval::from(2)) * c * ua_p1
        + (ak * (a.scale(Interval::from(2)) + one)).scale(Interval::from(4)) * c2 * u_a2 * xi2_c
        + (ak * a * (a + one)).scale(Interval::from(4)) * c2 * ua_p2 * xi2_c;

    let p_e = ce * u_p[1] * xi2_c;
    let p1_e = (ce * u_p[1] * xi_c + ce * c * u_p[2] * xi3_c).scale(Interval::from(2));
    let p2_e = ce.scale(Interval::from(2)) * u_p[1]
        + ce.scale(Interval::from(10)) * c * u_p[2] * xi2_c
        + ce.scale(Interval::from(4)) * c2 * u_p[3] * xi2_c * xi2_c;

    let e_k = exp_cz * (ck * u_e[0] * xi2_c - ak * ua_e0 - ck * u_e[1] * xi2_c);
    let e1_k = (exp_cz
        * xi_c
        * (ck * (one + c * xi2_c) * u_e[0]
            - ck * (one + c.scale(Interval::from(2)) * xi2_c) * u_e[1]
            - ak * c * ua_e0
            + c * ck * u_e[2] * xi2_c
            - ak * c * u_ba1
            - ba * ak * c * ua_e1))
        .scale(Interval::from(2));
    let e_e = ce * exp_cz * xi2_c * (u_e[0] - u_e[1]);
    let e1_e = (ce
        * exp_cz
        * xi_c
        * ((one + c * xi2_c) * u_e[0] - (one + c.scale(Interval::from(2)) * xi2_c) * u_e[1]
            + c * u_e[2] * xi2_c))
        .scale(Interval::from(2));

    // W = 2 c e^(sign(Im c) pi i (b - a)) xi (c xi^2)^-b e^(c xi^2);
    // Im c < 0 fixes the sign to -1 (B_W carries the opposite phase)
    let phase = ((a - b) * Complex::I.scale(elem::pi())).exp();
    let w = c.scale(Interval::from(2)) * phase * xi_c * z.powc(&-b)? * exp_cz;

    let d_int = p.d as i32;
    let xi_pow =
        |e: i32| -> Result<Complex> { Ok(Complex::real(elem::pow(xi, Interval::from(e))?)) };
    let exp_negcz = (-z).exp();
    let jp = abc.b_w * p0 * exp_negcz * xi_pow(d_int - 1)?;
    let je = abc.b_w * u_e[0] * xi_pow(d_int - 1)?;
    let je_k = u_e[0] * abc.b_w_kappa * xi_pow(d_int - 1)?
        - ua_e0 * ak * abc.b_w * xi_pow(d_int - 1)?
        - u_e[1] * ck * abc.b_w * xi_pow(d_int + 1)?;
    let je_e = u_e[0] * abc.b_w_epsilon * xi_pow(d_int - 1)?
        - u_e[1] * ce * abc.b_w * xi_pow(d_int + 1)?;

    let xim2 = Complex::real(xi2.recip()?);
    let xim3 = xim2 * Complex::real(xi.recip()?);
    let d_fn = p0 * (-(ck * abc.b_w) + abc.b_w_kappa * xim2) + p_k * abc.b_w * xim2;
    let d1_fn = -(ck * abc.b_w) * p1 + abc.b_w_kappa * p1 * xim2
        - abc.b_w_kappa.scale(Interval::from(2)) * p0 * xim3
        + abc.b_w * p1_k * xim2
        - abc.b_w.scale(Interval::from(2)) * p_k * xim3;
    let h_fn = p0 * (-(ce * abc.b_w) + abc.b_w_epsilon * xim2) + p_e * abc.b_w * xim2;
    let h1_fn = -(ce * abc.b_w) * p1 + abc.b_w_epsilon * p1 * xim2
        - abc.b_w_epsilon.scale(Interval::from(2)) * p0 * xim3
        + abc.b_w * p1_e * xim2
        - abc.b_w.scale(Interval::from(2)) * p_e * xim3;

    Ok(PointFunctions {
        p: p0,
        p1,
        p2,
        p3,
        p_k,
        p1_k,
        p2_k,
        p_e,
        p1_e,
        p2_e,
        e: e0,
        e1,
        e2,
        e3,
        e_k,
        e1_k,
        e_e,
        e1_e,
        w,
        jp,
        je,
        je_k,
        je_e,
        d_fn,
        d1_fn,
        h_fn,
        h1_fn,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cases;

    #[test]
    fn abc_closed_forms() {
        let p = cases::case2_params(1).unwrap();
        let abc = abc_params(&p).unwrap();
        assert_eq!(abc.b.re, Interval::point(1.5));
        assert!(abc.a.re.contains(0.5));
        assert!(abc.a.im.contains(0.5450446014005125), "{:?}", abc.a.im);
    }

    #[test]
    fn c_for_unit_kappa_eps_zero() {
        let mut p = cases::case2_params(1).unwrap();
        p.kappa = Interval::ONE;
        p.epsilon = Interval::ZERO;
        let abc = abc_params(&p).unwrap();
        assert!(abc.c.contains(0.0, -0.5));
        assert!(abc.c.width() < 1e-15);
    }

    #[test]
    fn cjp_is_bw_times_cp() {
        let p = cases::case2_params(1).unwrap();
        let abc = abc_params(&p).unwrap();
        let ct = coefficient_table(&p, 5).unwrap();
        let expect = abc.b_w.abs() * ct.c_p;
        assert!(ct.c_jp.intersect(&expect).is_some());
    }

    #[test]
    fn table_finite_positive_case2() {
        let p = cases::case2_params(1).unwrap();
        let ct = coefficient_table(&p, 5).unwrap();
        for (name, v) in ct.entries() {
            assert!(v.is_finite() && v.hi() > 0.0, "{name}: {v:?}");
        }
    }

    #[test]
    fn cp_decreases_with_xi1() {
        let p = cases::case2_params(1).unwrap();
        let mut prev = f64::INFINITY;
        for xi1 in [30.0, 45.0, 60.0, 90.0] {
            let mut q = p;
            q.xi1 = Interval::point(xi1);
            let ct = coefficient_table(&q, 5).unwrap();
            assert!(
                ct.c_p.hi() <= prev * (1.0 + 1e-10),
                "C_P increased at xi1 = {xi1}"
            );
            prev = ct.c_p.hi();
        }
    }

    #[test]
    fn wronskian_identity() {
        let p = cases::case2_params(1).unwrap();
        for xi in [60.0, 75.0, 100.0] {
            let f = pew_point(&p, Interval::point(xi)).unwrap();
            let wr = f.p * f.e1 - f.p1 * f.e;
            let ratio = f.w.div_checked(&wr).unwrap();
            assert!(ratio.contains(1.0, 0.0), "xi = {xi}: {ratio:?}");
        }
    }

    #[test]
    fn point_values_obey_table_bounds() {
        let p = cases::case2_params(1).unwrap();
        let ct = coefficient_table(&p, 5).unwrap();
        let inv_sigma = (Interval::ONE / p.sigma).hi();
        let d = p.d as f64;
        for i in 0..20 {
            let xi = p.xi1.mid() * 10f64.powf(i as f64 / 19.0);
            let f = pew_point(&p, Interval::point(xi)).unwrap();
            let tol = 1.0 + 1e-9;
            assert!(f.p.abs().lo() <= ct.c_p.hi() * xi.powf(-inv_sigma) * tol);
            assert!(f.p1.abs().lo() <= ct.c_p1.hi() * xi.powf(-inv_sigma - 1.0) * tol);
            assert!(f.p2.abs().lo() <= ct.c_p2.hi() * xi.powf(-inv_sigma - 2.0) * tol);
            // Re c = 0 at eps = 0, so the exponential profile factor is 1
            assert!(f.e.abs().lo() <= ct.c_e.hi() * xi.powf(inv_sigma - d) * tol);
            assert!(f.e1.abs().lo() <= ct.c_e1.hi() * xi.powf(inv_sigma - d + 1.0) * tol);
            assert!(f.je.abs().lo() <= ct.c_je.hi() * xi.powf(inv_sigma - 1.0) * tol);
            assert!(f.jp.abs().lo() <= ct.c_jp.hi() * xi.powf(-inv_sigma + d - 1.0) * tol);
            assert!(f.d_fn.abs().lo() <= ct.c_d.hi() * xi.powf(-inv_sigma) * tol);
            assert!(f.h_fn.abs().lo() <= ct.c_h.hi() * xi.powf(-inv_sigma) * tol);
            let lx = xi.ln();
            assert!(f.p_k.abs().lo() <= ct.c_p_k.hi() * lx * xi.powf(-inv_sigma) * tol);
            assert!(f.je_k.abs().lo() <= ct.c_je_k.hi() * lx * xi.powf(inv_sigma - 1.0) * tol);
        }
    }

    #[test]
    fn p_eps_matches_finite_difference() {
        // one-sided difference from eps = 0 (eps >= 0 constraint)
        let p = cases::case2_params(1).unwrap();
        let h = 1e-6;
        let mut ph = p;
        ph.epsilon = Interval::point(h);
        let f0 = pew_point(&p, p.xi1).unwrap();
        let fh = pew_point(&ph, p.xi1).unwrap();
        let fd = (fh.p - f0.p).scale(Interval::point(1.0 / h));
        let tol = 1e-4 * (1.0 + fd.abs().hi());
        assert!(
            (fd - f0.p_e).abs().lo() <= tol,
            "P_eps fd mismatch: {fd:?} vs {:?}",
            f0.p_e
        );
    }
}
