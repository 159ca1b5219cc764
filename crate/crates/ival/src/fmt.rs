//! Interval text formats: hex-float endpoint pairs for bit-exact round trips
//! and the subsuperscript style used in reports.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::real::Interval;

/// Format an f64 as a C99-style hex float (`0x1.8p+1`). Exact.
pub fn f64_to_hex(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0x0p+0".into()
        } else {
            "0x0p+0".into()
        };
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    assert!(!x.is_nan());
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (lead, exp, frac) = if raw_exp == 0 {
        // subnormal: 0.frac * 2^-1022; normalize the leading digit
        let shift = frac.leading_zeros() as i64 - 11;
        (1u64, -1022 - shift - 1, (frac << (shift + 1)) & ((1u64 << 52) - 1))
    } else {
        (1u64, raw_exp - 1023, frac)
    };
    let mut s = format!("{sign}0x{lead}");
    if frac != 0 {
        let mut hex = format!("{frac:013x}");
        while hex.ends_with('0') {
            hex.pop();
        }
        let _ = write!(s, ".{hex}");
    }
    let _ = write!(s, "p{}{}", if exp >= 0 { "+" } else { "-" }, exp.abs());
    s
}

/// Parse a hex float produced by [`f64_to_hex`]. Exact.
pub fn f64_from_hex(s: &str) -> Option<f64> {
    let s = s.trim();
    match s {
        "inf" => return Some(f64::INFINITY),
        "-inf" => return Some(f64::NEG_INFINITY),
        _ => {}
    }
    let (neg, s) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let s = s.strip_prefix("0x")?;
    let p = s.find(['p', 'P'])?;
    let (mant, exp) = s.split_at(p);
    let exp: i64 = exp[1..].parse().ok()?;
    let (int_part, frac_part) = match mant.find('.') {
        Some(d) => (&mant[..d], &mant[d + 1..]),
        None => (mant, ""),
    };
    let mut value = u64::from_str_radix(int_part, 16).ok()? as f64 * exp2(exp);
    let mut scale = exp - 4;
    for c in frac_part.chars() {
        let d = c.to_digit(16)? as f64;
        value += d * exp2(scale);
        scale -= 4;
    }
    Some(if neg { -value } else { value })
}

fn exp2(e: i64) -> f64 {
    let mut r = 1.0f64;
    let mut e = e;
    while e > 500 {
        r *= f64::powi(2.0, 500);
        e -= 500;
    }
    while e < -500 {
        r *= f64::powi(2.0, -500);
        e += 500;
    }
    r * f64::powi(2.0, e as i32)
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", f64_to_hex(self.lo()), f64_to_hex(self.hi()))
    }
}

impl FromStr for Interval {
    type Err = String;
    fn from_str(s: &str) -> Result<Interval, String> {
        let s = s.trim();
        let inner = s
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| format!("missing brackets in {s:?}"))?;
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| format!("missing comma in {s:?}"))?;
        let lo = f64_from_hex(a).ok_or_else(|| format!("bad hex float {a:?}"))?;
        let hi = f64_from_hex(b).ok_or_else(|| format!("bad hex float {b:?}"))?;
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(format!("invalid interval {s:?}"));
        }
        Ok(Interval::new(lo, hi))
    }
}

/// Render a tight interval in compact subsuperscript style, e.g.
/// `1.1477_{21}^{34}` for [1.147721, 1.147734]. Falls back to the plain
/// two-endpoint form when the interval is wide or irregular.
pub fn subsuperscript(iv: &Interval, digits: usize) -> String {
    let plain = || format!("[{:.*}, {:.*}]", digits, iv.lo(), digits, iv.hi());
    if !iv.is_finite() || iv.lo() == iv.hi() {
        return plain();
    }
    if iv.lo().signum() != iv.hi().signum() {
        return plain();
    }
    let neg = iv.lo() < 0.0;
    // work with magnitudes ordered low to high
    let (mlo, mhi) = if neg {
        (-iv.hi(), -iv.lo())
    } else {
        (iv.lo(), iv.hi())
    };
    let slo = format!("{mlo:.*}", digits);
    let shi = format!("{mhi:.*}", digits);
    if slo.len() != shi.len() {
        return plain();
    }
    let common: usize = slo
        .chars()
        .zip(shi.chars())
        .take_while(|(a, b)| a == b)
        .count();
    if common < 2 || common >= slo.len() {
        return plain();
    }
    let prefix = &slo[..common];
    let sub = &slo[common..];
    let sup = &shi[common..];
    format!("{}{prefix}_{{{sub}}}^{{{sup}}}", if neg { "-" } else { "" })
}

mod serde_impl {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    impl Serialize for Interval {
        fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
            ser.serialize_str(&self.to_string())
        }
    }

    impl<'de> Deserialize<'de> for Interval {
        fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Interval, D::Error> {
            let s = String::deserialize(de)?;
            s.parse().map_err(D::Error::custom)
        }
    }

    impl Serialize for crate::Complex {
        fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
            #[derive(Serialize)]
            struct Parts {
                re: Interval,
                im: Interval,
            }
            Parts {
                re: self.re,
                im: self.im,
            }
            .serialize(ser)
        }
    }

    impl<'de> Deserialize<'de> for crate::Complex {
        fn deserialize<D: Deserializer<'de>>(de: D) -> Result<crate::Complex, D::Error> {
            #[derive(Deserialize)]
            struct Parts {
                re: Interval,
                im: Interval,
            }
            let p = Parts::deserialize(de)?;
            Ok(crate::Complex::new(p.re, p.im))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_examples() {
        assert_eq!(f64_to_hex(3.0), "0x1.8p+1");
        assert_eq!(f64_from_hex("0x1.8p+1"), Some(3.0));
        assert_eq!(f64_from_hex("0x1.9p+1"), Some(3.125));
    }

    #[test]
    fn hex_roundtrip() {
        for &x in &[
            0.0,
            -0.0,
            1.0,
            -1.5,
            0.1,
            f64::MIN_POSITIVE,
            f64::MAX,
            1.2320375232100302,
            -6.05e-300,
        ] {
            let s = f64_to_hex(x);
            let back = f64_from_hex(&s).unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{x} -> {s}");
        }
    }

    #[test]
    fn interval_string_roundtrip() {
        let iv = Interval::new(0.1, 0.30000000000000004);
        let s = iv.to_string();
        let back: Interval = s.parse().unwrap();
        assert_eq!(back, iv);
    }

    #[test]
    fn subsuperscript_style() {
        let iv = Interval::new(1.147721, 1.147734);
        assert_eq!(subsuperscript(&iv, 6), "1.1477_{21}^{34}");
        let neg = Interval::new(-1.491794, -1.491793);
        assert_eq!(subsuperscript(&neg, 6), "-1.49179_{3}^{4}");
    }
}
