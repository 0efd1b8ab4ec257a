//! Lossless, language-neutral encodings for big integers and certified reals.

use std::fmt;
use std::str::FromStr;

use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer};
use serde::{Deserialize, Serialize};

use crate::numerics::Ball;

/// Serde adapter that writes an [`Integer`] as a decimal string.
pub mod integer_string {
    use rug::Integer;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Integer, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Integer, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(D::Error::custom)
    }

    pub(crate) fn parse(s: &str) -> Result<Integer, String> {
        let ok = !s.is_empty() && s.strip_prefix('-').unwrap_or(s).bytes().all(|b| b.is_ascii_digit());
        if !ok {
            return Err(format!("not a decimal integer: {s:?}"));
        }
        Integer::from_str_radix(s, 10).map_err(|e| e.to_string())
    }
}

/// A real number as `digits * 10^exponent`, together with an upper bound on the
/// distance from that value to the true quantity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecimalEnclosure {
    /// Signed decimal integer mantissa.
    pub digits: String,
    pub exponent: i64,
    /// Radius in scientific notation, rounded up.
    pub radius: String,
}

impl DecimalEnclosure {
    /// Encodes `ball` with `sig` significant digits; the radius absorbs the display rounding.
    pub fn from_ball(ball: &Ball, sig: usize) -> Self {
        let sig = sig.max(1);
        let mid = ball.mid();
        if mid.is_zero() {
            return DecimalEnclosure {
                digits: "0".into(),
                exponent: 0,
                radius: format_upper(&Float::with_val(64, ball.rad())),
            };
        }
        let (neg, digits, exp) = mid.to_sign_string_exp(10, Some(sig));
        let exp = exp.expect("finite midpoint") as i64;
        let digits = digits.trim_start_matches('0').to_string();
        let len = digits.len() as i64;
        // value = 0.digits * 10^exp = digits * 10^(exp - len)
        let exponent = exp - len;
        // the display rounds to nearest, so one unit in the last digit covers it
        let display_err = Float::with_val(64, 10).pow(exponent as i32);
        let mut rad = Float::with_val_round(64, ball.rad() + &display_err, Round::Up).0;
        if rad.is_zero() {
            rad = display_err;
        }
        DecimalEnclosure {
            digits: if neg { format!("-{digits}") } else { digits },
            exponent,
            radius: format_upper(&rad),
        }
    }

    /// Ball at `prec` bits enclosing every value the record admits.
    pub fn to_ball(&self, prec: u32) -> Result<Ball, String> {
        self.validate()?;
        let mantissa = integer_string::parse(&self.digits)?;
        let exponent = i32::try_from(self.exponent).map_err(|_| "exponent out of range".to_string())?;
        let radius = Float::with_val_round(64, Float::parse(&self.radius).map_err(|e| e.to_string())?, Round::Up).0;
        let mid = Ball::from_integer(&mantissa, prec).mul(&Ball::pow10(exponent, prec));
        let rad = Float::with_val_round(64, mid.rad() + &radius, Round::Up).0;
        Ok(Ball::with_radius(mid.mid().clone(), &rad))
    }

    pub fn to_f64(&self) -> f64 {
        f64::from_str(&format!("{}e{}", self.digits, self.exponent)).unwrap_or(f64::NAN)
    }

    pub fn radius_f64(&self) -> f64 {
        f64::from_str(&self.radius).unwrap_or(f64::INFINITY)
    }

    /// Upper endpoint as f64, good for bound comparisons against published constants.
    pub fn upper_f64(&self) -> f64 {
        self.to_f64() + self.radius_f64()
    }

    /// Checks that the fields are well formed.
    pub fn validate(&self) -> Result<(), String> {
        integer_string::parse(&self.digits)?;
        let r = f64::from_str(&self.radius).map_err(|_| format!("bad radius {:?}", self.radius))?;
        if r.is_nan() || r < 0.0 {
            return Err(format!("negative radius {:?}", self.radius));
        }
        Ok(())
    }
}

impl fmt::Display for DecimalEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (sign, digits) = match self.digits.strip_prefix('-') {
            Some(d) => ("-", d),
            None => ("", self.digits.as_str()),
        };
        let (head, tail) = digits.split_at(1);
        let e = self.exponent + tail.len() as i64;
        let tail = tail.trim_end_matches('0');
        if tail.is_empty() {
            write!(f, "{sign}{head}e{e}")
        } else {
            write!(f, "{sign}{head}.{tail}e{e}")
        }
    }
}

/// Three significant digits, rounded up, in `d.dde<exp>` form.
fn format_upper(x: &Float) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let (_, digits, exp) = x.to_sign_string_exp_round(10, Some(3), Round::Up);
    let exp = exp.expect("finite radius") as i64 - 1;
    let (head, tail) = digits.split_at(1);
    format!("{head}.{tail}e{exp}")
}

/// Decimal string of an integer, for places that cannot use the serde adapter.
pub fn integer_to_string(v: &Integer) -> String {
    v.to_string_radix(10)
}

pub fn integer_from_str(s: &str) -> Result<Integer, String> {
    integer_string::parse(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enclosure_contains_the_value() {
        let b = Ball::from_ratio(1, 7, 200);
        let e = DecimalEnclosure::from_ball(&b, 20);
        assert_eq!(e.digits, "14285714285714285714");
        assert_eq!(e.exponent, -20);
        assert!((e.to_f64() - 1.0 / 7.0).abs() < 1e-18);
        assert!(e.radius_f64() <= 1.1e-20);
        assert_eq!(e.to_string(), "1.4285714285714285714e-1");
        e.validate().unwrap();
    }

    #[test]
    fn negative_and_large_values() {
        let b = Ball::from_f64(-6.16e14, 200);
        let e = DecimalEnclosure::from_ball(&b, 6);
        assert_eq!(e.digits, "-616000");
        assert_eq!(e.exponent, 9);
        assert_eq!(e.to_f64(), -6.16e14);
        let json = serde_json::to_string(&e).unwrap();
        let back: DecimalEnclosure = serde_json::from_str(&json).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn ball_round_trip_encloses_original() {
        let b = Ball::from_ratio(22, 7, 300);
        let e = DecimalEnclosure::from_ball(&b, 30);
        let back = e.to_ball(300).unwrap();
        assert!(back.contains(b.mid()));
        assert!(back.rad() < &1e-28);
    }

    #[test]
    fn integer_strings() {
        assert!(integer_from_str("12a").is_err());
        assert!(integer_from_str("").is_err());
        assert_eq!(integer_from_str("-42").unwrap(), -42);
    }
}
