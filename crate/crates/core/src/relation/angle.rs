use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::fixed::Fx;
use crate::error::Error;

/// An angle `q·π + offset` with rational `q` and a decimal offset.
///
/// Keeping the π multiple exact lets Fourier angles such as π/2^k be
/// evaluated to any working precision.
#[derive(Clone, Debug, PartialEq)]
pub struct Angle {
    pub pi_coeff: BigRational,
    pub offset: f64,
}

impl Angle {
    pub fn pi_multiple(num: i64, den: i64) -> Self {
        Angle { pi_coeff: BigRational::new(num.into(), den.into()), offset: 0.0 }
    }

    pub fn radians(x: f64) -> Self {
        Angle { pi_coeff: BigRational::zero(), offset: x }
    }

    pub fn zero() -> Self {
        Angle::radians(0.0)
    }

    pub fn to_f64(&self) -> f64 {
        self.pi_coeff.to_f64().unwrap_or(0.0) * std::f64::consts::PI + self.offset
    }

    pub fn half(&self) -> Angle {
        Angle { pi_coeff: &self.pi_coeff / BigInt::from(2), offset: self.offset / 2.0 }
    }

    /// `k` when the angle is exactly `kπ/4`.
    pub fn quarter_pi_multiple(&self) -> Option<i64> {
        if self.offset != 0.0 {
            return None;
        }
        let q = &self.pi_coeff * BigInt::from(4);
        if q.is_integer() {
            q.to_integer().to_i64()
        } else {
            None
        }
    }

    /// Fixed-point value at the given precision.
    pub(crate) fn to_fixed(&self, fx: Fx) -> BigInt {
        let g = Fx { prec: fx.prec + 16 };
        let pi = g.pi();
        let v = pi * self.pi_coeff.numer() / self.pi_coeff.denom() + g.from_f64(self.offset);
        super::fixed::round_shift(&v, 16)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let has_pi = !self.pi_coeff.is_zero();
        if has_pi {
            let n = self.pi_coeff.numer();
            let d = self.pi_coeff.denom();
            let head = if n.is_one() {
                "pi".to_string()
            } else if *n == -BigInt::one() {
                "-pi".to_string()
            } else {
                format!("{n}*pi")
            };
            if d.is_one() {
                write!(f, "{head}")?;
            } else {
                write!(f, "{head}/{d}")?;
            }
        }
        if self.offset != 0.0 || !has_pi {
            if has_pi {
                write!(f, "{:+}", self.offset)?;
            } else {
                write!(f, "{}", self.offset)?;
            }
        }
        Ok(())
    }
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn parse_int_or_pow(s: &str) -> Result<BigInt, Error> {
    let bad = || Error::Parse(format!("bad integer {s:?}"));
    if let Some((b, e)) = s.split_once('^') {
        let base: BigInt = b.trim().parse().map_err(|_| bad())?;
        let exp: u32 = e.trim().parse().map_err(|_| bad())?;
        return Ok(num_traits::pow(base, exp as usize));
    }
    s.trim().parse().map_err(|_| bad())
}

fn parse_term(t: &str) -> Result<(BigRational, f64), Error> {
    let t = t.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty term".into()));
    }
    let lower = t.to_ascii_lowercase().replace('π', "pi");
    if let Some(pos) = lower.find("pi") {
        let coef = lower[..pos].trim().trim_end_matches('*').trim();
        let rest = lower[pos + 2..].trim();
        let num = if coef.is_empty() { BigInt::one() } else { parse_int_or_pow(coef)? };
        let den = if rest.is_empty() {
            BigInt::one()
        } else if let Some(d) = rest.strip_prefix('/') {
            parse_int_or_pow(d)?
        } else {
            return Err(Error::Parse(format!("unexpected {rest:?} after pi")));
        };
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok((BigRational::new(num, den), 0.0))
    } else {
        let x: f64 = lower.parse().map_err(|_| Error::Parse(format!("bad number {t:?}")))?;
        Ok((BigRational::zero(), x))
    }
}

impl FromStr for Angle {
    type Err = Error;

    /// Sums of terms like `pi/64`, `3*pi/4`, `-pi/2^10`, `0.3137`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..bytes.len() {
            let ch = bytes[i] as char;
            let prev = bytes[i - 1] as char;
            // a sign splits terms unless it belongs to an exponent like 1e-5
            if (ch == '+' || ch == '-') && prev != 'e' && prev != 'E' {
                terms.push(&s[start..i]);
                start = i;
            }
        }
        terms.push(&s[start..]);
        let mut angle = Angle::zero();
        for t in terms {
            let t = t.trim();
            let (neg, body) = match t.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, t.strip_prefix('+').unwrap_or(t)),
            };
            let (q, x) = parse_term(body)?;
            if neg {
                angle.pi_coeff -= q;
                angle.offset -= x;
            } else {
                angle.pi_coeff += q;
                angle.offset += x;
            }
        }
        if !angle.offset.is_finite() {
            return Err(Error::Parse(format!("angle {s:?} is not finite")));
        }
        Ok(angle)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fourier_style() {
        let a: Angle = "pi/64".parse().unwrap();
        assert_eq!(a, Angle::pi_multiple(1, 64));
        let b: Angle = "-3*pi/4".parse().unwrap();
        assert_eq!(b.quarter_pi_multiple(), Some(-3));
        let c: Angle = "pi/2^10".parse().unwrap();
        assert_eq!(c, Angle::pi_multiple(1, 1024));
        let d: Angle = "0.3137".parse().unwrap();
        assert_eq!(d.offset, 0.3137);
        let e: Angle = "pi/4 + 1e-3".parse().unwrap();
        assert!((e.to_f64() - (std::f64::consts::FRAC_PI_4 + 1e-3)).abs() < 1e-15);
        assert!("pi/".parse::<Angle>().is_err());
        assert!("foo".parse::<Angle>().is_err());
    }

    #[test]
    fn display_round_trip() {
        for s in ["pi/64", "-3*pi/4", "0.5", "pi"] {
            let a: Angle = s.parse().unwrap();
            assert_eq!(a.to_string().parse::<Angle>().unwrap(), a);
        }
    }
}
