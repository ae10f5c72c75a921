//! Fixed-point reals: a `BigInt` `v` stands for `v / 2^prec`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, Debug)]
pub(crate) struct Fx {
    pub prec: u32,
}

impl Fx {
    pub fn one(&self) -> BigInt {
        BigInt::one() << self.prec
    }

    pub fn from_int(&self, n: &BigInt) -> BigInt {
        n << self.prec
    }

    pub fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        round_shift(&(a * b), self.prec)
    }

    pub fn div(&self, a: &BigInt, b: &BigInt) -> BigInt {
        div_round(&(a << self.prec), b)
    }

    pub fn sqrt(&self, a: &BigInt) -> BigInt {
        assert!(!a.is_negative(), "sqrt of a negative fixed-point value");
        num_integer::Roots::sqrt(&(a << self.prec))
    }

    /// Exact conversion of a finite double (doubles are dyadic rationals).
    pub fn from_f64(&self, x: f64) -> BigInt {
        assert!(x.is_finite());
        if x == 0.0 {
            return BigInt::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
        let m = BigInt::from(mant) * sign;
        let shift = e + self.prec as i64;
        if shift >= 0 {
            m << shift as u32
        } else {
            round_shift(&m, (-shift) as u32)
        }
    }

    pub fn to_f64(&self, a: &BigInt) -> f64 {
        let bits = a.bits();
        if bits > 1000 {
            let sh = bits - 64;
            return crate::ring::big_to_f64(&(a >> sh)) * 2f64.powi(sh as i32 - self.prec as i32);
        }
        crate::ring::big_to_f64(a) * 2f64.powi(-(self.prec as i32))
    }

    /// π by Machin's formula.
    pub fn pi(&self) -> BigInt {
        let g = Fx { prec: self.prec + 32 };
        let v = g.atan_inv(5) * 16 - g.atan_inv(239) * 4;
        round_shift(&v, 32)
    }

    /// atan(1/n) by its alternating series.
    fn atan_inv(&self, n: u64) -> BigInt {
        let n = BigInt::from(n);
        let n2 = &n * &n;
        let mut power = self.one() / &n;
        let mut sum = power.clone();
        let mut k = 1u64;
        loop {
            power = &power / &n2;
            if power.is_zero() {
                break;
            }
            let term = &power / BigInt::from(2 * k + 1);
            if k % 2 == 1 {
                sum -= term;
            } else {
                sum += term;
            }
            k += 1;
        }
        sum
    }

    /// (cos x, sin x) for a fixed-point x of moderate size.
    pub fn cos_sin(&self, x: &BigInt) -> (BigInt, BigInt) {
        let guard = 32;
        let g = Fx { prec: self.prec + guard };
        let mut xg = x << guard;
        // reduce into [−π, π]
        let two_pi = g.pi() * 2;
        let k = div_round(&xg, &two_pi);
        xg -= &k * &two_pi;
        // argument halving keeps the series short
        let halvings = 8u32;
        let xs = round_shift(&xg, halvings);
        let x2 = g.mul(&xs, &xs);
        let mut c = g.one();
        let mut s = xs.clone();
        let mut term_c = g.one();
        let mut term_s = xs.clone();
        let mut k = 1u64;
        loop {
            term_c = -g.mul(&term_c, &x2) / BigInt::from((2 * k - 1) * (2 * k));
            term_s = -g.mul(&term_s, &x2) / BigInt::from((2 * k) * (2 * k + 1));
            if term_c.is_zero() && term_s.is_zero() {
                break;
            }
            c += &term_c;
            s += &term_s;
            k += 1;
        }
        for _ in 0..halvings {
            let s2 = g.mul(&s, &c) * 2;
            let c2 = g.mul(&c, &c) * 2 - g.one();
            s = s2;
            c = c2;
        }
        (round_shift(&c, guard), round_shift(&s, guard))
    }
}

/// round(a / 2^k), ties away from zero.
pub(crate) fn round_shift(a: &BigInt, k: u32) -> BigInt {
    if k == 0 {
        return a.clone();
    }
    let half = BigInt::one() << (k - 1);
    if a.is_negative() {
        -((-a + half) >> k)
    } else {
        (a + half) >> k
    }
}

/// round(a / b) for b ≠ 0.
pub(crate) fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (a, b): (BigInt, BigInt) = if b.is_negative() { (-a, -b) } else { (a.clone(), b.clone()) };
    let two_b: BigInt = &b * 2;
    let num: BigInt = a * 2 + b;
    num.div_floor(&two_b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_digits() {
        let fx = Fx { prec: 200 };
        let pi = fx.pi();
        assert!((fx.to_f64(&pi) - std::f64::consts::PI).abs() < 1e-15);
        // compare against a higher-precision run
        let hi = Fx { prec: 260 }.pi();
        assert!((round_shift(&hi, 60) - &pi).abs() <= BigInt::one());
    }

    #[test]
    fn trig_matches_f64() {
        let fx = Fx { prec: 128 };
        for &x in &[0.0, 0.1, -1.3, 3.0, 10.0, -25.5] {
            let (c, s) = fx.cos_sin(&fx.from_f64(x));
            assert!((fx.to_f64(&c) - f64::cos(x)).abs() < 1e-15, "cos {x}");
            assert!((fx.to_f64(&s) - f64::sin(x)).abs() < 1e-15, "sin {x}");
        }
    }

    #[test]
    fn pythagoras_at_high_precision() {
        let fx = Fx { prec: 400 };
        let (c, s) = fx.cos_sin(&fx.from_f64(0.7));
        let err = fx.mul(&c, &c) + fx.mul(&s, &s) - fx.one();
        assert!(err.abs() < BigInt::from(16));
    }

    #[test]
    fn rounding_helpers() {
        assert_eq!(div_round(&BigInt::from(7), &BigInt::from(2)), BigInt::from(4));
        assert_eq!(div_round(&BigInt::from(-7), &BigInt::from(2)), BigInt::from(-3));
        assert_eq!(div_round(&BigInt::from(5), &BigInt::from(-3)), BigInt::from(-2));
        assert_eq!(round_shift(&BigInt::from(-6), 2), BigInt::from(-2));
    }
}
