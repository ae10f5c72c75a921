use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::serial::BigNum;

/// Element `a + b·√2` of ℤ[√2].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Root2Int {
    pub a: BigInt,
    pub b: BigInt,
}

impl Root2Int {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        Root2Int { a: a.into(), b: b.into() }
    }

    pub fn zero() -> Self {
        Root2Int::new(0, 0)
    }

    pub fn one() -> Self {
        Root2Int::new(1, 0)
    }

    pub fn sqrt2() -> Self {
        Root2Int::new(0, 1)
    }

    /// The fundamental unit 1 + √2.
    pub fn lambda() -> Self {
        Root2Int::new(1, 1)
    }

    pub fn lambda_inv() -> Self {
        Root2Int::new(-1, 1)
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Root2Int::new(n, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Galois conjugate `a − b√2` (the image of √2 ↦ −√2).
    pub fn conj(&self) -> Self {
        Root2Int { a: self.a.clone(), b: -&self.b }
    }

    /// Rational norm `a² − 2b²`.
    pub fn norm(&self) -> BigInt {
        &self.a * &self.a - BigInt::from(2) * &self.b * &self.b
    }

    /// Exact sign of `a + b√2` under the real embedding.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sa >= 0 && sb >= 0 {
            return if sa == 0 && sb == 0 { 0 } else { 1 };
        }
        if sa <= 0 && sb <= 0 {
            return -1;
        }
        // mixed signs: compare a² with 2b²
        let a2 = &self.a * &self.a;
        let b2 = BigInt::from(2) * &self.b * &self.b;
        match a2.cmp(&b2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    /// Both embeddings are positive.
    pub fn is_totally_positive(&self) -> bool {
        self.signum() > 0 && self.conj().signum() > 0
    }

    pub fn to_f64(&self) -> f64 {
        big_to_f64(&self.a) + big_to_f64(&self.b) * std::f64::consts::SQRT_2
    }

    pub fn is_unit(&self) -> bool {
        self.norm().abs().is_one()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Root2Int { a: &self.a * k, b: &self.b * k }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Root2Int::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Root2Int) -> Option<Root2Int> {
        if d.is_zero() {
            return None;
        }
        let n = d.norm();
        let num = self * &d.conj();
        let (qa, ra) = num.a.div_rem(&n);
        let (qb, rb) = num.b.div_rem(&n);
        if ra.is_zero() && rb.is_zero() {
            Some(Root2Int { a: qa, b: qb })
        } else {
            None
        }
    }

    /// Divide by √2 if possible: (a + b√2)/√2 = b + (a/2)√2.
    pub fn div_sqrt2(&self) -> Option<Root2Int> {
        if self.a.is_even() {
            Some(Root2Int { a: self.b.clone(), b: &self.a / 2 })
        } else {
            None
        }
    }

    /// Number of times √2 divides a nonzero element.
    pub fn sqrt2_valuation(&self) -> u32 {
        if self.is_zero() {
            return u32::MAX;
        }
        let mut v = 0;
        let mut x = self.clone();
        while let Some(y) = x.div_sqrt2() {
            x = y;
            v += 1;
        }
        v
    }

    /// Compare against `2^k` exactly.
    pub fn cmp_pow2(&self, k: u32) -> Ordering {
        let p = Root2Int::from_int(BigInt::one() << k);
        (self - &p).signum().cmp(&0)
    }

    /// Smallest `L ≥ 0` with `self ≤ 2^L`. Requires a positive element.
    pub fn ceil_log2(&self) -> u32 {
        assert!(self.signum() > 0, "ceil_log2 of a non-positive element");
        let approx = self.log2_approx();
        let mut l = if approx.is_finite() && approx > 1.0 { approx.floor() as u32 - 1 } else { 0 };
        while l > 0 && self.cmp_pow2(l) != Ordering::Greater {
            l -= 1;
        }
        while self.cmp_pow2(l) == Ordering::Greater {
            l += 1;
        }
        l
    }

    fn log2_approx(&self) -> f64 {
        let bits = self.a.bits().max(self.b.bits());
        if bits < 900 {
            return self.to_f64().log2();
        }
        let shift = bits - 60;
        let a = big_to_f64(&(&self.a >> shift));
        let b = big_to_f64(&(&self.b >> shift));
        (a + b * std::f64::consts::SQRT_2).log2() + shift as f64
    }

    pub fn abs_real(&self) -> Root2Int {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }
}

fn sign_of(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

pub(crate) fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

impl PartialOrd for Root2Int {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Root2Int {
    /// Order by the real embedding.
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl<'a> Add<&'a Root2Int> for &'a Root2Int {
    type Output = Root2Int;
    fn add(self, o: &Root2Int) -> Root2Int {
        Root2Int { a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl<'a> Sub<&'a Root2Int> for &'a Root2Int {
    type Output = Root2Int;
    fn sub(self, o: &Root2Int) -> Root2Int {
        Root2Int { a: &self.a - &o.a, b: &self.b - &o.b }
    }
}

impl<'a> Mul<&'a Root2Int> for &'a Root2Int {
    type Output = Root2Int;
    fn mul(self, o: &Root2Int) -> Root2Int {
        Root2Int {
            a: &self.a * &o.a + BigInt::from(2) * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }
}

impl Neg for &Root2Int {
    type Output = Root2Int;
    fn neg(self) -> Root2Int {
        Root2Int { a: -&self.a, b: -&self.b }
    }
}

impl Neg for Root2Int {
    type Output = Root2Int;
    fn neg(self) -> Root2Int {
        -&self
    }
}

macro_rules! forward_owned {
    ($t:ty, $tr:ident, $f:ident) => {
        impl $tr<$t> for $t {
            type Output = $t;
            fn $f(self, o: $t) -> $t {
                (&self).$f(&o)
            }
        }
    };
}
forward_owned!(Root2Int, Add, add);
forward_owned!(Root2Int, Sub, sub);
forward_owned!(Root2Int, Mul, mul);

impl fmt::Display for Root2Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let sb = if self.b.is_negative() { "-" } else { "+" };
        let mag = self.b.abs();
        let coef = if mag.is_one() { String::new() } else { mag.to_string() };
        if self.a.is_zero() {
            let lead = if self.b.is_negative() { "-" } else { "" };
            write!(f, "{lead}{coef}√2")
        } else {
            write!(f, "{}{sb}{coef}√2", self.a)
        }
    }
}

impl Serialize for Root2Int {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [BigNum::from(&self.a), BigNum::from(&self.b)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Root2Int {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [a, b] = <[BigNum; 2]>::deserialize(d)?;
        Ok(Root2Int { a: a.into_big().map_err(serde::de::Error::custom)?, b: b.into_big().map_err(serde::de::Error::custom)? })
    }
}

impl FromStr for Root2Int {
    type Err = super::ParseRingError;

    /// `a+b√2`, with `sqrt2`, `sqrt(2)` or `r2` for √2, or the pair `a,b`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || super::ParseRingError(format!("bad ℤ[√2] element {s:?}"));
        let t: String = s.split_whitespace().collect::<String>().replace("sqrt(2)", "√2").replace("sqrt2", "√2").replace("r2", "√2").replace('*', "");
        if let Some((a, b)) = t.split_once(',') {
            return Ok(Root2Int { a: a.parse().map_err(|_| bad())?, b: b.parse().map_err(|_| bad())? });
        }
        let Some(body) = t.strip_suffix("√2") else {
            return Ok(Root2Int::from_int(t.parse::<BigInt>().map_err(|_| bad())?));
        };
        let split = body.char_indices().filter(|&(i, c)| i > 0 && (c == '+' || c == '-')).map(|(i, _)| i).last();
        let (a, coef) = match split {
            Some(i) => (body[..i].parse::<BigInt>().map_err(|_| bad())?, &body[i..]),
            None => (BigInt::zero(), body),
        };
        let b = match coef {
            "" | "+" => BigInt::one(),
            "-" => -BigInt::one(),
            c => c.parse::<BigInt>().map_err(|_| bad())?,
        };
        Ok(Root2Int { a, b })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_mixed_cases() {
        assert_eq!(Root2Int::new(3, -2).signum(), 1); // 3 - 2.83
        assert_eq!(Root2Int::new(-3, 2).signum(), -1);
        assert_eq!(Root2Int::new(2, -2).signum(), -1);
        assert_eq!(Root2Int::new(0, 0).signum(), 0);
        assert_eq!(Root2Int::new(-1, 1).signum(), 1);
    }

    #[test]
    fn norm_and_division() {
        let x = Root2Int::new(5, -2);
        assert_eq!(x.norm(), BigInt::from(17));
        let y = &x * &Root2Int::new(3, 1);
        assert_eq!(y.div_exact(&x), Some(Root2Int::new(3, 1)));
        assert!(Root2Int::new(3, 0).div_exact(&Root2Int::new(2, 0)).is_none());
    }

    #[test]
    fn ceil_log2_exact_at_powers() {
        assert_eq!(Root2Int::new(1, 0).ceil_log2(), 0);
        assert_eq!(Root2Int::new(2, 0).ceil_log2(), 1);
        assert_eq!(Root2Int::new(3, 0).ceil_log2(), 2);
        assert_eq!(Root2Int::new(2, 1).ceil_log2(), 2);
        assert_eq!(Root2Int::new(0, 1).ceil_log2(), 1);
        let big = Root2Int::new(BigInt::one() << 200u32, 0);
        assert_eq!(big.ceil_log2(), 200);
        assert_eq!((&big + &Root2Int::one()).ceil_log2(), 201);
    }

    #[test]
    fn sqrt2_division() {
        assert_eq!(Root2Int::new(2, 3).div_sqrt2(), Some(Root2Int::new(3, 1)));
        assert_eq!(Root2Int::new(1, 3).div_sqrt2(), None);
        assert_eq!(Root2Int::new(8, 0).sqrt2_valuation(), 6);
    }

    #[test]
    fn parse_forms() {
        for (txt, a, b) in [("1270080+211680√2", 1270080, 211680), ("5-2√2", 5, -2), ("√2", 0, 1), ("-√2", 0, -1), ("7", 7, 0), ("3 + 4*sqrt(2)", 3, 4), ("-3,2", -3, 2)] {
            assert_eq!(txt.parse::<Root2Int>().unwrap(), Root2Int::new(a, b), "{txt}");
        }
        for x in [Root2Int::new(2, -1), Root2Int::new(0, 3), Root2Int::new(-4, 0)] {
            assert_eq!(x.to_string().parse::<Root2Int>().unwrap(), x);
        }
        assert!("2+x√2".parse::<Root2Int>().is_err());
    }
}
