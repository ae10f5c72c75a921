use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::root2::{big_to_f64, Root2Int};
use super::serial::BigNum;

/// Element `a·ω³ + b·ω² + c·ω + d` of ℤ[ω], ω = e^{iπ/4}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CyclotomicInt {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl CyclotomicInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        CyclotomicInt { a: a.into(), b: b.into(), c: c.into(), d: d.into() }
    }

    pub fn zero() -> Self {
        Self::new(0, 0, 0, 0)
    }

    pub fn one() -> Self {
        Self::new(0, 0, 0, 1)
    }

    pub fn omega() -> Self {
        Self::new(0, 0, 1, 0)
    }

    /// ω^k for any integer k.
    pub fn omega_pow(k: i64) -> Self {
        let k = k.rem_euclid(8);
        let mut c = [0i64; 4];
        let sign = if k >= 4 { -1 } else { 1 };
        c[(k % 4) as usize] = sign;
        Self::from_coeffs([c[0].into(), c[1].into(), c[2].into(), c[3].into()])
    }

    /// √2 = ω − ω³.
    pub fn sqrt2() -> Self {
        Self::new(-1, 0, 1, 0)
    }

    /// i = ω².
    pub fn i() -> Self {
        Self::new(0, 1, 0, 0)
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::new(0, 0, 0, n)
    }

    /// Embed a + b√2 as (−b)ω³ + bω + a.
    pub fn from_root2(x: &Root2Int) -> Self {
        CyclotomicInt { a: -&x.b, b: BigInt::zero(), c: x.b.clone(), d: x.a.clone() }
    }

    /// Gaussian integer x + y·i.
    pub fn gaussian(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        Self::new(0, y, 0, x)
    }

    /// Coefficients of ω^0, ω^1, ω^2, ω^3.
    fn coeffs(&self) -> [&BigInt; 4] {
        [&self.d, &self.c, &self.b, &self.a]
    }

    fn from_coeffs(c: [BigInt; 4]) -> Self {
        let [d, cc, b, a] = c;
        CyclotomicInt { a, b, c: cc, d }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// Complex conjugate: (a,b,c,d) → (−c,−b,−a,d).
    pub fn conj(&self) -> Self {
        CyclotomicInt { a: -&self.c, b: -&self.b, c: -&self.a, d: self.d.clone() }
    }

    /// The automorphism ω ↦ −ω: (a,b,c,d) → (−a,b,−c,d).
    pub fn bullet(&self) -> Self {
        CyclotomicInt { a: -&self.a, b: self.b.clone(), c: -&self.c, d: self.d.clone() }
    }

    /// Multiply by ω^k (a rotation of coefficients with sign flips).
    pub fn mul_omega_pow(&self, k: i64) -> Self {
        let k = k.rem_euclid(8) as usize;
        let src = self.coeffs();
        let mut out: [BigInt; 4] = Default::default();
        for (i, c) in src.iter().enumerate() {
            let e = i + k;
            let (slot, neg) = ((e % 4), (e / 4) % 2 == 1);
            out[slot] = if neg { -(*c).clone() } else { (*c).clone() };
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        CyclotomicInt { a: &self.a * k, b: &self.b * k, c: &self.c * k, d: &self.d * k }
    }

    /// |z|² as an element of ℤ[√2].
    pub fn abs_squared(&self) -> Root2Int {
        let p = self * &self.conj();
        debug_assert!(p.b.is_zero() && p.a == -&p.c, "z·z̄ must be real");
        Root2Int { a: p.d, b: p.c }
    }

    /// Real element as ℤ[√2], if it is one.
    pub fn as_root2(&self) -> Option<Root2Int> {
        if self.b.is_zero() && self.a == -&self.c {
            Some(Root2Int { a: self.d.clone(), b: self.c.clone() })
        } else {
            None
        }
    }

    /// Norm down to ℚ: |z|²·|z•|², a non-negative rational integer.
    pub fn rational_norm(&self) -> BigInt {
        self.abs_squared().norm()
    }

    pub fn complex_value(&self) -> Complex64 {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let a = big_to_f64(&self.a);
        let b = big_to_f64(&self.b);
        let c = big_to_f64(&self.c);
        let d = big_to_f64(&self.d);
        Complex64::new(d + (c - a) * r, b + (c + a) * r)
    }

    /// Exact division by √2, `None` if not divisible.
    pub fn div_sqrt2(&self) -> Option<Self> {
        let t = self * &Self::sqrt2();
        if [&t.a, &t.b, &t.c, &t.d].iter().all(|x| x.is_even()) {
            Some(CyclotomicInt { a: &t.a / 2, b: &t.b / 2, c: &t.c / 2, d: &t.d / 2 })
        } else {
            None
        }
    }

    /// Whether √2 divides this element.
    pub fn divisible_by_sqrt2(&self) -> bool {
        // z = Σ x_i ω^i is divisible by √2 iff a ≡ c and b ≡ d mod 2
        (&self.a - &self.c).is_even() && (&self.b - &self.d).is_even()
    }

    /// Number of times √2 divides a nonzero element.
    pub fn sqrt2_valuation(&self) -> u32 {
        if self.is_zero() {
            return u32::MAX;
        }
        let mut v = 0;
        let mut z = self.clone();
        while let Some(w) = z.div_sqrt2() {
            z = w;
            v += 1;
        }
        v
    }

    /// Smallest denominator exponent of `z/√2^L`: least k with z/√2^(L−k) ∈ ℤ[ω].
    pub fn sde(&self, l: u32) -> u32 {
        if self.is_zero() {
            return 0;
        }
        l.saturating_sub(self.sqrt2_valuation())
    }

    /// Product of the three non-trivial Galois conjugates; z·cofactor = N(z).
    pub fn norm_cofactor(&self) -> Self {
        let b = self.bullet();
        &self.conj() * &(&b * &b.conj())
    }

    /// Exact quotient, `None` if `den` does not divide `self`.
    pub fn div_exact(&self, den: &Self) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        let n = den.rational_norm();
        let num = self * &den.norm_cofactor();
        let parts = [&num.a, &num.b, &num.c, &num.d];
        if parts.iter().all(|x| x.is_multiple_of(&n)) {
            Some(CyclotomicInt { a: &num.a / &n, b: &num.b / &n, c: &num.c / &n, d: &num.d / &n })
        } else {
            None
        }
    }

    /// Euclidean division: returns (q, r) with self = q·den + r and N(r) < N(den).
    ///
    /// The rational quotient is rounded coordinate-wise; the nearest lattice
    /// corners are searched for the smallest remainder norm.
    pub fn div_rem_euclid(&self, den: &Self) -> (Self, Self) {
        assert!(!den.is_zero(), "division by zero in Z[omega]");
        let n = den.rational_norm();
        let num = self * &den.norm_cofactor();
        let target = den.rational_norm();
        let parts = [&num.a, &num.b, &num.c, &num.d];
        let floors: Vec<BigInt> = parts.iter().map(|x| x.div_floor(&n)).collect();
        let mut best: Option<(BigInt, Self, Self)> = None;
        // first the 16 floor/ceil corners, then a wider 4^4 neighbourhood
        for radius in [1u32, 2] {
            let span = 2 * radius;
            for idx in 0..span.pow(4) {
                let mut k = idx;
                let mut off = [0i64; 4];
                for o in off.iter_mut() {
                    *o = (k % span) as i64 - (radius as i64 - 1);
                    k /= span;
                }
                let q = CyclotomicInt {
                    a: &floors[0] + off[0],
                    b: &floors[1] + off[1],
                    c: &floors[2] + off[2],
                    d: &floors[3] + off[3],
                };
                let r = self - &(&q * den);
                let rn = r.rational_norm();
                if best.as_ref().map_or(true, |(bn, _, _)| rn < *bn) {
                    best = Some((rn, q, r));
                }
            }
            if let Some((bn, _, _)) = &best {
                if *bn < target {
                    break;
                }
            }
        }
        let (_, q, r) = best.expect("nonempty search");
        (q, r)
    }

    /// Greatest common divisor up to a unit, via the Euclidean algorithm.
    pub fn gcd(x: &Self, y: &Self) -> Self {
        let mut a = x.clone();
        let mut b = y.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem_euclid(&b);
            if r.rational_norm() >= b.rational_norm() {
                // the remainder search failed to shrink; should not happen for Z[omega]
                panic!("Euclidean step did not decrease the norm");
            }
            a = b;
            b = r;
        }
        a
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
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

    /// The largest absolute coefficient, used as a size measure.
    pub fn max_coeff(&self) -> BigInt {
        [&self.a, &self.b, &self.c, &self.d].iter().map(|x| x.abs()).max().unwrap()
    }

    pub fn to_json_array(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

impl<'a> Add<&'a CyclotomicInt> for &'a CyclotomicInt {
    type Output = CyclotomicInt;
    fn add(self, o: &CyclotomicInt) -> CyclotomicInt {
        CyclotomicInt { a: &self.a + &o.a, b: &self.b + &o.b, c: &self.c + &o.c, d: &self.d + &o.d }
    }
}

impl<'a> Sub<&'a CyclotomicInt> for &'a CyclotomicInt {
    type Output = CyclotomicInt;
    fn sub(self, o: &CyclotomicInt) -> CyclotomicInt {
        CyclotomicInt { a: &self.a - &o.a, b: &self.b - &o.b, c: &self.c - &o.c, d: &self.d - &o.d }
    }
}

impl<'a> Mul<&'a CyclotomicInt> for &'a CyclotomicInt {
    type Output = CyclotomicInt;
    fn mul(self, o: &CyclotomicInt) -> CyclotomicInt {
        let x = self.coeffs();
        let y = o.coeffs();
        let mut out: [BigInt; 4] = Default::default();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let p = *xi * *yj;
                let e = i + j;
                if e >= 4 {
                    out[e - 4] -= p;
                } else {
                    out[e] += p;
                }
            }
        }
        CyclotomicInt::from_coeffs(out)
    }
}

impl Neg for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn neg(self) -> CyclotomicInt {
        CyclotomicInt { a: -&self.a, b: -&self.b, c: -&self.c, d: -&self.d }
    }
}

impl Neg for CyclotomicInt {
    type Output = CyclotomicInt;
    fn neg(self) -> CyclotomicInt {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<CyclotomicInt> for CyclotomicInt {
            type Output = CyclotomicInt;
            fn $f(self, o: CyclotomicInt) -> CyclotomicInt {
                (&self).$f(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for CyclotomicInt {
    /// Writes `a*w^3 + b*w^2 + c*w + d`, with negative coefficients as subtraction.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = [(&self.a, "*w^3"), (&self.b, "*w^2"), (&self.c, "*w"), (&self.d, "")];
        for (i, (k, suffix)) in terms.iter().enumerate() {
            if i == 0 {
                write!(f, "{k}{suffix}")?;
            } else if k.is_negative() {
                write!(f, " - {}{suffix}", k.abs())?;
            } else {
                write!(f, " + {k}{suffix}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRingError(pub String);

impl fmt::Display for ParseRingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse ring element: {}", self.0)
    }
}

impl std::error::Error for ParseRingError {}

impl FromStr for CyclotomicInt {
    type Err = ParseRingError;

    /// Accepts sums of terms `k*w^e`, `k*w`, `w^e`, `k`, in any order.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(ParseRingError("empty input".into()));
        }
        let mut acc = CyclotomicInt::zero();
        let mut term = String::new();
        let mut sign = 1i32;
        let flush = |term: &str, sign: i32, acc: &mut CyclotomicInt| -> Result<(), ParseRingError> {
            if term.is_empty() {
                return Err(ParseRingError(format!("dangling sign in {s:?}")));
            }
            let (coef, power) = parse_term(term)?;
            let coef = if sign < 0 { -coef } else { coef };
            *acc = &*acc + &CyclotomicInt::omega_pow(power).scale(&coef);
            Ok(())
        };
        for (i, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !term.ends_with('^') {
                flush(&term, sign, &mut acc)?;
                term.clear();
                sign = if ch == '-' { -1 } else { 1 };
            } else if (ch == '+' || ch == '-') && i == 0 {
                sign = if ch == '-' { -1 } else { 1 };
            } else {
                term.push(ch);
            }
        }
        flush(&term, sign, &mut acc)?;
        Ok(acc)
    }
}

fn parse_term(t: &str) -> Result<(BigInt, i64), ParseRingError> {
    let bad = || ParseRingError(format!("bad term {t:?}"));
    if let Some(pos) = t.find('w') {
        let (lhs, rhs) = t.split_at(pos);
        let coef = match lhs.strip_suffix('*') {
            Some(c) => c.parse::<BigInt>().map_err(|_| bad())?,
            None if lhs.is_empty() => BigInt::one(),
            None => return Err(bad()),
        };
        let power = match rhs.strip_prefix('w') {
            Some("") => 1,
            Some(p) => p.strip_prefix('^').ok_or_else(bad)?.parse::<i64>().map_err(|_| bad())?,
            None => return Err(bad()),
        };
        Ok((coef, power))
    } else {
        Ok((t.parse::<BigInt>().map_err(|_| bad())?, 0))
    }
}

impl Serialize for CyclotomicInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [BigNum::from(&self.a), BigNum::from(&self.b), BigNum::from(&self.c), BigNum::from(&self.d)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for CyclotomicInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [a, b, c, dd] = <[BigNum; 4]>::deserialize(d)?;
        let conv = |x: BigNum| x.into_big().map_err(serde::de::Error::custom);
        Ok(CyclotomicInt { a: conv(a)?, b: conv(b)?, c: conv(c)?, d: conv(dd)? })
    }
}
