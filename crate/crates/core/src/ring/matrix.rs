use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::root2::Root2Int;
use super::zomega::CyclotomicInt;
use crate::error::Error;

/// Square matrix `M / √2^L` with entries in ℤ[ω], kept fully reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingUnitary {
    #[serde(rename = "L")]
    denom_exp: u32,
    dim: usize,
    entries: Vec<CyclotomicInt>,
}

impl RingUnitary {
    /// Build from row-major entries and reduce common √2 factors.
    pub fn new(dim: usize, entries: Vec<CyclotomicInt>, denom_exp: u32) -> Result<Self, Error> {
        if entries.len() != dim * dim {
            return Err(Error::Shape(format!("{} entries for a {dim}x{dim} matrix", entries.len())));
        }
        let mut m = RingUnitary { denom_exp, dim, entries };
        m.reduce();
        Ok(m)
    }

    pub fn from_2x2(m00: CyclotomicInt, m01: CyclotomicInt, m10: CyclotomicInt, m11: CyclotomicInt, l: u32) -> Self {
        RingUnitary::new(2, vec![m00, m01, m10, m11], l).expect("2x2 shape")
    }

    /// The matrix `[[z, y], [−y*, z*]] / √2^L`.
    pub fn from_zy(z: &CyclotomicInt, y: &CyclotomicInt, l: u32) -> Self {
        Self::from_2x2(z.clone(), y.clone(), -y.conj(), z.conj(), l)
    }

    pub fn identity(dim: usize) -> Self {
        let mut e = vec![CyclotomicInt::zero(); dim * dim];
        for i in 0..dim {
            e[i * dim + i] = CyclotomicInt::one();
        }
        RingUnitary { denom_exp: 0, dim, entries: e }
    }

    pub fn diag(values: &[CyclotomicInt], l: u32) -> Self {
        let dim = values.len();
        let mut e = vec![CyclotomicInt::zero(); dim * dim];
        for (i, v) in values.iter().enumerate() {
            e[i * dim + i] = v.clone();
        }
        RingUnitary::new(dim, e, l).expect("square")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn denom_exp(&self) -> u32 {
        self.denom_exp
    }

    pub fn entries(&self) -> &[CyclotomicInt] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &CyclotomicInt {
        &self.entries[i * self.dim + j]
    }

    /// Strip common √2 factors so that L is minimal.
    fn reduce(&mut self) {
        if self.entries.iter().all(|e| e.is_zero()) {
            self.denom_exp = 0;
            return;
        }
        while self.denom_exp > 0 && self.entries.iter().all(|e| e.divisible_by_sqrt2()) {
            for e in self.entries.iter_mut() {
                *e = e.div_sqrt2().expect("checked divisibility");
            }
            self.denom_exp -= 1;
        }
    }

    pub fn mul(&self, o: &RingUnitary) -> Result<RingUnitary, Error> {
        if self.dim != o.dim {
            return Err(Error::Shape(format!("{}x{} times {}x{}", self.dim, self.dim, o.dim, o.dim)));
        }
        let n = self.dim;
        let mut out = vec![CyclotomicInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cell = &mut out[i * n + j];
                    *cell = &*cell + &(a * b);
                }
            }
        }
        RingUnitary::new(n, out, self.denom_exp + o.denom_exp)
    }

    /// Product, panicking on shape mismatch (internal use with known shapes).
    pub fn dot(&self, o: &RingUnitary) -> RingUnitary {
        self.mul(o).expect("conformable shapes")
    }

    pub fn adjoint(&self) -> RingUnitary {
        let n = self.dim;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.get(j, i).conj());
            }
        }
        RingUnitary { denom_exp: self.denom_exp, dim: n, entries: out }
    }

    /// Exact test of M·M† = 2^L·I.
    pub fn is_unitary(&self) -> bool {
        let n = self.dim;
        let two_l = CyclotomicInt::from_int(BigInt::one() << self.denom_exp);
        for i in 0..n {
            for j in 0..n {
                let mut acc = CyclotomicInt::zero();
                for k in 0..n {
                    acc = &acc + &(self.get(i, k) * &self.get(j, k).conj());
                }
                let want = if i == j { two_l.clone() } else { CyclotomicInt::zero() };
                if acc != want {
                    return false;
                }
            }
        }
        true
    }

    /// Multiply every entry by ω^k.
    pub fn mul_omega_pow(&self, k: i64) -> RingUnitary {
        RingUnitary {
            denom_exp: self.denom_exp,
            dim: self.dim,
            entries: self.entries.iter().map(|e| e.mul_omega_pow(k)).collect(),
        }
    }

    /// Multiply every entry by a ring scalar, without reduction shortcuts.
    pub fn scale(&self, s: &CyclotomicInt) -> RingUnitary {
        RingUnitary::new(self.dim, self.entries.iter().map(|e| e * s).collect(), self.denom_exp).expect("square")
    }

    /// Entries re-expressed over the denominator √2^l (l ≥ L).
    pub fn entries_at(&self, l: u32) -> Vec<CyclotomicInt> {
        assert!(l >= self.denom_exp);
        let k = l - self.denom_exp;
        let f = sqrt2_pow(k);
        self.entries.iter().map(|e| e * &f).collect()
    }

    /// Whether `self = ω^k · other` for some k; returns k.
    pub fn phase_relative_to(&self, other: &RingUnitary) -> Option<i64> {
        if self.dim != other.dim || self.denom_exp != other.denom_exp {
            return None;
        }
        (0..8).find(|&k| other.mul_omega_pow(k) == *self)
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        let s = 2f64.powf(-(self.denom_exp as f64) / 2.0);
        self.entries.iter().map(|e| e.complex_value() * s).collect()
    }

    /// Whether every entry is zero off the diagonal.
    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// For a 2×2 matrix, whether both diagonal entries vanish.
    pub fn is_antidiagonal(&self) -> bool {
        self.dim == 2 && self.get(0, 0).is_zero() && self.get(1, 1).is_zero()
    }

    /// Exact determinant via fraction-free elimination, returned as (numerator, L·dim).
    pub fn det(&self) -> (CyclotomicInt, u32) {
        (det_bareiss(self.dim, self.entries.clone()), self.denom_exp * self.dim as u32)
    }

    /// |entry|² scaled to the common denominator 2^L.
    pub fn abs_squared_entry(&self, i: usize, j: usize) -> Root2Int {
        self.get(i, j).abs_squared()
    }
}

pub(crate) fn sqrt2_pow(k: u32) -> CyclotomicInt {
    let mut f = CyclotomicInt::from_int(BigInt::one() << (k / 2));
    if k % 2 == 1 {
        f = &f * &CyclotomicInt::sqrt2();
    }
    f
}

/// Bareiss elimination over ℤ[ω]; every division is exact.
fn det_bareiss(n: usize, mut m: Vec<CyclotomicInt>) -> CyclotomicInt {
    let mut sign = false;
    let mut prev = CyclotomicInt::one();
    for k in 0..n {
        if m[k * n + k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[r * n + k].is_zero()) else {
                return CyclotomicInt::zero();
            };
            for c in 0..n {
                m.swap(k * n + c, p * n + c);
            }
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i * n + j] * &m[k * n + k]) - &(&m[i * n + k] * &m[k * n + j]);
                m[i * n + j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k * n + k].clone();
    }
    let d = m[n * n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

impl fmt::Display for RingUnitary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "1/sqrt2^{} *", self.denom_exp)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|j| format!("[{}]", self.get(i, j))).collect();
            writeln!(f, "  {}", row.join("  "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(a: i64, b: i64, c: i64, d: i64) -> CyclotomicInt {
        CyclotomicInt::new(a, b, c, d)
    }

    #[test]
    fn identity_is_unitary() {
        assert!(RingUnitary::identity(2).is_unitary());
        assert!(RingUnitary::identity(4).is_unitary());
    }

    #[test]
    fn worked_example_matrix_is_unitary() {
        let z = w(-603, 1694, -1510, -7501);
        let y = w(1973, -860, 358, 755);
        let m = RingUnitary::from_zy(&z, &y, 26);
        assert_eq!(m.denom_exp(), 26);
        assert!(m.is_unitary());
    }

    #[test]
    fn reduction_strips_sqrt2() {
        let s = CyclotomicInt::sqrt2();
        let m = RingUnitary::from_2x2(s.clone(), CyclotomicInt::zero(), CyclotomicInt::zero(), s, 1);
        assert_eq!(m, RingUnitary::identity(2));
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        assert!(RingUnitary::identity(2).mul(&RingUnitary::identity(4)).is_err());
        assert!(RingUnitary::new(2, vec![CyclotomicInt::one()], 0).is_err());
    }

    #[test]
    fn determinant_of_hadamard() {
        let h = RingUnitary::from_2x2(w(0, 0, 0, 1), w(0, 0, 0, 1), w(0, 0, 0, 1), w(0, 0, 0, -1), 1);
        let (d, l) = h.det();
        assert_eq!(l, 2);
        assert_eq!(d, CyclotomicInt::from_int(-2));
    }

    #[test]
    fn json_shape() {
        let j = serde_json::to_value(RingUnitary::identity(2)).unwrap();
        assert_eq!(j["L"], 0);
        assert_eq!(j["entries"][0], serde_json::json!([0, 0, 0, 1]));
    }
}
