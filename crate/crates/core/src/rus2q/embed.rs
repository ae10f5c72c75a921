//! Exact RUS embedding with two ancillas: a unitary W whose top-left block is
//! α/2^{ℓ/2}·V and whose other outcomes leave the data untouched.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Error;
use crate::normeq::arith::four_squares;
use crate::ring::serial::BigNum;
use crate::ring::{sqrt2_pow, CyclotomicInt, RingUnitary};

/// A unitary over ℚ(ω): entries `num / (den · √2^l)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldUnitary {
    pub dim: usize,
    pub num: Vec<CyclotomicInt>,
    pub den: BigInt,
    pub l: u32,
}

impl FieldUnitary {
    pub fn from_ring(u: &RingUnitary) -> Self {
        FieldUnitary { dim: u.dim(), num: u.entries().to_vec(), den: BigInt::one(), l: u.denom_exp() }
    }

    /// Exact check of V·V† = I.
    pub fn is_unitary(&self) -> bool {
        let n = self.dim;
        // Σ_k num_ik num_jk* = δ_ij · den² · 2^l
        let diag = CyclotomicInt::from_int(&self.den * &self.den * (BigInt::one() << self.l));
        (0..n).all(|i| {
            (0..n).all(|j| {
                let s = (0..n).fold(CyclotomicInt::zero(), |acc, k| &acc + &(&self.num[i * n + k] * &self.num[j * n + k].conj()));
                s == if i == j { diag.clone() } else { CyclotomicInt::zero() }
            })
        })
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Embedding4Block {
    pub alpha: CyclotomicInt,
    pub beta0: CyclotomicInt,
    pub gamma0: CyclotomicInt,
    pub ell: u32,
    /// a² + b² + c² + d² = 2^ℓ − |α|²
    #[serde(serialize_with = "ser_squares")]
    pub squares: [BigInt; 4],
    #[serde(rename = "W")]
    pub w: RingUnitary,
}

fn ser_squares<S: serde::Serializer>(sq: &[BigInt; 4], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(sq.iter().map(BigNum::from))
}

impl Embedding4Block {
    /// Whether det(W) = 1 exactly.
    pub fn det_is_one(&self) -> bool {
        let (num, k) = self.w.det();
        num == sqrt2_pow(k)
    }

    /// Success probability |α|²/2^ℓ.
    pub fn success_probability(&self) -> f64 {
        let a2 = self.alpha.abs_squared();
        crate::pipeline::probability_f64(&a2, self.ell)
    }
}

/// Build W with β = β₀/2^{ℓ/2}, γ = γ₀/2^{ℓ/2} from a four-squares split of 2^ℓ − |α|².
/// `alpha` defaults to the common denominator of V.
pub fn build_embedding_2anc(v: &FieldUnitary, alpha: Option<CyclotomicInt>, seed: u64) -> Result<Embedding4Block, Error> {
    if !v.is_unitary() {
        return Err(Error::NotUnitary);
    }
    let alpha = alpha.unwrap_or_else(|| CyclotomicInt::from_int(v.den.clone()));
    let den = CyclotomicInt::from_int(v.den.clone());
    // αV = M / √2^l with M over ℤ[ω]
    let m: Vec<CyclotomicInt> = v.num.iter().map(|e| (&alpha * e).div_exact(&den).ok_or(Error::NoPremultiplier)).collect::<Result<_, _>>()?;
    let a2 = alpha.abs_squared();
    if !a2.b.is_zero() || a2.a.is_zero() {
        return Err(Error::NoPremultiplier);
    }
    let a2 = a2.a;
    let ell = (a2.bits() as u32).saturating_sub(if (&a2 & (&a2 - 1u32)).is_zero() { 1 } else { 0 });
    let rest = (BigInt::one() << ell) - &a2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sq = four_squares(&rest, &mut rng);
    let beta0 = CyclotomicInt::gaussian(sq[0].clone(), sq[1].clone());
    let gamma0 = CyclotomicInt::gaussian(sq[2].clone(), sq[3].clone());

    let n = v.dim;
    let big = 4 * n;
    let lw = ell + v.l;
    let lift = sqrt2_pow(v.l);
    let (b, g) = (&beta0 * &lift, &gamma0 * &lift);
    let (bc, gc) = (b.conj(), g.conj());
    let mut e = vec![CyclotomicInt::zero(); big * big];
    let mut put = |bi: usize, bj: usize, i: usize, j: usize, x: CyclotomicInt| e[(bi * n + i) * big + bj * n + j] = x;
    for i in 0..n {
        for j in 0..n {
            let av = m[i * n + j].clone();
            // −ᾱV† = −(αV)†
            let avd = -m[j * n + i].conj();
            put(0, 0, i, j, av.clone());
            put(3, 3, i, j, av);
            put(1, 1, i, j, avd.clone());
            put(2, 2, i, j, avd);
        }
        put(0, 1, i, i, bc.clone());
        put(0, 2, i, i, gc.clone());
        put(1, 0, i, i, b.clone());
        put(1, 3, i, i, gc.clone());
        put(2, 0, i, i, g.clone());
        put(2, 3, i, i, -&bc);
        put(3, 1, i, i, g.clone());
        put(3, 2, i, i, -&b);
    }
    let w = RingUnitary::new(big, e, lw)?;
    Ok(Embedding4Block { alpha, beta0, gamma0, ell, squares: sq, w })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate1Q;
    use rand::Rng;

    /// (A/√N)² = A²/N for A = [[u, −w*], [w, u*]], |u|² + |w|² = N: a unitary over ℚ(i).
    fn random_field_unitary(rng: &mut impl Rng) -> FieldUnitary {
        loop {
            let u = CyclotomicInt::gaussian(rng.gen_range(-6..=6), rng.gen_range(-6..=6));
            let w = CyclotomicInt::gaussian(rng.gen_range(-6..=6), rng.gen_range(-6..=6));
            let nn = &u.abs_squared() + &w.abs_squared();
            if nn.a.is_zero() {
                continue;
            }
            let a = RingUnitary::from_2x2(u.clone(), -w.conj(), w.clone(), u.conj(), 0);
            let a2 = a.dot(&a);
            // extra exact Clifford+T factor to bring in √2 denominators
            let c = [Gate1Q::H, Gate1Q::T, Gate1Q::H, Gate1Q::S][..rng.gen_range(0..4)].iter().fold(RingUnitary::identity(2), |acc, g| acc.dot(&g.matrix()));
            let prod = a2.dot(&c);
            let fu = FieldUnitary { dim: 2, num: prod.entries().to_vec(), den: nn.a.clone(), l: prod.denom_exp() };
            if fu.is_unitary() {
                return fu;
            }
        }
    }

    #[test]
    fn identity_embedding() {
        let e = build_embedding_2anc(&FieldUnitary::from_ring(&RingUnitary::identity(2)), None, 1).unwrap();
        assert_eq!(e.ell, 0);
        assert!(e.beta0.is_zero() && e.gamma0.is_zero());
        assert!(e.w.is_unitary());
        assert!(e.det_is_one());
    }

    #[test]
    fn pythagorean_example() {
        // V = [[3, −4], [4, 3]]/5, α = 5, ℓ = 5, 32 − 25 = 7
        let v = FieldUnitary { dim: 2, num: [3, -4, 4, 3].map(CyclotomicInt::from_int).to_vec(), den: BigInt::from(5), l: 0 };
        let e = build_embedding_2anc(&v, None, 2).unwrap();
        assert_eq!(e.ell, 5);
        assert_eq!(e.squares, [2, 1, 1, 1].map(BigInt::from));
        assert!(e.w.is_unitary());
        assert!(e.det_is_one());
        assert!((e.success_probability() - 25.0 / 32.0).abs() < 1e-15);
    }

    #[test]
    fn random_field_unitaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for i in 0..20 {
            let v = random_field_unitary(&mut rng);
            let e = build_embedding_2anc(&v, None, i).unwrap();
            let a2 = e.alpha.abs_squared().a;
            let s: BigInt = e.squares.iter().map(|x| x * x).sum();
            assert_eq!(s + &a2, BigInt::one() << e.ell);
            assert!(e.w.is_unitary());
            assert!(e.det_is_one());
        }
    }

    #[test]
    fn bad_premultiplier() {
        let v = FieldUnitary { dim: 2, num: [3, -4, 4, 3].map(CyclotomicInt::from_int).to_vec(), den: BigInt::from(5), l: 0 };
        assert!(matches!(build_embedding_2anc(&v, Some(CyclotomicInt::from_int(2)), 0), Err(Error::NoPremultiplier)));
    }
}
