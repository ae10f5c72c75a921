//! Exact synthesis by descent on the Bloch (SO(3)) representation.
//!
//! For U = M/√2^L the Bloch matrix has entries tr(σ_i M σ_j M†)/2^{L+1}, all
//! in ℤ[√2]/√2^k. The least such k is the minimal T-count of U, and exactly
//! one of T, H·T, S·H·T peeled off the left lowers it by one.

use crate::circuit::{Circuit1, Gate1Q, Pauli};
use crate::error::Error;
use crate::ring::{CyclotomicInt, RingUnitary};

use super::clifford::Clifford;

type M2 = [CyclotomicInt; 4];

fn m2(u: &RingUnitary) -> M2 {
    let e = u.entries();
    [e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone()]
}

fn mm(a: &M2, b: &M2) -> M2 {
    [
        &(&a[0] * &b[0]) + &(&a[1] * &b[2]),
        &(&a[0] * &b[1]) + &(&a[1] * &b[3]),
        &(&a[2] * &b[0]) + &(&a[3] * &b[2]),
        &(&a[2] * &b[1]) + &(&a[3] * &b[3]),
    ]
}

fn adj(a: &M2) -> M2 {
    [a[0].conj(), a[2].conj(), a[1].conj(), a[3].conj()]
}

/// Least denominator exponent (in powers of √2) of the Bloch matrix of `u`.
pub fn bloch_lde(u: &RingUnitary) -> u32 {
    assert_eq!(u.dim(), 2, "single-qubit matrix expected");
    let m = m2(u);
    let md = adj(&m);
    let paulis: Vec<M2> = [Pauli::X, Pauli::Y, Pauli::Z].iter().map(|p| m2(&p.matrix())).collect();
    let full = 2 * u.denom_exp() + 2;
    let mut min_v = full;
    let right: Vec<M2> = paulis.iter().map(|s| mm(&mm(&m, s), &md)).collect();
    for si in &paulis {
        for r in &right {
            let p = mm(si, r);
            let tr = &p[0] + &p[3];
            if !tr.is_zero() {
                min_v = min_v.min(tr.sqrt2_valuation());
            }
        }
    }
    full - min_v
}

/// Minimal T-count of an exactly representable single-qubit unitary.
pub fn tcount_of(u: &RingUnitary) -> u32 {
    bloch_lde(u)
}

/// One left factor of the normal form, in matrix order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prefix {
    T,
    HT,
    SHT,
}

impl Prefix {
    pub const ALL: [Prefix; 3] = [Prefix::T, Prefix::HT, Prefix::SHT];

    /// Clifford part preceding the T (matrix order).
    pub fn clifford(self) -> Clifford {
        match self {
            Prefix::T => Clifford::ID,
            Prefix::HT => Clifford::h(),
            Prefix::SHT => Clifford::s_pow(1).mul(Clifford::h()),
        }
    }

    fn matrix(self) -> RingUnitary {
        self.clifford().matrix().dot(&Gate1Q::T.matrix())
    }

    /// Gates in application order.
    fn gates(self) -> &'static [Gate1Q] {
        match self {
            Prefix::T => &[Gate1Q::T],
            Prefix::HT => &[Gate1Q::T, Gate1Q::H],
            Prefix::SHT => &[Gate1Q::T, Gate1Q::H, Gate1Q::S],
        }
    }
}

/// `U = P_1 ⋯ P_t · K` in matrix order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub prefixes: Vec<Prefix>,
    pub tail: Clifford,
}

impl NormalForm {
    pub fn t_count(&self) -> usize {
        self.prefixes.len()
    }

    /// Circuit in application order.
    pub fn circuit(&self) -> Circuit1 {
        let mut gates = self.tail.circuit().0;
        for p in self.prefixes.iter().rev() {
            gates.extend_from_slice(p.gates());
        }
        Circuit1::new(gates)
    }
}

fn check_input(u: &RingUnitary) -> Result<(), Error> {
    if u.dim() != 2 {
        return Err(Error::Shape(format!("expected 2x2, got {0}x{0}", u.dim())));
    }
    if !u.is_unitary() {
        return Err(Error::NotUnitary);
    }
    Ok(())
}

pub fn normal_form(u: &RingUnitary) -> Result<NormalForm, Error> {
    check_input(u)?;
    let mut cur = u.clone();
    let mut k = bloch_lde(&cur);
    let mut prefixes = Vec::with_capacity(k as usize);
    let inverses: Vec<RingUnitary> = Prefix::ALL.iter().map(|p| p.matrix().adjoint()).collect();
    while k > 0 {
        let step = Prefix::ALL.iter().zip(&inverses).find_map(|(p, inv)| {
            let next = inv.dot(&cur);
            (bloch_lde(&next) + 1 == k).then_some((*p, next))
        });
        let (p, next) = step.ok_or_else(|| Error::NotInRing("Bloch descent stalled".into()))?;
        prefixes.push(p);
        cur = next;
        k -= 1;
    }
    let tail = Clifford::from_matrix(&cur).ok_or_else(|| Error::NotInRing(format!("residual {cur} is not Clifford")))?;
    Ok(NormalForm { prefixes, tail })
}

/// Optimal Clifford+T circuit (application order) evaluating exactly to `u`.
pub fn exact_synthesize(u: &RingUnitary) -> Result<Circuit1, Error> {
    normal_form(u).map(|nf| nf.circuit())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const POOL: [Gate1Q; 8] = [Gate1Q::H, Gate1Q::T, Gate1Q::Tdg, Gate1Q::S, Gate1Q::Sdg, Gate1Q::X, Gate1Q::Z, Gate1Q::W(1)];

    pub(crate) fn random_circuit(rng: &mut impl Rng, len: usize) -> Circuit1 {
        Circuit1::new((0..len).map(|_| POOL[rng.gen_range(0..POOL.len())]).collect())
    }

    #[test]
    fn trivial_cases() {
        let h = exact_synthesize(&Gate1Q::H.matrix()).unwrap();
        assert_eq!(h.to_string(), "H");
        let t = exact_synthesize(&Gate1Q::T.matrix()).unwrap();
        assert_eq!(t.to_string(), "T");
        assert_eq!(tcount_of(&RingUnitary::identity(2)), 0);
    }

    #[test]
    fn round_trip_random_circuits() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let c = random_circuit(&mut rng, 10);
            let u = c.matrix();
            let out = exact_synthesize(&u).unwrap();
            assert_eq!(out.matrix(), u, "{c}");
            assert!(out.t_count() <= c.t_count());
            assert_eq!(out.t_count() as u32, tcount_of(&u));
        }
    }

    #[test]
    fn tcount_matches_brute_force_minimum() {
        // breadth-first over syllables gives the true minimum for small counts
        use std::collections::HashMap;
        let mut best: HashMap<RingUnitary, u32> = HashMap::new();
        let mut frontier: Vec<RingUnitary> = Clifford::all().map(|c| c.matrix().clone()).collect();
        for m in &frontier {
            best.insert(m.clone(), 0);
        }
        let t = Gate1Q::T.matrix();
        for level in 1..=4u32 {
            let mut next = Vec::new();
            for m in &frontier {
                for c in Clifford::all() {
                    let n = c.matrix().dot(&t).dot(m);
                    if !best.contains_key(&n) {
                        best.insert(n.clone(), level);
                        next.push(n);
                    }
                }
            }
            frontier = next;
        }
        for (m, &tc) in &best {
            assert_eq!(tcount_of(m), tc);
        }
    }

    #[test]
    fn rejects_non_unitary() {
        let m = RingUnitary::from_2x2(CyclotomicInt::one(), CyclotomicInt::one(), CyclotomicInt::zero(), CyclotomicInt::one(), 0);
        assert!(matches!(exact_synthesize(&m), Err(Error::NotUnitary)));
    }
}
