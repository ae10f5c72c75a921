//! Norm equations |y|² = ξ over ℤ[ω] with ξ ∈ ℤ[√2].
//!
//! ξ is split by trial division against a table of small ℤ[√2] primes; the
//! leftover η must pass a primality test. The equation is taken to be easily
//! solvable when every prime with an odd exponent (η included) is good.

pub mod arith;

use std::fmt;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::error::Error;
use crate::ring::{CyclotomicInt, Root2Int};
use arith::{exact_sqrt, is_probable_prime, mod8, sqrt_mod};

/// Bound on |N(π)| for the precomputed prime table.
pub const PRIME_NORM_BOUND: u64 = 1000;
pub const DEFAULT_BUDGET: Duration = Duration::from_millis(50);
const MR_ROUNDS: u32 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum ResidualStatus {
    ProvenPrime,
    ProbablePrime,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum VerdictReason {
    GoodPrimeResidual,
    EvenBadPowers,
    BadResidual,
    NegativeUnderEmbedding,
    Timeout,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SolvabilityVerdict {
    pub easily_solvable: bool,
    pub reason: VerdictReason,
}

/// ξ = unit · ∏ πᵢ^{eᵢ} · η.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LimitedFactorization {
    pub xi: Root2Int,
    pub unit_part: Root2Int,
    pub factors: Vec<(Root2Int, u32)>,
    pub residual: Root2Int,
    pub residual_status: ResidualStatus,
    pub verdict: SolvabilityVerdict,
}

/// A table prime: a totally positive generator and how to reach its norm form.
#[derive(Clone, Debug)]
struct TablePrime {
    pi: Root2Int,
    /// |N(π)|: 2, a split rational prime p, or p² for inert p
    norm: u64,
    kind: PrimeKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum PrimeKind {
    Ramified,
    Split,
    Inert,
}

impl TablePrime {
    fn good(&self) -> bool {
        match self.kind {
            PrimeKind::Ramified => true,
            PrimeKind::Split => self.norm % 8 == 1,
            PrimeKind::Inert => true,
        }
    }
}

fn prime_table() -> &'static [TablePrime] {
    static TABLE: OnceLock<Vec<TablePrime>> = OnceLock::new();
    TABLE.get_or_init(build_prime_table)
}

fn build_prime_table() -> Vec<TablePrime> {
    let mut out = vec![TablePrime { pi: Root2Int::new(2, 1), norm: 2, kind: PrimeKind::Ramified }];
    for p in 3..=PRIME_NORM_BOUND {
        if !arith::is_prime_small(p) {
            continue;
        }
        match p % 8 {
            1 | 7 => {
                // p = a² − 2b²; both conjugate factors are distinct primes
                let (a, b) = split_rep(p);
                let pi = Root2Int::new(a, b);
                out.push(TablePrime { pi: pi.clone(), norm: p, kind: PrimeKind::Split });
                out.push(TablePrime { pi: pi.conj(), norm: p, kind: PrimeKind::Split });
            }
            _ => {
                if p * p <= PRIME_NORM_BOUND {
                    out.push(TablePrime { pi: Root2Int::from_int(p), norm: p * p, kind: PrimeKind::Inert });
                }
            }
        }
    }
    out.sort_by(|x, y| x.norm.cmp(&y.norm).then_with(|| x.pi.cmp(&y.pi)));
    out
}

/// a, b > 0 with a² − 2b² = p, a > b√2 so both embeddings are positive.
fn split_rep(p: u64) -> (i64, i64) {
    for b in 1i64.. {
        let a2 = p as i64 + 2 * b * b;
        let a = (a2 as f64).sqrt().round() as i64;
        for a in [a - 1, a, a + 1] {
            if a > 0 && a * a == a2 {
                return (a, b);
            }
        }
    }
    unreachable!()
}

/// Whether ξ is, up to units, a good prime.
pub fn classify_good_prime(xi: &Root2Int) -> bool {
    if xi.is_zero() {
        return false;
    }
    let n = xi.norm().abs();
    if n == BigInt::from(2) {
        return true;
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x9e37);
    if is_probable_prime(&n, MR_ROUNDS, &mut rng) {
        return mod8(&n) == 1;
    }
    if let Some(p) = exact_sqrt(&n) {
        if is_probable_prime(&p, MR_ROUNDS, &mut rng) && xi.div_exact(&Root2Int::from_int(p.clone())).map_or(false, |u| u.is_unit()) {
            return mod8(&p) != 7;
        }
    }
    false
}

/// Trial-divide ξ by the prime table and classify what is left.
pub fn limited_factor<R: Rng + ?Sized>(xi: &Root2Int, budget: Duration, rng: &mut R) -> LimitedFactorization {
    let start = Instant::now();
    let unsolvable = |reason, residual: Root2Int, status| LimitedFactorization {
        xi: xi.clone(),
        unit_part: Root2Int::one(),
        factors: vec![],
        residual,
        residual_status: status,
        verdict: SolvabilityVerdict { easily_solvable: false, reason },
    };
    if xi.is_zero() {
        // |y|² = 0 has the solution y = 0
        return LimitedFactorization {
            xi: xi.clone(),
            unit_part: Root2Int::one(),
            factors: vec![],
            residual: Root2Int::zero(),
            residual_status: ResidualStatus::ProvenPrime,
            verdict: SolvabilityVerdict { easily_solvable: true, reason: VerdictReason::GoodPrimeResidual },
        };
    }
    if !(xi.is_positive() && xi.conj().is_positive()) {
        return unsolvable(VerdictReason::NegativeUnderEmbedding, xi.clone(), ResidualStatus::Unknown);
    }
    let mut rest = xi.clone();
    let mut factors = Vec::new();
    for tp in prime_table() {
        // once |N(rest)| < N(π) no further division by π is possible
        if rest.norm().abs() < BigInt::from(tp.norm) {
            break;
        }
        let mut e = 0;
        while let Some(q) = rest.div_exact(&tp.pi) {
            rest = q;
            e += 1;
        }
        if e > 0 {
            factors.push((tp.pi.clone(), e));
        }
        if start.elapsed() > budget {
            return unsolvable(VerdictReason::Timeout, rest, ResidualStatus::Unknown);
        }
    }
    let table = prime_table();
    let bad_odd = factors.iter().any(|(pi, e)| {
        let tp = table.iter().find(|t| &t.pi == pi).expect("factor from table");
        !tp.good() && e % 2 == 1
    });
    let any_bad = factors.iter().any(|(pi, _)| !table.iter().find(|t| &t.pi == pi).unwrap().good());

    let n = rest.norm().abs();
    let (unit_part, residual, status, good_residual) = if n.is_one() {
        (rest.clone(), Root2Int::one(), ResidualStatus::ProvenPrime, true)
    } else {
        // below 97² the primality test is exact trial division
        let small = n.to_u64().map_or(false, |v| v < 97 * 97);
        if is_probable_prime(&n, MR_ROUNDS, rng) {
            let status = if small { ResidualStatus::ProvenPrime } else { ResidualStatus::ProbablePrime };
            (Root2Int::one(), rest.clone(), status, mod8(&n) == 1)
        } else if let Some(p) = exact_sqrt(&n).filter(|p| is_probable_prime(p, MR_ROUNDS, rng)) {
            let assoc = rest.div_exact(&Root2Int::from_int(p.clone())).filter(|u| u.is_unit());
            let status = if small { ResidualStatus::ProvenPrime } else { ResidualStatus::ProbablePrime };
            match assoc {
                Some(u) => (u, Root2Int::from_int(p.clone()), status, mod8(&p) != 7),
                None => (Root2Int::one(), rest.clone(), ResidualStatus::Unknown, false),
            }
        } else {
            (Root2Int::one(), rest.clone(), ResidualStatus::Unknown, false)
        }
    };
    if start.elapsed() > budget {
        return unsolvable(VerdictReason::Timeout, rest, ResidualStatus::Unknown);
    }
    let easily = good_residual && !bad_odd;
    let reason = if !good_residual {
        VerdictReason::BadResidual
    } else if bad_odd {
        VerdictReason::BadResidual
    } else if any_bad {
        VerdictReason::EvenBadPowers
    } else {
        VerdictReason::GoodPrimeResidual
    };
    LimitedFactorization {
        xi: xi.clone(),
        unit_part,
        factors,
        residual,
        residual_status: status,
        verdict: SolvabilityVerdict { easily_solvable: easily, reason },
    }
}

/// y with |y|² = ξ, for a factorization that was classified easily solvable.
pub fn solve_norm_equation(xi: &Root2Int, fact: &LimitedFactorization) -> Result<CyclotomicInt, Error> {
    if xi.is_zero() {
        return Ok(CyclotomicInt::zero());
    }
    if !fact.verdict.easily_solvable {
        return Err(Error::NoSolution(format!("{xi} is not easily solvable ({:?})", fact.verdict.reason)));
    }
    let table = prime_table();
    let mut y = CyclotomicInt::one();
    for (pi, e) in &fact.factors {
        let tp = table.iter().find(|t| &t.pi == pi).expect("factor from table");
        if tp.good() {
            let base = solve_prime(&tp.pi, tp.kind)?;
            y = &y * &base.pow(*e);
        } else {
            // bad prime at an even power: π^{e/2} is real so |π^{e/2}|² = π^e
            y = &y * &CyclotomicInt::from_root2(&tp.pi.pow(e / 2));
        }
    }
    let res = &fact.residual;
    if !is_unity(res) {
        let n = res.norm().abs();
        let kind = if n.is_even() {
            PrimeKind::Ramified
        } else if res.b.is_zero() {
            PrimeKind::Inert
        } else {
            PrimeKind::Split
        };
        y = &y * &solve_prime(res, kind)?;
    }
    fix_unit(xi, y)
}

fn is_unity(x: &Root2Int) -> bool {
    x.a.is_one() && x.b.is_zero()
}

/// Convenience: factor with the default budget and solve.
pub fn solve<R: Rng + ?Sized>(xi: &Root2Int, rng: &mut R) -> Result<CyclotomicInt, Error> {
    let f = limited_factor(xi, DEFAULT_BUDGET, rng);
    solve_norm_equation(xi, &f)
}

/// A y with |y|² equal to π up to a unit.
fn solve_prime(pi: &Root2Int, kind: PrimeKind) -> Result<CyclotomicInt, Error> {
    match kind {
        PrimeKind::Ramified => Ok(CyclotomicInt::one() + CyclotomicInt::omega()),
        PrimeKind::Split => {
            let p = pi.norm().abs();
            let pz = CyclotomicInt::from_root2(pi);
            let y = gaussian_gcd(&pz, &p)?;
            Ok(y)
        }
        PrimeKind::Inert => {
            let p = pi.a.abs();
            let pz = CyclotomicInt::from_int(p.clone());
            match mod8(&p) {
                1 | 5 => gaussian_gcd(&pz, &p).map(|y| {
                    if mod8(&p) == 1 {
                        // p splits further in ℤ[√2]; pair a factor with its •-image
                        &y * &y.bullet()
                    } else {
                        y
                    }
                }),
                3 => {
                    let h = sqrt_mod(&BigInt::from(-2), &p).ok_or_else(|| Error::NoSolution(format!("no √−2 mod {p}")))?;
                    let root_m2 = &CyclotomicInt::omega() + &CyclotomicInt::omega_pow(3);
                    let g = CyclotomicInt::gcd(&pz, &(&CyclotomicInt::from_int(h) + &root_m2));
                    Ok(g)
                }
                _ => Err(Error::NoSolution(format!("rational prime {p} ≡ 7 (mod 8) is not a norm"))),
            }
        }
    }
}

/// gcd(x, h + i) with h² ≡ −1 (mod p).
fn gaussian_gcd(x: &CyclotomicInt, p: &BigInt) -> Result<CyclotomicInt, Error> {
    let h = sqrt_mod(&BigInt::from(-1), p).ok_or_else(|| Error::NoSolution(format!("no √−1 mod {p}")))?;
    Ok(CyclotomicInt::gcd(x, &(&CyclotomicInt::from_int(h) + &CyclotomicInt::i())))
}

/// Multiply y by λ^k so that |y|² = ξ exactly.
fn fix_unit(xi: &Root2Int, y: CyclotomicInt) -> Result<CyclotomicInt, Error> {
    let got = y.abs_squared();
    let u = xi
        .div_exact(&got)
        .filter(|u| u.is_unit() && u.is_positive() && u.conj().is_positive())
        .ok_or_else(|| Error::NoSolution(format!("|y|² = {got} is not an associate of {xi}")))?;
    // u = λ^{2k}
    let lg = u.to_f64().ln() / Root2Int::lambda().to_f64().ln();
    let k = (lg / 2.0).round() as i64;
    let step = if k >= 0 { Root2Int::lambda() } else { Root2Int::lambda_inv() };
    let lk = step.pow(k.unsigned_abs() as u32);
    if lk.pow(2) != u {
        return Err(Error::NoSolution(format!("unit {u} is not an even power of λ")));
    }
    let y = &y * &CyclotomicInt::from_root2(&lk);
    if y.abs_squared() != *xi {
        return Err(Error::NoSolution(format!("solution check failed for {xi}")));
    }
    Ok(y)
}

impl LimitedFactorization {
    /// Human-readable form grouping conjugate pairs into rational primes,
    /// e.g. `2^5 * 3^3 * 5 * 7^2 * (2+√2) * (5-2√2)`.
    pub fn display_grouped(&self) -> String {
        let mut rational: Vec<(BigInt, u32)> = Vec::new();
        let mut algebraic: Vec<(Root2Int, u32)> = Vec::new();
        let mut remaining: Vec<(Root2Int, u32)> = self.factors.clone();
        // (2+√2)^2 = 2·λ
        if let Some(pos) = remaining.iter().position(|(p, _)| *p == Root2Int::new(2, 1)) {
            let e = remaining[pos].1;
            if e / 2 > 0 {
                rational.push((BigInt::from(2), e / 2));
            }
            if e % 2 == 1 {
                algebraic.push((Root2Int::new(2, 1), 1));
            }
            remaining.remove(pos);
        }
        let mut used = vec![false; remaining.len()];
        for i in 0..remaining.len() {
            if used[i] {
                continue;
            }
            let (p, e) = remaining[i].clone();
            if p.b.is_zero() {
                rational.push((p.a.clone(), e));
                used[i] = true;
                continue;
            }
            let partner = (i + 1..remaining.len()).find(|&j| !used[j] && remaining[j].0 == p.conj());
            used[i] = true;
            match partner {
                Some(j) => {
                    used[j] = true;
                    let f = remaining[j].1;
                    let common = e.min(f);
                    rational.push((p.norm().abs(), common));
                    if e > common {
                        algebraic.push((p.clone(), e - common));
                    }
                    if f > common {
                        algebraic.push((remaining[j].0.clone(), f - common));
                    }
                }
                None => algebraic.push((p, e)),
            }
        }
        rational.sort();
        let mut parts: Vec<String> = rational
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        for (p, e) in &algebraic {
            parts.push(if *e == 1 { format!("({p})") } else { format!("({p})^{e}") });
        }
        if !is_unity(&self.residual) {
            parts.push(format!("[{}]", self.residual));
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        parts.join(" * ")
    }
}

impl fmt::Display for LimitedFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_grouped())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(42)
    }

    #[test]
    fn table_contents() {
        let t = prime_table();
        assert_eq!(t[0].pi, Root2Int::new(2, 1));
        assert!(t.iter().all(|p| p.pi.is_totally_positive()));
        assert!(t.iter().all(|p| p.pi.norm().abs() == BigInt::from(p.norm)));
        assert!(t.iter().any(|p| p.pi == Root2Int::new(5, -2)));
        assert!(t.iter().any(|p| p.pi == Root2Int::from_int(29)));
        assert!(!t.iter().any(|p| p.pi == Root2Int::from_int(37)));
    }

    #[test]
    fn good_prime_examples() {
        assert!(classify_good_prime(&Root2Int::new(2, 1)));
        assert!(classify_good_prime(&Root2Int::new(5, -2)));
        assert!(!classify_good_prime(&Root2Int::from_int(7)));
        assert!(classify_good_prime(&Root2Int::from_int(3)));
        assert!(!classify_good_prime(&Root2Int::new(3, 1)));
    }

    #[test]
    fn worked_example() {
        let xi = Root2Int::new(1270080, 211680);
        let f = limited_factor(&xi, DEFAULT_BUDGET, &mut rng());
        assert!(f.verdict.easily_solvable);
        assert_eq!(f.display_grouped(), "2^5 * 3^3 * 5 * 7^2 * (2+√2) * (5-2√2)");
        let y = solve_norm_equation(&xi, &f).unwrap();
        assert_eq!(y.abs_squared(), xi);
    }

    #[test]
    fn trivial_cases() {
        let one = Root2Int::one();
        let f = limited_factor(&one, DEFAULT_BUDGET, &mut rng());
        assert!(f.verdict.easily_solvable && f.factors.is_empty());
        assert_eq!(solve(&Root2Int::new(2, 1), &mut rng()).unwrap().abs_squared(), Root2Int::new(2, 1));
        assert_eq!(solve(&Root2Int::from_int(2), &mut rng()).unwrap().abs_squared(), Root2Int::from_int(2));
        assert_eq!(solve(&Root2Int::from_int(17), &mut rng()).unwrap().abs_squared(), Root2Int::from_int(17));
        assert!(solve(&Root2Int::zero(), &mut rng()).unwrap().is_zero());
    }

    #[test]
    fn bad_prime_parity() {
        let odd = Root2Int::new(14, 7);
        assert!(!limited_factor(&odd, DEFAULT_BUDGET, &mut rng()).verdict.easily_solvable);
        let even = Root2Int::new(98, 49);
        let f = limited_factor(&even, DEFAULT_BUDGET, &mut rng());
        assert!(f.verdict.easily_solvable);
        assert_eq!(f.verdict.reason, VerdictReason::EvenBadPowers);
        assert_eq!(solve_norm_equation(&even, &f).unwrap().abs_squared(), even);
    }

    #[test]
    fn negative_embedding_is_rejected() {
        let f = limited_factor(&Root2Int::new(1, 1), DEFAULT_BUDGET, &mut rng());
        assert_eq!(f.verdict.reason, VerdictReason::NegativeUnderEmbedding);
    }

    #[test]
    fn large_prime_residuals() {
        // products of a few elements with large good-prime norms
        let mut r = rng();
        let mut solved = 0;
        for a in 1000..1200 {
            let xi = Root2Int::new(a * 37 + 11, a);
            if !xi.is_totally_positive() {
                continue;
            }
            let f = limited_factor(&xi, DEFAULT_BUDGET, &mut r);
            if f.verdict.easily_solvable {
                let y = solve_norm_equation(&xi, &f).unwrap();
                assert_eq!(y.abs_squared(), xi);
                solved += 1;
            }
        }
        assert!(solved > 10, "{solved}");
    }
}
