//! How densely one-ancilla RUS protocols cover the z-rotations, against
//! unitary circuits of comparable cost.
//!
//! A pair x₀, y₀ ∈ ℤ[ω] with |x₀|² + |y₀|² ≤ 2^ℓ (in both real embeddings)
//! gives the point x₀/√(|x₀|² + |y₀|²). It is realisable when
//! |z|² = 2^ℓ − |x₀|² − |y₀|² has a solution. Unitary points are x₀/√2^k with
//! |y|² = 2^k − |x₀|² solvable.

use std::collections::{BTreeMap, HashMap};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use rusforge::normeq;
use rusforge::ring::{CyclotomicInt, Root2Int};

/// Denominator exponent for the unitary comparison set: T-count 2k − 2 ≤ 8.
pub const UNITARY_EXP: u32 = 5;
pub const MAX_ELL: u32 = 4;

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DensityReport {
    pub ell: u32,
    /// all candidate points, deduplicated
    pub grey: Vec<[f64; 2]>,
    /// realisable subset
    pub blue: Vec<[f64; 2]>,
    /// unitary points x₀/√2^k, k ≤ UNITARY_EXP
    pub red: Vec<[f64; 2]>,
    /// distinct rotation angles arg x among the blue points
    pub blue_rotations: usize,
    /// largest nearest-neighbour d-distance between blue rotations
    pub eps_max: f64,
    /// red points within eps_max of some z-rotation
    pub red_within: usize,
}

/// Coefficient vectors with a² + b² + c² + d² ≤ bound, paired with that sum.
fn small_elements(bound: i64) -> Vec<(CyclotomicInt, i64)> {
    let r = (bound as f64).sqrt() as i64;
    let mut out = Vec::new();
    for a in -r..=r {
        for b in -r..=r {
            for c in -r..=r {
                for d in -r..=r {
                    let n = a * a + b * b + c * c + d * d;
                    if n <= bound {
                        out.push((CyclotomicInt::new(a, b, c, d), n));
                    }
                }
            }
        }
    }
    out
}

fn key(p: [f64; 2]) -> (i64, i64) {
    ((p[0] * 1e9).round() as i64, (p[1] * 1e9).round() as i64)
}

fn in_quadrant(p: [f64; 2]) -> bool {
    p[0] >= -1e-12 && p[1] >= -1e-12
}

/// Norm-equation solvability, memoised on ξ.
struct Solver {
    rng: ChaCha8Rng,
    memo: HashMap<Root2Int, bool>,
}

impl Solver {
    fn solvable(&mut self, xi: &Root2Int) -> bool {
        if xi.is_zero() {
            return true;
        }
        if xi.signum() < 0 || xi.conj().signum() < 0 {
            return false;
        }
        if let Some(&v) = self.memo.get(xi) {
            return v;
        }
        let v = normeq::solve(xi, &mut self.rng).is_ok();
        self.memo.insert(xi.clone(), v);
        v
    }
}

fn normalised(x: &CyclotomicInt, n2: &Root2Int) -> [f64; 2] {
    let c = x.complex_value() / n2.to_f64().sqrt();
    [c.re, c.im]
}

/// d between diag(e^{iφ}, e^{−iφ}) and diag(e^{iψ}, e^{−iψ}).
fn rotation_distance(phi: f64, psi: f64) -> f64 {
    (1.0 - (phi - psi).cos().abs()).max(0.0).sqrt()
}

pub fn density(ell: u32) -> DensityReport {
    assert!(ell <= MAX_ELL, "ℓ = {ell} is beyond the enumeration limit {MAX_ELL}");
    let mut solver = Solver { rng: ChaCha8Rng::seed_from_u64(0), memo: HashMap::new() };
    let bound = 1i64 << ell;
    let elems = small_elements(bound);
    let two_l = Root2Int::from_int(bound);
    let mut grey: BTreeMap<(i64, i64), [f64; 2]> = BTreeMap::new();
    let mut blue: BTreeMap<(i64, i64), [f64; 2]> = BTreeMap::new();
    for (x0, nx) in elems.iter().filter(|(x, _)| !x.is_zero()) {
        let ax = x0.abs_squared();
        for (y0, ny) in &elems {
            if nx + ny > bound {
                continue;
            }
            let total = &ax + &y0.abs_squared();
            let xi = &two_l - &total;
            if xi.signum() < 0 || xi.conj().signum() < 0 {
                continue;
            }
            let p = normalised(x0, &total);
            if !in_quadrant(p) {
                continue;
            }
            let k = key(p);
            grey.insert(k, p);
            if !blue.contains_key(&k) && solver.solvable(&xi) {
                blue.insert(k, p);
            }
        }
    }

    let mut red: BTreeMap<(i64, i64), [f64; 2]> = BTreeMap::new();
    for (x0, _) in small_elements(1 << UNITARY_EXP).iter().filter(|(x, _)| !x.is_zero()) {
        let ax = x0.abs_squared();
        for k in 0..=UNITARY_EXP {
            let xi = &Root2Int::from_int(1i64 << k) - &ax;
            if xi.signum() < 0 || xi.conj().signum() < 0 {
                continue;
            }
            let p = normalised(x0, &Root2Int::from_int(1i64 << k));
            if in_quadrant(p) && solver.solvable(&xi) {
                red.insert(key(p), p);
            }
        }
    }

    let mut angles: Vec<f64> = blue.values().map(|p| p[1].atan2(p[0])).collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    let eps_max = (0..angles.len())
        .map(|i| {
            let left = if i > 0 { rotation_distance(angles[i], angles[i - 1]) } else { f64::INFINITY };
            let right = if i + 1 < angles.len() { rotation_distance(angles[i], angles[i + 1]) } else { f64::INFINITY };
            left.min(right)
        })
        .filter(|d| d.is_finite())
        .fold(0.0, f64::max);
    // d(V, nearest R_z) = √(1 − |x|) for V with top-left x
    let red_within = red.values().filter(|p| (1.0 - p[0].hypot(p[1])).max(0.0).sqrt() <= eps_max).count();

    DensityReport {
        ell,
        grey: grey.into_values().collect(),
        blue: blue.into_values().collect(),
        red: red.into_values().collect(),
        blue_rotations: angles.len(),
        eps_max,
        red_within,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ell_zero_keeps_trivial_phases() {
        let r = density(0);
        // 1, ω, i
        assert_eq!(r.blue.len(), 3);
        assert_eq!(r.grey.len(), 3);
        for p in &r.blue {
            assert!((p[0].hypot(p[1]) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn blue_is_subset_of_grey() {
        let r = density(3);
        let grey: Vec<(i64, i64)> = r.grey.iter().map(|&p| key(p)).collect();
        assert!(r.blue.iter().all(|&p| grey.contains(&key(p))));
        assert!(r.blue.len() < r.grey.len());
        assert!(r.eps_max > 0.0 && r.eps_max < 1.0);
    }

    #[test]
    fn blue_points_recheck() {
        // each blue point re-derived by an independent solve of its norm equation
        let ell = 2;
        let r = density(ell);
        let elems = small_elements(1 << ell);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for p in &r.blue {
            let found = elems.iter().any(|(x0, _)| {
                !x0.is_zero()
                    && elems.iter().any(|(y0, _)| {
                        let total = &x0.abs_squared() + &y0.abs_squared();
                        let xi = &Root2Int::from_int(1i64 << ell) - &total;
                        key(normalised(x0, &total)) == key(*p)
                            && (xi.is_zero()
                                || (xi.signum() >= 0 && xi.conj().signum() >= 0 && normeq::solve(&xi, &mut rng).map_or(false, |y| y.abs_squared() == xi)))
                    })
            });
            assert!(found, "{p:?}");
        }
    }
}
