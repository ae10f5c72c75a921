//! Simulation, metrics and protocol checks.

mod sim;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Error;
use crate::relation::Angle;
use crate::ring::{CyclotomicInt, RingUnitary, Root2Int};
use crate::rus2q::RusProtocol;

pub use sim::{circuit_unitary, distance, gate_complex, is_unitary_c2, rz, simulate_exact, simulate_float, RingState, C2};

/// Expected T-count of a repeat-until-success loop: `(C(U) + C(W)(1 − p)) / p`.
pub fn expected_cost(design_t: f64, correction_t: f64, p: f64) -> f64 {
    assert!(p > 0.0 && p <= 1.0, "success probability {p} out of range");
    (design_t + correction_t * (1.0 - p)) / p
}

/// Monte-Carlo estimate of the expected cost: (mean, standard error).
pub fn monte_carlo_cost(design_t: f64, correction_t: f64, p: f64, trials: u64, seed: u64) -> (f64, f64) {
    assert!(p > 0.0 && p <= 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sum2) = (0.0f64, 0.0f64);
    for _ in 0..trials {
        let mut cost = design_t;
        while !rng.gen_bool(p) {
            cost += correction_t + design_t;
        }
        sum += cost;
        sum2 += cost * cost;
    }
    let n = trials as f64;
    let mean = sum / n;
    let var = (sum2 / n - mean * mean).max(0.0);
    (mean, (var / n).sqrt())
}

/// What one measurement outcome does to the target.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BranchReport {
    pub outcome: u8,
    /// probability = numerator / 2^L
    pub probability_numerator: Root2Int,
    pub probability_denom_exp: u32,
    pub probability: f64,
    /// Unnormalised target operator for this outcome.
    pub induced_unitary: RingUnitary,
    pub matches_expected: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProtocolReport {
    pub success: BranchReport,
    pub failure: BranchReport,
    pub achieved_distance: Option<f64>,
    pub epsilon: Option<f64>,
    pub design_tcount: usize,
    pub design_tdepth: usize,
    pub passed: bool,
}

/// B_k[i][j] = ⟨i, k| U |j, 0⟩ with the ancilla as qubit 1.
fn branch_operator(u: &RingUnitary, k: usize) -> RingUnitary {
    let e = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| u.get(2 * i + k, 2 * j).clone()).collect();
    RingUnitary::new(2, e, u.denom_exp()).expect("2x2")
}

/// Σ_i |B[i][0]|² over 2^L: the branch probability, independent of the input.
fn branch_probability(b: &RingUnitary) -> Root2Int {
    &b.get(0, 0).abs_squared() + &b.get(1, 0).abs_squared()
}

fn is_scalar(m: &RingUnitary) -> bool {
    m.get(0, 1).is_zero() && m.get(1, 0).is_zero() && m.get(0, 0) == m.get(1, 1) && !m.get(0, 0).is_zero()
}

fn normalised(b: &RingUnitary) -> C2 {
    let c = b.to_complex();
    let n = (c[0].norm_sqr() + c[2].norm_sqr()).sqrt();
    [c[0] / n, c[1] / n, c[2] / n, c[3] / n]
}

/// d(diag(z, z*)/|z|, R_z(θ)) from e = |z*/z − e^{iθ}| evaluated in fixed point, so
/// precisions far below double rounding are still resolved.
pub fn phase_distance(z: &CyclotomicInt, theta: &Angle) -> f64 {
    let bits = 256 + 8 * z.max_coeff().bits() as u32;
    let e = crate::relation::phase_error(z, theta, bits);
    // 1 − |cos u| with |sin u| = e/2, written without cancellation
    (e / 2.0) / (1.0 + (1.0 - e * e / 4.0).max(0.0).sqrt()).sqrt()
}

/// d(success branch, R_z(θ)); exact-input path for diag(z, z*), float otherwise.
fn branch_distance(b: &RingUnitary, theta: &Angle) -> Result<f64, Error> {
    let z = b.get(0, 0);
    if b.is_diagonal() && *b.get(1, 1) == z.conj() && !z.is_zero() {
        Ok(phase_distance(z, theta))
    } else {
        distance(&normalised(b), &rz(theta.to_f64()))
    }
}

/// d(claimed success operator, R_z(θ)).
pub fn success_distance(p: &RusProtocol, theta: &Angle) -> Result<f64, Error> {
    branch_distance(&p.success_operator, theta)
}

/// Rescale `x / 2^from` to denominator 2^to (to ≥ from).
fn lift_pow2(x: &Root2Int, from: u32, to: u32) -> Root2Int {
    x.scale(&(num_bigint::BigInt::from(1) << (to - from)))
}

/// Simulate the design exactly and compare both branches with the protocol's claims.
/// With a target angle the success branch must also lie within ε of R_z(θ).
pub fn validate_protocol(p: &RusProtocol, target: Option<(&Angle, f64)>) -> Result<ProtocolReport, Error> {
    let u = circuit_unitary(&p.design)?;
    let l = u.denom_exp();
    let (b0, b1) = (branch_operator(&u, 0), branch_operator(&u, 1));
    let (n0, n1) = (branch_probability(&b0), branch_probability(&b1));
    let mut problems = Vec::new();

    // success: B₀ = ω^m · claimed operator
    let ok0 = b0.phase_relative_to(&p.success_operator).is_some();
    if !ok0 {
        problems.push(format!("success branch {b0} is not a phase times {}", p.success_operator));
    }
    // p agrees exactly with the claim
    let lp = l.max(p.p_denom_exp);
    let (sim, claim) = (lift_pow2(&n0, l, lp), lift_pow2(&p.p_numerator, p.p_denom_exp, lp));
    if sim != claim {
        problems.push(format!("success probability {sim}/2^{lp} but protocol claims {claim}/2^{lp}"));
    }
    if (&n0 + &n1).cmp_pow2(l) != std::cmp::Ordering::Equal {
        problems.push("branch probabilities do not sum to one".into());
    }
    // failure: B₁ ∝ F, checked as B₁·F† scalar
    let f = p.failure_correction.matrix();
    let ok1 = n1.is_zero() || is_scalar(&b1.dot(&f.adjoint()));
    if !ok1 {
        problems.push(format!("failure branch {b1} is not proportional to {}", p.failure_correction));
    }
    let (achieved, eps) = match target {
        Some((theta, eps)) => {
            let d = branch_distance(&b0, theta)?;
            if d > eps {
                problems.push(format!("success branch is {d:.3e} from R_z({theta}), above {eps:.3e}"));
            }
            (Some(d), Some(eps))
        }
        None => (None, None),
    };
    if !problems.is_empty() {
        return Err(Error::ProtocolMismatch(problems.join("; ")));
    }
    let report = |outcome, n: Root2Int, b: RingUnitary, ok| BranchReport {
        outcome,
        probability: crate::pipeline::probability_f64(&n, l),
        probability_numerator: n,
        probability_denom_exp: l,
        induced_unitary: b,
        matches_expected: ok,
    };
    Ok(ProtocolReport {
        success: report(0, n0, b0, ok0),
        failure: report(1, n1, b1, ok1),
        achieved_distance: achieved,
        epsilon: eps,
        design_tcount: p.design.t_count(),
        design_tdepth: p.design.t_depth(),
        passed: true,
    })
}
