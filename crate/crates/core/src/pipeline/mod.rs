//! Randomized normalization of a phase approximation z into a unitary
//! `[[rz, y], [−y*, (rz)*]] / √2^L`, and the outer precision-halving loop.

mod axial;

pub use axial::{compose_zxz, decompose_zxz, ZxzAngles};

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::normeq::{limited_factor, solve_norm_equation, VerdictReason, DEFAULT_BUDGET};
use crate::relation::{approximate_phase, Angle, PhaseApprox, PhaseTarget};
use crate::ring::{CyclotomicInt, RingUnitary, Root2Int};
use crate::synth1q::tcount_of;

/// Which randomized normalization to run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Normalization {
    /// Sample `sz·δ·L₁²` values of r, keep the best score.
    SizeFactor,
    /// Exhaust S_δ, keep the best score among p > p_min.
    MinProbability(f64),
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchParams {
    pub delta: f64,
    pub sz: f64,
    pub normalization: Normalization,
    pub seed: u64,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams { delta: 0.25, sz: 4.0, normalization: Normalization::SizeFactor, seed: 0 }
    }
}

impl SearchParams {
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(Error::InvalidArgument(format!("delta {} must lie in (0, 1]", self.delta)));
        }
        if !(self.sz > 0.0) {
            return Err(Error::InvalidArgument(format!("sz {} must be positive", self.sz)));
        }
        if let Normalization::MinProbability(p) = self.normalization {
            if !(0.5..1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!("pmin {p} must lie in [0.5, 1)")));
            }
        }
        Ok(())
    }
}

/// A solved normalization: |rz|² + |y|² = 2^{L_r}.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Candidate {
    pub r: Root2Int,
    pub rz: CyclotomicInt,
    pub y: CyclotomicInt,
    pub lr: u32,
    /// |rz|² as an exact numerator over 2^{L_r}
    pub p_numerator: Root2Int,
    pub p: f64,
    pub tcount: u32,
    pub tc: f64,
}

impl Candidate {
    pub fn matrix(&self) -> RingUnitary {
        RingUnitary::from_zy(&self.rz, &self.y, self.lr)
    }

    fn key_cmp(&self, o: &Candidate) -> Ordering {
        self.tc
            .total_cmp(&o.tc)
            .then(self.lr.cmp(&o.lr))
            .then(self.r.cmp(&o.r))
            .then(self.r.a.cmp(&o.r.a))
            .then(self.r.b.cmp(&o.r.b))
    }
}

/// One evaluated sample, kept for the search trace.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SampleTrace {
    pub r: Root2Int,
    pub lr: u32,
    pub xi: Root2Int,
    pub verdict: Option<VerdictReason>,
    pub solvable: bool,
    pub p: f64,
    pub tcount: Option<u32>,
    pub tc: Option<f64>,
}

#[derive(Clone, Debug, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NormalizationOutcome {
    pub best: Option<Candidate>,
    pub l1: u32,
    pub domain_size: usize,
    pub tried: usize,
    pub solved: usize,
    pub samples: Vec<SampleTrace>,
}

/// ⌈log₂ x⌉ for a positive x ∈ ℤ[√2].
fn ceil_log2(x: &Root2Int) -> u32 {
    x.ceil_log2()
}

/// S_δ = {a + b√2 : |a ± b√2| < 2^{δL₁/2}}, one representative of each ±r (r > 0).
pub fn sample_domain(l1: u32, delta: f64) -> Vec<Root2Int> {
    let bound = 2f64.powf(delta * l1 as f64 / 2.0);
    let s2 = std::f64::consts::SQRT_2;
    let bmax = (bound / s2).ceil() as i64;
    let mut out = Vec::new();
    for b in -bmax..=bmax {
        let rest = bound - (b.abs() as f64) * s2;
        if rest <= 0.0 {
            continue;
        }
        let amax = rest.ceil() as i64;
        for a in -amax..=amax {
            let (lo, hi) = (a as f64 - b as f64 * s2, a as f64 + b as f64 * s2);
            if lo.abs() < bound && hi.abs() < bound {
                let r = Root2Int::new(a, b);
                if r.is_positive() {
                    out.push(r);
                }
            }
        }
    }
    out.sort();
    out
}

fn sub_seed(seed: u64, i: u64) -> u64 {
    seed ^ i.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Evaluate one r: solve |y|² = 2^{L_r} − |rz|² when easily solvable.
pub fn evaluate(z: &CyclotomicInt, r: &Root2Int, seed: u64) -> (Option<Candidate>, SampleTrace) {
    let rz = z * &CyclotomicInt::from_root2(r);
    let n = rz.abs_squared();
    let lr = ceil_log2(&n);
    let two_l = Root2Int::from_int(BigInt::from(1) << lr);
    let xi = &two_l - &n;
    let p = n.to_f64() / 2f64.powi(lr as i32);
    let mut trace = SampleTrace { r: r.clone(), lr, xi: xi.clone(), verdict: None, solvable: false, p, tcount: None, tc: None };
    // cheap necessary condition: both embeddings of ξ nonnegative
    if xi.signum() < 0 || xi.conj().signum() < 0 {
        trace.verdict = Some(VerdictReason::NegativeUnderEmbedding);
        return (None, trace);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fact = limited_factor(&xi, DEFAULT_BUDGET, &mut rng);
    trace.verdict = Some(fact.verdict.reason);
    if !fact.verdict.easily_solvable {
        return (None, trace);
    }
    let y = match solve_norm_equation(&xi, &fact) {
        Ok(y) => y,
        Err(_) => return (None, trace),
    };
    debug_assert_eq!(y.abs_squared(), xi);
    let v = RingUnitary::from_zy(&rz, &y, lr);
    let tcount = tcount_of(&v);
    let tc = tcount as f64 / p;
    trace.solvable = true;
    trace.tcount = Some(tcount);
    trace.tc = Some(tc);
    (Some(Candidate { r: r.clone(), rz, y, lr, p_numerator: n, p, tcount, tc }), trace)
}

/// Randomized normalization (either variant, per `params.normalization`).
pub fn rand_normalization(z: &CyclotomicInt, params: &SearchParams) -> NormalizationOutcome {
    assert!(!z.is_zero(), "z must be nonzero");
    let n = z.abs_squared();
    let l1 = ceil_log2(&n);
    // |z|² a power of two: r = 1 already gives p = 1
    if n == Root2Int::from_int(BigInt::from(1) << l1) {
        let (c, t) = evaluate(z, &Root2Int::one(), params.seed);
        return NormalizationOutcome { best: c, l1, domain_size: 1, tried: 1, solved: 1, samples: vec![t] };
    }
    let mut domain = sample_domain(l1, params.delta);
    if domain.is_empty() {
        domain.push(Root2Int::one());
    }
    let domain_size = domain.len();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    domain.shuffle(&mut rng);
    let (count, p_min) = match params.normalization {
        Normalization::SizeFactor => {
            let limit = params.sz * params.delta * (l1 as f64).powi(2);
            ((limit.floor() as usize).saturating_add(1), None)
        }
        Normalization::MinProbability(pm) => (domain_size, Some(pm)),
    };
    let chosen = &domain[..count.min(domain_size)];
    let results: Vec<(Option<Candidate>, SampleTrace)> =
        chosen.par_iter().enumerate().map(|(i, r)| evaluate(z, r, sub_seed(params.seed, i as u64))).collect();
    let solved = results.iter().filter(|(c, _)| c.is_some()).count();
    let best = results
        .iter()
        .filter_map(|(c, _)| c.as_ref())
        .filter(|c| p_min.map_or(true, |pm| c.p > pm))
        .min_by(|a, b| a.key_cmp(b))
        .cloned();
    NormalizationOutcome { best, l1, domain_size, tried: chosen.len(), solved, samples: results.into_iter().map(|(_, t)| t).collect() }
}

pub fn rand_normalization1(z: &CyclotomicInt, sz: f64, delta: f64, seed: u64) -> Option<Candidate> {
    let p = SearchParams { delta, sz, normalization: Normalization::SizeFactor, seed };
    rand_normalization(z, &p).best
}

pub fn rand_normalization2(z: &CyclotomicInt, p_min: f64, delta: f64, seed: u64) -> Option<Candidate> {
    let p = SearchParams { delta, sz: 1.0, normalization: Normalization::MinProbability(p_min), seed };
    rand_normalization(z, &p).best
}

/// One round of the design loop, for the trace.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RoundTrace {
    pub epsilon: f64,
    pub sz: f64,
    pub delta: f64,
    pub z: CyclotomicInt,
    pub pslq_iterations: u32,
    pub l1: u32,
    pub domain_size: usize,
    pub tried: usize,
    pub solved: usize,
    pub chosen: Option<Candidate>,
    pub samples: Vec<SampleTrace>,
}

/// Output of the design loop: V and how it was found.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Design {
    pub theta: String,
    pub epsilon: f64,
    pub approx: PhaseApprox,
    pub candidate: Candidate,
    /// V in reduced form
    pub v: RingUnitary,
    pub rounds: u32,
    pub pslq_iterations: u32,
    pub norm_equations_tried: usize,
    pub norm_equations_solved: usize,
    pub trace: Vec<RoundTrace>,
}

impl Design {
    /// Top-left entry of the reduced V.
    pub fn z(&self) -> &CyclotomicInt {
        self.v.get(0, 0)
    }
}

pub const MAX_HALVINGS: u32 = 16;
const SZ_ESCALATION: f64 = 4.0;
/// The escalated pass widens δ until S_δ holds about 2^WIDE_DOMAIN_BITS elements.
const WIDE_DOMAIN_BITS: f64 = 12.0;

/// Halve ε until the normalization succeeds. If it never does, run a second pass with a larger
/// sz and, for small z, a wider δ: PSLQ can return the same short z over many halvings and a
/// small S_δ may hold no solvable r at all.
pub fn single_qubit_design(theta: &Angle, epsilon: f64, params: &SearchParams, keep_samples: bool) -> Result<Design, Error> {
    params.validate()?;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!("epsilon {epsilon} must lie in (0, 1)")));
    }
    let mut trace = Vec::new();
    let mut pslq_total = 0;
    let (mut tried, mut solved) = (0, 0);
    let mut rounds = 0;
    for attempt in 0..2 {
        let sz = if attempt == 0 { params.sz } else { params.sz * SZ_ESCALATION };
        let mut eps = 2.0 * epsilon;
        let mut last_z: Option<CyclotomicInt> = None;
        for k in 0..MAX_HALVINGS {
            eps /= 2.0;
            rounds += 1;
            let approx = approximate_phase(&PhaseTarget { theta: theta.clone(), epsilon: eps })?;
            pslq_total += approx.iterations;
            if last_z.as_ref() == Some(&approx.z) && params.normalization != Normalization::SizeFactor {
                continue;
            }
            last_z = Some(approx.z.clone());
            let delta = if attempt == 0 {
                params.delta
            } else {
                let l1 = ceil_log2(&approx.z.abs_squared()).max(1) as f64;
                params.delta.max((WIDE_DOMAIN_BITS / l1).min(1.0))
            };
            let round_params = SearchParams { sz, delta, seed: sub_seed(params.seed, (attempt * 64 + k) as u64), ..params.clone() };
            let out = rand_normalization(&approx.z, &round_params);
            tried += out.tried;
            solved += out.solved;
            trace.push(RoundTrace {
                epsilon: eps,
                sz,
                delta,
                z: approx.z.clone(),
                pslq_iterations: approx.iterations,
                l1: out.l1,
                domain_size: out.domain_size,
                tried: out.tried,
                solved: out.solved,
                chosen: out.best.clone(),
                samples: if keep_samples { out.samples } else { vec![] },
            });
            if let Some(c) = out.best {
                let v = c.matrix();
                return Ok(Design {
                    theta: theta.to_string(),
                    epsilon,
                    approx,
                    candidate: c,
                    v,
                    rounds,
                    pslq_iterations: pslq_total,
                    norm_equations_tried: tried,
                    norm_equations_solved: solved,
                    trace,
                });
            }
        }
    }
    Err(Error::IterationCapExceeded { rounds })
}

/// √2-valuation-free size of r under the real embedding, for tie-breaks and reports.
pub fn abs_real(r: &Root2Int) -> f64 {
    r.to_f64().abs()
}

/// p as an exact pair (numerator, exponent) of the reduced V: |z|²/2^L.
pub fn success_probability(v: &RingUnitary) -> (Root2Int, u32) {
    (v.get(0, 0).abs_squared(), v.denom_exp())
}

/// |z|² / 2^L as a float, stable for large L.
pub fn probability_f64(num: &Root2Int, l: u32) -> f64 {
    let bits = num.a.bits().max(num.b.bits()) as i64;
    let shift = (bits - 60).max(0) as u32;
    let a = (&num.a >> shift).to_f64().unwrap_or(0.0);
    let b = (&num.b >> shift).to_f64().unwrap_or(0.0);
    (a + b * std::f64::consts::SQRT_2) * 2f64.powi(shift as i32 - l as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z_example() -> CyclotomicInt {
        CyclotomicInt::new(1167, -218, -798, -359)
    }

    #[test]
    fn domain_bounds_and_size() {
        for l1 in [8u32, 16, 24] {
            let d = sample_domain(l1, 0.25);
            let bound = 2f64.powf(0.25 * l1 as f64 / 2.0);
            for r in &d {
                assert!(r.to_f64().abs() < bound && r.conj().to_f64().abs() < bound);
                assert!(r.is_positive());
            }
            // card ≈ 2^{1/2 + δL₁}, halved by the ± identification
            let approx = 2f64.powf(0.5 + 0.25 * l1 as f64) / 2.0;
            assert!((d.len() as f64) > 0.5 * approx && (d.len() as f64) < 2.0 * approx + 4.0, "{} vs {approx}", d.len());
        }
    }

    #[test]
    fn unit_z_short_circuits() {
        let c = rand_normalization1(&CyclotomicInt::one(), 4.0, 0.25, 1).unwrap();
        assert_eq!(c.r, Root2Int::one());
        assert!(c.y.is_zero());
        assert_eq!((c.lr, c.p), (0, 1.0));
    }

    #[test]
    fn candidates_satisfy_the_ring_identity() {
        let params = SearchParams { seed: 3, ..Default::default() };
        let out = rand_normalization(&z_example(), &params);
        let best = out.best.expect("worked-example z normalises");
        for c in [&best] {
            let lhs = &c.rz.abs_squared() + &c.y.abs_squared();
            assert_eq!(lhs, Root2Int::from_int(BigInt::from(1) << c.lr));
            assert!(c.p > 0.5 && c.p <= 1.0);
            assert!(c.matrix().is_unitary());
        }
        assert!(best.p >= 0.95, "p = {}", best.p);
        assert!(best.lr <= 28);
    }

    #[test]
    fn exhaustive_matches_brute_force_on_small_z() {
        let z = CyclotomicInt::new(2, -1, 1, 2);
        let params = SearchParams { delta: 1.0, sz: 1e6, seed: 5, ..Default::default() };
        let got = rand_normalization(&z, &params).best;
        let l1 = z.abs_squared().ceil_log2();
        let brute = sample_domain(l1, 1.0).iter().filter_map(|r| evaluate(&z, r, 0).0).min_by(|a, b| a.key_cmp(b));
        assert_eq!(got.map(|c| c.r), brute.map(|c| c.r));
    }

    #[test]
    fn min_probability_variant() {
        let z = z_example();
        let c = rand_normalization2(&z, 0.98, 0.25, 3).expect("a p > 0.98 candidate");
        assert!(c.p > 0.98);
        // a stricter filter can only lose candidates
        let strict = rand_normalization2(&z, 0.999_999, 0.25, 3);
        if let Some(s) = strict {
            assert!(s.p > 0.999_999);
        }
        let loose = rand_normalization2(&z, 0.5, 0.25, 3).unwrap();
        assert!(loose.tc <= c.tc);
    }

    #[test]
    fn larger_sz_never_worsens_the_score() {
        let z = z_example();
        let mut prev = f64::INFINITY;
        for sz in [0.05, 0.2, 1.0, 4.0] {
            let tc = rand_normalization1(&z, sz, 0.25, 9).map_or(f64::INFINITY, |c| c.tc);
            assert!(tc <= prev);
            prev = tc;
        }
    }

    #[test]
    fn tcount_law_on_designs() {
        for (i, th) in ["0.3137", "pi/64", "1.1", "-2.5"].iter().enumerate() {
            let theta: Angle = th.parse().unwrap();
            let d = single_qubit_design(&theta, 1e-6, &SearchParams { seed: i as u64, ..Default::default() }, false).unwrap();
            let l = d.v.denom_exp();
            let t = tcount_of(&d.v);
            assert!(t == 2 * l || t + 2 == 2 * l, "t = {t}, L = {l}");
            let (num, l2) = success_probability(&d.v);
            assert!((probability_f64(&num, l2) - d.candidate.p).abs() < 1e-12);
        }
    }

    #[test]
    fn escalation_widens_small_domains() {
        // PSLQ keeps a 7- then 14-bit z here; the δ = 1/4 domains hold no solvable r
        let theta = Angle::radians(0.5515845034280721);
        let d = single_qubit_design(&theta, 1e-5, &SearchParams { seed: 76, ..Default::default() }, false).unwrap();
        assert!(d.trace.iter().any(|r| r.delta > 0.25));
        assert!(d.rounds > MAX_HALVINGS);
    }
}
