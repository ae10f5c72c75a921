//! Cyclotomic approximation of a phase: find z ∈ ℤ[ω] with z*/z ≈ e^{iθ}.
//!
//! With z = aω³ + bω² + cω + d and x = (cos−sin, √2·cos, cos+sin, √2·sin)
//! evaluated at θ/2, one has |z*/z − e^{iθ}| = √2·|⟨(a,b,c,d), x⟩| / |z|,
//! so a small integer relation for x is a good z.

mod angle;
pub(crate) mod fixed;
mod pslq;

pub use angle::Angle;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::Error;
use crate::ring::CyclotomicInt;
use fixed::Fx;
use pslq::{pslq4, PslqOutcome};

/// Target phase e^{iθ} and tolerance on |z*/z − e^{iθ}|.
#[derive(Clone, Debug)]
pub struct PhaseTarget {
    pub theta: Angle,
    pub epsilon: f64,
}

/// Output of the relation search.
#[derive(Clone, Debug, Serialize)]
pub struct PhaseApprox {
    pub z: CyclotomicInt,
    pub iterations: u32,
    pub precision_bits: u32,
    /// |z*/z − e^{iθ}| evaluated at working precision.
    pub phase_error: f64,
}

const MAX_RETRIES: u32 = 3;

/// Working precision used for the first attempt.
pub fn initial_precision(epsilon: f64) -> u32 {
    64 + 4 * (1.0 / epsilon).log2().ceil().max(1.0) as u32
}

/// The relation vector at θ/2 in fixed point.
pub(crate) fn relation_vector(theta: &Angle, fx: Fx) -> [BigInt; 4] {
    let g = Fx { prec: fx.prec + 16 };
    let half = theta.half().to_fixed(g);
    let (c, s) = g.cos_sin(&half);
    let r2 = g.sqrt(&g.from_int(&BigInt::from(2)));
    let v = [&c - &s, g.mul(&r2, &c), &c + &s, g.mul(&r2, &s)];
    v.map(|t| fixed::round_shift(&t, 16))
}

/// Exact-unit answer for θ = kπ/4.
fn degenerate(k: i64) -> CyclotomicInt {
    if k.rem_euclid(2) == 0 {
        CyclotomicInt::omega_pow(-k / 2)
    } else {
        // no unit has z*/z = ω^k for odd k; ω^j(1+ω) does
        let j = (-1 - k).div_euclid(2);
        &CyclotomicInt::omega_pow(j) * &(CyclotomicInt::one() + CyclotomicInt::omega())
    }
}

/// Stage 1: find z with |z*/z − e^{iθ}| < ε.
pub fn approximate_phase(target: &PhaseTarget) -> Result<PhaseApprox, Error> {
    let eps = target.epsilon;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("epsilon {eps} must lie in (0, 1)")));
    }
    if let Some(k) = target.theta.quarter_pi_multiple() {
        let z = degenerate(k);
        return Ok(PhaseApprox { z, iterations: 0, precision_bits: 0, phase_error: 0.0 });
    }
    let mut prec = initial_precision(eps);
    // iterations spent on failed precisions count toward the total
    let mut spent = 0;
    for _ in 0..=MAX_RETRIES {
        match attempt(&target.theta, eps, prec)? {
            Ok(mut found) => {
                found.iterations += spent;
                return Ok(found);
            }
            Err(iters) => {
                spent += iters;
                prec *= 2;
            }
        }
    }
    Err(Error::PrecisionExhausted { bits: prec / 2 })
}

fn attempt(theta: &Angle, eps: f64, prec: u32) -> Result<Result<PhaseApprox, u32>, Error> {
    let fx = Fx { prec };
    let x = relation_vector(theta, fx);
    let eps_fx = fx.from_f64(eps);
    let sqrt2 = fx.sqrt(&fx.from_int(&BigInt::from(2)));
    let ulp_bound = BigInt::from(4);
    let accept = |col: &[BigInt; 4]| -> Option<BigInt> {
        let z = CyclotomicInt { a: col[0].clone(), b: col[1].clone(), c: col[2].clone(), d: col[3].clone() };
        if z.is_zero() {
            return None;
        }
        let sum: BigInt = x.iter().zip(col.iter()).map(|(xi, ci)| xi * ci).sum();
        let err: BigInt = col.iter().map(|c| c.abs()).sum::<BigInt>() * &ulp_bound + 1;
        let zabs2 = z.abs_squared();
        let zabs = zabs_fixed(&zabs2, fx);
        let lhs = fx.mul(&sqrt2, &sum.abs()) + err * 2 + 2;
        let rhs = fx.mul(&eps_fx, &zabs);
        if lhs < rhs {
            Some(zabs)
        } else {
            None
        }
    };
    let max_iter = 100 + 40 * (1.0 / eps).log2().ceil() as u32;
    match pslq4(fx, &x, max_iter, accept) {
        PslqOutcome::Found { column, iterations } => {
            let z = CyclotomicInt { a: column[0].clone(), b: column[1].clone(), c: column[2].clone(), d: column[3].clone() };
            let sum: BigInt = x.iter().zip(column.iter()).map(|(xi, ci)| xi * ci).sum();
            let zabs = zabs_fixed(&z.abs_squared(), fx);
            let ratio = fx.div(&fx.mul(&sqrt2, &sum.abs()), &zabs);
            Ok(Ok(PhaseApprox { z, iterations, precision_bits: prec, phase_error: fx.to_f64(&ratio) }))
        }
        PslqOutcome::Exhausted { iterations } => Ok(Err(iterations)),
    }
}

/// |z| in fixed point from the exact |z|² = a + b√2.
fn zabs_fixed(z2: &crate::ring::Root2Int, fx: Fx) -> BigInt {
    let g = Fx { prec: fx.prec + 8 };
    let r2 = g.sqrt(&g.from_int(&BigInt::from(2)));
    let v = g.from_int(&z2.a) + g.mul(&g.from_int(&z2.b), &r2);
    if v.is_negative() || v.is_zero() {
        return BigInt::zero();
    }
    fixed::round_shift(&g.sqrt(&v), 8)
}

/// |z*/z − e^{iθ}| at high precision; used by tests and the trace.
pub fn phase_error(z: &CyclotomicInt, theta: &Angle, prec: u32) -> f64 {
    let fx = Fx { prec };
    let x = relation_vector(theta, fx);
    let col = [z.a.clone(), z.b.clone(), z.c.clone(), z.d.clone()];
    let sum: BigInt = x.iter().zip(col.iter()).map(|(xi, ci)| xi * ci).sum();
    let zabs = zabs_fixed(&z.abs_squared(), fx);
    if zabs.is_zero() {
        return f64::INFINITY;
    }
    let sqrt2 = fx.sqrt(&fx.from_int(&BigInt::from(2)));
    fx.to_f64(&fx.div(&fx.mul(&sqrt2, &sum.abs()), &zabs))
}
