//! Real PSLQ (Ferguson–Bailey) in fixed point, with a custom stopping rule.

use num_bigint::BigInt;
use num_traits::Zero;

use super::fixed::{div_round, Fx};

const GAMMA: f64 = 1.154_700_538_379_251_5; // 2/√3

pub(crate) enum PslqOutcome {
    Found { column: [BigInt; 4], iterations: u32 },
    Exhausted { iterations: u32 },
}

/// Run PSLQ on `x` (fixed point at `fx.prec`), calling `accept` on every
/// column of the basis matrix after the initial reduction and after each
/// iteration. The first accepted column (lowest index wins ties inside an
/// iteration, via `rank`) ends the search.
pub(crate) fn pslq4<F>(fx: Fx, x: &[BigInt; 4], max_iter: u32, accept: F) -> PslqOutcome
where
    F: Fn(&[BigInt; 4]) -> Option<BigInt>,
{
    let n = 4;
    // partial norms s_k = |x_k..x_n|
    let mut s = vec![BigInt::zero(); n];
    for k in 0..n {
        let acc: BigInt = x[k..].iter().map(|v| fx.mul(v, v)).sum();
        s[k] = fx.sqrt(&acc);
    }
    let s0 = s[0].clone();
    let y: Vec<BigInt> = x.iter().map(|v| fx.div(v, &s0)).collect();
    let s: Vec<BigInt> = s.iter().map(|v| fx.div(v, &s0)).collect();

    let mut h = vec![vec![BigInt::zero(); n - 1]; n];
    for j in 0..n - 1 {
        if s[j].is_zero() {
            return PslqOutcome::Exhausted { iterations: 0 };
        }
        h[j][j] = fx.div(&s[j + 1], &s[j]);
        let denom = fx.mul(&s[j], &s[j + 1]);
        for i in j + 1..n {
            if denom.is_zero() {
                h[i][j] = BigInt::zero();
            } else {
                h[i][j] = -fx.div(&fx.mul(&y[i], &y[j]), &denom);
            }
        }
    }
    let mut b: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i32)).collect())
        .collect();

    reduce(&mut h, &mut b, n);
    if let Some(col) = best_column(&b, n, &accept) {
        return PslqOutcome::Found { column: col, iterations: 0 };
    }

    let limit_bits = (fx.prec / 3) as u64;
    for iter in 1..=max_iter {
        // pick the row maximising γ^i |H_ii|
        let mut m = 0;
        let mut best = f64::NEG_INFINITY;
        for i in 0..n - 1 {
            let v = fx.to_f64(&h[i][i]).abs().ln() + (i as f64 + 1.0) * GAMMA.ln();
            if v > best {
                best = v;
                m = i;
            }
        }
        h.swap(m, m + 1);
        for row in b.iter_mut() {
            row.swap(m, m + 1);
        }
        if m < n - 2 {
            let a0 = h[m][m].clone();
            let a1 = h[m][m + 1].clone();
            let t0 = fx.sqrt(&(fx.mul(&a0, &a0) + fx.mul(&a1, &a1)));
            if t0.is_zero() {
                return PslqOutcome::Exhausted { iterations: iter };
            }
            let t1 = fx.div(&a0, &t0);
            let t2 = fx.div(&a1, &t0);
            for row in h.iter_mut().skip(m) {
                let t3 = row[m].clone();
                let t4 = row[m + 1].clone();
                row[m] = fx.mul(&t1, &t3) + fx.mul(&t2, &t4);
                row[m + 1] = fx.mul(&t1, &t4) - fx.mul(&t2, &t3);
            }
        }
        reduce(&mut h, &mut b, n);
        if let Some(col) = best_column(&b, n, &accept) {
            return PslqOutcome::Found { column: col, iterations: iter };
        }
        let big = b.iter().flatten().map(|v| v.bits()).max().unwrap_or(0);
        let degenerate = (0..n - 1).any(|i| h[i][i].is_zero());
        if big > limit_bits || degenerate {
            return PslqOutcome::Exhausted { iterations: iter };
        }
    }
    PslqOutcome::Exhausted { iterations: max_iter }
}

/// Hermite reduction of H, applying the same integer moves to the columns of B.
fn reduce(h: &mut [Vec<BigInt>], b: &mut [Vec<BigInt>], n: usize) {
    for i in 1..n {
        for j in (0..i.min(n - 1)).rev() {
            if h[j][j].is_zero() {
                continue;
            }
            let t = div_round(&h[i][j], &h[j][j]);
            if t.is_zero() {
                continue;
            }
            for k in 0..=j {
                let d = &t * &h[j][k];
                h[i][k] -= d;
            }
            for row in b.iter_mut() {
                let d = &t * &row[i];
                row[j] += d;
            }
        }
    }
}

/// Among accepted columns pick the one with the smallest rank key.
fn best_column<F>(b: &[Vec<BigInt>], n: usize, accept: &F) -> Option<[BigInt; 4]>
where
    F: Fn(&[BigInt; 4]) -> Option<BigInt>,
{
    let mut best: Option<(BigInt, [BigInt; 4])> = None;
    for j in 0..n {
        let col = [b[0][j].clone(), b[1][j].clone(), b[2][j].clone(), b[3][j].clone()];
        if let Some(rank) = accept(&col) {
            if best.as_ref().map_or(true, |(r, _)| rank < *r) {
                best = Some((rank, col));
            }
        }
    }
    best.map(|(_, c)| c)
}
