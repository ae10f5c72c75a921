//! Batch synthesis over many angles and precisions, with regression summaries.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use rusforge::pipeline::SearchParams;
use rusforge::relation::Angle;
use rusforge::rus2q::{synthesize_rz, VariantChoice};
use rusforge::verify::validate_protocol;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// uniform angles in (0, 2π)
    Random,
    /// π/2^k for k = 2, 3, …
    Fourier,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "random" => Ok(Mode::Random),
            "fourier" => Ok(Mode::Fourier),
            _ => Err(format!("mode must be random or fourier, not {s:?}")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub mode: Mode,
    pub count: usize,
    pub epsilons: Vec<f64>,
    pub params: SearchParams,
    pub variant: VariantChoice,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BenchRecord {
    pub theta: String,
    pub theta_value: f64,
    pub epsilon: f64,
    pub achieved_distance: f64,
    pub design_tcount: usize,
    pub success_prob: f64,
    pub expected_tcount: f64,
    pub pslq_iterations: u32,
    pub norm_equations_solved: usize,
    pub wall_time_ms: u64,
    pub validated: bool,
    pub error: String,
}

impl BenchRecord {
    pub fn ok(&self) -> bool {
        self.validated && self.error.is_empty()
    }
}

pub fn bench_angles(mode: Mode, count: usize, seed: u64) -> Vec<Angle> {
    match mode {
        Mode::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|_| Angle::radians(rng.gen_range(1e-3..std::f64::consts::TAU))).collect()
        }
        Mode::Fourier => (2..count as i64 + 2).map(|k| Angle::pi_multiple(1, 1i64 << k.min(62))).collect(),
    }
}

fn row_seed(seed: u64, i: usize) -> u64 {
    seed ^ (i as u64 + 1).wrapping_mul(0xD1B5_4A32_D192_ED03)
}

fn run_one(theta: &Angle, epsilon: f64, params: &SearchParams, variant: VariantChoice) -> BenchRecord {
    let t0 = Instant::now();
    let mut rec = BenchRecord {
        theta: theta.to_string(),
        theta_value: theta.to_f64(),
        epsilon,
        achieved_distance: f64::NAN,
        design_tcount: 0,
        success_prob: f64::NAN,
        expected_tcount: f64::NAN,
        pslq_iterations: 0,
        norm_equations_solved: 0,
        wall_time_ms: 0,
        validated: false,
        error: String::new(),
    };
    match synthesize_rz(theta, epsilon, params, variant, false) {
        Ok(s) => {
            let p = &s.protocol;
            rec.achieved_distance = s.achieved_distance;
            rec.design_tcount = p.design_tcount;
            rec.success_prob = p.p;
            rec.expected_tcount = p.expected_tcount;
            if let Some(d) = &s.design {
                rec.pslq_iterations = d.pslq_iterations;
                rec.norm_equations_solved = d.norm_equations_solved;
            }
            match validate_protocol(p, Some((theta, epsilon))) {
                Ok(_) => rec.validated = true,
                Err(e) => rec.error = e.to_string(),
            }
        }
        Err(e) => rec.error = e.to_string(),
    }
    rec.wall_time_ms = t0.elapsed().as_millis() as u64;
    rec
}

/// All (angle, ε) rows, computed in parallel and sorted by (θ, ε).
pub fn run_bench(cfg: &BenchConfig) -> Vec<BenchRecord> {
    let angles = bench_angles(cfg.mode, cfg.count, cfg.params.seed);
    let jobs: Vec<(usize, &Angle, f64)> =
        angles.iter().enumerate().flat_map(|(i, a)| cfg.epsilons.iter().enumerate().map(move |(j, &e)| (i * 64 + j, a, e))).collect();
    let mut rows: Vec<BenchRecord> = jobs
        .par_iter()
        .map(|&(i, a, e)| {
            let params = SearchParams { seed: row_seed(cfg.params.seed, i), ..cfg.params.clone() };
            run_one(a, e, &params, cfg.variant)
        })
        .collect();
    rows.sort_by(|a, b| a.theta_value.total_cmp(&b.theta_value).then(b.epsilon.total_cmp(&a.epsilon)));
    rows
}

pub fn write_csv<W: Write>(rows: &[BenchRecord], w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

/// Least-squares line y = slope·x + intercept.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<Fit> {
    let n = xs.len() as f64;
    if xs.len() < 2 || xs.len() != ys.len() {
        return None;
    }
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Some(Fit { slope, intercept: my - slope * mx })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EpsilonSummary {
    pub epsilon: f64,
    pub rows: usize,
    pub failures: usize,
    pub mean_expected_tcount: f64,
    pub mean_design_tcount: f64,
    pub mean_success_prob: f64,
    pub mean_pslq_iterations: f64,
    /// ancilla-free lower-bound line 3·log2(1/ε)
    pub reference: f64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BenchSummary {
    pub per_epsilon: Vec<EpsilonSummary>,
    /// mean expected T-count against log10(1/ε)
    pub expected_fit: Option<Fit>,
    /// PSLQ iterations against log10(1/ε), over all successful rows
    pub pslq_fit: Option<Fit>,
}

fn mean(v: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = v.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        f64::NAN
    } else {
        s / n as f64
    }
}

pub fn summarize(rows: &[BenchRecord]) -> BenchSummary {
    let mut eps: Vec<f64> = rows.iter().map(|r| r.epsilon).collect();
    eps.sort_by(|a, b| b.total_cmp(a));
    eps.dedup();
    let per_epsilon: Vec<EpsilonSummary> = eps
        .iter()
        .map(|&e| {
            let all: Vec<&BenchRecord> = rows.iter().filter(|r| r.epsilon == e).collect();
            let ok: Vec<&BenchRecord> = all.iter().copied().filter(|r| r.ok()).collect();
            EpsilonSummary {
                epsilon: e,
                rows: all.len(),
                failures: all.len() - ok.len(),
                mean_expected_tcount: mean(ok.iter().map(|r| r.expected_tcount)),
                mean_design_tcount: mean(ok.iter().map(|r| r.design_tcount as f64)),
                mean_success_prob: mean(ok.iter().map(|r| r.success_prob)),
                mean_pslq_iterations: mean(ok.iter().map(|r| r.pslq_iterations as f64)),
                reference: 3.0 * (1.0 / e).log2(),
            }
        })
        .collect();
    let good: Vec<&EpsilonSummary> = per_epsilon.iter().filter(|s| s.mean_expected_tcount.is_finite()).collect();
    let xs: Vec<f64> = good.iter().map(|s| (1.0 / s.epsilon).log10()).collect();
    let ys: Vec<f64> = good.iter().map(|s| s.mean_expected_tcount).collect();
    let pslq_rows: Vec<&BenchRecord> = rows.iter().filter(|r| r.ok() && r.pslq_iterations > 0).collect();
    let px: Vec<f64> = pslq_rows.iter().map(|r| (1.0 / r.epsilon).log10()).collect();
    let py: Vec<f64> = pslq_rows.iter().map(|r| r.pslq_iterations as f64).collect();
    BenchSummary { per_epsilon, expected_fit: fit_line(&xs, &ys), pslq_fit: fit_line(&px, &py) }
}

impl std::fmt::Display for BenchSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{:>8} {:>5} {:>5} {:>10} {:>10} {:>8} {:>8} {:>10}", "epsilon", "rows", "fail", "E[T]", "design T", "p", "pslq", "3log2(1/e)")?;
        for s in &self.per_epsilon {
            writeln!(
                f,
                "{:>8.0e} {:>5} {:>5} {:>10.2} {:>10.2} {:>8.4} {:>8.1} {:>10.2}",
                s.epsilon, s.rows, s.failures, s.mean_expected_tcount, s.mean_design_tcount, s.mean_success_prob, s.mean_pslq_iterations, s.reference
            )?;
        }
        if let Some(fit) = self.expected_fit {
            writeln!(f, "mean expected T-count ~ {:.3}·log10(1/ε) + {:.2}", fit.slope, fit.intercept)?;
        }
        if let Some(fit) = self.pslq_fit {
            writeln!(f, "PSLQ iterations ~ {:.3}·log10(1/ε) + {:.2}", fit.slope, fit.intercept)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_fit_is_exact_on_a_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.5 * x - 2.0).collect();
        let f = fit_line(&xs, &ys).unwrap();
        assert!((f.slope - 3.5).abs() < 1e-12 && (f.intercept + 2.0).abs() < 1e-12);
        assert!(fit_line(&[1.0], &[2.0]).is_none());
    }

    #[test]
    fn fourier_angles() {
        let a = bench_angles(Mode::Fourier, 3, 0);
        assert_eq!(a, vec![Angle::pi_multiple(1, 4), Angle::pi_multiple(1, 8), Angle::pi_multiple(1, 16)]);
        assert_eq!(bench_angles(Mode::Random, 5, 9), bench_angles(Mode::Random, 5, 9));
    }

    #[test]
    fn small_bench_is_valid_and_sorted() {
        let cfg = BenchConfig {
            mode: Mode::Fourier,
            count: 3,
            epsilons: vec![1e-3, 1e-4],
            params: SearchParams { seed: 5, ..SearchParams::default() },
            variant: VariantChoice::Auto,
        };
        let rows = run_bench(&cfg);
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().all(|r| r.ok() && r.achieved_distance <= r.epsilon), "{rows:?}");
        assert!(rows.windows(2).all(|w| w[0].theta_value <= w[1].theta_value));
        // θ = π/4 is exact
        let q = rows.iter().find(|r| r.theta == "pi/4").unwrap();
        assert!(q.design_tcount <= 1 && q.success_prob == 1.0);
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("theta,thetaValue,epsilon,achievedDistance,designTcount"));
        assert_eq!(text.lines().count(), 7);
    }
}
