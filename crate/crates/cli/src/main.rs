use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rusforge::normeq;
use rusforge::pipeline::{Normalization, SearchParams};
use rusforge::relation::Angle;
use rusforge::ring::Root2Int;
use rusforge::rus2q::{synthesize_rz, RzSynthesis, VariantChoice};
use rusforge::verify::validate_protocol;
use rusforge_cli::bench::{self, BenchConfig, Mode};
use rusforge_cli::density;

#[derive(Parser)]
#[command(name = "rusforge", version, about = "Repeat-until-success Clifford+T synthesis of z-rotations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compile R_z(θ) to a two-qubit RUS circuit and validate it
    Synth(SynthArgs),
    /// Re-validate a protocol file written by `synth --out`
    Verify(VerifyArgs),
    /// Synthesize many angles and fit expected T-count against log10(1/ε)
    Bench(BenchArgs),
    /// Enumerate one-ancilla RUS points against unitary ones
    Density(DensityArgs),
    /// Factor ξ ∈ ℤ[√2] and solve |y|² = ξ
    NormSolve(NormArgs),
}

#[derive(Args, Clone)]
struct SearchArgs {
    /// RNG seed (falls back to RUS_FORGE_SEED)
    #[arg(long, env = "RUS_FORGE_SEED")]
    seed: Option<u64>,
    /// size factor: sz·δ·L₁² samples per round
    #[arg(long, default_value_t = 4.0)]
    sz: f64,
    /// sampling domain exponent
    #[arg(long, default_value_t = 0.25)]
    delta: f64,
    /// exhaust the domain and keep the best candidate with p above this bound
    #[arg(long)]
    pmin: Option<f64>,
    /// z, s or auto
    #[arg(long, default_value = "auto")]
    variant: VariantChoice,
}

impl SearchArgs {
    fn params(&self, seed: u64) -> SearchParams {
        SearchParams {
            delta: self.delta,
            sz: self.sz,
            normalization: self.pmin.map_or(Normalization::SizeFactor, Normalization::MinProbability),
            seed,
        }
    }
}

#[derive(Args)]
struct SynthArgs {
    /// angle such as pi/64, 3*pi/4 or 0.3137
    #[arg(long, allow_hyphen_values = true)]
    theta: Angle,
    #[arg(long)]
    epsilon: f64,
    #[command(flatten)]
    search: SearchArgs,
    /// also write every sampled candidate to trace.json
    #[arg(long)]
    trace: bool,
    /// output directory for protocol.json, listing.txt and report.json
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// protocol.json from `synth --out`
    input: PathBuf,
    /// override the recorded angle
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<Angle>,
    /// override the recorded precision
    #[arg(long)]
    epsilon: Option<f64>,
    /// write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// random or fourier
    #[arg(long, default_value = "random")]
    mode: Mode,
    /// number of angles
    #[arg(long, default_value_t = 50)]
    count: usize,
    /// comma-separated precisions
    #[arg(long, value_delimiter = ',', default_value = "1e-11,1e-12,1e-13,1e-14,1e-15")]
    epsilon: Vec<f64>,
    #[command(flatten)]
    search: SearchArgs,
    /// CSV path (stdout when absent); the summary goes next to it as .summary.json
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DensityArgs {
    #[arg(long, default_value_t = 3)]
    ell: u32,
    /// JSON path for the point sets
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NormArgs {
    /// e.g. 1270080+211680√2, 1270080+211680*sqrt2 or 1270080,211680
    #[arg(long, allow_hyphen_values = true)]
    xi: Root2Int,
    #[arg(long, env = "RUS_FORGE_SEED", default_value_t = 0)]
    seed: u64,
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn synth(a: SynthArgs) -> Result<bool> {
    let seed = a.search.seed.unwrap_or(0);
    let params = a.search.params(seed);
    let s = synthesize_rz(&a.theta, a.epsilon, &params, a.search.variant, a.trace).context("synthesis")?;
    let p = &s.protocol;
    let verdict = validate_protocol(p, Some((&a.theta, a.epsilon)));
    println!("theta        {}", a.theta);
    println!("epsilon      {:e}", a.epsilon);
    println!("distance     {:.4e}", s.achieved_distance);
    println!("p            {:.6}", p.p);
    println!("design T     {} (T-depth {})", p.design_tcount, p.design.t_depth());
    println!("expected T   {:.3}", p.expected_tcount);
    println!("base T       {}", p.base_tcount);
    println!("correction   {}", if p.failure_correction.circuit().gates().is_empty() { "Id".to_string() } else { p.failure_correction.circuit().to_string() });
    println!("{}", p.design.listing());
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir)?;
        write(&dir.join("protocol.json"), &serde_json::to_string_pretty(&s)?)?;
        write(&dir.join("listing.txt"), &format!("{}\n", p.design.listing()))?;
        if let Ok(r) = &verdict {
            write(&dir.join("report.json"), &serde_json::to_string_pretty(r)?)?;
        }
        if a.trace {
            let trace = s.design.as_ref().map(|d| serde_json::json!({ "approx": d.approx, "rounds": d.trace })).unwrap_or(serde_json::Value::Null);
            write(&dir.join("trace.json"), &serde_json::to_string_pretty(&trace)?)?;
        }
    } else if a.trace {
        if let Some(d) = &s.design {
            println!("{}", serde_json::to_string_pretty(&d.trace)?);
        }
    }
    match verdict {
        Ok(_) => {
            println!("validation   pass");
            Ok(true)
        }
        Err(e) => {
            eprintln!("validation   FAIL: {e}");
            Ok(false)
        }
    }
}

fn verify(a: VerifyArgs) -> Result<bool> {
    let text = fs::read_to_string(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let v: serde_json::Value = serde_json::from_str(&text)?;
    let s = RzSynthesis::from_json(&v)?;
    let theta = match a.theta {
        Some(t) => t,
        None => s.theta.parse().context("recorded theta")?,
    };
    let eps = a.epsilon.unwrap_or(s.epsilon);
    match validate_protocol(&s.protocol, Some((&theta, eps))) {
        Ok(r) => {
            let json = serde_json::to_string_pretty(&r)?;
            match &a.out {
                Some(p) => write(p, &json)?,
                None => println!("{json}"),
            }
            eprintln!("pass: distance {:.4e} ≤ {eps:e}, p = {:.6}", r.achieved_distance.unwrap_or(f64::NAN), r.success.probability);
            Ok(true)
        }
        Err(e) => {
            eprintln!("FAIL: {e}");
            Ok(false)
        }
    }
}

fn run_bench(a: BenchArgs) -> Result<bool> {
    let Some(seed) = a.search.seed else {
        bail!("bench needs --seed or RUS_FORGE_SEED");
    };
    let cfg = BenchConfig { mode: a.mode, count: a.count, epsilons: a.epsilon.clone(), params: a.search.params(seed), variant: a.search.variant };
    let rows = bench::run_bench(&cfg);
    for r in rows.iter().filter(|r| !r.ok()) {
        eprintln!("row θ = {} ε = {:e} failed: {}", r.theta, r.epsilon, r.error);
    }
    let summary = bench::summarize(&rows);
    match &a.out {
        Some(p) => {
            bench::write_csv(&rows, fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)?;
            write(&p.with_extension("summary.json"), &serde_json::to_string_pretty(&summary)?)?;
        }
        None => bench::write_csv(&rows, std::io::stdout())?,
    }
    eprint!("{summary}");
    Ok(true)
}

fn run_density(a: DensityArgs) -> Result<bool> {
    if a.ell > density::MAX_ELL {
        bail!("ell must be at most {}", density::MAX_ELL);
    }
    let r = density::density(a.ell);
    println!("ell {}: {} grey, {} blue ({} rotations), {} unitary points", r.ell, r.grey.len(), r.blue.len(), r.blue_rotations, r.red.len());
    println!("eps_max {:.4}; unitary points within eps_max of a z-rotation: {}", r.eps_max, r.red_within);
    if let Some(p) = &a.out {
        write(p, &serde_json::to_string_pretty(&r)?)?;
    }
    Ok(true)
}

fn norm_solve(a: NormArgs) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let f = normeq::limited_factor(&a.xi, normeq::DEFAULT_BUDGET, &mut rng);
    println!("xi = {}", a.xi);
    println!("   = {}", f.display_grouped());
    println!("easily solvable: {} ({:?})", f.verdict.easily_solvable, f.verdict.reason);
    if !f.verdict.easily_solvable {
        return Ok(true);
    }
    let y = normeq::solve_norm_equation(&a.xi, &f)?;
    let ok = y.abs_squared() == a.xi;
    println!("y = {y}");
    println!("|y|^2 = {} {}", y.abs_squared(), if ok { "(exact)" } else { "(MISMATCH)" });
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Synth(a) => synth(a),
        Cmd::Verify(a) => verify(a),
        Cmd::Bench(a) => run_bench(a),
        Cmd::Density(a) => run_density(a),
        Cmd::NormSolve(a) => norm_solve(a),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
