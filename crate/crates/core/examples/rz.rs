//! Compile one z-rotation and print the protocol summary.
//!
//! cargo run --release --example rz -- pi/64 1e-11 7

use rusforge::pipeline::SearchParams;
use rusforge::relation::Angle;
use rusforge::rus2q::{synthesize_rz, VariantChoice};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let theta: Angle = args.get(1).map_or("pi/64", |s| s.as_str()).parse().expect("angle");
    let eps: f64 = args.get(2).map_or(Ok(1e-11), |s| s.parse()).expect("epsilon");
    let seed: u64 = args.get(3).map_or(Ok(7), |s| s.parse()).expect("seed");
    let params = SearchParams { seed, ..SearchParams::default() };
    let t0 = std::time::Instant::now();
    let r = synthesize_rz(&theta, eps, &params, VariantChoice::Auto, false).expect("synthesis");
    let p = &r.protocol;
    println!("theta {theta}  eps {eps:e}  seed {seed}");
    println!("distance {:.3e}  p {:.4}  design T {}  expected T {:.2}  base T {}  variant {:?}", r.achieved_distance, p.p, p.design_tcount, p.expected_tcount, p.base_tcount, p.variant);
    println!("{}", p.design.listing());
    println!("elapsed {:.2?}", t0.elapsed());
}
