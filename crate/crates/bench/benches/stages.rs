use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rusforge::pipeline::SearchParams;
use rusforge::relation::{approximate_phase, Angle, PhaseTarget};
use rusforge::rus2q::{rus_synthesis, synthesize_rz, VariantChoice};
use rusforge::synth1q::exact_synthesize;
use rusforge::verify::circuit_unitary;
use rusforge_bench::{example_design, example_xi, word};

fn ring(c: &mut Criterion) {
    let v = example_design();
    c.bench_function("ring/matrix product L=26", |b| b.iter(|| black_box(&v).dot(black_box(&v))));
}

fn stage1(c: &mut Criterion) {
    let t = PhaseTarget { theta: Angle::pi_multiple(1, 64), epsilon: 1e-11 };
    c.bench_function("pslq/pi/64 at 1e-11", |b| b.iter(|| approximate_phase(black_box(&t)).unwrap()));
}

fn stage2(c: &mut Criterion) {
    let xi = example_xi();
    c.bench_function("normeq/worked example", |b| {
        b.iter(|| {
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            rusforge::normeq::solve(black_box(&xi), &mut rng).unwrap()
        })
    });
}

fn stage3(c: &mut Criterion) {
    let m = word(40).matrix();
    c.bench_function("exact synthesis/T-count 40", |b| b.iter(|| exact_synthesize(black_box(&m)).unwrap()));
}

fn stage4(c: &mut Criterion) {
    let v = example_design();
    c.bench_function("rus synthesis/example, all variants", |b| b.iter(|| rus_synthesis(black_box(&v), VariantChoice::Auto).unwrap()));
    let p = rus_synthesis(&v, VariantChoice::Z).unwrap();
    c.bench_function("exact simulation/example design", |b| b.iter(|| circuit_unitary(black_box(&p.design)).unwrap()));
}

fn end_to_end(c: &mut Criterion) {
    let theta = Angle::pi_multiple(1, 64);
    let params = SearchParams { seed: 7, ..SearchParams::default() };
    let mut g = c.benchmark_group("end to end");
    g.sample_size(10);
    g.bench_function("pi/64 at 1e-11", |b| b.iter(|| synthesize_rz(&theta, 1e-11, &params, VariantChoice::Auto, false).unwrap()));
    g.finish();
}

criterion_group!(benches, ring, stage1, stage2, stage3, stage4, end_to_end);
criterion_main!(benches);
