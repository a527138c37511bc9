use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use wavedim::construction::{truncate_with, Params, WaveletSet};
use wavedim::dimension::{dimension_at_many, dimension_profile_with, sum_rule_many};
use wavedim::scalar::rat;
use wavedim::{wavelet_verdict_with, Exec, Scalar};

const POLICIES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn points(n: usize) -> Vec<Scalar> {
    let mut rng = StdRng::seed_from_u64(7);
    (0..n)
        .map(|_| Scalar::pi(rat(rng.gen_range(-80_000..80_000), 10_007)))
        .collect()
}

fn bench_pointwise(c: &mut Criterion) {
    let p = Params::new(3, rat(1, 10)).unwrap();
    let w = WaveletSet::new(&p);
    let xs = points(2000);
    let mut g = c.benchmark_group("pointwise");
    for (name, exec) in POLICIES {
        g.bench_with_input(BenchmarkId::new("dimension_at", name), &exec, |b, &e| {
            b.iter(|| dimension_at_many(&w, &xs, e))
        });
        g.bench_with_input(BenchmarkId::new("sum_rule", name), &exec, |b, &e| {
            b.iter(|| sum_rule_many(&w, &xs, e))
        });
    }
    g.finish();
}

fn bench_sets(c: &mut Criterion) {
    let p = Params::new(3, rat(1, 10)).unwrap();
    let t = truncate_with(&p, 6, Exec::Sequential);
    let mut g = c.benchmark_group("sets");
    g.sample_size(20);
    for (name, exec) in POLICIES {
        g.bench_with_input(BenchmarkId::new("truncate", name), &exec, |b, &e| {
            b.iter(|| truncate_with(&p, 6, e))
        });
        g.bench_with_input(BenchmarkId::new("verdict", name), &exec, |b, &e| {
            b.iter(|| wavelet_verdict_with(&t.set, e))
        });
        g.bench_with_input(BenchmarkId::new("profile", name), &exec, |b, &e| {
            b.iter(|| dimension_profile_with(&t.set, e).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bench_pointwise, bench_sets);
criterion_main!(benches);
