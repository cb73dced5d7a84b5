use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use nichols_engine::cartan::{explore, ExploreCaps};
use nichols_engine::exec;
use nichols_engine::nichols::hilbert_series;
use nichols_engine::scalars::Characteristic;
use nichols_engine::skeleton::{realize_skeleton, SkeletonType};

fn modes() -> [(&'static str, bool); 2] {
    [("parallel", false), ("sequential", true)]
}

fn exploration(c: &mut Criterion) {
    let m = realize_skeleton(SkeletonType::BetaPrime(3), Characteristic::ZERO).unwrap();
    let mut group = c.benchmark_group("explore beta'_3");
    group.sample_size(10);
    for (name, seq) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            exec::set_sequential(seq);
            b.iter(|| explore(&m, ExploreCaps::default()).unwrap());
        });
    }
    exec::set_sequential(false);
    group.finish();
}

fn series(c: &mut Criterion) {
    let m = realize_skeleton(SkeletonType::Phi4, Characteristic::ZERO).unwrap();
    let ex = explore(&m, ExploreCaps::default()).unwrap();
    let mut group = c.benchmark_group("hilbert phi_4");
    group.sample_size(10);
    for (name, seq) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            exec::set_sequential(seq);
            b.iter(|| hilbert_series(&ex, 24).unwrap());
        });
    }
    exec::set_sequential(false);
    group.finish();
}

criterion_group!(benches, exploration, series);
criterion_main!(benches);
