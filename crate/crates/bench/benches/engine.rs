use criterion::{black_box, criterion_group, criterion_main, Criterion};
use thetagrad_bench::{evaluator, points, SEED};
use thetagrad_core::chars::orbit_census;
use thetagrad_core::gradmap::pattern_census;
use thetagrad_core::numeric::Precision;
use thetagrad_core::relcat::{catalog, certify, sample_snapshots};
use thetagrad_core::Family;

fn snapshots(c: &mut Criterion) {
    let tau = points(1)[0];
    let double = evaluator(1e-10, Precision::Double);
    let dd = evaluator(1e-14, Precision::DoubleDouble);
    c.bench_function("snapshot/double-1e-10", |b| b.iter(|| double.snapshot(black_box(&tau)).unwrap()));
    c.bench_function("snapshot/dd-1e-14", |b| b.iter(|| dd.snapshot(black_box(&tau)).unwrap()));
}

fn catalogs(c: &mut Criterion) {
    let ev = evaluator(1e-14, Precision::DoubleDouble);
    let fit = sample_snapshots(&ev, SEED, 5, 0.3).unwrap();
    let check = sample_snapshots(&ev, SEED + 1, 10, 0.3).unwrap();
    c.bench_function("catalog/rb4", |b| b.iter(|| catalog(Family::Rb(4), black_box(&fit)).unwrap()));
    c.bench_function("catalog/rc4", |b| b.iter(|| catalog(Family::Rc(4), black_box(&fit)).unwrap()));
    let rels: Vec<_> = Family::all().into_iter().flat_map(|f| catalog(f, &fit).unwrap()).collect();
    c.bench_function("certify/all-families-10-points", |b| b.iter(|| certify(black_box(&rels), &check)));
}

fn combinatorics(c: &mut Criterion) {
    c.bench_function("orbit-census", |b| b.iter(orbit_census));
    c.bench_function("pattern-census", |b| b.iter(|| pattern_census().unwrap()));
}

criterion_group!(benches, snapshots, catalogs, combinatorics);
criterion_main!(benches);
