use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use quatcs::integrate::{resolution_of_identity, MeasureVariant, QuadratureGrid};
use quatcs::slicekit::verification_table;
use quatcs::states::squeeze_generator;
use quatcs::{Execution, Quaternion};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn expm(c: &mut Criterion) {
    let mut group = c.benchmark_group("expm");
    group.sample_size(10);
    for n in [32, 64] {
        let g = squeeze_generator(Quaternion::new(0.2, 0.3, -0.4, 0.1), n);
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &g, |b, g| {
                b.iter(|| black_box(g.expm_with(exec).unwrap()))
            });
        }
    }
    group.finish();
}

fn resolution(c: &mut Criterion) {
    let mut group = c.benchmark_group("resolution");
    group.sample_size(10);
    let grid = QuadratureGrid::new(MeasureVariant::Plain, 24, 8, 6, 8).unwrap();
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| black_box(resolution_of_identity(7, &grid, 16, exec).unwrap()))
        });
    }
    group.finish();
}

fn slice_table(c: &mut Criterion) {
    let mut group = c.benchmark_group("slice_table");
    group.sample_size(10);
    let axes = [Quaternion::I, Quaternion::K];
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| black_box(verification_table(&axes, &[0.25], &[1.0], 64, exec).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, expm, resolution, slice_table);
criterion_main!(benches);
