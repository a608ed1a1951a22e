//! Parallel vs sequential throughput of the batch drivers.
//!
//! Run with `cargo bench -p hyptet`. With the default `parallel` feature
//! the `auto` variants use the rayon pool; without it both variants run
//! the same sequential code, which makes the comparison a no-op.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::f64::consts::PI;

use hyptet::count::length_table;
use hyptet::exec::Mode;
use hyptet::shoot::{find_closed, OracleConfig};
use hyptet::tetra::{Surface, TetraParams};

fn bench_length_table(c: &mut Criterion) {
    let surface = Surface::build(TetraParams::new(PI / 6.0).unwrap()).unwrap();
    let mut group = c.benchmark_group("length_table_pq40");
    group.sample_size(10);
    for (name, mode) in [("sequential", Mode::Sequential), ("auto", Mode::Auto)] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            b.iter(|| length_table(&surface, 40, mode).unwrap());
        });
    }
    group.finish();
}

fn bench_oracle_scan(c: &mut Criterion) {
    let surface = Surface::build(TetraParams::new(PI / 6.0).unwrap()).unwrap();
    let mut group = c.benchmark_group("oracle_scan_grid40");
    group.sample_size(10);
    for (name, mode) in [("sequential", Mode::Sequential), ("auto", Mode::Auto)] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            let cfg = OracleConfig {
                l_max: 4.0,
                grid: 40,
                refine_tol: 1e-9,
                mode,
            };
            b.iter(|| find_closed(&surface, &cfg).unwrap());
        });
    }
    group.finish();
}

criterion_group!(benches, bench_length_table, bench_oracle_scan);
criterion_main!(benches);
