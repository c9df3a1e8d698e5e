//! Sector decomposition on one thread versus the full rayon pool.
//!
//! Build with `--no-default-features` to time the purely sequential code path.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use foel_core::hamiltonian::build_normalized_chain;
use foel_core::qgroup::{q_sector_energies, QParam};
use foel_core::sector::sector_energies;
use foel_core::ssep::check_aldous;
use foel_core::{ChainSpec, HalfInt, HilbertShape, SpinGraph};
use rayon::ThreadPoolBuilder;

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    vec![
        ("1-thread", ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
        ("pool", ThreadPoolBuilder::new().build().unwrap()),
    ]
}

fn chain_sectors(c: &mut Criterion) {
    let mut group = c.benchmark_group("sector_energies");
    group.sample_size(10);
    for (spin, len) in [(HalfInt::ONE, 6), (HalfInt::HALF, 11)] {
        let spec = ChainSpec::uniform(len, spin).unwrap();
        let h = build_normalized_chain(&spec).unwrap();
        let shape = HilbertShape::from_spins(spec.spins()).unwrap();
        let label = format!("s{}x{len}", spin.twice());
        for (name, pool) in pools() {
            group.bench_with_input(BenchmarkId::new(name, &label), &(), |b, _| {
                b.iter(|| pool.install(|| sector_energies(&h, &shape).unwrap()))
            });
        }
    }
    group.finish();
}

fn q_sectors(c: &mut Criterion) {
    let mut group = c.benchmark_group("q_sector_energies");
    group.sample_size(10);
    let qp = QParam::from_q(0.5).unwrap();
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::new(name, "L10"), |b| {
            b.iter(|| pool.install(|| q_sector_energies(10, qp).unwrap()))
        });
    }
    group.finish();
}

fn ssep_gaps(c: &mut Criterion) {
    let mut group = c.benchmark_group("check_aldous");
    group.sample_size(10);
    let g = SpinGraph::path(&[HalfInt::HALF; 12], &[1.0; 11]).unwrap();
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::new(name, "path12"), |b| {
            b.iter(|| pool.install(|| check_aldous(&g, &[1.0; 11]).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, chain_sectors, q_sectors, ssep_gaps);
criterion_main!(benches);
