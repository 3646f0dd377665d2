use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cxtv_bench::{cloud, random_lp};
use cxtv_core::cohomology::{Partition, SchurClass, SchurRing};
use cxtv_core::depth::{centerpoint_region, tukey_depth};
use cxtv_core::lp::lp_solve;
use cxtv_core::poly::Ring;
use cxtv_core::scalar::q;
use std::hint::black_box;

fn depth(c: &mut Criterion) {
    let mut g = c.benchmark_group("tukey_depth");
    for (n, dim) in [(24, 2), (12, 3), (8, 4)] {
        let m = cloud(n, dim, 7);
        let center = vec![q(0, 1); dim];
        g.bench_with_input(BenchmarkId::new(format!("dim{dim}"), n), &m, |b, m| {
            b.iter(|| tukey_depth(black_box(m), &center).unwrap())
        });
    }
    g.finish();
}

fn region(c: &mut Criterion) {
    let mut g = c.benchmark_group("centerpoint_region");
    g.sample_size(10);
    for (n, dim) in [(12, 2), (24, 2), (8, 3)] {
        let m = cloud(n, dim, 11);
        let t = q(1, dim as i64 + 1);
        g.bench_with_input(BenchmarkId::new(format!("dim{dim}"), n), &m, |b, m| {
            b.iter(|| centerpoint_region(black_box(m), &t).unwrap())
        });
    }
    g.finish();
}

fn lp(c: &mut Criterion) {
    let mut g = c.benchmark_group("lp_solve");
    for (vars, rows) in [(2, 16), (4, 32), (6, 48)] {
        let problem = random_lp(vars, rows, 3);
        g.bench_with_input(BenchmarkId::new(format!("vars{vars}"), rows), &problem, |b, p| {
            b.iter(|| lp_solve(black_box(p)).unwrap())
        });
    }
    g.finish();
}

fn pieri(c: &mut Criterion) {
    let mut g = c.benchmark_group("schur_product");
    for (k, d) in [(2, 6), (3, 8), (4, 10)] {
        let ring = SchurRing::new(k, d, Ring::Integers).unwrap();
        let x = SchurClass::chern(ring, 1).add(&SchurClass::basis(ring, Partition::new(vec![2, 1]).unwrap())).unwrap();
        g.bench_with_input(BenchmarkId::new(format!("k{k}"), d), &x, |b, x| b.iter(|| black_box(x).pow(4)));
    }
    g.finish();
}

criterion_group!(benches, depth, region, lp, pieri);
criterion_main!(benches);
