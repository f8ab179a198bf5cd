//! Sequential vs rayon execution on the workloads that fan out: BV axiom
//! sweeps, Tot/TW construction and the colimit tail.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use descentlab::descent::{check_tot_cech, check_tw_tot, random_presheaf, RandomShape};
use descentlab::exec::Execution;
use descentlab::operad_alg::{bv_axiom_report, tw_product, triangle_locally_constant, PolyvectorBv};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn bv(c: &mut Criterion) {
    let mut g = c.benchmark_group("bv_axioms");
    g.sample_size(10);
    let bv = PolyvectorBv::polynomial(2, 3);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, "Q[x1,x2] deg 3"), &bv, |b, bv| b.iter(|| black_box(bv_axiom_report(bv, exec).unwrap())));
    }
    g.finish();
}

fn totalizations(c: &mut Criterion) {
    let f = random_presheaf(17, RandomShape { members: 4, max_cells: 4, width: 4 }).unwrap();
    let mut g = c.benchmark_group("totalization");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, "tot-cech N=4"), &f, |b, f| b.iter(|| black_box(check_tot_cech(f, exec).unwrap())));
        g.bench_with_input(BenchmarkId::new(name, "tw-tot N=4"), &f, |b, f| b.iter(|| black_box(check_tw_tot(f, &[4, 5], exec).unwrap())));
    }
    g.finish();
}

fn products(c: &mut Criterion) {
    let f = triangle_locally_constant().unwrap();
    let mut g = c.benchmark_group("tw_product");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, "triangle P=2"), &f, |b, f| {
            b.iter(|| {
                let alg = tw_product(f, 2, exec).unwrap();
                black_box(alg.check_associative(2).unwrap())
            })
        });
    }
    g.finish();
}

criterion_group!(benches, bv, totalizations, products);
criterion_main!(benches);
