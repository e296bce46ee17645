use alpfeas_bench::{random_systems, three_disequalities};
use alpfeas_core::reduce::{gadget_matrix_det, reduce};
use alpfeas_core::{
    alp_feasible, decide_feasibility, oracle_feasible, DecideOptions, KPoly, KRatFun,
    OracleOptions, SolverOptions,
};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn ratfun_arith(c: &mut Criterion) {
    let a = KRatFun::new(KPoly::k_plus(3), KPoly::k_plus(-2)).unwrap();
    let b = KRatFun::new("2*K^2-1".parse().unwrap(), KPoly::k_plus(5)).unwrap();
    c.bench_function("ratfun mul+add", |bench| {
        bench.iter(|| &(black_box(&a) * black_box(&b)) + &a)
    });
}

fn single_alp(c: &mut Criterion) {
    let bundle = reduce(&three_disequalities()).unwrap();
    let alp = bundle.alps[7].clone();
    let opts = SolverOptions::default();
    c.bench_function("alp_feasible 25 rows", |bench| {
        bench.iter(|| alp_feasible(black_box(&alp), &opts).unwrap())
    });
}

fn reduction_vs_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("decide");
    group.sample_size(10);
    for max_ne in [1usize, 2, 3] {
        let systems = random_systems(42, 20, max_ne);
        group.bench_with_input(
            BenchmarkId::new("reduction", max_ne),
            &systems,
            |bench, systems| {
                bench.iter(|| {
                    for s in systems {
                        let _ = decide_feasibility(s, &DecideOptions::default());
                    }
                })
            },
        );
        group.bench_with_input(
            BenchmarkId::new("oracle", max_ne),
            &systems,
            |bench, systems| {
                bench.iter(|| {
                    for s in systems {
                        let _ = oracle_feasible(s, &OracleOptions::default());
                    }
                })
            },
        );
    }
    group.finish();
}

fn determinant(c: &mut Criterion) {
    c.bench_function("gadget det N=8", |bench| {
        bench.iter(|| gadget_matrix_det(black_box(8)))
    });
}

criterion_group!(
    benches,
    ratfun_arith,
    single_alp,
    reduction_vs_oracle,
    determinant
);
criterion_main!(benches);
