use criterion::{black_box, criterion_group, criterion_main, Criterion};
use momentkit_bench::fixture;
use momentkit_core::catalog::table_entry;
use momentkit_core::catalog::Support;
use momentkit_core::kirwan::{start_point, KirwanObjective};
use momentkit_core::symcheck::{lagrangian_verdict, Context};
use momentkit_core::eval_rep_expr;

fn rep_construction(c: &mut Criterion) {
    for id in ["su6-lambda3", "sp3-lambda3", "spin10-lambda-e-pair"] {
        let Support::Constructible { group, rep, .. } = table_entry(id).unwrap().support else {
            unreachable!()
        };
        c.bench_function(&format!("build/{id}"), |b| b.iter(|| eval_rep_expr(black_box(&group), black_box(&rep)).unwrap()));
    }
}

fn objective(c: &mut Criterion) {
    let ctx = Context::default();
    for id in ["su7-lambda2-lambda1", "spin10-lambda-e-pair"] {
        let (r, _, _) = fixture(id);
        let obj = KirwanObjective::new(&ctx, &r);
        let z = start_point(1, 0, r.dim_v());
        c.bench_function(&format!("objective/{id}"), |b| b.iter(|| obj.value_and_grad(black_box(&z))));
    }
}

fn verdict(c: &mut Criterion) {
    let ctx = Context::default();
    for id in ["sp3-lambda1-pair", "spin10-lambda-e-pair"] {
        let (r, s, p) = fixture(id);
        c.bench_function(&format!("verdict/{id}"), |b| b.iter(|| lagrangian_verdict(&ctx, &r, &s, black_box(&p)).unwrap()));
    }
}

criterion_group!(benches, rep_construction, objective, verdict);
criterion_main!(benches);
