use criterion::{criterion_group, criterion_main, Criterion};
use pitlab_core::{coeffs, eval, hp};

fn bench_eval(c: &mut Criterion) {
    let seq = coeffs::make_quadratic_phase(hp::alpha_sqrt2(256), 160).unwrap();
    let z = hp::complex(224, 21.0, 9.0);
    // warm the coefficient cache so the benchmark measures summation
    let _ = eval::eval_f(&seq, &z, 1e-30).unwrap();
    c.bench_function("eval_f quadratic r~23 P160", |b| {
        b.iter(|| eval::eval_f(&seq, std::hint::black_box(&z), 1e-30).unwrap())
    });
}

fn bench_parseval(c: &mut Criterion) {
    let seq = coeffs::make_quadratic_phase(hp::alpha_sqrt2(256), 160).unwrap();
    c.bench_function("parseval_m2 r=30", |b| {
        b.iter(|| seq.parseval_m2(std::hint::black_box(30.0), 1e-12).unwrap())
    });
}

criterion_group!(benches, bench_eval, bench_parseval);
criterion_main!(benches);
