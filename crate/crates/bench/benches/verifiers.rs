use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use vertexcalc::formal::contraction_check;
use vertexcalc::quadratic::{l_apply, verify_virasoro};
use vertexcalc::voa::{clear_mode_cache, jacobi_check, y_apply, zhu_bracket_apply, Windows};
use vertexcalc::FockVector;
use vertexcalc_bench::{basis_vectors, sample_states};

fn modes(c: &mut Criterion) {
    let ws = basis_vectors(5);
    let mut g = c.benchmark_group("modes_cold");
    for (name, v) in sample_states() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                clear_mode_cache();
                for w in &ws {
                    for n in -3..=3 {
                        black_box(y_apply(&v, w, n));
                    }
                }
            })
        });
    }
    g.finish();

    c.bench_function("l_apply_weight8", |b| {
        let ws = basis_vectors(8);
        b.iter(|| ws.iter().map(|w| l_apply(-2, w).len()).sum::<usize>())
    });
}

fn virasoro(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_virasoro");
    for w in [4, 6, 8] {
        g.bench_with_input(BenchmarkId::from_parameter(w), &w, |b, &w| b.iter(|| verify_virasoro(3, -2, w)));
    }
    g.finish();
}

fn formal(c: &mut Criterion) {
    let v = FockVector::mono(&[2, 1]);
    c.bench_function("contraction_h2h1", |b| b.iter(|| contraction_check(&v, 4)));

    let h = FockVector::mono(&[1]);
    c.bench_function("zhu_bracket_omega_h", |b| {
        b.iter(|| {
            clear_mode_cache();
            zhu_bracket_apply(&vertexcalc::voa::omega(), &h, 6).unwrap()
        })
    });

    let win = Windows::symmetric(3, 2, 2);
    let w = FockVector::mono(&[1, 1]);
    let mut g = c.benchmark_group("jacobi_window3");
    g.sample_size(10);
    g.bench_function("omega_h", |b| {
        b.iter(|| {
            clear_mode_cache();
            jacobi_check(&vertexcalc::voa::omega(), &h, &w, &win).unwrap()
        })
    });
    g.finish();
}

criterion_group!(benches, modes, virasoro, formal);
criterion_main!(benches);
