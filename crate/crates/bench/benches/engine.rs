use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use geqw::evolve::{self, CoinKind, Engine, ObservablePlan};
use geqw::qexp::{weights, QExpParams};
use geqw::spectral::run_spectral;
use geqw::state::{Site, SparseState};
use geqw::{CoinParams, WalkConfig};
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_4;

fn config(kind: CoinKind, q: f64, t_max: u32) -> WalkConfig {
    WalkConfig {
        dimension: 2,
        q1: q,
        q2: q,
        coin_kind: kind,
        coin1: CoinParams::kempe(FRAC_PI_4).unwrap(),
        coin2: CoinParams::kempe(FRAC_PI_4).unwrap(),
        initial_coin: vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.5),
            Complex64::new(0.0, 0.5),
            Complex64::new(-0.5, 0.0),
        ],
        t_max,
        seed: 7,
        plan: ObservablePlan {
            variances: true,
            trace_distance: false,
            entropies: false,
            negativity: false,
            coherence: false,
            stride: u32::MAX - 1,
            coherence_stride: u32::MAX - 1,
            entanglement_t_cap: None,
        },
        engine: Engine::Sparse,
        spectral_samples: 0,
    }
}

/// A spread-out state for stepping benchmarks: 60 standard steps.
fn spread_state() -> (SparseState, geqw::CoinMatrix4) {
    let cfg = config(CoinKind::Entangling, 0.5, 60);
    let coin = cfg.coin_matrix().unwrap();
    let out = evolve::run(&cfg, 0).unwrap();
    (out.final_state, coin)
}

fn bench_coin_apply(c: &mut Criterion) {
    let (state, coin) = spread_state();
    c.bench_function("coin_apply_3k_sites", |b| {
        b.iter_batched(
            || state.clone(),
            |mut s| {
                s.apply_coin(&coin);
                black_box(s.site_count())
            },
            BatchSize::LargeInput,
        )
    });
}

fn bench_shift(c: &mut Criterion) {
    let (state, _) = spread_state();
    c.bench_function("shift_3k_sites", |b| {
        b.iter_batched(
            || state.clone(),
            |mut s| {
                s.apply_shift(2, 3);
                black_box(s.site_count())
            },
            BatchSize::LargeInput,
        )
    });
}

fn bench_qexp_weights(c: &mut Criterion) {
    c.bench_function("qexp_weights_t500_q2", |b| {
        b.iter(|| {
            let w = weights(QExpParams::new(black_box(2.0), 500).unwrap()).unwrap();
            black_box(w.probabilities.len())
        })
    });
}

fn bench_spectral(c: &mut Criterion) {
    let mut cfg = config(CoinKind::Entangling, f64::INFINITY, 50);
    cfg.engine = Engine::Spectral;
    cfg.spectral_samples = 1000;
    c.bench_function("spectral_1k_modes_50_steps", |b| {
        b.iter(|| black_box(run_spectral(&cfg, 0).unwrap().records.len()))
    });
}

criterion_group!(
    benches,
    bench_coin_apply,
    bench_shift,
    bench_qexp_weights,
    bench_spectral
);
criterion_main!(benches);
