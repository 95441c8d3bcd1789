//! Momentum-space moment estimator.
//!
//! For a fixed disorder realization the walk is diagonal in momentum: each
//! k = (k1, k2) evolves independently as ψ̂ ← D_t(k)·C·ψ̂ with
//! D_t(k) = diag(e^{−i(s1 Δ1 k1 + s2 Δ2 k2)}), s_j = ±1 the shift signs of
//! the coin components. Position moments follow from derivative vectors
//! φ_j = i ∂_{k_j} ψ̂, which obey the same recursion plus a source term:
//!
//!   φ_j ← D_t C φ_j + Δ_j(t) · Z_j · ψ̂_new,
//!
//! with Z1 = diag(1, 1, −1, −1) and Z2 = diag(1, −1, 1, −1). Then
//! ⟨x_j⟩ = E_k[Re(ψ̂†φ_j)] and ⟨x_j²⟩ = E_k[‖φ_j‖²].
//!
//! Averaging over the full uniform quadrature grid (with more points per
//! axis than twice the maximum displacement) is exact because the
//! integrands are trigonometric polynomials; averaging over uniformly
//! random k is an unbiased Monte-Carlo estimate whose cost is independent
//! of the walk's spread. This makes variances of ballistically spreading
//! large-step walks tractable where a real-space state would not fit in
//! memory.

use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::TAU;

use crate::error::{Result, WalkError};
use crate::evolve::{draw_disorder, DisorderSequence, WalkConfig};
use crate::observables::ObservableRecord;
use crate::seed::{stream_rng, Stream};

/// Shift signs per coin component, first direction.
const Z1: [f64; 4] = [1.0, 1.0, -1.0, -1.0];
/// Shift signs per coin component, second direction.
const Z2: [f64; 4] = [1.0, -1.0, 1.0, -1.0];

/// Variance records for one disorder realization.
#[derive(Debug)]
pub struct SpectralMoments {
    /// Only the variance fields are populated.
    pub records: Vec<ObservableRecord>,
    pub disorder: DisorderSequence,
}

struct Mode {
    k1: f64,
    k2: f64,
    psi: [Complex64; 4],
    phi1: [Complex64; 4],
    phi2: [Complex64; 4],
}

fn matvec(c: &[[Complex64; 4]; 4], v: &[Complex64; 4]) -> [Complex64; 4] {
    let mut out = [Complex64::ZERO; 4];
    for (row, o) in c.iter().zip(out.iter_mut()) {
        *o = row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3];
    }
    out
}

/// Runs the estimator for one realization. `config.spectral_samples = 0`
/// selects the exact quadrature grid (sized from the realized step sums, so
/// only use it for modest t_max); any positive value selects that many
/// Monte-Carlo momentum samples.
pub fn run_spectral(config: &WalkConfig, realization: u64) -> Result<SpectralMoments> {
    config.validate()?;
    if config.dimension != 2 {
        return Err(WalkError::InvalidConfig(
            "the spectral engine is 2-D only".into(),
        ));
    }
    let disorder = draw_disorder(config, realization)?;
    let coin_matrix = config.coin_matrix()?;
    let mut coin = [[Complex64::ZERO; 4]; 4];
    for (i, row) in coin.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            *e = coin_matrix.entry(i, j);
        }
    }
    let init: [Complex64; 4] = [
        config.initial_coin[0],
        config.initial_coin[1],
        config.initial_coin[2],
        config.initial_coin[3],
    ];

    let mut modes: Vec<Mode> = if config.spectral_samples == 0 {
        // Exact grid: n_j points resolve displacements up to ±Σ_t Δ_j.
        let s1: u64 = disorder.d1.iter().map(|&d| u64::from(d)).sum();
        let s2: u64 = disorder.d2.iter().map(|&d| u64::from(d)).sum();
        let n1 = 2 * s1 as usize + 1;
        let n2 = 2 * s2 as usize + 1;
        if n1.saturating_mul(n2) > 50_000_000 {
            return Err(WalkError::InvalidConfig(format!(
                "exact quadrature grid {n1}x{n2} is too large; \
                 use Monte-Carlo sampling (spectral_samples > 0)"
            )));
        }
        let mut v = Vec::with_capacity(n1 * n2);
        for i in 0..n1 {
            for j in 0..n2 {
                v.push(Mode {
                    k1: TAU * i as f64 / n1 as f64,
                    k2: TAU * j as f64 / n2 as f64,
                    psi: init,
                    phi1: [Complex64::ZERO; 4],
                    phi2: [Complex64::ZERO; 4],
                });
            }
        }
        v
    } else {
        let mut rng = stream_rng(config.seed, realization, Stream::Momentum);
        (0..config.spectral_samples)
            .map(|_| Mode {
                k1: TAU * rng.random::<f64>(),
                k2: TAU * rng.random::<f64>(),
                psi: init,
                phi1: [Complex64::ZERO; 4],
                phi2: [Complex64::ZERO; 4],
            })
            .collect()
    };

    let mut records = Vec::with_capacity(config.t_max as usize + 1);
    records.push(ObservableRecord {
        t: 0,
        var_x1: Some(0.0),
        var_x2: Some(0.0),
        var_r: Some(0.0),
        ..Default::default()
    });
    for s in 1..=config.t_max {
        let d1 = f64::from(disorder.d1[(s - 1) as usize]);
        let d2 = f64::from(disorder.d2[(s - 1) as usize]);
        for m in modes.iter_mut() {
            let coined = matvec(&coin, &m.psi);
            let coined1 = matvec(&coin, &m.phi1);
            let coined2 = matvec(&coin, &m.phi2);
            for c_idx in 0..4 {
                let phase =
                    Complex64::from_polar(1.0, -(Z1[c_idx] * d1 * m.k1 + Z2[c_idx] * d2 * m.k2));
                m.psi[c_idx] = phase * coined[c_idx];
                m.phi1[c_idx] = phase * coined1[c_idx] + d1 * Z1[c_idx] * m.psi[c_idx];
                m.phi2[c_idx] = phase * coined2[c_idx] + d2 * Z2[c_idx] * m.psi[c_idx];
            }
        }
        if s % config.plan.stride == 0 || s == config.t_max {
            let inv = 1.0 / modes.len() as f64;
            let (mut e1, mut e2, mut sq1, mut sq2) = (0.0, 0.0, 0.0, 0.0);
            for m in &modes {
                for c_idx in 0..4 {
                    e1 += (m.psi[c_idx].conj() * m.phi1[c_idx]).re;
                    e2 += (m.psi[c_idx].conj() * m.phi2[c_idx]).re;
                    sq1 += m.phi1[c_idx].norm_sqr();
                    sq2 += m.phi2[c_idx].norm_sqr();
                }
            }
            let v1 = sq1 * inv - (e1 * inv) * (e1 * inv);
            let v2 = sq2 * inv - (e2 * inv) * (e2 * inv);
            records.push(ObservableRecord {
                t: s,
                var_x1: Some(v1),
                var_x2: Some(v2),
                var_r: Some(v1 + v2),
                ..Default::default()
            });
        }
    }
    Ok(SpectralMoments { records, disorder })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::CoinParams;
    use crate::evolve::{run, CoinKind, Engine, ObservablePlan};
    use crate::evolve::series;
    use std::f64::consts::FRAC_PI_4;

    fn base(kind: CoinKind, q1: f64, q2: f64, t_max: u32) -> WalkConfig {
        WalkConfig {
            dimension: 2,
            q1,
            q2,
            coin_kind: kind,
            coin1: CoinParams::kempe(FRAC_PI_4).unwrap(),
            coin2: CoinParams::kempe(FRAC_PI_4).unwrap(),
            initial_coin: vec![Complex64::new(0.5, 0.0); 4],
            t_max,
            seed: 77,
            plan: ObservablePlan {
                trace_distance: false,
                entropies: false,
                negativity: false,
                ..Default::default()
            },
            engine: Engine::Spectral,
            spectral_samples: 0,
        }
    }

    #[test]
    fn exact_grid_matches_sparse_engine() {
        for (kind, q1, q2) in [
            (CoinKind::Separable, 0.5, 0.5),
            (CoinKind::Separable, f64::INFINITY, 2.0),
            (CoinKind::Entangling, f64::INFINITY, f64::INFINITY),
            (CoinKind::Entangling, 0.5, f64::INFINITY),
        ] {
            let cfg = base(kind, q1, q2, 10);
            let spec = run_spectral(&cfg, 0).unwrap();
            let sparse = run(&cfg, 0).unwrap();
            assert_eq!(spec.disorder, sparse.disorder);
            for (a, b) in spec.records.iter().zip(&sparse.records) {
                assert_eq!(a.t, b.t);
                for (x, y) in [
                    (a.var_x1, b.var_x1),
                    (a.var_x2, b.var_x2),
                    (a.var_r, b.var_r),
                ] {
                    let (x, y) = (x.unwrap(), y.unwrap());
                    assert!(
                        (x - y).abs() < 1e-9 * (1.0 + y.abs()),
                        "{kind:?} q=({q1},{q2}) t={}: spectral {x} vs sparse {y}",
                        a.t
                    );
                }
            }
        }
    }

    #[test]
    fn monte_carlo_estimate_is_close_to_exact() {
        let mut cfg = base(CoinKind::Entangling, f64::INFINITY, f64::INFINITY, 15);
        let exact = run_spectral(&cfg, 1).unwrap();
        cfg.spectral_samples = 20_000;
        let mc = run_spectral(&cfg, 1).unwrap();
        let ve = series(&exact.records, |r| r.var_r);
        let vm = series(&mc.records, |r| r.var_r);
        for ((t, e), (_, m)) in ve.iter().zip(&vm) {
            assert!(
                (e - m).abs() < 0.05 * e.max(1.0),
                "t={t}: exact {e} vs MC {m}"
            );
        }
    }

    #[test]
    fn monte_carlo_is_deterministic_per_seed_and_realization() {
        let mut cfg = base(CoinKind::Separable, 2.0, f64::INFINITY, 10);
        cfg.spectral_samples = 500;
        let a = run_spectral(&cfg, 4).unwrap();
        let b = run_spectral(&cfg, 4).unwrap();
        let c = run_spectral(&cfg, 5).unwrap();
        for (ra, rb) in a.records.iter().zip(&b.records) {
            assert_eq!(ra.var_r, rb.var_r);
        }
        assert_ne!(
            a.records.last().unwrap().var_r,
            c.records.last().unwrap().var_r
        );
    }

    #[test]
    fn momentum_sampling_does_not_perturb_disorder() {
        let mut cfg = base(CoinKind::Separable, f64::INFINITY, 2.0, 20);
        let exact_d = run_spectral(&cfg, 0).unwrap().disorder;
        cfg.spectral_samples = 100;
        let mc_d = run_spectral(&cfg, 0).unwrap().disorder;
        assert_eq!(exact_d, mc_d);
        assert_eq!(exact_d, draw_disorder(&cfg, 0).unwrap());
    }

    #[test]
    fn standard_walk_first_step_variance() {
        let cfg = base(CoinKind::Separable, 0.5, 0.5, 1);
        let out = run_spectral(&cfg, 0).unwrap();
        assert!((out.records[1].var_x1.unwrap() - 1.0).abs() < 1e-10);
        assert!((out.records[1].var_r.unwrap() - 2.0).abs() < 1e-10);
    }
}
