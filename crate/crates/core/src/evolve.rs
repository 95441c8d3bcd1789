//! Walk configuration and the real-space (sparse) evolution driver.
//!
//! One time step applies the composite coin and then a conditional shift
//! whose step sizes Δ1, Δ2 are drawn fresh each step from q-exponential
//! distributions over {1, …, t}, where t is the current step number.

use num_complex::Complex64;

use crate::coin::{build_c2, entangling_coin, separable_coin, CoinMatrix4, CoinParams};
use crate::error::{Result, WalkError};
use crate::observables::{
    entanglement_entropy, l1_coherence, marginals_of_state, negativity,
    product_of_marginals, reduced_coin_density, reduced_coin_density_1d,
    reduced_position_density_x1, subcoin_densities, trace_distance, variance,
    ObservableRecord,
};
use crate::qexp::{sample, QExpParams};
use crate::seed::{stream_rng, Stream};
use crate::state::{Site, SparseState, SparseState1D};

/// Whether the composite coin is a plain tensor product or a tensor product
/// followed by a CNOT on the two subcoins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoinKind {
    Separable,
    Entangling,
}

/// Which evolution engine computes the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    /// Real-space sparse state; supports every observable.
    Sparse,
    /// Momentum-space moment estimator; variances only.
    Spectral,
}

/// Which observables to compute and how often.
#[derive(Debug, Clone)]
pub struct ObservablePlan {
    pub variances: bool,
    pub trace_distance: bool,
    pub entropies: bool,
    pub negativity: bool,
    pub coherence: bool,
    /// Record cadence for everything except coherence.
    pub stride: u32,
    /// Record cadence for the position-space coherence (it needs an O(n²)
    /// density matrix and is by far the most expensive observable).
    pub coherence_stride: u32,
    /// Stop computing entropies/negativity past this step if set; the state
    /// keeps evolving so variances remain available.
    pub entanglement_t_cap: Option<u32>,
}

impl Default for ObservablePlan {
    fn default() -> Self {
        Self {
            variances: true,
            trace_distance: true,
            entropies: true,
            negativity: true,
            coherence: false,
            stride: 1,
            coherence_stride: 10,
            entanglement_t_cap: None,
        }
    }
}

/// Full description of a single walk experiment.
#[derive(Debug, Clone)]
pub struct WalkConfig {
    /// 1 or 2 spatial dimensions. Dimension 1 uses only `q1` and `coin1`
    /// and a 2-component initial coin state.
    pub dimension: u8,
    /// q index for the first (only, in 1-D) direction's step disorder.
    pub q1: f64,
    /// q index for the second direction's step disorder.
    pub q2: f64,
    pub coin_kind: CoinKind,
    pub coin1: CoinParams,
    pub coin2: CoinParams,
    /// Initial coin amplitudes: 4 components in 2-D, 2 in 1-D.
    pub initial_coin: Vec<Complex64>,
    pub t_max: u32,
    pub seed: u64,
    pub plan: ObservablePlan,
    pub engine: Engine,
    /// Momentum samples per realization for the spectral engine; 0 selects
    /// the exact quadrature grid.
    pub spectral_samples: u32,
}

impl WalkConfig {
    pub fn validate(&self) -> Result<()> {
        match self.dimension {
            1 => {
                if self.coin_kind == CoinKind::Entangling {
                    return Err(WalkError::InvalidConfig(
                        "an entangling coin requires two dimensions".into(),
                    ));
                }
                if self.initial_coin.len() != 2 {
                    return Err(WalkError::InvalidConfig(format!(
                        "1-D initial coin state needs 2 components, got {}",
                        self.initial_coin.len()
                    )));
                }
            }
            2 => {
                if self.initial_coin.len() != 4 {
                    return Err(WalkError::InvalidConfig(format!(
                        "2-D initial coin state needs 4 components, got {}",
                        self.initial_coin.len()
                    )));
                }
            }
            d => {
                return Err(WalkError::InvalidConfig(format!(
                    "dimension must be 1 or 2, got {d}"
                )))
            }
        }
        QExpParams::new(self.q1, 1)
            .map_err(|_| WalkError::InvalidConfig(format!("invalid q1 = {}", self.q1)))?;
        if self.dimension == 2 {
            QExpParams::new(self.q2, 1).map_err(|_| {
                WalkError::InvalidConfig(format!("invalid q2 = {}", self.q2))
            })?;
        }
        if self.t_max == 0 {
            return Err(WalkError::InvalidConfig("t_max must be at least 1".into()));
        }
        if self.plan.stride == 0 || self.plan.coherence_stride == 0 {
            return Err(WalkError::InvalidConfig(
                "observable strides must be at least 1".into(),
            ));
        }
        let norm: f64 = self.initial_coin.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(WalkError::InvalidConfig(format!(
                "initial coin state is not normalized (norm² = {norm})"
            )));
        }
        Ok(())
    }

    /// The composite 4×4 coin for a 2-D run.
    pub fn coin_matrix(&self) -> Result<CoinMatrix4> {
        let a = build_c2(self.coin1)?;
        let b = build_c2(self.coin2)?;
        match self.coin_kind {
            CoinKind::Separable => separable_coin(&a, &b),
            CoinKind::Entangling => entangling_coin(&a, &b),
        }
    }
}

/// The realized step sizes of one disorder realization, indexable by step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisorderSequence {
    /// d1[s-1] is Δ1 at step s.
    pub d1: Vec<u32>,
    /// d2[s-1] is Δ2 at step s; empty in 1-D.
    pub d2: Vec<u32>,
}

/// Draws the full disorder realization up front. At each step s the support
/// is {1, …, s}; in 2-D, Δ1 is drawn before Δ2, consuming exactly two
/// uniform variates per step (one in 1-D).
pub fn draw_disorder(config: &WalkConfig, realization: u64) -> Result<DisorderSequence> {
    let mut rng = stream_rng(config.seed, realization, Stream::Disorder);
    let mut d1 = Vec::with_capacity(config.t_max as usize);
    let mut d2 = Vec::new();
    if config.dimension == 2 {
        d2.reserve(config.t_max as usize);
    }
    for s in 1..=config.t_max {
        d1.push(sample(QExpParams::new(config.q1, s)?, &mut rng)?);
        if config.dimension == 2 {
            d2.push(sample(QExpParams::new(config.q2, s)?, &mut rng)?);
        }
    }
    Ok(DisorderSequence { d1, d2 })
}

/// Output of one sparse 2-D realization.
#[derive(Debug)]
pub struct RunOutput {
    pub records: Vec<ObservableRecord>,
    pub disorder: DisorderSequence,
    pub final_state: SparseState,
}

/// Output of one sparse 1-D realization.
#[derive(Debug)]
pub struct RunOutput1D {
    pub records: Vec<ObservableRecord>,
    pub disorder: DisorderSequence,
    pub final_state: SparseState1D,
}

fn record_2d(state: &SparseState, plan: &ObservablePlan, t: u32) -> Result<ObservableRecord> {
    let mut rec = ObservableRecord {
        t,
        ..ObservableRecord::default()
    };
    let due = t % plan.stride == 0 || t == 0;
    let entanglement_due =
        due && plan.entanglement_t_cap.map_or(true, |cap| t <= cap);
    if due && plan.variances {
        let (m1, m2) = marginals_of_state(state);
        let v1 = variance(&m1);
        let v2 = variance(&m2);
        rec.var_x1 = Some(v1);
        rec.var_x2 = Some(v2);
        rec.var_r = Some(v1 + v2);
    }
    if due && plan.trace_distance {
        let joint = state.joint_distribution();
        let prod = product_of_marginals(&joint);
        rec.trace_distance = Some(trace_distance(&joint, &prod));
    }
    if entanglement_due && (plan.entropies || plan.negativity) {
        let rho_c = reduced_coin_density(state)?;
        if plan.entropies {
            rec.entropy_c = Some(entanglement_entropy(&rho_c)?);
            let (r1, r2) = subcoin_densities(&rho_c)?;
            rec.entropy_c1 = Some(entanglement_entropy(&r1)?);
            rec.entropy_c2 = Some(entanglement_entropy(&r2)?);
        }
        if plan.negativity {
            rec.negativity = Some(negativity(&rho_c)?);
        }
    }
    if plan.coherence && t >= 1 && t % plan.coherence_stride == 0 {
        let rho_x1 = reduced_position_density_x1(state)?;
        rec.coherence_x1 = Some(l1_coherence(&rho_x1, t)?);
    }
    Ok(rec)
}

/// Runs one 2-D realization with the sparse engine, recording observables
/// at t = 0 and every step thereafter per the plan's strides.
pub fn run(config: &WalkConfig, realization: u64) -> Result<RunOutput> {
    config.validate()?;
    if config.dimension != 2 {
        return Err(WalkError::InvalidConfig(
            "run() is the 2-D driver; use run_1d() for dimension 1".into(),
        ));
    }
    let coin = config.coin_matrix()?;
    let disorder = draw_disorder(config, realization)?;
    let init: [Complex64; 4] = [
        config.initial_coin[0],
        config.initial_coin[1],
        config.initial_coin[2],
        config.initial_coin[3],
    ];
    let mut state = SparseState::init_localized(Site::new(0, 0), init)?;
    let mut records = Vec::with_capacity(config.t_max as usize + 1);
    records.push(record_2d(&state, &config.plan, 0)?);
    for s in 1..=config.t_max {
        state.apply_coin(&coin);
        state.apply_shift(disorder.d1[(s - 1) as usize], disorder.d2[(s - 1) as usize]);
        let drift = (state.norm_sq() - 1.0).abs();
        if drift > 1e-10 {
            return Err(WalkError::InvalidState(format!(
                "norm drift {drift:.3e} at step {s}"
            )));
        }
        records.push(record_2d(&state, &config.plan, s)?);
    }
    Ok(RunOutput {
        records,
        disorder,
        final_state: state,
    })
}

/// Runs one 1-D realization (single 2×2 coin, disorder from `q1`).
pub fn run_1d(config: &WalkConfig, realization: u64) -> Result<RunOutput1D> {
    config.validate()?;
    if config.dimension != 1 {
        return Err(WalkError::InvalidConfig(
            "run_1d() requires dimension 1".into(),
        ));
    }
    let coin = build_c2(config.coin1)?;
    let disorder = draw_disorder(config, realization)?;
    let init = [config.initial_coin[0], config.initial_coin[1]];
    let mut state = SparseState1D::init_localized(0, init)?;
    let mut records = Vec::with_capacity(config.t_max as usize + 1);
    records.push(record_1d(&state, &config.plan, 0)?);
    for s in 1..=config.t_max {
        state.apply_coin(&coin);
        state.apply_shift(disorder.d1[(s - 1) as usize]);
        let drift = (state.norm_sq() - 1.0).abs();
        if drift > 1e-10 {
            return Err(WalkError::InvalidState(format!(
                "norm drift {drift:.3e} at step {s}"
            )));
        }
        records.push(record_1d(&state, &config.plan, s)?);
    }
    Ok(RunOutput1D {
        records,
        disorder,
        final_state: state,
    })
}

fn record_1d(
    state: &SparseState1D,
    plan: &ObservablePlan,
    t: u32,
) -> Result<ObservableRecord> {
    let mut rec = ObservableRecord {
        t,
        ..ObservableRecord::default()
    };
    let due = t % plan.stride == 0 || t == 0;
    if due && plan.variances {
        let v = variance(&state.distribution());
        rec.var_x1 = Some(v);
        rec.var_r = Some(v);
    }
    if due && plan.entropies && plan.entanglement_t_cap.map_or(true, |cap| t <= cap) {
        let rho = reduced_coin_density_1d(state)?;
        rec.entropy_c = Some(entanglement_entropy(&rho)?);
    }
    Ok(rec)
}

/// Element-wise mean of per-realization records: each field averages over
/// the realizations where it is present, staying absent if absent in all.
pub fn mean_records(all: &[Vec<ObservableRecord>]) -> Vec<ObservableRecord> {
    if all.is_empty() {
        return Vec::new();
    }
    let len = all.iter().map(Vec::len).min().unwrap_or(0);
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let t = all[0][i].t;
        let mut rec = ObservableRecord {
            t,
            ..ObservableRecord::default()
        };
        let fields: [(&dyn Fn(&ObservableRecord) -> Option<f64>, &mut Option<f64>); 9] = [
            (&|r| r.var_x1, &mut rec.var_x1),
            (&|r| r.var_x2, &mut rec.var_x2),
            (&|r| r.var_r, &mut rec.var_r),
            (&|r| r.trace_distance, &mut rec.trace_distance),
            (&|r| r.entropy_c, &mut rec.entropy_c),
            (&|r| r.entropy_c1, &mut rec.entropy_c1),
            (&|r| r.entropy_c2, &mut rec.entropy_c2),
            (&|r| r.negativity, &mut rec.negativity),
            (&|r| r.coherence_x1, &mut rec.coherence_x1),
        ];
        for (get, slot) in fields {
            let vals: Vec<f64> = all.iter().filter_map(|run| get(&run[i])).collect();
            if !vals.is_empty() {
                *slot = Some(vals.iter().sum::<f64>() / vals.len() as f64);
            }
        }
        out.push(rec);
    }
    out
}

/// Time-series extraction helper: (t, value) pairs for one field.
pub fn series(
    records: &[ObservableRecord],
    get: impl Fn(&ObservableRecord) -> Option<f64>,
) -> Vec<(u32, f64)> {
    records
        .iter()
        .filter_map(|r| get(r).map(|v| (r.t, v)))
        .collect()
}

/// Fit window conventions over a series ending at t_max: "full" starts at
/// t = 10, "asymptotic" at ⌈t_max/2⌉.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitWindow {
    Full,
    Asymptotic,
}

impl FitWindow {
    pub fn bounds(self, t_max: u32) -> (u32, u32) {
        match self {
            FitWindow::Full => (10, t_max),
            FitWindow::Asymptotic => (t_max.div_ceil(2), t_max),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub(crate) fn base_config() -> WalkConfig {
        WalkConfig {
            dimension: 2,
            q1: 0.5,
            q2: 0.5,
            coin_kind: CoinKind::Separable,
            coin1: CoinParams::kempe(FRAC_PI_4).unwrap(),
            coin2: CoinParams::kempe(FRAC_PI_4).unwrap(),
            initial_coin: vec![c(0.5, 0.0); 4],
            t_max: 10,
            seed: 11,
            plan: ObservablePlan::default(),
            engine: Engine::Sparse,
            spectral_samples: 0,
        }
    }

    #[test]
    fn config_validation() {
        assert!(base_config().validate().is_ok());

        let mut cfg = base_config();
        cfg.dimension = 1;
        assert!(cfg.validate().is_err()); // 4-component coin in 1-D

        cfg.initial_coin = vec![c(1.0, 0.0), c(0.0, 0.0)];
        assert!(cfg.validate().is_ok());
        cfg.coin_kind = CoinKind::Entangling;
        assert!(cfg.validate().is_err()); // entangling needs 2-D

        let mut cfg = base_config();
        cfg.q1 = 0.0;
        assert!(cfg.validate().is_err());

        let mut cfg = base_config();
        cfg.initial_coin = vec![c(1.0, 0.0); 4];
        assert!(cfg.validate().is_err()); // unnormalized

        let mut cfg = base_config();
        cfg.dimension = 3;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn q_half_disorder_is_all_unit_steps() {
        let cfg = base_config();
        let d = draw_disorder(&cfg, 0).unwrap();
        assert!(d.d1.iter().all(|&x| x == 1));
        assert!(d.d2.iter().all(|&x| x == 1));
        assert_eq!(d.d1.len(), 10);
    }

    #[test]
    fn disorder_respects_growing_support() {
        let mut cfg = base_config();
        cfg.q1 = f64::INFINITY;
        cfg.q2 = f64::INFINITY;
        cfg.t_max = 50;
        let d = draw_disorder(&cfg, 0).unwrap();
        for (i, (&a, &b)) in d.d1.iter().zip(&d.d2).enumerate() {
            let s = i as u32 + 1;
            assert!(a >= 1 && a <= s);
            assert!(b >= 1 && b <= s);
        }
        // With a uniform distribution over a growing support some draw
        // should exceed 1 by step 50.
        assert!(d.d1.iter().any(|&x| x > 1));
    }

    #[test]
    fn disorder_is_deterministic_and_split_by_realization() {
        let mut cfg = base_config();
        cfg.q1 = 2.0;
        cfg.q2 = f64::INFINITY;
        cfg.t_max = 40;
        let a = draw_disorder(&cfg, 0).unwrap();
        let b = draw_disorder(&cfg, 0).unwrap();
        let c = draw_disorder(&cfg, 1).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn interleaved_draw_order_is_d1_then_d2() {
        // Drawing Δ1 and Δ2 interleaved must match two manual draws per
        // step from the same stream, in that order.
        let mut cfg = base_config();
        cfg.q1 = f64::INFINITY;
        cfg.q2 = 2.0;
        cfg.t_max = 30;
        let d = draw_disorder(&cfg, 3).unwrap();
        let mut rng = stream_rng(cfg.seed, 3, Stream::Disorder);
        for s in 1..=cfg.t_max {
            let e1 = sample(QExpParams::new(cfg.q1, s).unwrap(), &mut rng).unwrap();
            let e2 = sample(QExpParams::new(cfg.q2, s).unwrap(), &mut rng).unwrap();
            assert_eq!(d.d1[(s - 1) as usize], e1);
            assert_eq!(d.d2[(s - 1) as usize], e2);
        }
    }

    #[test]
    fn standard_walk_variance_after_one_step_is_one() {
        let mut cfg = base_config();
        cfg.t_max = 1;
        let out = run(&cfg, 0).unwrap();
        let rec = &out.records[1];
        assert!((rec.var_x1.unwrap() - 1.0).abs() < 1e-12);
        assert!((rec.var_x2.unwrap() - 1.0).abs() < 1e-12);
        assert!((rec.var_r.unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn separable_run_keeps_joint_equal_to_product_of_marginals() {
        let mut cfg = base_config();
        cfg.q1 = f64::INFINITY;
        cfg.q2 = 2.0;
        cfg.t_max = 12;
        let out = run(&cfg, 0).unwrap();
        for rec in &out.records {
            assert!(
                rec.trace_distance.unwrap() < 1e-10,
                "t={}: D={:?}",
                rec.t,
                rec.trace_distance
            );
        }
    }

    #[test]
    fn entangling_run_correlates_directions() {
        let mut cfg = base_config();
        cfg.coin_kind = CoinKind::Entangling;
        cfg.q1 = f64::INFINITY;
        cfg.q2 = f64::INFINITY;
        cfg.t_max = 12;
        // The uniform superposition is a CNOT fixed point; start from a
        // product state the CNOT acts on nontrivially.
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        cfg.initial_coin = vec![c(inv, 0.0), c(0.0, inv), c(0.0, 0.0), c(0.0, 0.0)];
        let out = run(&cfg, 0).unwrap();
        let d_last = out.records.last().unwrap().trace_distance.unwrap();
        assert!(d_last > 1e-3, "expected correlations, D = {d_last}");
        // The directional correlations are classical as far as the subcoins
        // are concerned: the coin state stays PPT, so negativity is zero
        // even though the joint distribution no longer factorizes.
        let n_last = out.records.last().unwrap().negativity.unwrap();
        assert!(n_last < 1e-10, "subcoins should stay unentangled, N = {n_last}");
        let s_last = out.records.last().unwrap().entropy_c.unwrap();
        assert!(s_last > 1.0, "coin-position entanglement expected, S = {s_last}");
    }

    #[test]
    fn separable_coin_produces_zero_negativity_from_product_input() {
        // Product initial coin + separable coin: the two subcoins never
        // entangle, so negativity stays 0 throughout.
        let mut cfg = base_config();
        cfg.t_max = 15;
        let out = run(&cfg, 0).unwrap();
        for rec in &out.records {
            assert!(rec.negativity.unwrap() < 1e-10, "t={}", rec.t);
        }
    }

    #[test]
    fn factorized_2d_matches_two_1d_walks() {
        // Separable coin with a product initial state: the x1 marginal must
        // equal a 1-D walk with the first subcoin, sharing Δ1 draws.
        let mut cfg = base_config();
        cfg.q1 = 1.5;
        cfg.q2 = 3.0;
        cfg.t_max = 10;
        let out2 = run(&cfg, 0).unwrap();
        let (m1, _) = marginals_of_state(&out2.final_state);

        let coin = build_c2(cfg.coin1).unwrap();
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let mut s1 = SparseState1D::init_localized(0, [c(inv, 0.0), c(inv, 0.0)]).unwrap();
        for s in 1..=cfg.t_max {
            s1.apply_coin(&coin);
            s1.apply_shift(out2.disorder.d1[(s - 1) as usize]);
        }
        let d1 = s1.distribution();
        for (&x, &p) in &m1 {
            assert!(
                (p - d1.get(&x).copied().unwrap_or(0.0)).abs() < 1e-12,
                "x={x}"
            );
        }
    }

    #[test]
    fn runs_are_reproducible() {
        let mut cfg = base_config();
        cfg.q1 = f64::INFINITY;
        cfg.q2 = 2.0;
        cfg.coin_kind = CoinKind::Entangling;
        cfg.t_max = 8;
        let a = run(&cfg, 2).unwrap();
        let b = run(&cfg, 2).unwrap();
        assert_eq!(a.disorder, b.disorder);
        for (ra, rb) in a.records.iter().zip(&b.records) {
            assert_eq!(ra.var_r, rb.var_r);
            assert_eq!(ra.trace_distance, rb.trace_distance);
        }
    }

    #[test]
    fn plan_strides_and_caps_control_record_density() {
        let mut cfg = base_config();
        cfg.t_max = 12;
        cfg.plan.stride = 3;
        cfg.plan.coherence = true;
        cfg.plan.coherence_stride = 4;
        cfg.plan.entanglement_t_cap = Some(6);
        let out = run(&cfg, 0).unwrap();
        for rec in &out.records {
            let due = rec.t % 3 == 0;
            assert_eq!(rec.var_x1.is_some(), due, "t={}", rec.t);
            let ent_due = due && rec.t <= 6;
            assert_eq!(rec.entropy_c.is_some(), ent_due, "t={}", rec.t);
            let coh_due = rec.t >= 1 && rec.t % 4 == 0;
            assert_eq!(rec.coherence_x1.is_some(), coh_due, "t={}", rec.t);
        }
    }

    #[test]
    fn mean_records_averages_present_fields() {
        let mut a = ObservableRecord {
            t: 5,
            ..Default::default()
        };
        a.var_x1 = Some(2.0);
        let mut b = ObservableRecord {
            t: 5,
            ..Default::default()
        };
        b.var_x1 = Some(4.0);
        b.negativity = Some(0.5);
        let mean = mean_records(&[vec![a], vec![b]]);
        assert_eq!(mean[0].var_x1, Some(3.0));
        // Present in only one realization still averages over that one.
        assert_eq!(mean[0].negativity, Some(0.5));
        assert_eq!(mean[0].entropy_c, None);
    }

    #[test]
    fn fit_window_conventions() {
        assert_eq!(FitWindow::Full.bounds(500), (10, 500));
        assert_eq!(FitWindow::Asymptotic.bounds(500), (250, 500));
        assert_eq!(FitWindow::Asymptotic.bounds(201), (101, 201));
    }

    #[test]
    fn one_d_hadamard_walk_is_ballistic() {
        let mut cfg = base_config();
        cfg.dimension = 1;
        cfg.coin1 = CoinParams::hadamard();
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        cfg.initial_coin = vec![c(inv, 0.0), c(0.0, inv)];
        cfg.t_max = 100;
        let out = run_1d(&cfg, 0).unwrap();
        let var_series = series(&out.records, |r| r.var_x1);
        let fit = crate::observables::fit_dynamical_exponent(
            &var_series,
            FitWindow::Asymptotic.bounds(cfg.t_max),
        )
        .unwrap();
        assert!((fit.exponent - 2.0).abs() < 0.05, "alpha = {}", fit.exponent);
    }
}
