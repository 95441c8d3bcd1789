//! Independent cross-checks of the sparse engine.
//!
//! - [`DenseState`]: a bounded dense-array evolution that errors instead of
//!   wrapping when amplitude reaches the boundary; a structurally different
//!   implementation used to corroborate the sparse engine.
//! - [`separability_oracle`]: for separable coins and product initial coin
//!   states, verifies the joint distribution factorizes into its marginals
//!   at every step.
//! - [`kraus_decompose`] / [`channel_apply`]: the effective quantum channel
//!   on the (x1, σ1) subsystem obtained by tracing out the second
//!   direction, represented by explicit Kraus operators.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::coin::CoinMatrix4;
use crate::error::{Result, WalkError};
use crate::evolve::{draw_disorder, CoinKind, WalkConfig};
use crate::observables::{product_of_marginals, trace_distance};
use crate::state::{Site, SparseState};

/// Dense state on the square window x1, x2 ∈ [−l, l] with 4 coin
/// components. Shifts that would carry amplitude past the boundary fail
/// with [`WalkError::LatticeTooSmall`]; amplitude never wraps.
#[derive(Debug, Clone)]
pub struct DenseState {
    l: i64,
    side: usize,
    /// Layout: ((x1 + l)·side + (x2 + l))·4 + σ.
    data: Vec<Complex64>,
    time: u32,
}

impl DenseState {
    pub fn new(l: i64, origin: Site, coin: [Complex64; 4]) -> Result<Self> {
        if l < 1 {
            return Err(WalkError::InvalidParameter(
                "dense window half-width must be at least 1".into(),
            ));
        }
        if origin.x1.abs() > l || origin.x2.abs() > l {
            return Err(WalkError::InvalidState(format!(
                "origin ({}, {}) outside window [-{l}, {l}]",
                origin.x1, origin.x2
            )));
        }
        let norm: f64 = coin.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(WalkError::InvalidState(format!(
                "initial coin state is not normalized (norm² = {norm})"
            )));
        }
        let side = (2 * l + 1) as usize;
        let mut data = vec![Complex64::ZERO; side * side * 4];
        let base = (((origin.x1 + l) as usize) * side + (origin.x2 + l) as usize) * 4;
        data[base..base + 4].copy_from_slice(&coin);
        Ok(Self {
            l,
            side,
            data,
            time: 0,
        })
    }

    pub fn time(&self) -> u32 {
        self.time
    }

    pub fn amplitude(&self, site: Site) -> [Complex64; 4] {
        if site.x1.abs() > self.l || site.x2.abs() > self.l {
            return [Complex64::ZERO; 4];
        }
        let base =
            (((site.x1 + self.l) as usize) * self.side + (site.x2 + self.l) as usize) * 4;
        [
            self.data[base],
            self.data[base + 1],
            self.data[base + 2],
            self.data[base + 3],
        ]
    }

    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply_coin(&mut self, coin: &CoinMatrix4) {
        for chunk in self.data.chunks_exact_mut(4) {
            let v = [chunk[0], chunk[1], chunk[2], chunk[3]];
            chunk.copy_from_slice(&coin.apply(&v));
        }
    }

    /// Shifts component σ = (σ1, σ2) by (±d1, ±d2) with sign + for the up
    /// component of each subcoin.
    pub fn apply_shift(&mut self, d1: u32, d2: u32) -> Result<()> {
        let (d1, d2) = (i64::from(d1), i64::from(d2));
        let moves = [(d1, d2), (d1, -d2), (-d1, d2), (-d1, -d2)];
        let mut out = vec![Complex64::ZERO; self.data.len()];
        for x1 in -self.l..=self.l {
            for x2 in -self.l..=self.l {
                let base = (((x1 + self.l) as usize) * self.side + (x2 + self.l) as usize) * 4;
                for (s, (m1, m2)) in moves.iter().enumerate() {
                    let a = self.data[base + s];
                    if a == Complex64::ZERO {
                        continue;
                    }
                    let (y1, y2) = (x1 + m1, x2 + m2);
                    if y1.abs() > self.l || y2.abs() > self.l {
                        return Err(WalkError::LatticeTooSmall {
                            bound: y1.abs().max(y2.abs()),
                            step: self.time + 1,
                        });
                    }
                    let target =
                        (((y1 + self.l) as usize) * self.side + (y2 + self.l) as usize) * 4;
                    out[target + s] += a;
                }
            }
        }
        self.data = out;
        self.time += 1;
        Ok(())
    }
}

/// Evolves `config` for `t_max` steps on a dense window, drawing the same
/// disorder realization as the sparse engine.
pub fn dense_evolve(config: &WalkConfig, realization: u64, l: i64) -> Result<DenseState> {
    config.validate()?;
    if config.dimension != 2 {
        return Err(WalkError::InvalidConfig(
            "dense cross-check is 2-D only".into(),
        ));
    }
    let coin = config.coin_matrix()?;
    let disorder = draw_disorder(config, realization)?;
    let init = [
        config.initial_coin[0],
        config.initial_coin[1],
        config.initial_coin[2],
        config.initial_coin[3],
    ];
    let mut state = DenseState::new(l, Site::new(0, 0), init)?;
    for s in 1..=config.t_max {
        state.apply_coin(&coin);
        state.apply_shift(
            disorder.d1[(s - 1) as usize],
            disorder.d2[(s - 1) as usize],
        )?;
    }
    Ok(state)
}

/// Checks the factorization theorem on a concrete run: with a separable
/// coin and a product initial coin state, the joint distribution must equal
/// the product of its marginals at every step. Returns the maximum trace
/// distance observed; entangling coins and non-product initial states are
/// rejected as out of scope.
pub fn separability_oracle(config: &WalkConfig, realization: u64) -> Result<f64> {
    config.validate()?;
    if config.coin_kind != CoinKind::Separable {
        return Err(WalkError::RejectedInput(
            "separability oracle applies only to separable coins".into(),
        ));
    }
    if config.dimension != 2 {
        return Err(WalkError::RejectedInput(
            "separability oracle applies only to 2-D walks".into(),
        ));
    }
    // A 4-component coin state is a product iff ψ00·ψ11 = ψ01·ψ10.
    let c = &config.initial_coin;
    if (c[0] * c[3] - c[1] * c[2]).norm() > 1e-12 {
        return Err(WalkError::RejectedInput(
            "separability oracle requires a product initial coin state".into(),
        ));
    }
    let coin = config.coin_matrix()?;
    let disorder = draw_disorder(config, realization)?;
    let mut state =
        SparseState::init_localized(Site::new(0, 0), [c[0], c[1], c[2], c[3]])?;
    let mut max_d: f64 = 0.0;
    for s in 1..=config.t_max {
        state.apply_coin(&coin);
        state.apply_shift(
            disorder.d1[(s - 1) as usize],
            disorder.d2[(s - 1) as usize],
        );
        let joint = state.joint_distribution();
        let prod = product_of_marginals(&joint);
        max_d = max_d.max(trace_distance(&joint, &prod));
    }
    Ok(max_d)
}

/// Kraus representation of the effective channel on the (x1, σ1)
/// subsystem after `config.t_max` steps of a fixed disorder realization,
/// with the second direction initialized at x2 = 0 in the subcoin state
/// `chi2`.
///
/// Inputs live on x1 ∈ [−l0, l0] (index 2·(x1 + l0) + σ1); outputs on
/// x1 ∈ [−l0 − r, l0 + r] with r = Σ_t Δ1, so no truncation occurs and
/// completeness Σ E†E = I holds exactly.
#[derive(Debug)]
pub struct KrausSet {
    /// One operator per retained (x2, σ2) outcome, each (output dim) × (input dim).
    pub operators: Vec<DMatrix<Complex64>>,
    /// The (x2, σ2) label of each retained operator.
    pub labels: Vec<(i64, usize)>,
    pub input_halfwidth: i64,
    pub output_halfwidth: i64,
}

impl KrausSet {
    pub fn input_dim(&self) -> usize {
        (2 * self.input_halfwidth + 1) as usize * 2
    }

    pub fn output_dim(&self) -> usize {
        (2 * self.output_halfwidth + 1) as usize * 2
    }
}

/// Builds the Kraus operators by evolving each (x1, σ1) basis input through
/// the full 2-D walk and reading off ⟨x2, σ2| components. Verifies
/// completeness Σ E†E = I within 1e-10, then drops operators with
/// Frobenius norm below 1e-14.
pub fn kraus_decompose(
    config: &WalkConfig,
    realization: u64,
    l0: i64,
    chi2: [Complex64; 2],
) -> Result<KrausSet> {
    config.validate()?;
    if config.dimension != 2 {
        return Err(WalkError::InvalidConfig(
            "channel extraction is 2-D only".into(),
        ));
    }
    let chi_norm: f64 = chi2.iter().map(|a| a.norm_sqr()).sum();
    if (chi_norm - 1.0).abs() > 1e-12 {
        return Err(WalkError::InvalidState(
            "second-direction subcoin state is not normalized".into(),
        ));
    }
    let coin = config.coin_matrix()?;
    let disorder = draw_disorder(config, realization)?;
    let r: i64 = disorder.d1.iter().map(|&d| i64::from(d)).sum();
    let r2: i64 = disorder.d2.iter().map(|&d| i64::from(d)).sum();
    let lo = l0 + r;
    let in_dim = (2 * l0 + 1) as usize * 2;
    let out_dim = (2 * lo + 1) as usize * 2;

    // raw[(x2, s2)] is a matrix of ⟨x1_out, σ1; x2, σ2| U |x1_in, σ1_in⟩⊗|0, χ2⟩.
    let mut raw: std::collections::BTreeMap<(i64, usize), DMatrix<Complex64>> =
        std::collections::BTreeMap::new();
    for x1_in in -l0..=l0 {
        for s1_in in 0..2usize {
            let col = 2 * (x1_in + l0) as usize + s1_in;
            let mut coin4 = [Complex64::ZERO; 4];
            coin4[2 * s1_in] = chi2[0];
            coin4[2 * s1_in + 1] = chi2[1];
            let mut state = SparseState::init_localized(Site::new(x1_in, 0), coin4)?;
            for s in 1..=config.t_max {
                state.apply_coin(&coin);
                state.apply_shift(
                    disorder.d1[(s - 1) as usize],
                    disorder.d2[(s - 1) as usize],
                );
            }
            for (site, v) in state.iter() {
                debug_assert!(site.x1.abs() <= lo && site.x2.abs() <= r2);
                for s1_out in 0..2usize {
                    for s2_out in 0..2usize {
                        let a = v[2 * s1_out + s2_out];
                        if a == Complex64::ZERO {
                            continue;
                        }
                        let row = 2 * (site.x1 + lo) as usize + s1_out;
                        raw.entry((site.x2, s2_out))
                            .or_insert_with(|| DMatrix::zeros(out_dim, in_dim))
                            [(row, col)] = a;
                    }
                }
            }
        }
    }

    // Completeness over all extracted operators.
    let mut gram = DMatrix::<Complex64>::zeros(in_dim, in_dim);
    for e in raw.values() {
        gram += e.adjoint() * e;
    }
    let mut dev: f64 = 0.0;
    for i in 0..in_dim {
        for j in 0..in_dim {
            let expect = if i == j { Complex64::ONE } else { Complex64::ZERO };
            dev = dev.max((gram[(i, j)] - expect).norm());
        }
    }
    if dev > 1e-10 {
        return Err(WalkError::InvalidState(format!(
            "Kraus completeness violated: max |ΣE†E - I| = {dev:.3e}"
        )));
    }

    let mut operators = Vec::new();
    let mut labels = Vec::new();
    for ((x2, s2), e) in raw {
        if e.norm() >= 1e-14 {
            operators.push(e);
            labels.push((x2, s2));
        }
    }
    Ok(KrausSet {
        operators,
        labels,
        input_halfwidth: l0,
        output_halfwidth: lo,
    })
}

/// Applies the channel: ρ_out = Σ_j E_j ρ_in E_j†.
pub fn channel_apply(kraus: &KrausSet, rho_in: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let m = kraus.input_dim();
    if rho_in.nrows() != m || rho_in.ncols() != m {
        return Err(WalkError::DimensionMismatch(format!(
            "channel input must be {m}x{m}, got {}x{}",
            rho_in.nrows(),
            rho_in.ncols()
        )));
    }
    let n = kraus.output_dim();
    let mut out = DMatrix::<Complex64>::zeros(n, n);
    for e in &kraus.operators {
        out += e * rho_in * e.adjoint();
    }
    Ok(out)
}
