//! Quantitative diagnostics: distributions, variances, power-law exponent
//! fits, classical trace distance, reduced density matrices, entanglement
//! entropy, negativity and the time-normalized l1 coherence.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustc_hash::FxHashMap;

use crate::error::{Result, WalkError};
use crate::state::{Site, SparseState, SparseState1D};

/// Eigenvalues below this cutoff contribute 0 to the entropy (0·log 0 := 0).
const ENTROPY_EIG_CUTOFF: f64 = 1e-12;
/// Eigenvalues may undershoot zero by at most this much before the matrix is
/// rejected as an invalid density operator.
const EIG_NEGATIVE_TOL: f64 = 1e-10;

/// What the row/column indices of a [`DensityMatrix`] refer to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Basis {
    /// The composite coin basis |↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩.
    Coin4,
    /// A single subcoin basis |↑⟩, |↓⟩.
    Coin2,
    /// Sorted occupied x1 coordinates.
    PositionX1(Vec<i64>),
    /// Sorted occupied x1 coordinates tensored with the first subcoin:
    /// index = 2·(position index) + σ1.
    DirectionX1(Vec<i64>),
}

/// A dense Hermitian reduced density matrix.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    pub data: DMatrix<Complex64>,
    pub basis: Basis,
}

impl DensityMatrix {
    /// Builds and validates: Hermitian within 1e-12, trace 1 ± 1e-10,
    /// eigenvalues ≥ −1e-10.
    pub fn new(data: DMatrix<Complex64>, basis: Basis) -> Result<Self> {
        let dm = Self { data, basis };
        dm.validate()?;
        Ok(dm)
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.data.nrows();
        if self.data.ncols() != n {
            return Err(WalkError::InvalidDensity("matrix is not square".into()));
        }
        for i in 0..n {
            for j in i..n {
                let dev = (self.data[(i, j)] - self.data[(j, i)].conj()).norm();
                if dev > 1e-12 {
                    return Err(WalkError::InvalidDensity(format!(
                        "not Hermitian at ({i},{j}): deviation {dev:.3e}"
                    )));
                }
            }
        }
        let trace: Complex64 = (0..n).map(|i| self.data[(i, i)]).sum();
        if (trace.re - 1.0).abs() > 1e-10 || trace.im.abs() > 1e-10 {
            return Err(WalkError::InvalidDensity(format!(
                "trace is {trace}, expected 1"
            )));
        }
        let min = self
            .eigenvalues()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min < -EIG_NEGATIVE_TOL {
            return Err(WalkError::InvalidDensity(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(())
    }

    /// Real eigenvalues of the Hermitian matrix.
    pub fn eigenvalues(&self) -> Vec<f64> {
        if self.dim() == 1 {
            return vec![self.data[(0, 0)].re];
        }
        let eig = self.data.clone().symmetric_eigenvalues();
        eig.iter().copied().collect()
    }
}

/// Result of an ordinary least-squares fit of ln(y) against ln(t).
#[derive(Debug, Clone, Copy)]
pub struct FitResult {
    /// The fitted exponent (slope for variance fits, −slope for coherence
    /// decay fits).
    pub exponent: f64,
    pub intercept: f64,
    pub window: (u32, u32),
    /// Root mean square of the log residuals.
    pub residual: f64,
}

/// Marginal position distributions computed directly from a sparse state,
/// without materializing the joint distribution.
pub fn marginals_of_state(
    state: &SparseState,
) -> (BTreeMap<i64, f64>, BTreeMap<i64, f64>) {
    let mut m1 = BTreeMap::new();
    let mut m2 = BTreeMap::new();
    for (site, v) in state.iter() {
        let p: f64 = v.iter().map(|a| a.norm_sqr()).sum();
        *m1.entry(site.x1).or_insert(0.0) += p;
        *m2.entry(site.x2).or_insert(0.0) += p;
    }
    (m1, m2)
}

/// Marginal distributions of a joint 2-D position distribution.
pub fn marginals(
    joint: &BTreeMap<Site, f64>,
) -> (BTreeMap<i64, f64>, BTreeMap<i64, f64>) {
    let mut m1 = BTreeMap::new();
    let mut m2 = BTreeMap::new();
    for (site, p) in joint {
        *m1.entry(site.x1).or_insert(0.0) += p;
        *m2.entry(site.x2).or_insert(0.0) += p;
    }
    (m1, m2)
}

/// Variance of a 1-D distribution: Σx²p − (Σxp)².
pub fn variance(dist: &BTreeMap<i64, f64>) -> f64 {
    let mut mean = 0.0;
    let mut sq = 0.0;
    for (&x, &p) in dist {
        let xf = x as f64;
        mean += xf * p;
        sq += xf * xf * p;
    }
    sq - mean * mean
}

/// Excess kurtosis of a 1-D distribution: μ4/μ2² − 3.
pub fn excess_kurtosis(dist: &BTreeMap<i64, f64>) -> f64 {
    let mut mean = 0.0;
    for (&x, &p) in dist {
        mean += x as f64 * p;
    }
    let (mut m2, mut m4) = (0.0, 0.0);
    for (&x, &p) in dist {
        let d = x as f64 - mean;
        m2 += d * d * p;
        m4 += d * d * d * d * p;
    }
    m4 / (m2 * m2) - 3.0
}

/// Classical trace distance (1/2)Σ|p − q| over the union of supports.
pub fn trace_distance(p: &BTreeMap<Site, f64>, q: &BTreeMap<Site, f64>) -> f64 {
    let mut total = 0.0;
    for (site, pv) in p {
        total += (pv - q.get(site).copied().unwrap_or(0.0)).abs();
    }
    for (site, qv) in q {
        if !p.contains_key(site) {
            total += qv.abs();
        }
    }
    0.5 * total
}

/// The product of the joint distribution's marginals, as a joint
/// distribution over the product of their supports.
pub fn product_of_marginals(joint: &BTreeMap<Site, f64>) -> BTreeMap<Site, f64> {
    let (m1, m2) = marginals(joint);
    let mut out = BTreeMap::new();
    for (&x1, &p1) in &m1 {
        for (&x2, &p2) in &m2 {
            let p = p1 * p2;
            if p > 0.0 {
                out.insert(Site::new(x1, x2), p);
            }
        }
    }
    out
}

fn log_log_fit(series: &[(u32, f64)], window: (u32, u32)) -> Result<FitResult> {
    if window.0 >= window.1 {
        return Err(WalkError::InvalidParameter(format!(
            "fit window ({}, {}) must be increasing",
            window.0, window.1
        )));
    }
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|(t, v)| *t >= window.0 && *t <= window.1 && *t >= 1 && *v > 0.0)
        .map(|(t, v)| ((f64::from(*t)).ln(), v.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(WalkError::TooFewPoints { found: pts.len() });
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|(x, _)| x).sum();
    let sy: f64 = pts.iter().map(|(_, y)| y).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = pts.iter().map(|(x, y)| x * y).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let ss: f64 = pts
        .iter()
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    Ok(FitResult {
        exponent: slope,
        intercept,
        window,
        residual: (ss / n).sqrt(),
    })
}

/// Fits Var(t) ≈ t^α by least squares of ln(var) on ln(t) over the window.
/// Points with nonpositive variance are excluded; fewer than 3 usable points
/// is an error.
pub fn fit_dynamical_exponent(
    series: &[(u32, f64)],
    window: (u32, u32),
) -> Result<FitResult> {
    log_log_fit(series, window)
}

/// Fits C(t) ∝ t^{−β}; the returned exponent is β = −slope.
pub fn fit_coherence_decay(
    series: &[(u32, f64)],
    window: (u32, u32),
) -> Result<FitResult> {
    let mut fit = log_log_fit(series, window)?;
    fit.exponent = -fit.exponent;
    Ok(fit)
}

/// Reduced density matrix of the full 4-dimensional coin:
/// ρ_c[σ,σ′] = Σ_sites ψ(site,σ)·conj(ψ(site,σ′)).
pub fn reduced_coin_density(state: &SparseState) -> Result<DensityMatrix> {
    let mut rho = [[Complex64::ZERO; 4]; 4];
    for (_, v) in state.iter() {
        for s in 0..4 {
            for sp in 0..4 {
                rho[s][sp] += v[s] * v[sp].conj();
            }
        }
    }
    let data = DMatrix::from_fn(4, 4, |i, j| rho[i][j]);
    DensityMatrix::new(data, Basis::Coin4)
}

/// Reduced density matrix of a 1-D walk's 2-dimensional coin.
pub fn reduced_coin_density_1d(state: &SparseState1D) -> Result<DensityMatrix> {
    let mut rho = [[Complex64::ZERO; 2]; 2];
    for (_, v) in state.iter() {
        for s in 0..2 {
            for sp in 0..2 {
                rho[s][sp] += v[s] * v[sp].conj();
            }
        }
    }
    let data = DMatrix::from_fn(2, 2, |i, j| rho[i][j]);
    DensityMatrix::new(data, Basis::Coin2)
}

/// Subcoin reductions of the 4×4 coin density matrix: ρ_c1 traces out the
/// second subcoin, ρ_c2 the first. Index convention σ = 2σ1 + σ2.
pub fn subcoin_densities(rho_c: &DensityMatrix) -> Result<(DensityMatrix, DensityMatrix)> {
    if rho_c.dim() != 4 {
        return Err(WalkError::DimensionMismatch(
            "subcoin reduction requires a 4x4 coin density matrix".into(),
        ));
    }
    let m = &rho_c.data;
    let rho1 = DMatrix::from_fn(2, 2, |a, ap| m[(2 * a, 2 * ap)] + m[(2 * a + 1, 2 * ap + 1)]);
    let rho2 = DMatrix::from_fn(2, 2, |b, bp| m[(b, bp)] + m[(2 + b, 2 + bp)]);
    Ok((
        DensityMatrix::new(rho1, Basis::Coin2)?,
        DensityMatrix::new(rho2, Basis::Coin2)?,
    ))
}

/// Von Neumann entropy −Σ λ log₂ λ over eigenvalues above the 1e-12 cutoff.
pub fn entanglement_entropy(rho: &DensityMatrix) -> Result<f64> {
    let mut entropy = 0.0;
    for lambda in rho.eigenvalues() {
        if lambda < -EIG_NEGATIVE_TOL {
            return Err(WalkError::InvalidDensity(format!(
                "negative eigenvalue {lambda:.3e}"
            )));
        }
        if lambda > ENTROPY_EIG_CUTOFF {
            entropy -= lambda * lambda.log2();
        }
    }
    Ok(entropy)
}

/// Negativity (‖ρ^{T_1}‖₁ − 1)/2 of the 4×4 coin state, with the partial
/// transpose taken over the first subcoin.
pub fn negativity(rho_c: &DensityMatrix) -> Result<f64> {
    if rho_c.dim() != 4 {
        return Err(WalkError::DimensionMismatch(
            "negativity requires a 4x4 coin density matrix".into(),
        ));
    }
    // (a,b; c,d) -> (c,b; a,d) with index 2a + b.
    let m = &rho_c.data;
    let pt = DMatrix::from_fn(4, 4, |row, col| {
        let (a, b) = (row / 2, row % 2);
        let (c, d) = (col / 2, col % 2);
        m[(2 * c + b, 2 * a + d)]
    });
    let trace_norm: f64 = pt
        .symmetric_eigenvalues()
        .iter()
        .map(|l| l.abs())
        .sum();
    let val = 0.5 * (trace_norm - 1.0);
    Ok(if val < 0.0 { 0.0 } else { val })
}

fn sorted_x1_index(state: &SparseState) -> (Vec<i64>, FxHashMap<i64, usize>) {
    let mut xs: Vec<i64> = {
        let mut set: Vec<i64> = state.iter().map(|(s, _)| s.x1).collect();
        set.sort_unstable();
        set.dedup();
        set
    };
    xs.shrink_to_fit();
    let index: FxHashMap<i64, usize> = xs.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    (xs, index)
}

/// Accumulates rho += v v† for the filled entries of a column vector,
/// upper triangle only.
fn herk_column(rho: &mut [Complex64], n: usize, entries: &[(usize, Complex64)]) {
    for (ii, &(i, a)) in entries.iter().enumerate() {
        let row = i * n;
        for &(j, b) in &entries[ii..] {
            rho[row + j] += a * b.conj();
        }
    }
}

fn mirror_lower(rho: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            rho[j * n + i] = rho[i * n + j].conj();
        }
    }
}

/// Reduced density matrix over the first direction's position:
/// ρ_{x1}[x,x′] = Σ_{x2,σ} ψ((x,x2),σ)·conj(ψ((x′,x2),σ)), with basis
/// labels sorted ascending.
pub fn reduced_position_density_x1(state: &SparseState) -> Result<DensityMatrix> {
    let (xs, index) = sorted_x1_index(state);
    let n = xs.len();
    let mut groups: FxHashMap<i64, Vec<(usize, [Complex64; 4])>> = FxHashMap::default();
    for (site, v) in state.iter() {
        groups
            .entry(site.x2)
            .or_default()
            .push((index[&site.x1], *v));
    }
    let mut rho = vec![Complex64::ZERO; n * n];
    let mut column: Vec<(usize, Complex64)> = Vec::new();
    for entries in groups.values_mut() {
        entries.sort_unstable_by_key(|(i, _)| *i);
        for s in 0..4 {
            column.clear();
            for &(i, v) in entries.iter() {
                if v[s] != Complex64::ZERO {
                    column.push((i, v[s]));
                }
            }
            herk_column(&mut rho, n, &column);
        }
    }
    mirror_lower(&mut rho, n);
    let data = DMatrix::from_fn(n, n, |i, j| rho[i * n + j]);
    DensityMatrix::new(data, Basis::PositionX1(xs))
}

/// Reduced density matrix over the first direction's position and subcoin
/// jointly (x1⊗c1), index = 2·(position index) + σ1.
pub fn reduced_direction1_density(state: &SparseState) -> Result<DensityMatrix> {
    let (xs, index) = sorted_x1_index(state);
    let n = 2 * xs.len();
    let mut groups: FxHashMap<i64, Vec<(usize, [Complex64; 4])>> = FxHashMap::default();
    for (site, v) in state.iter() {
        groups
            .entry(site.x2)
            .or_default()
            .push((index[&site.x1], *v));
    }
    let mut rho = vec![Complex64::ZERO; n * n];
    let mut column: Vec<(usize, Complex64)> = Vec::new();
    for entries in groups.values_mut() {
        entries.sort_unstable_by_key(|(i, _)| *i);
        // One Kraus-side column per second-direction coin component σ2.
        for s2 in 0..2 {
            column.clear();
            for &(i, v) in entries.iter() {
                for s1 in 0..2 {
                    let amp = v[2 * s1 + s2];
                    if amp != Complex64::ZERO {
                        column.push((2 * i + s1, amp));
                    }
                }
            }
            herk_column(&mut rho, n, &column);
        }
    }
    mirror_lower(&mut rho, n);
    let data = DMatrix::from_fn(n, n, |i, j| rho[i * n + j]);
    DensityMatrix::new(data, Basis::DirectionX1(xs))
}

/// Time-normalized l1 coherence: the sum of moduli of strictly
/// upper-triangular entries (j > i, not doubled), divided by t.
pub fn l1_coherence(rho_x1: &DensityMatrix, t: u32) -> Result<f64> {
    if t == 0 {
        return Err(WalkError::UndefinedNormalization);
    }
    let n = rho_x1.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            sum += rho_x1.data[(i, j)].norm();
        }
    }
    Ok(sum / f64::from(t))
}

/// Per-timestep observable record. Fields are absent when the corresponding
/// observable was not computed at that step.
#[derive(Debug, Clone, Default)]
pub struct ObservableRecord {
    pub t: u32,
    pub var_x1: Option<f64>,
    pub var_x2: Option<f64>,
    pub var_r: Option<f64>,
    pub trace_distance: Option<f64>,
    pub entropy_c: Option<f64>,
    pub entropy_c1: Option<f64>,
    pub entropy_c2: Option<f64>,
    pub negativity: Option<f64>,
    pub coherence_x1: Option<f64>,
}
