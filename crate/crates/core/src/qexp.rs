//! q-exponential step-size distribution over {1, …, t}.
//!
//! The unnormalized weight of a step of size Δ is
//! w(Δ) = [1 − (1−q)Δ]^{1/(1−q)} wherever the bracket is positive and 0
//! elsewhere, with the closed-form limits w(Δ) = e^{−Δ} at q = 1 and
//! w(Δ) = 1 (uniform) at q = ∞. Probabilities are normalized over
//! {1, …, t} intersected with the support.

use rand::Rng;

use crate::error::{Result, WalkError};

/// Disorder parameters: the q index and the current time step t, which is
/// also the maximum step size.
///
/// q must be positive; q = 0 would put every integer step outside the
/// support and is rejected rather than clamped. `f64::INFINITY` selects the
/// uniform limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QExpParams {
    q: f64,
    t: u32,
}

impl QExpParams {
    pub fn new(q: f64, t: u32) -> Result<Self> {
        if q.is_nan() || q <= 0.0 {
            return Err(WalkError::InvalidParameter(format!(
                "q must be a positive real or infinity, got {q}"
            )));
        }
        if t == 0 {
            return Err(WalkError::InvalidParameter(
                "t must be at least 1".into(),
            ));
        }
        Ok(Self { q, t })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn t(&self) -> u32 {
        self.t
    }
}

/// Normalized step-size probabilities for Δ ∈ {1, …, t}.
#[derive(Debug, Clone)]
pub struct StepWeights {
    /// probabilities[i] is the probability of Δ = i + 1.
    pub probabilities: Vec<f64>,
    /// The normalization 1/Σw actually applied.
    pub normalization: f64,
}

/// Unnormalized weight of a single step size.
///
/// Computed in log space for finite q ≠ 1 so large-Δ tails of q > 1 do not
/// underflow prematurely.
fn raw_weight(q: f64, delta: u32) -> f64 {
    let d = f64::from(delta);
    if q.is_infinite() {
        1.0
    } else if (q - 1.0).abs() < 1e-12 {
        (-d).exp()
    } else {
        let eps = 1.0 - q;
        let bracket = 1.0 - eps * d;
        if bracket <= 0.0 {
            0.0
        } else {
            (bracket.ln() / eps).exp()
        }
    }
}

/// Step-size probabilities over Δ ∈ {1, …, t}.
pub fn weights(params: QExpParams) -> Result<StepWeights> {
    let raw: Vec<f64> = (1..=params.t).map(|d| raw_weight(params.q, d)).collect();
    let total: f64 = raw.iter().sum();
    if total <= 0.0 {
        return Err(WalkError::DegenerateDistribution { q: params.q });
    }
    let norm = 1.0 / total;
    Ok(StepWeights {
        probabilities: raw.iter().map(|w| w * norm).collect(),
        normalization: norm,
    })
}

/// Draws one step size by inverse-CDF lookup, consuming exactly one uniform
/// variate from `rng`.
pub fn sample<R: Rng + ?Sized>(params: QExpParams, rng: &mut R) -> Result<u32> {
    let w = weights(params)?;
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, p) in w.probabilities.iter().enumerate() {
        acc += p;
        if u < acc {
            return Ok(i as u32 + 1);
        }
    }
    // u landed in the rounding slack past the last cumulative bin.
    Ok(params.t)
}

/// Draws one step size from precomputed weights, consuming one variate.
pub fn sample_from<R: Rng + ?Sized>(w: &StepWeights, rng: &mut R) -> u32 {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, p) in w.probabilities.iter().enumerate() {
        acc += p;
        if u < acc {
            return i as u32 + 1;
        }
    }
    w.probabilities.len() as u32
}
