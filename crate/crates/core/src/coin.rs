//! Coin operators for the 1-D and 2-D walks.
//!
//! The composite-coin basis order is fixed globally as
//! |↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩ (index 0..3). Every module in this crate shares
//! that convention; the CNOT matrix below is only meaningful in this order.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Result, WalkError};

/// Tolerance for the elementwise unitarity check |M†M - I| < UNITARITY_TOL.
pub const UNITARITY_TOL: f64 = 1e-12;

/// Parameters (θ, β, γ) of the one-qubit coin family.
///
/// Out-of-range values are reduced into θ ∈ [0, π/2], β, γ ∈ [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinParams {
    pub theta: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl CoinParams {
    pub fn new(theta: f64, beta: f64, gamma: f64) -> Result<Self> {
        if !theta.is_finite() || !beta.is_finite() || !gamma.is_finite() {
            return Err(WalkError::InvalidParameter(format!(
                "coin parameters must be finite, got ({theta}, {beta}, {gamma})"
            )));
        }
        let theta = if (0.0..=FRAC_PI_2).contains(&theta) {
            theta
        } else {
            theta.rem_euclid(FRAC_PI_2)
        };
        Ok(Self {
            theta,
            beta: beta.rem_euclid(2.0 * PI),
            gamma: gamma.rem_euclid(2.0 * PI),
        })
    }

    /// The Kempe coin parameters (β = γ = π/2) at the given θ.
    pub fn kempe(theta: f64) -> Result<Self> {
        Self::new(theta, FRAC_PI_2, FRAC_PI_2)
    }

    /// The Hadamard coin parameters (θ = π/4, β = γ = 0).
    pub fn hadamard() -> Self {
        Self {
            theta: std::f64::consts::FRAC_PI_4,
            beta: 0.0,
            gamma: 0.0,
        }
    }
}

/// A 2×2 unitary coin operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinMatrix2(Matrix2<Complex64>);

/// A 4×4 unitary coin operator in the global composite basis order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinMatrix4(Matrix4<Complex64>);

fn max_unitarity_deviation2(m: &Matrix2<Complex64>) -> f64 {
    let prod = m.adjoint() * m;
    let mut dev: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let expect = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((prod[(i, j)] - Complex64::new(expect, 0.0)).norm());
        }
    }
    dev
}

fn max_unitarity_deviation4(m: &Matrix4<Complex64>) -> f64 {
    let prod = m.adjoint() * m;
    let mut dev: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let expect = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((prod[(i, j)] - Complex64::new(expect, 0.0)).norm());
        }
    }
    dev
}

impl CoinMatrix2 {
    /// Wraps a 2×2 matrix, verifying unitarity to within 1e-12 elementwise.
    pub fn new(m: Matrix2<Complex64>) -> Result<Self> {
        let dev = max_unitarity_deviation2(&m);
        if dev >= UNITARITY_TOL {
            return Err(WalkError::NonUnitaryOperator { deviation: dev });
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.0
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn identity() -> Self {
        Self(Matrix2::identity())
    }
}

impl CoinMatrix4 {
    /// Wraps a 4×4 matrix, verifying unitarity to within 1e-12 elementwise.
    pub fn new(m: Matrix4<Complex64>) -> Result<Self> {
        let dev = max_unitarity_deviation4(&m);
        if dev >= UNITARITY_TOL {
            return Err(WalkError::NonUnitaryOperator { deviation: dev });
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.0
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    /// Applies the coin to a 4-component amplitude vector.
    #[inline]
    pub fn apply(&self, v: &[Complex64; 4]) -> [Complex64; 4] {
        let m = &self.0;
        let mut out = [Complex64::ZERO; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = m[(i, 0)] * v[0] + m[(i, 1)] * v[1] + m[(i, 2)] * v[2] + m[(i, 3)] * v[3];
        }
        out
    }
}

/// The CNOT permutation on the composite coin: control is the first subcoin,
/// target the second, so |↓↑⟩ ↔ |↓↓⟩.
pub fn cnot() -> Matrix4<Complex64> {
    let one = Complex64::ONE;
    let zero = Complex64::ZERO;
    Matrix4::new(
        one, zero, zero, zero, //
        zero, one, zero, zero, //
        zero, zero, zero, one, //
        zero, zero, one, zero,
    )
}

/// Builds the one-qubit coin
/// [[cosθ, sinθ·e^{iβ}], [sinθ·e^{iγ}, −cosθ·e^{i(γ+β)}]].
pub fn build_c2(params: CoinParams) -> Result<CoinMatrix2> {
    let (s, c) = params.theta.sin_cos();
    let eb = Complex64::from_polar(1.0, params.beta);
    let eg = Complex64::from_polar(1.0, params.gamma);
    let m = Matrix2::new(
        Complex64::new(c, 0.0),
        eb.scale(s),
        eg.scale(s),
        (eg * eb).scale(-c),
    );
    CoinMatrix2::new(m)
}

/// The Hadamard coin, build_c2(π/4, 0, 0).
pub fn hadamard() -> CoinMatrix2 {
    build_c2(CoinParams::hadamard()).expect("Hadamard coin is unitary")
}

/// The balanced Kempe coin, build_c2(θ, π/2, π/2).
pub fn kempe(theta: f64) -> Result<CoinMatrix2> {
    build_c2(CoinParams::kempe(theta)?)
}

fn kron2(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> Matrix4<Complex64> {
    let mut m = Matrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    m
}

/// The separable composite coin a⊗b, acting independently on each subcoin.
pub fn separable_coin(a: &CoinMatrix2, b: &CoinMatrix2) -> Result<CoinMatrix4> {
    CoinMatrix4::new(kron2(a.matrix(), b.matrix()))
}

/// The entangling composite coin (a⊗b)·CNOT; the CNOT acts first.
pub fn entangling_coin(a: &CoinMatrix2, b: &CoinMatrix2) -> Result<CoinMatrix4> {
    CoinMatrix4::new(kron2(a.matrix(), b.matrix()) * cnot())
}
