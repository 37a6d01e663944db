use nalgebra::DMatrix;
use serde::Serialize;

use super::CorrelationMatrix3;
use crate::spin::{SpinOperators, SpinQuantumNumber, UnitVector3};
use crate::state::DensityMatrix;
use crate::{Error, Result, C64};

/// A CHSH state is flagged as violating only when `γ > 1 + VIOLATION_TOLERANCE`.
pub const VIOLATION_TOLERANCE: f64 = 1e-9;

/// Singular values of `Z`, the CHSH parameter `γ = √(z² + z̃²)/s²` and the
/// maximum CHSH expectation `Υ = 2√(z² + z̃²)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChshAnalysis {
    /// Descending.
    pub singular_values: [f64; 3],
    pub gamma: f64,
    pub upsilon: f64,
    pub violated: bool,
    #[serde(skip)]
    pub spin: SpinQuantumNumber,
}

/// Singular values of `Z`, descending. These are the square roots of the
/// eigenvalues of `ZᵀZ`, but taken from a direct SVD so that small ones do
/// not pick up `√ε` noise.
pub fn singular_values(z: &CorrelationMatrix3) -> [f64; 3] {
    let svd = z.entries().svd(false, false);
    let mut sv: [f64; 3] = std::array::from_fn(|i| svd.singular_values[i]);
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

pub fn chsh_analysis(z: &CorrelationMatrix3) -> ChshAnalysis {
    let singular_values = singular_values(z);
    let root = (singular_values[0].powi(2) + singular_values[1].powi(2)).sqrt();
    let s = z.spin().value();
    let gamma = root / (s * s);
    ChshAnalysis {
        singular_values,
        gamma,
        upsilon: 2.0 * root,
        violated: gamma > 1.0 + VIOLATION_TOLERANCE,
        spin: z.spin(),
    }
}

/// Four measurement directions: Alice `a₁, a₂`, Bob `b₁, b₂`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeasurementSetting {
    pub a1: UnitVector3,
    pub a2: UnitVector3,
    pub b1: UnitVector3,
    pub b2: UnitVector3,
}

impl MeasurementSetting {
    pub fn new(a1: UnitVector3, a2: UnitVector3, b1: UnitVector3, b2: UnitVector3) -> Self {
        Self { a1, a2, b1, b2 }
    }
}

/// `tr[ρ (S_{a₁} ⊗ (S_{b₁} + S_{b₂}))] + tr[ρ (S_{a₂} ⊗ (S_{b₁} − S_{b₂}))]`.
pub fn chsh_expectation(rho: &DensityMatrix, setting: &MeasurementSetting, ops: &SpinOperators) -> Result<f64> {
    let d = ops.dim();
    for found in [rho.dims().a, rho.dims().b] {
        if found != d {
            return Err(Error::DimensionMismatch { expected: d, found });
        }
    }
    let a1 = ops.projection(&setting.a1);
    let a2 = ops.projection(&setting.a2);
    let b1 = ops.projection(&setting.b1);
    let b2 = ops.projection(&setting.b2);
    let bell: DMatrix<C64> = a1.kronecker(&(&b1 + &b2)) + a2.kronecker(&(&b1 - &b2));
    let m = rho.matrix();
    let n = m.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += m[(i, j)] * bell[(j, i)];
        }
    }
    Ok(acc.re)
}
