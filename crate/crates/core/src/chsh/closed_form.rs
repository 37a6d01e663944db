//! Closed-form spin-1 CHSH parameters of the named families.

use std::f64::consts::SQRT_2;

use serde::Serialize;

use crate::spin::{make_spin_operators, SpinQuantumNumber};
use crate::state::{FamilySpec, QuditDensity};
use crate::{Error, Result, C64};

/// `√((1 + |α₁₃² − 2α₁₂α₂₃|²)/2)`.
pub fn antisym_gamma(a12: C64, a13: C64, a23: C64) -> f64 {
    let q = (a13 * a13 - a12 * a23 * 2.0).norm();
    ((1.0 + q * q) / 2.0).sqrt()
}

/// Symmetric family. With `w = α₁₁*α₂₂ + α₂₂*α₃₃` and `y = |α₁₁|² + |α₃₃|²`,
/// `γ = √2 |w|` when `|w| ≥ y` and `γ = √(|w|² + y²)` otherwise.
pub fn sym_gamma(a11: C64, a22: C64, a33: C64) -> f64 {
    let w = (a11.conj() * a22 + a22.conj() * a33).norm();
    let y = a11.norm_sqr() + a33.norm_sqr();
    if w >= y {
        SQRT_2 * w
    } else {
        (w * w + y * y).sqrt()
    }
}

/// `(√2/12) |3Φ − 1|`.
pub fn werner_gamma(phi: f64) -> f64 {
    SQRT_2 / 12.0 * (3.0 * phi - 1.0).abs()
}

/// `4√2/21`, independent of τ.
pub fn horodecki_gamma() -> f64 {
    4.0 * SQRT_2 / 21.0
}

/// `2t(1−t) / (1 − 2t(1−t))`.
pub fn example1_concurrence(t: f64) -> f64 {
    let p = 2.0 * t * (1.0 - t);
    p / (1.0 - p)
}

/// `2t √(3t² − 8t + 8) / (3t² − 4t + 4)`.
pub fn example2_concurrence(t: f64) -> f64 {
    2.0 * t * (3.0 * t * t - 8.0 * t + 8.0).sqrt() / (3.0 * t * t - 4.0 * t + 4.0)
}

/// `2 √(t⁴ − 4t³ + 9t² − 8t + 4) / (3t² − 4t + 4)` for the normalized
/// Example-2 state; this lies in branch `|w| ≤ y` for all `t ∈ [0, 1]`.
pub fn example2_gamma(t: f64) -> f64 {
    let num = t.powi(4) - 4.0 * t.powi(3) + 9.0 * t * t - 8.0 * t + 4.0;
    2.0 * num.sqrt() / (3.0 * t * t - 4.0 * t + 4.0)
}

fn spin_expectation(rho: &QuditDensity) -> [f64; 3] {
    let ops = make_spin_operators(SpinQuantumNumber::ONE);
    std::array::from_fn(|i| {
        let s = ops.component(i);
        let m = rho.matrix();
        (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).map(|(a, b)| (m[(a, b)] * s[(b, a)]).re).sum()
    })
}

/// Closed-form `γ` for a family member.
///
/// Product states have the rank-one correlation matrix `⟨S⟩_A ⟨S⟩_Bᵀ`, so
/// `γ = ‖⟨S⟩_A‖ ‖⟨S⟩_B‖`.
pub fn analytic_gamma(spec: &FamilySpec) -> Result<f64> {
    spec.validate()?;
    Ok(match spec {
        FamilySpec::Antisym { a12, a13, a23 } => antisym_gamma(*a12, *a13, *a23),
        FamilySpec::Sym { a11, a22, a33 } => sym_gamma(*a11, *a22, *a33),
        FamilySpec::Ghz3 => (8.0f64 / 9.0).sqrt(),
        FamilySpec::Werner { phi } => werner_gamma(*phi),
        FamilySpec::Horodecki { .. } => horodecki_gamma(),
        FamilySpec::Example1 { .. } => 1.0,
        FamilySpec::Example2 { t } => example2_gamma(*t),
        FamilySpec::Product { a, b } => {
            let norm = |v: [f64; 3]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
            norm(spin_expectation(a)) * norm(spin_expectation(b))
        }
    })
}

/// A point on the γ/concurrence curves of the two example families.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub gamma: f64,
    pub concurrence: f64,
}

pub fn analytic_curves(spec: &FamilySpec) -> Result<CurvePoint> {
    spec.validate()?;
    match *spec {
        FamilySpec::Example1 { t } => Ok(CurvePoint { gamma: 1.0, concurrence: example1_concurrence(t) }),
        FamilySpec::Example2 { t } => Ok(CurvePoint { gamma: example2_gamma(t), concurrence: example2_concurrence(t) }),
        _ => Err(Error::InvalidConfig(format!("{} has no parametric curve", spec.name()))),
    }
}
