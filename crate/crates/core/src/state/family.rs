use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;

use super::{mix, DensityMatrix, Dims, PureState, QuditDensity, NORM_TOLERANCE};
use crate::{Error, Result, C64};

/// The named two-qutrit families.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilySpec {
    /// `α₁₂|φ₁₂⁻⟩ + α₁₃|φ₁₃⁻⟩ + α₂₃|φ₂₃⁻⟩` with `|φᵢⱼ⁻⟩ = (|ij⟩ − |ji⟩)/√2`.
    Antisym { a12: C64, a13: C64, a23: C64 },
    /// `α₁₁|11⟩ + α₂₂|22⟩ + α₃₃|33⟩`.
    Sym { a11: C64, a22: C64, a33: C64 },
    /// `(|11⟩ + |22⟩ + |33⟩)/√3`.
    Ghz3,
    /// `(3−Φ)/24 · I + (3Φ−1)/24 · V` with `V` the swap, `Φ ∈ [−1, 1]`.
    Werner { phi: f64 },
    /// `(2/7) ρ_ghz + (τ/7) ξ⁺ + ((5−τ)/7) ξ⁻`, `τ ∈ [2, 5]`.
    Horodecki { tau: f64 },
    /// Symmetric state with `α₂₂ = 0` interpolating `|11⟩ → |33⟩`, `t ∈ [0, 1]`.
    Example1 { t: f64 },
    /// Symmetric state interpolating `|11⟩` (t = 0) to the GHZ state (t = 1).
    Example2 { t: f64 },
    /// `ρ_A ⊗ ρ_B`.
    Product { a: QuditDensity, b: QuditDensity },
}

fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if !(lo..=hi).contains(&value) {
        return Err(Error::OutOfRange { name, value, lo, hi });
    }
    Ok(())
}

fn check_normalized(coeffs: [C64; 3]) -> Result<()> {
    let n: f64 = coeffs.iter().map(|z| z.norm_sqr()).sum();
    if !n.is_finite() || (n - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized(n));
    }
    Ok(())
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Antisym { .. } => "antisym",
            Self::Sym { .. } => "sym",
            Self::Ghz3 => "ghz3",
            Self::Werner { .. } => "werner",
            Self::Horodecki { .. } => "horodecki",
            Self::Example1 { .. } => "example1",
            Self::Example2 { .. } => "example2",
            Self::Product { .. } => "product",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Antisym { a12, a13, a23 } => check_normalized([*a12, *a13, *a23]),
            Self::Sym { a11, a22, a33 } => check_normalized([*a11, *a22, *a33]),
            Self::Ghz3 => Ok(()),
            Self::Werner { phi } => check_range("phi", *phi, -1.0, 1.0),
            Self::Horodecki { tau } => check_range("tau", *tau, 2.0, 5.0),
            Self::Example1 { t } | Self::Example2 { t } => check_range("t", *t, 0.0, 1.0),
            Self::Product { a, b } => {
                if a.dim() != 3 || b.dim() != 3 {
                    return Err(Error::DimensionMismatch { expected: 3, found: a.dim().max(b.dim()) });
                }
                Ok(())
            }
        }
    }

    /// The coefficients `(α₁₁, α₂₂, α₃₃)` for members of the symmetric family.
    pub fn symmetric_coefficients(&self) -> Option<[C64; 3]> {
        match *self {
            Self::Sym { a11, a22, a33 } => Some([a11, a22, a33]),
            Self::Ghz3 => {
                let x = real(1.0 / 3f64.sqrt());
                Some([x, x, x])
            }
            Self::Example1 { t } => {
                let n = (1.0 - 2.0 * t + 2.0 * t * t).sqrt();
                Some([real((1.0 - t) / n), real(0.0), real(t / n)])
            }
            Self::Example2 { t } => {
                // (1 - t/2)² + 2 (t/2)² = 1 - t + 3t²/4
                let n = (1.0 - t + 0.75 * t * t).sqrt();
                Some([real((1.0 - t / 2.0) / n), real(t / 2.0 / n), real(t / 2.0 / n)])
            }
            _ => None,
        }
    }

    /// True when the family member is a pure state.
    pub fn is_pure(&self) -> bool {
        match self {
            Self::Werner { .. } | Self::Horodecki { .. } => false,
            Self::Product { a, b } => a.as_pure_vector().is_some() && b.as_pure_vector().is_some(),
            _ => true,
        }
    }

    pub fn pure_state(&self) -> Result<PureState> {
        self.validate()?;
        if let Some([a11, a22, a33]) = self.symmetric_coefficients() {
            let mut amps = vec![real(0.0); 9];
            amps[0] = a11;
            amps[4] = a22;
            amps[8] = a33;
            return PureState::normalized(Dims::QUTRITS, amps);
        }
        match self {
            Self::Antisym { a12, a13, a23 } => {
                let d = Dims::QUTRITS;
                let mut amps = vec![real(0.0); 9];
                for (alpha, i, j) in [(a12, 0, 1), (a13, 0, 2), (a23, 1, 2)] {
                    amps[d.index(i, j)] += alpha * FRAC_1_SQRT_2;
                    amps[d.index(j, i)] -= alpha * FRAC_1_SQRT_2;
                }
                PureState::normalized(d, amps)
            }
            Self::Product { a, b } => match (a.as_pure_vector(), b.as_pure_vector()) {
                (Some(va), Some(vb)) => {
                    let amps = va.iter().flat_map(|x| vb.iter().map(move |y| x * y)).collect();
                    PureState::normalized(Dims::QUTRITS, amps)
                }
                _ => Err(Error::NotPure("product of mixed local states")),
            },
            Self::Werner { .. } => Err(Error::NotPure("werner")),
            Self::Horodecki { .. } => Err(Error::NotPure("horodecki")),
            _ => unreachable!("symmetric members handled above"),
        }
    }

    pub fn density_matrix(&self) -> Result<DensityMatrix> {
        self.validate()?;
        match self {
            Self::Werner { phi } => {
                let n = 9;
                let m = DMatrix::<C64>::identity(n, n).scale((3.0 - phi) / 24.0)
                    + swap_operator(3).scale((3.0 * phi - 1.0) / 24.0);
                DensityMatrix::new(Dims::QUTRITS, m)
            }
            Self::Horodecki { tau } => horodecki_from_components(*tau),
            Self::Product { a, b } => Ok(DensityMatrix::product(a, b)),
            _ => Ok(self.pure_state()?.density()),
        }
    }
}

/// Build a family member.
pub fn family_state(spec: &FamilySpec) -> Result<DensityMatrix> {
    spec.density_matrix()
}

/// The swap `V|m k⟩ = |k m⟩` on `ℂ^d ⊗ ℂ^d`.
pub fn swap_operator(d: usize) -> DMatrix<C64> {
    let dims = Dims::square(d);
    let mut v = DMatrix::zeros(d * d, d * d);
    for m in 0..d {
        for k in 0..d {
            v[(dims.index(k, m), dims.index(m, k))] = real(1.0);
        }
    }
    v
}

fn projector_mixture(pairs: &[(usize, usize)]) -> DensityMatrix {
    let d = Dims::QUTRITS;
    let mut m = DMatrix::zeros(9, 9);
    for &(i, j) in pairs {
        m[(d.index(i, j), d.index(i, j))] = real(1.0 / pairs.len() as f64);
    }
    DensityMatrix::from_parts_unchecked(d, m)
}

/// Assemble the Horodecki state from the GHZ state and the two separable
/// cyclic mixtures.
pub fn horodecki_from_components(tau: f64) -> Result<DensityMatrix> {
    check_range("tau", tau, 2.0, 5.0)?;
    let ghz = FamilySpec::Ghz3.density_matrix()?;
    let xi_plus = projector_mixture(&[(0, 1), (1, 2), (2, 0)]);
    let xi_minus = projector_mixture(&[(1, 0), (2, 1), (0, 2)]);
    let mut parts = vec![(2.0 / 7.0, ghz), (tau / 7.0, xi_plus)];
    // τ = 5 drops the ξ⁻ term; mix() requires strictly positive weights
    if tau < 5.0 {
        parts.push(((5.0 - tau) / 7.0, xi_minus));
    }
    mix(&parts)
}

/// Assemble the Horodecki state entry by entry from its coefficient tensor.
pub fn horodecki_from_coefficients(tau: f64) -> Result<DensityMatrix> {
    check_range("tau", tau, 2.0, 5.0)?;
    let d = Dims::QUTRITS;
    let mut m = DMatrix::<C64>::zeros(9, 9);
    let mut set = |mm: usize, mp: usize, k: usize, kp: usize, v: f64| {
        m[(d.index(mm, k), d.index(mp, kp))] = real(v);
    };
    // ζ_{mm′,kk′} with zero-based indices
    for i in 0..3 {
        for j in 0..3 {
            set(i, j, i, j, 2.0 / 21.0);
        }
    }
    for (i, j) in [(0, 1), (1, 2), (2, 0)] {
        set(i, i, j, j, tau / 21.0);
    }
    for (i, j) in [(0, 2), (1, 0), (2, 1)] {
        set(i, i, j, j, (5.0 - tau) / 21.0);
    }
    DensityMatrix::new(d, m)
}
