//! Spin-s component operators and spin projections onto spatial directions.
//!
//! The basis is ordered by descending magnetic quantum number, so `S₃` is
//! `diag(s, s-1, ..., -s)`. For `s = 1` this reproduces the usual qutrit
//! matrices with `1/√2` on the off-diagonals of `S₁` and `S₂`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::linalg::{hermiticity_residual, max_abs, trace_of_product, zero};
use crate::{Error, Result, C64};

/// Norm tolerance applied to user-supplied direction vectors.
pub const UNIT_TOLERANCE: f64 = 1e-9;

/// A spin quantum number `s ∈ {1/2, 1, 3/2, ...}`, stored as `2s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct SpinQuantumNumber {
    twice: u32,
}

impl SpinQuantumNumber {
    pub const HALF: Self = Self { twice: 1 };
    pub const ONE: Self = Self { twice: 2 };

    pub fn new(s: f64) -> Result<Self> {
        let twice = 2.0 * s;
        if !twice.is_finite() || twice < 1.0 - 1e-12 || (twice - twice.round()).abs() > 1e-12 {
            return Err(Error::InvalidSpin(s));
        }
        Ok(Self { twice: twice.round() as u32 })
    }

    pub fn from_twice(twice: u32) -> Result<Self> {
        if twice == 0 {
            return Err(Error::InvalidSpin(0.0));
        }
        Ok(Self { twice })
    }

    /// Build from the local Hilbert-space dimension `d = 2s + 1`.
    pub fn from_dim(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidSpin((d as f64 - 1.0) / 2.0));
        }
        Ok(Self { twice: d as u32 - 1 })
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice) / 2.0
    }

    pub fn twice(self) -> u32 {
        self.twice
    }

    pub fn dim(self) -> usize {
        self.twice as usize + 1
    }

    /// Eigenvalue `s(s+1)` of the Casimir `S²`.
    pub fn casimir(self) -> f64 {
        let s = self.value();
        s * (s + 1.0)
    }
}

impl TryFrom<f64> for SpinQuantumNumber {
    type Error = Error;

    fn try_from(s: f64) -> Result<Self> {
        Self::new(s)
    }
}

impl From<SpinQuantumNumber> for f64 {
    fn from(s: SpinQuantumNumber) -> f64 {
        s.value()
    }
}

impl std::fmt::Display for SpinQuantumNumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.twice.is_multiple_of(2) {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// A unit vector in ℝ³.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct UnitVector3([f64; 3]);

impl UnitVector3 {
    pub const E1: Self = Self([1.0, 0.0, 0.0]);
    pub const E2: Self = Self([0.0, 1.0, 0.0]);
    pub const E3: Self = Self([0.0, 0.0, 1.0]);

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::NotUnitVector { norm });
        }
        Ok(Self([x, y, z]))
    }

    /// Rescale `v` to unit length; `None` for the zero vector.
    pub fn normalize(v: [f64; 3]) -> Option<Self> {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        (norm > 0.0 && norm.is_finite()).then(|| Self([v[0] / norm, v[1] / norm, v[2] / norm]))
    }

    pub fn as_array(&self) -> [f64; 3] {
        self.0
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }
}

impl std::ops::Neg for UnitVector3 {
    type Output = Self;

    fn neg(self) -> Self {
        Self([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl TryFrom<[f64; 3]> for UnitVector3 {
    type Error = Error;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        Self::new(v[0], v[1], v[2])
    }
}

impl From<UnitVector3> for [f64; 3] {
    fn from(v: UnitVector3) -> Self {
        v.0
    }
}

/// The three spin components `(S₁, S₂, S₃)` acting on `ℂ^{2s+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinOperators {
    spin: SpinQuantumNumber,
    components: [DMatrix<C64>; 3],
}

impl SpinOperators {
    /// Ladder construction with `S± |m⟩ = √(s(s+1) − m(m±1)) |m±1⟩`.
    pub fn new(spin: SpinQuantumNumber) -> Self {
        let d = spin.dim();
        let s = spin.value();
        let mut raise = DMatrix::<C64>::zeros(d, d);
        // index j carries m = s - j; S+ maps index j to j - 1
        for j in 1..d {
            let m = s - j as f64;
            raise[(j - 1, j)] = C64::new((s * (s + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
        }
        let lower = raise.adjoint();
        let s1 = (&raise + &lower).scale(0.5);
        let s2 = (&raise - &lower) * C64::new(0.0, -0.5);
        let s3 = DMatrix::from_fn(d, d, |i, j| if i == j { C64::new(s - i as f64, 0.0) } else { zero() });
        Self { spin, components: [s1, s2, s3] }
    }

    /// Wrap arbitrary matrices, e.g. to inspect a perturbed algebra with
    /// [`SpinOperators::validate`]. Only shapes are checked.
    pub fn from_components(spin: SpinQuantumNumber, components: [DMatrix<C64>; 3]) -> Result<Self> {
        let d = spin.dim();
        for c in &components {
            if c.nrows() != d || c.ncols() != d {
                return Err(Error::DimensionMismatch { expected: d, found: c.nrows().max(c.ncols()) });
            }
        }
        Ok(Self { spin, components })
    }

    pub fn spin(&self) -> SpinQuantumNumber {
        self.spin
    }

    pub fn dim(&self) -> usize {
        self.spin.dim()
    }

    pub fn components(&self) -> &[DMatrix<C64>; 3] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &DMatrix<C64> {
        &self.components[i]
    }

    /// `S_r = r₁S₁ + r₂S₂ + r₃S₃`.
    pub fn projection(&self, r: &UnitVector3) -> DMatrix<C64> {
        self.linear_combination(r.as_array())
    }

    pub(crate) fn linear_combination(&self, r: [f64; 3]) -> DMatrix<C64> {
        let [c1, c2, c3] = &self.components;
        c1.scale(r[0]) + c2.scale(r[1]) + c3.scale(r[2])
    }

    pub fn validate(&self) -> SpinAlgebraReport {
        let [c1, c2, c3] = &self.components;
        let i = C64::new(0.0, 1.0);
        let commutator = [
            (c1, c2, c3),
            (c2, c3, c1),
            (c3, c1, c2),
        ]
        .iter()
        .map(|(a, b, c)| max_abs(&(*a * *b - *b * *a - *c * i)))
        .fold(0.0, f64::max);

        let hermiticity = self.components.iter().map(hermiticity_residual).fold(0.0, f64::max);

        let norm = self.spin.casimir() * self.dim() as f64 / 3.0;
        let mut trace_orthogonality: f64 = 0.0;
        for (j, a) in self.components.iter().enumerate() {
            for (k, b) in self.components.iter().enumerate() {
                let expected = if j == k { norm } else { 0.0 };
                trace_orthogonality = trace_orthogonality.max((trace_of_product(a, b) - expected).norm());
            }
        }

        let d = self.dim();
        let casimir_op = c1 * c1 + c2 * c2 + c3 * c3;
        let casimir = max_abs(&(casimir_op - DMatrix::<C64>::identity(d, d).scale(self.spin.casimir())));

        SpinAlgebraReport { hermiticity, commutator, trace_orthogonality, casimir }
    }
}

/// Maximum absolute residuals of the defining spin identities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpinAlgebraReport {
    /// `max ‖S_j − S_j†‖`
    pub hermiticity: f64,
    /// `max ‖[S_j, S_k] − i ε_jkl S_l‖`
    pub commutator: f64,
    /// `max |tr[S_j S_k] − s(s+1)(2s+1)/3 · δ_jk|`
    pub trace_orthogonality: f64,
    /// `‖S² − s(s+1) I‖`
    pub casimir: f64,
}

impl SpinAlgebraReport {
    pub fn max_residual(&self) -> f64 {
        self.hermiticity.max(self.commutator).max(self.trace_orthogonality).max(self.casimir)
    }
}

pub fn make_spin_operators(s: SpinQuantumNumber) -> SpinOperators {
    SpinOperators::new(s)
}

pub fn spin_projection(ops: &SpinOperators, r: &UnitVector3) -> DMatrix<C64> {
    ops.projection(r)
}

pub fn validate_spin_algebra(ops: &SpinOperators) -> SpinAlgebraReport {
    ops.validate()
}
