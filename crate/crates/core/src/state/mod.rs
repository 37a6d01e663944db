//! Two-qudit states.
//!
//! Amplitudes and matrix indices follow the product basis `|m k⟩` ordered
//! row-major: Alice's index `m` is the outer index, Bob's `k` the inner one,
//! so the flat index is `m * d_B + k` (all indices zero-based in code).

mod family;
mod sampling;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::linalg::{hermitian_eigenvalues, hermiticity_residual, kron};
use crate::{Error, Result, C64};

pub use family::{family_state, horodecki_from_coefficients, horodecki_from_components, swap_operator, FamilySpec};
pub use sampling::{sample_pure_state, sample_pure_state_at, substream, Sampler};

/// Tolerance on `Σ|ψ|² = 1` for pure states.
pub const NORM_TOLERANCE: f64 = 1e-12;
/// Tolerance on Hermiticity, unit trace and the smallest eigenvalue.
pub const DENSITY_TOLERANCE: f64 = 1e-10;

/// Local dimensions `(d_A, d_B)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct Dims {
    pub a: usize,
    pub b: usize,
}

impl Dims {
    pub const QUTRITS: Dims = Dims { a: 3, b: 3 };
    pub const QUBITS: Dims = Dims { a: 2, b: 2 };

    pub fn new(a: usize, b: usize) -> Self {
        Self { a, b }
    }

    pub fn square(d: usize) -> Self {
        Self { a: d, b: d }
    }

    pub fn total(self) -> usize {
        self.a * self.b
    }

    pub fn index(self, m: usize, k: usize) -> usize {
        m * self.b + k
    }
}

impl From<[usize; 2]> for Dims {
    fn from(d: [usize; 2]) -> Self {
        Self { a: d[0], b: d[1] }
    }
}

impl From<Dims> for [usize; 2] {
    fn from(d: Dims) -> Self {
        [d.a, d.b]
    }
}

/// Access to the coefficient tensor `ζ_{mm′,kk′} = ⟨m k|ρ|m′ k′⟩`.
pub trait Coefficients {
    fn dims(&self) -> Dims;
    fn zeta(&self, m: usize, mp: usize, k: usize, kp: usize) -> C64;
}

/// A normalized pure two-qudit state.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    dims: Dims,
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(dims: Dims, amplitudes: Vec<C64>) -> Result<Self> {
        check_len(dims, amplitudes.len())?;
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm_sq));
        }
        Ok(Self { dims, amplitudes })
    }

    /// Rescale arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(dims: Dims, mut amplitudes: Vec<C64>) -> Result<Self> {
        check_len(dims, amplitudes.len())?;
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !(norm_sq > 0.0 && norm_sq.is_finite()) {
            return Err(Error::NotNormalized(norm_sq));
        }
        let inv = norm_sq.sqrt().recip();
        for a in &mut amplitudes {
            *a *= inv;
        }
        Ok(Self { dims, amplitudes })
    }

    /// Product basis vector `|m⟩ ⊗ |k⟩`.
    pub fn basis(dims: Dims, m: usize, k: usize) -> Result<Self> {
        if m >= dims.a || k >= dims.b {
            return Err(Error::DimensionMismatch { expected: dims.total(), found: dims.index(m, k) + 1 });
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dims.total()];
        amplitudes[dims.index(m, k)] = C64::new(1.0, 0.0);
        Ok(Self { dims, amplitudes })
    }

    /// `|a⟩ ⊗ |b⟩` for normalized local vectors.
    pub fn product(a: &[C64], b: &[C64]) -> Result<Self> {
        let dims = Dims::new(a.len(), b.len());
        let amplitudes = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
        Self::new(dims, amplitudes)
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, m: usize, k: usize) -> C64 {
        self.amplitudes[self.dims.index(m, k)]
    }

    /// The `d_A × d_B` matrix `Ψ` with `Ψ_{mk} = ψ_{mk}`.
    pub fn coefficient_matrix(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.dims.a, self.dims.b, &self.amplitudes)
    }

    pub fn density(&self) -> DensityMatrix {
        let v = DVector::from_column_slice(&self.amplitudes);
        DensityMatrix { dims: self.dims, matrix: &v * v.adjoint() }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&StateFile::from(self))?)
    }
}

impl Coefficients for PureState {
    fn dims(&self) -> Dims {
        self.dims
    }

    fn zeta(&self, m: usize, mp: usize, k: usize, kp: usize) -> C64 {
        self.amplitude(m, k) * self.amplitude(mp, kp).conj()
    }
}

/// A two-qudit density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dims: Dims,
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    pub fn new(dims: Dims, matrix: DMatrix<C64>) -> Result<Self> {
        let n = dims.total();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: matrix.nrows() });
        }
        check_density(&matrix)?;
        Ok(Self { dims, matrix })
    }

    pub(crate) fn from_parts_unchecked(dims: Dims, matrix: DMatrix<C64>) -> Self {
        Self { dims, matrix }
    }

    /// `ρ_A ⊗ ρ_B`.
    pub fn product(a: &QuditDensity, b: &QuditDensity) -> Self {
        Self { dims: Dims::new(a.dim(), b.dim()), matrix: kron(a.matrix(), b.matrix()) }
    }

    pub fn maximally_mixed(dims: Dims) -> Self {
        let n = dims.total();
        Self { dims, matrix: DMatrix::identity(n, n).scale(1.0 / n as f64) }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    /// Zero-based `ζ_{mm′,kk′} = ⟨m k|ρ|m′ k′⟩`.
    pub fn coefficient(&self, m: usize, mp: usize, k: usize, kp: usize) -> C64 {
        self.matrix[(self.dims.index(m, k), self.dims.index(mp, kp))]
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.eigenvalues().iter().filter(|&&e| e > tol).count()
    }

    /// Exchange the two tensor factors.
    pub fn swap_parties(&self) -> Self {
        let Dims { a, b } = self.dims;
        let swapped = Dims::new(b, a);
        let idx = |m: usize, k: usize| k * a + m;
        let n = self.dims.total();
        let mut out = DMatrix::zeros(n, n);
        for m in 0..a {
            for k in 0..b {
                for mp in 0..a {
                    for kp in 0..b {
                        out[(idx(m, k), idx(mp, kp))] = self.coefficient(m, mp, k, kp);
                    }
                }
            }
        }
        Self { dims: swapped, matrix: out }
    }

    pub fn validate(&self) -> Result<()> {
        check_density(&self.matrix)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&StateFile::from(self))?)
    }
}

impl Coefficients for DensityMatrix {
    fn dims(&self) -> Dims {
        self.dims
    }

    fn zeta(&self, m: usize, mp: usize, k: usize, kp: usize) -> C64 {
        self.coefficient(m, mp, k, kp)
    }
}

impl From<PureState> for DensityMatrix {
    fn from(psi: PureState) -> Self {
        psi.density()
    }
}

/// A density matrix of a single qudit.
#[derive(Clone, Debug, PartialEq)]
pub struct QuditDensity {
    matrix: DMatrix<C64>,
}

impl QuditDensity {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        check_density(&matrix)?;
        Ok(Self { matrix })
    }

    /// `|v⟩⟨v|` for a normalized vector.
    pub fn pure(v: &[C64]) -> Result<Self> {
        let norm_sq: f64 = v.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm_sq));
        }
        let v = DVector::from_column_slice(v);
        Ok(Self { matrix: &v * v.adjoint() })
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(p: &[f64]) -> Result<Self> {
        let d = DVector::from_iterator(p.len(), p.iter().map(|&x| C64::new(x, 0.0)));
        Self::new(DMatrix::from_diagonal(&d))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// `tr[ρ²]`, as the squared Frobenius norm.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// The state vector if the state is pure to within `1e-10`.
    pub fn as_pure_vector(&self) -> Option<Vec<C64>> {
        if (self.purity() - 1.0).abs() > DENSITY_TOLERANCE {
            return None;
        }
        let eig = nalgebra::SymmetricEigen::new(self.matrix.clone());
        let top = eig.eigenvalues.iamax();
        Some(eig.eigenvectors.column(top).iter().copied().collect())
    }
}

fn check_len(dims: Dims, len: usize) -> Result<()> {
    if len != dims.total() {
        return Err(Error::DimensionMismatch { expected: dims.total(), found: len });
    }
    Ok(())
}

fn check_density(matrix: &DMatrix<C64>) -> Result<()> {
    let herm = hermiticity_residual(matrix);
    if !(herm <= DENSITY_TOLERANCE) {
        return Err(Error::InvalidDensity(format!("not Hermitian (residual {herm:e})")));
    }
    let tr = matrix.trace();
    if (tr.re - 1.0).abs() > DENSITY_TOLERANCE || tr.im.abs() > DENSITY_TOLERANCE {
        return Err(Error::InvalidDensity(format!("trace {tr} differs from 1")));
    }
    let min = hermitian_eigenvalues(matrix).first().copied().unwrap_or(0.0);
    if min < -DENSITY_TOLERANCE {
        return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
    }
    Ok(())
}

/// `|ψ⟩⟨ψ|`.
pub fn pure_to_density(psi: &PureState) -> DensityMatrix {
    psi.density()
}

/// Convex combination `Σ w_l ρ_l`. Weights must be positive and sum to one
/// within `1e-9`.
pub fn mix(states: &[(f64, DensityMatrix)]) -> Result<DensityMatrix> {
    let (_, first) = states.first().ok_or_else(|| Error::InvalidWeights("empty mixture".into()))?;
    let dims = first.dims();
    let mut total = 0.0;
    let n = dims.total();
    let mut acc = DMatrix::<C64>::zeros(n, n);
    for (w, rho) in states {
        if !(*w > 0.0) {
            return Err(Error::InvalidWeights(format!("weight {w} is not positive")));
        }
        if rho.dims() != dims {
            return Err(Error::DimensionMismatch { expected: n, found: rho.dims().total() });
        }
        total += w;
        acc += rho.matrix().scale(*w);
    }
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidWeights(format!("weights sum to {total}")));
    }
    // absorb the tolerated weight-sum slack so the trace check stays tight
    DensityMatrix::new(dims, acc.unscale(total))
}

/// Either kind of state, as read from a state file.
#[derive(Clone, Debug, PartialEq)]
pub enum TwoQuditState {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl TwoQuditState {
    pub fn dims(&self) -> Dims {
        match self {
            Self::Pure(p) => p.dims(),
            Self::Mixed(r) => r.dims(),
        }
    }

    pub fn density(&self) -> DensityMatrix {
        match self {
            Self::Pure(p) => p.density(),
            Self::Mixed(r) => r.clone(),
        }
    }

    pub fn as_pure(&self) -> Option<&PureState> {
        match self {
            Self::Pure(p) => Some(p),
            Self::Mixed(_) => None,
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: StateFile = serde_json::from_str(s)?;
        file.try_into()
    }

    pub fn to_json(&self) -> Result<String> {
        let file = match self {
            Self::Pure(p) => StateFile::from(p),
            Self::Mixed(r) => StateFile::from(r),
        };
        Ok(serde_json::to_string(&file)?)
    }
}

/// On-disk schema: `{"dims": [dA, dB], "amplitudes": [[re, im], ...]}` or
/// `{"dims": [dA, dB], "matrix": [[re, im], ...]}` with the matrix flattened
/// row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateFile {
    Pure { dims: Dims, amplitudes: Vec<[f64; 2]> },
    Mixed { dims: Dims, matrix: Vec<[f64; 2]> },
}

fn pairs(values: &[C64]) -> Vec<[f64; 2]> {
    values.iter().map(|z| [z.re, z.im]).collect()
}

impl From<&PureState> for StateFile {
    fn from(p: &PureState) -> Self {
        StateFile::Pure { dims: p.dims(), amplitudes: pairs(p.amplitudes()) }
    }
}

impl From<&DensityMatrix> for StateFile {
    fn from(r: &DensityMatrix) -> Self {
        let m = r.matrix();
        let flat: Vec<C64> = (0..m.nrows()).flat_map(|i| (0..m.ncols()).map(move |j| m[(i, j)])).collect();
        StateFile::Mixed { dims: r.dims(), matrix: pairs(&flat) }
    }
}

impl TryFrom<StateFile> for TwoQuditState {
    type Error = Error;

    fn try_from(file: StateFile) -> Result<Self> {
        let to_c = |v: Vec<[f64; 2]>| -> Vec<C64> { v.into_iter().map(|[re, im]| C64::new(re, im)).collect() };
        match file {
            StateFile::Pure { dims, amplitudes } => Ok(Self::Pure(PureState::new(dims, to_c(amplitudes))?)),
            StateFile::Mixed { dims, matrix } => {
                let n = dims.total();
                if matrix.len() != n * n {
                    return Err(Error::DimensionMismatch { expected: n * n, found: matrix.len() });
                }
                Ok(Self::Mixed(DensityMatrix::new(dims, DMatrix::from_row_slice(n, n, &to_c(matrix)))?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn basis_projector() {
        let rho = PureState::basis(Dims::QUTRITS, 0, 0).unwrap().density();
        assert_eq!(rho.matrix()[(0, 0)], c(1.0));
        assert_eq!(rho.matrix().iter().filter(|z| z.norm() > 0.0).count(), 1);
        assert_eq!(rho.coefficient(0, 0, 0, 0), c(1.0));
    }

    #[test]
    fn pure_density_is_rank_one() {
        let psi = sample_pure_state(Dims::QUTRITS, Sampler::HaarGaussian, 11);
        let rho = psi.density();
        rho.validate().unwrap();
        assert_abs_diff_eq!(rho.trace().re, 1.0, epsilon = 1e-12);
        assert_eq!(rho.rank(1e-12), 1);
        let ev = rho.eigenvalues();
        assert_abs_diff_eq!(ev[8], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn zeta_matches_amplitudes() {
        let psi = sample_pure_state(Dims::QUTRITS, Sampler::UniformSquare, 3);
        let rho = psi.density();
        for m in 0..3 {
            for mp in 0..3 {
                for k in 0..3 {
                    for kp in 0..3 {
                        let want = psi.amplitude(m, k) * psi.amplitude(mp, kp).conj();
                        assert!((rho.coefficient(m, mp, k, kp) - want).norm() < 1e-15);
                        assert!((psi.zeta(m, mp, k, kp) - want).norm() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_unnormalized_pure_state() {
        let err = PureState::new(Dims::QUBITS, vec![c(1.0), c(1.0), c(0.0), c(0.0)]).unwrap_err();
        assert!(matches!(err, Error::NotNormalized(_)));
        assert!(PureState::new(Dims::QUBITS, vec![c(1.0)]).is_err());
        assert!(PureState::normalized(Dims::QUBITS, vec![c(0.0); 4]).is_err());
    }

    #[test]
    fn rejects_invalid_density() {
        let mut m = DMatrix::<C64>::zeros(4, 4);
        m[(0, 0)] = c(1.5);
        m[(1, 1)] = c(-0.5);
        assert!(matches!(DensityMatrix::new(Dims::QUBITS, m), Err(Error::InvalidDensity(_))));
        let mut m = DMatrix::<C64>::identity(4, 4).scale(0.25);
        m[(0, 1)] = C64::new(0.0, 0.1);
        assert!(DensityMatrix::new(Dims::QUBITS, m).is_err());
        let m = DMatrix::<C64>::identity(4, 4).scale(0.3);
        assert!(DensityMatrix::new(Dims::QUBITS, m).is_err());
    }

    #[test]
    fn mixture_identity_and_diagonal() {
        let a = PureState::basis(Dims::QUTRITS, 0, 0).unwrap().density();
        assert_eq!(mix(&[(1.0, a.clone())]).unwrap(), a);
        let b = PureState::basis(Dims::QUTRITS, 1, 1).unwrap().density();
        let m = mix(&[(0.5, a), (0.5, b)]).unwrap();
        assert_eq!(m.coefficient(0, 0, 0, 0), c(0.5));
        assert_eq!(m.coefficient(1, 1, 1, 1), c(0.5));
        assert_eq!(m.matrix().iter().filter(|z| z.norm() > 0.0).count(), 2);
    }

    #[test]
    fn mixture_rejects_bad_weights() {
        let a = DensityMatrix::maximally_mixed(Dims::QUTRITS);
        assert!(mix(&[(0.5, a.clone())]).is_err());
        assert!(mix(&[(1.2, a.clone()), (-0.2, a.clone())]).is_err());
        assert!(mix(&[]).is_err());
        assert!(mix(&[(0.5, a.clone()), (0.5 + 1e-10, a)]).is_ok());
    }

    #[test]
    fn swap_twice_is_identity() {
        let rho = sample_pure_state(Dims::new(2, 3), Sampler::HaarGaussian, 1).density();
        let swapped = rho.swap_parties();
        assert_eq!(swapped.dims(), Dims::new(3, 2));
        assert_eq!(swapped.swap_parties(), rho);
    }

    #[test]
    fn json_schema_round_trip() {
        let psi = sample_pure_state(Dims::QUTRITS, Sampler::HaarGaussian, 5);
        let text = psi.to_json().unwrap();
        assert!(text.starts_with("{\"dims\":[3,3],\"amplitudes\":[["));
        assert_eq!(TwoQuditState::from_json(&text).unwrap(), TwoQuditState::Pure(psi.clone()));

        let rho = psi.density();
        let text = rho.to_json().unwrap();
        assert!(text.contains("\"matrix\":"));
        match TwoQuditState::from_json(&text).unwrap() {
            TwoQuditState::Mixed(back) => assert!((back.matrix() - rho.matrix()).norm() < 1e-15),
            other => panic!("expected mixed state, got {other:?}"),
        }
    }

    #[test]
    fn json_rejects_bad_states() {
        assert!(TwoQuditState::from_json(r#"{"dims":[2,2],"amplitudes":[[1,0],[1,0],[0,0],[0,0]]}"#).is_err());
        assert!(TwoQuditState::from_json(r#"{"dims":[2,2],"matrix":[[1,0]]}"#).is_err());
        assert!(TwoQuditState::from_json(r#"{"dims":[2,2]}"#).is_err());
        let bad_psd = r#"{"dims":[1,2],"matrix":[[2,0],[0,0],[0,0],[-1,0]]}"#;
        let err = TwoQuditState::from_json(bad_psd).unwrap_err();
        assert!(err.is_invariant_violation());
    }

    #[test]
    fn qudit_density_pure_vector() {
        let v = [C64::new(0.6, 0.0), C64::new(0.0, 0.8), C64::new(0.0, 0.0)];
        let q = QuditDensity::pure(&v).unwrap();
        assert_abs_diff_eq!(q.purity(), 1.0, epsilon = 1e-15);
        let back = q.as_pure_vector().unwrap();
        let overlap: C64 = back.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
        assert_abs_diff_eq!(overlap.norm(), 1.0, epsilon = 1e-12);
        assert!(QuditDensity::diagonal(&[0.5, 0.5, 0.0]).unwrap().as_pure_vector().is_none());
    }
}
