use nalgebra::Matrix3;
use serde::Serialize;

use crate::linalg::kron;
use crate::spin::{SpinOperators, SpinQuantumNumber};
use crate::state::{Coefficients, DensityMatrix, Dims};
use crate::{Error, Result};

/// The spin correlation matrix `Z_ij = tr[ρ (S_i ⊗ S_j)]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorrelationMatrix3 {
    #[serde(serialize_with = "serialize_rows")]
    entries: Matrix3<f64>,
    #[serde(skip)]
    spin: SpinQuantumNumber,
    /// Largest `|Im tr[ρ (S_i ⊗ S_j)]|` seen while forming the entries.
    imaginary_residual: f64,
}

fn serialize_rows<S: serde::Serializer>(m: &Matrix3<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: [[f64; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)]));
    serde::Serialize::serialize(&rows, s)
}

impl CorrelationMatrix3 {
    pub fn new(entries: Matrix3<f64>, spin: SpinQuantumNumber) -> Self {
        Self { entries, spin, imaginary_residual: 0.0 }
    }

    pub fn from_rows(rows: [[f64; 3]; 3], spin: SpinQuantumNumber) -> Self {
        Self::new(Matrix3::from_fn(|i, j| rows[i][j]), spin)
    }

    pub fn zero(spin: SpinQuantumNumber) -> Self {
        Self::new(Matrix3::zeros(), spin)
    }

    pub fn entries(&self) -> &Matrix3<f64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn spin(&self) -> SpinQuantumNumber {
        self.spin
    }

    pub fn imaginary_residual(&self) -> f64 {
        self.imaginary_residual
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.entries - other.entries).abs().max()
    }

    pub fn transpose(&self) -> Self {
        Self { entries: self.entries.transpose(), ..*self }
    }
}

fn check_square(dims: Dims, d: usize) -> Result<()> {
    for found in [dims.a, dims.b] {
        if found != d {
            return Err(Error::DimensionMismatch { expected: d, found });
        }
    }
    Ok(())
}

/// `Z` from the operator traces `tr[ρ (S_i ⊗ S_j)]`, any spin.
pub fn correlation_matrix_trace(rho: &DensityMatrix, ops: &SpinOperators) -> Result<CorrelationMatrix3> {
    check_square(rho.dims(), ops.dim())?;
    let m = rho.matrix();
    let n = m.nrows();
    let mut entries = Matrix3::zeros();
    let mut imaginary_residual: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let op = kron(ops.component(i), ops.component(j));
            let mut t = crate::C64::new(0.0, 0.0);
            for a in 0..n {
                for b in 0..n {
                    t += m[(a, b)] * op[(b, a)];
                }
            }
            entries[(i, j)] = t.re;
            imaginary_residual = imaginary_residual.max(t.im.abs());
        }
    }
    Ok(CorrelationMatrix3 { entries, spin: ops.spin(), imaginary_residual })
}

/// Spin-1 `Z` from the coefficient tensor `ζ_{mm′,kk′}` alone.
///
/// Each sum runs over the nonzero matrix elements of the qutrit spin
/// components: `(S₁)_{n,n+1} = 1/√2`, `(S₂)_{n,n+1} = −i/√2`,
/// `(S₃)_{nn} = 2 − n` (one-based `n`). Terms pair each coefficient with
/// its Hermitian conjugate, which leaves only real parts (for `S₁, S₃`
/// factors) and imaginary parts (one `S₂` factor) of selected entries.
pub fn correlation_matrix_coeff<C: Coefficients + ?Sized>(state: &C) -> Result<CorrelationMatrix3> {
    check_square(state.dims(), 3)?;
    let z = |m: usize, mp: usize, k: usize, kp: usize| state.zeta(m - 1, mp - 1, k - 1, kp - 1);
    let off = |n: usize| ((n * (3 - n)) as f64).sqrt();
    let diag = |n: usize| (4 - 2 * n as i32) as f64;
    let mut e = Matrix3::<f64>::zeros();

    for m in 1..=2 {
        for k in 1..=2 {
            let w = 0.5 * off(m) * off(k);
            e[(0, 0)] += w * (z(m, m + 1, k, k + 1) + z(m, m + 1, k + 1, k)).re;
            // one S₂ factor: −Im of the upper-triangle pair
            e[(0, 1)] -= w * (z(m, m + 1, k, k + 1) + z(m + 1, m, k, k + 1)).im;
            e[(1, 0)] -= w * (z(m, m + 1, k, k + 1) + z(m, m + 1, k + 1, k)).im;
            e[(1, 1)] += w * (z(m + 1, m, k, k + 1) - z(m + 1, m, k + 1, k)).re;
        }
    }
    for m in 1..=2 {
        for k in 1..=3 {
            let w = 0.5 * off(m) * diag(k);
            e[(0, 2)] += w * z(m + 1, m, k, k).re;
            e[(1, 2)] -= w * z(m, m + 1, k, k).im;
        }
    }
    for m in 1..=3 {
        for k in 1..=2 {
            let w = 0.5 * diag(m) * off(k);
            e[(2, 0)] += w * z(m, m, k + 1, k).re;
            e[(2, 1)] -= w * z(m, m, k, k + 1).im;
        }
    }
    for m in 1..=3 {
        for k in 1..=3 {
            e[(2, 2)] += 0.25 * diag(m) * diag(k) * z(m, m, k, k).re;
        }
    }
    Ok(CorrelationMatrix3::new(e, SpinQuantumNumber::ONE))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::make_spin_operators;
    use crate::state::{family_state, sample_pure_state_at, FamilySpec, PureState, Sampler};

    fn ops1() -> SpinOperators {
        make_spin_operators(SpinQuantumNumber::ONE)
    }

    fn assert_matrix(z: &CorrelationMatrix3, want: [[f64; 3]; 3], tol: f64) {
        let w = CorrelationMatrix3::from_rows(want, z.spin());
        assert!(z.max_abs_diff(&w) <= tol, "{:?} vs {want:?}", z.entries());
    }

    #[test]
    fn horodecki_trace_route() {
        for tau in [2.0, 3.0, 4.5, 5.0] {
            let rho = family_state(&FamilySpec::Horodecki { tau }).unwrap();
            let z = correlation_matrix_trace(&rho, &ops1()).unwrap();
            let f = 1.0 / 21.0;
            assert_matrix(&z, [[4.0 * f, 0.0, 0.0], [0.0, -4.0 * f, 0.0], [0.0, 0.0, -f]], 1e-14);
            assert!(z.imaginary_residual() <= 1e-10);
        }
    }

    #[test]
    fn werner_is_scaled_identity() {
        for phi in [-1.0, -0.2, 0.5, 1.0] {
            let rho = family_state(&FamilySpec::Werner { phi }).unwrap();
            let z = correlation_matrix_trace(&rho, &ops1()).unwrap();
            let c = (3.0 * phi - 1.0) / 12.0;
            assert_matrix(&z, [[c, 0.0, 0.0], [0.0, c, 0.0], [0.0, 0.0, c]], 1e-14);
        }
    }

    #[test]
    fn ghz_trace_route() {
        let rho = family_state(&FamilySpec::Ghz3).unwrap();
        let z = correlation_matrix_trace(&rho, &ops1()).unwrap();
        let t = 2.0 / 3.0;
        assert_matrix(&z, [[t, 0.0, 0.0], [0.0, -t, 0.0], [0.0, 0.0, t]], 1e-14);
    }

    #[test]
    fn product_basis_state_coeff_route() {
        let psi = PureState::basis(Dims::QUTRITS, 0, 0).unwrap();
        let z = correlation_matrix_coeff(&psi).unwrap();
        assert_matrix(&z, [[0.0; 3], [0.0; 3], [0.0, 0.0, 1.0]], 0.0);
    }

    #[test]
    fn routes_agree_on_horodecki_and_random_states() {
        let rho = family_state(&FamilySpec::Horodecki { tau: 5.0 }).unwrap();
        let a = correlation_matrix_trace(&rho, &ops1()).unwrap();
        let b = correlation_matrix_coeff(&rho).unwrap();
        assert!(a.max_abs_diff(&b) <= 1e-14);
        for i in 0..20 {
            let psi = sample_pure_state_at(Dims::QUTRITS, Sampler::HaarGaussian, 77, i);
            let a = correlation_matrix_trace(&psi.density(), &ops1()).unwrap();
            let b = correlation_matrix_coeff(&psi).unwrap();
            let c = correlation_matrix_coeff(&psi.density()).unwrap();
            assert!(a.max_abs_diff(&b) <= 1e-12);
            assert!(b.max_abs_diff(&c) <= 1e-15);
        }
    }

    #[test]
    fn antisym_matches_closed_matrix() {
        let (a12, a13, a23) = (crate::C64::new(0.4, 0.3), crate::C64::new(-0.2, 0.5), crate::C64::new(0.6, -0.1));
        let n = (a12.norm_sqr() + a13.norm_sqr() + a23.norm_sqr()).sqrt();
        let (a12, a13, a23) = (a12 / n, a13 / n, a23 / n);
        let psi = FamilySpec::Antisym { a12, a13, a23 }.pure_state().unwrap();
        let z = correlation_matrix_coeff(&psi).unwrap();
        let r2 = std::f64::consts::SQRT_2;
        let x12 = 2.0 * (a12.conj() * a23).im;
        let x13 = r2 * (a12 * a13.conj() - a13 * a23.conj()).re;
        let x23 = r2 * (a13 * (a12.conj() + a23.conj())).im;
        let want = [
            [-(a12 - a23).norm_sqr() / 2.0, x12 / 2.0, x13 / 2.0],
            [x12 / 2.0, -(a12 + a23).norm_sqr() / 2.0, x23 / 2.0],
            [x13 / 2.0, x23 / 2.0, -a13.norm_sqr()],
        ];
        assert_matrix(&z, want, 1e-14);
    }

    #[test]
    fn dimension_mismatch() {
        let rho = crate::state::DensityMatrix::maximally_mixed(Dims::QUBITS);
        assert!(matches!(correlation_matrix_trace(&rho, &ops1()), Err(Error::DimensionMismatch { .. })));
        assert!(correlation_matrix_coeff(&rho).is_err());
        let half = make_spin_operators(SpinQuantumNumber::HALF);
        assert!(correlation_matrix_trace(&rho, &half).is_ok());
    }
}
