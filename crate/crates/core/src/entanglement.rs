//! Reduced states and pure-state concurrence `C = √(2(1 − tr ρ_A²))`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::chsh::closed_form::{example1_concurrence, example2_concurrence};
use crate::state::{DensityMatrix, FamilySpec, PureState, QuditDensity};
use crate::{Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Party {
    A,
    B,
}

/// A one-party marginal together with its purity `tr ρ²`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedState {
    pub matrix: DMatrix<C64>,
    pub purity: f64,
}

impl ReducedState {
    fn from_matrix(matrix: DMatrix<C64>) -> Self {
        let purity = matrix.iter().map(|z| z.norm_sqr()).sum();
        Self { matrix, purity }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn to_qudit(&self) -> Result<QuditDensity> {
        QuditDensity::new(self.matrix.clone())
    }
}

/// Trace out the party that is not `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: Party) -> ReducedState {
    let dims = rho.dims();
    let m = rho.matrix();
    let out = match keep {
        Party::A => DMatrix::from_fn(dims.a, dims.a, |i, j| (0..dims.b).map(|k| m[(dims.index(i, k), dims.index(j, k))]).sum()),
        Party::B => DMatrix::from_fn(dims.b, dims.b, |i, j| (0..dims.a).map(|k| m[(dims.index(k, i), dims.index(k, j))]).sum()),
    };
    ReducedState::from_matrix(out)
}

/// Marginal of a pure state from its coefficient matrix: `ΨΨ†` or `ΨᵀΨ̄`.
pub fn reduced_pure(psi: &PureState, keep: Party) -> ReducedState {
    let c = psi.coefficient_matrix();
    ReducedState::from_matrix(match keep {
        Party::A => &c * c.adjoint(),
        Party::B => c.transpose() * c.map(|z| z.conj()),
    })
}

/// Concurrence of a pure state, from the marginal of party A.
pub fn concurrence_pure(psi: &PureState) -> f64 {
    concurrence_from_purity(reduced_pure(psi, Party::A).purity)
}

pub fn concurrence_from_purity(purity: f64) -> f64 {
    (2.0 * (1.0 - purity)).max(0.0).sqrt()
}

/// Closed-form concurrence of a pure family member.
pub fn analytic_concurrence(spec: &FamilySpec) -> Result<f64> {
    spec.validate()?;
    Ok(match spec {
        FamilySpec::Antisym { .. } => 1.0,
        FamilySpec::Ghz3 => 2.0 / 3f64.sqrt(),
        FamilySpec::Example1 { t } => example1_concurrence(*t),
        FamilySpec::Example2 { t } => example2_concurrence(*t),
        FamilySpec::Sym { a11, a22, a33 } => {
            let quartic: f64 = [a11, a22, a33].iter().map(|a| a.norm_sqr().powi(2)).sum();
            concurrence_from_purity(quartic)
        }
        FamilySpec::Product { .. } if spec.is_pure() => 0.0,
        FamilySpec::Product { .. } => return Err(Error::NotPure("product of mixed local states")),
        FamilySpec::Werner { .. } => return Err(Error::NotPure("werner")),
        FamilySpec::Horodecki { .. } => return Err(Error::NotPure("horodecki")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{family_state, sample_pure_state_at, Dims, Sampler};
    use approx::assert_abs_diff_eq;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn assert_close(a: &DMatrix<C64>, b: &DMatrix<C64>, tol: f64) {
        assert!((a - b).iter().all(|z| z.norm() <= tol), "{a} vs {b}");
    }

    #[test]
    fn antisym_marginal() {
        let rho = family_state(&FamilySpec::Antisym { a12: r(1.0), a13: r(0.0), a23: r(0.0) }).unwrap();
        let want = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![r(0.5), r(0.5), r(0.0)]));
        for keep in [Party::A, Party::B] {
            let red = partial_trace(&rho, keep);
            assert_close(&red.matrix, &want, 1e-15);
            assert_abs_diff_eq!(red.purity, 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn antisym_marginal_general() {
        // the marginal is (1/2)(I − |v⟩⟨v|) with v = (α₂₃, −α₁₃, α₁₂)*
        let (a12, a13, a23) = (C64::new(0.3, 0.4), C64::new(-0.5, 0.1), C64::new(0.2, -0.3));
        let n = (a12.norm_sqr() + a13.norm_sqr() + a23.norm_sqr()).sqrt();
        let (a12, a13, a23) = (a12 / n, a13 / n, a23 / n);
        let rho = family_state(&FamilySpec::Antisym { a12, a13, a23 }).unwrap();
        let v = nalgebra::DVector::from_vec(vec![a23.conj(), -a13.conj(), a12.conj()]);
        let want = (DMatrix::<C64>::identity(3, 3) - &v * v.adjoint()).scale(0.5);
        assert_close(&partial_trace(&rho, Party::A).matrix, &want, 1e-14);
    }

    #[test]
    fn ghz_marginal_is_maximally_mixed() {
        let rho = family_state(&FamilySpec::Ghz3).unwrap();
        let red = partial_trace(&rho, Party::B);
        assert_close(&red.matrix, &DMatrix::identity(3, 3).scale(1.0 / 3.0), 1e-15);
        assert_abs_diff_eq!(red.purity, 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(concurrence_pure(&FamilySpec::Ghz3.pure_state().unwrap()), 1.154701, epsilon = 1e-6);
    }

    #[test]
    fn product_basis_state() {
        let psi = PureState::basis(Dims::QUTRITS, 0, 0).unwrap();
        let red = partial_trace(&psi.density(), Party::A);
        assert_eq!(red.purity, 1.0);
        assert_eq!(red.matrix[(0, 0)], r(1.0));
        assert_eq!(concurrence_pure(&psi), 0.0);
    }

    #[test]
    fn pure_and_mixed_routes_agree() {
        for i in 0..50 {
            let psi = sample_pure_state_at(Dims::new(3, 2), Sampler::HaarGaussian, 8, i);
            for keep in [Party::A, Party::B] {
                assert_close(&reduced_pure(&psi, keep).matrix, &partial_trace(&psi.density(), keep).matrix, 1e-14);
            }
            let (a, b) = (reduced_pure(&psi, Party::A).purity, reduced_pure(&psi, Party::B).purity);
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
            assert!(reduced_pure(&psi, Party::A).to_qudit().is_ok());
        }
    }

    #[test]
    fn analytic_values() {
        let x = r(1.0 / 3f64.sqrt());
        let g = analytic_concurrence(&FamilySpec::Sym { a11: x, a22: x, a33: x }).unwrap();
        assert_abs_diff_eq!(g, 2.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert_eq!(analytic_concurrence(&FamilySpec::Sym { a11: r(1.0), a22: r(0.0), a33: r(0.0) }).unwrap(), 0.0);
        assert_abs_diff_eq!(analytic_concurrence(&FamilySpec::Example1 { t: 0.25 }).unwrap(), 0.6, epsilon = 1e-15);
        let anti = FamilySpec::Antisym { a12: r(0.6), a13: r(0.0), a23: C64::new(0.0, 0.8) };
        assert_eq!(analytic_concurrence(&anti).unwrap(), 1.0);
    }

    #[test]
    fn analytic_matches_numeric() {
        let specs = [
            FamilySpec::Ghz3,
            FamilySpec::Antisym { a12: r(0.6), a13: C64::new(0.0, 0.48), a23: r(0.64) },
            FamilySpec::Sym { a11: C64::new(0.6, 0.0), a22: C64::new(0.0, 0.64), a33: C64::new(0.48, 0.0) },
            FamilySpec::Example1 { t: 0.0 },
            FamilySpec::Example1 { t: 0.3 },
            FamilySpec::Example1 { t: 1.0 },
            FamilySpec::Example2 { t: 0.0 },
            FamilySpec::Example2 { t: 0.45 },
            FamilySpec::Example2 { t: 1.0 },
            FamilySpec::Product { a: QuditDensity::diagonal(&[1.0, 0.0, 0.0]).unwrap(), b: QuditDensity::diagonal(&[0.0, 0.0, 1.0]).unwrap() },
        ];
        for spec in &specs {
            let numeric = concurrence_pure(&spec.pure_state().unwrap());
            assert_abs_diff_eq!(analytic_concurrence(spec).unwrap(), numeric, epsilon = 1e-10);
        }
    }

    #[test]
    fn mixed_families_rejected() {
        assert!(matches!(analytic_concurrence(&FamilySpec::Werner { phi: 0.0 }), Err(Error::NotPure(_))));
        assert!(matches!(analytic_concurrence(&FamilySpec::Horodecki { tau: 3.0 }), Err(Error::NotPure(_))));
        let mixed = QuditDensity::diagonal(&[0.5, 0.5, 0.0]).unwrap();
        assert!(analytic_concurrence(&FamilySpec::Product { a: mixed.clone(), b: mixed }).is_err());
    }
}
