//! Antisymmetric qutrit states: γ stays in [1/√2, 1] and the singular values
//! follow {0, ½|1 ± q|} with q = |α₁₃² − 2α₁₂α₂₃|.

use qutrit_chsh::chsh::singular_values;
use qutrit_chsh::{chsh_analysis, concurrence_pure, correlation_matrix_coeff, FamilySpec, C64};

fn main() -> qutrit_chsh::Result<()> {
    let h = 1.0 / 2f64.sqrt();
    let t = 1.0 / 3f64.sqrt();
    let cases = [
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        [C64::new(h, 0.0), C64::new(0.0, 0.0), C64::new(0.0, h)],
        [C64::new(t, 0.0), C64::new(0.0, t), C64::new(-t, 0.0)],
    ];
    for [a12, a13, a23] in cases {
        let psi = FamilySpec::Antisym { a12, a13, a23 }.pure_state()?;
        let z = correlation_matrix_coeff(&psi)?;
        let q = (a13 * a13 - a12 * a23 * 2.0).norm();
        let sv = singular_values(&z);
        println!(
            "alpha = ({a12:.3}, {a13:.3}, {a23:.3})  q {q:.4}  sv {:.4?}  gamma {:.6}  C {:.3}",
            sv,
            chsh_analysis(&z).gamma,
            concurrence_pure(&psi)
        );
    }
    Ok(())
}
