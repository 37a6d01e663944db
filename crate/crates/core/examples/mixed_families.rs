//! Mixed two-qutrit families: the Werner line and the Horodecki segment,
//! plus a user-built mixture.

use qutrit_chsh::{
    analytic_gamma, chsh_analysis, correlation_matrix_trace, family_state, make_spin_operators, mix, FamilySpec,
    SpinQuantumNumber,
};

fn main() -> qutrit_chsh::Result<()> {
    let ops = make_spin_operators(SpinQuantumNumber::ONE);
    let gamma = |spec: &FamilySpec| -> qutrit_chsh::Result<f64> {
        Ok(chsh_analysis(&correlation_matrix_trace(&family_state(spec)?, &ops)?).gamma)
    };

    println!("Werner");
    for phi in [-1.0, -0.5, 0.0, 1.0 / 3.0, 0.5, 1.0] {
        let spec = FamilySpec::Werner { phi };
        println!("  phi {phi:>6.3}  gamma {:.6}  closed form {:.6}", gamma(&spec)?, analytic_gamma(&spec)?);
    }

    println!("Horodecki");
    for tau in [2.0, 3.0, 4.0, 5.0] {
        let spec = FamilySpec::Horodecki { tau };
        let rho = family_state(&spec)?;
        println!("  tau {tau}  gamma {:.6}  rank {}", gamma(&spec)?, rho.rank(1e-12));
    }

    let ghz = family_state(&FamilySpec::Ghz3)?;
    let werner = family_state(&FamilySpec::Werner { phi: -1.0 })?;
    println!("Mixtures of GHZ and the Φ = -1 Werner state");
    for p in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let rho = mix(&[(p, ghz.clone()), (1.0 - p, werner.clone())])?;
        println!("  p {p:.2}  gamma {:.6}", chsh_analysis(&correlation_matrix_trace(&rho, &ops)?).gamma);
    }
    Ok(())
}
