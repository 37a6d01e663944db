//! γ for symmetric states α₁₁|11⟩ + α₂₂|22⟩ + α₃₃|33⟩: GHZ, a few custom
//! coefficient choices, and agreement of the two correlation routes.

use qutrit_chsh::{
    analytic_gamma, chsh_analysis, correlation_matrix_coeff, correlation_matrix_trace, make_spin_operators, FamilySpec,
    SpinQuantumNumber, C64,
};

fn main() -> qutrit_chsh::Result<()> {
    let ops = make_spin_operators(SpinQuantumNumber::ONE);
    let s = 1.0 / 3f64.sqrt();
    let specs = [
        ("ghz", FamilySpec::Ghz3),
        ("(1, i, -1)/sqrt3", FamilySpec::Sym { a11: C64::new(s, 0.0), a22: C64::new(0.0, s), a33: C64::new(-s, 0.0) }),
        ("(0.8, 0, 0.6)", FamilySpec::Sym { a11: C64::new(0.8, 0.0), a22: C64::new(0.0, 0.0), a33: C64::new(0.6, 0.0) }),
        ("(0.6, 0.8, 0)", FamilySpec::Sym { a11: C64::new(0.6, 0.0), a22: C64::new(0.8, 0.0), a33: C64::new(0.0, 0.0) }),
    ];
    for (label, spec) in specs {
        let psi = spec.pure_state()?;
        let coeff = correlation_matrix_coeff(&psi)?;
        let trace = correlation_matrix_trace(&psi.density(), &ops)?;
        let a = chsh_analysis(&coeff);
        println!(
            "{label:<18} gamma {:.9}  closed form {:.9}  routes differ by {:.1e}",
            a.gamma,
            analytic_gamma(&spec)?,
            coeff.max_abs_diff(&trace)
        );
    }

    let z = correlation_matrix_coeff(&FamilySpec::Ghz3.pure_state()?)?;
    println!("\nGHZ correlation matrix:\n{}", z.entries());
    Ok(())
}
