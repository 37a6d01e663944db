//! γ against concurrence along the two one-parameter symmetric families,
//! written as CSV to stdout.

use qutrit_chsh::{analytic_curves, chsh_analysis, concurrence_pure, correlation_matrix_coeff, FamilySpec};

fn example1(t: f64) -> FamilySpec {
    FamilySpec::Example1 { t }
}

fn example2(t: f64) -> FamilySpec {
    FamilySpec::Example2 { t }
}

fn main() -> qutrit_chsh::Result<()> {
    println!("family,t,gamma,concurrence,analytic_gamma,analytic_concurrence");
    for (name, make) in [("example1", example1 as fn(f64) -> FamilySpec), ("example2", example2)] {
        for i in 0..=10 {
            let t = i as f64 / 10.0;
            let spec = make(t);
            let psi = spec.pure_state()?;
            let numeric = chsh_analysis(&correlation_matrix_coeff(&psi)?).gamma;
            let curve = analytic_curves(&spec)?;
            println!(
                "{name},{t:.1},{numeric:.9},{:.9},{:.9},{:.9}",
                concurrence_pure(&psi),
                curve.gamma,
                curve.concurrence
            );
        }
    }
    Ok(())
}
