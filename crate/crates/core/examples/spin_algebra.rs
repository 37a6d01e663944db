//! Spin operators for several s, their algebra residuals, and the spectrum
//! of a projection onto a random-looking direction.

use qutrit_chsh::{make_spin_operators, spin_projection, validate_spin_algebra, SpinQuantumNumber, UnitVector3};

fn main() -> qutrit_chsh::Result<()> {
    let r = UnitVector3::normalize([0.3, -0.5, 0.8]).expect("nonzero");
    for twice in 1..=6 {
        let s = SpinQuantumNumber::from_twice(twice)?;
        let ops = make_spin_operators(s);
        let report = validate_spin_algebra(&ops);
        let mut spectrum: Vec<f64> = spin_projection(&ops, &r).symmetric_eigenvalues().iter().copied().collect();
        spectrum.sort_by(f64::total_cmp);
        println!(
            "s = {s}  dim {}  max residual {:.1e}  spectrum of r.S: {:?}",
            ops.dim(),
            report.max_residual(),
            spectrum.iter().map(|x| (x * 1e9).round() / 1e9).collect::<Vec<_>>()
        );
    }

    let one = make_spin_operators(SpinQuantumNumber::ONE);
    println!("\nS_z for s = 1:\n{}", one.component(2).map(|z| z.re));
    Ok(())
}
