//! The same machinery on two qubits, where the singlet reaches the
//! Tsirelson value γ = √2.

use qutrit_chsh::{
    chsh_analysis, correlation_matrix_trace, make_spin_operators, optimize_settings, Dims, OptimizerConfig, PureState,
    SpinQuantumNumber, C64,
};

fn main() -> qutrit_chsh::Result<()> {
    let ops = make_spin_operators(SpinQuantumNumber::HALF);
    let h = C64::new(1.0 / 2f64.sqrt(), 0.0);
    let zero = C64::new(0.0, 0.0);
    let states = [
        ("singlet", vec![zero, h, -h, zero]),
        ("triplet0", vec![zero, h, h, zero]),
        ("product", vec![C64::new(1.0, 0.0), zero, zero, zero]),
    ];
    for (name, amps) in states {
        let rho = PureState::new(Dims::square(2), amps)?.density();
        let z = correlation_matrix_trace(&rho, &ops)?;
        let a = chsh_analysis(&z);
        let opt = optimize_settings(&z, &OptimizerConfig::default())?;
        println!("{name:<9} gamma {:.12}  violated {}  optimizer {:.12}", a.gamma, a.violated, opt.value);
    }
    Ok(())
}
