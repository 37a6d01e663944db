//! JSON state files: write a pure and a mixed state, read them back, and
//! validate.

use qutrit_chsh::state::TwoQuditState;
use qutrit_chsh::{family_state, FamilySpec};

fn main() -> qutrit_chsh::Result<()> {
    let pure = FamilySpec::Example1 { t: 0.3 }.pure_state()?.to_json()?;
    let mixed = family_state(&FamilySpec::Werner { phi: 0.2 })?.to_json()?;
    println!("pure state file:\n{pure}\n");
    for text in [&pure, &mixed] {
        let state = TwoQuditState::from_json(text)?;
        let rho = state.density();
        rho.validate()?;
        println!(
            "read {} state with dims {:?}, trace {:.12}, rank {}",
            if state.as_pure().is_some() { "pure" } else { "mixed" },
            state.dims(),
            rho.trace().re,
            rho.rank(1e-12)
        );
    }
    Ok(())
}
