//! Maximum of the CHSH expectation under local spin-s measurements on
//! two-qudit states, specialised to spin-1 (two qutrits).
//!
//! The central quantity is the spin correlation matrix
//! `Z_ij = tr[ρ (S_i ⊗ S_j)]`. Its two largest singular values `z ≥ z̃`
//! give the maximum CHSH expectation `Υ = 2 √(z² + z̃²)` and the CHSH
//! parameter `γ = √(z² + z̃²) / s²`; the CHSH inequality is violated iff
//! `γ > 1`.
//!
//! Modules:
//!
//! * [`spin`] builds spin-s component operators and projections `r · S`.
//! * [`state`] holds pure and mixed two-qudit states, the named qutrit
//!   families and the seeded random samplers.
//! * [`chsh`] computes `Z` by the operator-trace route and by the
//!   coefficient-tensor route, the CHSH analysis, and closed forms.
//! * [`optimizer`] maximises the CHSH expectation directly over four unit
//!   vectors, as an independent check of the singular-value formula.
//! * [`entanglement`] provides partial traces and pure-state concurrence.
//! * [`montecarlo`] scans random pure two-qutrit states.
//! * [`cli`] is the command-line front end used by the `qutrit-chsh` binary.

pub mod chsh;
pub mod cli;
pub mod entanglement;
pub mod error;
pub mod montecarlo;
pub mod optimizer;
pub mod spin;
pub mod state;

mod linalg;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = nalgebra::Complex<f64>;

pub use chsh::{
    analytic_curves, analytic_gamma, chsh_analysis, chsh_expectation, correlation_matrix_coeff,
    correlation_matrix_trace, ChshAnalysis, CorrelationMatrix3, CurvePoint, MeasurementSetting,
};
pub use entanglement::{analytic_concurrence, concurrence_pure, partial_trace, Party, ReducedState};
pub use montecarlo::{run_scan, table_rows, ScanConfig, ScanReport};
pub use optimizer::{bilinear_reduce, optimize_settings, settings_from_svd, OptimizationResult, OptimizerConfig};
pub use spin::{make_spin_operators, spin_projection, validate_spin_algebra, SpinOperators, SpinQuantumNumber, UnitVector3};
pub use state::{
    family_state, mix, pure_to_density, sample_pure_state, DensityMatrix, Dims, FamilySpec, PureState, QuditDensity,
    Sampler,
};
