//! Spin correlation matrix, CHSH parameter and closed forms.

mod analysis;
pub mod closed_form;
mod correlation;

pub use analysis::{chsh_analysis, chsh_expectation, singular_values, ChshAnalysis, MeasurementSetting, VIOLATION_TOLERANCE};
pub use closed_form::{analytic_curves, analytic_gamma, CurvePoint};
pub use correlation::{correlation_matrix_coeff, correlation_matrix_trace, CorrelationMatrix3};
