//! Direct maximisation of the CHSH expectation over the four measurement
//! directions, independent of the singular-value formula.
//!
//! For a correlation matrix `Z` the expectation is the bilinear form
//! `f = a₁ᵀZ(b₁ + b₂) + a₂ᵀZ(b₁ − b₂)`. With Bob's directions fixed the
//! best Alice directions are `a₁ ∝ Z(b₁ + b₂)`, `a₂ ∝ Z(b₁ − b₂)`; with
//! Alice's fixed, `b₁ ∝ Zᵀ(a₁ + a₂)`, `b₂ ∝ Zᵀ(a₁ − a₂)`. Alternating the
//! two exact updates never decreases `f`.

use nalgebra::{Matrix3, Vector3};
use rand_distr::{Distribution, UnitSphere};
use rayon::prelude::*;
use serde::Serialize;

use crate::chsh::{singular_values, CorrelationMatrix3, MeasurementSetting};
use crate::spin::UnitVector3;
use crate::state::substream;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OptimizerConfig {
    pub max_iterations: usize,
    /// Stop once one sweep changes the objective by less than this.
    pub convergence_tol: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { max_iterations: 500, convergence_tol: 1e-12, restarts: 8, seed: 0 }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be at least 1".into()));
        }
        if !(self.convergence_tol > 0.0) {
            return Err(Error::InvalidConfig("convergence_tol must be positive".into()));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OptimizationResult {
    pub setting: MeasurementSetting,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn vec3(u: &UnitVector3) -> Vector3<f64> {
    Vector3::from(u.as_array())
}

fn unit(v: Vector3<f64>) -> Option<UnitVector3> {
    UnitVector3::normalize([v.x, v.y, v.z])
}

/// `a₁ᵀZ(b₁ + b₂) + a₂ᵀZ(b₁ − b₂)`.
pub fn bilinear_reduce(z: &CorrelationMatrix3, setting: &MeasurementSetting) -> f64 {
    let m = z.entries();
    let (b1, b2) = (vec3(&setting.b1), vec3(&setting.b2));
    vec3(&setting.a1).dot(&(m * (b1 + b2))) + vec3(&setting.a2).dot(&(m * (b1 - b2)))
}

/// State of one alternating ascent run.
#[derive(Clone, Debug)]
pub struct AlternatingMaximizer {
    z: Matrix3<f64>,
    setting: MeasurementSetting,
}

impl AlternatingMaximizer {
    pub fn new(z: &CorrelationMatrix3, start: MeasurementSetting) -> Self {
        Self { z: *z.entries(), setting: start }
    }

    pub fn setting(&self) -> &MeasurementSetting {
        &self.setting
    }

    pub fn value(&self) -> f64 {
        let (b1, b2) = (vec3(&self.setting.b1), vec3(&self.setting.b2));
        vec3(&self.setting.a1).dot(&(self.z * (b1 + b2))) + vec3(&self.setting.a2).dot(&(self.z * (b1 - b2)))
    }

    /// One sweep: best Alice directions for the current Bob directions, then
    /// best Bob directions for the new Alice directions. Returns the
    /// objective afterwards. A direction whose target vector vanishes is
    /// left unchanged.
    pub fn step(&mut self) -> f64 {
        let s = &mut self.setting;
        let (b1, b2) = (vec3(&s.b1), vec3(&s.b2));
        if let Some(a1) = unit(self.z * (b1 + b2)) {
            s.a1 = a1;
        }
        if let Some(a2) = unit(self.z * (b1 - b2)) {
            s.a2 = a2;
        }
        let zt = self.z.transpose();
        let (a1, a2) = (vec3(&s.a1), vec3(&s.a2));
        if let Some(b1) = unit(zt * (a1 + a2)) {
            s.b1 = b1;
        }
        if let Some(b2) = unit(zt * (a1 - a2)) {
            s.b2 = b2;
        }
        self.value()
    }
}

fn random_start(seed: u64, restart: u64) -> MeasurementSetting {
    let mut rng = substream(seed, restart);
    let mut draw = || {
        let v: [f64; 3] = UnitSphere.sample(&mut rng);
        UnitVector3::normalize(v).expect("sphere samples are nonzero")
    };
    let (b1, b2) = (draw(), draw());
    // Alice directions are overwritten by the first half-step
    MeasurementSetting::new(UnitVector3::E3, UnitVector3::E3, b1, b2)
}

fn run_restart(z: &CorrelationMatrix3, cfg: &OptimizerConfig, restart: u64) -> OptimizationResult {
    let mut opt = AlternatingMaximizer::new(z, random_start(cfg.seed, restart));
    let mut previous = f64::NEG_INFINITY;
    for iteration in 1..=cfg.max_iterations {
        let value = opt.step();
        if (value - previous).abs() < cfg.convergence_tol {
            return OptimizationResult { setting: opt.setting, value, iterations: iteration, converged: true };
        }
        previous = value;
    }
    OptimizationResult { setting: opt.setting, value: previous, iterations: cfg.max_iterations, converged: false }
}

/// Best of `cfg.restarts` alternating ascents from random Bob directions.
///
/// Restart `i` draws its start from stream `i` of `cfg.seed`, so the result
/// does not depend on how restarts are scheduled. `converged` is false only
/// if no restart met the tolerance.
pub fn optimize_settings(z: &CorrelationMatrix3, cfg: &OptimizerConfig) -> Result<OptimizationResult> {
    cfg.validate()?;
    if !z.entries().iter().all(|x| x.is_finite()) {
        return Err(Error::InvalidConfig("correlation matrix has non-finite entries".into()));
    }
    let runs: Vec<OptimizationResult> =
        (0..cfg.restarts as u64).into_par_iter().map(|r| run_restart(z, cfg, r)).collect();
    let converged = runs.iter().any(|r| r.converged);
    let mut best = runs
        .into_iter()
        .reduce(|best, r| if r.value > best.value { r } else { best })
        .expect("at least one restart");
    best.converged = converged;
    Ok(best)
}

fn compose_setting(sv: [f64; 2], u: [Vector3<f64>; 2], v: [Vector3<f64>; 2]) -> MeasurementSetting {
    let theta = sv[1].atan2(sv[0]);
    let (c, s) = (theta.cos(), theta.sin());
    let to_unit = |x: Vector3<f64>| unit(x).expect("combination of orthonormal vectors");
    MeasurementSetting::new(to_unit(u[0]), to_unit(u[1]), to_unit(v[0] * c + v[1] * s), to_unit(v[0] * c - v[1] * s))
}

/// Maximising setting built from the top two singular triples
/// `Z vᵢ = σᵢ uᵢ`: `a_i = u_i`, `b₁,₂ = cos θ v₁ ± sin θ v₂` with
/// `θ = atan2(z̃, z)`. Attains `2√(z² + z̃²)`.
pub fn settings_from_svd(z: &CorrelationMatrix3) -> Result<MeasurementSetting> {
    let sv = singular_values(z);
    if sv[0] <= f64::EPSILON * 16.0 {
        return Err(Error::DegenerateCorrelation);
    }
    let svd = z.entries().svd(true, true);
    let (u, v_t) = (svd.u.expect("requested"), svd.v_t.expect("requested"));
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let u1: Vector3<f64> = u.column(order[0]).into();
    let u2: Vector3<f64> = u.column(order[1]).into();
    let v1: Vector3<f64> = v_t.row(order[0]).transpose();
    let v2: Vector3<f64> = v_t.row(order[1]).transpose();
    Ok(compose_setting([sv[0], sv[1]], [u1, u2], [v1, v2]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chsh::chsh_analysis;
    use crate::spin::SpinQuantumNumber;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::SQRT_2;

    fn diag(a: f64, b: f64, c: f64) -> CorrelationMatrix3 {
        CorrelationMatrix3::from_rows([[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]], SpinQuantumNumber::ONE)
    }

    #[test]
    fn bilinear_examples() {
        let e3 = UnitVector3::E3;
        let v = bilinear_reduce(&diag(0.0, 0.0, 1.0), &MeasurementSetting::new(e3, e3, e3, -e3));
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-15);

        let z = CorrelationMatrix3::from_rows([[0.3, -0.1, 0.2], [0.0, 0.5, 0.1], [-0.4, 0.2, 0.1]], SpinQuantumNumber::ONE);
        let a1 = UnitVector3::normalize([1.0, 2.0, -1.0]).unwrap();
        let b = UnitVector3::normalize([0.3, -0.3, 0.9]).unwrap();
        let single = vec3(&a1).dot(&(z.entries() * vec3(&b)));
        for a2 in [UnitVector3::E1, UnitVector3::E2, -UnitVector3::E3] {
            let v = bilinear_reduce(&z, &MeasurementSetting::new(a1, a2, b, b));
            assert_abs_diff_eq!(v, 2.0 * single, epsilon = 1e-15);
        }
    }

    #[test]
    fn optimizer_reaches_horodecki_maximum() {
        let z = diag(4.0 / 21.0, -4.0 / 21.0, -1.0 / 21.0);
        let r = optimize_settings(&z, &OptimizerConfig::default()).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, 8.0 * SQRT_2 / 21.0, epsilon = 1e-6);
        assert_abs_diff_eq!(bilinear_reduce(&z, &r.setting), r.value, epsilon = 1e-12);
    }

    #[test]
    fn optimizer_on_zero_matrix() {
        let r = optimize_settings(&CorrelationMatrix3::zero(SpinQuantumNumber::ONE), &OptimizerConfig::default()).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.converged);
    }

    #[test]
    fn optimizer_is_deterministic() {
        let z = CorrelationMatrix3::from_rows([[0.3, -0.1, 0.2], [0.0, 0.5, 0.1], [-0.4, 0.2, 0.1]], SpinQuantumNumber::ONE);
        let cfg = OptimizerConfig { seed: 42, ..Default::default() };
        assert_eq!(optimize_settings(&z, &cfg).unwrap(), optimize_settings(&z, &cfg).unwrap());
    }

    #[test]
    fn rejects_bad_config() {
        let z = diag(1.0, 0.0, 0.0);
        for cfg in [
            OptimizerConfig { max_iterations: 0, ..Default::default() },
            OptimizerConfig { restarts: 0, ..Default::default() },
            OptimizerConfig { convergence_tol: 0.0, ..Default::default() },
        ] {
            assert!(optimize_settings(&z, &cfg).is_err());
        }
    }

    #[test]
    fn unconverged_is_reported() {
        let z = CorrelationMatrix3::from_rows([[0.3, -0.1, 0.2], [0.0, 0.5, 0.1], [-0.4, 0.2, 0.1]], SpinQuantumNumber::ONE);
        let cfg = OptimizerConfig { max_iterations: 1, ..Default::default() };
        let r = optimize_settings(&z, &cfg).unwrap();
        assert!(!r.converged);
        assert_eq!(r.iterations, 1);
    }

    #[test]
    fn svd_setting_rank_one() {
        let z = diag(1.0, 0.0, 0.0);
        let s = settings_from_svd(&z).unwrap();
        assert_abs_diff_eq!(s.a1.as_array()[0].abs(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.b1.dot(&s.b2), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.b1.as_array()[0].abs(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(bilinear_reduce(&z, &s), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn svd_setting_examples() {
        let ghz = diag(2.0 / 3.0, -2.0 / 3.0, 2.0 / 3.0);
        assert_abs_diff_eq!(bilinear_reduce(&ghz, &settings_from_svd(&ghz).unwrap()), 4.0 * SQRT_2 / 3.0, epsilon = 1e-12);
        let hor = diag(4.0 / 21.0, -4.0 / 21.0, -1.0 / 21.0);
        assert_abs_diff_eq!(bilinear_reduce(&hor, &settings_from_svd(&hor).unwrap()), 8.0 * SQRT_2 / 21.0, epsilon = 1e-12);
    }

    #[test]
    fn svd_rejects_zero() {
        assert!(matches!(settings_from_svd(&CorrelationMatrix3::zero(SpinQuantumNumber::ONE)), Err(Error::DegenerateCorrelation)));
    }

    #[test]
    fn flipping_singular_directions_keeps_value() {
        let z = CorrelationMatrix3::from_rows([[0.3, -0.1, 0.2], [0.0, 0.5, 0.1], [-0.4, 0.2, 0.1]], SpinQuantumNumber::ONE);
        let svd = z.entries().svd(true, true);
        let (u, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
        let sv = [svd.singular_values[idx[0]], svd.singular_values[idx[1]]];
        let target = chsh_analysis(&z).upsilon;
        for flip in 0..4 {
            let s0 = if flip & 1 == 1 { -1.0 } else { 1.0 };
            let s1 = if flip & 2 == 2 { -1.0 } else { 1.0 };
            let uu = [u.column(idx[0]) * s0, u.column(idx[1]) * s1];
            let vv = [vt.row(idx[0]).transpose() * s0, vt.row(idx[1]).transpose() * s1];
            let setting = compose_setting(sv, uu, vv);
            assert_abs_diff_eq!(bilinear_reduce(&z, &setting), target, epsilon = 1e-12);
        }
    }

    #[test]
    fn ascent_is_monotone() {
        let z = CorrelationMatrix3::from_rows([[0.3, -0.1, 0.2], [0.0, 0.5, 0.1], [-0.4, 0.2, 0.1]], SpinQuantumNumber::ONE);
        for restart in 0..10 {
            let mut opt = AlternatingMaximizer::new(&z, random_start(5, restart));
            let mut last = f64::NEG_INFINITY;
            for _ in 0..100 {
                let v = opt.step();
                assert!(v >= last - 1e-12, "{v} < {last}");
                last = v;
            }
        }
    }
}
