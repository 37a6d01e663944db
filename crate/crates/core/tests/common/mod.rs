#![allow(dead_code)]

use nalgebra::DMatrix;
use qutrit_chsh::state::substream;
use qutrit_chsh::{mix, DensityMatrix, Dims, PureState, QuditDensity, C64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64, index: u64) -> ChaCha8Rng {
    substream(seed, index)
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Unit vector of `n` complex amplitudes, unitarily invariant.
pub fn unit_complex(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn pure(rng: &mut ChaCha8Rng, dims: Dims) -> PureState {
    PureState::normalized(dims, unit_complex(rng, dims.total())).unwrap()
}

/// Positive weights summing to one.
pub fn weights(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| rng.random::<f64>() + 1e-3).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// Mixture of `k` random pure states, with its components.
pub fn mixture(rng: &mut ChaCha8Rng, dims: Dims, k: usize) -> (DensityMatrix, Vec<(f64, PureState)>) {
    let parts: Vec<(f64, PureState)> = weights(rng, k).into_iter().map(|w| (w, pure(rng, dims))).collect();
    let terms: Vec<(f64, DensityMatrix)> = parts.iter().map(|(w, p)| (*w, p.density())).collect();
    (mix(&terms).unwrap(), parts)
}

/// Random full-rank single-qudit state `GG†/tr(GG†)`.
pub fn qudit(rng: &mut ChaCha8Rng, d: usize) -> QuditDensity {
    let g = DMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    QuditDensity::new(m.unscale(tr)).unwrap()
}
