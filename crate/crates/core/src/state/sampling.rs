//! Seeded random pure states.
//!
//! Every draw comes from a ChaCha8 stream selected by `(seed, index)`:
//! the generator is seeded with `seed_from_u64(seed)` and switched to
//! stream number `index`. Sample `i` of a scan therefore does not depend on
//! how the scan is split across threads.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{Dims, PureState};
use crate::C64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
pub enum Sampler {
    /// Real and imaginary parts i.i.d. uniform on `[0, 1)`, then normalized.
    #[default]
    #[serde(rename = "paper")]
    #[value(name = "paper", alias = "paper-uniform-square", alias = "uniform-square")]
    UniformSquare,
    /// I.i.d. standard complex Gaussian amplitudes, then normalized
    /// (unitarily invariant).
    #[serde(rename = "haar")]
    #[value(name = "haar", alias = "haar-gaussian")]
    HaarGaussian,
}

/// The generator for draw number `index` under `seed`.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn draw_amplitude<R: Rng + ?Sized>(sampler: Sampler, rng: &mut R) -> C64 {
    match sampler {
        Sampler::UniformSquare => C64::new(rng.random::<f64>(), rng.random::<f64>()),
        Sampler::HaarGaussian => {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re, im)
        }
    }
}

/// Draw from an arbitrary generator.
pub fn draw_pure_state<R: Rng + ?Sized>(dims: Dims, sampler: Sampler, rng: &mut R) -> PureState {
    loop {
        let amps: Vec<C64> = (0..dims.total()).map(|_| draw_amplitude(sampler, rng)).collect();
        // an all-zero draw has probability zero but would not normalize
        if let Ok(p) = PureState::normalized(dims, amps) {
            return p;
        }
    }
}

/// Draw number `index` of the sequence determined by `seed`.
pub fn sample_pure_state_at(dims: Dims, sampler: Sampler, seed: u64, index: u64) -> PureState {
    draw_pure_state(dims, sampler, &mut substream(seed, index))
}

/// The first draw under `seed`.
pub fn sample_pure_state(dims: Dims, sampler: Sampler, seed: u64) -> PureState {
    sample_pure_state_at(dims, sampler, seed, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn samples_are_normalized() {
        for seed in 0..50 {
            for sampler in [Sampler::UniformSquare, Sampler::HaarGaussian] {
                let p = sample_pure_state(Dims::QUTRITS, sampler, seed);
                let n: f64 = p.amplitudes().iter().map(|a| a.norm_sqr()).sum();
                assert_abs_diff_eq!(n, 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn uniform_square_stays_in_first_quadrant() {
        for i in 0..200 {
            let p = sample_pure_state_at(Dims::QUTRITS, Sampler::UniformSquare, 9, i);
            assert!(p.amplitudes().iter().all(|a| a.re >= 0.0 && a.im >= 0.0));
        }
    }

    #[test]
    fn draws_are_reproducible_and_distinct() {
        let a = sample_pure_state_at(Dims::QUTRITS, Sampler::HaarGaussian, 1, 7);
        let b = sample_pure_state_at(Dims::QUTRITS, Sampler::HaarGaussian, 1, 7);
        let c = sample_pure_state_at(Dims::QUTRITS, Sampler::HaarGaussian, 1, 8);
        let d = sample_pure_state_at(Dims::QUTRITS, Sampler::HaarGaussian, 2, 7);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn haar_marginal_mean() {
        // |ψ₁₁|² is Beta(1, 8) distributed with mean 1/9
        let n = 10_000;
        let xs: Vec<f64> = (0..n)
            .map(|i| sample_pure_state_at(Dims::QUTRITS, Sampler::HaarGaussian, 2024, i).amplitudes()[0].norm_sqr())
            .collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        assert!((mean - 1.0 / 9.0).abs() < 3.0 * se, "mean {mean}, se {se}");
    }
}
