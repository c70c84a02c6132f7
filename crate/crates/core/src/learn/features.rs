use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Random Fourier features `φ_r(z) = √(2/R)·cos(γ·w_r·z + b_r)` with
/// standard-normal `w_r` and uniform `b_r ∈ [0, 2π)`. Inner products of
/// feature vectors approximate the Gaussian kernel `exp(−γ²‖z−z'‖²/2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMap {
    pub frequencies: Vec<Vec<f64>>,
    pub offsets: Vec<f64>,
    pub gamma: f64,
    pub seed: u64,
}

impl FeatureMap {
    pub fn new(num_features: usize, input_dim: usize, gamma: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let frequencies = (0..num_features)
            .map(|_| (0..input_dim).map(|_| rng.sample(StandardNormal)).collect())
            .collect();
        let offsets = (0..num_features).map(|_| rng.random::<f64>() * 2.0 * PI).collect();
        FeatureMap {
            frequencies,
            offsets,
            gamma,
            seed,
        }
    }

    pub fn num_features(&self) -> usize {
        self.offsets.len()
    }

    pub fn input_dim(&self) -> usize {
        self.frequencies.first().map_or(0, Vec::len)
    }
}

pub fn rff_features(patch: &[f64], map: &FeatureMap) -> Result<Vec<f64>> {
    if patch.len() != map.input_dim() && map.num_features() > 0 {
        return Err(Error::Dimension {
            expected: map.input_dim(),
            got: patch.len(),
        });
    }
    let scale = (2.0 / map.num_features() as f64).sqrt();
    Ok(map
        .frequencies
        .iter()
        .zip(&map.offsets)
        .map(|(w, b)| {
            let proj: f64 = w.iter().zip(patch).map(|(a, z)| a * z).sum();
            scale * (map.gamma * proj + b).cos()
        })
        .collect())
}
