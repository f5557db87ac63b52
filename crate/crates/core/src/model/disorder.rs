use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Random on-site fields `h_k` drawn uniformly from `[-h, h]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisorderField {
    values: Vec<f64>,
    strength: f64,
    seed: u64,
}

impl DisorderField {
    /// Field with explicitly given values; `strength` is taken as `max |h_k|`.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("disorder values must be finite"));
        }
        let strength = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(DisorderField {
            values,
            strength,
            seed: 0,
        })
    }

    pub fn zeros(n_sites: usize) -> Self {
        DisorderField {
            values: vec![0.0; n_sites],
            strength: 0.0,
            seed: 0,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

pub fn sample_disorder(strength: f64, n_sites: usize, seed: u64) -> Result<DisorderField> {
    if !(strength >= 0.0 && strength.is_finite()) {
        return Err(Error::param(format!(
            "disorder strength must be finite and non-negative, got {strength}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..n_sites)
        .map(|_| strength * (2.0 * rng.random::<f64>() - 1.0))
        .collect();
    Ok(DisorderField {
        values,
        strength,
        seed,
    })
}
