use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_T_MIN: f64 = 1e-2;
pub const DEFAULT_T_MAX: f64 = 1e5;
pub const DEFAULT_POINTS_PER_DECADE: usize = 20;

/// Log-spaced sample times.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub times: Vec<f64>,
    pub points_per_decade: usize,
    pub t_min: f64,
    pub t_max: f64,
}

impl TimeGrid {
    /// `t_min * 10^(k / points_per_decade)` up to and including `t_max`.
    pub fn log_spaced(t_min: f64, t_max: f64, points_per_decade: usize) -> Result<Self> {
        if !(t_min > 0.0 && t_max > t_min && t_max.is_finite()) {
            return Err(Error::param(format!("time grid needs 0 < t_min < t_max, got [{t_min}, {t_max}]")));
        }
        if points_per_decade == 0 {
            return Err(Error::param("points_per_decade must be positive"));
        }
        let decades = (t_max / t_min).log10();
        let steps = (decades * points_per_decade as f64 - 1e-9).ceil() as usize;
        let mut times: Vec<f64> = (0..=steps)
            .map(|k| t_min * 10f64.powf(k as f64 / points_per_decade as f64))
            .filter(|&t| t < t_max * (1.0 - 1e-12))
            .collect();
        times.push(t_max);
        Ok(TimeGrid {
            times,
            points_per_decade,
            t_min,
            t_max,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Indices of grid times inside `[lo, hi]`.
    pub fn window(&self, lo: f64, hi: f64) -> Vec<usize> {
        (0..self.times.len()).filter(|&k| self.times[k] >= lo && self.times[k] <= hi).collect()
    }
}

impl Default for TimeGrid {
    fn default() -> Self {
        TimeGrid::log_spaced(DEFAULT_T_MIN, DEFAULT_T_MAX, DEFAULT_POINTS_PER_DECADE).expect("default grid is valid")
    }
}
