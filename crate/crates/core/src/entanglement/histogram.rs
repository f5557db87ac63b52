use std::path::Path;

use crate::error::{Error, Result};
use crate::output::{fmt_float, write_csv};

pub const DEFAULT_HISTOGRAM_EPS: f64 = 5e-3;

/// Normalized distribution `P(G)` on bins of width `2 eps` starting at 0.
#[derive(Clone, Debug, PartialEq)]
pub struct GgmHistogram {
    pub eps: f64,
    pub centers: Vec<f64>,
    pub mass: Vec<f64>,
    pub n_samples: usize,
}

/// Bins cover `[0, 0.5 + 2 eps]`; samples past the upper edge fall in the last bin.
pub fn ggm_histogram(samples: &[f64], eps: f64) -> Result<GgmHistogram> {
    if samples.is_empty() {
        return Err(Error::param("histogram needs at least one sample"));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::param(format!("bin half-width must be positive, got {eps}")));
    }
    let width = 2.0 * eps;
    let n_bins = ((0.5 + width) / width - 1e-9).ceil() as usize;
    let mut counts = vec![0usize; n_bins];
    for &g in samples {
        if !g.is_finite() || g < 0.0 {
            return Err(Error::param(format!("invalid GGM sample {g}")));
        }
        let bin = ((g / width).floor() as usize).min(n_bins - 1);
        counts[bin] += 1;
    }
    let total = samples.len() as f64;
    Ok(GgmHistogram {
        eps,
        centers: (0..n_bins).map(|i| (i as f64 + 0.5) * width).collect(),
        mass: counts.iter().map(|&c| c as f64 / total).collect(),
        n_samples: samples.len(),
    })
}

impl GgmHistogram {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let rows = self.centers.iter().zip(&self.mass).map(|(c, m)| vec![fmt_float(*c), fmt_float(*m)]);
        write_csv(path, &["bin_center", "mass"], rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn constant_samples_fill_one_bin() {
        let h = ggm_histogram(&[0.3; 50], DEFAULT_HISTOGRAM_EPS).unwrap();
        assert_eq!(h.mass.len(), 51);
        let filled: Vec<_> = h.mass.iter().filter(|&&m| m > 0.0).collect();
        assert_eq!(filled, vec![&1.0]);
        let idx = h.mass.iter().position(|&m| m > 0.0).unwrap();
        assert!((h.centers[idx] - 0.3).abs() <= DEFAULT_HISTOGRAM_EPS + 1e-12);
    }

    #[test]
    fn uniform_samples_are_flat() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let samples: Vec<f64> = (0..1_000_000).map(|_| 0.5 * rng.random::<f64>()).collect();
        let h = ggm_histogram(&samples, DEFAULT_HISTOGRAM_EPS).unwrap();
        assert!((h.mass.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // 50 bins span [0, 0.5]; the last bin lies above the support.
        for &m in &h.mass[..50] {
            assert!((m - 0.02).abs() < 0.05 * 0.02, "mass {m}");
        }
        assert_eq!(h.mass[50], 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ggm_histogram(&[], 0.01).is_err());
        assert!(ggm_histogram(&[0.1], 0.0).is_err());
    }
}
