use crate::error::{Error, Result};

/// Spacings below this are merged before forming ratios.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct GapRatioSeries {
    pub ratios: Vec<f64>,
}

impl GapRatioSeries {
    pub fn mean(&self) -> f64 {
        crate::observables::pairwise_sum(&self.ratios) / self.ratios.len() as f64
    }
}

/// `r_n = min(Δ_n, Δ_{n-1}) / max(Δ_n, Δ_{n-1})` for ascending `energies`.
pub fn gap_ratios(energies: &[f64]) -> Result<GapRatioSeries> {
    if energies.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(Error::param("energies must be finite and sorted ascending"));
    }
    let mut levels = Vec::with_capacity(energies.len());
    for &e in energies {
        match levels.last() {
            Some(&last) if e - last < DEGENERACY_TOLERANCE => {}
            _ => levels.push(e),
        }
    }
    if levels.len() < 3 {
        return Err(Error::param(format!(
            "gap ratios need at least 3 distinct levels, got {}",
            levels.len()
        )));
    }
    let ratios = levels
        .windows(3)
        .map(|w| {
            let (a, b) = (w[1] - w[0], w[2] - w[1]);
            a.min(b) / a.max(b)
        })
        .collect();
    Ok(GapRatioSeries { ratios })
}
