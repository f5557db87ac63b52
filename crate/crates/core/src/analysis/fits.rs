//! Transient growth and steady-state size scaling of the quench GGM.

use serde::{Deserialize, Serialize};

use crate::dynamics::QuenchSeries;
use crate::error::{Error, Result};

/// Growth rate below which a run counts as localized.
pub const ALPHA_THRESHOLD: f64 = 0.0025;

pub const DEFAULT_TRANSIENT_WINDOW: (f64, f64) = (2.0, 1e3);

pub const MIN_TRANSIENT_POINTS: usize = 10;

/// Relative spread of plateau values under which the size scaling is flat.
pub const FLAT_PLATEAU: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransientFit {
    /// Slope against `ln t` with the prefactor fixed to one.
    pub alpha: f64,
    pub b: f64,
    pub t_lo: f64,
    pub t_hi: f64,
    /// Root-mean-square residual.
    pub residual: f64,
    pub n_points: usize,
}

/// Least-squares line of `values` against `ln t` over `[t_lo, t_hi]`.
pub fn transient_fit_points(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<TransientFit> {
    if times.len() != values.len() {
        return Err(Error::param("times and values differ in length"));
    }
    let (x, y): (Vec<f64>, Vec<f64>) = times
        .iter()
        .zip(values)
        .filter(|(t, _)| **t >= window.0 && **t <= window.1)
        .map(|(t, v)| (t.ln(), *v))
        .unzip();
    let n = x.len();
    if n < MIN_TRANSIENT_POINTS {
        return Err(Error::Fit(format!(
            "transient window [{}, {}] holds {n} points, need {MIN_TRANSIENT_POINTS}",
            window.0, window.1
        )));
    }
    // Shifted by the first value so that a flat series has exactly zero slope.
    let y0 = y[0];
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().map(|v| v - y0).sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - y0 - my)).sum();
    let alpha = sxy / sxx;
    let b = y0 + my - alpha * mx;
    let ss: f64 = x.iter().zip(&y).map(|(a, v)| (v - alpha * a - b).powi(2)).sum();
    Ok(TransientFit {
        alpha,
        b,
        t_lo: window.0,
        t_hi: window.1,
        residual: (ss / n as f64).sqrt(),
        n_points: n,
    })
}

pub fn transient_fit(series: &QuenchSeries, window: Option<(f64, f64)>) -> Result<TransientFit> {
    transient_fit_points(&series.grid.times, &series.mean_ggm, window.unwrap_or(DEFAULT_TRANSIENT_WINDOW))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteadyFit {
    pub c: f64,
    pub beta: f64,
    pub d: f64,
    /// Root-mean-square residual.
    pub residual: f64,
    /// Plateau flat across sizes; `β` and `c` set to zero.
    pub degenerate: bool,
}

// Best (c, d) for a fixed exponent and the resulting squared residual.
fn project(points: &[(f64, f64)], beta: f64) -> (f64, f64, f64) {
    let n = points.len() as f64;
    let u: Vec<f64> = points.iter().map(|p| p.0.powf(beta)).collect();
    let mu = u.iter().sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let suu: f64 = u.iter().map(|v| (v - mu).powi(2)).sum();
    let suy: f64 = u.iter().zip(points).map(|(a, p)| (a - mu) * (p.1 - my)).sum();
    let c = if suu > 0.0 { suy / suu } else { 0.0 };
    let d = my - c * mu;
    let ss = u.iter().zip(points).map(|(a, p)| (p.1 - c * a - d).powi(2)).sum();
    (c, d, ss)
}

const BETA_RANGE: (f64, f64) = (-6.0, 6.0);
const BETA_SCAN_STEP: f64 = 0.01;
const MAX_REFINE_ITER: usize = 200;

/// `G = c N^β + d` by variable projection over `β`.
///
/// `(c, d)` are linear given `β`; the exponent is scanned, seeded by the
/// log-log slope of the offset plateau values, and refined by golden section.
pub fn steady_scaling_fit(points: &[(usize, f64)]) -> Result<SteadyFit> {
    let mut sizes: Vec<usize> = points.iter().map(|p| p.0).collect();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < 3 {
        return Err(Error::DegenerateData(format!("steady-state scaling needs three sizes, got {}", sizes.len())));
    }
    let pts: Vec<(f64, f64)> = points.iter().map(|&(n, g)| (n as f64, g)).collect();
    if pts.iter().any(|p| !p.1.is_finite()) {
        return Err(Error::param("non-finite plateau value"));
    }
    let (lo, hi) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.1), b.max(p.1)));
    let mean = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
    if hi - lo < FLAT_PLATEAU * mean.abs() || hi == lo {
        let ss: f64 = pts.iter().map(|p| (p.1 - mean).powi(2)).sum();
        return Ok(SteadyFit {
            c: 0.0,
            beta: 0.0,
            d: mean,
            residual: (ss / pts.len() as f64).sqrt(),
            degenerate: true,
        });
    }

    let offset = 1e-3 * (hi - lo);
    let seed = {
        let x: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
        let y: Vec<f64> = pts.iter().map(|p| (p.1 - lo + offset).ln()).collect();
        let mx = x.iter().sum::<f64>() / x.len() as f64;
        let my = y.iter().sum::<f64>() / y.len() as f64;
        let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
        let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
        (sxy / sxx).clamp(BETA_RANGE.0, BETA_RANGE.1)
    };
    let cost = |b: f64| project(&pts, b).2;
    let n_scan = ((BETA_RANGE.1 - BETA_RANGE.0) / BETA_SCAN_STEP).round() as usize;
    let mut best = (seed, cost(seed));
    for k in 0..=n_scan {
        let b = BETA_RANGE.0 + k as f64 * BETA_SCAN_STEP;
        // Near zero the power column is collinear with the constant.
        if b.abs() < 0.5 * BETA_SCAN_STEP {
            continue;
        }
        let c = cost(b);
        if c < best.1 {
            best = (b, c);
        }
    }

    let (mut a, mut z) = ((best.0 - BETA_SCAN_STEP).max(BETA_RANGE.0), (best.0 + BETA_SCAN_STEP).min(BETA_RANGE.1));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut trace = Vec::new();
    let mut converged = false;
    for _ in 0..MAX_REFINE_ITER {
        let x1 = z - g * (z - a);
        let x2 = a + g * (z - a);
        let (f1, f2) = (cost(x1), cost(x2));
        trace.push((0.5 * (a + z), f1.min(f2)));
        if f1 < f2 {
            z = x2;
        } else {
            a = x1;
        }
        if z - a < 1e-12 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Fit(format!("steady-state exponent did not converge; last iterates {:?}", &trace[trace.len().saturating_sub(5)..])));
    }
    let beta = {
        let m = 0.5 * (a + z);
        if cost(m) <= best.1 {
            m
        } else {
            best.0
        }
    };
    let (c, d, ss) = project(&pts, beta);
    Ok(SteadyFit {
        c,
        beta,
        d,
        residual: (ss / pts.len() as f64).sqrt(),
        degenerate: false,
    })
}

/// First `x` where `ys` crosses `level`, by linear interpolation between neighbours.
pub fn first_crossing(xs: &[f64], ys: &[f64], level: f64) -> Option<f64> {
    let k = xs.len().min(ys.len());
    for i in 0..k {
        if ys[i] == level {
            return Some(xs[i]);
        }
        if i + 1 < k && (ys[i] - level).signum() != (ys[i + 1] - level).signum() && ys[i + 1] != level {
            let f = (level - ys[i]) / (ys[i + 1] - ys[i]);
            return Some(xs[i] + f * (xs[i + 1] - xs[i]));
        }
    }
    None
}
