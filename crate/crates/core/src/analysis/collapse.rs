//! Finite-size-scaling collapse by minimizing the ordering cost.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::simplex::nelder_mead;
use crate::error::{Error, Result};
use crate::observables::SweepRecord;
use crate::output::{fmt_float, write_csv, write_json};

/// Cost surfaces varying less than this are rejected as uninformative.
pub const FLAT_SURFACE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n_sites: usize,
    pub h: f64,
    pub x: f64,
    pub stderr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingDataset {
    pub observable: String,
    pub rows: Vec<ScalingRow>,
}

impl ScalingDataset {
    pub fn new(observable: impl Into<String>, rows: Vec<ScalingRow>) -> Result<Self> {
        if rows.iter().any(|r| !(r.x.is_finite() && r.h.is_finite())) {
            return Err(Error::param("scaling rows must be finite"));
        }
        Ok(ScalingDataset {
            observable: observable.into(),
            rows,
        })
    }

    /// Rows of `observable` from sweep records.
    pub fn from_records(records: &[SweepRecord], observable: &str) -> Result<Self> {
        let rows = records
            .iter()
            .filter(|r| r.observable == observable)
            .map(|r| ScalingRow {
                n_sites: r.n_sites,
                h: r.h,
                x: r.mean,
                stderr: r.stderr,
            })
            .collect();
        Self::new(observable, rows)
    }

    /// Distinct sizes with their count of distinct field strengths.
    pub fn sizes(&self) -> BTreeMap<usize, usize> {
        let mut per: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        for r in &self.rows {
            let hs = per.entry(r.n_sites).or_default();
            if !hs.contains(&r.h) {
                hs.push(r.h);
            }
        }
        per.into_iter().map(|(n, hs)| (n, hs.len())).collect()
    }

    /// At least two sizes, five field strengths each.
    pub fn check_collapsible(&self) -> Result<()> {
        let sizes = self.sizes();
        if sizes.len() < 2 {
            return Err(Error::DegenerateData(format!(
                "{}: collapse needs at least two system sizes, got {}",
                self.observable,
                sizes.len()
            )));
        }
        if let Some((n, k)) = sizes.iter().find(|(_, &k)| k < 5) {
            return Err(Error::DegenerateData(format!("{}: N = {n} has only {k} field strengths, need 5", self.observable)));
        }
        Ok(())
    }
}

/// `ξ = |h - h*|^{-ν}`.
pub fn correlation_length(h: f64, h_star: f64, nu: f64) -> Result<f64> {
    if !(nu > 0.0) {
        return Err(Error::param(format!("exponent nu must be positive, got {nu}")));
    }
    if h == h_star {
        return Err(Error::param(format!("correlation length diverges at h = h* = {h_star}")));
    }
    Ok((h - h_star).abs().powf(-nu))
}

fn scaling_variable(row: &ScalingRow, h_star: f64, nu: f64) -> f64 {
    let d = row.h - h_star;
    if d == 0.0 {
        0.0
    } else {
        d.signum() * row.n_sites as f64 * d.abs().powf(nu)
    }
}

/// `Σ |X_{k+1} - X_k| / (max X - min X) - 1` with rows ordered by `sgn(h - h*) N / ξ`.
pub fn fss_cost(dataset: &ScalingDataset, h_star: f64, nu: f64) -> Result<f64> {
    let rows = &dataset.rows;
    if rows.len() < 2 {
        return Err(Error::param("cost function needs at least two rows"));
    }
    if !(nu > 0.0) {
        return Err(Error::param(format!("exponent nu must be positive, got {nu}")));
    }
    let (lo, hi) = rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| (a.min(r.x), b.max(r.x)));
    if hi - lo <= 0.0 {
        return Err(Error::param(format!("{}: constant observable, cost undefined", dataset.observable)));
    }
    let mut keyed: Vec<(f64, &ScalingRow)> = rows.iter().map(|r| (scaling_variable(r, h_star, nu), r)).collect();
    keyed.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(a.1.n_sites.cmp(&b.1.n_sites))
            .then(a.1.h.total_cmp(&b.1.h))
            .then(a.1.x.total_cmp(&b.1.x))
    });
    let total: f64 = keyed.windows(2).map(|w| (w[1].1.x - w[0].1.x).abs()).sum();
    Ok((total / (hi - lo) - 1.0).max(0.0))
}

/// Search box and grid spacing for the collapse.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FitBox {
    pub h_star: (f64, f64),
    pub nu: (f64, f64),
    pub resolution: f64,
}

impl Default for FitBox {
    fn default() -> Self {
        FitBox {
            h_star: (0.5, 12.0),
            nu: (0.3, 3.0),
            resolution: 0.1,
        }
    }
}

impl FitBox {
    fn axis(lo: f64, hi: f64, step: f64) -> Vec<f64> {
        let n = ((hi - lo) / step + 1e-9).floor() as usize;
        (0..=n).map(|k| lo + k as f64 * step).collect()
    }

    fn validate(&self) -> Result<()> {
        let ok = self.h_star.0 < self.h_star.1 && self.nu.0 > 0.0 && self.nu.0 < self.nu.1 && self.resolution > 0.0;
        if !ok {
            return Err(Error::param(format!("invalid collapse search box {self:?}")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollapseFit {
    pub observable: String,
    pub h_star: f64,
    pub nu: f64,
    pub cost_min: f64,
    pub grid_resolution: f64,
    /// Scan surface `(h*, ν, cost)` in scan order.
    #[serde(skip)]
    pub scan: Vec<(f64, f64, f64)>,
}

impl CollapseFit {
    pub fn write_json(&self, path: &Path) -> Result<()> {
        write_json(
            path,
            &serde_json::json!({
                "observable": self.observable,
                "h_star": self.h_star,
                "nu": self.nu,
                "cost_min": self.cost_min,
                "grid_resolution": self.grid_resolution,
            }),
        )
    }

    pub fn write_scan_csv(&self, path: &Path) -> Result<()> {
        write_csv(
            path,
            &["h_star", "nu", "cost"],
            self.scan.iter().map(|&(h, n, c)| [fmt_float(h), fmt_float(n), fmt_float(c)]),
        )
    }
}

/// Grid scan over the box, then simplex refinement from the best cell.
///
/// Equal costs resolve to the smallest `h*`, then the smallest `ν`.
pub fn fss_fit(dataset: &ScalingDataset, search: &FitBox) -> Result<CollapseFit> {
    search.validate()?;
    dataset.check_collapsible()?;
    let hs = FitBox::axis(search.h_star.0, search.h_star.1, search.resolution);
    let nus = FitBox::axis(search.nu.0, search.nu.1, search.resolution);
    let mut scan = Vec::with_capacity(hs.len() * nus.len());
    for &h in &hs {
        for &nu in &nus {
            scan.push((h, nu, fss_cost(dataset, h, nu)?));
        }
    }
    let (lo, hi) = scan.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), s| (a.min(s.2), b.max(s.2)));
    if hi - lo < FLAT_SURFACE {
        return Err(Error::DegenerateData(format!(
            "{}: cost surface is flat ({lo} to {hi}); the data carry no size dependence",
            dataset.observable
        )));
    }
    let mut best = scan[0];
    for &s in &scan[1..] {
        if s.2 < best.2 {
            best = s;
        }
    }

    let inside = |p: &[f64]| p[0] >= search.h_star.0 && p[0] <= search.h_star.1 && p[1] >= search.nu.0 && p[1] <= search.nu.1;
    let objective = |p: &[f64]| {
        if inside(p) {
            fss_cost(dataset, p[0], p[1]).unwrap_or(f64::INFINITY)
        } else {
            f64::INFINITY
        }
    };
    let step = [search.resolution, search.resolution];
    let (p, c) = nelder_mead(objective, &[best.0, best.1], &step, 1e-10, 400);
    if c < best.2 - 1e-12 {
        best = (p[0], p[1], c);
    }
    Ok(CollapseFit {
        observable: dataset.observable.clone(),
        h_star: best.0,
        nu: best.1,
        cost_min: best.2,
        grid_resolution: search.resolution,
        scan,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn row(n: usize, h: f64, x: f64) -> ScalingRow {
        ScalingRow { n_sites: n, h, x, stderr: 0.0 }
    }

    #[test]
    fn correlation_length_values() {
        assert_eq!(correlation_length(3.0, 1.0, 1.0).unwrap(), 0.5);
        assert_eq!(correlation_length(5.0, 4.0, 1.4).unwrap(), 1.0);
        assert!(correlation_length(4.0, 4.0, 1.0).is_err());
        assert!(correlation_length(5.0, 4.0, 0.0).is_err());
    }

    #[test]
    fn cost_examples() {
        let mono = ScalingDataset::new("x", vec![row(8, 1.0, 0.1), row(8, 2.0, 0.5), row(10, 3.0, 0.9)]).unwrap();
        assert_eq!(fss_cost(&mono, 2.5, 1.0).unwrap(), 0.0);
        let bump = ScalingDataset::new("x", vec![row(8, 1.0, 0.0), row(8, 2.0, 1.0), row(8, 3.0, 0.0)]).unwrap();
        assert!((fss_cost(&bump, 2.5, 1.0).unwrap() - 1.0).abs() < 1e-15);
        let flat = ScalingDataset::new("x", vec![row(8, 1.0, 0.3), row(8, 2.0, 0.3)]).unwrap();
        assert!(fss_cost(&flat, 2.0, 1.0).is_err());
    }

    fn synthetic(seed: u64, noise: f64) -> ScalingDataset {
        let (h0, nu0) = (3.5, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = Vec::new();
        for n in [8, 10, 12, 14] {
            for k in 0..=12 {
                let h = 0.5 + 0.5 * k as f64;
                let s = (h - h0).signum() * n as f64 * (h - h0).abs().powf(nu0);
                let x = 0.5 - 0.4 * (s / 15.0).tanh();
                rows.push(row(n, h, x * (1.0 + noise * rng.random_range(-1.0..1.0))));
            }
        }
        ScalingDataset::new("synthetic", rows).unwrap()
    }

    #[test]
    fn recovers_synthetic_critical_point() {
        let fit = fss_fit(&synthetic(0, 0.0), &FitBox::default()).unwrap();
        assert!((fit.h_star - 3.5).abs() < 0.15 && (fit.nu - 1.0).abs() < 0.15, "{fit:?}");
        assert!(fit.cost_min >= 0.0);
        assert_eq!(fit.scan.len(), 116 * 28);
    }

    #[test]
    fn recovers_through_one_percent_noise() {
        let hits = (0..10)
            .filter(|&seed| {
                let fit = fss_fit(&synthetic(seed, 0.01), &FitBox::default()).unwrap();
                (fit.h_star - 3.5).abs() <= 0.2 && (fit.nu - 1.0).abs() <= 0.2
            })
            .count();
        assert!(hits >= 9, "{hits}/10");
    }

    #[test]
    fn single_size_is_degenerate() {
        let rows = (0..8).map(|k| row(10, k as f64, 1.0 / (1.0 + k as f64))).collect();
        let ds = ScalingDataset::new("x", rows).unwrap();
        assert!(matches!(fss_fit(&ds, &FitBox::default()), Err(Error::DegenerateData(_))));
    }

    proptest! {
        #[test]
        fn cost_is_affine_and_permutation_invariant(seed in 0u64..1000, a in 0.1f64..10.0, c in -5.0f64..5.0, hs in 1.0f64..6.0, nu in 0.5f64..2.5) {
            let ds = synthetic(seed, 0.05);
            let base = fss_cost(&ds, hs, nu).unwrap();
            let mut scaled = ds.clone();
            scaled.rows.iter_mut().for_each(|r| r.x = a * r.x + c);
            prop_assert!((fss_cost(&scaled, hs, nu).unwrap() - base).abs() < 1e-12);
            let mut shuffled = ds.clone();
            shuffled.rows.reverse();
            shuffled.rows.rotate_left((seed % 7) as usize);
            prop_assert_eq!(fss_cost(&shuffled, hs, nu).unwrap(), base);
        }
    }
}
