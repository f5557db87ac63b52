use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::{ExperimentConfig, Observable, Pipeline};
use crate::analysis::{first_crossing, fss_fit, steady_scaling_fit, transient_fit_points, ScalingDataset, TransientFit};
use crate::dynamics::{evolve_all, steady_state_value, QuenchParams, QuenchSeries};
use crate::eigensolve::{dense_eigenvalues, solve_middle_values, DEFAULT_MARGIN};
use crate::entanglement::{ggm, ggm_histogram, ggm_pair, write_ggm_batch, GgmBatchRow, GgmMode};
use crate::error::{Error, Result};
use crate::observables::{
    correlator_profile, gap_ratios, pairwise_sum, read_sweep_csv, write_sweep_csv, CorrelatorProfile, DisorderEnsemble, Needs,
    QuenchedOutcome, SweepRecord,
};
use crate::output::{fmt_float, read_csv, write_csv, write_json};

/// Largest tolerated fraction of failed work units.
pub const MAX_FAILURE_FRACTION: f64 = 0.01;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedEntry {
    #[serde(rename = "N")]
    pub n_sites: usize,
    pub h_index: usize,
    pub realization: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitFailure {
    pub unit: String,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub pipeline: Pipeline,
    /// SHA-256 of the serialized configuration.
    pub config_hash: String,
    pub code_version: String,
    pub master_seed: u64,
    pub workers: usize,
    pub wall_clock_seconds: f64,
    /// Paths relative to the output directory, in emission order.
    pub outputs: Vec<String>,
    pub n_units: usize,
    pub failures: Vec<UnitFailure>,
    pub seeds: Vec<SeedEntry>,
}

/// SHA-256 of the serialized config with the output directory left out.
pub fn config_hash(cfg: &ExperimentConfig) -> Result<String> {
    let inputs = ExperimentConfig {
        output_dir: PathBuf::new(),
        ..cfg.clone()
    };
    let digest = Sha256::digest(inputs.to_toml()?.as_bytes());
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

/// Runs the configured pipeline on `workers` threads and writes its outputs and manifest.
///
/// Work-unit failures are recorded in the manifest; the run fails when more than
/// one percent of the units fail.
pub fn run_pipeline(cfg: &ExperimentConfig, workers: Option<usize>) -> Result<RunManifest> {
    cfg.validate()?;
    let workers = workers.unwrap_or_else(rayon::current_num_threads).max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {workers} workers: {e}")))?;
    let start = Instant::now();
    std::fs::create_dir_all(&cfg.output_dir).map_err(|e| Error::io(&cfg.output_dir, e))?;
    let mut run = Runner {
        cfg,
        outputs: Vec::new(),
        seeds: Vec::new(),
        failures: Vec::new(),
        n_units: 0,
    };
    pool.install(|| match cfg.pipeline {
        Pipeline::Spectrum => run.spectrum(),
        Pipeline::EquilibriumSweep => run.equilibrium_sweep(),
        Pipeline::Distribution => run.distribution(),
        Pipeline::Dynamics => run.dynamics(),
        Pipeline::Fss => run.fss(),
        Pipeline::Transient => run.transient(),
        Pipeline::Steady => run.steady(),
    })?;
    run.outputs.push(MANIFEST_FILE.to_string());
    let manifest = RunManifest {
        pipeline: cfg.pipeline,
        config_hash: config_hash(cfg)?,
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        master_seed: cfg.sampling.master_seed,
        workers,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        outputs: run.outputs,
        n_units: run.n_units,
        failures: run.failures,
        seeds: run.seeds,
    };
    write_json(&cfg.output_dir.join(MANIFEST_FILE), &manifest)?;
    let failed = manifest.failures.len();
    if failed as f64 > MAX_FAILURE_FRACTION * manifest.n_units as f64 {
        return Err(Error::Solver(format!(
            "{failed} of {} work units failed; first: {} ({})",
            manifest.n_units, manifest.failures[0].unit, manifest.failures[0].error
        )));
    }
    Ok(manifest)
}

struct Runner<'a> {
    cfg: &'a ExperimentConfig,
    outputs: Vec<String>,
    seeds: Vec<SeedEntry>,
    failures: Vec<UnitFailure>,
    n_units: usize,
}

fn tag(h: f64) -> String {
    format!("{h}")
}

impl Runner<'_> {
    fn path(&mut self, name: String) -> PathBuf {
        let p = self.cfg.output_dir.join(&name);
        self.outputs.push(name);
        p
    }

    fn ensemble(&self, n_sites: usize, h_index: usize) -> Result<DisorderEnsemble> {
        let m = &self.cfg.model;
        Ok(DisorderEnsemble {
            n_sites,
            h: m.h[h_index],
            coupling: m.coupling()?,
            bc: m.boundary_for(self.cfg.pipeline),
            n_eps: self.cfg.sampling.n_eps_for(n_sites)?,
            n_realizations: self.cfg.sampling.n_realizations_for(n_sites)?,
            master_seed: self.cfg.sampling.master_seed,
            h_index,
            solver: self.cfg.solver.clone(),
        })
    }

    fn record_seeds(&mut self, n_sites: usize, h_index: usize, count: usize, seed: impl Fn(usize) -> u64) {
        self.seeds
            .extend((0..count).map(|r| SeedEntry { n_sites, h_index, realization: r, seed: seed(r) }));
    }

    /// Keeps successful values in order and logs the failed units.
    fn collect<T>(&mut self, label: &str, results: Vec<Result<T>>) -> Vec<Option<T>> {
        self.n_units += results.len();
        results
            .into_iter()
            .enumerate()
            .map(|(r, res)| match res {
                Ok(v) => Some(v),
                Err(e) => {
                    log::warn!("{label} realization {r}: {e}");
                    self.failures.push(UnitFailure {
                        unit: format!("{label} r={r}"),
                        error: e.to_string(),
                    });
                    None
                }
            })
            .collect()
    }

    fn points(&self) -> Vec<(usize, usize)> {
        let m = &self.cfg.model;
        m.n_sites.iter().flat_map(|&n| (0..m.h.len()).map(move |k| (n, k))).collect()
    }

    fn spectrum(&mut self) -> Result<()> {
        for (n, k) in self.points() {
            let ens = self.ensemble(n, k)?;
            let basis = ens.basis()?;
            let dense = self.cfg.solver.dense_max_dim >= basis.dim();
            let results: Vec<Result<Vec<f64>>> = {
                use rayon::prelude::*;
                (0..ens.n_realizations)
                    .into_par_iter()
                    .map(|r| {
                        let (_, op) = ens.hamiltonian(&basis, r)?;
                        if dense {
                            dense_eigenvalues(&op)
                        } else {
                            solve_middle_values(&op, &basis, ens.n_eps, &ens.solver)
                        }
                    })
                    .collect()
            };
            self.record_seeds(n, k, ens.n_realizations, |r| ens.seed(r));
            let label = format!("spectrum N={n} h={}", ens.h);
            let values = self.collect(&label, results);
            let rows: Vec<[String; 3]> = values
                .iter()
                .enumerate()
                .filter_map(|(r, v)| v.as_ref().map(|v| (r, v)))
                .flat_map(|(r, v)| v.iter().enumerate().map(move |(i, e)| [r.to_string(), i.to_string(), fmt_float(*e)]))
                .collect();
            let path = self.path(format!("spectrum_N{n}_h{}.csv", tag(ens.h)));
            write_csv(&path, &["realization", "index", "energy"], rows)?;
        }
        Ok(())
    }

    fn equilibrium_sweep(&mut self) -> Result<()> {
        let list = self.cfg.observables.list.clone();
        if list.is_empty() {
            return Err(Error::Config("observables.list: nothing to compute".into()));
        }
        let needs = if list.iter().any(|o| o.needs_vectors()) { Needs::Vectors } else { Needs::Values };
        let mut records = Vec::new();
        for (n, k) in self.points() {
            let ens = self.ensemble(n, k)?;
            let bc = ens.bc;
            let results = ens.map(needs, |real| {
                let mut out = PerRealization::default();
                for &o in &list {
                    match o {
                        Observable::GapRatio => out.gap_ratio = Some(gap_ratios(&real.energies)?.mean()),
                        Observable::Ggm | Observable::Ggm1 => {
                            if out.ggm1.is_some() {
                                continue;
                            }
                            let both = list.contains(&Observable::Ggm);
                            let mut g = Vec::new();
                            let mut g1 = Vec::new();
                            for s in real.states() {
                                if both {
                                    let (e, s1) = ggm_pair(s)?;
                                    g.push(e.value);
                                    g1.push(s1.value);
                                } else {
                                    g1.push(ggm(s, GgmMode::SingleSite)?.value);
                                }
                            }
                            if both {
                                out.ggm = Some(mean(&g));
                            }
                            out.ggm1 = Some(mean(&g1));
                        }
                        Observable::LnCzz => {
                            let p = correlator_profile(real.states(), bc)?;
                            out.ln_czz = p.values.last().copied();
                            out.profile = Some(p);
                        }
                    }
                }
                Ok(out)
            })?;
            self.record_seeds(n, k, ens.n_realizations, |r| ens.seed(r));
            let label = format!("sweep N={n} h={}", ens.h);
            let per = self.collect(&label, results);
            for &o in &list {
                let values: Vec<Result<f64>> = per
                    .iter()
                    .map(|p| p.as_ref().and_then(|p| p.get(o)).ok_or_else(|| Error::Solver("realization failed".into())))
                    .collect();
                records.push(QuenchedOutcome::from_results(&ens, o.name(), values)?.record);
            }
            if list.contains(&Observable::LnCzz) {
                let profiles: Vec<CorrelatorProfile> = per.iter().flatten().filter_map(|p| p.profile.clone()).collect();
                let avg = CorrelatorProfile::average(&profiles)?;
                let path = self.path(format!("correlator_N{n}_h{}.csv", tag(ens.h)));
                avg.write_csv(&path)?;
            }
        }
        let path = self.path("sweep.csv".into());
        write_sweep_csv(&path, &records)
    }

    fn distribution(&mut self) -> Result<()> {
        let eps = self.cfg.observables.histogram_eps;
        for (n, k) in self.points() {
            let ens = self.ensemble(n, k)?;
            let results = ens.map(Needs::Vectors, |real| {
                let sel = real.selection.as_ref().ok_or_else(|| Error::Solver("no eigenvectors".into()))?;
                sel.vectors
                    .iter()
                    .zip(&sel.values)
                    .enumerate()
                    .map(|(i, (s, &e))| {
                        let (g, g1) = ggm_pair(s)?;
                        Ok(GgmBatchRow {
                            realization: real.index,
                            eigen_index: i,
                            energy: e,
                            ggm: g.value,
                            ggm1: g1.value,
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })?;
            self.record_seeds(n, k, ens.n_realizations, |r| ens.seed(r));
            let label = format!("distribution N={n} h={}", ens.h);
            let rows: Vec<GgmBatchRow> = self.collect(&label, results).into_iter().flatten().flatten().collect();
            if rows.is_empty() {
                continue;
            }
            let t = tag(ens.h);
            let path = self.path(format!("ggm_batch_N{n}_h{t}.csv"));
            write_ggm_batch(&path, &rows)?;
            let exact = ggm_histogram(&rows.iter().map(|r| r.ggm).collect::<Vec<_>>(), eps)?;
            let path = self.path(format!("ggm_hist_N{n}_h{t}.csv"));
            exact.write_csv(&path)?;
            let single = ggm_histogram(&rows.iter().map(|r| r.ggm1).collect::<Vec<_>>(), eps)?;
            let path = self.path(format!("ggm1_hist_N{n}_h{t}.csv"));
            single.write_csv(&path)?;
        }
        Ok(())
    }

    fn dynamics(&mut self) -> Result<()> {
        let m = &self.cfg.model;
        let dyn_cfg = &self.cfg.dynamics;
        let grid = dyn_cfg.grid()?;
        let coupling = m.coupling()?;
        let mut steady = Vec::new();
        let mut transient_rows = Vec::new();
        let mut index_rows = Vec::new();
        for (n, k) in self.points() {
            let params = QuenchParams {
                n_sites: n,
                h: m.h[k],
                coupling,
                bc: m.boundary_for(Pipeline::Dynamics),
                h_index: k,
                propagator: dyn_cfg.propagator,
                mode: dyn_cfg.ggm_mode,
                eps_m: dyn_cfg.eps_m,
                margin: DEFAULT_MARGIN,
            };
            let n_r = self.cfg.sampling.n_quench_realizations_for(n)?;
            let master = self.cfg.sampling.master_seed;
            let results = evolve_all(&params, &grid, n_r, master)?;
            self.record_seeds(n, k, n_r, |r| crate::seeding::derive_seed(master, n, k, r));
            let label = format!("dynamics N={n} h={}", params.h);
            let n_before = self.failures.len();
            let kept = self.collect(&label, results);
            let results: Vec<Result<_>> = kept.into_iter().map(|t| t.ok_or_else(|| Error::Solver("failed".into()))).collect();
            let series = match QuenchSeries::from_results(&params, &grid, results) {
                Ok(s) => s,
                Err(e) if self.failures.len() > n_before => {
                    log::warn!("{label}: {e}");
                    continue;
                }
                Err(e) => return Err(e),
            };
            let name = format!("quench_N{n}_h{}_D{}_Dp{}.csv", tag(params.h), tag(m.d), tag(m.d_prime));
            index_rows.push([n.to_string(), fmt_float(params.h), fmt_float(m.d), fmt_float(m.d_prime), name.clone()]);
            let path = self.path(name);
            series.write_csv(&path)?;
            if let Ok((value, stderr)) = steady_state_value(&series, self.cfg.analysis.steady_window) {
                steady.push(SweepRecord {
                    n_sites: n,
                    h: params.h,
                    d: m.d,
                    d_prime: m.d_prime,
                    observable: "ggm_inf".into(),
                    mean: value,
                    stderr,
                    n_eps: 0,
                    n_realizations: series.n_realizations,
                    seed: master,
                    stderr_method: series.stderr_method,
                });
            }
            match transient_fit_points(&series.grid.times, &series.mean_ggm, self.cfg.analysis.transient_window) {
                Ok(fit) => transient_rows.push(((n, params.h, m.d, m.d_prime), fit)),
                Err(e) => log::warn!("{label}: transient fit skipped: {e}"),
            }
        }
        let path = self.path("quench_index.csv".into());
        write_csv(&path, &["N", "h", "D", "Dprime", "file"], index_rows)?;
        let path = self.path("steady.csv".into());
        write_sweep_csv(&path, &steady)?;
        let path = self.path("transient.csv".into());
        write_transient_csv(&path, &transient_rows)
    }

    fn input(&self) -> Result<&Path> {
        self.cfg
            .analysis
            .input
            .as_deref()
            .ok_or_else(|| Error::Config("analysis.input: required".into()))
    }

    fn fss(&mut self) -> Result<()> {
        let records = read_sweep_csv(self.input()?)?;
        let mut groups: BTreeMap<(u64, u64), Vec<SweepRecord>> = BTreeMap::new();
        for r in records {
            groups.entry((r.d.to_bits(), r.d_prime.to_bits())).or_default().push(r);
        }
        for ((d, dp), recs) in groups {
            let (d, dp) = (f64::from_bits(d), f64::from_bits(dp));
            for obs in &self.cfg.analysis.observables.clone() {
                self.n_units += 1;
                let fit = ScalingDataset::from_records(&recs, obs).and_then(|ds| fss_fit(&ds, &self.cfg.analysis.search));
                match fit {
                    Ok(fit) => {
                        let stem = format!("collapse_{obs}_D{}_Dp{}", tag(d), tag(dp));
                        let path = self.path(format!("{stem}.json"));
                        fit.write_json(&path)?;
                        let path = self.path(format!("{stem}_scan.csv"));
                        fit.write_scan_csv(&path)?;
                    }
                    Err(e) => self.failures.push(UnitFailure {
                        unit: format!("fss {obs} D={d} Dprime={dp}"),
                        error: e.to_string(),
                    }),
                }
            }
        }
        Ok(())
    }

    fn transient(&mut self) -> Result<()> {
        let dir = self.input()?.to_path_buf();
        let (_, rows) = read_csv(&dir.join("quench_index.csv"))?;
        let mut fits = Vec::new();
        for row in rows {
            self.n_units += 1;
            let key = parse_key(&row, &dir)?;
            let fit = read_series(&dir.join(&row[4])).and_then(|(t, g)| transient_fit_points(&t, &g, self.cfg.analysis.transient_window));
            match fit {
                Ok(f) => fits.push((key, f)),
                Err(e) => self.failures.push(UnitFailure {
                    unit: format!("transient {}", row[4]),
                    error: e.to_string(),
                }),
            }
        }
        let path = self.path("transient_fits.csv".into());
        write_transient_csv(&path, &fits)?;

        let mut groups: BTreeMap<(usize, u64, u64), Vec<(f64, f64)>> = BTreeMap::new();
        for ((n, h, d, dp), f) in &fits {
            groups.entry((*n, d.to_bits(), dp.to_bits())).or_default().push((*h, f.alpha));
        }
        let thresholds: Vec<serde_json::Value> = groups
            .into_iter()
            .map(|((n, d, dp), mut pts)| {
                pts.sort_by(|a, b| a.0.total_cmp(&b.0));
                let (hs, al): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
                serde_json::json!({
                    "N": n,
                    "D": f64::from_bits(d),
                    "Dprime": f64::from_bits(dp),
                    "alpha_threshold": self.cfg.analysis.alpha_threshold,
                    "h_star": first_crossing(&hs, &al, self.cfg.analysis.alpha_threshold),
                })
            })
            .collect();
        let path = self.path("alpha_threshold.json".into());
        write_json(&path, &thresholds)
    }

    fn steady(&mut self) -> Result<()> {
        let records: Vec<SweepRecord> = read_sweep_csv(self.input()?)?.into_iter().filter(|r| r.observable == "ggm_inf").collect();
        let mut groups: BTreeMap<(u64, u64, u64), Vec<(usize, f64)>> = BTreeMap::new();
        for r in &records {
            groups.entry((r.d.to_bits(), r.d_prime.to_bits(), r.h.to_bits())).or_default().push((r.n_sites, r.mean));
        }
        let mut rows = Vec::new();
        let mut per_setting: BTreeMap<(u64, u64), Vec<(f64, f64)>> = BTreeMap::new();
        for ((d, dp, h), pts) in groups {
            self.n_units += 1;
            let (dv, dpv, hv) = (f64::from_bits(d), f64::from_bits(dp), f64::from_bits(h));
            match steady_scaling_fit(&pts) {
                Ok(fit) => {
                    per_setting.entry((d, dp)).or_default().push((hv, fit.beta));
                    rows.push([
                        fmt_float(hv),
                        fmt_float(dv),
                        fmt_float(dpv),
                        fmt_float(fit.c),
                        fmt_float(fit.beta),
                        fmt_float(fit.d),
                        fmt_float(fit.residual),
                        fit.degenerate.to_string(),
                    ]);
                }
                Err(e) => self.failures.push(UnitFailure {
                    unit: format!("steady h={hv} D={dv} Dprime={dpv}"),
                    error: e.to_string(),
                }),
            }
        }
        let path = self.path("steady_fits.csv".into());
        write_csv(&path, &["h", "D", "Dprime", "c", "beta", "d", "residual", "degenerate"], rows)?;
        let zeros: Vec<serde_json::Value> = per_setting
            .into_iter()
            .map(|((d, dp), mut pts)| {
                pts.sort_by(|a, b| a.0.total_cmp(&b.0));
                let (hs, betas): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
                serde_json::json!({
                    "D": f64::from_bits(d),
                    "Dprime": f64::from_bits(dp),
                    "h_star": first_crossing(&hs, &betas, 0.0),
                })
            })
            .collect();
        let path = self.path("beta_zero.json".into());
        write_json(&path, &zeros)
    }
}

#[derive(Default)]
struct PerRealization {
    gap_ratio: Option<f64>,
    ggm: Option<f64>,
    ggm1: Option<f64>,
    ln_czz: Option<f64>,
    profile: Option<CorrelatorProfile>,
}

impl PerRealization {
    fn get(&self, o: Observable) -> Option<f64> {
        match o {
            Observable::GapRatio => self.gap_ratio,
            Observable::Ggm => self.ggm,
            Observable::Ggm1 => self.ggm1,
            Observable::LnCzz => self.ln_czz,
        }
    }
}

fn mean(v: &[f64]) -> f64 {
    pairwise_sum(v) / v.len() as f64
}

type SeriesKey = (usize, f64, f64, f64);

fn write_transient_csv(path: &Path, fits: &[(SeriesKey, TransientFit)]) -> Result<()> {
    write_csv(
        path,
        &["N", "h", "D", "Dprime", "alpha", "b", "t_lo", "t_hi", "residual", "n_points"],
        fits.iter().map(|((n, h, d, dp), f)| {
            [
                n.to_string(),
                fmt_float(*h),
                fmt_float(*d),
                fmt_float(*dp),
                fmt_float(f.alpha),
                fmt_float(f.b),
                fmt_float(f.t_lo),
                fmt_float(f.t_hi),
                fmt_float(f.residual),
                f.n_points.to_string(),
            ]
        }),
    )
}

fn parse_key(row: &[String], dir: &Path) -> Result<SeriesKey> {
    let bad = |msg: String| Error::Format {
        path: dir.join("quench_index.csv"),
        msg,
    };
    if row.len() != 5 {
        return Err(bad(format!("expected 5 columns, got {}", row.len())));
    }
    let f = |k: usize| row[k].parse::<f64>().map_err(|e| bad(format!("{}: {e}", row[k])));
    Ok((row[0].parse().map_err(|e| bad(format!("{}: {e}", row[0])))?, f(1)?, f(2)?, f(3)?))
}

/// Times and mean GGM from a quench series CSV.
pub fn read_series(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let (header, rows) = read_csv(path)?;
    if header.first().map(String::as_str) != Some("t") || header.get(1).map(String::as_str) != Some("mean_ggm") {
        return Err(Error::Format {
            path: path.to_path_buf(),
            msg: format!("unexpected header {header:?}"),
        });
    }
    rows.iter()
        .map(|r| {
            let p = |k: usize| {
                r[k].parse::<f64>().map_err(|e| Error::Format {
                    path: path.to_path_buf(),
                    msg: format!("{}: {e}", r[k]),
                })
            };
            Ok((p(0)?, p(1)?))
        })
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().unzip())
}
