//! Disorder ensembles and the quenched average over eigenstates and realizations.

use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigensolve::{solve_middle, solve_middle_values, EigenSelection, SolverSettings};
use crate::entanglement::SectorState;
use crate::error::{Error, Result};
use crate::model::{build_hamiltonian, enumerate_sector, sample_disorder, BoundaryCondition, CouplingParams, DisorderField, Magnetization, SectorBasis, SparseHermitianOperator};
use crate::output::{fmt_float, read_csv, write_csv};
use crate::seeding::derive_seed;

use super::pairwise_sum;

/// Number of blocks in the block standard error.
pub const N_BLOCKS: usize = 10;

/// One disorder point: chain, couplings, field strength and sampling sizes.
#[derive(Clone, Debug)]
pub struct DisorderEnsemble {
    pub n_sites: usize,
    pub h: f64,
    pub coupling: CouplingParams,
    pub bc: BoundaryCondition,
    pub n_eps: usize,
    pub n_realizations: usize,
    pub master_seed: u64,
    /// Position of `h` in its sweep; part of every realization seed.
    pub h_index: usize,
    pub solver: SolverSettings,
}

/// How much of each realization's spectrum to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Needs {
    Values,
    Vectors,
}

pub struct Realization {
    pub index: usize,
    pub seed: u64,
    pub field: DisorderField,
    /// Selected energies, ascending.
    pub energies: Vec<f64>,
    /// Present when eigenvectors were requested.
    pub selection: Option<EigenSelection>,
}

impl Realization {
    pub fn states(&self) -> &[SectorState] {
        self.selection.as_ref().map_or(&[], |s| &s.vectors)
    }
}

impl DisorderEnsemble {
    pub fn basis(&self) -> Result<Arc<SectorBasis>> {
        Ok(Arc::new(enumerate_sector(self.n_sites, Magnetization::ZERO)?))
    }

    pub fn seed(&self, realization: usize) -> u64 {
        derive_seed(self.master_seed, self.n_sites, self.h_index, realization)
    }

    pub fn hamiltonian(&self, basis: &SectorBasis, realization: usize) -> Result<(DisorderField, SparseHermitianOperator)> {
        let field = sample_disorder(self.h, self.n_sites, self.seed(realization))?;
        let op = build_hamiltonian(&self.coupling, &field, basis, self.bc)?;
        Ok((field, op))
    }

    pub fn realization(&self, basis: &Arc<SectorBasis>, index: usize, needs: Needs) -> Result<Realization> {
        let (field, op) = self.hamiltonian(basis, index)?;
        let (energies, selection) = match needs {
            Needs::Values => (solve_middle_values(&op, basis, self.n_eps, &self.solver)?, None),
            Needs::Vectors => {
                let sel = solve_middle(&op, basis, self.n_eps, &self.solver)?;
                (sel.sorted_values(), Some(sel))
            }
        };
        Ok(Realization {
            index,
            seed: self.seed(index),
            field,
            energies,
            selection,
        })
    }

    /// Applies `f` to every realization in parallel; results stay in index order.
    pub fn map<T, F>(&self, needs: Needs, f: F) -> Result<Vec<Result<T>>>
    where
        T: Send,
        F: Fn(&Realization) -> Result<T> + Sync,
    {
        let basis = self.basis()?;
        Ok((0..self.n_realizations)
            .into_par_iter()
            .map(|r| {
                let real = self.realization(&basis, r, needs)?;
                f(&real)
            })
            .collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StderrMethod {
    /// Standard deviation of the means of ten contiguous realization blocks.
    Blocks,
    /// Too few realizations for blocks: standard deviation over `sqrt(n_R)`.
    Realizations,
}

/// Mean and spread of per-realization values.
pub fn aggregate(values: &[f64]) -> Result<(f64, f64, StderrMethod)> {
    let n = values.len();
    if n == 0 {
        return Err(Error::param("no values to aggregate"));
    }
    let mean = pairwise_sum(values) / n as f64;
    if n < N_BLOCKS {
        let sd = sample_std(values);
        return Ok((mean, sd / (n as f64).sqrt(), StderrMethod::Realizations));
    }
    let blocks: Vec<f64> = (0..N_BLOCKS)
        .map(|b| {
            let chunk = &values[b * n / N_BLOCKS..(b + 1) * n / N_BLOCKS];
            pairwise_sum(chunk) / chunk.len() as f64
        })
        .collect();
    Ok((mean, sample_std(&blocks), StderrMethod::Blocks))
}

// Shifted by the first value so that identical inputs give exactly zero.
fn sample_std(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let d: Vec<f64> = values.iter().map(|v| v - values[0]).collect();
    let sq: Vec<f64> = d.iter().map(|x| x * x).collect();
    let s = pairwise_sum(&d);
    ((pairwise_sum(&sq) - s * s / n as f64) / (n - 1) as f64).max(0.0).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub n_sites: usize,
    pub h: f64,
    pub d: f64,
    pub d_prime: f64,
    pub observable: String,
    pub mean: f64,
    pub stderr: f64,
    pub n_eps: usize,
    pub n_realizations: usize,
    pub seed: u64,
    pub stderr_method: StderrMethod,
}

/// Aggregated record plus the per-realization values that fed it.
#[derive(Clone, Debug)]
pub struct QuenchedOutcome {
    pub record: SweepRecord,
    pub per_realization: Vec<Option<f64>>,
    pub failures: Vec<(usize, String)>,
}

impl QuenchedOutcome {
    /// Builds the record from per-realization results, excluding failed units.
    pub fn from_results(ens: &DisorderEnsemble, observable: &str, results: Vec<Result<f64>>) -> Result<Self> {
        let mut failures = Vec::new();
        let per_realization: Vec<Option<f64>> = results
            .into_iter()
            .enumerate()
            .map(|(i, r)| match r {
                Ok(v) => Some(v),
                Err(e) => {
                    failures.push((i, e.to_string()));
                    None
                }
            })
            .collect();
        let ok: Vec<f64> = per_realization.iter().flatten().copied().collect();
        let (mean, stderr, method) = aggregate(&ok)?;
        if method == StderrMethod::Realizations {
            log::warn!("{observable}: only {} realizations, block standard error unavailable", ok.len());
        }
        Ok(QuenchedOutcome {
            record: SweepRecord {
                n_sites: ens.n_sites,
                h: ens.h,
                d: ens.coupling.d,
                d_prime: ens.coupling.d_prime,
                observable: observable.to_string(),
                mean,
                stderr,
                n_eps: ens.n_eps,
                n_realizations: ok.len(),
                seed: ens.master_seed,
                stderr_method: method,
            },
            per_realization,
            failures,
        })
    }
}

/// Mean of `observable` over the selected eigenstates, then over realizations.
pub fn quenched_average<F>(ens: &DisorderEnsemble, name: &str, observable: F) -> Result<QuenchedOutcome>
where
    F: Fn(&SectorState) -> Result<f64> + Sync,
{
    let results = ens.map(Needs::Vectors, |r| {
        let vals = r.states().iter().map(&observable).collect::<Result<Vec<f64>>>()?;
        Ok(pairwise_sum(&vals) / vals.len() as f64)
    })?;
    QuenchedOutcome::from_results(ens, name, results)
}

const SWEEP_HEADER: [&str; 10] = ["N", "h", "D", "Dprime", "observable", "mean", "stderr", "n_eps", "n_R", "seed"];

pub fn write_sweep_csv(path: &Path, records: &[SweepRecord]) -> Result<()> {
    write_csv(
        path,
        &SWEEP_HEADER,
        records.iter().map(|r| {
            vec![
                r.n_sites.to_string(),
                fmt_float(r.h),
                fmt_float(r.d),
                fmt_float(r.d_prime),
                r.observable.clone(),
                fmt_float(r.mean),
                fmt_float(r.stderr),
                r.n_eps.to_string(),
                r.n_realizations.to_string(),
                r.seed.to_string(),
            ]
        }),
    )
}

pub fn read_sweep_csv(path: &Path) -> Result<Vec<SweepRecord>> {
    let (header, rows) = read_csv(path)?;
    if header != SWEEP_HEADER {
        return Err(Error::Format {
            path: path.to_path_buf(),
            msg: format!("unexpected header {header:?}"),
        });
    }
    let bad = |msg: String| Error::Format {
        path: path.to_path_buf(),
        msg,
    };
    rows.iter()
        .enumerate()
        .map(|(line, row)| {
            let f = |k: usize| row[k].parse::<f64>().map_err(|e| bad(format!("row {}: {e}", line + 2)));
            let u = |k: usize| row[k].parse::<u64>().map_err(|e| bad(format!("row {}: {e}", line + 2)));
            let n_realizations = u(8)? as usize;
            Ok(SweepRecord {
                n_sites: u(0)? as usize,
                h: f(1)?,
                d: f(2)?,
                d_prime: f(3)?,
                observable: row[4].clone(),
                mean: f(5)?,
                stderr: f(6)?,
                n_eps: u(7)? as usize,
                n_realizations,
                seed: u(9)?,
                stderr_method: if n_realizations < N_BLOCKS {
                    StderrMethod::Realizations
                } else {
                    StderrMethod::Blocks
                },
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ensemble(h: f64, n_r: usize) -> DisorderEnsemble {
        DisorderEnsemble {
            n_sites: 8,
            h,
            coupling: CouplingParams::heisenberg(),
            bc: BoundaryCondition::Periodic,
            n_eps: 22,
            n_realizations: n_r,
            master_seed: 5,
            h_index: 0,
            solver: SolverSettings::default(),
        }
    }

    #[test]
    fn clean_chain_has_zero_spread() {
        let ens = ensemble(0.0, 12);
        let out = quenched_average(&ens, "ggm1", |s| Ok(crate::entanglement::ggm(s, crate::entanglement::GgmMode::SingleSite)?.value)).unwrap();
        assert_eq!(out.record.stderr, 0.0);
        assert_eq!(out.record.stderr_method, StderrMethod::Blocks);
    }

    #[test]
    fn aggregate_blocks_and_fallback() {
        let v: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let (m, s, k) = aggregate(&v).unwrap();
        assert_eq!(m, 9.5);
        assert_eq!(k, StderrMethod::Blocks);
        // Block means 0.5, 2.5, ..., 18.5.
        let bm: Vec<f64> = (0..10).map(|b| 2.0 * b as f64 + 0.5).collect();
        let want = (bm.iter().map(|x| (x - 9.5).powi(2)).sum::<f64>() / 9.0).sqrt();
        assert!((s - want).abs() < 1e-12);
        let (_, _, k) = aggregate(&v[..5]).unwrap();
        assert_eq!(k, StderrMethod::Realizations);
    }

    #[test]
    fn order_of_realizations_does_not_matter_for_mean() {
        let v: Vec<f64> = (0..1000).map(|i| ((i * 7919) % 1000) as f64 * 1e-3).collect();
        let mut w = v.clone();
        w.reverse();
        let (a, _, _) = aggregate(&v).unwrap();
        let (b, _, _) = aggregate(&w).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn failed_units_are_excluded() {
        let ens = ensemble(1.0, 3);
        let out = QuenchedOutcome::from_results(&ens, "x", vec![Ok(1.0), Err(Error::Solver("boom".into())), Ok(3.0)]).unwrap();
        assert_eq!(out.record.mean, 2.0);
        assert_eq!(out.failures.len(), 1);
        assert_eq!(out.record.n_realizations, 2);
    }

    #[test]
    fn sweep_csv_round_trip() {
        let rec = SweepRecord {
            n_sites: 10,
            h: 1.0 / 3.0,
            d: 0.5,
            d_prime: 0.0,
            observable: "gap_ratio".into(),
            mean: 0.5307,
            stderr: 1e-3,
            n_eps: 80,
            n_realizations: 100,
            seed: u64::MAX,
            stderr_method: StderrMethod::Blocks,
        };
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        write_sweep_csv(&p, &[rec.clone()]).unwrap();
        assert_eq!(read_sweep_csv(&p).unwrap(), vec![rec]);
    }
}
