use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::entanglement::SectorState;
use crate::error::{Error, Result};
use crate::model::{SectorBasis, SparseHermitianOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Dense,
    Polfed,
}

/// Eigenpairs with the energy they were selected around.
#[derive(Clone, Debug)]
pub struct EigenSelection {
    pub values: Vec<f64>,
    pub vectors: Vec<SectorState>,
    /// Energy the selection is centered on.
    pub center: f64,
    /// Filter target in the normalized spectrum, for filtered solves.
    pub sigma: Option<f64>,
    pub solver: SolverKind,
    pub residual_norms: Vec<f64>,
    /// Smallest accepted filtered eigenvalue and the order that produced it.
    pub theta_min: Option<f64>,
    pub filter_order: Option<usize>,
}

impl EigenSelection {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Eigenvalues sorted ascending, as needed for spacing statistics.
    pub fn sorted_values(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn max_residual(&self) -> f64 {
        self.residual_norms.iter().copied().fold(0.0, f64::max)
    }
}

/// Indices of the `count` values nearest `center`, nearest first, ties toward lower energy.
pub(crate) fn nearest_indices(values: &[f64], center: f64, count: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| {
        let (di, dj) = ((values[i] - center).abs(), (values[j] - center).abs());
        di.total_cmp(&dj).then(values[i].total_cmp(&values[j]))
    });
    idx.truncate(count);
    idx
}

/// The `n_eps` pairs nearest the spectral center `(E_min + E_max) / 2`.
pub fn middle_selection(spectrum: &EigenSelection, n_eps: usize) -> Result<EigenSelection> {
    if n_eps > spectrum.len() {
        return Err(Error::param(format!(
            "requested {n_eps} eigenpairs from a spectrum of {}",
            spectrum.len()
        )));
    }
    let (lo, hi) = spectrum
        .values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    let center = 0.5 * (lo + hi);
    let idx = nearest_indices(&spectrum.values, center, n_eps);
    Ok(EigenSelection {
        values: idx.iter().map(|&i| spectrum.values[i]).collect(),
        vectors: idx.iter().map(|&i| spectrum.vectors[i].clone()).collect(),
        center,
        sigma: spectrum.sigma,
        solver: spectrum.solver,
        residual_norms: idx.iter().map(|&i| spectrum.residual_norms[i]).collect(),
        theta_min: spectrum.theta_min,
        filter_order: spectrum.filter_order,
    })
}

pub(crate) fn residual_norm(h: &SparseHermitianOperator, v: &[C64], e: f64) -> f64 {
    let mut hv = vec![C64::new(0.0, 0.0); v.len()];
    h.apply_into(v, &mut hv);
    hv.iter().zip(v).map(|(a, b)| (a - b * e).norm_sqr()).sum::<f64>().sqrt()
}

/// Little-endian dump: `dim`, `n_eps` as u64, the eigenvalues, then each
/// vector as interleaved real and imaginary parts.
pub fn write_checkpoint(path: &Path, sel: &EigenSelection) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let dim = sel.vectors.first().map_or(0, |v| v.amplitudes().len());
    let mut put = |bytes: &[u8]| w.write_all(bytes).map_err(|e| Error::io(path, e));
    put(&(dim as u64).to_le_bytes())?;
    put(&(sel.len() as u64).to_le_bytes())?;
    for v in &sel.values {
        put(&v.to_le_bytes())?;
    }
    for v in &sel.vectors {
        for a in v.amplitudes() {
            put(&a.re.to_le_bytes())?;
            put(&a.im.to_le_bytes())?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads a checkpoint written by [`write_checkpoint`] against `basis`.
pub fn read_checkpoint(path: &Path, basis: &Arc<SectorBasis>) -> Result<(Vec<f64>, Vec<SectorState>)> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = BufReader::new(file);
    let mut buf = [0u8; 8];
    let mut next = |r: &mut BufReader<std::fs::File>| -> Result<[u8; 8]> {
        r.read_exact(&mut buf).map_err(|e| Error::io(path, e))?;
        Ok(buf)
    };
    let dim = u64::from_le_bytes(next(&mut r)?) as usize;
    let n = u64::from_le_bytes(next(&mut r)?) as usize;
    if n > 0 && dim != basis.dim() {
        return Err(Error::Format {
            path: path.to_path_buf(),
            msg: format!("checkpoint dimension {dim} does not match basis dimension {}", basis.dim()),
        });
    }
    let values = (0..n).map(|_| next(&mut r).map(f64::from_le_bytes)).collect::<Result<Vec<_>>>()?;
    let mut vectors = Vec::with_capacity(n);
    for _ in 0..n {
        let mut amps = Vec::with_capacity(dim);
        for _ in 0..dim {
            let re = f64::from_le_bytes(next(&mut r)?);
            let im = f64::from_le_bytes(next(&mut r)?);
            amps.push(C64::new(re, im));
        }
        vectors.push(SectorState::new(basis.clone(), amps)?);
    }
    Ok((values, vectors))
}
