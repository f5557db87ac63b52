use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::krylov::KrylovSpace;
use crate::error::{check_dim, Error, Result};
use crate::model::SparseHermitianOperator;

pub const DEFAULT_MARGIN: f64 = 1e-2;

const BOUNDS_TOLERANCE: f64 = 1e-8;
const BOUNDS_MAX_ITER: usize = 400;
const BOUNDS_SEED: u64 = 0x6c61_6e63_7a6f_7321;

/// Extremal eigenvalue estimates and the affine map onto `[-1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralBounds {
    pub e_min: f64,
    pub e_max: f64,
    /// Relative inflation of the half width.
    pub margin: f64,
}

impl SpectralBounds {
    pub fn new(e_min: f64, e_max: f64, margin: f64) -> Result<Self> {
        if !(e_min.is_finite() && e_max.is_finite()) || e_max < e_min {
            return Err(Error::param(format!("invalid spectral interval [{e_min}, {e_max}]")));
        }
        if !(margin >= 0.0 && margin.is_finite()) {
            return Err(Error::param(format!("margin must be non-negative, got {margin}")));
        }
        Ok(SpectralBounds { e_min, e_max, margin })
    }

    /// Half width `a`, inflated by the margin.
    pub fn a(&self) -> f64 {
        0.5 * (self.e_max - self.e_min) * (1.0 + self.margin)
    }

    /// Center `b`.
    pub fn b(&self) -> f64 {
        0.5 * (self.e_max + self.e_min)
    }

    pub fn to_normalized(&self, energy: f64) -> f64 {
        (energy - self.b()) / self.a()
    }

    pub fn from_normalized(&self, x: f64) -> f64 {
        self.b() + self.a() * x
    }
}

/// Lanczos estimates of the spectral edges, inflated by `margin`.
pub fn extremal_bounds(h: &SparseHermitianOperator, margin: f64) -> Result<SpectralBounds> {
    let dim = h.dim();
    if dim == 0 {
        return Err(Error::param("empty operator"));
    }
    if dim == 1 {
        let e = h.get(0, 0).re;
        return SpectralBounds::new(e, e, margin);
    }
    let cap = dim.min(BOUNDS_MAX_ITER);
    let mut space = KrylovSpace::new(dim, cap, BOUNDS_SEED);
    let mut w = vec![C64::new(0.0, 0.0); dim];
    let mut last = (f64::NAN, f64::NAN, f64::INFINITY);
    while space.len() < cap {
        h.apply_into(space.next_vector(), &mut w);
        space.extend(&mut w);
        let m = space.len();
        if m % 10 != 0 && m != cap {
            continue;
        }
        let ritz = space.ritz()?;
        let (hi, lo) = (ritz.values[0], ritz.values[m - 1]);
        let res = ritz.residuals[0].max(ritz.residuals[m - 1]);
        let scale = (hi - lo).max(hi.abs().max(lo.abs())).max(f64::MIN_POSITIVE);
        last = (lo, hi, res);
        if res <= BOUNDS_TOLERANCE * scale || m == dim {
            return SpectralBounds::new(lo, hi, margin);
        }
    }
    Err(Error::Solver(format!(
        "extremal Lanczos did not converge in {cap} steps: Ritz interval [{}, {}], residual {:.3e}",
        last.0, last.1, last.2
    )))
}

/// `H~ = (H - b) / a`, applied lazily.
#[derive(Clone, Copy, Debug)]
pub struct NormalizedOperator<'a> {
    op: &'a SparseHermitianOperator,
    bounds: SpectralBounds,
}

pub fn normalize_operator(h: &SparseHermitianOperator, bounds: SpectralBounds) -> Result<NormalizedOperator<'_>> {
    let a = bounds.a();
    if !(a > 0.0) {
        return Err(Error::param("spectral half width is zero; cannot normalize a degenerate spectrum"));
    }
    Ok(NormalizedOperator { op: h, bounds })
}

impl<'a> NormalizedOperator<'a> {
    pub fn operator(&self) -> &'a SparseHermitianOperator {
        self.op
    }

    pub fn bounds(&self) -> SpectralBounds {
        self.bounds
    }

    pub fn a(&self) -> f64 {
        self.bounds.a()
    }

    pub fn b(&self) -> f64 {
        self.bounds.b()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn apply(&self, x: &[C64]) -> Result<Vec<C64>> {
        check_dim(self.dim(), x.len())?;
        let mut y = vec![C64::new(0.0, 0.0); x.len()];
        self.apply_into(x, &mut y);
        Ok(y)
    }

    pub fn apply_into(&self, x: &[C64], y: &mut [C64]) {
        self.op.affine_into(x, y, 1.0 / self.a(), self.b());
    }

    /// `prev <- 2 H~ cur - prev`.
    pub fn chebyshev_step(&self, cur: &[C64], prev: &mut [C64]) {
        self.op.chebyshev_step(cur, prev, 1.0 / self.a(), self.b());
    }
}
