//! Chebyshev spectral filter peaked at a target `σ` of the normalized spectrum.

use num_complex::Complex64 as C64;

use super::bounds::NormalizedOperator;
use crate::error::{check_dim, Error, Result};

/// Unnormalized coefficients `c_p = 2^{min(1,p)} cos(p arccos σ)`, `p = 0..=order`.
pub fn filter_coefficients(sigma: f64, order: usize) -> Vec<f64> {
    let phi = sigma.clamp(-1.0, 1.0).acos();
    (0..=order)
        .map(|p| if p == 0 { 1.0 } else { 2.0 * (p as f64 * phi).cos() })
        .collect()
}

/// `f(x) = (1/D) Σ c_p T_p(x)` with `D` chosen so that `f(σ) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChebyshevFilter {
    sigma: f64,
    coeffs: Vec<f64>,
}

impl ChebyshevFilter {
    pub fn new(sigma: f64, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::param("filter order must be at least 1"));
        }
        if !(-1.0..=1.0).contains(&sigma) {
            return Err(Error::param(format!("filter target {sigma} outside [-1, 1]")));
        }
        let raw = filter_coefficients(sigma, order);
        let d = clenshaw(&raw, sigma);
        Ok(ChebyshevFilter {
            sigma,
            coeffs: raw.into_iter().map(|c| c / d).collect(),
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Normalized coefficients.
    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, x: f64) -> f64 {
        clenshaw(&self.coeffs, x)
    }

    /// `out = f(H~) x` using `order` products with `H~`.
    pub fn apply_into(&self, hn: &NormalizedOperator, x: &[C64], out: &mut [C64], work: &mut FilterWork) {
        let dim = x.len();
        work.ensure(dim);
        let (prev, cur) = (&mut work.prev, &mut work.cur);
        prev.copy_from_slice(x);
        hn.apply_into(x, cur);
        for ((o, &a), &b) in out.iter_mut().zip(prev.iter()).zip(cur.iter()) {
            *o = a * self.coeffs[0] + b * self.coeffs[1];
        }
        for &c in &self.coeffs[2..] {
            hn.chebyshev_step(cur, prev);
            std::mem::swap(prev, cur);
            for (o, &v) in out.iter_mut().zip(cur.iter()) {
                *o += v * c;
            }
        }
    }
}

/// Scratch vectors for repeated filter applications.
#[derive(Default)]
pub struct FilterWork {
    prev: Vec<C64>,
    cur: Vec<C64>,
}

impl FilterWork {
    fn ensure(&mut self, dim: usize) {
        if self.prev.len() != dim {
            self.prev = vec![C64::new(0.0, 0.0); dim];
            self.cur = vec![C64::new(0.0, 0.0); dim];
        }
    }
}

/// `f_σ^K(H~) x`.
pub fn filter_apply(hn: &NormalizedOperator, sigma: f64, order: usize, x: &[C64]) -> Result<Vec<C64>> {
    check_dim(hn.dim(), x.len())?;
    let f = ChebyshevFilter::new(sigma, order)?;
    let mut out = vec![C64::new(0.0, 0.0); x.len()];
    f.apply_into(hn, x, &mut out, &mut FilterWork::default());
    Ok(out)
}

fn clenshaw(c: &[f64], x: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &ck in c[1..].iter().rev() {
        let b0 = 2.0 * x * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    c[0] + x * b1 - b2
}
