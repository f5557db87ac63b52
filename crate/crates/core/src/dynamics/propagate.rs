use num_complex::Complex64 as C64;

use super::bessel::bessel_j_sequence;
use crate::eigensolve::NormalizedOperator;
use crate::entanglement::norm_of;
use crate::error::{check_dim, Error, Result};

pub const DEFAULT_EPS_M: f64 = 1e-10;
pub const MAX_EXPANSION_ORDER: usize = 1_000_000;

/// Reusable buffers for Chebyshev steps on one trajectory.
#[derive(Default)]
pub struct PropagatorWork {
    prev: Vec<C64>,
    cur: Vec<C64>,
    acc: Vec<C64>,
}

/// Expansion order used by the last call, for diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepInfo {
    pub order: usize,
}

/// `e^{-i H dt} ψ` via the Chebyshev expansion of the normalized operator.
///
/// The series `e^{-i b dt} Σ a_n T_n(H~) ψ`, `a_n = 2^{min(1,n)} (-i)^n J_n(a dt)`,
/// runs to at least `max(30, 2 a dt)` terms and stops once `|a_n| ||T_n(H~) ψ|| < eps_m`.
pub fn chebyshev_propagate(hn: &NormalizedOperator, psi: &[C64], dt: f64, eps_m: f64) -> Result<Vec<C64>> {
    check_dim(hn.dim(), psi.len())?;
    let mut out = psi.to_vec();
    chebyshev_propagate_in_place(hn, &mut out, dt, eps_m, &mut PropagatorWork::default())?;
    Ok(out)
}

pub fn chebyshev_propagate_in_place(
    hn: &NormalizedOperator,
    psi: &mut [C64],
    dt: f64,
    eps_m: f64,
    work: &mut PropagatorWork,
) -> Result<StepInfo> {
    check_dim(hn.dim(), psi.len())?;
    if !(dt >= 0.0 && dt.is_finite()) {
        return Err(Error::param(format!("time step must be finite and non-negative, got {dt}")));
    }
    if dt == 0.0 {
        return Ok(StepInfo { order: 0 });
    }
    let dim = psi.len();
    let x = hn.a() * dt;
    let min_order = ((2.0 * x).ceil() as usize).max(30);
    if min_order > MAX_EXPANSION_ORDER {
        return Err(step_error(dt, min_order));
    }
    let mut n_max = min_order + 64 + (x.cbrt() * 10.0) as usize;
    let mut bessel = bessel_j_sequence(n_max, x);

    for v in [&mut work.prev, &mut work.cur, &mut work.acc] {
        v.clear();
        v.resize(dim, C64::new(0.0, 0.0));
    }
    let (prev, cur, acc) = (&mut work.prev, &mut work.cur, &mut work.acc);
    prev.copy_from_slice(psi);
    hn.apply_into(psi, cur);
    let a0 = bessel[0];
    let a1 = C64::new(0.0, -2.0 * bessel[1]);
    for ((o, p), c) in acc.iter_mut().zip(prev.iter()).zip(cur.iter()) {
        *o = p * a0 + c * a1;
    }
    // (-i)^n cycles with period four.
    const PHASE: [C64; 4] = [
        C64 { re: 1.0, im: 0.0 },
        C64 { re: 0.0, im: -1.0 },
        C64 { re: -1.0, im: 0.0 },
        C64 { re: 0.0, im: 1.0 },
    ];
    let mut n = 1;
    loop {
        n += 1;
        if n > n_max {
            if n_max >= MAX_EXPANSION_ORDER {
                return Err(step_error(dt, n));
            }
            n_max = (2 * n_max).min(MAX_EXPANSION_ORDER);
            bessel = bessel_j_sequence(n_max, x);
        }
        hn.chebyshev_step(cur, prev);
        std::mem::swap(prev, cur);
        let coef = PHASE[n % 4] * (2.0 * bessel[n]);
        for (o, v) in acc.iter_mut().zip(cur.iter()) {
            *o += v * coef;
        }
        if n >= min_order && coef.norm() * norm_of(cur) < eps_m {
            break;
        }
    }
    let phase = C64::from_polar(1.0, -hn.b() * dt);
    for (p, a) in psi.iter_mut().zip(acc.iter()) {
        *p = a * phase;
    }
    Ok(StepInfo { order: n })
}

fn step_error(dt: f64, order: usize) -> Error {
    Error::Solver(format!(
        "Chebyshev expansion for dt = {dt} needs more than {MAX_EXPANSION_ORDER} terms (reached {order}); use a smaller time step"
    ))
}
