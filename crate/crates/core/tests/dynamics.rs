use std::sync::Arc;

use dmchain::dynamics::*;
use dmchain::eigensolve::{dense_eigensystem, extremal_bounds, normalize_operator, DEFAULT_MARGIN};
use dmchain::entanglement::GgmMode;
use dmchain::model::*;
use num_complex::Complex64 as C64;

fn distance(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

fn hamiltonian(n: usize, h: f64, d: f64, dp: f64, seed: u64) -> (SparseHermitianOperator, Arc<SectorBasis>) {
    let basis = Arc::new(enumerate_sector(n, Magnetization::ZERO).unwrap());
    let field = sample_disorder(h, n, seed).unwrap();
    let op = build_hamiltonian(&CouplingParams::dm(d, dp).unwrap(), &field, &basis, BoundaryCondition::Open).unwrap();
    (op, basis)
}

#[test]
fn chebyshev_agrees_with_dense_up_to_a_thousand() {
    let times = [0.5, 3.0, 10.0, 47.0, 100.0, 400.0, 1000.0];
    for n in [8, 10] {
        for h in [1.0, 4.0, 8.0] {
            for (d, dp) in [(0.0, 0.0), (0.5, 0.0), (0.0, 0.5)] {
                let (op, basis) = hamiltonian(n, h, d, dp, 100 + n as u64);
                let sys = dense_eigensystem(&op).unwrap();
                let hn = normalize_operator(&op, extremal_bounds(&op, DEFAULT_MARGIN).unwrap()).unwrap();
                let psi0 = neel_state(basis).unwrap().into_amplitudes();
                let mut psi = psi0.clone();
                let mut work = PropagatorWork::default();
                let mut t = 0.0;
                for &tk in &times {
                    chebyshev_propagate_in_place(&hn, &mut psi, tk - t, DEFAULT_EPS_M, &mut work).unwrap();
                    t = tk;
                    let err = distance(&psi, &dense_propagate(&sys, &psi0, tk).unwrap());
                    assert!(err < 1e-8, "N={n} h={h} D={d} D'={dp} t={tk}: {err:e}");
                }
            }
        }
    }
}

#[test]
fn single_long_step() {
    let (op, basis) = hamiltonian(8, 3.0, 0.0, 0.0, 1);
    let sys = dense_eigensystem(&op).unwrap();
    let hn = normalize_operator(&op, extremal_bounds(&op, DEFAULT_MARGIN).unwrap()).unwrap();
    let psi0 = neel_state(basis).unwrap().into_amplitudes();
    let cheb = chebyshev_propagate(&hn, &psi0, 100.0, DEFAULT_EPS_M).unwrap();
    assert!(distance(&cheb, &dense_propagate(&sys, &psi0, 100.0).unwrap()) < 1e-8);
}

#[test]
fn conserved_along_the_full_grid() {
    let mut p = QuenchParams::new(10, 2.0, CouplingParams::dm(0.0, 0.5).unwrap());
    p.mode = GgmMode::SingleSite;
    let grid = TimeGrid::default();
    assert_eq!(grid.times.last().copied(), Some(1e5));
    let series = evolve_ggm_series(&p, &grid, 2, 5).unwrap();
    assert!(series.max_norm_drift() < 1e-8, "{}", series.max_norm_drift());
    assert!(series.max_energy_drift() < 1e-8, "{}", series.max_energy_drift());
    assert!(series.mean_ggm.iter().all(|g| (0.0..0.5 + 1e-12).contains(g)));
    assert!(series.stderr.iter().all(|s| *s >= 0.0));
    let dense = evolve_ggm_series(&QuenchParams { propagator: Propagator::Dense, ..p }, &grid, 2, 5).unwrap();
    for (a, b) in series.mean_ggm.iter().zip(&dense.mean_ggm) {
        assert!((a - b).abs() < 1e-8);
    }
}

#[test]
fn series_is_reproducible_and_seeded_per_realization() {
    let p = QuenchParams {
        propagator: Propagator::Dense,
        ..QuenchParams::new(8, 3.0, CouplingParams::heisenberg())
    };
    let grid = TimeGrid::log_spaced(1e-2, 1e3, 10).unwrap();
    let a = evolve_ggm_series(&p, &grid, 12, 9).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let b = pool.install(|| evolve_ggm_series(&p, &grid, 12, 9).unwrap());
    assert_eq!(a.mean_ggm, b.mean_ggm);
    assert_eq!(a.stderr, b.stderr);
    let first = evolve_ggm_series(&p, &grid, 1, 9).unwrap();
    assert_eq!(first.trajectories[0].ggm, a.trajectories[0].ggm);
    assert_ne!(a.trajectories[0].seed, a.trajectories[1].seed);
}

#[test]
fn rejects_bad_inputs() {
    let p = QuenchParams::new(8, 3.0, CouplingParams::heisenberg());
    assert!(evolve_ggm_series(&p, &TimeGrid::default(), 0, 1).is_err());
    let (op, basis) = hamiltonian(8, 1.0, 0.0, 0.0, 2);
    let hn = normalize_operator(&op, extremal_bounds(&op, DEFAULT_MARGIN).unwrap()).unwrap();
    let psi = neel_state(basis).unwrap().into_amplitudes();
    assert!(chebyshev_propagate(&hn, &psi, -1.0, DEFAULT_EPS_M).is_err());
    assert!(chebyshev_propagate(&hn, &psi[..10], 1.0, DEFAULT_EPS_M).is_err());
}
