//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Writes a summary line at the end. Set `DMCHAIN_ACCEPTANCE_STRICT=1` to turn
//! any FAIL into a non-zero exit status; errors and panics always are.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::{Arc, OnceLock};
use std::time::Instant;

use dmchain::analysis::*;
use dmchain::dynamics::*;
use dmchain::eigensolve::*;
use dmchain::entanglement::ggm_pair;
use dmchain::model::*;
use dmchain::observables::*;
use dmchain::pipeline::{apply_overrides, parse_config, run_pipeline};
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

const MASTER: u64 = 20_240_601;

type Outcome = dmchain::Result<(bool, String)>;

// Equilibrium sweep grids shared by criteria 2, 3, 7 and 9.
const EQ_SIZES: [(usize, usize, usize); 3] = [(8, 22, 1000), (10, 80, 200), (12, 200, 40)];
const EQ_SIZES_DM: [(usize, usize, usize); 3] = [(8, 22, 600), (10, 80, 150), (12, 200, 30)];

fn eq_grid(dp: f64) -> Vec<f64> {
    if dp == 0.0 {
        (1..=16).map(|k| 0.5 * k as f64).collect()
    } else {
        (1..=12).map(|k| k as f64).collect()
    }
}

// Dynamics grid shared by the two criterion-9 quench estimators.
const DYN_H: [f64; 10] = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 10.0, 12.0];
const DYN_SIZES: [(usize, usize); 4] = [(8, 400), (10, 200), (12, 60), (14, 20)];

#[derive(Clone, Debug)]
struct EqPoint {
    n: usize,
    h: f64,
    r: f64,
    ggm: f64,
    ggm_se: f64,
    ggm1: f64,
    diff: f64,
    max_violation: f64,
}

fn ensemble(n: usize, h: f64, h_index: usize, d: f64, dp: f64, n_eps: usize, n_r: usize) -> dmchain::Result<DisorderEnsemble> {
    Ok(DisorderEnsemble {
        n_sites: n,
        h,
        coupling: CouplingParams::dm(d, dp)?,
        bc: BoundaryCondition::Periodic,
        n_eps,
        n_realizations: n_r,
        master_seed: MASTER,
        h_index,
        solver: SolverSettings::default(),
    })
}

fn mean_of(v: &[f64]) -> f64 {
    pairwise_sum(v) / v.len() as f64
}

fn eq_point(n: usize, h: f64, h_index: usize, dp: f64, n_eps: usize, n_r: usize) -> dmchain::Result<EqPoint> {
    let ens = ensemble(n, h, h_index, 0.0, dp, n_eps, n_r)?;
    let per = ens.map(Needs::Vectors, |r| {
        let mut g = Vec::new();
        let mut g1 = Vec::new();
        let mut worst = f64::NEG_INFINITY;
        for s in r.states() {
            let (a, b) = ggm_pair(s)?;
            worst = worst.max(a.value - b.value);
            g.push(a.value);
            g1.push(b.value);
        }
        let diff: Vec<f64> = g.iter().zip(&g1).map(|(a, b)| a - b).collect();
        Ok([gap_ratios(&r.energies)?.mean(), mean_of(&g), mean_of(&g1), mean_of(&diff), worst])
    })?;
    let per: Vec<[f64; 5]> = per.into_iter().collect::<dmchain::Result<_>>()?;
    let col = |k: usize| per.iter().map(|p| p[k]).collect::<Vec<f64>>();
    let (ggm, ggm_se, _) = aggregate(&col(1))?;
    Ok(EqPoint {
        n,
        h,
        r: aggregate(&col(0))?.0,
        ggm,
        ggm_se,
        ggm1: aggregate(&col(2))?.0,
        diff: aggregate(&col(3))?.0,
        max_violation: col(4).into_iter().fold(f64::NEG_INFINITY, f64::max),
    })
}

fn eq_sweep(dp: f64) -> dmchain::Result<Vec<EqPoint>> {
    let sizes = if dp == 0.0 { EQ_SIZES } else { EQ_SIZES_DM };
    let mut out = Vec::new();
    for (n, n_eps, n_r) in sizes {
        for (k, &h) in eq_grid(dp).iter().enumerate() {
            out.push(eq_point(n, h, k, dp, n_eps, n_r)?);
        }
    }
    Ok(out)
}

static EQ_PLAIN: OnceLock<Vec<EqPoint>> = OnceLock::new();
static EQ_DM: OnceLock<Vec<EqPoint>> = OnceLock::new();

fn eq_data(dp: f64) -> dmchain::Result<&'static [EqPoint]> {
    let cell = if dp == 0.0 { &EQ_PLAIN } else { &EQ_DM };
    if let Some(v) = cell.get() {
        return Ok(v);
    }
    let v = eq_sweep(dp)?;
    Ok(cell.get_or_init(|| v))
}

fn find(data: &[EqPoint], n: usize, h: f64) -> &EqPoint {
    data.iter().find(|p| p.n == n && p.h == h).expect("point in sweep grid")
}

fn collapse(data: &[EqPoint], observable: &str) -> dmchain::Result<CollapseFit> {
    let rows = data
        .iter()
        .map(|p| ScalingRow {
            n_sites: p.n,
            h: p.h,
            x: if observable == "ggm" { p.ggm } else { p.r },
            stderr: 0.0,
        })
        .collect();
    fss_fit(&ScalingDataset::new(observable, rows)?, &FitBox::default())
}

// Quench series at every criterion-9 point, dense propagation.
struct DynPoint {
    n: usize,
    h: f64,
    dp: f64,
    g_inf: f64,
    alpha: f64,
}

static DYN: OnceLock<Vec<DynPoint>> = OnceLock::new();

fn dyn_data() -> dmchain::Result<&'static [DynPoint]> {
    if let Some(v) = DYN.get() {
        return Ok(v);
    }
    let grid = TimeGrid::default();
    let mut out = Vec::new();
    for dp in [0.0, 0.5] {
        for (n, n_r) in DYN_SIZES {
            for (k, &h) in DYN_H.iter().enumerate() {
                let params = QuenchParams {
                    propagator: Propagator::Dense,
                    h_index: k,
                    ..QuenchParams::new(n, h, CouplingParams::dm(0.0, dp)?)
                };
                let s = evolve_ggm_series(&params, &grid, n_r, MASTER)?;
                out.push(DynPoint {
                    n,
                    h,
                    dp,
                    g_inf: steady_state_value(&s, None)?.0,
                    alpha: transient_fit(&s, None)?.alpha,
                });
            }
        }
    }
    Ok(DYN.get_or_init(|| out))
}

fn criterion_1() -> Outcome {
    let cases = [(1.0, 0.0, 0.5307), (8.0, 0.0, 0.3863), (1.0, 0.5, 0.5996)];
    let mut ok = true;
    let mut parts = Vec::new();
    for (k, (h, d, want)) in cases.into_iter().enumerate() {
        let ens = ensemble(12, h, 100 + k, d, 0.0, 200, 300)?;
        let per = ens.map(Needs::Values, |r| Ok(gap_ratios(&r.energies)?.mean()))?;
        let out = QuenchedOutcome::from_results(&ens, "gap_ratio", per)?;
        let r = out.record.mean;
        ok &= (r - want).abs() <= 0.015;
        parts.push(format!("h={h} D={d}: r={r:.4} (target {want} +- 0.015, stderr {:.4})", out.record.stderr));
    }
    Ok((ok, parts.join("; ")))
}

fn criterion_2() -> Outcome {
    let data = eq_data(0.0)?;
    let hs = [1.0, 2.0, 4.0, 6.0, 8.0];
    let g: Vec<f64> = hs.iter().map(|&h| find(data, 12, h).ggm).collect();
    let se: Vec<f64> = hs.iter().map(|&h| find(data, 12, h).ggm_se).collect();
    let plateau = (0.40..=0.55).contains(&g[0]);
    let deep = g[4] < 0.06;
    let monotone = g.windows(2).all(|w| w[1] < w[0]);
    let vals: Vec<String> = hs.iter().zip(&g).zip(&se).map(|((h, g), s)| format!("h={h}: {g:.4}+-{s:.4}")).collect();
    Ok((
        plateau && deep && monotone,
        format!("N=12 n_R=40 {}; plateau in [0.40, 0.55]: {plateau}; h=8 below 0.06: {deep}; monotone: {monotone}", vals.join(", ")),
    ))
}

fn criterion_3() -> Outcome {
    let data = eq_data(0.0)?;
    let mut ok = true;
    let mut parts = Vec::new();
    for h in [1.0, 5.0] {
        let d: Vec<f64> = [8, 10, 12].iter().map(|&n| find(data, n, h).diff.abs()).collect();
        let dec = d[0] > d[1] && d[1] > d[2];
        ok &= dec;
        parts.push(format!("h={h}: |avg(G-G1)| = {:.3e}, {:.3e}, {:.3e} decreasing: {dec}", d[0], d[1], d[2]));
    }
    let p = find(data, 12, 1.0);
    parts.push(format!("N=12 h=1: G={:.4}, G1={:.4}", p.ggm, p.ggm1));
    let worst = data.iter().map(|p| p.max_violation).fold(f64::NEG_INFINITY, f64::max);
    let bound = worst <= 1e-12;
    ok &= bound;
    parts.push(format!("max over states of G-G1 = {worst:.2e} (bound 1e-12)"));
    Ok((ok, parts.join("; ")))
}

fn criterion_4() -> Outcome {
    let mut worst_e: f64 = 0.0;
    let mut worst_overlap: f64 = 0.0;
    let mut min_theta = f64::INFINITY;
    let mut runs = 0;
    for (n, n_eps) in [(10, 80), (12, 200)] {
        let basis = Arc::new(enumerate_sector(n, Magnetization::ZERO)?);
        for (k, h) in [1.0, 4.0, 8.0].into_iter().enumerate() {
            let ens = ensemble(n, h, 200 + k, 0.0, 0.0, n_eps, 20)?;
            for r in 0..20 {
                let (_, op) = ens.hamiltonian(&basis, r)?;
                let pol = polfed_interior(&op, &basis, &PolfedConfig::new(n_eps))?;
                let sys = dense_eigensystem(&op)?;
                min_theta = min_theta.min(pol.theta_min.unwrap_or(f64::NAN));
                for (e, v) in pol.values.iter().zip(&pol.vectors) {
                    let j = sys.values.partition_point(|x| x < e);
                    let near = [j.saturating_sub(1), j.min(sys.dim() - 1)];
                    let de = near.iter().map(|&i| (sys.values[i] - e).abs()).fold(f64::INFINITY, f64::min);
                    worst_e = worst_e.max(de);
                    // Weight on the dense eigenvectors sharing this eigenvalue.
                    let w: f64 = (0..sys.dim())
                        .filter(|&i| (sys.values[i] - e).abs() < 1e-8)
                        .map(|i| {
                            let u = sys.vector(i);
                            u.iter().zip(v.amplitudes()).map(|(a, b)| a.conj() * b).sum::<C64>().norm_sqr()
                        })
                        .sum();
                    worst_overlap = worst_overlap.max(1.0 - w);
                }
                runs += 1;
            }
        }
    }
    let ok = worst_e < 1e-8 && worst_overlap < 1e-8 && min_theta > 0.2;
    Ok((
        ok,
        format!("{runs} runs: max |E_polfed - E_dense| = {worst_e:.2e}, max 1 - overlap = {worst_overlap:.2e}, min theta = {min_theta:.3}"),
    ))
}

fn criterion_5() -> Outcome {
    let times = [1.0, 10.0, 100.0, 1000.0];
    let mut worst: f64 = 0.0;
    for n in [8, 10] {
        let basis = Arc::new(enumerate_sector(n, Magnetization::ZERO)?);
        for (k, h) in [1.0, 4.0, 8.0].into_iter().enumerate() {
            for (d, dp) in [(0.0, 0.0), (0.5, 0.0), (0.0, 0.5)] {
                let field = sample_disorder(h, n, dmchain::seeding::derive_seed(MASTER, n, 300 + k, 0))?;
                let op = build_hamiltonian(&CouplingParams::dm(d, dp)?, &field, &basis, BoundaryCondition::Open)?;
                let sys = dense_eigensystem(&op)?;
                let hn = normalize_operator(&op, extremal_bounds(&op, DEFAULT_MARGIN)?)?;
                let psi0 = neel_state(basis.clone())?.into_amplitudes();
                let mut psi = psi0.clone();
                let mut work = PropagatorWork::default();
                let mut t = 0.0;
                for &tk in &times {
                    chebyshev_propagate_in_place(&hn, &mut psi, tk - t, DEFAULT_EPS_M, &mut work)?;
                    t = tk;
                    let exact = dense_propagate(&sys, &psi0, tk)?;
                    let err = psi.iter().zip(&exact).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
                    worst = worst.max(err);
                }
            }
        }
    }
    let grid = TimeGrid::default();
    let basis = Arc::new(enumerate_sector(12, Magnetization::ZERO)?);
    let (mut norm, mut energy): (f64, f64) = (0.0, 0.0);
    for (k, (h, dp)) in [(1.0, 0.0), (8.0, 0.5)].into_iter().enumerate() {
        let p = QuenchParams {
            h_index: 310 + k,
            ..QuenchParams::new(12, h, CouplingParams::dm(0.0, dp)?)
        };
        let tr = evolve_realization(&p, &grid, &basis, MASTER, 0)?;
        norm = norm.max(tr.max_norm_drift);
        energy = energy.max(tr.max_energy_drift);
    }
    let ok = worst < 1e-8 && norm < 1e-8 && energy < 1e-8;
    Ok((
        ok,
        format!("N=8,10 max fidelity error {worst:.2e}; N=12 to t=1e5 norm drift {norm:.2e}, energy drift {energy:.2e}"),
    ))
}

fn criterion_6() -> Outcome {
    let mut profiles = Vec::new();
    for (k, h) in [6.23, 1.77].into_iter().enumerate() {
        let ens = ensemble(12, h, 400 + k, 0.5, 0.0, 200, 50)?;
        let per = ens
            .map(Needs::Vectors, |r| correlator_profile(r.states(), BoundaryCondition::Periodic))?
            .into_iter()
            .collect::<dmchain::Result<Vec<_>>>()?;
        profiles.push(CorrelatorProfile::average(&per)?);
    }
    let at6 = |p: &CorrelatorProfile| p.values[p.distances.iter().position(|&r| r == 6).unwrap()];
    let (mbl, erg) = (at6(&profiles[0]), at6(&profiles[1]));
    let dec = profiles[0].values.windows(2).all(|w| w[1] < w[0]);
    let ok = (mbl + 10.5).abs() <= 1.5 && (erg + 4.5).abs() <= 1.0 && dec;
    let prof: Vec<String> = profiles[0].values.iter().map(|v| format!("{v:.2}")).collect();
    Ok((
        ok,
        format!("h=6.23 r=6: {mbl:.2} (target -10.5 +- 1.5); h=1.77 r=6: {erg:.2} (target -4.5 +- 1.0); h=6.23 profile [{}] decreasing: {dec}", prof.join(", ")),
    ))
}

fn synthetic(seed: u64) -> dmchain::Result<ScalingDataset> {
    let (h0, nu0) = (3.5, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, 0.01).unwrap();
    let mut rows = Vec::new();
    for n in [8usize, 10, 12, 14] {
        for k in 0..13 {
            let h = 0.5 + 0.5 * k as f64;
            let s = (h - h0).signum() * n as f64 * (h - h0).abs().powf(nu0);
            let x = 0.5 - 0.4 * (s / 15.0).tanh();
            rows.push(ScalingRow {
                n_sites: n,
                h,
                x: x * (1.0 + noise.sample(&mut rng)),
                stderr: 0.0,
            });
        }
    }
    ScalingDataset::new("synthetic", rows)
}

fn criterion_7() -> Outcome {
    let mut hits = 0;
    for seed in 0..10 {
        let fit = fss_fit(&synthetic(seed)?, &FitBox::default())?;
        if (fit.h_star - 3.5).abs() <= 0.2 && (fit.nu - 1.0).abs() <= 0.2 {
            hits += 1;
        }
    }
    let data = eq_data(0.0)?;
    let g = collapse(data, "ggm")?;
    let r = collapse(data, "gap_ratio")?;
    let ok = hits >= 9 && (3.0..=5.0).contains(&g.h_star) && (2.2..=3.8).contains(&r.h_star);
    Ok((
        ok,
        format!(
            "synthetic recovery {hits}/10; GGM collapse h*={:.2} nu={:.2} (band [3.0, 5.0]); gap-ratio collapse h*={:.2} nu={:.2} (band [2.2, 3.8])",
            g.h_star, g.nu, r.h_star, r.nu
        ),
    ))
}

fn criterion_8() -> Outcome {
    let grid = TimeGrid::default();
    let hs = [1.0, 2.0, 4.0, 6.0, 8.0];
    let mut peaks = Vec::new();
    let mut g_inf = Vec::new();
    let mut alpha = Vec::new();
    for (k, &h) in hs.iter().enumerate() {
        let p = QuenchParams {
            propagator: Propagator::Dense,
            h_index: 500 + k,
            ..QuenchParams::new(14, h, CouplingParams::heisenberg())
        };
        let s = evolve_ggm_series(&p, &grid, 100, MASTER)?;
        let g = &s.mean_ggm;
        let peak = (1..g.len() - 1).find(|&i| grid.times[i] < 1.0 && g[i] > g[i - 1] && g[i] > g[i + 1]);
        peaks.push(peak.map(|i| grid.times[i]));
        g_inf.push(steady_state_value(&s, None)?.0);
        alpha.push(transient_fit(&s, None)?.alpha);
    }
    let all_peaks = peaks.iter().all(Option::is_some);
    let plateau = (0.2..=0.4).contains(&g_inf[0]);
    let ratio = g_inf[0] > 3.0 * g_inf[4];
    let monotone = alpha.windows(2).all(|w| w[1] < w[0]);
    let cross = first_crossing(&hs, &alpha, ALPHA_THRESHOLD);
    let cross_ok = cross.is_some_and(|h| h > 2.0 && h < 6.0);
    let fmt = |v: &[f64], p: usize| v.iter().map(|x| format!("{x:.prec$}", prec = p)).collect::<Vec<_>>().join(", ");
    let pk: Vec<String> = peaks.iter().map(|p| p.map_or("none".into(), |t| format!("{t:.2}"))).collect();
    Ok((
        all_peaks && plateau && ratio && monotone && cross_ok,
        format!(
            "N=14 n_R'=100; peak t<1 per h [{}]: {all_peaks}; G_inf [{}]; G_inf(1) in [0.2, 0.4]: {plateau}; G_inf(1) > 3 G_inf(8): {ratio}; alpha [{}] decreasing: {monotone}; crossing at {} in (2, 6): {cross_ok}",
            pk.join(", "),
            fmt(&g_inf, 4),
            fmt(&alpha, 5),
            cross.map_or("none".into(), |h| format!("{h:.2}"))
        ),
    ))
}

fn criterion_9() -> Outcome {
    let mut est: BTreeMap<&str, [Option<f64>; 2]> = BTreeMap::new();
    for (i, dp) in [0.0, 0.5].into_iter().enumerate() {
        let data = eq_data(dp)?;
        est.entry("collapse GGM").or_default()[i] = Some(collapse(data, "ggm")?.h_star);
        est.entry("collapse r").or_default()[i] = Some(collapse(data, "gap_ratio")?.h_star);
    }
    let dynp = dyn_data()?;
    for (i, dp) in [0.0, 0.5].into_iter().enumerate() {
        let alphas: Vec<f64> = DYN_H
            .iter()
            .map(|&h| dynp.iter().find(|p| p.n == 12 && p.h == h && p.dp == dp).unwrap().alpha)
            .collect();
        est.entry("alpha threshold").or_default()[i] = first_crossing(&DYN_H, &alphas, ALPHA_THRESHOLD);
        let mut betas = Vec::new();
        for &h in &DYN_H {
            let pts: Vec<(usize, f64)> = dynp.iter().filter(|p| p.h == h && p.dp == dp).map(|p| (p.n, p.g_inf)).collect();
            betas.push(steady_scaling_fit(&pts)?.beta);
        }
        est.entry("beta zero").or_default()[i] = first_crossing(&DYN_H, &betas, 0.0);
    }
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, [a, b]) in &est {
        let pass = matches!((a, b), (Some(x), Some(y)) if y - x >= 1.0);
        ok &= pass;
        let f = |v: &Option<f64>| v.map_or("none".to_string(), |x| format!("{x:.2}"));
        parts.push(format!("{name}: D'=0 {} vs D'=0.5 {}", f(a), f(b)));
    }
    Ok((ok, parts.join("; ")))
}

const DET_SWEEP: &str = r#"
pipeline = "equilibrium_sweep"
[model]
N = [8, 10]
h = [1.0, 3.0, 5.0]
Dprime = 0.5
[sampling]
n_R = 20
[observables]
list = ["gap_ratio", "ggm", "ggm1", "ln_czz"]
"#;

const DET_DYNAMICS: &str = r#"
pipeline = "dynamics"
[model]
N = [8, 10]
h = [2.0, 6.0]
[sampling]
n_R_prime = 6
[dynamics]
t_max = 1e4
points_per_decade = 10
"#;

fn criterion_10() -> Outcome {
    let root = tempfile::tempdir().map_err(|e| dmchain::Error::io(std::env::temp_dir(), e))?;
    let mut compared = 0;
    let mut same = true;
    for (name, text) in [("sweep", DET_SWEEP), ("dynamics", DET_DYNAMICS)] {
        let mut outputs = Vec::new();
        for workers in [1usize, 3] {
            let dir = root.path().join(format!("{name}-{workers}"));
            let cfg = parse_config(&apply_overrides(text, &[format!("output_dir={:?}", dir.display().to_string())])?)?;
            let m = run_pipeline(&cfg, Some(workers))?;
            outputs.push((dir, m.outputs));
        }
        for f in outputs[0].1.iter().filter(|f| f.ends_with(".csv")) {
            let a = std::fs::read(outputs[0].0.join(f)).map_err(|e| dmchain::Error::io(f, e))?;
            let b = std::fs::read(outputs[1].0.join(f)).map_err(|e| dmchain::Error::io(f, e))?;
            same &= a == b;
            compared += 1;
        }
        same &= outputs[0].1 == outputs[1].1;
    }
    Ok((same && compared > 0, format!("{compared} CSV files byte-identical across 1 and 3 workers: {same}")))
}

fn main() -> ExitCode {
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error")).is_test(true).try_init();
    let criteria: [(usize, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let only: Option<Vec<usize>> = std::env::var("DMCHAIN_ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let strict = std::env::var("DMCHAIN_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let (mut passed, mut failed, mut errors) = (0, 0, 0);
    for (id, run) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(Ok((true, detail))) => {
                passed += 1;
                println!("criterion {id:>2} PASS ({secs:.0} s): {detail}");
            }
            Ok(Ok((false, detail))) => {
                failed += 1;
                println!("criterion {id:>2} FAIL ({secs:.0} s): {detail}");
            }
            Ok(Err(e)) => {
                errors += 1;
                println!("criterion {id:>2} ERROR ({secs:.0} s): {e}");
            }
            Err(_) => {
                errors += 1;
                println!("criterion {id:>2} ERROR ({secs:.0} s): panicked");
            }
        }
    }
    println!("acceptance: {passed} passed, {failed} failed, {errors} errors");
    if errors > 0 || (strict && failed > 0) {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
