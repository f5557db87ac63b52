/// Nelder-Mead minimization from `start` with initial edge lengths `step`.
///
/// Stops when the spread of simplex values falls below `tol` or after `max_iter`
/// iterations; returns the best vertex and its value.
pub(crate) fn nelder_mead<F: Fn(&[f64]) -> f64>(f: F, start: &[f64], step: &[f64], tol: f64, max_iter: usize) -> (Vec<f64>, f64) {
    let n = start.len();
    let mut pts: Vec<Vec<f64>> = vec![start.to_vec()];
    for i in 0..n {
        let mut p = start.to_vec();
        p[i] += step[i];
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| f(p)).collect();
    for _ in 0..max_iter {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        pts = order.iter().map(|&i| pts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();
        if (vals[n] - vals[0]).abs() < tol {
            break;
        }
        let centroid: Vec<f64> = (0..n).map(|d| pts[..n].iter().map(|p| p[d]).sum::<f64>() / n as f64).collect();
        let along = |t: f64| -> Vec<f64> { (0..n).map(|d| centroid[d] + t * (pts[n][d] - centroid[d])).collect() };
        let refl = along(-1.0);
        let fr = f(&refl);
        if fr < vals[0] {
            let exp = along(-2.0);
            let fe = f(&exp);
            (pts[n], vals[n]) = if fe < fr { (exp, fe) } else { (refl, fr) };
        } else if fr < vals[n - 1] {
            (pts[n], vals[n]) = (refl, fr);
        } else {
            let con = if fr < vals[n] { along(-0.5) } else { along(0.5) };
            let fc = f(&con);
            if fc < vals[n].min(fr) {
                (pts[n], vals[n]) = (con, fc);
            } else {
                for i in 1..=n {
                    pts[i] = (0..n).map(|d| pts[0][d] + 0.5 * (pts[i][d] - pts[0][d])).collect();
                    vals[i] = f(&pts[i]);
                }
            }
        }
    }
    let best = (0..=n).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
    (pts[best].clone(), vals[best])
}
