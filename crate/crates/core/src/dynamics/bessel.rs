//! Bessel functions of the first kind by Miller's backward recurrence.

const RESCALE_ABOVE: f64 = 1e250;

/// `J_0(x), ..., J_{n_max}(x)` for `x >= 0`.
///
/// The recurrence `J_{k-1} = (2k/x) J_k - J_{k+1}` is run downward from an
/// order well past both `n_max` and `x`, and the result is normalized with
/// `J_0 + 2 Σ J_{2k} = 1`.
pub fn bessel_j_sequence(n_max: usize, x: f64) -> Vec<f64> {
    assert!(x >= 0.0 && x.is_finite(), "Bessel argument must be finite and non-negative");
    let mut out = vec![0.0; n_max + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let start = (n_max as f64).max(x) + 40.0 + 15.0 * x.cbrt();
    let mut m = start.ceil() as usize;
    m += m % 2;

    let (mut next, mut cur) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    for k in (1..=m).rev() {
        if k <= n_max {
            out[k] = cur;
        }
        if k % 2 == 0 {
            norm += 2.0 * cur;
        }
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > RESCALE_ABOVE {
            let s = 1.0 / RESCALE_ABOVE;
            cur *= s;
            next *= s;
            norm *= s;
            let upto = n_max.min(m);
            for v in &mut out[k.min(upto + 1)..=upto] {
                *v *= s;
            }
        }
    }
    out[0] = cur;
    norm += cur;
    out.iter_mut().for_each(|v| *v /= norm);
    out
}
