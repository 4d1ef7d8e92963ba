use crate::error::{Error, Result};

const SCAN_POINTS: usize = 64;
const CANDIDATES: usize = 4;
const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Maximizes `f` on `[lo, hi]`.
///
/// A 64-point pre-scan (log-spaced when `lo > 0`, linear otherwise) locates
/// the grid-local maxima; golden-section search then refines the best few of
/// them inside their two neighbouring grid cells until each bracket is
/// narrower than `x_tol`. Returns `(x_star, f(x_star))`.
pub fn maximize_scalar<F>(mut f: F, lo: f64, hi: f64, x_tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::domain(format!("maximize_scalar requires lo < hi, got [{lo}, {hi}]")));
    }
    if !(x_tol > 0.0) {
        return Err(Error::domain(format!("maximize_scalar requires x_tol > 0, got {x_tol}")));
    }
    let log_spaced = lo > 0.0;
    let node = |i: usize| -> f64 {
        if i == 0 {
            return lo;
        }
        if i == SCAN_POINTS - 1 {
            return hi;
        }
        let s = i as f64 / (SCAN_POINTS - 1) as f64;
        if log_spaced {
            (lo.ln() + s * (hi / lo).ln()).exp()
        } else {
            lo + s * (hi - lo)
        }
    };

    let mut values = Vec::with_capacity(SCAN_POINTS);
    for i in 0..SCAN_POINTS {
        let y = f(node(i));
        if y.is_nan() {
            return Err(Error::domain(format!("objective is NaN at x = {}", node(i))));
        }
        values.push(y);
    }
    let mut peaks: Vec<usize> = (0..SCAN_POINTS)
        .filter(|&i| (i == 0 || values[i] >= values[i - 1]) && (i + 1 == SCAN_POINTS || values[i] >= values[i + 1]))
        .collect();
    peaks.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    peaks.truncate(CANDIDATES);

    let (mut best_x, mut best_f) = (node(peaks[0]), values[peaks[0]]);
    for &i in &peaks {
        let a = node(i.saturating_sub(1));
        let b = node((i + 1).min(SCAN_POINTS - 1));
        let (x, y) = golden_section(&mut f, a, b, x_tol);
        if y > best_f {
            best_f = y;
            best_x = x;
        }
    }
    Ok((best_x, best_f))
}

fn golden_section<F: FnMut(f64) -> f64>(f: &mut F, mut a: f64, mut b: f64, x_tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > x_tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    let fm = f(mid);
    [(c, fc), (d, fd), (mid, fm)]
        .into_iter()
        .fold((f64::NAN, f64::NEG_INFINITY), |best, p| if p.1 > best.1 { p } else { best })
}
