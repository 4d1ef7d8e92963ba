use fading_cvqkd::FadingUniform;
use thiserror::Error;

use crate::approach::{attenuation_db, run_point, Approach};

const SCAN_POINTS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Threshold {
    pub t_min: f64,
    pub attenuation_db: f64,
}

#[derive(Debug, Error)]
pub enum ThresholdError {
    #[error("no sign change: rate is {sign} over t_min in [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64, sign: &'static str },
    #[error("rate is not monotone in t_min near {t_min}")]
    NonMonotone { t_min: f64 },
    #[error("bad bracket [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },
    #[error(transparent)]
    Eval(#[from] fading_cvqkd::Error),
}

/// Default search bracket in `t_min`: the whole range keeping `t_max <= 1`.
pub fn default_bracket(approach: Approach, delta_t: f64) -> (f64, f64) {
    let width = if approach == Approach::Fixed { 0.0 } else { delta_t };
    (1e-6, 1.0 - width - 1e-6)
}

/// Smallest `t_min` with a positive rate, bisected to 1e-5.
pub fn find_positive_threshold(approach: Approach, v: f64, eps: f64, delta_t: f64) -> Result<Threshold, ThresholdError> {
    let (lo, hi) = default_bracket(approach, delta_t);
    find_positive_threshold_in(approach, v, eps, delta_t, lo, hi, 1e-5)
}

pub fn find_positive_threshold_in(
    approach: Approach,
    v: f64,
    eps: f64,
    delta_t: f64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<Threshold, ThresholdError> {
    if !(lo < hi && lo >= 0.0 && tol > 0.0) {
        return Err(ThresholdError::Bracket { lo, hi });
    }
    let width = if approach == Approach::Fixed { 0.0 } else { delta_t };
    let rate = |t: f64| -> Result<f64, ThresholdError> { Ok(run_point(approach, v, eps, &FadingUniform::new(t, width)?)?.rate) };

    let grid: Vec<f64> = (0..SCAN_POINTS).map(|i| lo + (hi - lo) * i as f64 / (SCAN_POINTS - 1) as f64).collect();
    let rates = grid.iter().map(|&t| rate(t)).collect::<Result<Vec<f64>, _>>()?;
    if let Some(i) = (1..SCAN_POINTS).find(|&i| rates[i] < rates[i - 1] - 1e-12 * rates[i - 1].abs().max(1.0)) {
        return Err(ThresholdError::NonMonotone { t_min: grid[i] });
    }
    let Some(i) = (1..SCAN_POINTS).find(|&i| rates[i - 1] <= 0.0 && rates[i] > 0.0) else {
        let sign = if rates[0] > 0.0 { "positive" } else { "non-positive" };
        return Err(ThresholdError::NoSignChange { lo, hi, sign });
    };
    let (mut a, mut b) = (grid[i - 1], grid[i]);
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if rate(mid)? > 0.0 {
            b = mid;
        } else {
            a = mid;
        }
    }
    let t_min = 0.5 * (a + b);
    Ok(Threshold { t_min, attenuation_db: attenuation_db(t_min)? })
}
