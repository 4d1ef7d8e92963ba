use std::f64::consts::PI;

use crate::error::{Error, Result};

const PI2_6: f64 = PI * PI / 6.0;

/// Real dilogarithm `Li₂(z) = −∫₀^z ln(1−t)/t dt` for `z ≤ 1`.
///
/// The power series is summed only on `|z| ≤ 1/2`; every other argument is
/// mapped there first:
///
/// * `1/2 < z < 1`: reflection `Li₂(z) = π²/6 − ln z·ln(1−z) − Li₂(1−z)`
/// * `−1 ≤ z < −1/2`: Landen `Li₂(z) = −Li₂(z/(z−1)) − ½ln²(1−z)`
/// * `z < −1`: inversion `Li₂(z) = −π²/6 − ½ln²(−z) − Li₂(1/z)`
pub fn dilog(z: f64) -> Result<f64> {
    if !z.is_finite() || z > 1.0 {
        return Err(Error::domain(format!("dilog requires finite z <= 1, got {z}")));
    }
    Ok(dilog_unchecked(z))
}

fn dilog_unchecked(z: f64) -> f64 {
    if z == 1.0 {
        PI2_6
    } else if z < -1.0 {
        let l = (-z).ln();
        -PI2_6 - 0.5 * l * l - dilog_unchecked(1.0 / z)
    } else if z < -0.5 {
        let l = (-z).ln_1p();
        -series(z / (z - 1.0)) - 0.5 * l * l
    } else if z <= 0.5 {
        series(z)
    } else {
        PI2_6 - z.ln() * (-z).ln_1p() - series(1.0 - z)
    }
}

/// `Σ zᵏ/k²`, for `|z| ≤ 1/2`.
fn series(z: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = z;
    for k in 1..=80 {
        let kf = k as f64;
        let term = pow / (kf * kf);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
        pow *= z;
    }
    sum
}
