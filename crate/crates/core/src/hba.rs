//! Key rate when Eve's Holevo bound is averaged over the fading
//! distribution while Alice and Bob code at the rate of the worst channel,
//! `t_min`.
//!
//! Two routes are provided:
//!
//! * [`skr_hba_exact`] integrates the exact Holevo bound numerically and is
//!   valid for any `V ≥ 1`.
//! * [`skr_hba_asymptotic`] uses the `V ≫ 1` expansion of the symplectic
//!   spectrum, whose average over a uniform distribution has a closed form
//!   in elementary functions and dilogarithms. In this regime the rate does
//!   not depend on `V`.

use std::cell::RefCell;
use std::f64::consts::{LN_2, LOG2_E};

use crate::channel::{
    self, check_variance, derive_omega, ChannelParams, SkrBreakdown, SymplecticSpectrum,
};
use crate::cma::NARROW_WIDTH;
use crate::error::{Error, Result};
use crate::fading::FadingUniform;
use crate::num::{dilog, g_entropy, gauss_legendre_8_mean, integrate, QuadratureSpec};

/// Exact worst-case-code rate: `I_AB(t_min) − ⟨χ_BE⟩`, with the Holevo
/// bound averaged by adaptive quadrature.
pub fn skr_hba_exact(v: f64, eps: f64, f: &FadingUniform) -> Result<SkrBreakdown> {
    skr_hba_exact_with(v, eps, f, &QuadratureSpec::default())
}

pub fn skr_hba_exact_with(
    v: f64,
    eps: f64,
    f: &FadingUniform,
    spec: &QuadratureSpec,
) -> Result<SkrBreakdown> {
    f.require_positive_t_min()?;
    let worst = ChannelParams::new(v, f.t_min(), eps)?;
    let mutual_info = channel::mutual_information_fixed(&worst);
    let holevo = if f.is_degenerate() {
        channel::holevo_fixed(&worst)?
    } else {
        average_holevo_exact(v, eps, f, spec)?
    };
    Ok(SkrBreakdown::new(mutual_info, holevo))
}

/// Mean of the exact Holevo bound, integrated in `s = (T − t_min)/ΔT` so the
/// tolerances apply to the average rather than to an integral of size ΔT.
fn average_holevo_exact(v: f64, eps: f64, f: &FadingUniform, spec: &QuadratureSpec) -> Result<f64> {
    let failure = RefCell::new(None);
    let (t_min, dt) = (f.t_min(), f.delta_t());
    let integrand = |s: f64| {
        let t = (t_min + s * dt).min(f.t_max());
        match ChannelParams::new(v, t, eps).and_then(|p| channel::holevo_fixed(&p)) {
            Ok(h) => h,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let result = integrate(integrand, 0.0, 1.0, spec);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    result
}

/// Large-variance symplectic spectrum: `λ₁ ≈ V(1−T)`, `λ₂ ≈ ω`,
/// `λ₃ ≈ sqrt((1−T)ωV/T)`.
pub fn asymptotic_eigenvalues(t: f64, eps: f64, v: f64) -> Result<SymplecticSpectrum> {
    let omega = derive_omega(t, eps)?;
    Ok(SymplecticSpectrum {
        lambda1: v * (1.0 - t),
        lambda2: omega,
        lambda3: ((1.0 - t) * omega * v / t).sqrt(),
    })
}

/// Large-variance Holevo bound `½·log₂(T(1−T)V/ω) + G((ω−1)/2)`.
///
/// Only meaningful when `T(1−T)V/ω ≫ 1`; smaller arguments are not
/// rejected.
pub fn holevo_asymptotic(t: f64, eps: f64, v: f64) -> Result<f64> {
    let omega = derive_omega(t, eps)?;
    Ok(0.5 * (t * (1.0 - t) * v / omega).log2() + g_entropy(0.5 * (omega - 1.0))?)
}

/// Large-variance mutual information `½·log₂(T/(T + (1−T)ω)) + ½·log₂V`.
pub fn mutual_info_asymptotic(t: f64, eps: f64, v: f64) -> Result<f64> {
    ChannelParams::new(v, t, eps)?;
    // (1 − T)ω = 1 − T + Tε stays finite at T = 1.
    let thermal = 1.0 - t + t * eps;
    Ok(0.5 * (t / (t + thermal)).log2() + 0.5 * v.log2())
}

fn check_analytic_eps(eps: f64) -> Result<()> {
    if eps >= 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("closed-form averages need 0 <= eps < 1, got eps = {eps}")))
    }
}

/// Antiderivative of `G((ω(T) − 1)/2)` in `T`.
fn h_antiderivative(t: f64, eps: f64) -> Result<f64> {
    let tb = 1.0 - t;
    let u = 2.0 * tb + eps * t;
    let k = (eps - 1.0) / (eps - 2.0);
    let dilogs = dilog(tb)? - dilog((eps - 2.0) * tb / eps)?;
    Ok(0.5
        * (2.0 * tb.log2() - 2.0 * k * t.log2()
            + 2.0 / (eps - 2.0) * u.log2()
            + t * (eps * t * u / (4.0 * tb * tb)).log2()
            - k * u * (u / (eps * t)).log2()
            - eps / LN_2 * dilogs))
}

/// Average of `G((ω−1)/2)` over the fading interval, in closed form.
///
/// Requires `eps > 0`; as `eps → 0` the average vanishes and callers should
/// use zero directly.
pub fn htilde(eps: f64, f: &FadingUniform) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::domain(format!(
            "htilde requires eps > 0 (its eps -> 0 limit is 0), got eps = {eps}"
        )));
    }
    check_analytic_eps(eps)?;
    f.require_positive_t_min()?;
    f.require_open_top()?;
    if f.is_degenerate() {
        return Err(Error::domain("htilde needs a fading interval of positive width"));
    }
    if f.delta_t() < NARROW_WIDTH {
        let mut failure = None;
        let mean = gauss_legendre_8_mean(
            |t| match derive_omega(t, eps).and_then(|w| g_entropy(0.5 * (w - 1.0))) {
                Ok(h) => h,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            },
            f.t_min(),
            f.t_max(),
        );
        return failure.map_or(Ok(mean), Err);
    }
    Ok((h_antiderivative(f.t_max(), eps)? - h_antiderivative(f.t_min(), eps)?) / f.delta_t())
}

/// Closed-form average of [`holevo_asymptotic`] over the fading interval.
///
/// With `X(T) = T(1−T)/ω(T)`:
///
/// ```text
/// ⟨χ⟩ = t_min/(2ΔT)·log₂(X_max/X_min)
///     + 1/(2ΔT(1−ε))·log₂((1−T_max)ω_max / ((1−T_min)ω_min))
///     + ½·log₂X_max − (1/ΔT)·log₂((1−T_max)/(1−T_min))
///     − log₂e + ½·log₂V + h̃
/// ```
///
/// `eps = 0` uses the limit `h̃ = 0`. A zero-width interval falls back to
/// the pointwise value; intervals narrower than [`NARROW_WIDTH`] are
/// averaged by 8-point Gauss–Legendre, where the `1/ΔT` differences above
/// would cancel.
pub fn avg_holevo_analytic(v: f64, eps: f64, f: &FadingUniform) -> Result<f64> {
    check_variance(v)?;
    check_analytic_eps(eps)?;
    f.require_positive_t_min()?;
    f.require_open_top()?;
    if f.is_degenerate() {
        return holevo_asymptotic(f.t_min(), eps, v);
    }
    if f.delta_t() < NARROW_WIDTH {
        let mut failure = None;
        let mean = gauss_legendre_8_mean(
            |t| match holevo_asymptotic(t, eps, v) {
                Ok(h) => h,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            },
            f.t_min(),
            f.t_max(),
        );
        return failure.map_or(Ok(mean), Err);
    }
    let (t0, t1, dt) = (f.t_min(), f.t_max(), f.delta_t());
    let (w0, w1) = (derive_omega(t0, eps)?, derive_omega(t1, eps)?);
    let x0 = t0 * (1.0 - t0) / w0;
    let x1 = t1 * (1.0 - t1) / w1;
    let h = if eps > 0.0 { htilde(eps, f)? } else { 0.0 };
    Ok(t0 / (2.0 * dt) * (x1 / x0).log2()
        + ((1.0 - t1) * w1 / ((1.0 - t0) * w0)).log2() / (2.0 * dt * (1.0 - eps))
        + 0.5 * x1.log2()
        - ((1.0 - t1) / (1.0 - t0)).log2() / dt
        - LOG2_E
        + 0.5 * v.log2()
        + h)
}

/// Mutual-information model used for the worst-case code in
/// [`skr_hba_asymptotic_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WorstCaseMutualInfo {
    /// Large-variance form; makes the rate exactly independent of `V`.
    #[default]
    LargeVariance,
    /// Exact fixed-channel mutual information at `t_min`.
    Exact,
}

/// Large-variance rate: large-variance `I_AB(t_min)` minus the closed-form
/// averaged Holevo bound. Independent of `V`.
pub fn skr_hba_asymptotic(v: f64, eps: f64, f: &FadingUniform) -> Result<SkrBreakdown> {
    skr_hba_asymptotic_with(v, eps, f, WorstCaseMutualInfo::LargeVariance)
}

pub fn skr_hba_asymptotic_with(
    v: f64,
    eps: f64,
    f: &FadingUniform,
    mi: WorstCaseMutualInfo,
) -> Result<SkrBreakdown> {
    let holevo = avg_holevo_analytic(v, eps, f)?;
    let mutual_info = match mi {
        WorstCaseMutualInfo::LargeVariance => mutual_info_asymptotic(f.t_min(), eps, v)?,
        WorstCaseMutualInfo::Exact => {
            channel::mutual_information_fixed(&ChannelParams::new(v, f.t_min(), eps)?)
        }
    };
    Ok(SkrBreakdown::new(mutual_info, holevo))
}
