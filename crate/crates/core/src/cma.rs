//! Key rate when the fading channel is treated as a classical mixture of
//! fixed sub-channels.
//!
//! Eve's bound comes from the covariance matrix averaged over the fading
//! distribution. That matrix depends on the distribution only through
//! `⟨√T⟩` and `⟨T⟩`, and has the same form as a fixed channel with
//! effective parameters `T_eff = ⟨√T⟩²` and
//! `ε_eff = ε(1 + Var(√T)/T_eff) + Var(√T)/T_eff · V_A`. Alice and Bob are
//! credited with the ergodic mutual information `⟨I_AB⟩`.
//!
//! `ε_eff` grows linearly with `V`, so an [`EffectiveChannel`] is only
//! valid for the variance it was built with.

use std::f64::consts::LOG2_E;

use crate::channel::{
    check_variance, entries, invariants, lambda3_from, pair_from_entries, SkrBreakdown,
    SymplecticSpectrum, TwoModeCovariance,
};
use crate::error::{Error, Result};
use crate::fading::FadingUniform;
use crate::num::{gauss_legendre_8_mean, maximize_scalar};

/// Moments of the transmittance distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmittanceMoments {
    /// `⟨√T⟩`
    pub mean_sqrt_t: f64,
    /// `⟨T⟩`
    pub mean_t: f64,
    /// `Var(√T) = ⟨T⟩ − ⟨√T⟩²`
    pub var_sqrt_t: f64,
}

/// Closed-form moments of the uniform distribution.
///
/// With `a = √t_max`, `b = √t_min`:
/// `⟨√T⟩ = ⅔(a² + ab + b²)/(a + b)` and
/// `Var(√T) = (a − b)²(a² + 4ab + b²) / (18(a + b)²)`,
/// which avoid the cancellation of the textbook expressions for narrow
/// intervals.
pub fn moments_uniform(f: &FadingUniform) -> TransmittanceMoments {
    if f.is_degenerate() {
        return TransmittanceMoments { mean_sqrt_t: f.t_min().sqrt(), mean_t: f.t_min(), var_sqrt_t: 0.0 };
    }
    let a = f.t_max().sqrt();
    let b = f.t_min().sqrt();
    let s = a + b;
    let d = f.delta_t() / s; // a − b
    TransmittanceMoments {
        mean_sqrt_t: 2.0 / 3.0 * (a * a + a * b + b * b) / s,
        mean_t: f.t_mean(),
        var_sqrt_t: d * d * (a * a + 4.0 * a * b + b * b) / (18.0 * s * s),
    }
}

/// Fixed-channel parameters reproducing the averaged covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveChannel {
    pub t_eff: f64,
    pub eps_eff: f64,
    pub chi_eff: f64,
    /// Slope of `chi_eff` in `V`.
    pub a_coef: f64,
    /// Intercept of `chi_eff` in `V`.
    pub b_coef: f64,
}

pub fn effective_params(m: &TransmittanceMoments, eps: f64, v: f64) -> Result<EffectiveChannel> {
    check_variance(v)?;
    if !(eps >= 0.0) {
        return Err(Error::domain(format!("excess noise must be >= 0, got {eps}")));
    }
    if !(m.mean_sqrt_t > 0.0) {
        return Err(Error::domain("effective transmittance is zero"));
    }
    let t_eff = m.mean_sqrt_t * m.mean_sqrt_t;
    let r = m.var_sqrt_t / t_eff;
    let eps_eff = eps * (1.0 + r) + r * (v - 1.0);
    Ok(EffectiveChannel {
        t_eff,
        eps_eff,
        chi_eff: 1.0 / t_eff - 1.0 + eps_eff,
        a_coef: r,
        b_coef: (1.0 - m.mean_t * (1.0 - eps)) / t_eff,
    })
}

/// `⟨χ⟩ = 1/⟨T⟩ − 1 + ε`, the average noise in the display form of the
/// averaged matrix.
pub fn mean_chi(m: &TransmittanceMoments, eps: f64) -> f64 {
    1.0 / m.mean_t - 1.0 + eps
}

/// Covariance matrix averaged over the fading distribution:
/// `a = V`, `c = ⟨√T⟩·√(V² − 1)`, `b = ⟨T⟩(V_A + ε) + 1`.
pub fn avg_covariance(m: &TransmittanceMoments, v: f64, eps: f64) -> Result<TwoModeCovariance> {
    check_variance(v)?;
    TwoModeCovariance::new(v, m.mean_t * (v - 1.0 + eps) + 1.0, m.mean_sqrt_t * (v * v - 1.0).sqrt())
}

/// Below this width interval averages that have closed forms (ergodic
/// mutual information, large-variance Holevo bound) are integrated with a
/// fixed Gauss–Legendre rule instead.
pub const NARROW_WIDTH: f64 = 1e-3;

/// Ergodic mutual information `⟨½·log₂(1 + T·V_A/(1 + εT))⟩`.
///
/// For `ε > 0` this is the closed form
///
/// ```text
/// 1/(2ΔT)·[ (1/ε)·log₂((1+εT_min)/(1+εT_max))
///         + T_max·log₂((1+T_max(ε+V_A))/(1+εT_max))
///         + 1/(ε+V_A)·log₂((1+T_max(ε+V_A))/(1+T_min(ε+V_A)))
///         + T_min·log₂((1+εT_min)/(1+T_min(ε+V_A))) ]
/// ```
///
/// and at `ε = 0` the first term is replaced by its limit `−ΔT·log₂e`.
pub fn avg_mutual_information(v: f64, eps: f64, f: &FadingUniform) -> Result<f64> {
    check_variance(v)?;
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::domain(format!("excess noise must be >= 0, got {eps}")));
    }
    let va = v - 1.0;
    if va == 0.0 {
        return Ok(0.0);
    }
    let pointwise = |t: f64| 0.5 * (t * va / (1.0 + eps * t)).ln_1p() * LOG2_E;
    if f.is_degenerate() {
        return Ok(pointwise(f.t_min()));
    }
    let (t0, t1, dt) = (f.t_min(), f.t_max(), f.delta_t());
    if dt < NARROW_WIDTH {
        return Ok(gauss_legendre_8_mean(pointwise, t0, t1));
    }
    let k = eps + va;
    let noise_term = if eps > 0.0 {
        ((eps * t0).ln_1p() - (eps * t1).ln_1p()) / eps * LOG2_E
    } else {
        -dt * LOG2_E
    };
    let l2 = |x: f64| x.log2();
    Ok((noise_term
        + t1 * l2((1.0 + t1 * k) / (1.0 + eps * t1))
        + ((k * t1).ln_1p() - (k * t0).ln_1p()) / k * LOG2_E
        + t0 * l2((1.0 + eps * t0) / (1.0 + t0 * k)))
        / (2.0 * dt))
}

/// Symplectic spectrum of the averaged state, via the effective channel.
pub fn cma_spectrum(v: f64, eps: f64, f: &FadingUniform) -> Result<SymplecticSpectrum> {
    let eff = effective_params(&moments_uniform(f), eps, v)?;
    let (d, s) = entries(v, eff.t_eff, eff.chi_eff);
    let (lambda1, lambda2) = pair_from_entries(d, s)?;
    Ok(SymplecticSpectrum { lambda1, lambda2, lambda3: lambda3_from(v, eff.chi_eff) })
}

/// Holevo bound computed from the averaged covariance matrix.
pub fn holevo_cma(v: f64, eps: f64, f: &FadingUniform) -> Result<f64> {
    cma_spectrum(v, eps, f)?.holevo()
}

/// `⟨I_AB⟩ − χ_BE(⟨γ⟩)`.
pub fn skr_cma(v: f64, eps: f64, f: &FadingUniform) -> Result<SkrBreakdown> {
    Ok(SkrBreakdown::new(avg_mutual_information(v, eps, f)?, holevo_cma(v, eps, f)?))
}

/// Default search range for [`optimal_variance`].
pub const V_SEARCH_RANGE: (f64, f64) = (1.0 + 1e-6, 1e4);

/// Modulation variance maximizing [`skr_cma`] on `[v_lo, v_hi]`, with its
/// rate. A non-positive optimum is returned as is; it means no key can be
/// extracted at any variance in range.
pub fn optimal_variance(eps: f64, f: &FadingUniform, v_lo: f64, v_hi: f64) -> Result<(f64, f64)> {
    if !(v_lo >= 1.0 && v_lo < v_hi) {
        return Err(Error::domain(format!("variance range needs 1 <= v_lo < v_hi, got [{v_lo}, {v_hi}]")));
    }
    let failure = std::cell::RefCell::new(None);
    let objective = |v: f64| match skr_cma(v, eps, f) {
        Ok(r) => r.rate,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let best = maximize_scalar(objective, v_lo, v_hi, 1e-3 * v_lo);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    best
}

/// Leading-order behaviour of the averaged spectrum at large `V`.
///
/// `B = T_eff²(Vχ_eff + 1)²` grows like `V⁴` once `Var(√T) > 0`, since
/// `χ_eff = aV + b` is itself linear in `V`; `λ̃₃` grows like `V`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CmaScaling {
    /// `A₀ = T_eff(1 + a + b/V)`
    pub a0: f64,
    /// `B₀ = T_eff(a + b/V + 1/V²)`
    pub b0: f64,
    /// `B/V⁴` evaluated from the exact invariant.
    pub b_over_v4: f64,
    /// `lim B/V⁴ = (T_eff·a)²`
    pub b_over_v4_limit: f64,
    /// `λ̃₃/V` from the exact conditional eigenvalue.
    pub lambda3_over_v: f64,
    /// `lim λ̃₃/V = sqrt(B₀/A₀)|_{V→∞} = sqrt(a/(1 + a))`
    pub lambda3_over_v_limit: f64,
}

/// Scaling factors of the averaged spectrum. `eff` must have been built at
/// this `v`.
pub fn cma_scaling(v: f64, eff: &EffectiveChannel) -> Result<CmaScaling> {
    check_variance(v)?;
    let split = eff.a_coef * v + eff.b_coef;
    if (split - eff.chi_eff).abs() > 1e-9 * eff.chi_eff.abs().max(1.0) {
        return Err(Error::domain(format!(
            "effective channel was built for a different variance (a·V + b = {split}, chi_eff = {})",
            eff.chi_eff
        )));
    }
    let t = eff.t_eff;
    let (a, b) = (eff.a_coef, eff.b_coef);
    let (_, big_b) = invariants(v, t, eff.chi_eff);
    Ok(CmaScaling {
        a0: t * (1.0 + a + b / v),
        b0: t * (a + b / v + 1.0 / (v * v)),
        b_over_v4: big_b / v.powi(4),
        b_over_v4_limit: (t * a).powi(2),
        lambda3_over_v: lambda3_from(v, eff.chi_eff) / v,
        lambda3_over_v_limit: (a / (1.0 + a)).sqrt(),
    })
}

/// Off-diagonal and Bob-diagonal entries `(c, b)` of the fixed-channel
/// covariance at transmittance `t`.
pub(crate) fn subchannel_covariance_entries(v: f64, t: f64, eps: f64) -> (f64, f64) {
    (t.sqrt() * (v * v - 1.0).sqrt(), t * (v - 1.0 + eps) + 1.0)
}
