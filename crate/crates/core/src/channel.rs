//! Fixed-transmittance Gaussian channel.
//!
//! Alice's two-mode squeezed vacuum of variance `V` is sent through a
//! channel of transmittance `T` with excess noise `ε` referred to the
//! channel input (all in shot-noise units). Bob homodynes, and the key is
//! distilled with reverse reconciliation. This module provides the
//! covariance matrix of the shared state, its symplectic spectrum, and
//! the resulting mutual information, Holevo bound and key rate.

use crate::error::{Error, Result};
use crate::num::g_of_eigenvalue;

/// Numerical slack on the `λ ≥ 1` physicality bounds.
pub const PHYSICALITY_SLACK: f64 = 1e-12;

/// `χ = 1/T − 1 + ε`, the channel noise referred to its input.
pub fn derive_chi(t: f64, eps: f64) -> Result<f64> {
    check_transmittance(t)?;
    check_eps(eps)?;
    Ok(1.0 / t - 1.0 + eps)
}

/// Equivalent thermal variance `ω = 1 + T·ε/(1 − T)`.
///
/// Diverges at `T = 1`, which is rejected.
pub fn derive_omega(t: f64, eps: f64) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::domain(format!("omega requires 0 < T < 1, got T = {t}")));
    }
    check_eps(eps)?;
    Ok(1.0 + t * eps / (1.0 - t))
}

fn check_transmittance(t: f64) -> Result<()> {
    if t > 0.0 && t <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("transmittance must satisfy 0 < T <= 1, got T = {t}")))
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps >= 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("excess noise must be finite and >= 0, got eps = {eps}")))
    }
}

pub(crate) fn check_variance(v: f64) -> Result<()> {
    if v >= 1.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("modulation variance must satisfy V >= 1, got V = {v}")))
    }
}

/// One operating point of the fixed channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    v: f64,
    t: f64,
    eps: f64,
}

impl ChannelParams {
    pub fn new(v: f64, t: f64, eps: f64) -> Result<Self> {
        check_variance(v)?;
        check_transmittance(t)?;
        check_eps(eps)?;
        Ok(ChannelParams { v, t, eps })
    }

    pub fn v(&self) -> f64 {
        self.v
    }
    pub fn t(&self) -> f64 {
        self.t
    }
    pub fn eps(&self) -> f64 {
        self.eps
    }
    /// Modulation variance `V_A = V − 1`.
    pub fn v_a(&self) -> f64 {
        self.v - 1.0
    }
    pub fn chi(&self) -> f64 {
        1.0 / self.t - 1.0 + self.eps
    }
    pub fn omega(&self) -> Result<f64> {
        derive_omega(self.t, self.eps)
    }

    /// Covariance matrix of the state shared by Alice and Bob.
    pub fn covariance(&self) -> TwoModeCovariance {
        TwoModeCovariance {
            a: self.v,
            b: self.t * (self.v + self.chi()),
            c: (self.t * (self.v * self.v - 1.0)).sqrt(),
        }
    }
}

/// Standard-form two-mode covariance matrix
/// `[[a·1, c·σ_z], [c·σ_z, b·1]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeCovariance {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl TwoModeCovariance {
    /// Builds the matrix and checks that it describes a physical state.
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a >= 1.0 - PHYSICALITY_SLACK && b >= 1.0 - PHYSICALITY_SLACK) || !c.is_finite() {
            return Err(Error::Unphysical(format!("diagonal blocks below vacuum: a = {a}, b = {b}")));
        }
        let m = TwoModeCovariance { a, b, c };
        let (_, nu_minus) = m.symplectic_eigenvalues()?;
        if nu_minus < 1.0 - PHYSICALITY_SLACK {
            return Err(Error::Unphysical(format!("smallest symplectic eigenvalue {nu_minus} < 1")));
        }
        Ok(m)
    }

    /// Row-major 4×4 matrix in the `(q_A, p_A, q_B, p_B)` ordering.
    pub fn to_matrix(&self) -> [[f64; 4]; 4] {
        let TwoModeCovariance { a, b, c } = *self;
        [[a, 0.0, c, 0.0], [0.0, a, 0.0, -c], [c, 0.0, b, 0.0], [0.0, -c, 0.0, b]]
    }

    /// Symplectic eigenvalues `(ν₊, ν₋)`, `ν₊ ≥ ν₋`, from the invariants
    /// `Δ = a² + b² − 2c²` and `det γ = (ab − c²)²`, evaluated through
    /// `a − b` and `ab − c²`.
    pub fn symplectic_eigenvalues(&self) -> Result<(f64, f64)> {
        let TwoModeCovariance { a, b, c } = *self;
        pair_from_entries(a - b, a * b - c * c)
    }

    /// Symplectic eigenvalue of Alice's mode conditioned on Bob's homodyne
    /// outcome: `sqrt(a·(a − c²/b))`.
    pub fn conditional_eigenvalue(&self) -> f64 {
        (self.a * (self.a - self.c * self.c / self.b)).sqrt()
    }
}

/// Symplectic spectrum entering the Holevo bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticSpectrum {
    pub lambda1: f64,
    pub lambda2: f64,
    /// Eigenvalue of the conditional (post-homodyne) state.
    pub lambda3: f64,
}

impl SymplecticSpectrum {
    /// `G((λ₁−1)/2) + G((λ₂−1)/2) − G((λ₃−1)/2)`.
    pub fn holevo(&self) -> Result<f64> {
        Ok(g_of_eigenvalue(self.lambda1)? + g_of_eigenvalue(self.lambda2)?
            - g_of_eigenvalue(self.lambda3)?)
    }
}

/// Mutual information, Holevo bound and their difference, in bits per
/// channel use. `rate` may be negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkrBreakdown {
    pub mutual_info: f64,
    pub holevo: f64,
    pub rate: f64,
}

impl SkrBreakdown {
    pub fn new(mutual_info: f64, holevo: f64) -> Self {
        SkrBreakdown { mutual_info, holevo, rate: mutual_info - holevo }
    }
}

/// `λ₁,₂ = sqrt(½(A ± sqrt(A² − 4B)))` with `A = d² + 2s`, `B = s²`,
/// `d = a − b`, `s = ab − c²`. In these variables `A² − 4B = d²(d² + 4s)`,
/// so `λ₁ = ½(sqrt(d² + 4s) + |d|)` and `λ₂ = s/λ₁` are free of cancellation
/// both when `λ₁ ≫ λ₂` and when the two meet.
pub(crate) fn pair_from_entries(d: f64, s: f64) -> Result<(f64, f64)> {
    if !(s >= 0.0) || !d.is_finite() || !s.is_finite() {
        return Err(Error::Unphysical(format!("ab − c² = {s:e} must be non-negative (a − b = {d})")));
    }
    let l1 = 0.5 * ((d * d + 4.0 * s).sqrt() + d.abs());
    let l2 = if l1 > 0.0 { s / l1 } else { 0.0 };
    Ok((l1, l2))
}

/// `(a − b, ab − c²)` for a channel written as `(V, T, χ)`.
pub(crate) fn entries(v: f64, t: f64, chi: f64) -> (f64, f64) {
    (v - t * (v + chi), t * (v * chi + 1.0))
}

/// `(A, B)` for a channel written as `(V, T, χ)`.
pub(crate) fn invariants(v: f64, t: f64, chi: f64) -> (f64, f64) {
    let a = t * t * (v + chi).powi(2) + (1.0 - 2.0 * t) * v * v + 2.0 * t;
    let b = (t * (v * chi + 1.0)).powi(2);
    (a, b)
}

/// `sqrt(V(1 + Vχ)/(V + χ))`.
pub(crate) fn lambda3_from(v: f64, chi: f64) -> f64 {
    (v * (1.0 + v * chi) / (v + chi)).sqrt()
}

pub(crate) fn spectrum_from(v: f64, t: f64, chi: f64) -> Result<SymplecticSpectrum> {
    let (d, s) = entries(v, t, chi);
    let (lambda1, lambda2) = pair_from_entries(d, s)?;
    Ok(SymplecticSpectrum { lambda1, lambda2, lambda3: lambda3_from(v, chi) })
}

/// `I_AB = ½·log₂((V + χ)/(1 + χ))`.
pub fn mutual_information_fixed(p: &ChannelParams) -> f64 {
    // Written as ½·log₂(1 + T·V_A/(1 + εT)) for accuracy near V = 1.
    let t = p.t();
    0.5 * (t * p.v_a() / (1.0 + p.eps() * t)).ln_1p() / std::f64::consts::LN_2
}

/// Symplectic eigenvalues `(λ₁, λ₂)` of the joint state, `λ₁ ≥ λ₂`.
pub fn symplectic_pair(p: &ChannelParams) -> Result<(f64, f64)> {
    let (d, s) = entries(p.v(), p.t(), p.chi());
    pair_from_entries(d, s)
}

/// Symplectic eigenvalue `λ₃` of Alice's state after Bob's homodyne.
pub fn conditional_eigenvalue(p: &ChannelParams) -> f64 {
    lambda3_from(p.v(), p.chi())
}

pub fn spectrum(p: &ChannelParams) -> Result<SymplecticSpectrum> {
    spectrum_from(p.v(), p.t(), p.chi())
}

/// Holevo bound on Eve's information (reverse reconciliation, homodyne).
pub fn holevo_fixed(p: &ChannelParams) -> Result<f64> {
    spectrum(p)?.holevo()
}

pub fn skr_fixed(p: &ChannelParams) -> Result<SkrBreakdown> {
    Ok(SkrBreakdown::new(mutual_information_fixed(p), holevo_fixed(p)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: f64, t: f64, eps: f64) -> ChannelParams {
        ChannelParams::new(v, t, eps).unwrap()
    }

    #[test]
    fn chi_and_omega() {
        assert_eq!(derive_chi(1.0, 0.0).unwrap(), 0.0);
        assert_eq!(derive_chi(0.5, 0.0).unwrap(), 1.0);
        assert!((derive_chi(0.5, 0.05).unwrap() - 1.05).abs() < 1e-15);
        assert_eq!(derive_omega(0.5, 0.0).unwrap(), 1.0);
        assert!((derive_omega(0.5, 0.03).unwrap() - 1.03).abs() < 1e-15);
        assert!((derive_omega(0.9, 0.03).unwrap() - 1.27).abs() < 1e-14);
        assert!(derive_omega(1.0, 0.01).is_err());
        assert!(derive_chi(0.0, 0.0).is_err());
        assert!(derive_chi(1.2, 0.0).is_err());
        // χ = (1 − T)ω/T
        let (t, e) = (0.37, 0.021);
        let lhs = derive_chi(t, e).unwrap();
        let rhs = (1.0 - t) * derive_omega(t, e).unwrap() / t;
        assert!((lhs - rhs).abs() < 1e-14);
    }

    #[test]
    fn params_validation() {
        assert!(ChannelParams::new(0.99, 0.5, 0.0).is_err());
        assert!(ChannelParams::new(10.0, 0.0, 0.0).is_err());
        assert!(ChannelParams::new(10.0, 0.5, -0.1).is_err());
        assert!(ChannelParams::new(10.0, 1.0, 0.0).is_ok());
    }

    #[test]
    fn mutual_information_examples() {
        assert_eq!(mutual_information_fixed(&p(1.0, 0.3, 0.02)), 0.0);
        assert!((mutual_information_fixed(&p(10.0, 1.0, 0.0)) - 1.660_964_047_443_681_2).abs() < 1e-14);
        assert!((mutual_information_fixed(&p(10.0, 0.5, 0.0)) - 1.229_715_809_318_648_6).abs() < 1e-14);
    }

    #[test]
    fn mutual_information_matches_snr_form() {
        for &(v, t, e) in &[(2.0, 0.1, 0.0), (10.0, 0.5, 0.03), (1e3, 0.9, 0.1), (1e4, 0.01, 0.05)] {
            let q = p(v, t, e);
            let direct = 0.5 * ((v + q.chi()) / (1.0 + q.chi())).log2();
            assert!((mutual_information_fixed(&q) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn pure_state_at_unit_transmittance() {
        let q = p(10.0, 1.0, 0.0);
        let (l1, l2) = symplectic_pair(&q).unwrap();
        assert!((l1 - 1.0).abs() < 1e-12 && (l2 - 1.0).abs() < 1e-12);
        assert!((conditional_eigenvalue(&q) - 1.0).abs() < 1e-12);
        assert!(holevo_fixed(&q).unwrap().abs() < 1e-12);
        let r = skr_fixed(&q).unwrap();
        assert!((r.rate - 1.660_964_047_443_681_2).abs() < 1e-12);
    }

    // Eigenvalues from an mpmath eigen-decomposition of Ωγ (40 digits).
    #[test]
    fn spectrum_reference_points() {
        let (l1, l2) = symplectic_pair(&p(10.0, 0.5, 0.0)).unwrap();
        assert!((l1 - 5.5).abs() < 1e-12 && (l2 - 1.0).abs() < 1e-12);
        assert!((conditional_eigenvalue(&p(10.0, 0.5, 0.0)) - 10f64.sqrt()).abs() < 1e-13);
        let (m1, m2) = symplectic_pair(&p(10.0, 0.5, 0.03)).unwrap();
        assert!((m1 - 5.510_344_281_785_777).abs() < 1e-12);
        assert!((m2 - 1.025_344_281_785_777).abs() < 1e-12);
        assert!(m1 > l1 && m2 > l2);
        assert!((conditional_eigenvalue(&p(10.0, 0.5, 0.03)) - 3.200_747_872_716_044_3).abs() < 1e-12);
        assert_eq!(conditional_eigenvalue(&p(1.0, 0.4, 0.07)), 1.0);
    }

    #[test]
    fn holevo_and_rate_reference_points() {
        let r0 = skr_fixed(&p(10.0, 0.5, 0.0)).unwrap();
        assert!((r0.holevo - 0.815_241_502_021_104_97).abs() < 1e-12);
        assert!((r0.rate - 0.414_474_307_297_543_66).abs() < 1e-12);
        let r3 = skr_fixed(&p(10.0, 0.5, 0.03)).unwrap();
        assert!((r3.holevo - 0.898_186_282_756_561_6).abs() < 1e-12);
        assert!((r3.rate - 0.322_754_296_446_541_56).abs() < 1e-12);
        assert_eq!(r3.rate, r3.mutual_info - r3.holevo);
        let r1 = skr_fixed(&p(1.0, 0.5, 0.0)).unwrap();
        assert_eq!(r1.mutual_info, 0.0);
        assert!(r1.rate <= 0.0);
    }

    #[test]
    fn covariance_routes_agree() {
        let q = p(37.0, 0.23, 0.04);
        let cov = q.covariance();
        let (n1, n2) = cov.symplectic_eigenvalues().unwrap();
        let (l1, l2) = symplectic_pair(&q).unwrap();
        assert!((n1 - l1).abs() < 1e-10 * l1 && (n2 - l2).abs() < 1e-10 * l2);
        assert!((cov.conditional_eigenvalue() - conditional_eigenvalue(&q)).abs() < 1e-12);
        assert!(TwoModeCovariance::new(cov.a, cov.b, cov.c).is_ok());
    }

    #[test]
    fn unphysical_covariance_rejected() {
        // Correlations stronger than the TMSV allows.
        assert!(TwoModeCovariance::new(2.0, 2.0, 1.9).is_err());
        assert!(TwoModeCovariance::new(0.5, 2.0, 0.0).is_err());
    }
}
