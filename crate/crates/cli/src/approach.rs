use std::fmt;
use std::str::FromStr;

use fading_cvqkd::channel::{skr_fixed, ChannelParams};
use fading_cvqkd::{cma, hba, Error, FadingUniform, Result, SkrBreakdown};
use serde::Deserialize;

/// Security model used to evaluate a grid point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Approach {
    Fixed,
    HbaExact,
    HbaAsymptotic,
    Cma,
}

impl Approach {
    pub const ALL: [Approach; 4] = [Approach::Fixed, Approach::HbaExact, Approach::HbaAsymptotic, Approach::Cma];

    pub fn name(self) -> &'static str {
        match self {
            Approach::Fixed => "fixed",
            Approach::HbaExact => "hba_exact",
            Approach::HbaAsymptotic => "hba_asymptotic",
            Approach::Cma => "cma",
        }
    }
}

impl fmt::Display for Approach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Approach {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Approach::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown approach `{s}` (expected fixed, hba_exact, hba_asymptotic or cma)"))
    }
}

/// Evaluates one approach at one grid point. The fixed channel uses `f.t_min()`.
pub fn run_point(approach: Approach, v: f64, eps: f64, f: &FadingUniform) -> Result<SkrBreakdown> {
    match approach {
        Approach::Fixed => skr_fixed(&ChannelParams::new(v, f.t_min(), eps)?),
        Approach::HbaExact => hba::skr_hba_exact(v, eps, f),
        Approach::HbaAsymptotic => hba::skr_hba_asymptotic(v, eps, f),
        Approach::Cma => cma::skr_cma(v, eps, f),
    }
}

/// Channel loss in dB, `-10 log10(T)`.
pub fn attenuation_db(t: f64) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::Domain(format!("attenuation needs 0 < T <= 1, got {t}")));
    }
    Ok(-10.0 * t.log10())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for a in Approach::ALL {
            assert_eq!(a.name().parse::<Approach>().unwrap(), a);
        }
        assert!("hba".parse::<Approach>().is_err());
    }

    #[test]
    fn attenuation_values() {
        assert_eq!(attenuation_db(1.0).unwrap(), 0.0);
        assert!((attenuation_db(0.1).unwrap() - 10.0).abs() < 1e-14);
        assert!((attenuation_db(0.251188643).unwrap() - 6.0).abs() < 1e-8);
        assert!(attenuation_db(0.0).is_err());
        assert!(attenuation_db(-0.5).is_err());
        assert!(attenuation_db(1.5).is_err());
    }

    #[test]
    fn lossless_fixed_point() {
        let f = FadingUniform::new(1.0, 0.0).unwrap();
        let r = run_point(Approach::Fixed, 10.0, 0.0, &f).unwrap();
        assert!((r.rate - 0.5 * 10f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn degenerate_hba_and_cma_agree() {
        let f = FadingUniform::new(0.35, 0.0).unwrap();
        let h = run_point(Approach::HbaExact, 10.0, 0.01, &f).unwrap().rate;
        let c = run_point(Approach::Cma, 10.0, 0.01, &f).unwrap().rate;
        assert!((h - c).abs() < 1e-9);
    }
}
