//! Asymptotic secret key rates of Gaussian-modulated coherent-state CV-QKD
//! (homodyne detection, reverse reconciliation, collective attacks) over a
//! fast-fading channel whose transmittance is uniformly distributed.
//!
//! Two ways of averaging over the fading are implemented:
//!
//! * [`hba`]: Eve's Holevo bound is averaged over the transmittance while
//!   Alice and Bob code at the rate of the worst channel.
//! * [`cma`]: the channel is a mixture of fixed sub-channels; Eve's bound is
//!   computed from the averaged covariance matrix and Alice and Bob get the
//!   ergodic mutual information.
//!
//! All quantities are in shot-noise units and bits per channel use.
//!
//! ```
//! use fading_cvqkd::{cma, hba, FadingUniform};
//!
//! let fading = FadingUniform::new(0.4, 0.2)?;
//! let worst_case = hba::skr_hba_exact(10.0, 0.005, &fading)?;
//! let mixture = cma::skr_cma(10.0, 0.005, &fading)?;
//! assert!(worst_case.rate > 0.0 && mixture.rate > worst_case.rate);
//! # Ok::<(), fading_cvqkd::Error>(())
//! ```

pub mod channel;
pub mod cma;
mod error;
mod fading;
pub mod hba;
pub mod montecarlo;
pub mod num;

pub use channel::{ChannelParams, SkrBreakdown, SymplecticSpectrum, TwoModeCovariance};
pub use error::{Error, Result};
pub use fading::FadingUniform;

// The guide's and README's code listings are compiled and run as doc-tests.
#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fixed-channel.md")]
    mod fixed_channel {}
    #[doc = include_str!("../../../book/src/numerics.md")]
    mod numerics {}
    #[doc = include_str!("../../../book/src/holevo-average.md")]
    mod holevo_average {}
    #[doc = include_str!("../../../book/src/covariance-average.md")]
    mod covariance_average {}
    #[doc = include_str!("../../../book/src/monte-carlo.md")]
    mod monte_carlo {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
