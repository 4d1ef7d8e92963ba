//! Sampling check of the mixture model: draw transmittances, average the
//! per-draw covariance matrices, and compare with the closed forms.
//!
//! Random numbers come from ChaCha20 (`rand_chacha` 0.3). The 64-bit seed
//! is written little-endian into the first 8 bytes of the 32-byte key
//! (the rest is zero). Draws are produced in blocks of
//! [`BLOCK_LEN`] samples; block `k` uses ChaCha stream `k`, so any block
//! can be generated independently and the result does not depend on how
//! blocks are spread over threads. Each draw consumes one `u64`, mapped to
//! `[0, 1)` through its top 53 bits.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::channel::{check_variance, TwoModeCovariance};
use crate::cma::{subchannel_covariance_entries, TransmittanceMoments};
use crate::error::{Error, Result};
use crate::fading::FadingUniform;

/// Samples per independent ChaCha stream.
pub const BLOCK_LEN: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleConfig {
    pub n_samples: usize,
    pub seed: u64,
}

impl SampleConfig {
    pub fn new(n_samples: usize, seed: u64) -> Result<Self> {
        if n_samples == 0 {
            return Err(Error::domain("n_samples must be >= 1"));
        }
        Ok(SampleConfig { n_samples, seed })
    }

    fn blocks(&self) -> usize {
        self.n_samples.div_ceil(BLOCK_LEN)
    }

    fn block_len(&self, k: usize) -> usize {
        BLOCK_LEN.min(self.n_samples - k * BLOCK_LEN)
    }
}

fn block_rng(seed: u64, block: usize) -> ChaCha20Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    let mut rng = ChaCha20Rng::from_seed(key);
    rng.set_stream(block as u64);
    rng
}

fn unit_f64(rng: &mut ChaCha20Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn for_each_draw(f: &FadingUniform, cfg: &SampleConfig, block: usize, mut sink: impl FnMut(f64)) {
    let mut rng = block_rng(cfg.seed, block);
    for _ in 0..cfg.block_len(block) {
        let u = unit_f64(&mut rng);
        sink(f.t_min() + f.delta_t() * u);
    }
}

/// `n_samples` i.i.d. draws from the fading distribution.
pub fn sample_transmittance(f: &FadingUniform, cfg: &SampleConfig) -> Vec<f64> {
    let chunks: Vec<Vec<f64>> = (0..cfg.blocks())
        .into_par_iter()
        .map(|k| {
            let mut out = Vec::with_capacity(cfg.block_len(k));
            for_each_draw(f, cfg, k, |t| out.push(t));
            out
        })
        .collect();
    chunks.concat()
}

#[derive(Default, Clone, Copy)]
struct Sums {
    n: f64,
    sqrt_t: f64,
    sqrt_t2: f64,
    t: f64,
    t2: f64,
}

fn sums(f: &FadingUniform, cfg: &SampleConfig) -> Sums {
    let partial: Vec<Sums> = (0..cfg.blocks())
        .into_par_iter()
        .map(|k| {
            let mut s = Sums::default();
            for_each_draw(f, cfg, k, |t| {
                let r = t.sqrt();
                s.n += 1.0;
                s.sqrt_t += r;
                s.sqrt_t2 += r * r;
                s.t += t;
                s.t2 += t * t;
            });
            s
        })
        .collect();
    // Merge in block order so the result is independent of scheduling.
    partial.into_iter().fold(Sums::default(), |a, b| Sums {
        n: a.n + b.n,
        sqrt_t: a.sqrt_t + b.sqrt_t,
        sqrt_t2: a.sqrt_t2 + b.sqrt_t2,
        t: a.t + b.t,
        t2: a.t2 + b.t2,
    })
}

/// Sample means of `√T` and `T` with their standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleStats {
    pub n: usize,
    pub mean_sqrt_t: f64,
    pub se_sqrt_t: f64,
    pub mean_t: f64,
    pub se_t: f64,
}

pub fn sample_stats(f: &FadingUniform, cfg: &SampleConfig) -> SampleStats {
    if f.is_degenerate() {
        return SampleStats {
            n: cfg.n_samples,
            mean_sqrt_t: f.t_min().sqrt(),
            se_sqrt_t: 0.0,
            mean_t: f.t_min(),
            se_t: 0.0,
        };
    }
    let s = sums(f, cfg);
    let se = |sum: f64, sum2: f64| {
        if s.n < 2.0 {
            return 0.0;
        }
        let mean = sum / s.n;
        let var = ((sum2 - s.n * mean * mean) / (s.n - 1.0)).max(0.0);
        (var / s.n).sqrt()
    };
    SampleStats {
        n: cfg.n_samples,
        mean_sqrt_t: s.sqrt_t / s.n,
        se_sqrt_t: se(s.sqrt_t, s.sqrt_t2),
        mean_t: s.t / s.n,
        se_t: se(s.t, s.t2),
    }
}

/// Sample estimates of `⟨√T⟩`, `⟨T⟩` and `Var(√T)`.
pub fn empirical_moments(f: &FadingUniform, cfg: &SampleConfig) -> TransmittanceMoments {
    if f.is_degenerate() {
        return crate::cma::moments_uniform(f);
    }
    let s = sample_stats(f, cfg);
    TransmittanceMoments {
        mean_sqrt_t: s.mean_sqrt_t,
        mean_t: s.mean_t,
        var_sqrt_t: (s.mean_t - s.mean_sqrt_t * s.mean_sqrt_t).max(0.0),
    }
}

/// Averages the fixed-channel covariance matrix over sampled
/// transmittances.
pub fn empirical_avg_covariance(
    v: f64,
    eps: f64,
    f: &FadingUniform,
    cfg: &SampleConfig,
) -> Result<TwoModeCovariance> {
    check_variance(v)?;
    if !(eps >= 0.0) {
        return Err(Error::domain(format!("excess noise must be >= 0, got {eps}")));
    }
    let partial: Vec<(f64, f64)> = (0..cfg.blocks())
        .into_par_iter()
        .map(|k| {
            let (mut c, mut b) = (0.0, 0.0);
            for_each_draw(f, cfg, k, |t| {
                let (ci, bi) = subchannel_covariance_entries(v, t, eps);
                c += ci;
                b += bi;
            });
            (c, b)
        })
        .collect();
    let (c, b) = partial.into_iter().fold((0.0, 0.0), |acc, x| (acc.0 + x.0, acc.1 + x.1));
    let n = cfg.n_samples as f64;
    TwoModeCovariance::new(v, b / n, c / n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_distribution() {
        let f = FadingUniform::new(0.3, 0.0).unwrap();
        let cfg = SampleConfig::new(5, 1).unwrap();
        assert_eq!(sample_transmittance(&f, &cfg), vec![0.3; 5]);
        let m = empirical_moments(&f, &cfg);
        assert_eq!(m.mean_t, 0.3);
        assert_eq!(m.var_sqrt_t, 0.0);
    }

    #[test]
    fn deterministic_and_block_split_consistent() {
        let f = FadingUniform::new(0.2, 0.5).unwrap();
        let cfg = SampleConfig::new(BLOCK_LEN * 2 + 17, 99).unwrap();
        let a = sample_transmittance(&f, &cfg);
        let b = sample_transmittance(&f, &cfg);
        assert_eq!(a, b);
        assert_eq!(a.len(), cfg.n_samples);
        assert!(a.iter().all(|&t| (0.2..0.7).contains(&t)));
        // A shorter run reproduces the prefix.
        let short = sample_transmittance(&f, &SampleConfig::new(1000, 99).unwrap());
        assert_eq!(&a[..1000], &short[..]);
        let other = sample_transmittance(&f, &SampleConfig::new(1000, 100).unwrap());
        assert_ne!(short, other);
    }

    #[test]
    fn mean_within_clt_bound() {
        let f = FadingUniform::new(0.0, 1.0).unwrap();
        let cfg = SampleConfig::new(1_000_000, 42).unwrap();
        let xs = sample_transmittance(&f, &cfg);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!((mean - 0.5).abs() < 4.0 * (1.0 / 12f64).sqrt() / 1e3);
    }

    #[test]
    fn rejects_empty_config() {
        assert!(SampleConfig::new(0, 1).is_err());
    }
}
