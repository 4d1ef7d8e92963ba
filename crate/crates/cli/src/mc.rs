use fading_cvqkd::montecarlo::{empirical_avg_covariance, sample_stats, SampleConfig};
use fading_cvqkd::{cma, FadingUniform, Result};

/// Closed form against Monte-Carlo estimate for one quantity.
#[derive(Clone, Debug, PartialEq)]
pub struct McCheck {
    pub quantity: &'static str,
    pub closed_form: f64,
    pub monte_carlo: f64,
    pub std_error: f64,
}

impl McCheck {
    pub fn z_score(&self) -> f64 {
        if self.std_error > 0.0 {
            (self.monte_carlo - self.closed_form) / self.std_error
        } else if self.monte_carlo == self.closed_form {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// Compares sampled moments and averaged covariance entries with their closed forms.
pub fn mc_validate(v: f64, eps: f64, f: &FadingUniform, cfg: &SampleConfig) -> Result<Vec<McCheck>> {
    let m = cma::moments_uniform(f);
    let stats = sample_stats(f, cfg);
    let exact = cma::avg_covariance(&m, v, eps)?;
    let emp = empirical_avg_covariance(v, eps, f, cfg)?;
    let check = |quantity, closed_form, monte_carlo, std_error| McCheck { quantity, closed_form, monte_carlo, std_error };
    Ok(vec![
        check("mean_sqrt_t", m.mean_sqrt_t, stats.mean_sqrt_t, stats.se_sqrt_t),
        check("mean_t", m.mean_t, stats.mean_t, stats.se_t),
        check("cov_a", exact.a, emp.a, 0.0),
        check("cov_c", exact.c, emp.c, stats.se_sqrt_t * (v * v - 1.0).sqrt()),
        check("cov_b", exact.b, emp.b, stats.se_t * (v - 1.0 + eps)),
    ])
}
