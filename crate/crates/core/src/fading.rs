use crate::error::{Error, Result};

/// Tolerance for `t_min + delta_t` overshooting one by rounding.
const T_MAX_SLACK: f64 = 1e-12;

/// Transmittance uniformly distributed on `[t_min, t_min + delta_t]`.
///
/// `delta_t = 0` is a point mass at `t_min`. `t_min = 0` is accepted for
/// moment computations as long as the interval has positive width; the
/// rate models that evaluate the channel at `t_min` reject it themselves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingUniform {
    t_min: f64,
    delta_t: f64,
}

impl FadingUniform {
    pub fn new(t_min: f64, delta_t: f64) -> Result<Self> {
        if !(t_min >= 0.0) || !(delta_t >= 0.0) || !t_min.is_finite() || !delta_t.is_finite() {
            return Err(Error::domain(format!(
                "fading interval needs t_min >= 0 and delta_t >= 0, got t_min = {t_min}, delta_t = {delta_t}"
            )));
        }
        let t_max = t_min + delta_t;
        if t_max > 1.0 + T_MAX_SLACK {
            return Err(Error::domain(format!("t_max = t_min + delta_t = {t_max} exceeds 1")));
        }
        if t_max <= 0.0 {
            return Err(Error::domain("fading interval collapses to T = 0"));
        }
        Ok(FadingUniform { t_min, delta_t: delta_t.min(1.0 - t_min) })
    }

    /// Point mass at `t`.
    pub fn fixed(t: f64) -> Result<Self> {
        Self::new(t, 0.0)
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }
    pub fn delta_t(&self) -> f64 {
        self.delta_t
    }
    pub fn t_max(&self) -> f64 {
        self.t_min + self.delta_t
    }
    pub fn t_mean(&self) -> f64 {
        self.t_min + 0.5 * self.delta_t
    }
    pub fn is_degenerate(&self) -> bool {
        self.delta_t == 0.0
    }

    pub(crate) fn require_positive_t_min(&self) -> Result<()> {
        if self.t_min > 0.0 {
            Ok(())
        } else {
            Err(Error::domain("this model evaluates the channel at t_min, which must be > 0"))
        }
    }

    pub(crate) fn require_open_top(&self) -> Result<()> {
        if self.t_max() < 1.0 {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "large-variance formulas need t_max < 1 (thermal variance diverges), got t_max = {}",
                self.t_max()
            )))
        }
    }
}
