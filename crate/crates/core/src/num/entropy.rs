use crate::error::{Error, Result};

/// Bosonic entropy function `G(x) = (x+1)·log₂(x+1) − x·log₂(x)`, in bits.
///
/// `G(0) = 0`: the `x·log₂ x` term is taken at its limit.
pub fn g_entropy(x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::domain(format!("g_entropy requires finite x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok((x + 1.0) * (x + 1.0).log2() - x * x.log2())
}

/// `G` of a symplectic eigenvalue, `G((λ − 1)/2)`, tolerating `λ` a hair
/// below one from rounding.
pub(crate) fn g_of_eigenvalue(lambda: f64) -> Result<f64> {
    const SLACK: f64 = 1e-12;
    let x = 0.5 * (lambda - 1.0);
    if x < 0.0 && x >= -SLACK {
        return Ok(0.0);
    }
    if x < 0.0 {
        return Err(Error::Unphysical(format!("symplectic eigenvalue {lambda} < 1")));
    }
    g_entropy(x)
}
