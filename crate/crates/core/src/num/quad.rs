use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of bisections applied to any sub-interval.
    pub max_depth: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { abs_tol: 1e-12, rel_tol: 1e-10, max_depth: 60 }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_depth: u32) -> Result<Self> {
        if !(abs_tol > 0.0) || !(rel_tol > 0.0) || max_depth < 1 {
            return Err(Error::domain(format!(
                "quadrature tolerances must be positive and max_depth >= 1 \
                 (abs_tol={abs_tol}, rel_tol={rel_tol}, max_depth={max_depth})"
            )));
        }
        Ok(QuadratureSpec { abs_tol, rel_tol, max_depth })
    }
}

// 15-point Kronrod abscissae and weights with the embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, depth: u32) -> Result<Panel> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut eval = |x: f64| -> Result<f64> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::Quadrature(format!("integrand is {y} at x = {x}")))
        }
    };
    let fc = eval(c)?;
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = eval(c - dx)? + eval(c + dx)?;
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    Ok(Panel { a, b, value: k * h, error: ((k - g) * h).abs(), depth })
}

/// Globally adaptive Gauss–Kronrod (7/15) quadrature of `f` over `[a, b]`.
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate is below `max(abs_tol, rel_tol·|result|)`. Fails if a panel
/// would have to be split beyond `max_depth`, or if `f` returns a
/// non-finite value.
pub fn integrate<F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!("integration bounds must satisfy a < b, got [{a}, {b}]")));
    }
    let mut heap = BinaryHeap::new();
    let first = kronrod(&mut f, a, b, 0)?;
    let mut total = first.value;
    let mut err = first.error;
    heap.push(first);
    loop {
        let target = spec.abs_tol.max(spec.rel_tol * total.abs());
        if err <= target {
            return Ok(total);
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        if worst.depth >= spec.max_depth {
            return Err(Error::Quadrature(format!(
                "max_depth {} reached on [{}, {}] with error estimate {err:e} > {target:e}",
                spec.max_depth, worst.a, worst.b
            )));
        }
        let mid = 0.5 * (worst.a + worst.b);
        let left = kronrod(&mut f, worst.a, mid, worst.depth + 1)?;
        let right = kronrod(&mut f, mid, worst.b, worst.depth + 1)?;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        // Recompute occasionally so the running sums do not drift.
        if heap.len() % 64 == 0 {
            total = heap.iter().map(|p| p.value).sum();
            err = heap.iter().map(|p| p.error).sum();
        }
    }
}

/// Mean of `f` over `[a, b]` by the fixed 8-point Gauss–Legendre rule, for
/// very narrow intervals where closed forms lose digits to cancellation.
/// Returning the mean avoids dividing by a width that rounding has altered.
pub(crate) fn gauss_legendre_8_mean<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> f64 {
    const X: [f64; 4] = [
        0.183_434_642_495_649_804_939_476_142_360_184,
        0.525_532_409_916_328_985_817_739_049_189_254,
        0.796_666_477_413_626_739_591_553_936_475_831,
        0.960_289_856_497_536_231_683_560_868_569_473,
    ];
    const W: [f64; 4] = [
        0.362_683_783_378_361_982_965_150_449_277_196,
        0.313_706_645_877_887_287_337_962_201_986_601,
        0.222_381_034_453_374_470_544_355_994_426_241,
        0.101_228_536_290_376_259_152_531_354_309_962,
    ];
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for i in 0..4 {
        s += W[i] * (f(c - h * X[i]) + f(c + h * X[i]));
    }
    0.5 * s
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn elementary_integrals() {
        let spec = QuadratureSpec::default();
        assert!((integrate(|x| x, 0.0, 1.0, &spec).unwrap() - 0.5).abs() < 1e-14);
        assert!((integrate(f64::sin, 0.0, PI, &spec).unwrap() - 2.0).abs() < 1e-12);
        let atan = integrate(|x| 1.0 / (1.0 + x * x), 0.0, 1.0, &spec).unwrap();
        assert!((atan - 0.785_398_163_397_448_3).abs() < 1e-12);
    }

    #[test]
    fn polynomials_up_to_degree_six() {
        let spec = QuadratureSpec::default();
        let coeffs = [0.3, -1.2, 2.5, 0.7, -0.4, 1.1, -0.25];
        for deg in 0..=6 {
            let c = &coeffs[..=deg];
            let p = |x: f64| c.iter().rev().fold(0.0, |acc, &k| acc * x + k);
            let antider = |x: f64| {
                c.iter().enumerate().map(|(i, &k)| k * x.powi(i as i32 + 1) / (i as f64 + 1.0)).sum::<f64>()
            };
            let (a, b) = (-0.7, 2.3);
            let got = integrate(p, a, b, &spec).unwrap();
            let want = antider(b) - antider(a);
            assert!((got - want).abs() <= 1e-12_f64.max(1e-10 * want.abs()), "deg {deg}");
        }
    }

    #[test]
    fn handles_sharp_but_integrable_features() {
        let spec = QuadratureSpec::default();
        let got = integrate(|x| x.sqrt(), 0.0, 1.0, &spec).unwrap();
        assert!((got - 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn reports_non_finite_integrand() {
        let spec = QuadratureSpec::default();
        let err = integrate(|x| 1.0 / (x - 0.5), 0.0, 1.0, &spec);
        // The midpoint node hits the pole exactly.
        assert!(matches!(err, Err(Error::Quadrature(_))));
    }

    #[test]
    fn reports_depth_exhaustion() {
        let spec = QuadratureSpec::new(1e-14, 1e-14, 2).unwrap();
        let err = integrate(|x| (50.0 * x).sin().abs(), 0.0, 3.0, &spec);
        assert!(matches!(err, Err(Error::Quadrature(_))));
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(QuadratureSpec::new(0.0, 1e-10, 10).is_err());
        assert!(QuadratureSpec::new(1e-10, 1e-10, 0).is_err());
        assert!(integrate(|x| x, 1.0, 1.0, &QuadratureSpec::default()).is_err());
    }

    #[test]
    fn gauss_legendre_is_exact_for_degree_15() {
        let got = gauss_legendre_8_mean(|x| x.powi(15) + x.powi(2), 0.0, 1.0);
        assert!((got - (1.0 / 16.0 + 1.0 / 3.0)).abs() < 1e-15);
    }
}
