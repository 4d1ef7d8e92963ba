//! Independent linear-algebra oracle for symplectic spectra.
//!
//! Symplectic eigenvalues of γ are the moduli of the eigenvalues of iΩγ.
//! They are computed here as the positive eigenvalues of the Hermitian
//! matrix i·γ^{1/2}Ωγ^{1/2} (same spectrum, better conditioned), using a
//! generic eigen-solver and no closed forms.
#![allow(dead_code)]

use nalgebra::{Complex, Matrix2, Matrix4};

pub type Gamma = [[f64; 4]; 4];

/// Two-mode covariance matrix of a TMSV of variance `v` sent through a
/// channel of transmittance `t` and excess noise `eps`, built entry by entry.
pub fn fixed_gamma(v: f64, t: f64, eps: f64) -> Gamma {
    let chi = 1.0 / t - 1.0 + eps;
    let c = (t * (v * v - 1.0)).sqrt();
    let b = t * (v + chi);
    [[v, 0.0, c, 0.0], [0.0, v, 0.0, -c], [c, 0.0, b, 0.0], [0.0, -c, 0.0, b]]
}

/// Fading-averaged covariance matrix from the two transmittance moments.
pub fn averaged_gamma(v: f64, eps: f64, mean_sqrt_t: f64, mean_t: f64) -> Gamma {
    let c = mean_sqrt_t * (v * v - 1.0).sqrt();
    let b = mean_t * (v - 1.0 + eps) + 1.0;
    [[v, 0.0, c, 0.0], [0.0, v, 0.0, -c], [c, 0.0, b, 0.0], [0.0, -c, 0.0, b]]
}

fn omega() -> Matrix4<f64> {
    Matrix4::new(
        0.0, 1.0, 0.0, 0.0, //
        -1.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        0.0, 0.0, -1.0, 0.0,
    )
}

/// Symplectic eigenvalues, largest first.
pub fn symplectic_eigenvalues(g: &Gamma) -> [f64; 2] {
    let gm = Matrix4::from_fn(|i, j| g[i][j]);
    let eig = gm.symmetric_eigen();
    let sqrt_diag = Matrix4::from_diagonal(&eig.eigenvalues.map(|x| x.max(0.0).sqrt()));
    let root = eig.eigenvectors * sqrt_diag * eig.eigenvectors.transpose();
    let m = root * omega() * root;
    let h = m.map(|x| Complex::new(0.0, x));
    let mut ev: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().filter(|&x| x > 0.0).collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    assert_eq!(ev.len(), 2, "expected a ± pair structure, got {ev:?}");
    [ev[0], ev[1]]
}

/// Eigenvalue of Alice's mode after Bob homodynes quadrature `q` (0 = x,
/// 1 = p): `γ_A − σᵀ (Xγ_B X)^+ σ` with the Moore–Penrose pseudo-inverse.
pub fn conditional_eigenvalue(g: &Gamma, q: usize) -> f64 {
    let block = |r: usize, c: usize| Matrix2::new(g[r][c], g[r][c + 1], g[r + 1][c], g[r + 1][c + 1]);
    let gamma_a = block(0, 0);
    let sigma = block(2, 0); // σ_AB (Bob rows, Alice columns)
    let gamma_b = block(2, 2);
    let mut x = Matrix2::zeros();
    x[(q, q)] = 1.0;
    let h = (x * gamma_b * x).pseudo_inverse(1e-300).expect("pseudo-inverse");
    let cond = gamma_a - sigma.transpose() * h * sigma;
    cond.determinant().sqrt()
}

pub fn g_entropy(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (x + 1.0) * (x + 1.0).log2() - x * x.log2()
    }
}

/// Holevo bound assembled from oracle eigenvalues.
pub fn holevo(g: &Gamma) -> f64 {
    let [l1, l2] = symplectic_eigenvalues(g);
    let l3 = conditional_eigenvalue(g, 0);
    g_entropy((l1 - 1.0) / 2.0) + g_entropy((l2 - 1.0) / 2.0) - g_entropy((l3 - 1.0) / 2.0)
}

/// Plain recursive adaptive Simpson, kept separate from the library's
/// Gauss–Kronrod integrator.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 40)
}
