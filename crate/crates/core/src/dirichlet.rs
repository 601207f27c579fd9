//! Norms on the Dirichlet space `𝓓` and the harmonic Dirichlet space `𝓗𝓓`,
//! the reproducing kernel of `𝓓`, and harmonic extension from the circle.
//!
//! The canonical norm is the coefficient form `‖f‖² = Σ (n+1)|a_n|²`, with
//! orthonormal basis `e_n = zⁿ/√(n+1)`. The integral form
//! `∫|f|²dσ + ∫_D|f′|²dA` is an equivalent norm; on `zⁿ` it equals `1 + πn`.

use num_complex::Complex64;

use crate::disk::{integrate_boundary, integrate_disk, BoundaryFunction, BoundaryGrid, DiskGrid};
use crate::{AnalyticPoly, Error, Result};

/// `√(Σ (n+1)|a_n|²)`.
pub fn dirichlet_norm_coeff(p: &AnalyticPoly) -> f64 {
    dirichlet_norm_sq(p).sqrt()
}

pub fn dirichlet_norm_sq(p: &AnalyticPoly) -> f64 {
    p.coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| (n + 1) as f64 * c.norm_sqr())
        .sum()
}

/// `Σ (n+1) a_n b̄_n`.
pub fn dirichlet_inner(p: &AnalyticPoly, q: &AnalyticPoly) -> Complex64 {
    p.coeffs()
        .iter()
        .zip(q.coeffs())
        .enumerate()
        .map(|(n, (a, b))| a * b.conj() * (n + 1) as f64)
        .sum()
}

/// Coordinates of `p` in the orthonormal basis `e_n`, padded or truncated to
/// length `n + 1`.
pub fn to_orthonormal(p: &AnalyticPoly, n: usize) -> Vec<Complex64> {
    (0..=n).map(|k| p.coeff(k) * ((k + 1) as f64).sqrt()).collect()
}

pub fn from_orthonormal(v: &[Complex64]) -> AnalyticPoly {
    AnalyticPoly::new(
        v.iter()
            .enumerate()
            .map(|(k, c)| c / ((k + 1) as f64).sqrt())
            .collect(),
    )
}

/// Integral-form norm together with whether the grids integrate it exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadNorm {
    pub value: f64,
    pub resolved: bool,
}

/// `√(∫|p|²dσ + ∫_D|p′|²dA)` by quadrature.
pub fn dirichlet_norm_quad(p: &AnalyticPoly, bg: &BoundaryGrid, dg: &DiskGrid) -> QuadNorm {
    let d = p.udegree();
    let boundary: Vec<Complex64> = bg
        .sample(1.0, |z| Complex64::new(p.eval(z).norm_sqr(), 0.0));
    let dp = p.derivative();
    let area: Vec<Complex64> = dg.sample(|z| Complex64::new(dp.eval(z).norm_sqr(), 0.0));
    let value = integrate_boundary(&boundary, bg).expect("sized from grid").re
        + integrate_disk(&area, dg).expect("sized from grid").re;
    let resolved = 2 * d < bg.n_theta && d <= dg.n_r && 2 * d < dg.n_theta;
    QuadNorm {
        value: value.max(0.0).sqrt(),
        resolved,
    }
}

/// `√(Σ (1+|n|)|f̂(n)|²)`.
pub fn harmonic_dirichlet_norm(f: &BoundaryFunction) -> f64 {
    harmonic_dirichlet_norm_sq(f).sqrt()
}

pub fn harmonic_dirichlet_norm_sq(f: &BoundaryFunction) -> f64 {
    f.iter()
        .map(|(n, c)| (1 + n.unsigned_abs()) as f64 * c.norm_sqr())
        .sum()
}

/// Double-integral seminorm
/// `∫∫ |f(e^{it}) − f(e^{iθ})|² / |e^{it} − e^{iθ}|² dσ dσ`
/// by the product trapezoid rule on two grids offset by half a step, so the
/// diagonal is never sampled.
pub fn hd_double_integral<F>(f: F, n: usize) -> f64
where
    F: Fn(f64) -> Complex64,
{
    let h = 2.0 * std::f64::consts::PI / n as f64;
    let t_vals: Vec<(f64, Complex64)> = (0..n).map(|j| (j as f64 * h, f(j as f64 * h))).collect();
    let s_vals: Vec<(f64, Complex64)> = (0..n)
        .map(|j| {
            let s = (j as f64 + 0.5) * h;
            (s, f(s))
        })
        .collect();
    let mut acc = 0.0;
    for &(t, ft) in &t_vals {
        let mut row = 0.0;
        for &(s, fs) in &s_vals {
            let d = Complex64::from_polar(1.0, t) - Complex64::from_polar(1.0, s);
            row += (ft - fs).norm_sqr() / d.norm_sqr();
        }
        acc += row;
    }
    acc / (n * n) as f64
}

fn check_in_disk(z: Complex64, what: &str) -> Result<()> {
    if z.norm() >= 1.0 || !z.norm().is_finite() {
        return Err(Error::arg(format!("{what} = {z} must lie in the open unit disk")));
    }
    Ok(())
}

/// Reproducing kernel `k_w(z) = Σ (z w̄)ⁿ/(n+1) = (1/x) log(1/(1−x))`, `x = z w̄`.
pub fn rk_eval(w: Complex64, z: Complex64) -> Result<Complex64> {
    check_in_disk(w, "w")?;
    check_in_disk(z, "z")?;
    let x = z * w.conj();
    if x.norm() < 1e-3 {
        // series; the removable singularity at x = 0 gives 1
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for n in 0..12 {
            sum += term / (n + 1) as f64;
            term *= x;
        }
        return Ok(sum);
    }
    Ok(-(Complex64::new(1.0, 0.0) - x).ln() / x)
}

/// Orthonormal coordinates of the truncated kernel `k_z^{(N)}`: `z̄ⁿ/√(n+1)`.
pub fn kernel_coords(z: Complex64, n: usize) -> Vec<Complex64> {
    let zc = z.conj();
    let mut p = Complex64::new(1.0, 0.0);
    (0..=n)
        .map(|k| {
            let c = p / ((k + 1) as f64).sqrt();
            p *= zc;
            c
        })
        .collect()
}

/// Coefficients `c_1..c_N` of `1/k(x) = 1 − Σ c_n xⁿ`, `k(x) = Σ xⁿ/(n+1)`,
/// by power-series reciprocal.
pub fn cnp_coeffs(n: usize) -> Vec<f64> {
    let k: Vec<f64> = (0..=n).map(|j| 1.0 / (j + 1) as f64).collect();
    let mut b = vec![0.0; n + 1];
    b[0] = 1.0;
    for m in 1..=n {
        b[m] = -(1..=m).map(|j| k[j] * b[m - j]).sum::<f64>();
    }
    b[1..].iter().map(|v| -v).collect()
}

/// Harmonic extension `Σ_{n≥0} f̂(n) zⁿ + Σ_{n<0} f̂(n) z̄^{|n|}`.
pub fn poisson_extend(f: &BoundaryFunction, z: Complex64) -> Result<Complex64> {
    check_in_disk(z, "z")?;
    Ok(poisson_extend_unchecked(f, z))
}

/// Same as [`poisson_extend`] but also valid on the closed disk.
pub(crate) fn poisson_extend_unchecked(f: &BoundaryFunction, z: Complex64) -> Complex64 {
    let band = f.band() as i64;
    let zc = z.conj();
    let mut acc = f.get(0);
    let (mut zp, mut zcp) = (z, zc);
    for n in 1..=band {
        acc += f.get(n) * zp + f.get(-n) * zcp;
        zp *= z;
        zcp *= zc;
    }
    acc
}
