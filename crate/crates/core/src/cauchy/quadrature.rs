//! Direct 2-D quadrature of the singular integrals, used as an independent
//! reference for the closed forms.
//!
//! Polar coordinates are centred on the singular point `z`, so the factor
//! `1/(u − z)` is cancelled by the Jacobian `ρ`: with `u = z + ρe^{iφ}`,
//! `dA(u)/(u − z) = e^{−iφ} dρ dφ`. The ray from `z` leaves the disk at
//! `ρ = R(φ) = −b + √(b² + 1 − |z|²)` with `b = Re(z̄e^{iφ})`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::disk::gauss_legendre_on;

/// `∫_D g(u)/(u − z) dA(u)` for `|z| < 1`; trapezoid in `φ`, Gauss–Legendre
/// in `ρ`.
pub fn singular_integral<G>(g: G, z: Complex64, n_rho: usize, n_phi: usize) -> Complex64
where
    G: Fn(Complex64) -> Complex64,
{
    let c = 1.0 - z.norm_sqr();
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n_phi {
        let phi = 2.0 * PI * k as f64 / n_phi as f64;
        let e = Complex64::from_polar(1.0, phi);
        let b = (z.conj() * e).re;
        let big_r = -b + (b * b + c).sqrt();
        let (rho, w) = gauss_legendre_on(n_rho, 0.0, big_r);
        let ray: Complex64 = rho.iter().zip(&w).map(|(&p, &wi)| g(z + e * p) * wi).sum();
        acc += ray * e.conj();
    }
    acc * (2.0 * PI / n_phi as f64)
}

/// `−(1/π)∫_D w(u)/(u − z) dA(u)` by quadrature.
pub fn cauchy_transform_quad<G>(w: G, z: Complex64, n_rho: usize, n_phi: usize) -> Complex64
where
    G: Fn(Complex64) -> Complex64,
{
    -singular_integral(w, z, n_rho, n_phi) / PI
}

/// `∫_D f(u)/((u − λ)(1 − uλ̄)) dA(u)` by quadrature.
pub fn t_apply_quad<G>(f: G, lam: Complex64, n_rho: usize, n_phi: usize) -> Complex64
where
    G: Fn(Complex64) -> Complex64,
{
    let lc = lam.conj();
    singular_integral(|u| f(u) / (1.0 - u * lc), lam, n_rho, n_phi)
}
