//! Splitting by angular frequency: `f(re^{iθ}) = Σ_l f_l(r) e^{ilθ}`, and the
//! radial operators `T_l` with `(Tf)(se^{it}) = 2π Σ_l e^{i(l−1)t} (T_l f_l)(s)`.
//!
//! Radial functions live in `L²([0,1], r dr)`, so `‖f‖²_A = 2π Σ_l ‖f_l‖²`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::{t_apply, MonomialExpansion};
use crate::disk::{gauss_legendre_on, DiskGrid};
use crate::{Error, Result};

/// `f_l(r) = Σ c_p r^p` for a single frequency `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub l: i64,
    /// `(p, c_p)` pairs with distinct powers.
    pub terms: Vec<(u32, Complex64)>,
}

impl RadialProfile {
    pub fn new(l: i64, terms: Vec<(u32, Complex64)>) -> Self {
        Self { l, terms }
    }

    pub fn eval(&self, r: f64) -> Complex64 {
        self.terms.iter().map(|&(p, c)| c * r.powi(p as i32)).sum()
    }

    pub fn max_power(&self) -> u32 {
        self.terms.iter().map(|t| t.0).max().unwrap_or(0)
    }

    /// `∫₀¹ |f_l(r)|² r dr`.
    pub fn norm_sq(&self) -> f64 {
        let mut acc = 0.0;
        for &(p, a) in &self.terms {
            for &(q, b) in &self.terms {
                acc += (a * b.conj()).re / (p + q + 2) as f64;
            }
        }
        acc
    }
}

/// Groups `a_{nm} uⁿūᵐ` into `l = n − m` with radial power `n + m`.
pub fn rotation_decompose(f: &MonomialExpansion) -> Vec<RadialProfile> {
    let mut by_l: BTreeMap<i64, BTreeMap<u32, Complex64>> = BTreeMap::new();
    for ((n, m), a) in f.terms() {
        if a.norm_sqr() == 0.0 {
            continue;
        }
        *by_l
            .entry(n as i64 - m as i64)
            .or_default()
            .entry(n + m)
            .or_default() += a;
    }
    by_l.into_iter()
        .map(|(l, t)| RadialProfile::new(l, t.into_iter().collect()))
        .collect()
}

fn integrate<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, n: usize) -> Complex64 {
    if b <= a {
        return Complex64::new(0.0, 0.0);
    }
    let (x, w) = gauss_legendre_on(n, a, b);
    x.iter().zip(&w).map(|(&r, &wi)| f(r) * wi).sum()
}

/// `(T_l f_l)(s)` by Gauss–Legendre quadrature of the radial kernels.
///
/// For `l ≤ 0`, with `L = 1 − l`:
/// `−(Σ_{n=0}^{−l} s^{2n}) ∫₀ˢ (r/s)^L f_l dr + (1/(1−s²)) ∫ₛ¹ (rs)^L f_l dr`.
/// For `l > 0`: `(1/(1−s²)) ∫ₛ¹ (s/r)^{l−1} f_l dr`.
pub fn t_l_apply(l: i64, f_l: &RadialProfile, s: f64) -> Result<Complex64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::arg(format!("radius {s} must lie in (0,1)")));
    }
    let n = (f_l.max_power() as usize + l.unsigned_abs() as usize) / 2 + 8;
    let denom = 1.0 - s * s;
    if l > 0 {
        let k = (l - 1) as i32;
        let outer = integrate(|r| f_l.eval(r) * (s / r).powi(k), s, 1.0, n);
        Ok(outer / denom)
    } else {
        let big = (1 - l) as i32;
        let geom: f64 = (0..=(-l)).map(|j| s.powi(2 * j as i32)).sum();
        let inner = integrate(|r| f_l.eval(r) * (r / s).powi(big), 0.0, s, n);
        let outer = integrate(|r| f_l.eval(r) * (r * s).powi(big), s, 1.0, n);
        Ok(-inner * geom + outer / denom)
    }
}

/// Largest discrepancy between the closed-form `Tf` and its frequency
/// synthesis `2π Σ_l e^{i(l−1)t} (T_l f_l)(s)` over the nodes of `grid`.
pub fn rotation_identity_defect(f: &MonomialExpansion, grid: &DiskGrid) -> Result<f64> {
    let profiles = rotation_decompose(f);
    let mut worst: f64 = 0.0;
    for (i, &s) in grid.radii.iter().enumerate() {
        let radial: Vec<Complex64> = profiles
            .iter()
            .map(|p| t_l_apply(p.l, p, s))
            .collect::<Result<_>>()?;
        for (j, &t) in grid.angles.iter().enumerate() {
            let synth: Complex64 = profiles
                .iter()
                .zip(&radial)
                .map(|(p, &v)| v * Complex64::from_polar(1.0, (p.l - 1) as f64 * t))
                .sum::<Complex64>()
                * (2.0 * PI);
            let direct = t_apply(f, grid.nodes[i * grid.n_theta + j]);
            worst = worst.max((direct - synth).norm());
        }
    }
    Ok(worst)
}
