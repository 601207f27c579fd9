//! Norm bounds for the radial operators `T_l` on `L²([0,1], r dr)`.
//!
//! Upper bounds come from Schur's test applied to the positive Gram kernel
//! `G(u,v) = ∫ b(s,u) b(s,v) s ds` of each piece `B` of `T_l`, so that
//! `‖B‖² ≤ sup_v (1/p(v)) ∫ G(u,v) p(u) u du`. Lower bounds come from the
//! largest singular value of a piecewise-constant Galerkin matrix.

use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::disk::gauss_legendre;
use crate::multiplier::op_norm;
use crate::{par, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchurWeight {
    /// `p ≡ 1`
    One,
    /// `p(x) = 1/√(1 − x²)`
    InvSqrt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchurKernel {
    /// `ln(1/max(u,v))`
    LogMax,
    /// `½/(1 − min(u,v)²)`
    HalfInvMinSq,
    /// Gram kernel of the part of `T_l` integrating over `r < s`; `l ≤ 0`.
    Inner(i64),
    /// Gram kernel of the part of `T_l` integrating over `r > s`.
    Outer(i64),
}

/// Gauss–Legendre panels on `[0, 1]`, halving in width toward both ends.
fn unit_graded_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        const LEVELS: i32 = 24;
        let (x, w) = gauss_legendre(8);
        let mut breaks = vec![0.0, 1.0, 0.5];
        for j in 1..=LEVELS {
            let d = 0.5 * 0.5f64.powi(j);
            breaks.push(d);
            breaks.push(1.0 - d);
        }
        breaks.sort_by(f64::total_cmp);
        let mut out = Vec::with_capacity(breaks.len() * 8);
        for p in breaks.windows(2) {
            let (c, h) = (0.5 * (p[0] + p[1]), 0.5 * (p[1] - p[0]));
            out.extend(x.iter().zip(&w).map(|(&t, &wt)| (c + h * t, wt * h)));
        }
        out
    })
}

/// The graded rule mapped to `[a, b]`.
fn graded_rule(a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> {
    let len = b - a;
    unit_graded_rule().iter().map(move |&(x, w)| (a + len * x, w * len))
}

/// `J_k(m) / m^{2k+2}` where `J_k(m) = ∫₀ᵐ s^{2k+1}/(1 − s²)² ds`.
///
/// With `x = m²`, `2J_k = ∫₀ˣ t^k/(1−t)² dt`. Below `x = 0.9` the power series
/// `Σ (i+1) x^i/(k+1+i)` is summed directly; above it, integrating by parts
/// gives `x^k/(1−x) − k L_k` with `L_k = −ln(1−x) − Σ_{j<k} x^j/j`.
fn j_scaled(k: u32, m: f64) -> f64 {
    let x = m * m;
    if x <= 0.9 {
        let (mut sum, mut p, mut i) = (0.0, 1.0, 0.0);
        loop {
            let term = (i + 1.0) * p / (k as f64 + 1.0 + i);
            sum += term;
            if term <= 1e-17 * sum {
                break;
            }
            p *= x;
            i += 1.0;
        }
        0.5 * sum
    } else {
        let mut tail = -(-x).ln_1p();
        let mut p = 1.0;
        for j in 1..k {
            p *= x;
            tail -= p / j as f64;
        }
        let xk = if k == 0 { 1.0 } else { p * x };
        let i_k = if k == 0 { x / (1.0 - x) } else { xk / (1.0 - x) - k as f64 * tail };
        0.5 * i_k / (xk * x)
    }
}

impl SchurKernel {
    pub fn eval(self, u: f64, v: f64) -> f64 {
        let (m, big) = if u < v { (u, v) } else { (v, u) };
        match self {
            SchurKernel::LogMax => -big.ln(),
            SchurKernel::HalfInvMinSq => 0.5 / (1.0 - m * m),
            SchurKernel::Inner(l) => inner_gram(l, m, big),
            SchurKernel::Outer(l) => {
                if l > 0 {
                    (m / big).powi(l as i32) * j_scaled((l - 1) as u32, m)
                } else {
                    let cap = (1 - l) as i32;
                    (m * big).powi(cap - 1) * m.powi(2 * cap + 2) * j_scaled(cap as u32, m)
                }
            }
        }
    }
}

/// `(uv)^{L−1} ∫_M¹ S(s)² s^{1−2L} ds` with `S(s) = Σ_{n=0}^{−l} s^{2n}`.
fn inner_gram(l: i64, m: f64, big: f64) -> f64 {
    assert!(l <= 0, "inner kernel is defined for l ≤ 0");
    let cap = (1 - l) as i32;
    let deg = (-l) as i32;
    let ratio = (m / big).powi(cap - 1);
    let prod = (m * big).powi(cap - 1);
    let big2 = big * big;
    let (mut acc, mut pow) = (0.0, 1.0);
    // the double sum over (a, b) depends only on c = a + b
    for c in 0..=2 * deg {
        let mult = (c.min(2 * deg - c) + 1) as f64;
        let e = 2 * c + 2 - 2 * cap;
        acc += mult
            * if e == 0 {
                -prod * big.ln()
            } else {
                (prod - ratio * pow) / e as f64
            };
        pow *= big2;
    }
    acc
}

fn sample_points(n_grid: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n_grid).map(|k| (k as f64 + 0.5) / n_grid as f64).collect();
    v.extend((2..=7).map(|j| 1.0 - 10f64.powi(-j)));
    v.extend((2..=5).map(|j| 10f64.powi(-j)));
    v
}

/// `sup_v (1/p(v)) ∫₀¹ G(u,v) p(u) u du`, the sup taken over `n_grid` evenly
/// spaced points plus points clustering at both ends of `(0,1)`.
pub fn schur_certificate(kernel: SchurKernel, weight: SchurWeight, n_grid: usize) -> Result<f64> {
    if n_grid == 0 {
        return Err(Error::arg("schur grid needs at least one point"));
    }
    if let SchurKernel::Inner(l) = kernel {
        if l > 0 {
            return Err(Error::arg("inner kernel is defined for l ≤ 0"));
        }
    }
    let vs = sample_points(n_grid);
    let sums = par::map(&vs, |&v| match weight {
        SchurWeight::One => {
            let mut s = 0.0;
            for (lo, hi) in [(0.0, v), (v, 1.0)] {
                s += graded_rule(lo, hi).map(|(u, w)| w * u * kernel.eval(u, v)).sum::<f64>();
            }
            s
        }
        SchurWeight::InvSqrt => {
            // u = √(1 − w²) turns p(u) u du into dw
            let wv = (1.0 - v * v).sqrt();
            let mut s = 0.0;
            for (lo, hi) in [(0.0, wv), (wv, 1.0)] {
                s += graded_rule(lo, hi)
                    .map(|(w, wt)| wt * kernel.eval((1.0 - w * w).sqrt(), v))
                    .sum::<f64>();
            }
            s * wv
        }
    });
    let sup = sums.into_iter().fold(0.0, f64::max);
    if !sup.is_finite() {
        return Err(Error::Refinement(format!("schur integral for {kernel:?} is not finite")));
    }
    Ok(sup)
}

/// Schur constants of the pieces of `T_l` and the resulting norm bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TlCertificate {
    pub outer: f64,
    /// Present for `l ≤ 0` only.
    pub inner: Option<f64>,
    pub bound: f64,
}

/// Upper bound on `‖T_l‖`. For `l > 0` only the outer piece is present; for
/// `l ≤ 0` the two pieces combine as `‖A + B‖² ≤ 2(‖A‖² + ‖B‖²)`.
pub fn t_l_certificate(l: i64, n_grid: usize) -> Result<TlCertificate> {
    let outer = schur_certificate(SchurKernel::Outer(l), SchurWeight::InvSqrt, n_grid)?;
    if l > 0 {
        Ok(TlCertificate { outer, inner: None, bound: outer.sqrt() })
    } else {
        let inner = schur_certificate(SchurKernel::Inner(l), SchurWeight::One, n_grid)?;
        Ok(TlCertificate { outer, inner: Some(inner), bound: (2.0 * (inner + outer)).sqrt() })
    }
}

pub fn t_l_schur_bound(l: i64, n_grid: usize) -> Result<f64> {
    Ok(t_l_certificate(l, n_grid)?.bound)
}

fn cell_edges(n: usize) -> Vec<f64> {
    (0..=n)
        .map(|k| {
            let t = 1.0 - k as f64 / n as f64;
            1.0 - t * t
        })
        .collect()
}

/// `∫_a^b k(s, r) r dr` for the kernel of `T_l` written against `r dr`.
fn cell_integral(l: i64, s: f64, a: f64, b: f64) -> f64 {
    let mut v = 0.0;
    let denom = 1.0 - s * s;
    // r > s
    let lo = a.max(s);
    if b > lo {
        if l > 0 {
            let p = (l - 1) as i32;
            v += if l == 2 {
                s * (b / lo).ln()
            } else {
                (b * (s / b).powi(p) - lo * (s / lo).powi(p)) / (2 - l) as f64
            } / denom;
        } else {
            let cap = (1 - l) as i32;
            v += s.powi(cap) * (b.powi(cap + 1) - lo.powi(cap + 1)) / ((cap + 1) as f64 * denom);
        }
    }
    // r < s
    let hi = b.min(s);
    if l <= 0 && hi > a {
        let cap = (1 - l) as i32;
        let geom: f64 = (0..=(-l) as i32).map(|j| s.powi(2 * j)).sum();
        v -= geom * (hi * (hi / s).powi(cap) - a * (a / s).powi(cap)) / (cap + 1) as f64;
    }
    v
}

/// Galerkin matrix of `T_l` on the orthonormal indicator basis of `n` cells.
pub fn t_l_matrix(l: i64, n: usize) -> DMatrix<f64> {
    let edges = cell_edges(n);
    let mass: Vec<f64> = edges.windows(2).map(|e| 0.5 * (e[1] * e[1] - e[0] * e[0])).collect();
    let (x, w) = gauss_legendre(16);
    let rows = par::map_range(n, |j| {
        let (a, b) = (edges[j], edges[j + 1]);
        let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
        (0..n)
            .map(|k| {
                let sum: f64 = x
                    .iter()
                    .zip(&w)
                    .map(|(&t, &wt)| {
                        let s = c + h * t;
                        wt * h * s * cell_integral(l, s, edges[k], edges[k + 1])
                    })
                    .sum();
                sum / (mass[j] * mass[k]).sqrt()
            })
            .collect::<Vec<f64>>()
    });
    DMatrix::from_fn(n, n, |j, k| rows[j][k])
}

/// Largest singular value of the Galerkin matrix of `T_l`, by power iteration.
pub fn t_l_norm_estimate(l: i64, n_grid: usize) -> Result<f64> {
    if n_grid < 64 {
        return Err(Error::arg(format!("radial grid {n_grid} is below the minimum 64")));
    }
    let m = t_l_matrix(l, n_grid).map(|v| Complex64::new(v, 0.0));
    op_norm(&m, 1e-10)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j_matches_quadrature() {
        for k in [0u32, 1, 2, 5, 17, 31, 60] {
            for m in [0.01, 0.3, 0.6, 0.9, 0.948, 0.95, 0.99, 0.9999] {
                let q = graded_rule(0.0, m)
                    .map(|(s, w)| w * s.powi(2 * k as i32 + 1) / (1.0 - s * s).powi(2))
                    .sum::<f64>()
                    / m.powi(2 * k as i32 + 2);
                let d = j_scaled(k, m);
                assert!((d - q).abs() <= 1e-11 * q, "k={k} m={m}: {d} vs {q}");
            }
        }
        // J_0(m) = ½ m²/(1 − m²)
        let m: f64 = 0.999;
        assert!((j_scaled(0, m) * m * m - 0.5 * m * m / (1.0 - m * m)).abs() < 1e-9);
        assert!((j_scaled(3, 0.0) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn inner_gram_matches_quadrature() {
        for l in [-1i64, -3, -12] {
            let cap = (1 - l) as i32;
            for (u, v) in [(0.2, 0.6), (0.9, 0.95), (0.5, 0.5)] {
                let big = f64::max(u, v);
                let q: f64 = graded_rule(big, 1.0)
                    .map(|(s, w)| {
                        let sum: f64 = (0..=-l).map(|n| s.powi(2 * n as i32)).sum();
                        w * sum * sum * s.powi(1 - 2 * cap)
                    })
                    .sum::<f64>()
                    * (u * v).powi(cap - 1);
                let d = SchurKernel::Inner(l).eval(u, v);
                assert!((d - q).abs() <= 1e-10 * q.abs().max(1e-300), "l={l} ({u},{v}): {d} vs {q}");
            }
        }
    }

    #[test]
    fn inner_zero_is_log_max() {
        for (u, v) in [(0.1, 0.5), (0.7, 0.2), (0.99, 0.999)] {
            assert!((SchurKernel::Inner(0).eval(u, v) - SchurKernel::LogMax.eval(u, v)).abs() < 1e-14);
        }
    }

    #[test]
    fn certificate_examples() {
        let c1 = schur_certificate(SchurKernel::LogMax, SchurWeight::One, 200).unwrap();
        assert!(c1 <= 1.25 + 1e-3, "{c1}");
        let c2 = schur_certificate(SchurKernel::HalfInvMinSq, SchurWeight::InvSqrt, 200).unwrap();
        assert!(c2 <= 1.0 + 1e-3, "{c2}");
        let c5 = schur_certificate(SchurKernel::Outer(5), SchurWeight::InvSqrt, 200).unwrap();
        assert!(c5 <= 1.5 + 1e-3, "{c5}");
    }

    #[test]
    fn log_max_value_is_quarter() {
        // ∫₀¹ ln(1/max(u,v)) u du = 1/4 − v²/4
        let c = schur_certificate(SchurKernel::LogMax, SchurWeight::One, 50).unwrap();
        assert!((c - 0.25).abs() < 1e-3);
    }

    #[test]
    fn galerkin_power_iteration_matches_svd() {
        for l in [-3, 0, 2] {
            let m = t_l_matrix(l, 64);
            let svd = m.clone().singular_values().max();
            let est = t_l_norm_estimate(l, 64).unwrap();
            assert!((svd - est).abs() <= 1e-6 * svd, "l={l}: {svd} vs {est}");
        }
    }

    #[test]
    fn galerkin_reproduces_tz() {
        // T₁ applied to f₁(r) = r is ½: check against the projected profile
        let n = 64;
        let edges = cell_edges(n);
        let mass: Vec<f64> = edges.windows(2).map(|e| 0.5 * (e[1] * e[1] - e[0] * e[0])).collect();
        let coef: Vec<f64> = edges
            .windows(2)
            .zip(&mass)
            .map(|(e, &mu)| (e[1].powi(3) - e[0].powi(3)) / 3.0 / mu.sqrt())
            .collect();
        let out = t_l_matrix(1, n) * nalgebra::DVector::from_vec(coef);
        for (j, &mu) in mass.iter().enumerate().take(n - 4) {
            let avg = out[j] / mu.sqrt();
            assert!((avg - 0.5).abs() < 2e-2, "cell {j}: {avg}");
        }
    }

    #[test]
    fn estimates_respect_bounds() {
        assert!(t_l_norm_estimate(0, 128).unwrap() <= 4.5f64.sqrt() + 1e-2);
        assert!(t_l_norm_estimate(7, 128).unwrap() <= 1.5 + 1e-2);
        assert!(t_l_norm_estimate(-7, 128).unwrap() <= 5.0 + 1e-2);
        assert!(t_l_norm_estimate(3, 32).is_err());
    }

    #[test]
    fn schur_dominates_galerkin() {
        for l in [-6, -2, 0, 1, 4] {
            let bound = t_l_schur_bound(l, 100).unwrap();
            let est = t_l_norm_estimate(l, 96).unwrap();
            assert!(est <= bound, "l={l}: {est} > {bound}");
            assert!(bound <= 5.0, "l={l}: {bound}");
        }
    }
}
