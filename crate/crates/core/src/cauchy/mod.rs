//! The Cauchy transform on the disk, its `z`-derivative, and the singular
//! operator
//!
//! ```text
//! (Tf)(λ) = ∫_D f(z) / ((z − λ)(1 − z λ̄)) dA(z)
//! ```
//!
//! Functions are finite sums `Σ a_{nm} uⁿ ūᵐ` ([`MonomialExpansion`]) or,
//! for the solver, per-frequency radial expansions ([`polar::PolarExpansion`]).
//! Both are evaluated through exact closed forms; [`quadrature`] holds the
//! independent 2-D quadrature references they are checked against.

pub mod polar;
pub mod quadrature;
pub mod rotation;
pub mod schur;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::disk::DiskGrid;

/// `w(u) = Σ a_{nm} uⁿ ūᵐ` with finitely many terms.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MonomialExpansion {
    terms: BTreeMap<(u32, u32), Complex64>,
}

impl MonomialExpansion {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn monomial(n: u32, m: u32, c: Complex64) -> Self {
        let mut e = Self::new();
        e.add_term(n, m, c);
        e
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn add_term(&mut self, n: u32, m: u32, c: Complex64) {
        *self.terms.entry((n, m)).or_default() += c;
    }

    pub fn with_term(mut self, n: u32, m: u32, c: Complex64) -> Self {
        self.add_term(n, m, c);
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), Complex64)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_empty(&self) -> bool {
        self.terms.values().all(|c| c.norm_sqr() == 0.0)
    }

    pub fn eval(&self, u: Complex64) -> Complex64 {
        let uc = u.conj();
        self.terms()
            .map(|((n, m), a)| a * u.powu(n) * uc.powu(m))
            .sum()
    }

    /// `‖w‖²_A = ∫_D |w|² dA` in closed form: `∫ z^{n}z̄^{m}·conj(z^{n'}z̄^{m'}) dA`
    /// is `π/(n+m'+1)` when `n − m = n' − m'`, else zero.
    pub fn area_norm_sq(&self) -> f64 {
        let terms: Vec<_> = self.terms().collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for &((n, m), a) in &terms {
            for &((n2, m2), b) in &terms {
                if n as i64 - m as i64 == n2 as i64 - m2 as i64 {
                    acc += a * b.conj() * (PI / (n + m2 + 1) as f64);
                }
            }
        }
        acc.re
    }
}

/// `−(1/π)∫_D w(u)/(u − z) dA(u)`. On `uⁿūᵐ` this is
/// `(zⁿ z̄^{m+1} − [n>m]·z^{n−m−1})/(m+1)`, valid on the closed disk.
pub fn cauchy_transform(w: &MonomialExpansion, z: Complex64) -> Complex64 {
    let zc = z.conj();
    w.terms()
        .map(|((n, m), a)| {
            let mut v = z.powu(n) * zc.powu(m + 1);
            if n > m {
                v -= z.powu(n - m - 1);
            }
            a * v / (m + 1) as f64
        })
        .sum()
}

/// `∂_z` of the Cauchy transform, by differentiating the closed form.
pub fn beurling_derivative(w: &MonomialExpansion, z: Complex64) -> Complex64 {
    let zc = z.conj();
    w.terms()
        .map(|((n, m), a)| {
            let mut v = Complex64::new(0.0, 0.0);
            if n > 0 {
                v += z.powu(n - 1) * zc.powu(m + 1) * n as f64;
            }
            if n > m + 1 {
                v -= z.powu(n - m - 2) * (n - m - 1) as f64;
            }
            a * v / (m + 1) as f64
        })
        .sum()
}

/// `|∂̄ ŵ(z) − w(z)|` with `∂̄` taken by centred differences of step `step`.
pub fn dbar_defect(w: &MonomialExpansion, z: Complex64, step: f64) -> f64 {
    let h = Complex64::new(step, 0.0);
    let ih = Complex64::new(0.0, step);
    let fx = (cauchy_transform(w, z + h) - cauchy_transform(w, z - h)) / (2.0 * step);
    let fy = (cauchy_transform(w, z + ih) - cauchy_transform(w, z - ih)) / (2.0 * step);
    let dbar = (fx + Complex64::i() * fy) * 0.5;
    (dbar - w.eval(z)).norm()
}

/// `(Tf)(λ)` in closed form. Splitting
/// `1/((z−λ)(1−zλ̄)) = (1/(1−|λ|²))·(1/(z−λ) + λ̄/(1−zλ̄))` gives, on `zⁿz̄ᵐ`,
/// `(π/((m+1)(1−|λ|²)))·([m≥n]λ̄^{m−n+1} − λⁿλ̄^{m+1} + [n>m]λ^{n−m−1})`.
pub fn t_apply(f: &MonomialExpansion, lam: Complex64) -> Complex64 {
    t_apply_scaled(f, lam) / (1.0 - lam.norm_sqr())
}

/// `(1 − |λ|²)·(Tf)(λ)`, which stays bounded up to the circle.
pub fn t_apply_scaled(f: &MonomialExpansion, lam: Complex64) -> Complex64 {
    let lc = lam.conj();
    f.terms()
        .map(|((n, m), a)| {
            let mut v = -lam.powu(n) * lc.powu(m + 1);
            if n > m {
                v += lam.powu(n - m - 1);
            } else {
                v += lc.powu(m - n + 1);
            }
            a * v * (PI / (m + 1) as f64)
        })
        .sum()
}

/// `‖Tf‖²_A` by quadrature of the closed form on `grid`.
pub fn t_area_norm_sq(f: &MonomialExpansion, grid: &DiskGrid) -> f64 {
    let samples: Vec<f64> = grid.nodes.iter().map(|&z| t_apply(f, z).norm_sqr()).collect();
    grid.integrate_real(&samples)
}
