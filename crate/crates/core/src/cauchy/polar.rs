//! Band-limited expansions `w(re^{iθ}) = Σ_{|l|≤L} g_l(r) e^{ilθ}` with
//! `g_l(r) = Σ_k c_{l,k} φ_{|l|,k}(r)`, where
//! `φ_{β,k}(r) = √(2(2k+β+1)) · r^β P_k^{(0,β)}(2r² − 1)` is orthonormal in
//! `L²([0,1], r dr)`.
//!
//! Each frequency is treated on its own, so the Cauchy transform, its
//! `z`-derivative and `(1 − |z|²)·T` reduce to one-dimensional radial
//! integrals that stay well conditioned at high degree:
//!
//! ```text
//! l ≤ 0:  C(g e^{ilθ})(z) =  2 s e^{i(l−1)t} ∫₀¹ x^{1−l} g(sx) dx
//! l ≥ 1:  C(g e^{ilθ})(z) = −2 z^{l−1} ∫ₛ¹ r^{1−l} g(r) dr
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;

use super::MonomialExpansion;
use crate::disk::{gauss_legendre_on, Dft, DiskGrid};
use crate::{par, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PolarExpansion {
    band: usize,
    radial_degree: usize,
    /// `modes[l + band][k] = c_{l,k}`
    modes: Vec<Vec<Complex64>>,
}

/// `φ_{β,0}(r), …, φ_{β,K}(r)`.
pub fn radial_basis(beta: usize, k_max: usize, r: f64) -> Vec<f64> {
    let b = beta as f64;
    let x = 2.0 * r * r - 1.0;
    let mut p = Vec::with_capacity(k_max + 1);
    p.push(1.0);
    if k_max >= 1 {
        p.push(1.0 + 0.5 * (b + 2.0) * (x - 1.0));
    }
    for n in 2..=k_max {
        let nf = n as f64;
        let s = 2.0 * nf + b;
        let a1 = 2.0 * nf * (nf + b) * (s - 2.0);
        let a2 = (s - 1.0) * (s * (s - 2.0) * x - b * b);
        let a3 = 2.0 * (nf - 1.0) * (nf + b - 1.0) * s;
        p.push((a2 * p[n - 1] - a3 * p[n - 2]) / a1);
    }
    let rb = r.powi(beta as i32);
    p.iter()
        .enumerate()
        .map(|(k, v)| v * rb * (2.0 * (2 * k + beta + 1) as f64).sqrt())
        .collect()
}

/// Radial scalars of every frequency at one radius.
struct RingData {
    /// `g_l(s)`
    value: Vec<Complex64>,
    /// `∫₀¹ x^{1−l} g_l(sx) dx` for `l ≤ 0`, `∫ₛ¹ r^{1−l} g_l dr` for `l ≥ 1`
    integral: Vec<Complex64>,
}

/// Values at the nodes of one ring.
#[derive(Debug, Clone)]
pub struct RingValues {
    pub w: Vec<Complex64>,
    pub cauchy: Vec<Complex64>,
    pub dz: Vec<Complex64>,
    /// `(1 − s²)·(Tw)`
    pub t_scaled: Vec<Complex64>,
}

impl PolarExpansion {
    pub fn zeros(band: usize, radial_degree: usize) -> Self {
        Self {
            band,
            radial_degree,
            modes: vec![vec![Complex64::new(0.0, 0.0); radial_degree + 1]; 2 * band + 1],
        }
    }

    pub fn band(&self) -> usize {
        self.band
    }

    pub fn radial_degree(&self) -> usize {
        self.radial_degree
    }

    pub fn mode(&self, l: i64) -> &[Complex64] {
        &self.modes[(l + self.band as i64) as usize]
    }

    fn frequencies(&self) -> impl Iterator<Item = i64> {
        let b = self.band as i64;
        -b..=b
    }

    /// `‖w‖²_A = 2π Σ |c_{l,k}|²`.
    pub fn area_norm_sq(&self) -> f64 {
        2.0 * PI * self.modes.iter().flatten().map(|c| c.norm_sqr()).sum::<f64>()
    }

    /// Least-squares fit to samples at the nodes of `grid`: a DFT on each ring
    /// followed by projection onto the radial basis. The projection is exact
    /// (Gauss–Legendre orthogonality) when `band + 2·radial_degree < n_r` and
    /// the angular rule resolves `2·band`. Returns the expansion and the
    /// largest pointwise misfit.
    pub fn fit(samples: &[Complex64], grid: &DiskGrid, band: usize, radial_degree: usize) -> Result<(Self, f64)> {
        if samples.len() != grid.len() {
            return Err(Error::arg(format!("expected {} samples, got {}", grid.len(), samples.len())));
        }
        if band + 2 * radial_degree >= grid.n_r || 2 * band >= grid.n_theta {
            return Err(Error::Refinement(format!(
                "grid {}x{} cannot resolve band {band} with radial degree {radial_degree}",
                grid.n_r, grid.n_theta
            )));
        }
        let dft = Dft::new(grid.n_theta);
        let rings = par::map_range(grid.n_r, |i| dft.coeffs(&samples[i * grid.n_theta..(i + 1) * grid.n_theta], band));
        let mut out = Self::zeros(band, radial_degree);
        let basis: Vec<Vec<Vec<f64>>> = (0..=band)
            .map(|beta| grid.radii.iter().map(|&r| radial_basis(beta, radial_degree, r)).collect())
            .collect();
        for l in -(band as i64)..=band as i64 {
            let beta = l.unsigned_abs() as usize;
            let mode = &mut out.modes[(l + band as i64) as usize];
            for (i, ring) in rings.iter().enumerate() {
                let v = ring.get(l) * grid.radial_weights[i];
                for (c, phi) in mode.iter_mut().zip(&basis[beta][i]) {
                    *c += v * *phi;
                }
            }
        }
        let misfit = par::map_range(grid.n_r, |i| {
            let vals = out.ring(grid.radii[i], &grid.angles).w;
            vals.iter()
                .zip(&samples[i * grid.n_theta..(i + 1) * grid.n_theta])
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max)
        });
        Ok((out, misfit.into_iter().fold(0.0, f64::max)))
    }

    /// Exact conversion of a monomial sum.
    pub fn from_monomials(f: &MonomialExpansion, band: usize, radial_degree: usize) -> Result<Self> {
        let mut out = Self::zeros(band, radial_degree);
        let (x, w) = gauss_legendre_on(band + 2 * radial_degree + 4, 0.0, 1.0);
        for ((n, m), a) in f.terms() {
            let l = n as i64 - m as i64;
            let beta = l.unsigned_abs() as usize;
            if beta > band || n.min(m) as usize > radial_degree {
                return Err(Error::arg(format!("term u^{n} ū^{m} outside the expansion space")));
            }
            let mode = &mut out.modes[(l + band as i64) as usize];
            for (&r, &wr) in x.iter().zip(&w) {
                let v = a * (r.powi((n + m) as i32) * r * wr);
                for (c, phi) in mode.iter_mut().zip(radial_basis(beta, radial_degree, r)) {
                    *c += v * phi;
                }
            }
        }
        Ok(out)
    }

    fn radial(&self, l: i64, r: f64) -> Complex64 {
        let beta = l.unsigned_abs() as usize;
        self.mode(l)
            .iter()
            .zip(radial_basis(beta, self.radial_degree, r))
            .map(|(c, phi)| c * phi)
            .sum()
    }

    fn ring_data(&self, s: f64) -> RingData {
        let nq = self.band + self.radial_degree + 4;
        let (x, wx) = gauss_legendre_on(nq, 0.0, 1.0);
        let (y, wy) = gauss_legendre_on(nq, s, 1.0);
        let mut value = Vec::with_capacity(2 * self.band + 1);
        let mut integral = Vec::with_capacity(2 * self.band + 1);
        for l in self.frequencies() {
            value.push(self.radial(l, s));
            let int = if l <= 0 {
                x.iter()
                    .zip(&wx)
                    .map(|(&t, &w)| self.radial(l, s * t) * (w * t.powi((1 - l) as i32)))
                    .sum()
            } else {
                y.iter()
                    .zip(&wy)
                    .map(|(&r, &w)| self.radial(l, r) * (w * r.powi((1 - l) as i32)))
                    .sum()
            };
            integral.push(int);
        }
        RingData { value, integral }
    }

    /// `∫₀¹ r^{1−l} g_l(r) dr` for each `l ≤ 0`, index `l + band`.
    fn moments(&self) -> Vec<Complex64> {
        let (x, w) = gauss_legendre_on(self.band + self.radial_degree + 4, 0.0, 1.0);
        self.frequencies()
            .filter(|&l| l <= 0)
            .map(|l| {
                x.iter()
                    .zip(&w)
                    .map(|(&r, &wr)| self.radial(l, r) * (wr * r.powi((1 - l) as i32)))
                    .sum()
            })
            .collect()
    }

    /// `w`, its Cauchy transform, the `z`-derivative of that, and
    /// `(1 − s²)·Tw` at the points `s e^{iθ}`.
    pub fn ring(&self, s: f64, angles: &[f64]) -> RingValues {
        let d = self.ring_data(s);
        let moments = self.moments();
        let b = self.band as i64;
        let mut rv = RingValues {
            w: Vec::with_capacity(angles.len()),
            cauchy: Vec::with_capacity(angles.len()),
            dz: Vec::with_capacity(angles.len()),
            t_scaled: Vec::with_capacity(angles.len()),
        };
        for &t in angles {
            let e = Complex64::from_polar(1.0, t);
            let (mut w, mut c, mut dz, mut anti) = (Complex64::default(), Complex64::default(), Complex64::default(), Complex64::default());
            // e2 = e^{i(l−2)t}, e1 = e^{i(l−1)t}, e0 = e^{ilt}
            let mut e2 = e.powi((-b - 2) as i32);
            for l in -b..=b {
                let e1 = e2 * e;
                let e0 = e1 * e;
                let i = (l + b) as usize;
                let (g, int) = (d.value[i], d.integral[i]);
                let lf = l as f64;
                w += g * e0;
                if l <= 0 {
                    c += int * e1 * (2.0 * s);
                    dz += (int * (2.0 * (lf - 1.0)) + g) * e2;
                    anti += moments[i] * (e1 * s.powi((1 - l) as i32));
                } else {
                    c -= int * e1 * (2.0 * s.powi((l - 1) as i32));
                    let lead = if l >= 2 { int * (2.0 * (lf - 1.0) * s.powi((l - 2) as i32)) } else { Complex64::default() };
                    dz += (g - lead) * e2;
                }
                e2 = e1;
            }
            rv.w.push(w);
            rv.cauchy.push(c);
            rv.dz.push(dz);
            rv.t_scaled.push(-c * PI + anti * (2.0 * PI));
        }
        rv
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let (s, t) = z.to_polar();
        self.frequencies()
            .map(|l| self.radial(l, s) * Complex64::from_polar(1.0, l as f64 * t))
            .sum()
    }

    /// Cauchy transform at a single point of the closed disk.
    pub fn cauchy_at(&self, z: Complex64) -> Complex64 {
        let (s, t) = z.to_polar();
        self.ring(s, &[t]).cauchy[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::cauchy::{beurling_derivative, cauchy_transform, t_apply_scaled};
    use crate::disk::make_polar_grid;

    #[test]
    fn basis_is_orthonormal() {
        let (x, w) = gauss_legendre_on(60, 0.0, 1.0);
        for beta in [0, 1, 7, 30] {
            let vals: Vec<Vec<f64>> = x.iter().map(|&r| radial_basis(beta, 12, r)).collect();
            for j in 0..=12 {
                for k in 0..=12 {
                    let g: f64 = x.iter().zip(&w).enumerate().map(|(i, (&r, &wi))| wi * r * vals[i][j] * vals[i][k]).sum();
                    let want = if j == k { 1.0 } else { 0.0 };
                    assert!((g - want).abs() < 1e-11, "beta {beta} ({j},{k}) {g}");
                }
            }
        }
    }

    fn sample_expansion() -> MonomialExpansion {
        MonomialExpansion::monomial(0, 0, c64(0.5, 0.0))
            .with_term(1, 0, c64(1.0, -0.5))
            .with_term(0, 2, c64(-0.3, 0.2))
            .with_term(3, 1, c64(0.25, 0.0))
            .with_term(1, 4, c64(0.0, 0.7))
            .with_term(5, 0, c64(0.1, 0.1))
    }

    #[test]
    fn ring_values_match_closed_forms() {
        let f = sample_expansion();
        let p = PolarExpansion::from_monomials(&f, 6, 4).unwrap();
        let angles: Vec<f64> = (0..7).map(|j| -3.0 + j as f64 * 0.9).collect();
        for s in [0.05, 0.3, 0.7, 0.95, 1.0] {
            let rv = p.ring(s, &angles);
            for (j, &t) in angles.iter().enumerate() {
                let z = Complex64::from_polar(s, t);
                assert!((rv.w[j] - f.eval(z)).norm() < 1e-12);
                assert!((rv.cauchy[j] - cauchy_transform(&f, z)).norm() < 1e-12, "C at {z}");
                assert!((rv.dz[j] - beurling_derivative(&f, z)).norm() < 1e-12, "dz at {z}");
                assert!((rv.t_scaled[j] - t_apply_scaled(&f, z)).norm() < 1e-11, "T at {z}");
            }
        }
    }

    #[test]
    fn fit_recovers_expansion() {
        let f = sample_expansion();
        let g = make_polar_grid(24, 32).unwrap();
        let samples = g.sample(|z| f.eval(z));
        let (p, misfit) = PolarExpansion::fit(&samples, &g, 8, 6).unwrap();
        assert!(misfit < 1e-12, "{misfit}");
        let exact = PolarExpansion::from_monomials(&f, 8, 6).unwrap();
        for l in -8..=8 {
            for (a, b) in p.mode(l).iter().zip(exact.mode(l)) {
                assert!((a - b).norm() < 1e-12);
            }
        }
        assert!((p.area_norm_sq() - f.area_norm_sq()).abs() < 1e-12);
        assert!(PolarExpansion::fit(&samples, &g, 8, 8).is_err());
    }
}
