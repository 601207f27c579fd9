//! Quadrature on the unit disk and circle, discrete Fourier analysis on the
//! circle, and disk automorphisms.
//!
//! Area measure `dA` is Lebesgue measure (total mass π). Arc measure `dσ` is
//! normalised, `dt/2π`, so that the constant 1 has unit mass.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{AnalyticPoly, Error, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "gauss_legendre needs at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    (
        x.iter().map(|&t| mid + half * t).collect(),
        w.iter().map(|&v| v * half).collect(),
    )
}

/// Tensor-product polar rule on the open unit disk.
///
/// Nodes are stored ring by ring: node `i·n_theta + j` sits at radius
/// `radii[i]` and angle `angles[j]`.
#[derive(Debug, Clone)]
pub struct DiskGrid {
    pub n_r: usize,
    pub n_theta: usize,
    pub radii: Vec<f64>,
    /// Gauss–Legendre weight times the Jacobian `r`, so `Σ radial_weights = 1/2`.
    pub radial_weights: Vec<f64>,
    pub angles: Vec<f64>,
    pub nodes: Vec<Complex64>,
    pub weights: Vec<f64>,
}

impl DiskGrid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The circle `|z| = radii[ring]` as a boundary grid with the same angles.
    pub fn ring(&self, ring: usize) -> &[Complex64] {
        &self.nodes[ring * self.n_theta..(ring + 1) * self.n_theta]
    }

    pub fn boundary(&self) -> BoundaryGrid {
        BoundaryGrid::new(self.n_theta).expect("disk grid has n_theta >= 4")
    }

    /// Evaluate `f` at every node, in node order.
    pub fn sample<F>(&self, f: F) -> Vec<Complex64>
    where
        F: Fn(Complex64) -> Complex64,
    {
        self.nodes.iter().map(|&z| f(z)).collect()
    }

    /// Weighted sum of a real-valued quantity over the nodes.
    pub fn integrate_real(&self, samples: &[f64]) -> f64 {
        debug_assert_eq!(samples.len(), self.len());
        pairwise_sum(
            &samples
                .iter()
                .zip(&self.weights)
                .map(|(s, w)| s * w)
                .collect::<Vec<_>>(),
        )
    }
}

/// Gauss–Legendre in `r` (Jacobian folded in) times the trapezoid rule in θ.
pub fn make_polar_grid(n_r: usize, n_theta: usize) -> Result<DiskGrid> {
    if n_r < 2 || n_theta < 4 {
        return Err(Error::arg(format!(
            "polar grid needs n_r >= 2 and n_theta >= 4, got {n_r}x{n_theta}"
        )));
    }
    let (r, w) = gauss_legendre_on(n_r, 0.0, 1.0);
    let radial_weights: Vec<f64> = r.iter().zip(&w).map(|(r, w)| r * w).collect();
    let angles = equispaced_angles(n_theta);
    let dtheta = 2.0 * PI / n_theta as f64;
    let mut nodes = Vec::with_capacity(n_r * n_theta);
    let mut weights = Vec::with_capacity(n_r * n_theta);
    for (ri, rw) in r.iter().zip(&radial_weights) {
        for &t in &angles {
            nodes.push(Complex64::from_polar(*ri, t));
            weights.push(rw * dtheta);
        }
    }
    Ok(DiskGrid {
        n_r,
        n_theta,
        radii: r,
        radial_weights,
        angles,
        nodes,
        weights,
    })
}

fn equispaced_angles(n: usize) -> Vec<f64> {
    (0..n).map(|j| -PI + 2.0 * PI * j as f64 / n as f64).collect()
}

/// Equispaced nodes `θ_j = −π + 2πj/n` on the unit circle, each with mass `1/n`.
#[derive(Debug, Clone)]
pub struct BoundaryGrid {
    pub n_theta: usize,
    pub angles: Vec<f64>,
}

impl BoundaryGrid {
    pub fn new(n_theta: usize) -> Result<Self> {
        if n_theta < 1 {
            return Err(Error::arg("boundary grid needs at least one node"));
        }
        Ok(Self {
            n_theta,
            angles: equispaced_angles(n_theta),
        })
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.n_theta as f64
    }

    /// Points `r·e^{iθ_j}` on the circle of radius `r`.
    pub fn points(&self, r: f64) -> Vec<Complex64> {
        self.angles
            .iter()
            .map(|&t| Complex64::from_polar(r, t))
            .collect()
    }

    pub fn sample<F>(&self, r: f64, f: F) -> Vec<Complex64>
    where
        F: Fn(Complex64) -> Complex64,
    {
        self.points(r).into_iter().map(f).collect()
    }
}

/// Two-sided Fourier data `f̂(n)` for `n ∈ [−M, M]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFunction {
    band: usize,
    coeffs: Vec<Complex64>,
}

impl BoundaryFunction {
    pub fn zeros(band: usize) -> Self {
        Self {
            band,
            coeffs: vec![Complex64::new(0.0, 0.0); 2 * band + 1],
        }
    }

    /// Build from `(n, f̂(n))` pairs; the band is the largest `|n|` given.
    pub fn from_pairs(pairs: &[(i64, Complex64)]) -> Self {
        let band = pairs.iter().map(|(n, _)| n.unsigned_abs() as usize).max().unwrap_or(0);
        let mut f = Self::zeros(band);
        for &(n, c) in pairs {
            *f.get_mut(n) += c;
        }
        f
    }

    pub fn band(&self) -> usize {
        self.band
    }

    pub fn get(&self, n: i64) -> Complex64 {
        if n.unsigned_abs() as usize > self.band {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[(n + self.band as i64) as usize]
    }

    pub fn get_mut(&mut self, n: i64) -> &mut Complex64 {
        assert!(n.unsigned_abs() as usize <= self.band, "frequency out of band");
        &mut self.coeffs[(n + self.band as i64) as usize]
    }

    /// `(n, f̂(n))` in ascending frequency order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let b = self.band as i64;
        self.coeffs.iter().enumerate().map(move |(i, &c)| (i as i64 - b, c))
    }

    /// `Σ f̂(n) e^{int}`.
    pub fn eval(&self, t: f64) -> Complex64 {
        self.iter()
            .map(|(n, c)| c * Complex64::from_polar(1.0, n as f64 * t))
            .sum()
    }

    pub fn sample(&self, grid: &BoundaryGrid) -> Vec<Complex64> {
        grid.angles.iter().map(|&t| self.eval(t)).collect()
    }

    /// The function restricted to nonnegative frequencies, as a polynomial.
    pub fn analytic_part(&self) -> AnalyticPoly {
        AnalyticPoly::new((0..=self.band as i64).map(|n| self.get(n)).collect())
    }
}

/// Accumulate in a fixed pairwise order.
pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub(crate) fn pairwise_sum_c(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum_c(&xs[..mid]) + pairwise_sum_c(&xs[mid..])
}

pub fn integrate_disk(samples: &[Complex64], grid: &DiskGrid) -> Result<Complex64> {
    if samples.len() != grid.len() {
        return Err(Error::arg(format!(
            "expected {} disk samples, got {}",
            grid.len(),
            samples.len()
        )));
    }
    let terms: Vec<Complex64> = samples
        .iter()
        .zip(&grid.weights)
        .map(|(s, w)| s * *w)
        .collect();
    Ok(pairwise_sum_c(&terms))
}

/// Mean of the samples, i.e. integration against normalised `dσ`.
pub fn integrate_boundary(samples: &[Complex64], grid: &BoundaryGrid) -> Result<Complex64> {
    if samples.len() != grid.n_theta {
        return Err(Error::arg(format!(
            "expected {} boundary samples, got {}",
            grid.n_theta,
            samples.len()
        )));
    }
    Ok(pairwise_sum_c(samples) * grid.weight())
}

/// Precomputed DFT on `n` equispaced angles starting at −π.
#[derive(Debug, Clone)]
pub struct Dft {
    n: usize,
    twiddle: Vec<Complex64>,
}

impl Dft {
    pub fn new(n: usize) -> Self {
        let twiddle = (0..n)
            .map(|k| Complex64::from_polar(1.0, -2.0 * PI * k as f64 / n as f64))
            .collect();
        Self { n, twiddle }
    }

    /// `(1/n) Σ_j s_j e^{−ikθ_j}` for a single frequency `k`.
    pub fn coeff(&self, samples: &[Complex64], k: i64) -> Complex64 {
        let n = self.n as i64;
        // e^{−ik(−π)} = (−1)^k
        let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let kk = k.rem_euclid(n);
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, s) in samples.iter().enumerate() {
            let idx = ((kk * j as i64) % n) as usize;
            acc += s * self.twiddle[idx];
        }
        acc * (sign / self.n as f64)
    }

    pub fn coeffs(&self, samples: &[Complex64], band: usize) -> BoundaryFunction {
        let mut f = BoundaryFunction::zeros(band);
        for k in -(band as i64)..=band as i64 {
            *f.get_mut(k) = self.coeff(samples, k);
        }
        f
    }
}

/// Fourier coefficients `f̂(n)`, `|n| ≤ M`, of samples on the boundary grid.
pub fn fourier_coeffs(samples: &[Complex64], m: usize) -> Result<BoundaryFunction> {
    let n = samples.len();
    if 2 * m + 1 > n {
        return Err(Error::arg(format!(
            "band {m} needs at least {} samples, got {n}",
            2 * m + 1
        )));
    }
    Ok(Dft::new(n).coeffs(samples, m))
}

/// The involutive disk automorphism `β(z) = (a − z)/(1 − āz)`.
pub fn mobius(a: Complex64, z: Complex64) -> Result<Complex64> {
    if a.norm() >= 1.0 {
        return Err(Error::arg(format!("Möbius parameter |a| = {} must be < 1", a.norm())));
    }
    Ok((a - z) / (1.0 - a.conj() * z))
}

/// Taylor coefficients of `p∘β` up to degree `n_out`, read off from samples on
/// the unit circle.
pub fn compose_poly_mobius(p: &AnalyticPoly, a: Complex64, n_out: usize) -> Result<AnalyticPoly> {
    if a.norm() >= 1.0 {
        return Err(Error::arg(format!("Möbius parameter |a| = {} must be < 1", a.norm())));
    }
    let n_samples = (4 * (n_out + 1)).max(1024).next_power_of_two();
    let grid = BoundaryGrid::new(n_samples)?;
    let samples: Vec<Complex64> = grid
        .points(1.0)
        .into_iter()
        .map(|z| p.eval((a - z) / (1.0 - a.conj() * z)))
        .collect();
    let dft = Dft::new(n_samples);
    Ok(AnalyticPoly::new(
        (0..=n_out as i64).map(|k| dft.coeff(&samples, k)).collect(),
    ))
}
