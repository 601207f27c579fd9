use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// Analytic polynomial `Σ a_n zⁿ` with complex coefficients.
///
/// Trailing zero coefficients are allowed in storage; [`AnalyticPoly::degree`]
/// ignores them.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AnalyticPoly {
    coeffs: Vec<Complex64>,
}

impl AnalyticPoly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `c·zⁿ`.
    pub fn monomial(n: usize, c: Complex64) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `zⁿ`, zero past the stored length.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    /// Largest index with a nonzero coefficient; `-1` for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs
            .iter()
            .rposition(|c| c.norm_sqr() != 0.0)
            .map_or(-1, |d| d as isize)
    }

    /// Degree clamped at zero, convenient for sizing buffers.
    pub fn udegree(&self) -> usize {
        self.degree().max(0) as usize
    }

    pub fn is_zero(&self) -> bool {
        self.degree() < 0
    }

    /// Horner evaluation from the highest stored coefficient down.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, &c)| c * n as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(Complex64::new(1.0, 0.0)), |acc, _| &acc * self)
    }

    /// Keep coefficients up to and including degree `n`.
    pub fn truncate(&self, n: usize) -> Self {
        Self::new(self.coeffs.iter().take(n + 1).copied().collect())
    }

    /// Drop trailing zeros.
    pub fn trimmed(&self) -> Self {
        Self::new(self.coeffs[..(self.degree() + 1) as usize].to_vec())
    }

    /// `max_{|z|≤1} |p(z)|` is bounded by this.
    pub fn coeff_l1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }
}

impl Add for &AnalyticPoly {
    type Output = AnalyticPoly;

    fn add(self, rhs: Self) -> AnalyticPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        AnalyticPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &AnalyticPoly {
    type Output = AnalyticPoly;

    fn sub(self, rhs: Self) -> AnalyticPoly {
        self + &(-rhs)
    }
}

impl Neg for &AnalyticPoly {
    type Output = AnalyticPoly;

    fn neg(self) -> AnalyticPoly {
        AnalyticPoly::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl Mul for &AnalyticPoly {
    type Output = AnalyticPoly;

    fn mul(self, rhs: Self) -> AnalyticPoly {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return AnalyticPoly::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        AnalyticPoly::new(out)
    }
}
