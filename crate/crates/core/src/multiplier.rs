//! Truncated matrices of multiplication operators on `𝓓` in the orthonormal
//! basis `e_n = zⁿ/√(n+1)`, and their norms.
//!
//! Compressions to polynomials of degree `≤ N` never increase the norm, so
//! every value computed here is a lower bound for the true operator norm.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{AnalyticPoly, Error, Result};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const MAX_POWER_ITERATIONS: usize = 100_000;

/// `M_φ` compressed to polynomials of degree `≤ N`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub degree: usize,
    pub entries: DMatrix<Complex64>,
}

/// Finite row `F = (f₁, …, f_n)` of multipliers.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierTuple {
    polys: Vec<AnalyticPoly>,
}

impl MultiplierTuple {
    pub fn new(polys: Vec<AnalyticPoly>) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::arg("a multiplier tuple needs at least one entry"));
        }
        Ok(Self { polys })
    }

    pub fn polys(&self) -> &[AnalyticPoly] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn max_degree(&self) -> usize {
        self.polys.iter().map(AnalyticPoly::udegree).max().unwrap_or(0)
    }

    pub fn eval(&self, z: Complex64) -> Vec<Complex64> {
        self.polys.iter().map(|p| p.eval(z)).collect()
    }

    /// `F(z)F(z)* = Σ |f_j(z)|²`.
    pub fn norm_sqr_at(&self, z: Complex64) -> f64 {
        self.polys.iter().map(|p| p.eval(z).norm_sqr()).sum()
    }

    pub fn derivative(&self) -> Self {
        Self {
            polys: self.polys.iter().map(AnalyticPoly::derivative).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            polys: self
                .polys
                .iter()
                .map(|p| p.scale(Complex64::new(s, 0.0)))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.polys.iter().all(AnalyticPoly::is_zero)
    }
}

/// Matrix with entries `φ_{m−n} √((m+1)/(n+1))` for `0 ≤ m−n ≤ deg φ`.
pub fn mult_matrix(phi: &AnalyticPoly, n: usize) -> Result<OperatorMatrix> {
    if phi.degree() > n as isize {
        return Err(Error::arg(format!(
            "truncation degree {n} is below deg φ = {}",
            phi.degree()
        )));
    }
    Ok(OperatorMatrix {
        degree: n,
        entries: mult_block(phi, n),
    })
}

fn mult_block(phi: &AnalyticPoly, n: usize) -> DMatrix<Complex64> {
    let d = phi.udegree();
    DMatrix::from_fn(n + 1, n + 1, |m, k| {
        if m >= k && m - k <= d {
            phi.coeff(m - k) * (((m + 1) as f64) / ((k + 1) as f64)).sqrt()
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Block matrix `[M_{φ_ij}]` acting `⊕^cols 𝓓 → ⊕^rows 𝓓`.
pub fn block_mult_matrix(entries: &[Vec<AnalyticPoly>], n: usize) -> Result<DMatrix<Complex64>> {
    let rows = entries.len();
    let cols = entries.first().map_or(0, Vec::len);
    if entries.iter().any(|r| r.len() != cols) {
        return Err(Error::arg("ragged block matrix"));
    }
    let size = n + 1;
    let mut out = DMatrix::zeros(rows * size, cols * size);
    for (i, row) in entries.iter().enumerate() {
        for (j, phi) in row.iter().enumerate() {
            let b = mult_matrix(phi, n)?.entries;
            out.view_mut((i * size, j * size), (size, size)).copy_from(&b);
        }
    }
    Ok(out)
}

/// Largest singular value by power iteration on `A*A` from the normalised
/// all-ones vector.
pub fn op_norm(a: &DMatrix<Complex64>, tol: f64) -> Result<f64> {
    if tol <= 0.0 {
        return Err(Error::arg("tolerance must be positive"));
    }
    if a.ncols() == 0 || a.nrows() == 0 {
        return Ok(0.0);
    }
    let mut x = DVector::from_element(a.ncols(), Complex64::new(1.0 / (a.ncols() as f64).sqrt(), 0.0));
    let mut sigma = 0.0;
    for it in 0..MAX_POWER_ITERATIONS {
        let y = a * &x;
        let next = y.norm();
        if next == 0.0 {
            return Ok(0.0);
        }
        let z = a.ad_mul(&y);
        let zn = z.norm();
        if zn == 0.0 {
            return Ok(next);
        }
        x = z / Complex64::new(zn, 0.0);
        if it > 0 && (next - sigma).abs() <= tol * next {
            return Ok(next);
        }
        sigma = next;
    }
    Err(Error::NonConvergence {
        estimate: sigma,
        iterations: MAX_POWER_ITERATIONS,
    })
}

impl OperatorMatrix {
    pub fn norm(&self, tol: f64) -> Result<f64> {
        op_norm(&self.entries, tol)
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let x = DVector::from_column_slice(v);
        (&self.entries * x).iter().copied().collect()
    }
}

/// `‖M_F^C‖`: norm of the stacked matrix `[M_{f₁}; …; M_{f_n}]`.
pub fn column_norm(f: &MultiplierTuple, n: usize, tol: f64) -> Result<f64> {
    let entries: Vec<Vec<AnalyticPoly>> = f.polys().iter().map(|p| vec![p.clone()]).collect();
    op_norm(&block_mult_matrix(&entries, n)?, tol)
}

/// `‖M_F^R‖`: norm of the concatenated matrix `[M_{f₁} … M_{f_n}]`.
pub fn row_norm(f: &MultiplierTuple, n: usize, tol: f64) -> Result<f64> {
    op_norm(&block_mult_matrix(&[f.polys().to_vec()], n)?, tol)
}

/// Relative defect of `M_φ* k_z = φ(z)̄ k_z` on the degree-`N` kernel truncation.
pub fn adjoint_kernel_defect(phi: &AnalyticPoly, z: Complex64, n: usize) -> f64 {
    let n = n.max(phi.udegree());
    let m = mult_block(phi, n);
    let k = DVector::from_vec(crate::dirichlet::kernel_coords(z, n));
    let lhs = m.ad_mul(&k);
    let rhs = &k * phi.eval(z).conj();
    (lhs - rhs).norm() / k.norm()
}

/// Smallest eigenvalue of `K²·R R* − M_{H³} M_{H³}*` at truncation `N`, with
/// `R` the row matrix of `F`. Nonnegative values certify the operator
/// inequality at that truncation.
pub fn positivity_gap(f: &MultiplierTuple, h: &AnalyticPoly, k: f64, n: usize) -> Result<f64> {
    let h3 = h.pow(3);
    let r = block_mult_matrix(&[f.polys().to_vec()], n)?;
    let m = mult_matrix(&h3, n)?.entries;
    let mut g = (&r * r.adjoint()) * Complex64::new(k * k, 0.0) - &m * m.adjoint();
    // symmetrise away rounding before the Hermitian solver
    g = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = g.symmetric_eigen();
    Ok(eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min))
}
