//! The matrix `Q` with `QQ* = (CC*)·I − C*C` and `range Q = ker C` for a row
//! `C = (c₁, …, c_n)`.
//!
//! Columns are indexed by pairs `(j, k)`, `j < k`, in lexicographic order.
//! Column `(j, k)` holds `+c_k` in row `j` and `−c_j` in row `k`. Entries are
//! not conjugated, so `z ↦ Q(F(z))` is analytic.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::multiplier::MultiplierTuple;
use crate::AnalyticPoly;

/// Lexicographic column pairs for a row of length `n`.
pub fn column_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
        .collect()
}

pub fn q_matrix(c: &[Complex64]) -> DMatrix<Complex64> {
    let n = c.len();
    let pairs = column_pairs(n);
    let mut q = DMatrix::zeros(n, pairs.len());
    for (col, &(j, k)) in pairs.iter().enumerate() {
        q[(j, col)] = c[k];
        q[(k, col)] = -c[j];
    }
    q
}

pub fn q_of_f(f: &MultiplierTuple, z: Complex64) -> DMatrix<Complex64> {
    q_matrix(&f.eval(z))
}

/// Entrywise `d/dz` of `Q(F(z))`: the same pattern filled with `±f_j′(z)`.
pub fn q_derivative(f: &MultiplierTuple, z: Complex64) -> DMatrix<Complex64> {
    q_matrix(&f.derivative().eval(z))
}

/// `Q` as a matrix of polynomials, for building `M_Q`.
pub fn q_poly_entries(f: &MultiplierTuple) -> Vec<Vec<AnalyticPoly>> {
    let n = f.len();
    let pairs = column_pairs(n);
    let mut rows = vec![vec![AnalyticPoly::zero(); pairs.len()]; n];
    for (col, &(j, k)) in pairs.iter().enumerate() {
        rows[j][col] = f.polys()[k].clone();
        rows[k][col] = -&f.polys()[j];
    }
    rows
}

/// `‖QQ* − (‖C‖²I − C*C)‖` in the Frobenius norm (which dominates the operator norm).
pub fn identity_defect(c: &[Complex64]) -> f64 {
    let q = q_matrix(c);
    let row = DMatrix::from_row_slice(1, c.len(), c);
    let cc: f64 = c.iter().map(|x| x.norm_sqr()).sum();
    let rhs = DMatrix::identity(c.len(), c.len()) * Complex64::new(cc, 0.0) - row.adjoint() * &row;
    (&q * q.adjoint() - rhs).norm()
}
