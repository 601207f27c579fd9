//! The ∂̄-corrected solution of `F·u = H³h`:
//!
//! ```text
//! u = F* H³h / (FF*) − Q · C[w],    w = Q* F′* H³h / (FF*)²
//! ```
//!
//! where `C` is the Cauchy transform. Since `∂̄(F*/(FF*)) = QQ* F′*/(FF*)²`
//! and `Q` is analytic, `∂̄u = 0`; since `FQ = 0`, `F·u = H³h` pointwise.
//!
//! `w` is sampled on a polar grid and fitted per angular frequency
//! ([`PolarExpansion`]); `u` is then evaluated on a circle `|z| = r_rec` and
//! its Taylor coefficients are read off by a DFT.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cauchy::polar::PolarExpansion;
use crate::disk::{compose_poly_mobius, make_polar_grid, BoundaryGrid, Dft, DiskGrid};
use crate::koszul::{column_pairs, q_matrix};
use crate::multiplier::{column_norm, mult_matrix, MultiplierTuple, DEFAULT_TOL};
use crate::{par, AnalyticPoly, Error, Result};

/// Truncation used for operator norms of multipliers.
pub const NORM_TRUNCATION: usize = 64;

/// Circles on which negative-frequency mass of `u` is measured.
pub const DEFECT_RADII: [f64; 3] = [0.5, 0.7, 0.9];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    pub n_r: usize,
    pub n_theta: usize,
    /// Angular band of the fit of `w` and the Taylor degree of the recovered `u`.
    pub degree: usize,
    pub tol: f64,
    pub r_rec: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            n_r: 128,
            n_theta: 256,
            degree: 48,
            tol: 1e-6,
            r_rec: 0.9,
        }
    }
}

impl SolverSettings {
    /// Radial degree of the fit; the Gauss–Legendre rule must integrate
    /// products of basis functions exactly.
    pub fn radial_degree(&self) -> usize {
        self.degree.min(self.n_r.saturating_sub(self.degree + 1) / 2)
    }

    /// Points on each recovery circle.
    pub fn circle_points(&self) -> usize {
        (4 * (self.degree + 1)).max(256).next_power_of_two()
    }

    fn check(&self) -> Result<()> {
        if self.degree == 0 {
            return Err(Error::arg("degree must be positive"));
        }
        if self.degree + 1 >= self.n_r || 2 * self.degree >= self.n_theta {
            return Err(Error::Refinement(format!(
                "degree {} does not fit a {}x{} grid; raise the grid sizes or lower the degree",
                self.degree, self.n_r, self.n_theta
            )));
        }
        if !(self.r_rec > 0.0 && self.r_rec < 1.0) {
            return Err(Error::arg(format!("recovery radius {} must lie in (0,1)", self.r_rec)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::arg("tolerance must be positive"));
        }
        Ok(())
    }
}

/// Data of `F·u = H³h`: generators `F`, the dominated function `H`, the
/// factor `h`, and a lower bound `delta` for `FF*` on the closed disk.
#[derive(Debug, Clone)]
pub struct WolffProblem {
    pub generators: MultiplierTuple,
    pub dominated: AnalyticPoly,
    pub factor: AnalyticPoly,
    pub delta: f64,
    pub settings: SolverSettings,
}

impl WolffProblem {
    pub fn new(generators: MultiplierTuple, dominated: AnalyticPoly, factor: AnalyticPoly, delta: f64) -> Self {
        Self {
            generators,
            dominated,
            factor,
            delta,
            settings: SolverSettings::default(),
        }
    }

    pub fn with_settings(mut self, settings: SolverSettings) -> Self {
        self.settings = settings;
        self
    }

    /// `H³h`
    pub fn target(&self) -> AnalyticPoly {
        &self.dominated.pow(3) * &self.factor
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    /// `min FF*` over the grid and where it occurs.
    pub min_norm_sq: f64,
    pub min_norm_sq_at: Complex64,
    /// `min (FF* − |H|²)` over the grid and where it occurs.
    pub domination_margin: f64,
    pub domination_at: Complex64,
    pub column_norm: f64,
    pub delta_margin: f64,
}

/// Disk nodes followed by the boundary circle.
fn closed_disk_points(grid: &DiskGrid) -> Vec<Complex64> {
    let mut pts = grid.nodes.clone();
    pts.extend(grid.boundary().points(1.0));
    pts
}

fn hypothesis(name: &'static str, z: Complex64, margin: f64) -> Error {
    Error::Hypothesis {
        hypothesis: name,
        re: z.re,
        im: z.im,
        margin,
    }
}

/// Checks `|H|² ≤ FF*`, `FF* ≥ delta` and `‖M_F^C‖ ≤ 1` on the problem grid,
/// in that order.
pub fn validate_problem(p: &WolffProblem) -> Result<ValidationReport> {
    p.settings.check()?;
    if !(p.delta > 0.0) {
        return Err(Error::arg(format!("delta must be positive, got {}", p.delta)));
    }
    let grid = make_polar_grid(p.settings.n_r, p.settings.n_theta)?;
    let pts = closed_disk_points(&grid);
    let vals = par::map(&pts, |&z| (p.generators.norm_sqr_at(z), p.dominated.eval(z).norm_sqr()));
    let (mut min_ff, mut min_ff_at) = (f64::INFINITY, Complex64::default());
    let (mut dom, mut dom_at) = (f64::INFINITY, Complex64::default());
    for (&z, &(ff, hh)) in pts.iter().zip(&vals) {
        if ff < min_ff {
            min_ff = ff;
            min_ff_at = z;
        }
        // relative slack absorbs rounding in the equality case |H|² = FF*
        let margin = ff * (1.0 + 1e-12) + 1e-300 - hh;
        if margin < dom {
            dom = margin;
            dom_at = z;
        }
    }
    if dom < 0.0 {
        return Err(hypothesis("b", dom_at, dom));
    }
    if min_ff < p.delta {
        return Err(hypothesis("delta", min_ff_at, min_ff - p.delta));
    }
    let n = NORM_TRUNCATION.max(p.generators.max_degree());
    let col = column_norm(&p.generators, n, DEFAULT_TOL)?;
    if col > 1.0 + 1e-8 {
        return Err(hypothesis("a", Complex64::default(), 1.0 - col));
    }
    Ok(ValidationReport {
        min_norm_sq: min_ff,
        min_norm_sq_at: min_ff_at,
        domination_margin: dom,
        domination_at: dom_at,
        column_norm: col,
        delta_margin: min_ff - p.delta,
    })
}

/// `√(144·mh² + 73104)`
pub fn norm_bound_k(mh: f64) -> f64 {
    (144.0 * mh * mh + 73104.0).sqrt()
}

/// Truncated estimate of `‖M_H‖`.
pub fn multiplier_norm(h: &AnalyticPoly) -> Result<f64> {
    mult_matrix(h, NORM_TRUNCATION.max(h.udegree()))?.norm(DEFAULT_TOL)
}

/// Moves a zero of `H` away from the origin by precomposing with
/// `β(z) = (a − z)/(1 − āz)`, `a` the node of `grid` with `|a| ≤ ½` where
/// `|H|` is largest (first such node on ties). Returns the data unchanged and
/// `a = 0` when `H(0) ≠ 0`.
pub fn normalize_origin(
    generators: &MultiplierTuple,
    dominated: &AnalyticPoly,
    grid: &DiskGrid,
) -> Result<(MultiplierTuple, AnalyticPoly, Complex64)> {
    if dominated.is_zero() {
        return Err(Error::Rejected("H is identically zero; G = 0 solves the problem".into()));
    }
    if dominated.coeff(0).norm() > 0.0 {
        return Ok((generators.clone(), dominated.clone(), Complex64::default()));
    }
    let mut best = (f64::NEG_INFINITY, Complex64::default());
    for &z in grid.nodes.iter().filter(|z| z.norm() <= 0.5) {
        let v = dominated.eval(z).norm();
        if v > best.0 {
            best = (v, z);
        }
    }
    let a = best.1;
    let deg = generators.max_degree().max(dominated.udegree());
    // |a| ≤ ½ keeps the Taylor tail of the composition below rounding by this degree
    let n_out = 60 + 4 * deg;
    let f = MultiplierTuple::new(
        generators
            .polys()
            .iter()
            .map(|p| compose_poly_mobius(p, a, n_out).map(|q| q.trimmed()))
            .collect::<Result<_>>()?,
    )?;
    let h = compose_poly_mobius(dominated, a, n_out)?.trimmed();
    Ok((f, h, a))
}

/// Pointwise data of the construction at one point.
#[derive(Debug, Clone)]
pub struct PointData {
    pub z: Complex64,
    /// `F(z)` and `F′(z)`
    pub f: Vec<Complex64>,
    pub df: Vec<Complex64>,
    /// `H(z)³h(z)`
    pub target: Complex64,
    /// `F(z)F(z)*`
    pub norm_sq: f64,
    /// `C[w](z)`, one entry per column of `Q`
    pub w_hat: Vec<Complex64>,
    /// `∂_z C[w](z)`
    pub w_hat_dz: Vec<Complex64>,
    /// `(1 − |z|²)·T[w](z)`
    pub t_scaled: Vec<Complex64>,
    /// `u(z)`
    pub u: Vec<Complex64>,
}

impl PointData {
    pub fn q(&self) -> DMatrix<Complex64> {
        q_matrix(&self.f)
    }

    pub fn dq(&self) -> DMatrix<Complex64> {
        q_matrix(&self.df)
    }
}

/// The sampled `w`, its fit and the machinery to evaluate `u`.
#[derive(Debug, Clone)]
pub struct Construction {
    pub problem: WolffProblem,
    pub grid: DiskGrid,
    /// `w` at the grid nodes, one vector per column of `Q`
    pub w_samples: Vec<Vec<Complex64>>,
    pub w_fit: Vec<PolarExpansion>,
    /// Largest pointwise misfit of the fit.
    pub fit_residual: f64,
    /// Largest `|w|` on the grid.
    pub w_max: f64,
    target: AnalyticPoly,
    derivative: MultiplierTuple,
}

fn w_at(f: &[Complex64], df: &[Complex64], target: Complex64, ff: f64) -> Vec<Complex64> {
    let n = f.len();
    // (Q* F′*)_p for column p = (j,k): conj(f_k)·conj(f_j′) − conj(f_j)·conj(f_k′)
    let scale = target / (ff * ff);
    column_pairs(n)
        .into_iter()
        .map(|(j, k)| (f[k] * df[j] - f[j] * df[k]).conj() * scale)
        .collect()
}

impl Construction {
    pub fn new(problem: &WolffProblem) -> Result<Self> {
        let s = problem.settings;
        s.check()?;
        let grid = make_polar_grid(s.n_r, s.n_theta)?;
        let target = problem.target();
        let derivative = problem.generators.derivative();
        let n = problem.generators.len();
        let cols = column_pairs(n).len();
        let per_node = par::map(&grid.nodes, |&z| {
            let f = problem.generators.eval(z);
            let ff: f64 = f.iter().map(|v| v.norm_sqr()).sum();
            (w_at(&f, &derivative.eval(z), target.eval(z), ff), ff)
        });
        for (&z, (_, ff)) in grid.nodes.iter().zip(&per_node) {
            if *ff < problem.delta {
                return Err(hypothesis("delta", z, ff - problem.delta));
            }
        }
        let w_samples: Vec<Vec<Complex64>> = (0..cols)
            .map(|p| per_node.iter().map(|(w, _)| w[p]).collect())
            .collect();
        let w_max = w_samples.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
        let mut w_fit = Vec::with_capacity(cols);
        let mut fit_residual: f64 = 0.0;
        for samples in &w_samples {
            let (fit, misfit) = PolarExpansion::fit(samples, &grid, s.degree, s.radial_degree())?;
            fit_residual = fit_residual.max(misfit);
            w_fit.push(fit);
        }
        if fit_residual > s.tol * w_max.max(1.0) {
            return Err(Error::Refinement(format!(
                "fit of w misses by {fit_residual:e} (max |w| = {w_max:e}); raise the degree or the grid"
            )));
        }
        Ok(Self {
            problem: problem.clone(),
            grid,
            w_samples,
            w_fit,
            fit_residual,
            w_max,
            target,
            derivative,
        })
    }

    /// Everything the construction knows at the points `r·e^{iθ}`.
    pub fn ring(&self, r: f64, angles: &[f64]) -> Vec<PointData> {
        let rings: Vec<_> = self.w_fit.iter().map(|p| p.ring(r, angles)).collect();
        angles
            .iter()
            .enumerate()
            .map(|(j, &t)| {
                let z = Complex64::from_polar(r, t);
                let f = self.problem.generators.eval(z);
                let df = self.derivative.eval(z);
                let target = self.target.eval(z);
                let norm_sq: f64 = f.iter().map(|v| v.norm_sqr()).sum();
                let w_hat: Vec<Complex64> = rings.iter().map(|rv| rv.cauchy[j]).collect();
                let w_hat_dz = rings.iter().map(|rv| rv.dz[j]).collect();
                let t_scaled = rings.iter().map(|rv| rv.t_scaled[j]).collect();
                let mut u: Vec<Complex64> = f.iter().map(|fj| fj.conj() * target / norm_sq).collect();
                for (col, &(a, b)) in column_pairs(f.len()).iter().enumerate() {
                    u[a] -= f[b] * w_hat[col];
                    u[b] += f[a] * w_hat[col];
                }
                PointData {
                    z,
                    f,
                    df,
                    target,
                    norm_sq,
                    w_hat,
                    w_hat_dz,
                    t_scaled,
                    u,
                }
            })
            .collect()
    }

    /// [`Self::ring`] at every ring of the problem grid, in node order.
    pub fn on_grid(&self) -> Vec<PointData> {
        let rings = par::map(&self.grid.radii, |&r| self.ring(r, &self.grid.angles));
        rings.into_iter().flatten().collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WolffSolution {
    /// Taylor coefficients of each component of `u`, degree ≤ N.
    pub u: Vec<AnalyticPoly>,
    /// `max |F·u − H³h|` over the closed-disk grid, with `u` the recovered polynomials.
    pub residual: f64,
    /// Largest negative-frequency mass of a component of `u` on the defect circles.
    pub analyticity_defect: f64,
    /// `‖u‖_𝓓 / ‖h‖_𝓓` in the norm `∫|·|²dσ + ∫|·′|²dA`.
    pub norm_ratio: f64,
    pub fit_residual: f64,
    /// `max |F·u − H³h|` at the recovery circle before truncation.
    pub pointwise_residual: f64,
    /// Sup-norm bound on the unit circle of the Taylor terms beyond N.
    pub recovery_tail: f64,
}

impl WolffSolution {
    pub fn passes(&self, tol: f64, k_bound: f64) -> bool {
        self.residual <= tol && self.analyticity_defect <= 10.0 * tol && self.norm_ratio <= k_bound
    }
}

/// `∫|p|²dσ + ∫|p′|²dA = Σ (1 + πn)|a_n|²`
pub fn integral_norm_sq(p: &AnalyticPoly) -> f64 {
    p.coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| (1.0 + PI * n as f64) * c.norm_sqr())
        .sum()
}

/// `(ĉ_n)_{|n| < M/2}` of each component on the circle `|z| = r`.
fn circle_spectra(c: &Construction, r: f64, m: usize) -> Vec<Vec<Complex64>> {
    let bg = BoundaryGrid::new(m).expect("circle has at least 256 points");
    let pts = c.ring(r, &bg.angles);
    let dft = Dft::new(m);
    let half = (m / 2 - 1) as i64;
    (0..c.problem.generators.len())
        .map(|j| {
            let samples: Vec<Complex64> = pts.iter().map(|p| p.u[j]).collect();
            (-half..=half).map(|k| dft.coeff(&samples, k)).collect()
        })
        .collect()
}

/// Builds `u` for the problem and recovers its Taylor coefficients.
pub fn solve_uh(p: &WolffProblem) -> Result<WolffSolution> {
    validate_problem(p)?;
    let c = Construction::new(p)?;
    let s = p.settings;
    let m = s.circle_points();
    let half = m / 2 - 1;

    let bg = BoundaryGrid::new(m)?;
    let rec = c.ring(s.r_rec, &bg.angles);
    let pointwise_residual = rec
        .iter()
        .map(|d| (d.f.iter().zip(&d.u).map(|(a, b)| a * b).sum::<Complex64>() - d.target).norm())
        .fold(0.0, f64::max);

    let spectra = circle_spectra(&c, s.r_rec, m);
    let mut u = Vec::with_capacity(spectra.len());
    let mut recovery_tail: f64 = 0.0;
    for spec in &spectra {
        let coeff = |n: usize| spec[half + n] / s.r_rec.powi(n as i32);
        u.push(AnalyticPoly::new((0..=s.degree).map(coeff).collect()));
        let tail: f64 = (s.degree + 1..=half).map(|n| coeff(n).norm()).sum();
        recovery_tail = recovery_tail.max(tail);
    }

    let mut analyticity_defect: f64 = 0.0;
    for &r in &DEFECT_RADII {
        for spec in circle_spectra(&c, r, m) {
            analyticity_defect = analyticity_defect.max(spec[..half].iter().map(|v| v.norm()).sum());
        }
    }

    let pts = closed_disk_points(&c.grid);
    let target = p.target();
    let residual = par::map(&pts, |&z| {
        let fu: Complex64 = p.generators.polys().iter().zip(&u).map(|(f, g)| f.eval(z) * g.eval(z)).sum();
        (fu - target.eval(z)).norm()
    })
    .into_iter()
    .fold(0.0, f64::max);

    let h_norm = integral_norm_sq(&p.factor).sqrt();
    let u_norm = u.iter().map(integral_norm_sq).sum::<f64>().sqrt();
    let norm_ratio = if h_norm > 0.0 { u_norm / h_norm } else { 0.0 };

    Ok(WolffSolution {
        u,
        residual,
        analyticity_defect,
        norm_ratio,
        fit_residual: c.fit_residual,
        pointwise_residual,
        recovery_tail,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdealSolution {
    /// `G` with `F·Gᵀ = H³`.
    pub g: Vec<AnalyticPoly>,
    pub solution: Option<WolffSolution>,
    pub column_norm_g: f64,
    /// Truncated estimate of `‖M_H‖` and the resulting `K`.
    pub mh: f64,
    pub k_bound: f64,
}

/// Solves `F·Gᵀ = H³` by taking `h = 1`.
pub fn solve_ideal(
    generators: &MultiplierTuple,
    dominated: &AnalyticPoly,
    delta: f64,
    settings: SolverSettings,
) -> Result<IdealSolution> {
    let mh = multiplier_norm(dominated)?;
    let k_bound = norm_bound_k(mh);
    if dominated.is_zero() {
        return Ok(IdealSolution {
            g: vec![AnalyticPoly::zero(); generators.len()],
            solution: None,
            column_norm_g: 0.0,
            mh,
            k_bound,
        });
    }
    let problem = WolffProblem::new(generators.clone(), dominated.clone(), AnalyticPoly::constant(Complex64::new(1.0, 0.0)), delta)
        .with_settings(settings);
    let sol = solve_uh(&problem)?;
    let g: Vec<AnalyticPoly> = sol.u.iter().map(|p| p.trimmed()).collect();
    let g_tuple = MultiplierTuple::new(g.iter().map(|p| if p.is_zero() { AnalyticPoly::zero() } else { p.clone() }).collect())?;
    let column_norm_g = column_norm(&g_tuple, NORM_TRUNCATION.max(g_tuple.max_degree()), DEFAULT_TOL)?;
    if column_norm_g > k_bound {
        return Err(Error::Rejected(format!(
            "column norm of G is {column_norm_g}, above the bound {k_bound}"
        )));
    }
    Ok(IdealSolution {
        g,
        solution: Some(sol),
        column_norm_g,
        mh,
        k_bound,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadicalLevel {
    pub m: u32,
    pub coarse: f64,
    pub fine: f64,
    pub stable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadicalDiagnostic {
    /// Smallest power with a stable finite sup, if any.
    pub m: Option<u32>,
    pub c0: Option<f64>,
    pub levels: Vec<RadicalLevel>,
}

fn radical_sup(f: &MultiplierTuple, h: &AnalyticPoly, m: u32, pts: &[Complex64]) -> f64 {
    let mut sup: f64 = 0.0;
    for &z in pts {
        let num = h.eval(z).norm().powi(m as i32);
        let den = f.norm_sqr_at(z);
        if den == 0.0 {
            if num == 0.0 {
                continue;
            }
            return f64::INFINITY;
        }
        sup = sup.max(num / den);
    }
    sup
}

/// Grid search for `m` with `|H|^m ≤ C₀·FF*`: the sup over an
/// `n_r × n_theta` grid and over its twofold refinement must be finite and
/// agree within a factor 2. A sampling heuristic, not a proof.
pub fn radical_diagnostic(
    generators: &MultiplierTuple,
    dominated: &AnalyticPoly,
    m_max: u32,
    n_r: usize,
    n_theta: usize,
) -> Result<RadicalDiagnostic> {
    if m_max == 0 {
        return Err(Error::arg("m_max must be at least 1"));
    }
    if generators.is_zero() {
        return Err(Error::Rejected("every generator is zero".into()));
    }
    let coarse = closed_disk_points(&make_polar_grid(n_r, n_theta)?);
    let fine = closed_disk_points(&make_polar_grid(2 * n_r, 2 * n_theta)?);
    let mut levels = Vec::new();
    let mut found = None;
    for m in 1..=m_max {
        let a = radical_sup(generators, dominated, m, &coarse);
        let b = radical_sup(generators, dominated, m, &fine);
        let stable = a.is_finite() && b.is_finite() && (b <= 2.0 * a && a <= 2.0 * b || a == b);
        levels.push(RadicalLevel { m, coarse: a, fine: b, stable });
        if stable && found.is_none() {
            found = Some((m, b));
        }
    }
    Ok(RadicalDiagnostic {
        m: found.map(|v| v.0),
        c0: found.map(|v| v.1),
        levels,
    })
}
