//! Browser bindings for the demo page in `www/`.
//!
//! Each export is a thin wrapper over a plain function of the same name with
//! a `_native` suffix, so the logic runs and is tested without a JS host.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use wolffd_core::cauchy::schur::{t_l_certificate, t_l_norm_estimate};
use wolffd_core::disk::mobius;
use wolffd_core::io::{poly_to_pairs, to_json, ProblemFile};
use wolffd_core::solver::{multiplier_norm, norm_bound_k, solve_ideal, solve_uh, validate_problem, SolverSettings};
use wolffd_core::{c64, Complex64};

/// Settings small enough for an interactive page.
pub fn demo_settings() -> SolverSettings {
    SolverSettings {
        n_r: 48,
        n_theta: 64,
        degree: 16,
        ..SolverSettings::default()
    }
}

/// Images under `z ↦ (a − z)/(1 − āz)` of `rings` concentric circles and
/// `spokes` radii, each sampled at `samples` points. Polylines are flattened
/// as `x, y` pairs and separated by a `NaN, NaN` pair.
pub fn mobius_grid_native(a_re: f64, a_im: f64, rings: usize, spokes: usize, samples: usize) -> Result<Vec<f64>, String> {
    if samples < 2 {
        return Err("need at least two samples per curve".into());
    }
    let a = c64(a_re, a_im);
    let mut curves: Vec<Vec<Complex64>> = Vec::new();
    for k in 1..=rings {
        let r = k as f64 / rings as f64;
        curves.push(
            (0..=samples)
                .map(|j| Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / samples as f64))
                .collect(),
        );
    }
    for k in 0..spokes {
        let t = std::f64::consts::TAU * k as f64 / spokes as f64;
        curves.push((0..=samples).map(|j| Complex64::from_polar(j as f64 / samples as f64, t)).collect());
    }
    let mut out = Vec::new();
    for c in curves {
        if !out.is_empty() {
            out.extend([f64::NAN, f64::NAN]);
        }
        for z in c {
            let w = mobius(a, z).map_err(|e| e.to_string())?;
            out.extend([w.re, w.im]);
        }
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn mobius_grid(a_re: f64, a_im: f64, rings: usize, spokes: usize, samples: usize) -> Result<Vec<f64>, JsError> {
    mobius_grid_native(a_re, a_im, rings, spokes, samples).map_err(|e| JsError::new(&e))
}

#[derive(Debug, Serialize)]
pub struct RadialRow {
    pub l: i64,
    pub galerkin: f64,
    pub schur: f64,
}

/// Galerkin estimate and Schur bound of `‖T_l‖` for `l` in `[l_min, l_max]`.
pub fn radial_norms_native(l_min: i64, l_max: i64, cells: usize, schur_points: usize) -> Result<Vec<RadialRow>, String> {
    if l_min > l_max {
        return Err(format!("empty range {l_min}..={l_max}"));
    }
    (l_min..=l_max)
        .map(|l| {
            Ok(RadialRow {
                l,
                galerkin: t_l_norm_estimate(l, cells).map_err(|e| e.to_string())?,
                schur: t_l_certificate(l, schur_points).map_err(|e| e.to_string())?.bound,
            })
        })
        .collect()
}

#[wasm_bindgen]
pub fn radial_norms(l_min: i64, l_max: i64) -> Result<String, JsError> {
    let rows = radial_norms_native(l_min, l_max, 64, 64).map_err(|e| JsError::new(&e))?;
    to_json(&rows).map_err(|e| JsError::new(&e.to_string()))
}

#[derive(Debug, Serialize)]
pub struct DemoSolution {
    pub components: Vec<Vec<[f64; 2]>>,
    pub residual: f64,
    pub analyticity_defect: f64,
    pub norm_ratio: f64,
    pub k_bound: f64,
}

/// Solves a problem given in the CLI's JSON format on the demo grid.
pub fn solve_demo_native(problem_json: &str) -> Result<DemoSolution, String> {
    let file = ProblemFile::parse(problem_json).map_err(|e| e.to_string())?;
    let p = file.to_problem(file.settings(demo_settings())).map_err(|e| e.to_string())?;
    validate_problem(&p).map_err(|e| e.to_string())?;
    let (u, sol, k_bound) = if file.factor.is_some() {
        let s = solve_uh(&p).map_err(|e| e.to_string())?;
        let mh = multiplier_norm(&p.dominated).map_err(|e| e.to_string())?;
        (s.u.clone(), Some(s), norm_bound_k(mh))
    } else {
        let r = solve_ideal(&p.generators, &p.dominated, p.delta, p.settings).map_err(|e| e.to_string())?;
        (r.g, r.solution, r.k_bound)
    };
    Ok(DemoSolution {
        components: u.iter().map(poly_to_pairs).collect(),
        residual: sol.as_ref().map_or(0.0, |s| s.residual),
        analyticity_defect: sol.as_ref().map_or(0.0, |s| s.analyticity_defect),
        norm_ratio: sol.as_ref().map_or(0.0, |s| s.norm_ratio),
        k_bound,
    })
}

#[wasm_bindgen]
pub fn solve_demo(problem_json: &str) -> Result<String, JsError> {
    let s = solve_demo_native(problem_json).map_err(|e| JsError::new(&e))?;
    to_json(&s).map_err(|e| JsError::new(&e.to_string()))
}
