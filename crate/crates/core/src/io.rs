//! Problem and solution files, deterministic JSON and atomic writes.
//!
//! Complex numbers are `[re, im]` pairs and polynomials are arrays of them,
//! lowest degree first. Every float is written with 17 significant digits so
//! that a value survives a round trip bit for bit.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::multiplier::MultiplierTuple;
use crate::solver::{SolverSettings, WolffProblem};
use crate::{AnalyticPoly, Error, Result};

pub type Pair = [f64; 2];

pub fn poly_from_pairs(c: &[Pair]) -> AnalyticPoly {
    AnalyticPoly::new(c.iter().map(|p| Complex64::new(p[0], p[1])).collect())
}

pub fn poly_to_pairs(p: &AnalyticPoly) -> Vec<Pair> {
    p.coeffs().iter().map(|c| [c.re, c.im]).collect()
}

/// `{:.16e}`: 17 significant digits.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// Pretty printing with every float in [`fmt17`] form.
struct Fixed17<'a>(PrettyFormatter<'a>);

impl Formatter for Fixed17<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> std::io::Result<()> {
        w.write_all(fmt17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> std::io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> std::io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Fixed17(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Parse(format!("serialisation failed: {e}")))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

/// Writes through a temporary file in the same directory and renames it into
/// place, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub nr: usize,
    pub ntheta: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(rename = "F")]
    pub generators: Vec<Vec<Pair>>,
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    pub dominated: Option<Vec<Pair>>,
    #[serde(rename = "h", default, skip_serializing_if = "Option::is_none")]
    pub factor: Option<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalize: Option<bool>,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        let f: Self = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if f.generators.is_empty() {
            return Err(Error::Parse("\"F\" must hold at least one polynomial".into()));
        }
        let all = f
            .generators
            .iter()
            .flatten()
            .chain(f.dominated.iter().flatten())
            .chain(f.factor.iter().flatten());
        if all.flat_map(|p| p.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Parse("coefficients must be finite".into()));
        }
        Ok(f)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn generators(&self) -> Result<MultiplierTuple> {
        MultiplierTuple::new(self.generators.iter().map(|c| poly_from_pairs(c)).collect())
    }

    pub fn dominated(&self) -> Result<AnalyticPoly> {
        self.dominated
            .as_deref()
            .map(poly_from_pairs)
            .ok_or_else(|| Error::Parse("missing \"H\"".into()))
    }

    pub fn factor(&self) -> AnalyticPoly {
        self.factor
            .as_deref()
            .map(poly_from_pairs)
            .unwrap_or_else(|| AnalyticPoly::constant(Complex64::new(1.0, 0.0)))
    }

    /// Settings from the file, with `base` filling whatever it leaves out.
    pub fn settings(&self, base: SolverSettings) -> SolverSettings {
        let mut s = base;
        if let Some(n) = self.degree {
            s.degree = n;
        }
        if let Some(g) = self.grid {
            s.n_r = g.nr;
            s.n_theta = g.ntheta;
        }
        s
    }

    pub fn to_problem(&self, settings: SolverSettings) -> Result<WolffProblem> {
        let delta = self.delta.ok_or_else(|| Error::Parse("missing \"delta\"".into()))?;
        if !(delta > 0.0) {
            return Err(Error::Parse(format!("\"delta\" must be positive, got {delta}")));
        }
        Ok(WolffProblem::new(self.generators()?, self.dominated()?, self.factor(), delta).with_settings(settings))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    #[serde(rename = "G", default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<Vec<Pair>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<Vec<Pair>>>,
    pub residual: f64,
    pub analyticity_defect: f64,
    pub norm_ratio: f64,
    #[serde(rename = "K_bound")]
    pub k_bound: f64,
    pub fit_residual: f64,
    pub recovery_tail: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub column_norm_g: Option<f64>,
    /// `F` and `H` were divided by this column norm before solving and the
    /// components multiplied back by its square; every other diagnostic
    /// except `residual` refers to the rescaled problem.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub column_scale: Option<f64>,
    pub pass: bool,
    pub settings: SolverSettings,
}

impl SolutionFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// The stored components, whichever key holds them.
    pub fn components(&self) -> Vec<AnalyticPoly> {
        self.g
            .as_ref()
            .or(self.u.as_ref())
            .map(|v| v.iter().map(|c| poly_from_pairs(c)).collect())
            .unwrap_or_default()
    }
}

/// `max |F·u − H³h|` over the nodes of a fresh `n_r × n_theta` grid and its
/// boundary circle.
pub fn recheck_residual(problem: &WolffProblem, u: &[AnalyticPoly], n_r: usize, n_theta: usize) -> Result<f64> {
    let grid = crate::disk::make_polar_grid(n_r, n_theta)?;
    let target = problem.target();
    let mut pts = grid.nodes.clone();
    pts.extend(grid.boundary().points(1.0));
    Ok(pts
        .iter()
        .map(|&z| {
            let fu: Complex64 = problem.generators.polys().iter().zip(u).map(|(f, g)| f.eval(z) * g.eval(z)).sum();
            (fu - target.eval(z)).norm()
        })
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 12345.678, 0.0] {
            let s = fmt17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.trim_start_matches('-').split('e').next().unwrap().replace('.', "");
            assert_eq!(mantissa.len(), 17);
        }
        assert_eq!(fmt17(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn json_is_deterministic_and_parses() {
        let v = serde_json::json!({"a": [0.1, 2.0], "b": {"c": 1e-20}});
        let s = to_json(&v).unwrap();
        assert_eq!(s, to_json(&v).unwrap());
        assert!(s.contains("1.0000000000000001e-1"));
        let back: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["b"]["c"].as_f64().unwrap(), 1e-20);
    }

    #[test]
    fn problem_file_parses() {
        let text = r#"{"F": [[[0,0],[0.5,0]], [[0.5,0]]], "H": [[0,0],[0.5,0]], "delta": 0.25}"#;
        let f = ProblemFile::parse(text).unwrap();
        let p = f.to_problem(SolverSettings::default()).unwrap();
        assert_eq!(p.generators.len(), 2);
        assert_eq!(p.factor, AnalyticPoly::constant(Complex64::new(1.0, 0.0)));
        assert!(ProblemFile::parse("{").is_err());
        assert!(ProblemFile::parse(r#"{"F": []}"#).is_err());
        assert!(ProblemFile::parse(r#"{"F": [[[1,0]]], "bogus": 1}"#).is_err());
        let no_delta = ProblemFile::parse(r#"{"F": [[[1,0]]], "H": [[1,0]]}"#).unwrap();
        assert!(matches!(no_delta.to_problem(SolverSettings::default()), Err(Error::Parse(_))));
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.json");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
