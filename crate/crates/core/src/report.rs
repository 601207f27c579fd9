//! Named measurements against stated bounds, written as CSV or JSON.

use serde::Serialize;

use crate::io::{fmt17, to_json};
use crate::{Error, Result};

/// Default relative slack for quadrature error.
pub const DEFAULT_TOL_REL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub pass: bool,
    pub context: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub tol_rel: f64,
    pub rows: Vec<ReportRow>,
}

impl Default for VerificationReport {
    fn default() -> Self {
        Self::new(DEFAULT_TOL_REL)
    }
}

impl VerificationReport {
    pub fn new(tol_rel: f64) -> Self {
        Self { tol_rel, rows: Vec::new() }
    }

    /// Appends a row; it passes when `measured ≤ bound·(1 + tol_rel)`.
    pub fn push(&mut self, name: impl Into<String>, measured: f64, bound: f64, context: impl Into<String>) {
        let pass = measured.is_finite() && measured <= bound * (1.0 + self.tol_rel);
        self.rows.push(ReportRow {
            name: name.into(),
            measured,
            bound,
            pass,
            context: context.into(),
        });
    }

    /// Appends the rows of `other`, re-judged under this report's tolerance.
    pub fn extend(&mut self, other: VerificationReport) {
        for r in other.rows {
            self.push(r.name, r.measured, r.bound, r.context);
        }
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| !r.pass)
    }

    pub fn get(&self, name: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    /// Rows ordered by name; ties keep insertion order.
    pub fn sorted_rows(&self) -> Vec<&ReportRow> {
        let mut rows: Vec<&ReportRow> = self.rows.iter().collect();
        rows.sort_by(|a, b| a.name.cmp(&b.name));
        rows
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| Error::Parse(format!("csv: {e}"));
        w.write_record(["name", "measured", "bound", "pass", "context"]).map_err(err)?;
        for r in self.sorted_rows() {
            w.write_record([
                r.name.as_str(),
                &fmt17(r.measured),
                &fmt17(r.bound),
                if r.pass { "true" } else { "false" },
                r.context.as_str(),
            ])
            .map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv writes UTF-8"))
    }

    pub fn to_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Out<'a> {
            tol_rel: f64,
            all_pass: bool,
            rows: Vec<&'a ReportRow>,
        }
        to_json(&Out {
            tol_rel: self.tol_rel,
            all_pass: self.all_pass(),
            rows: self.sorted_rows(),
        })
    }

    /// One line per row, for terminals.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in self.sorted_rows() {
            s.push_str(&format!(
                "{} {:<48} {:>24} <= {:<24} {}\n",
                if r.pass { "PASS" } else { "FAIL" },
                r.name,
                fmt17(r.measured),
                fmt17(r.bound),
                r.context
            ));
        }
        s
    }
}

/// `+07` / `-12`: fixed-width signed label so rows sort by magnitude per sign.
pub fn signed_label(l: i64) -> String {
    format!("{}{:02}", if l < 0 { '-' } else { '+' }, l.unsigned_abs())
}
