use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use wolffd_core::io::{poly_from_pairs, recheck_residual, ProblemFile, SolutionFile};
use wolffd_core::solver::SolverSettings;

const WORKED: &str = r#"{"F": [[[0,0],[0.5,0]], [[0.5,0]]], "H": [[0,0],[0.5,0]], "delta": 0.25, "grid": {"nr": 48, "ntheta": 64}, "N": 16}"#;

fn wolffd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wolffd"))
        .args(args)
        .env_remove("WOLFFD_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "worked.json", WORKED);
    let out = dir.path().join("sol.json");
    let o = wolffd(&["solve", s(&input), "-o", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    let sol = SolutionFile::parse(&text).unwrap();
    assert!(sol.pass);
    assert!(sol.residual <= 1e-6);
    assert!(sol.g.is_some() && sol.u.is_none());
    assert_eq!(sol.settings.n_r, 48);

    // a fresh grid reproduces the stored residual within 10x
    let problem = ProblemFile::parse(WORKED).unwrap().to_problem(sol.settings).unwrap();
    let again = recheck_residual(&problem, &sol.components(), 37, 80).unwrap();
    assert!(again <= 10.0 * sol.residual.max(f64::EPSILON), "{again} vs {}", sol.residual);

    // byte-identical output on a rerun and under a different thread count
    let out2 = dir.path().join("sol2.json");
    let o = Command::new(env!("CARGO_BIN_EXE_wolffd"))
        .args(["solve", s(&input), "-o", s(&out2)])
        .env("WOLFFD_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&out2).unwrap());
}

#[test]
fn solve_writes_default_output_and_u_for_factor() {
    let dir = tempfile::tempdir().unwrap();
    let text = WORKED.replace("\"delta\"", "\"h\": [[0,0],[1,0]], \"delta\"");
    let input = write(dir.path(), "with_h.json", &text);
    let o = wolffd(&["solve", s(&input), "--threads", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let sol = SolutionFile::parse(&std::fs::read_to_string(dir.path().join("with_h.solution.json")).unwrap()).unwrap();
    let u = sol.u.expect("u is written when h is given");
    // u = (z³/8, z⁴/8)
    assert!((poly_from_pairs(&u[0]).coeff(3).re - 0.125).abs() < 1e-10);
    assert!((poly_from_pairs(&u[1]).coeff(4).re - 0.125).abs() < 1e-10);
}

#[test]
fn solve_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad_b = write(dir.path(), "b.json", r#"{"F": [[[0,0],[1,0]]], "H": [[1,0]], "delta": 0.1}"#);
    let o = wolffd(&["solve", s(&bad_b)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("hypothesis (b)"), "{}", stderr(&o));
    assert!(!dir.path().join("b.solution.json").exists());

    let malformed = write(dir.path(), "m.json", "{\"F\": [[[0,0]");
    assert_eq!(wolffd(&["solve", s(&malformed)]).status.code(), Some(2));
    assert_eq!(wolffd(&["solve", s(&dir.path().join("missing.json"))]).status.code(), Some(2));
    assert_eq!(wolffd(&["solve", s(&malformed), "--grid", "12by3"]).status.code(), Some(2));

    // column norm of (z, 1) is above one
    let big = write(dir.path(), "a.json", r#"{"F": [[[0,0],[1,0]], [[1,0]]], "H": [[0,0],[1,0]], "delta": 0.9, "grid": {"nr": 32, "ntheta": 32}, "N": 12}"#);
    let o = wolffd(&["solve", s(&big)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("hypothesis (a)"));

    // too few radial nodes for the requested degree
    let coarse = write(dir.path(), "r.json", &WORKED.replace("\"nr\": 48", "\"nr\": 8"));
    let o = wolffd(&["solve", s(&coarse)]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

#[test]
fn solve_normalize_rescales() {
    let dir = tempfile::tempdir().unwrap();
    let big = write(
        dir.path(),
        "a.json",
        r#"{"F": [[[0,0],[1,0]], [[1,0]]], "H": [[0,0],[1,0]], "delta": 0.9, "grid": {"nr": 48, "ntheta": 64}, "N": 16}"#,
    );
    let out = dir.path().join("a.out.json");
    let o = wolffd(&["solve", s(&big), "--normalize", "-o", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let sol = SolutionFile::parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let c = sol.column_scale.unwrap();
    assert!((c - 3f64.sqrt()).abs() < 1e-6, "{c}");
    // the residual refers to the original tuple
    let problem = ProblemFile::parse(&std::fs::read_to_string(&big).unwrap())
        .unwrap()
        .to_problem(SolverSettings::default())
        .unwrap();
    assert!(recheck_residual(&problem, &sol.components(), 40, 64).unwrap() < 1e-6);
}

#[test]
fn verify_lemma2_and_report_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = wolffd(&["verify", "lemma2", "--trials", "100", "--seed", "42", "--out-dir", s(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("PASS lemma2.max_ratio"));
    let csv = std::fs::read_to_string(dir.path().join("verify-lemma2.csv")).unwrap();
    assert!(csv.starts_with("name,measured,bound,pass,context\n"));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("verify-lemma2.json")).unwrap()).unwrap();
    assert_eq!(json["all_pass"], true);
    assert!(json["rows"][0]["measured"].as_f64().unwrap() <= 8.0);
}

#[test]
fn verify_lemma3_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = wolffd(&["verify", "lemma3", "--out-dir", s(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    for l in -30..=30i64 {
        let label = format!("lemma3.t_l_norm[{}{:02}]", if l < 0 { '-' } else { '+' }, l.abs());
        assert!(text.contains(&label), "missing {label}");
    }
    assert!(text.contains("PASS lemma3.global_ratio"));
}

#[test]
fn verify_needs_input_for_terms() {
    let dir = tempfile::tempdir().unwrap();
    let o = wolffd(&["verify", "terms", "--out-dir", s(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(wolffd(&["verify", "bogus"]).status.code(), Some(2));
}

#[test]
fn verify_all_with_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "worked.json", WORKED);
    let o = wolffd(&["verify", "all", "--input", s(&input), "--trials", "20", "--out-dir", s(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    for row in ["lemma2.max_ratio", "lemma4.z2", "terms.c", "terms.decomposition", "boundary.c0", "schur.l0_log_kernel"] {
        assert!(text.contains(&format!("PASS {row}")), "missing {row}");
    }
}

#[test]
fn norm_examples() {
    let dir = tempfile::tempdir().unwrap();
    let one = write(dir.path(), "one.json", r#"{"F": [[[1,0]]]}"#);
    let o = wolffd(&["norm", s(&one)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("column_norm      1.000000000000"));

    let z = write(dir.path(), "z.json", r#"{"F": [[[0,0],[1,0]]]}"#);
    let text = stdout(&wolffd(&["norm", s(&z)]));
    let v: f64 = text.lines().next().unwrap().split_whitespace().last().unwrap().parse().unwrap();
    assert!((v - 2f64.sqrt()).abs() < 1e-6, "{v}");

    let pair = write(dir.path(), "pair.json", r#"{"F": [[[0,0],[1,0]], [[1,0]]]}"#);
    let o = wolffd(&["norm", s(&pair)]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let grab = |key: &str| -> f64 {
        text.lines().find(|l| l.starts_with(key)).unwrap().split_whitespace().last().unwrap().parse().unwrap()
    };
    assert!((grab("column_norm") - 3f64.sqrt()).abs() < 1e-3);
    assert!((grab("row_norm") - 3f64.sqrt()).abs() < 1e-3);
    assert!(text.contains("PASS row_norm <= sqrt(18)*column_norm"));

    let bad = write(dir.path(), "bad.json", "[1, 2]");
    assert_eq!(wolffd(&["norm", s(&bad)]).status.code(), Some(2));
}

#[test]
fn radical_examples() {
    let dir = tempfile::tempdir().unwrap();
    let sq = write(dir.path(), "sq.json", r#"{"F": [[[0,0],[1,0]], [[0,0]]], "H": [[0,0],[1,0]]}"#);
    let o = wolffd(&["radical", s(&sq), "--mmax", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("m = 2, C0 = 1.000000000000"), "{text}");
    assert!(text.contains("caveat"));

    let none = write(dir.path(), "none.json", r#"{"F": [[[0,0],[1,0]]], "H": [[1,0]]}"#);
    let text = stdout(&wolffd(&["radical", s(&none)]));
    assert!(text.contains("no certificate up to m_max = 8"));
    assert!(text.contains("caveat"));

    let mixed = write(
        dir.path(),
        "mixed.json",
        r#"{"F": [[[0,0],[0,0],[1,0]], [[0,0],[0.5,0],[-0.5,0]]], "H": [[0,0],[1,0]]}"#,
    );
    let text = stdout(&wolffd(&["radical", s(&mixed), "--mmax", "4", "--grid", "32x64"]));
    assert!(text.contains("m = 2, C0 = "), "{text}");

    let no_h = write(dir.path(), "noh.json", r#"{"F": [[[1,0]]]}"#);
    assert_eq!(wolffd(&["radical", s(&no_h)]).status.code(), Some(2));
}
