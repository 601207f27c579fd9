use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wolffd_core::io::{poly_to_pairs, recheck_residual, to_json, write_atomic, ProblemFile, SolutionFile};
use wolffd_core::multiplier::{column_norm, mult_matrix, row_norm, MultiplierTuple, DEFAULT_TOL};
use wolffd_core::solver::{
    multiplier_norm, norm_bound_k, radical_diagnostic, solve_ideal, solve_uh, validate_problem, SolverSettings,
    NORM_TRUNCATION,
};
use wolffd_core::verify::{run_suite, Suite, SuiteOptions};
use wolffd_core::{c64, AnalyticPoly, Error, Result};

/// Ideal membership in the multiplier algebra of the Dirichlet space.
#[derive(Debug, Parser)]
#[command(name = "wolffd", version)]
struct Cli {
    /// Worker threads; defaults to one per core.
    #[arg(long, global = true, env = "WOLFFD_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve F·G = H³ (or F·u = H³h when the file has "h").
    Solve(SolveArgs),
    /// Run a verification suite and write its report as CSV and JSON.
    Verify(VerifyArgs),
    /// Multiplier norms of a tuple and the row/column comparison.
    Norm(NormArgs),
    /// Search for m with |H|^m ≤ C0·Σ|f_j|² on a grid.
    Radical(RadicalArgs),
}

#[derive(Debug, Args)]
struct SolveArgs {
    input: PathBuf,
    /// Defaults to `<input stem>.solution.json` next to the input.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Disk grid as `NRxNTHETA`.
    #[arg(long, value_parser = parse_grid)]
    grid: Option<(usize, usize)>,
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Divide F and H by the column norm of F when it exceeds one.
    #[arg(long)]
    normalize: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// lemma2, lemma3, lemma4, terms, boundary or all.
    suite: Suite,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Problem file for the suites that need one.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Directory receiving `verify-<suite>.csv` and `.json`.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct NormArgs {
    input: PathBuf,
    /// Truncation degree.
    #[arg(long, default_value_t = NORM_TRUNCATION)]
    degree: usize,
}

#[derive(Debug, Args)]
struct RadicalArgs {
    input: PathBuf,
    #[arg(long, default_value_t = 8)]
    mmax: u32,
    /// Coarse grid as `NRxNTHETA`; the check grid doubles both.
    #[arg(long, value_parser = parse_grid, default_value = "64x128")]
    grid: (usize, usize),
}

fn parse_grid(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X', ','])
        .ok_or_else(|| format!("expected NRxNTHETA, got {s:?}"))?;
    let n = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok((n(a)?, n(b)?))
}

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_HYPOTHESIS: u8 = 3;
const EXIT_REFINEMENT: u8 = 4;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::InvalidArgument(_) | Error::Io(_) => EXIT_PARSE,
        Error::Hypothesis { .. } => EXIT_HYPOTHESIS,
        Error::Refinement(_) | Error::NonConvergence { .. } | Error::Rejected(_) => EXIT_REFINEMENT,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_PARSE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: thread pool already configured: {e}");
        }
    }
    let out = match cli.command {
        Command::Solve(a) => cmd_solve(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Norm(a) => cmd_norm(&a),
        Command::Radical(a) => cmd_radical(&a),
    };
    match out {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn default_output(input: &Path) -> PathBuf {
    let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("problem");
    input.with_file_name(format!("{stem}.solution.json"))
}

fn cmd_solve(a: &SolveArgs) -> Result<u8> {
    let file = ProblemFile::load(&a.input)?;
    let mut settings = file.settings(SolverSettings::default());
    if let Some((nr, nt)) = a.grid {
        settings.n_r = nr;
        settings.n_theta = nt;
    }
    if let Some(d) = a.degree {
        settings.degree = d;
    }
    if let Some(t) = a.tol {
        settings.tol = t;
    }
    let original = file.to_problem(settings)?;

    let mut problem = original.clone();
    let mut scale = None;
    if a.normalize || file.normalize.unwrap_or(false) {
        let n = NORM_TRUNCATION.max(original.generators.max_degree());
        let c = column_norm(&original.generators, n, DEFAULT_TOL)?;
        if c > 1.0 {
            problem.generators = original.generators.scale(1.0 / c);
            problem.dominated = original.dominated.scale(c64(1.0 / c, 0.0));
            problem.delta = original.delta / (c * c);
            scale = Some(c);
        }
    }
    validate_problem(&problem)?;

    let back = |u: &[AnalyticPoly]| -> Vec<AnalyticPoly> {
        match scale {
            Some(c) => u.iter().map(|p| p.scale(c64(c * c, 0.0))).collect(),
            None => u.to_vec(),
        }
    };
    let has_factor = file.factor.is_some();
    let (components, sol, k_bound, column_norm_g) = if has_factor {
        let sol = solve_uh(&problem)?;
        let mh = multiplier_norm(&problem.dominated)?;
        (back(&sol.u), Some(sol), norm_bound_k(mh), None)
    } else {
        let ideal = solve_ideal(&problem.generators, &problem.dominated, problem.delta, settings)?;
        (back(&ideal.g), ideal.solution, ideal.k_bound, Some(ideal.column_norm_g))
    };
    let residual = recheck_residual(&original, &components, settings.n_r, settings.n_theta)?;
    let (defect, ratio, fit, tail) = match &sol {
        Some(s) => (s.analyticity_defect, s.norm_ratio, s.fit_residual, s.recovery_tail),
        None => (0.0, 0.0, 0.0, 0.0),
    };
    let pass = residual <= settings.tol && defect <= 10.0 * settings.tol && ratio <= k_bound;
    let pairs: Vec<_> = components.iter().map(poly_to_pairs).collect();
    let out = SolutionFile {
        g: (!has_factor).then(|| pairs.clone()),
        u: has_factor.then_some(pairs),
        residual,
        analyticity_defect: defect,
        norm_ratio: ratio,
        k_bound,
        fit_residual: fit,
        recovery_tail: tail,
        column_norm_g,
        column_scale: scale,
        pass,
        settings,
    };
    let path = a.output.clone().unwrap_or_else(|| default_output(&a.input));
    write_atomic(&path, to_json(&out)?.as_bytes())?;
    println!("residual            {residual:.3e}");
    println!("analyticity defect  {defect:.3e}");
    println!("norm ratio          {ratio:.6} (bound {k_bound:.4})");
    println!("fit residual        {fit:.3e}");
    println!("{} -> {}", if pass { "PASS" } else { "FAIL" }, path.display());
    Ok(if pass { 0 } else { EXIT_REFINEMENT })
}

fn cmd_verify(a: &VerifyArgs) -> Result<u8> {
    let problem = match &a.input {
        Some(p) => {
            let file = ProblemFile::load(p)?;
            Some(file.to_problem(file.settings(SolverSettings::default()))?)
        }
        None => None,
    };
    let opts = SuiteOptions {
        trials: a.trials,
        seed: a.seed,
        problem,
    };
    let (report, skipped) = run_suite(a.suite, &opts)?;
    for s in &skipped {
        eprintln!("note: suite {s} skipped, it needs --input");
    }
    std::fs::create_dir_all(&a.out_dir)?;
    let base = a.out_dir.join(format!("verify-{}", a.suite.name()));
    write_atomic(&base.with_extension("csv"), report.to_csv()?.as_bytes())?;
    write_atomic(&base.with_extension("json"), report.to_json()?.as_bytes())?;
    print!("{}", report.to_text());
    let failed = report.failures().count();
    println!("{} rows, {failed} failed", report.rows.len());
    Ok(if failed == 0 { 0 } else { EXIT_CHECK_FAILED })
}

fn load_tuple(path: &Path) -> Result<MultiplierTuple> {
    ProblemFile::load(path)?.generators()
}

fn cmd_norm(a: &NormArgs) -> Result<u8> {
    let f = load_tuple(&a.input)?;
    let n = a.degree.max(f.max_degree());
    for (j, p) in f.polys().iter().enumerate() {
        println!("entry {j:<3} op_norm  {:.12}", mult_matrix(p, n)?.norm(DEFAULT_TOL)?);
    }
    let col = column_norm(&f, n, DEFAULT_TOL)?;
    let row = row_norm(&f, n, DEFAULT_TOL)?;
    let bound = 18f64.sqrt() * col;
    println!("column_norm      {col:.12}");
    println!("row_norm         {row:.12}");
    let ok = row <= bound * (1.0 + 1e-12);
    println!(
        "{} row_norm <= sqrt(18)*column_norm: {row:.6} <= {bound:.6} (N = {n})",
        if ok { "PASS" } else { "FAIL" }
    );
    Ok(if ok { 0 } else { EXIT_CHECK_FAILED })
}

fn cmd_radical(a: &RadicalArgs) -> Result<u8> {
    let file = ProblemFile::load(&a.input)?;
    let f = file.generators()?;
    let h = file.dominated()?;
    let (nr, nt) = a.grid;
    let d = radical_diagnostic(&f, &h, a.mmax, nr, nt)?;
    println!("  m  sup {nr}x{nt}  sup {}x{}  stable", 2 * nr, 2 * nt);
    for l in &d.levels {
        println!("{:>3}  {:.6e}  {:.6e}  {}", l.m, l.coarse, l.fine, l.stable);
    }
    match (d.m, d.c0) {
        (Some(m), Some(c0)) => println!("m = {m}, C0 = {c0:.12}"),
        _ => println!("no certificate up to m_max = {}", a.mmax),
    }
    println!("caveat: the sup is taken over grid nodes only; this is a heuristic for the sup over the disk, not a proof");
    Ok(0)
}
