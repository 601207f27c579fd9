//! One line per acceptance criterion, `PASS` or `FAIL`, with the measured
//! values and wall time. All criteria run before the final assertion so a
//! failure does not hide the others.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wolffd_core::cauchy::quadrature::cauchy_transform_quad;
use wolffd_core::cauchy::{cauchy_transform, dbar_defect, MonomialExpansion};
use wolffd_core::dirichlet::{cnp_coeffs, kernel_coords, to_orthonormal};
use wolffd_core::disk::make_polar_grid;
use wolffd_core::koszul::{identity_defect, q_matrix};
use wolffd_core::multiplier::{column_norm, positivity_gap, row_norm, MultiplierTuple, DEFAULT_TOL};
use wolffd_core::report::VerificationReport;
use wolffd_core::solver::{multiplier_norm, norm_bound_k, radical_diagnostic, solve_uh, SolverSettings, WolffProblem};
use wolffd_core::verify::{lemma4_suite, verify_lemma2, verify_lemma3, verify_schur, Lemma3Options};
use wolffd_core::{c64, AnalyticPoly, Complex64};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn run(n: usize, title: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let o = f();
    let took = t.elapsed();
    let in_time = took <= limit;
    let pass = o.pass && in_time;
    let timing = if in_time { String::new() } else { format!(" (over the {limit:?} limit)") };
    println!(
        "{} criterion {n}: {title}: {} [{took:.2?}]{timing}",
        if pass { "PASS" } else { "FAIL" },
        o.detail
    );
    pass
}

fn failures(r: &VerificationReport) -> String {
    r.failures().map(|f| format!("{} = {:.6e} > {:.6e}", f.name, f.measured, f.bound)).collect::<Vec<_>>().join("; ")
}

fn rand_c(rng: &mut ChaCha8Rng) -> Complex64 {
    c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn rand_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> AnalyticPoly {
    let d = rng.gen_range(0..=max_deg);
    AnalyticPoly::new((0..=d).map(|_| rand_c(rng)).collect())
}

fn rand_tuple(rng: &mut ChaCha8Rng, max_len: usize, max_deg: usize) -> MultiplierTuple {
    let n = rng.gen_range(1..=max_len);
    MultiplierTuple::new((0..n).map(|_| rand_poly(rng, max_deg)).collect()).unwrap()
}

fn p(c: &[f64]) -> AnalyticPoly {
    AnalyticPoly::from_real(c)
}

fn q_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst_id, mut worst_kernel) = (0.0f64, 0.0f64);
    let mut rank_ok = true;
    for _ in 0..200 {
        let n = rng.gen_range(2..=20);
        let c: Vec<Complex64> = (0..n).map(|_| rand_c(&mut rng)).collect();
        worst_id = worst_id.max(identity_defect(&c));
        let q = q_matrix(&c);
        let row = DMatrix::from_row_slice(1, n, &c);
        worst_kernel = worst_kernel.max((&row * &q).norm());
        let sv = q.singular_values();
        let cut = 1e-10 * sv.max();
        rank_ok &= sv.iter().filter(|&&s| s > cut).count() == n - 1;
    }
    outcome(
        worst_id <= 1e-12 && worst_kernel <= 1e-12 && rank_ok,
        format!("identity defect {worst_id:.2e}, |CQ| {worst_kernel:.2e}, rank n-1: {rank_ok}"),
    )
}

fn derivative_energy() -> Outcome {
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    let worked = MultiplierTuple::new(vec![p(&[0.0, 0.5]), p(&[0.5])]).unwrap();
    let mut tuples = vec![worked];
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    tuples.extend((0..20).map(|_| loop {
        let t = rand_tuple(&mut rng, 4, 4);
        if !t.is_zero() {
            break t;
        }
    }));
    for (i, f) in tuples.iter().enumerate() {
        let r = verify_lemma2(f, 100, 42 + i as u64).unwrap();
        worst = worst.max(r.rows[0].measured);
        if !r.all_pass() {
            bad.push(failures(&r));
        }
    }
    outcome(bad.is_empty() && worst <= 8.0, format!("21 tuples x 100 trials, max ratio {worst:.4} <= 8 {}", bad.join("; ")))
}

fn singular_operator() -> Outcome {
    let r = verify_lemma3(&Lemma3Options::default()).unwrap();
    let get = |k: &str| r.get(k).map_or(f64::NAN, |row| row.measured);
    let t_max = r.rows.iter().filter(|row| row.name.starts_with("lemma3.t_l_norm")).map(|row| row.measured).fold(0.0, f64::max);
    outcome(
        r.all_pass(),
        format!(
            "T(1),T(z),T(z^2) dev {:.1e}/{:.1e}/{:.1e}, rotation {:.1e}, max |T_l| {t_max:.4}, |T_0| {:.4}, global ratio {:.3} {}",
            get("lemma3.t_of_one"),
            get("lemma3.t_of_z"),
            get("lemma3.t_of_z2"),
            get("lemma3.rotation_identity"),
            get("lemma3.t_0_norm"),
            get("lemma3.global_ratio"),
            failures(&r)
        ),
    )
}

fn schur_constants() -> Outcome {
    let r = verify_schur(30, 200, 128).unwrap();
    let worst = |prefix: &str| {
        r.rows.iter().filter(|row| row.name.starts_with(prefix)).map(|row| row.measured).fold(f64::NEG_INFINITY, f64::max)
    };
    let log = worst("schur.l0_log_kernel");
    let half = worst("schur.l0_half_kernel");
    let gram = worst("schur.gram");
    let neg = worst("schur.bound");
    let ok = log <= 1.25 + 1e-3 && half <= 1.0 + 1e-3 && gram <= 1.5 + 1e-3 && neg <= 5.0 + 1e-3;
    outcome(ok, format!("log kernel {log:.6}, half kernel {half:.6}, l >= 1 {gram:.6}, l < 0 {neg:.6}"))
}

fn weighted_derivative() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let phis = vec![
        ("z".to_string(), p(&[0.0, 1.0])),
        ("z2".to_string(), p(&[0.0, 0.0, 1.0])),
        ("random".to_string(), AnalyticPoly::new((0..=8).map(|_| rand_c(&mut rng)).collect())),
    ];
    let grid = make_polar_grid(128, 256).unwrap();
    let r = lemma4_suite(&phis, &grid, 64).unwrap();
    let text: Vec<String> = r.rows.iter().map(|row| format!("{} {:.4} <= {:.4}", row.name, row.measured, row.bound)).collect();
    outcome(r.all_pass(), text.join(", "))
}

fn cauchy_oracle() -> Outcome {
    let one = c64(1.0, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let pts: Vec<Complex64> = (0..20)
        .map(|_| Complex64::from_polar(rng.gen_range(0.0..0.9), rng.gen_range(-PI..PI)))
        .collect();
    let quad = |w: &MonomialExpansion, z: Complex64| cauchy_transform_quad(|u| w.eval(u), z, 24, 256);
    let named: [(MonomialExpansion, fn(Complex64) -> Complex64); 3] = [
        (MonomialExpansion::constant(one), |z| z.conj()),
        (MonomialExpansion::monomial(0, 1, one), |z| z.conj() * z.conj() / 2.0),
        (MonomialExpansion::monomial(1, 0, one), |z| z * z.conj() - 1.0),
    ];
    let mut named_dev = 0.0f64;
    for (w, want) in &named {
        for &z in &pts {
            named_dev = named_dev.max((cauchy_transform(w, z) - want(z)).norm());
            named_dev = named_dev.max((quad(w, z) - want(z)).norm());
        }
    }
    let (mut general, mut dbar) = (0.0f64, 0.0f64);
    for n in 0..=3 {
        for m in 0..=3 {
            let w = MonomialExpansion::monomial(n, m, one);
            for &z in &pts {
                general = general.max((cauchy_transform(&w, z) - quad(&w, z)).norm());
                dbar = dbar.max(dbar_defect(&w, z, 1e-5));
            }
        }
    }
    outcome(
        named_dev <= 1e-5 && general <= 1e-5 && dbar <= 1e-6,
        format!("named forms {named_dev:.2e}, general (n,m) <= 3 {general:.2e}, dbar defect {dbar:.2e}"),
    )
}

struct SolveCase {
    label: String,
    generators: MultiplierTuple,
    dominated: AnalyticPoly,
    factor: AnalyticPoly,
    delta: f64,
}

fn solve_cases() -> Vec<SolveCase> {
    let first = (MultiplierTuple::new(vec![p(&[0.0, 0.5]), p(&[0.5])]).unwrap(), p(&[0.0, 0.5]), 0.25, "(z/2, 1/2)");
    let second = (
        MultiplierTuple::new(vec![p(&[0.0, 0.0, 0.5]), p(&[0.25, 0.25])]).unwrap(),
        p(&[0.0, 0.0, 0.5]),
        0.02,
        "(z^2/2, (1+z)/4)",
    );
    let factors = [("1", p(&[1.0])), ("z", p(&[0.0, 1.0])), ("z^5", p(&[0.0, 0.0, 0.0, 0.0, 0.0, 1.0]))];
    let mut out = Vec::new();
    for (f, h, delta, name) in [first, second] {
        for (hn, fac) in &factors {
            out.push(SolveCase {
                label: format!("F = {name}, h = {hn}"),
                generators: f.clone(),
                dominated: h.clone(),
                factor: fac.clone(),
                delta,
            });
        }
    }
    out
}

/// Solves one case; returns the outcome and, when accepted, the problem for the positivity check.
fn solve_case(c: &SolveCase) -> (Outcome, Option<(MultiplierTuple, AnalyticPoly, f64)>) {
    let problem =
        WolffProblem::new(c.generators.clone(), c.dominated.clone(), c.factor.clone(), c.delta).with_settings(SolverSettings::default());
    let s = match solve_uh(&problem) {
        Ok(s) => s,
        Err(e) => return (outcome(false, format!("{}: {e}", c.label)), None),
    };
    let k = norm_bound_k(multiplier_norm(&c.dominated).unwrap());
    let ok = s.residual <= 1e-6 && s.analyticity_defect <= 1e-5 && s.norm_ratio <= k;
    let detail = format!(
        "{}: residual {:.2e}, defect {:.2e}, ratio {:.4} <= K {:.2}",
        c.label, s.residual, s.analyticity_defect, s.norm_ratio, k
    );
    (outcome(ok, detail), ok.then(|| (c.generators.clone(), c.dominated.clone(), k)))
}

fn radical() -> Outcome {
    let sq = radical_diagnostic(&MultiplierTuple::new(vec![p(&[0.0, 1.0]), p(&[0.0])]).unwrap(), &p(&[0.0, 1.0]), 8, 64, 128).unwrap();
    let none = radical_diagnostic(&MultiplierTuple::new(vec![p(&[0.0, 1.0])]).unwrap(), &p(&[1.0]), 8, 64, 128).unwrap();
    let c0 = sq.c0.unwrap_or(f64::NAN);
    let ok = sq.m == Some(2) && (c0 - 1.0).abs() <= 1e-8 && none.m.is_none() && none.c0.is_none();
    outcome(ok, format!("(z, 0), H = z: m = {:?}, C0 = {c0:.12}; (z), H = 1: m = {:?}", sq.m, none.m))
}

fn kernel_facts() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let f = rand_poly(&mut rng, 20);
        let w = Complex64::from_polar(rng.gen_range(0.0..=0.9), rng.gen_range(-PI..PI));
        let n = 400;
        let v: Complex64 = to_orthonormal(&f, n).iter().zip(kernel_coords(w, n)).map(|(a, b)| a * b.conj()).sum();
        worst = worst.max((v - f.eval(w)).norm());
    }
    let c = cnp_coeffs(50);
    let (d1, d2) = ((c[0] - 0.5).abs(), (c[1] - 1.0 / 12.0).abs());
    let positive = c.iter().all(|&v| v > 0.0);
    outcome(
        worst <= 1e-10 && d1 <= 1e-14 && d2 <= 1e-14 && positive,
        format!("reproducing defect {worst:.2e}, |c1 - 1/2| {d1:.1e}, |c2 - 1/12| {d2:.1e}, c_n > 0 for n <= 50: {positive}"),
    )
}

fn row_column() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    let mut count = 0;
    while count < 50 {
        let f = rand_tuple(&mut rng, 4, 6);
        if f.is_zero() {
            continue;
        }
        let col = column_norm(&f, 64, DEFAULT_TOL).unwrap();
        let row = row_norm(&f, 64, DEFAULT_TOL).unwrap();
        worst = worst.max(row / col);
        count += 1;
    }
    outcome(worst <= 18f64.sqrt(), format!("max row/column {worst:.4} <= sqrt(18) = {:.4}", 18f64.sqrt()))
}

#[test]
fn acceptance() {
    let s = Duration::from_secs;
    let mut all = vec![
        run(1, "Q identity", s(1), q_identity),
        run(2, "derivative energy constant", s(30), derivative_energy),
        run(3, "singular operator", s(60), singular_operator),
        run(4, "Schur certificates", s(10), schur_constants),
        run(5, "weighted derivative", s(10), weighted_derivative),
        run(6, "Cauchy transform", s(10), cauchy_oracle),
    ];

    let mut accepted = Vec::new();
    for case in solve_cases() {
        all.push(run(7, "solve", s(60), || {
            let (o, acc) = solve_case(&case);
            accepted.extend(acc.map(|a| (case.label.clone(), a)));
            o
        }));
    }
    for (label, (f, h, k)) in &accepted {
        all.push(run(8, "truncated positivity", s(60), || {
            let gap = positivity_gap(f, h, *k, 64).unwrap();
            outcome(gap >= -1e-8, format!("{label}: smallest eigenvalue {gap:.3e}"))
        }));
    }
    all.push(run(8, "every solve accepted", s(1), || {
        outcome(accepted.len() == 6, format!("{} of 6 solves checked", accepted.len()))
    }));

    all.push(run(9, "radical diagnostic", s(5), radical));
    all.push(run(10, "kernel facts", s(1), kernel_facts));
    all.push(run(11, "row/column inequality", s(30), row_column));

    let failed = all.iter().filter(|&&p| !p).count();
    assert_eq!(failed, 0, "{failed} acceptance lines failed");
}
