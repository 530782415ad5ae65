// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod inputs;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mu_corona::acceptance::{self, CriterionResult};
use mu_corona::corona::{corona_solve, corona_verify, polar_grid, CoronaOptions, GridSpec, VerifyOptions};
use mu_corona::multiplier::{carleson_constant, multiplier_certificate, multiplier_norm_lb, pick_positivity};
use mu_corona::potential::weight_field;
use mu_corona::quadrature::circle_rule;
use mu_corona::spaces::{
    dmu_norm_sq, duality_pairing_check, hd_norm_sq, local_dirichlet, LocalDirichletMethod, NormMode, Space,
};
use mu_corona::QuadConfig;
use serde::Serialize;
use serde_json::{json, Value};

/// Exit status 2 for bad input, 1 for failed numerics or checks.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

impl From<mu_corona::Error> for Failure {
    fn from(e: mu_corona::Error) -> Self {
        Failure { code: if e.is_input_error() { 2 } else { 1 }, message: e.to_string() }
    }
}

#[derive(Parser)]
#[command(
    name = "mu-corona",
    version,
    about = "Dirichlet-type spaces D(μ): weights, norms, duality, multipliers and corona solutions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    run: RunConfig,
}

/// Settings shared by every subcommand.
#[derive(Args, Clone, Debug, Serialize)]
struct RunConfig {
    /// Report destination; stdout when absent.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Radial node count of disk rules (Gauss–Legendre and tanh-sinh).
    #[arg(long, global = true)]
    nr: Option<usize>,
    /// Angular node count of disk rules.
    #[arg(long, global = true)]
    ntheta: Option<usize>,
    /// Node count of circle rules.
    #[arg(long, global = true)]
    ncircle: Option<usize>,
    /// Truncation degree, or the fit degree for `corona solve`.
    #[arg(long, global = true)]
    degree: Option<usize>,
    /// Acceptance tolerance of the subcommand's check.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker threads.
    #[arg(long, global = true, env = "MU_CORONA_JOBS")]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// CSV of U_μ and V_μ on a polar grid or at given points.
    Weight {
        #[arg(long)]
        measure: String,
        /// `re,im;re,im;...` or a JSON file of pairs; a polar grid otherwise.
        #[arg(long)]
        points: Option<String>,
        #[arg(long, default_value_t = 0.9)]
        radius: f64,
        #[arg(long, default_value_t = 9)]
        rings: usize,
        #[arg(long, default_value_t = 36)]
        spokes: usize,
    },
    /// Squared D(μ) norm of a polynomial.
    Norm {
        #[arg(long)]
        measure: String,
        #[arg(long)]
        poly: String,
        #[arg(long, value_enum, default_value_t = ModeArg::V)]
        mode: ModeArg,
    },
    /// Local Dirichlet integral D_λ(f).
    Localdir {
        #[arg(long)]
        poly: String,
        /// `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Boundary)]
        method: MethodArg,
    },
    /// Cauchy duality pairing ∫_T p·conj(Uq) against ⟨p, q⟩ in D(μ).
    DualCheck {
        #[arg(long)]
        measure: String,
        #[arg(long)]
        poly: String,
        /// Second polynomial; `poly` when absent.
        #[arg(long)]
        q: Option<String>,
    },
    /// Squared HD(μ) norm of a trigonometric polynomial.
    HdNorm {
        #[arg(long)]
        measure: String,
        /// Analytic coefficient list or `{"coeffs": [[m, re, im], ...]}`.
        #[arg(long)]
        poly: String,
    },
    /// Carleson constant of ν for D(μ) at a truncation degree.
    Carleson {
        #[arg(long)]
        nu: String,
        #[arg(long)]
        measure: String,
    },
    /// Multiplier norm lower bound and boundedness certificate.
    MultNorm {
        #[arg(long)]
        measure: String,
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 1024)]
        samples: usize,
    },
    /// Pick matrix positivity for a symbol at given points.
    Pick {
        #[arg(long)]
        measure: String,
        #[arg(long)]
        poly: String,
        #[arg(long, allow_hyphen_values = true)]
        points: String,
        #[arg(long, default_value = "emu_dual")]
        space: String,
    },
    /// Constructive corona solver.
    #[command(subcommand)]
    Corona(CoronaCommand),
    /// Runs the acceptance suite and prints a pass/fail table.
    Selftest {
        /// Criterion numbers; all when absent.
        ids: Vec<usize>,
    },
}

#[derive(Subcommand)]
enum CoronaCommand {
    Solve {
        #[arg(long)]
        problem: String,
        /// Radius of the evaluation and fitting disk.
        #[arg(long)]
        grid: Option<f64>,
        #[arg(long)]
        rings: Option<usize>,
        #[arg(long)]
        spokes: Option<usize>,
    },
    Verify {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        solution: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    U,
    V,
    Measure,
}

impl From<ModeArg> for NormMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::U => NormMode::U,
            ModeArg::V => NormMode::V,
            ModeArg::Measure => NormMode::Measure,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Boundary,
    Area,
}

impl RunConfig {
    fn validate(&self) -> Result<(), Failure> {
        for (name, v) in [("nr", self.nr), ("ntheta", self.ntheta), ("ncircle", self.ncircle), ("jobs", self.jobs)] {
            if v == Some(0) {
                return Err(Failure::input(format!("--{name} must be at least 1")));
            }
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Failure::input(format!("--tol must be positive, got {t}")));
            }
        }
        Ok(())
    }

    fn quad(&self) -> QuadConfig {
        let mut cfg = QuadConfig::default();
        if let Some(n) = self.nr {
            cfg.n_r = n;
            cfg.n_tanh = n;
        }
        if let Some(n) = self.ntheta {
            cfg.n_theta = n;
        }
        if let Some(n) = self.ncircle {
            cfg.n_circle = n;
        }
        cfg
    }

    fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    fn degree_or(&self, default: usize) -> usize {
        self.degree.unwrap_or(default)
    }

    fn config_value(&self, extra: Value) -> Value {
        let mut v = json!({ "quad": self.quad() });
        if let (Some(obj), Value::Object(more)) = (v.as_object_mut(), extra) {
            obj.extend(more);
        }
        v
    }
}

fn relative_change(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// A JSON report with a pass flag; a failed check maps to exit status 1.
fn checked(
    run: &RunConfig,
    command: &str,
    config: Value,
    passed: bool,
    report: impl Serialize,
) -> Result<bool, Failure> {
    report::emit(&report::envelope(command, run.config_value(config), report)?, run.out.as_deref())?;
    Ok(passed)
}

fn weight(
    run: &RunConfig,
    measure: &str,
    points: Option<&str>,
    radius: f64,
    rings: usize,
    spokes: usize,
) -> Result<bool, Failure> {
    let mu = inputs::measure(measure)?;
    let pts = match points {
        Some(p) => inputs::points(p)?,
        None => {
            if rings == 0 || spokes == 0 || !(radius > 0.0 && radius < 1.0) {
                return Err(Failure::input("the weight grid needs rings, spokes ≥ 1 and a radius in (0, 1)"));
            }
            polar_grid(radius, GridSpec { n_radial: rings, n_angular: spokes })
        }
    };
    let cfg = run.quad();
    let field = weight_field(&mu, &pts, &cfg)?;
    let fine = weight_field(&mu, &pts, &cfg.refined())?;
    let delta = field
        .u
        .iter()
        .zip(&fine.u)
        .chain(field.v.iter().zip(&fine.v))
        .map(|(a, b)| relative_change(*a, *b))
        .fold(0.0, f64::max);
    let provenance = [
        ("measure", mu.label.clone()),
        ("n_r", cfg.n_r.to_string()),
        ("n_theta", cfg.n_theta.to_string()),
        ("n_circle", cfg.n_circle.to_string()),
        ("n_tanh", cfg.n_tanh.to_string()),
        ("refinement_delta", format!("{delta:e}")),
    ];
    let mut text = report::csv_header("weight", &provenance, &["re", "im", "U", "V"]);
    for ((z, u), v) in pts.iter().zip(&field.u).zip(&field.v) {
        text.push_str(&format!("{:e},{:e},{:e},{:e}\n", z.re, z.im, u, v));
    }
    report::emit(&text, run.out.as_deref())?;
    Ok(true)
}

fn norm(run: &RunConfig, measure: &str, poly: &str, mode: ModeArg) -> Result<bool, Failure> {
    let mu = inputs::measure(measure)?;
    let f = inputs::poly(poly)?;
    let cfg = run.quad();
    let mode = NormMode::from(mode);
    let value = dmu_norm_sq(&f, &mu, mode, &cfg)?;
    let refined = dmu_norm_sq(&f, &mu, mode, &cfg.refined())?;
    let mut spread = 0.0f64;
    let mut all = serde_json::Map::new();
    for m in [NormMode::U, NormMode::V, NormMode::Measure] {
        let v = if m == mode { value } else { dmu_norm_sq(&f, &mu, m, &cfg)? };
        spread = spread.max(relative_change(value, v));
        all.insert(m.to_string(), json!(v));
    }
    let report = json!({
        "quantity": "norm_sq",
        "value": value,
        "mode": mode,
        "measure": mu.label,
        "all_modes": all,
        "residuals": { "refinement_delta": relative_change(value, refined), "mode_spread": spread },
    });
    checked(run, "norm", json!({}), true, report)
}

fn localdir(run: &RunConfig, poly: &str, lambda: &str, method: MethodArg) -> Result<bool, Failure> {
    let f = inputs::poly(poly)?;
    let lam = inputs::point(lambda)?;
    let cfg = run.quad();
    let (m, name) = match method {
        MethodArg::Boundary => (LocalDirichletMethod::Boundary, "boundary"),
        MethodArg::Area => (LocalDirichletMethod::Area, "area"),
    };
    let value = local_dirichlet(&f, lam, m, &cfg)?;
    let refined = local_dirichlet(&f, lam, m, &cfg.refined())?;
    let other = match m {
        LocalDirichletMethod::Boundary => LocalDirichletMethod::Area,
        LocalDirichletMethod::Area => LocalDirichletMethod::Boundary,
    };
    let gap = if value == 0.0 { 0.0 } else { relative_change(value, local_dirichlet(&f, lam, other, &cfg)?) };
    let report = json!({
        "value": value,
        "mode": name,
        "lambda": lam,
        "residuals": { "refinement_delta": relative_change(value, refined), "method_gap": gap },
    });
    checked(run, "localdir", json!({}), true, report)
}

fn dual_check(run: &RunConfig, measure: &str, poly: &str, q: Option<&str>) -> Result<bool, Failure> {
    let mu = inputs::measure(measure)?;
    let p = inputs::poly(poly)?;
    let q = match q {
        Some(q) => inputs::poly(q)?,
        None => p.clone(),
    };
    let cfg = run.quad();
    let tol = run.tol_or(1e-8);
    let rule = circle_rule(cfg.n_circle)?;
    let check = duality_pairing_check(&p, &q, &mu, &rule, &cfg)?;
    let fine_cfg = cfg.refined();
    let fine = duality_pairing_check(&p, &q, &mu, &circle_rule(fine_cfg.n_circle)?, &fine_cfg)?;
    let passed = check.relative <= tol;
    let report = json!({
        "value": check.relative,
        "mode": "relative_residual",
        "passed": passed,
        "pairing": check.pairing,
        "inner": check.inner,
        "residuals": {
            "absolute": check.residual,
            "relative": check.relative,
            "refinement_delta": (check.pairing - fine.pairing).norm() / check.pairing.norm().max(f64::MIN_POSITIVE),
        },
        "sample_radius": check.sample_radius,
    });
    checked(run, "dual-check", json!({ "tol": tol, "measure": mu.label }), passed, report)
}

fn hd_norm(run: &RunConfig, measure: &str, poly: &str) -> Result<bool, Failure> {
    let mu = inputs::measure(measure)?;
    let f = inputs::trig_poly(poly)?;
    let cfg = run.quad();
    let value = hd_norm_sq(&f, &mu, &cfg)?;
    let refined = hd_norm_sq(&f, &mu, &cfg.refined())?;
    let report = json!({
        "quantity": "norm_sq",
        "value": value,
        "mode": "measure",
        "measure": mu.label,
        "residuals": { "refinement_delta": relative_change(value, refined) },
    });
    checked(run, "hd-norm", json!({}), true, report)
}

fn carleson(run: &RunConfig, nu: &str, measure: &str) -> Result<bool, Failure> {
    let nu = inputs::measure(nu)?;
    let mu = inputs::measure(measure)?;
    let n = run.degree_or(16);
    let r = carleson_constant(&nu, &mu, n, &run.quad())?;
    checked(run, "carleson", json!({ "degree": n }), true, r)
}

fn mult_norm(run: &RunConfig, measure: &str, poly: &str, samples: usize) -> Result<bool, Failure> {
    let mu = inputs::measure(measure)?;
    let phi = inputs::poly(poly)?;
    let n = run.degree_or(16);
    let cfg = run.quad();
    let lb = multiplier_norm_lb(&phi, &mu, n, &cfg)?;
    let refined = multiplier_norm_lb(&phi, &mu, n, &cfg.refined())?;
    // a lower bound that still grows with N says the truncation is short
    let half = multiplier_norm_lb(&phi, &mu, n / 2, &cfg)?;
    let cert = multiplier_certificate(&phi, &mu, n, samples, &cfg)?;
    let report = json!({
        "value": lb,
        "mode": "lower_bound",
        "lower_bound_half_degree": half,
        "certificate": cert,
        "residuals": { "refinement_delta": relative_change(lb, refined), "degree_growth": relative_change(lb, half) },
    });
    checked(run, "mult-norm", json!({ "degree": n, "samples": samples }), true, report)
}

fn pick(run: &RunConfig, measure: &str, poly: &str, points: &str, space: &str) -> Result<bool, Failure> {
    let mu = inputs::measure(measure)?;
    let phi = inputs::poly(poly)?;
    let pts = inputs::points(points)?;
    let space: Space = space.parse()?;
    let n = run.degree_or(20);
    let tol = run.tol_or(1e-6);
    let cfg = run.quad();
    let r = pick_positivity(space, &mu, n, &phi, &pts, &cfg)?;
    let fine = pick_positivity(space, &mu, n, &phi, &pts, &cfg.refined())?;
    let passed = r.min_eigenvalue >= -tol;
    let report = json!({
        "value": r.min_eigenvalue,
        "mode": "min_eigenvalue",
        "passed": passed,
        "pick": r,
        "residuals": { "refinement_delta": (r.min_eigenvalue - fine.min_eigenvalue).abs() },
    });
    checked(run, "pick", json!({ "degree": n, "tol": tol, "measure": mu.label }), passed, report)
}

fn corona_solve_cmd(
    run: &RunConfig,
    problem: &str,
    radius: Option<f64>,
    rings: Option<usize>,
    spokes: Option<usize>,
) -> Result<bool, Failure> {
    let prob = inputs::problem(problem)?;
    let mut opts = CoronaOptions { quad: run.quad(), degree: run.degree, ..CoronaOptions::default() };
    if let Some(r) = radius {
        if !(r > 0.0 && r < 1.0) {
            return Err(Failure::input(format!("--grid radius must lie in (0, 1), got {r}")));
        }
        opts.radius = r;
    }
    if let Some(n) = rings {
        opts.grid.n_radial = n;
    }
    if let Some(n) = spokes {
        opts.grid.n_angular = n;
    }
    if opts.grid.n_radial == 0 || opts.grid.n_angular == 0 {
        return Err(Failure::input("the corona grid needs rings, spokes ≥ 1"));
    }
    if let Some(n) = run.nr {
        opts.transform.n_rho = n;
    }
    if let Some(n) = run.ntheta {
        opts.transform.n_theta = n;
    }
    if let Some(t) = run.tol {
        opts.fit_tol = t;
    }
    let sol = corona_solve(&prob, &opts)?;
    let text = report::envelope("corona solve", run.config_value(json!({ "corona": opts })), &sol)?;
    report::emit(&text, run.out.as_deref())?;
    if run.out.is_some() {
        eprintln!(
            "n={} δ={:.4} bezout={:.2e} fit degrees {:?} ratios {:?}",
            sol.n,
            sol.delta.delta,
            sol.bezout_max,
            sol.fits.iter().map(|f| f.degree).collect::<Vec<_>>(),
            sol.bound_ratios
        );
    }
    Ok(true)
}

const BEZOUT_TOL: f64 = 1e-6;
const DBAR_TOL: f64 = 1e-4;
const FIT_TOL: f64 = 1e-6;

fn corona_verify_cmd(run: &RunConfig, problem: &str, solution: &str) -> Result<bool, Failure> {
    let prob = inputs::problem(problem)?;
    let sol = inputs::solution(solution)?;
    let opts = VerifyOptions::default();
    let r = corona_verify(&sol, &prob, &opts)?;
    let bezout_tol = run.tol_or(BEZOUT_TOL);
    let checks = json!({
        "bezout": r.bezout_max <= bezout_tol,
        "dbar": r.dbar_residuals.iter().all(|&x| x <= DBAR_TOL),
        "fit": r.fit_residuals.iter().all(|&x| x <= FIT_TOL),
        "bound_ratio": r.bound_ratios.iter().all(|&x| x.is_finite() && x <= 1.0),
        "finite": r.all_finite,
    });
    let passed = checks.as_object().unwrap().values().all(|v| v == &json!(true));
    let report = json!({
        "passed": passed,
        "checks": checks,
        "verify": r,
        "residuals": { "refinement_delta": sol.refinement_delta },
    });
    let config = json!({
        "verify": opts,
        "tolerances": { "bezout": bezout_tol, "dbar": DBAR_TOL, "fit": FIT_TOL, "bound_ratio": 1.0 },
        "solution_options": sol.options,
    });
    checked(run, "corona verify", config, passed, report)
}

fn selftest(run: &RunConfig, ids: &[usize]) -> Result<bool, Failure> {
    let chosen: Vec<_> = if ids.is_empty() {
        acceptance::CRITERIA.iter().collect()
    } else {
        ids.iter()
            .map(|&i| acceptance::criterion(i).ok_or_else(|| Failure::input(format!("no criterion {i}"))))
            .collect::<Result<_, _>>()?
    };
    let mut results: Vec<CriterionResult> = Vec::new();
    for c in chosen {
        let r = acceptance::run_criterion(c);
        println!("{r}");
        results.push(r);
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} passed, {failed} failed", results.len() - failed);
    if let Some(path) = run.out.as_deref() {
        report::emit(&report::envelope("selftest", run.config_value(json!({})), &results)?, Some(path))?;
    }
    Ok(failed == 0)
}

fn dispatch(cli: Cli) -> Result<bool, Failure> {
    let run = cli.run;
    run.validate()?;
    if let Some(j) = run.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| Failure::input(format!("cannot start {j} worker threads: {e}")))?;
    }
    match cli.command {
        Command::Weight { measure, points, radius, rings, spokes } => {
            weight(&run, &measure, points.as_deref(), radius, rings, spokes)
        }
        Command::Norm { measure, poly, mode } => norm(&run, &measure, &poly, mode),
        Command::Localdir { poly, lambda, method } => localdir(&run, &poly, &lambda, method),
        Command::DualCheck { measure, poly, q } => dual_check(&run, &measure, &poly, q.as_deref()),
        Command::HdNorm { measure, poly } => hd_norm(&run, &measure, &poly),
        Command::Carleson { nu, measure } => carleson(&run, &nu, &measure),
        Command::MultNorm { measure, poly, samples } => mult_norm(&run, &measure, &poly, samples),
        Command::Pick { measure, poly, points, space } => pick(&run, &measure, &poly, &points, &space),
        Command::Corona(CoronaCommand::Solve { problem, grid, rings, spokes }) => {
            corona_solve_cmd(&run, &problem, grid, rings, spokes)
        }
        Command::Corona(CoronaCommand::Verify { problem, solution }) => corona_verify_cmd(&run, &problem, &solution),
        Command::Selftest { ids } => selftest(&run, &ids),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("mu-corona: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
