//! The acceptance suite: thirteen numbered checks with fixed seeds,
//! tolerances and time limits. Used by the integration tests and by the
//! `selftest` command.

use std::f64::consts::TAU;
use std::fmt;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{CirclePoisson, QuadConfig};
use crate::corona::{
    corona_solve, corona_verify, koszul_fields, solution_values, CoronaOptions, CoronaProblem, VerifyOptions,
};
use crate::error::Result;
use crate::measure::{make_measure, MeasureSpec, Preset};
use crate::multiplier::{multiplier_certificate, multiplier_norm_lb, pick_positivity, shift_norm};
use crate::poly::CPoly;
use crate::potential::{check_kernel_estimate, eval_u, eval_v, v_envelope, KernelEstimateResolution};
use crate::quadrature::{circle_rule, DiskRule, RadialScheme};
use crate::spaces::{
    dmu_norm_sq, duality_pairing_check, green_check, local_dirichlet, LocalDirichletMethod, NormMode, Space,
};

type C64 = Complex64;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    /// Measured quantity and threshold, or the error that stopped the check.
    pub detail: String,
    pub seconds: f64,
    pub limit_seconds: f64,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {} {:<28} {:>8.2}s/{:<4}s  {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.seconds,
            self.limit_seconds,
            self.detail
        )
    }
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { passed, detail })
}

pub struct Criterion {
    pub id: usize,
    pub name: &'static str,
    pub limit_seconds: f64,
    check: fn() -> Result<Outcome>,
}

pub const CRITERIA: [Criterion; 13] = [
    Criterion { id: 1, name: "dirichlet weights", limit_seconds: 1.0, check: c01_weights },
    Criterion { id: 2, name: "monomial norms", limit_seconds: 10.0, check: c02_monomials },
    Criterion { id: 3, name: "local dirichlet", limit_seconds: 30.0, check: c03_local_dirichlet },
    Criterion { id: 4, name: "shift identity", limit_seconds: 5.0, check: c04_shift_identity },
    Criterion { id: 5, name: "green identity", limit_seconds: 5.0, check: c05_green },
    Criterion { id: 6, name: "cauchy duality pairing", limit_seconds: 60.0, check: c06_pairing },
    Criterion { id: 7, name: "v envelope", limit_seconds: 5.0, check: c07_envelope },
    Criterion { id: 8, name: "shift contraction on dual", limit_seconds: 30.0, check: c08_shift_contraction },
    Criterion { id: 9, name: "pick positivity", limit_seconds: 30.0, check: c09_pick },
    Criterion { id: 10, name: "kernel estimate stability", limit_seconds: 60.0, check: c10_kernel_estimate },
    Criterion { id: 11, name: "corona end to end", limit_seconds: 300.0, check: c11_corona },
    Criterion { id: 12, name: "corona invariants", limit_seconds: 60.0, check: c12_corona_invariants },
    Criterion { id: 13, name: "carleson and multiplier", limit_seconds: 30.0, check: c13_multiplier },
];

/// Runs one criterion; a check that returns an error counts as a failure.
pub fn run_criterion(c: &Criterion) -> CriterionResult {
    let start = Instant::now();
    let out = (c.check)();
    let seconds = start.elapsed().as_secs_f64();
    let (mut passed, mut detail) = match out {
        Ok(o) => (o.passed, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    if seconds > c.limit_seconds {
        passed = false;
        detail = format!("{detail}; over time limit");
    }
    CriterionResult { id: c.id, name: c.name, passed, detail, seconds, limit_seconds: c.limit_seconds }
}

pub fn run_all() -> Vec<CriterionResult> {
    CRITERIA.iter().map(run_criterion).collect()
}

pub fn criterion(id: usize) -> Option<&'static Criterion> {
    CRITERIA.iter().find(|c| c.id == id)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Degree drawn uniformly from `lo..=hi`.
fn random_poly_in(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> CPoly {
    let d = rng.gen_range(lo..=hi);
    random_poly(rng, d)
}

fn random_poly(rng: &mut ChaCha8Rng, degree: usize) -> CPoly {
    CPoly::new((0..=degree).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
}

/// Uniform in the disk of the given radius.
fn random_point(rng: &mut ChaCha8Rng, radius: f64) -> C64 {
    C64::from_polar(radius * rng.gen::<f64>().sqrt(), TAU * rng.gen::<f64>())
}

fn random_unimodular(rng: &mut ChaCha8Rng) -> C64 {
    C64::from_polar(1.0, TAU * rng.gen::<f64>())
}

/// The four measures the suite runs over.
pub fn presets() -> Vec<(&'static str, MeasureSpec)> {
    ["hardy", "dirichlet", "alpha:0.5", "atom:1"]
        .into_iter()
        .map(|name| (name, make_measure(Preset::parse(name).expect("preset name")).expect("preset")))
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn c01_weights() -> Result<Outcome> {
    let mu = make_measure(Preset::Dirichlet)?;
    let cfg = QuadConfig { n_circle: 256, circle_poisson: CirclePoisson::Quadrature, ..QuadConfig::default() };
    let mut r = rng(1);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let z = random_point(&mut r, 0.9);
        worst = worst.max((eval_u(&mu, z, &cfg)? - 1.0).abs()).max((eval_v(&mu, z, &cfg)? - 1.0).abs());
    }
    outcome(worst <= 1e-8, format!("max |W - 1| = {worst:.2e} (tol 1e-8)"))
}

fn c02_monomials() -> Result<Outcome> {
    let mu = make_measure(Preset::Dirichlet)?;
    let cfg = QuadConfig::default();
    let mut worst: f64 = 0.0;
    for k in 0..=8 {
        for mode in [NormMode::U, NormMode::V, NormMode::Measure] {
            let v = dmu_norm_sq(&CPoly::monomial(k, c(1.0, 0.0)), &mu, mode, &cfg)?;
            worst = worst.max(rel(v, 1.0 + k as f64));
        }
    }
    outcome(worst <= 1e-6, format!("max rel err = {worst:.2e} (tol 1e-6)"))
}

fn c03_local_dirichlet() -> Result<Outcome> {
    let cfg = QuadConfig::default();
    let b = LocalDirichletMethod::Boundary;
    let mut r = rng(3);
    let mut exact: f64 = 0.0;
    for k in 0..=10 {
        let zk = CPoly::monomial(k, c(1.0, 0.0));
        if k >= 1 {
            exact = exact.max((local_dirichlet(&zk, c(0.0, 0.0), b, &cfg)? - 1.0).abs());
        }
        for _ in 0..3 {
            exact = exact.max((local_dirichlet(&zk, random_unimodular(&mut r), b, &cfg)? - k as f64).abs());
        }
    }
    let mut area: f64 = 0.0;
    for i in 0..30 {
        let f = random_poly_in(&mut r, 1, 10);
        let lambda = if i % 5 == 0 { random_unimodular(&mut r) } else { random_point(&mut r, 1.0) };
        let want = local_dirichlet(&f, lambda, b, &cfg)?;
        let got = local_dirichlet(&f, lambda, LocalDirichletMethod::Area, &cfg)?;
        area = area.max(rel(got, want));
    }
    outcome(
        exact <= 1e-12 && area <= 1e-5,
        format!("boundary err = {exact:.2e} (tol 1e-12), area rel err = {area:.2e} (tol 1e-5)"),
    )
}

fn c04_shift_identity() -> Result<Outcome> {
    let cfg = QuadConfig::default();
    let b = LocalDirichletMethod::Boundary;
    let mut r = rng(4);
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let g = random_poly_in(&mut r, 0, 10);
        let lambda = if i % 4 == 0 { random_unimodular(&mut r) } else { random_point(&mut r, 1.0) };
        let lhs = local_dirichlet(&g, lambda, b, &cfg)?;
        let lg = g.backward_shift();
        let rhs = lg.eval(lambda).norm_sqr() + local_dirichlet(&lg, lambda, b, &cfg)?;
        worst = worst.max((lhs - rhs).abs() / lhs.max(f64::MIN_POSITIVE));
    }
    outcome(worst <= 1e-10, format!("max rel err = {worst:.2e} (tol 1e-10)"))
}

fn c05_green() -> Result<Outcome> {
    let disk = DiskRule::new(64, 32, RadialScheme::TanhSinh)?;
    let circle = circle_rule(64)?;
    let mut r = rng(5);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let p = random_poly_in(&mut r, 0, 12);
        worst = worst.max(green_check(&p, &disk, &circle)? / p.h2_norm_sq());
    }
    outcome(worst <= 1e-8, format!("max rel residual = {worst:.2e} (tol 1e-8)"))
}

fn c06_pairing() -> Result<Outcome> {
    let cfg = QuadConfig::default();
    let rule = circle_rule(64)?;
    let mut r = rng(6);
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, mu) in presets() {
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let p = random_poly_in(&mut r, 0, 8);
            let q = random_poly_in(&mut r, 0, 8);
            worst = worst.max(duality_pairing_check(&p, &q, &mu, &rule, &cfg)?.relative);
        }
        ok &= worst <= 1e-8;
        parts.push(format!("{name} {worst:.1e}"));
    }
    outcome(ok, format!("max rel residual: {} (tol 1e-8)", parts.join(", ")))
}

fn c07_envelope() -> Result<Outcome> {
    let cfg = QuadConfig::default();
    let mut r = rng(7);
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, mu) in presets() {
        let samples: Vec<C64> = (0..200).map(|_| random_point(&mut r, 0.999)).collect();
        let rep = v_envelope(&mu, &samples, &cfg)?;
        ok &= rep.violations == 0;
        parts.push(format!("{name} {}/200 outside, upper constant {:.3}", rep.violations, rep.upper_constant));
    }
    outcome(ok, format!("{} (bound uses constant 2, slack 1e-9)", parts.join(", ")))
}

fn c08_shift_contraction() -> Result<Outcome> {
    let cfg = QuadConfig::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, mu) in presets() {
        let (mut dual, mut explicit): (f64, f64) = (0.0, 0.0);
        for n in 0..=20 {
            dual = dual.max(shift_norm(Space::EmuDual, &mu, n, &cfg)?);
            explicit = explicit.max(shift_norm(Space::Emu, &mu, n, &cfg)?);
        }
        ok &= dual <= 1.0 + 1e-8;
        parts.push(format!("{name} {dual:.10} [explicit weight {explicit:.4}]"));
    }
    outcome(ok, format!("max norm: {} (tol 1 + 1e-8)", parts.join(", ")))
}

fn c09_pick() -> Result<Outcome> {
    let cfg = QuadConfig::default();
    let mut r = rng(9);
    let points: Vec<C64> = (0..6).map(|_| random_point(&mut r, 0.5)).collect();
    let phis = [CPoly::z(), CPoly::monomial(2, c(1.0, 0.0)), CPoly::new(vec![c(0.0, 0.0), c(0.5, 0.0), c(0.5, 0.0)])];
    let mut ok = true;
    let mut parts = Vec::new();
    for name in ["dirichlet", "hardy"] {
        let mu = make_measure(Preset::parse(name)?)?;
        let (mut dual, mut explicit) = (f64::INFINITY, f64::INFINITY);
        for phi in &phis {
            dual = dual.min(pick_positivity(Space::EmuDual, &mu, 20, phi, &points, &cfg)?.min_eigenvalue);
            explicit = explicit.min(pick_positivity(Space::Emu, &mu, 20, phi, &points, &cfg)?.min_eigenvalue);
        }
        ok &= dual >= -1e-6;
        parts.push(format!("{name} {dual:.2e} [explicit weight {explicit:.2e}]"));
    }
    outcome(ok, format!("min eigenvalue: {} (tol -1e-6)", parts.join(", ")))
}

fn c10_kernel_estimate() -> Result<Outcome> {
    let (s, rr, t) = (0.5, 3.0, 2.0);
    let mut r = rng(10);
    let mut pairs = vec![(c(0.0, 0.0), c(0.0, 0.0))];
    for i in 1..20 {
        let lambda = random_point(&mut r, 0.95);
        let zeta = if i % 3 == 0 { random_unimodular(&mut r) } else { random_point(&mut r, 1.0) };
        pairs.push((lambda, zeta));
    }
    let rep = check_kernel_estimate(s, rr, t, &pairs, KernelEstimateResolution::default())?;
    let origin = (rep.samples[0].ratio_refined - 1.0 / (s + 1.0)).abs();
    outcome(
        rep.stable && origin <= 1e-8,
        format!(
            "max change {:.2e} (tol 5e-2), origin err {origin:.2e} (tol 1e-8), max ratio {:.3}",
            rep.max_relative_change, rep.max_ratio
        ),
    )
}

fn pair_data() -> Vec<CPoly> {
    vec![CPoly::z(), CPoly::new(vec![c(1.0, 0.0), c(-0.5, 0.0)])]
}

fn c11_corona() -> Result<Outcome> {
    let mut ok = true;
    let mut parts = Vec::new();
    for name in ["dirichlet", "atom:1", "alpha:0.5"] {
        let problem = CoronaProblem {
            f: pair_data(),
            h: CPoly::constant(c(1.0, 0.0)),
            measure: make_measure(Preset::parse(name)?)?,
            delta: None,
        };
        let sol = corona_solve(&problem, &CoronaOptions::default())?;
        let rep = corona_verify(&sol, &problem, &VerifyOptions::default())?;
        let bezout = rep.bezout_max.max(rep.bezout_fit_max).max(sol.bezout_max);
        let dbar = rep.dbar_residuals.iter().copied().fold(0.0, f64::max);
        let fit = rep.fit_residuals.iter().copied().fold(0.0, f64::max);
        let ratio = rep.bound_ratios.iter().copied().fold(0.0, f64::max);
        ok &= bezout <= 1e-6 && dbar <= 1e-4 && fit <= 1e-6 && rep.all_finite && ratio <= 1.0;
        parts.push(format!(
            "{name}: delta^2 {:.4} bezout {bezout:.1e} dbar {dbar:.1e} fit {fit:.1e} ratio {ratio:.3}",
            sol.delta.delta * sol.delta.delta
        ));
    }
    outcome(ok, parts.join("; "))
}

fn c12_corona_invariants() -> Result<Outcome> {
    let f = pair_data();
    let mut r = rng(12);
    let mut partition: f64 = 0.0;
    for _ in 0..100 {
        let z = random_point(&mut r, 1.0);
        let k = koszul_fields(&f, z)?;
        let s: C64 = f.iter().zip(&k.phi).map(|(p, phi)| p.eval(z) * phi).sum();
        partition = partition.max((s - 1.0).norm());
    }
    let opts = CoronaOptions::default();
    let dirichlet = make_measure(Preset::Dirichlet)?;
    let h1 = random_poly(&mut r, 3);
    let h2 = random_poly(&mut r, 2);
    let prob = |h: CPoly| CoronaProblem { f: f.clone(), h, measure: dirichlet.clone(), delta: None };
    let sol = corona_solve(&prob(h1.clone()), &opts)?;
    let koszul = sol.koszul_cancellation;
    let pts = &sol.grid;
    let g1 = &sol.g;
    let g2 = solution_values(&prob(h2.clone()), pts, opts.transform)?;
    let g12 = solution_values(&prob(&h1 + &h2), pts, opts.transform)?;
    let scale = g12.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    let mut lin: f64 = 0.0;
    for i in 0..pts.len() {
        for j in 0..f.len() {
            lin = lin.max((g12[i][j] - g1[i][j] - g2[i][j]).norm() / scale);
        }
    }
    let h = random_poly(&mut r, 4);
    let one = prob(h.clone());
    let one = CoronaProblem { f: vec![CPoly::constant(c(1.0, 0.0))], ..one };
    let s1 = corona_solve(&one, &opts)?;
    let v1 = corona_verify(&s1, &one, &VerifyOptions::default())?;
    let trivial =
        s1.g.iter()
            .zip(&s1.grid)
            .map(|(row, &z)| (row[0] - h.eval(z)).norm())
            .fold(v1.bezout_max.max(v1.bezout_fit_max).max(v1.fit_residuals[0]), f64::max);
    let ratio_err = (s1.bound_ratios[0] - 1.0).abs();
    outcome(
        partition <= 1e-12 && koszul <= 1e-10 && lin <= 1e-9 && trivial <= 1e-10 && ratio_err <= 1e-8,
        format!(
            "partition {partition:.1e} (1e-12), koszul {koszul:.1e} (1e-10), linearity {lin:.1e} (1e-9), n=1 residual {trivial:.1e} (1e-10), n=1 ratio err {ratio_err:.1e}"
        ),
    )
}

fn c13_multiplier() -> Result<Outcome> {
    let cfg = QuadConfig::default();
    let mu = make_measure(Preset::Dirichlet)?;
    let lb = multiplier_norm_lb(&CPoly::z(), &mu, 20, &cfg)?;
    let cert = multiplier_certificate(&CPoly::z(), &mu, 20, 256, &cfg)?;
    let ok = (1.0..=2f64.sqrt()).contains(&lb)
        && (cert.sup_boundary - 1.0).abs() <= 1e-12
        && cert.carleson.constant <= 1.0 + 1e-6;
    outcome(
        ok,
        format!(
            "norm lb {lb:.6} in [1, 1.414214], sup_T {:.12}, carleson {:.8} (tol 1 + 1e-6)",
            cert.sup_boundary, cert.carleson.constant
        ),
    )
}
