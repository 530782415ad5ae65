//! Constructive solution of the Bezout equation `Σ f_j g_j = h`.
//!
//! Start from the smooth solution `φ_j h` with `φ_j = conj(f_j)/|f|²` and
//! repair holomorphy with the Koszul correction
//! `g_j = φ_j h + Σ_k (a_jk − a_kj) f_k`, where `a_jk` is the planar Cauchy
//! transform of `φ_j ∂̄φ_k h`, so that `∂̄a_jk = φ_j ∂̄φ_k h`. The corrections
//! cancel in `Σ f_j g_j` because `a_jk − a_kj` is antisymmetric.
//!
//! `g_j` is held on an evaluation grid and as a least-squares polynomial
//! `ĝ_j`; all D(μ) norms refer to `ĝ_j`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::config::QuadConfig;
use crate::error::{Error, Result};
use crate::measure::MeasureSpec;
use crate::poly::{check_finite, CPoly};
use crate::quadrature::{cauchy_transform_multi, PolarSpec};
use crate::spaces::{gram_matrix, Space};

type C64 = Complex64;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaResolution {
    /// Rings at radii `i / n_radial`, `0 ≤ i ≤ n_radial`.
    pub n_radial: usize,
    pub n_angular: usize,
}

impl Default for DeltaResolution {
    fn default() -> Self {
        DeltaResolution { n_radial: 400, n_angular: 2048 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaSource {
    GridLipschitz,
    UserSupplied,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeltaCertificate {
    pub delta: f64,
    pub source: DeltaSource,
    /// Minimum of `|f|` over the grid on the closed disk.
    pub grid_min: f64,
    /// `Σ_j ‖f_j′‖₁`, a Lipschitz bound for `|f|` on the closed disk.
    pub lipschitz: f64,
    /// Largest distance from a point of the closed disk to the grid.
    pub spacing: f64,
    pub resolution: DeltaResolution,
}

fn norm_f(f: &[CPoly], z: C64) -> f64 {
    f.iter().map(|p| p.eval(z).norm_sqr()).sum::<f64>().sqrt()
}

fn validate_data(f: &[CPoly]) -> Result<()> {
    if f.is_empty() {
        return Err(Error::InvalidInput("corona data needs at least one function".into()));
    }
    for (j, p) in f.iter().enumerate() {
        check_finite(p, &format!("f[{j}]"))?;
    }
    Ok(())
}

fn grid_min(f: &[CPoly], res: DeltaResolution) -> f64 {
    (0..=res.n_radial)
        .into_par_iter()
        .map(|i| {
            let r = i as f64 / res.n_radial as f64;
            let count = if i == 0 { 1 } else { res.n_angular };
            (0..count)
                .map(|k| norm_f(f, C64::from_polar(r, TAU * k as f64 / res.n_angular as f64)))
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min)
}

/// Certified lower bound `δ ≤ inf_D |f|` from a polar grid and a Lipschitz
/// bound: `δ = min_grid |f| − L·spacing`.
pub fn certify_delta(f: &[CPoly], res: DeltaResolution) -> Result<DeltaCertificate> {
    validate_data(f)?;
    if res.n_radial == 0 || res.n_angular == 0 {
        return Err(Error::InvalidInput("δ grid needs positive sizes".into()));
    }
    let m = grid_min(f, res);
    let lipschitz: f64 = f.iter().map(|p| p.derivative().coefficient_bound()).sum();
    let spacing = 0.5 / res.n_radial as f64 + PI / res.n_angular as f64;
    let delta = if lipschitz == 0.0 { m } else { m - lipschitz * spacing };
    if !(delta > 0.0) {
        return Err(Error::Uncertified(format!(
            "corona condition not certified: grid minimum {m:.3e}, Lipschitz bound {lipschitz:.3e}, spacing {spacing:.3e}"
        )));
    }
    Ok(DeltaCertificate { delta, source: DeltaSource::GridLipschitz, grid_min: m, lipschitz, spacing, resolution: res })
}

/// Accepts a user-supplied `δ` after checking `δ ≤ min_grid |f|`.
pub fn accept_delta(f: &[CPoly], delta: f64, res: DeltaResolution) -> Result<DeltaCertificate> {
    validate_data(f)?;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidInput(format!("δ must be positive, got {delta}")));
    }
    let m = grid_min(f, res);
    if delta > m {
        return Err(Error::InvalidInput(format!("supplied δ = {delta} exceeds the grid minimum {m} of |f|")));
    }
    Ok(DeltaCertificate {
        delta,
        source: DeltaSource::UserSupplied,
        grid_min: m,
        lipschitz: f.iter().map(|p| p.derivative().coefficient_bound()).sum(),
        spacing: 0.5 / res.n_radial as f64 + PI / res.n_angular as f64,
        resolution: res,
    })
}

/// `φ_j`, `φ_j ∂̄φ_k` and `∂(φ_j ∂̄φ_k)` at one point, indexed `[j]`/`[j][k]`.
#[derive(Clone, Debug, Serialize)]
pub struct KoszulFields {
    pub phi: Vec<C64>,
    pub phi_dbar: Vec<Vec<C64>>,
    pub d_phi_dbar: Vec<Vec<C64>>,
}

/// Pointwise data shared by the field formulas: `S = |f|²`, `P = ∂S`,
/// `R = Σ|f_i′|²`, conjugated values and derivatives.
struct Local {
    cf: Vec<C64>,
    cdf: Vec<C64>,
    s: f64,
    p: C64,
    r: f64,
}

impl Local {
    fn at(f: &[CPoly], z: C64) -> Local {
        let mut cf = Vec::with_capacity(f.len());
        let mut cdf = Vec::with_capacity(f.len());
        let (mut s, mut p, mut r) = (0.0, zero(), 0.0);
        for q in f {
            let (v, d) = q.eval_with_derivative(z);
            s += v.norm_sqr();
            p += d * v.conj();
            r += d.norm_sqr();
            cf.push(v.conj());
            cdf.push(d.conj());
        }
        Local { cf, cdf, s, p, r }
    }

    /// `φ_j ∂̄φ_k = conj(f_j)conj(f_k′)/S² − conj(f_j)conj(f_k) conj(P)/S³`.
    fn phi_dbar(&self, j: usize, k: usize) -> C64 {
        let s2 = self.s * self.s;
        self.cf[j] * (self.cdf[k] / s2 - self.cf[k] * self.p.conj() / (s2 * self.s))
    }

    /// `∂(φ_j ∂̄φ_k) = −2 conj(f_j)conj(f_k′) P/S³ − conj(f_j)conj(f_k)(R/S³ − 3|P|²/S⁴)`.
    fn d_phi_dbar(&self, j: usize, k: usize) -> C64 {
        let s3 = self.s * self.s * self.s;
        let a = self.cf[j] * self.cdf[k] * self.p * (-2.0 / s3);
        let b = self.cf[j] * self.cf[k] * (self.r / s3 - 3.0 * self.p.norm_sqr() / (s3 * self.s));
        a - b
    }
}

pub fn koszul_fields(f: &[CPoly], z: C64) -> Result<KoszulFields> {
    validate_data(f)?;
    let l = Local::at(f, z);
    if !(l.s > 0.0) {
        return Err(Error::out_of_domain(z, "|f| vanishes"));
    }
    let n = f.len();
    let table = |g: &dyn Fn(usize, usize) -> C64| (0..n).map(|j| (0..n).map(|k| g(j, k)).collect()).collect();
    Ok(KoszulFields {
        phi: l.cf.iter().map(|c| c / l.s).collect(),
        phi_dbar: table(&|j, k| l.phi_dbar(j, k)),
        d_phi_dbar: table(&|j, k| l.d_phi_dbar(j, k)),
    })
}

#[derive(Clone, Debug)]
pub struct CoronaProblem {
    pub f: Vec<CPoly>,
    pub h: CPoly,
    pub measure: MeasureSpec,
    /// User-supplied lower bound for `inf_D |f|`; certified on a grid if absent.
    pub delta: Option<f64>,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct ProblemJson {
    measure: serde_json::Value,
    f: Vec<CPoly>,
    h: CPoly,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    delta: Option<f64>,
}

impl CoronaProblem {
    pub fn from_json(text: &str) -> Result<CoronaProblem> {
        let raw: ProblemJson = serde_json::from_str(text)?;
        let p = CoronaProblem { f: raw.f, h: raw.h, measure: MeasureSpec::from_value(raw.measure)?, delta: raw.delta };
        validate_data(&p.f)?;
        check_finite(&p.h, "h")?;
        Ok(p)
    }

    pub fn to_json(&self) -> Result<String> {
        let raw =
            ProblemJson { measure: self.measure.to_value()?, f: self.f.clone(), h: self.h.clone(), delta: self.delta };
        Ok(serde_json::to_string_pretty(&raw)?)
    }

    fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.f.len();
        (0..n).flat_map(|j| (0..n).filter(move |&k| k != j).map(move |k| (j, k))).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_radial: usize,
    pub n_angular: usize,
}

/// Points `R·(i/n_r)·e^{2πik/n_θ}` for `1 ≤ i ≤ n_r` plus the origin.
pub fn polar_grid(radius: f64, spec: GridSpec) -> Vec<C64> {
    let mut pts = vec![zero()];
    for i in 1..=spec.n_radial {
        let r = radius * i as f64 / spec.n_radial as f64;
        pts.extend((0..spec.n_angular).map(|k| C64::from_polar(r, TAU * k as f64 / spec.n_angular as f64)));
    }
    pts
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CoronaOptions {
    /// Evaluation and fitting happen on `|z| ≤ radius`.
    pub radius: f64,
    pub grid: GridSpec,
    pub transform: PolarSpec,
    /// Fit degree; chosen from the residual when absent.
    pub degree: Option<usize>,
    pub max_degree: usize,
    pub fit_tol: f64,
    /// Largest relative change of `g` allowed when the transform rule is
    /// refined.
    pub refine_tol: f64,
    pub delta_resolution: DeltaResolution,
    pub quad: QuadConfig,
}

impl Default for CoronaOptions {
    fn default() -> Self {
        CoronaOptions {
            radius: 0.95,
            grid: GridSpec { n_radial: 16, n_angular: 64 },
            transform: PolarSpec { n_theta: 128, n_rho: 32 },
            degree: None,
            max_degree: 64,
            fit_tol: 1e-7,
            refine_tol: 1e-8,
            delta_resolution: DeltaResolution::default(),
            quad: QuadConfig::default(),
        }
    }
}

/// Antisymmetric corrections `b_jk = a_jk − a_kj` at each point, indexed
/// `[point][j][k]`.
pub fn koszul_corrections(problem: &CoronaProblem, points: &[C64], spec: PolarSpec) -> Result<Vec<Vec<Vec<C64>>>> {
    let pairs = problem.pairs();
    let n = problem.f.len();
    let a = transforms(problem, &pairs, points, spec)?;
    Ok(a.into_iter()
        .map(|row| {
            let mut b = vec![vec![zero(); n]; n];
            for (idx, &(j, k)) in pairs.iter().enumerate() {
                b[j][k] += row[idx];
                b[k][j] -= row[idx];
            }
            b
        })
        .collect())
}

/// `a_jk` at each point for the listed pairs, indexed `[point][pair]`.
fn transforms(
    problem: &CoronaProblem,
    pairs: &[(usize, usize)],
    points: &[C64],
    spec: PolarSpec,
) -> Result<Vec<Vec<C64>>> {
    if pairs.is_empty() {
        return Ok(vec![Vec::new(); points.len()]);
    }
    let f = &problem.f;
    let h = &problem.h;
    cauchy_transform_multi(
        |w, out| {
            let l = Local::at(f, w);
            let hw = h.eval(w);
            for (slot, &(j, k)) in out.iter_mut().zip(pairs) {
                *slot = l.phi_dbar(j, k) * hw;
            }
        },
        pairs.len(),
        points,
        spec,
    )
}

/// `g_j` at each point, indexed `[point][j]`.
pub fn solution_values(problem: &CoronaProblem, points: &[C64], spec: PolarSpec) -> Result<Vec<Vec<C64>>> {
    let b = koszul_corrections(problem, points, spec)?;
    Ok(points.iter().zip(&b).map(|(&z, bz)| assemble(problem, z, bz)).collect())
}

fn assemble(problem: &CoronaProblem, z: C64, b: &[Vec<C64>]) -> Vec<C64> {
    let l = Local::at(&problem.f, z);
    let fz: Vec<C64> = problem.f.iter().map(|p| p.eval(z)).collect();
    let hz = problem.h.eval(z);
    (0..fz.len()).map(|j| l.cf[j] / l.s * hz + (0..fz.len()).map(|k| b[j][k] * fz[k]).sum::<C64>()).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FitReport {
    pub degree: usize,
    /// Coefficients in the monomial basis.
    pub poly: CPoly,
    /// `max |ĝ − g|` over the grid divided by `max |g|`.
    pub residual: f64,
}

/// Least-squares fit in the basis `(z/R)^k`, which keeps the columns of
/// comparable size on `|z| ≤ R`.
fn fit(points: &[C64], values: &[C64], degree: usize, radius: f64) -> Result<FitReport> {
    let m = points.len();
    let a = DMatrix::<C64>::from_fn(m, degree + 1, |i, k| (points[i] / radius).powu(k as u32));
    let b = DVector::<C64>::from_column_slice(values);
    let x = a
        .clone()
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| Error::UnderResolved(format!("least-squares fit failed: {e}")))?;
    let r = &a * &x - &b;
    let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let residual = r.iter().map(|v| v.norm()).fold(0.0, f64::max) / scale;
    let poly = CPoly::new(x.iter().enumerate().map(|(k, &c)| c / radius.powi(k as i32)).collect());
    Ok(FitReport { degree, poly, residual })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoronaSolution {
    pub n: usize,
    pub delta: DeltaCertificate,
    pub options: CoronaOptions,
    pub grid: Vec<C64>,
    /// `g[i][j]` is `g_j` at `grid[i]`.
    pub g: Vec<Vec<C64>>,
    pub fits: Vec<FitReport>,
    /// `max |Σ f_j g_j − h|` over the grid.
    pub bezout_max: f64,
    /// `max |Σ_j f_j Σ_k b_jk f_k|` relative to `max |b|·max |f|²`.
    pub koszul_cancellation: f64,
    /// `max |b_jk + b_kj|`.
    pub antisymmetry: f64,
    /// Relative change of `g` on a subgrid when the transform rule is doubled.
    pub refinement_delta: f64,
    pub dmu_norms: Vec<f64>,
    pub h_norm: f64,
    /// `n³ δ⁻⁴ ‖h‖_{D(μ)}`.
    pub bound: f64,
    pub bound_ratios: Vec<f64>,
}

impl CoronaSolution {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<CoronaSolution> {
        Ok(serde_json::from_str(text)?)
    }
}

fn dmu_norm(p: &CPoly, mu: &MeasureSpec, cfg: &QuadConfig) -> Result<f64> {
    let g = gram_matrix(Space::Dmu, mu, p.degree(), cfg)?;
    Ok(g.norm_sq(p).max(0.0).sqrt())
}

pub fn corona_solve(problem: &CoronaProblem, opts: &CoronaOptions) -> Result<CoronaSolution> {
    validate_data(&problem.f)?;
    check_finite(&problem.h, "h")?;
    if !(opts.radius > 0.0 && opts.radius < 1.0) {
        return Err(Error::InvalidInput(format!("evaluation radius must lie in (0, 1), got {}", opts.radius)));
    }
    let delta = match problem.delta {
        Some(d) => accept_delta(&problem.f, d, opts.delta_resolution)?,
        None => certify_delta(&problem.f, opts.delta_resolution)?,
    };
    let n = problem.f.len();
    let grid = polar_grid(opts.radius, opts.grid);
    let b = koszul_corrections(problem, &grid, opts.transform)?;
    let g: Vec<Vec<C64>> = grid.iter().zip(&b).map(|(&z, bz)| assemble(problem, z, bz)).collect();

    let mut bezout_max: f64 = 0.0;
    let mut cancel: f64 = 0.0;
    let mut antisymmetry: f64 = 0.0;
    let (mut bmax, mut fmax): (f64, f64) = (0.0, 0.0);
    for (i, &z) in grid.iter().enumerate() {
        let fz: Vec<C64> = problem.f.iter().map(|p| p.eval(z)).collect();
        let sum: C64 = fz.iter().zip(&g[i]).map(|(a, b)| a * b).sum();
        bezout_max = bezout_max.max((sum - problem.h.eval(z)).norm());
        let mut c = zero();
        for j in 0..n {
            for k in 0..n {
                c += fz[j] * b[i][j][k] * fz[k];
                antisymmetry = antisymmetry.max((b[i][j][k] + b[i][k][j]).norm());
                bmax = bmax.max(b[i][j][k].norm());
            }
        }
        fmax = fmax.max(fz.iter().map(|v| v.norm_sqr()).sum());
        cancel = cancel.max(c.norm());
    }
    let koszul_cancellation = if bmax > 0.0 { cancel / (bmax * fmax) } else { 0.0 };

    let sub: Vec<usize> = (0..grid.len()).step_by(7).collect();
    let sub_pts: Vec<C64> = sub.iter().map(|&i| grid[i]).collect();
    let fine_spec = PolarSpec { n_theta: 2 * opts.transform.n_theta, n_rho: 2 * opts.transform.n_rho };
    let fine = solution_values(problem, &sub_pts, fine_spec)?;
    let gmax = g.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let refinement_delta = sub
        .iter()
        .zip(&fine)
        .flat_map(|(&i, row)| row.iter().zip(&g[i]).map(|(a, b)| (a - b).norm()))
        .fold(0.0, f64::max)
        / gmax;
    if refinement_delta > opts.refine_tol {
        return Err(Error::UnderResolved(format!(
            "Cauchy transforms changed by {refinement_delta:.3e} under refinement (tolerance {:.1e})",
            opts.refine_tol
        )));
    }

    let base_degree = problem.h.degree() + problem.f.iter().map(|p| p.degree()).sum::<usize>() + 16;
    let mut fits = Vec::with_capacity(n);
    for j in 0..n {
        let values: Vec<C64> = g.iter().map(|row| row[j]).collect();
        let report = match opts.degree {
            Some(d) => fit(&grid, &values, d, opts.radius)?,
            None => {
                let mut d = base_degree.min(opts.max_degree);
                loop {
                    let r = fit(&grid, &values, d, opts.radius)?;
                    if r.residual < opts.fit_tol || d >= opts.max_degree {
                        break r;
                    }
                    d = (d + 8).min(opts.max_degree);
                }
            }
        };
        fits.push(report);
    }

    let dmu_norms = fits.iter().map(|r| dmu_norm(&r.poly, &problem.measure, &opts.quad)).collect::<Result<Vec<_>>>()?;
    let h_norm = dmu_norm(&problem.h, &problem.measure, &opts.quad)?;
    let bound = (n as f64).powi(3) * delta.delta.powi(-4) * h_norm;
    let bound_ratios = dmu_norms.iter().map(|v| if bound > 0.0 { v / bound } else { 0.0 }).collect();
    Ok(CoronaSolution {
        n,
        delta,
        options: *opts,
        grid,
        g,
        fits,
        bezout_max,
        koszul_cancellation,
        antisymmetry,
        refinement_delta,
        dmu_norms,
        h_norm,
        bound,
        bound_ratios,
    })
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub radius: f64,
    pub grid: GridSpec,
    /// `∂̄` is checked at grid points with `|z|` at most this.
    pub interior_radius: f64,
    pub step: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { radius: 0.95, grid: GridSpec { n_radial: 7, n_angular: 23 }, interior_radius: 0.9, step: 1e-3 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoronaReport {
    pub n: usize,
    pub points: usize,
    /// `max |Σ f_j g_j − h|` with `g_j` recomputed at the verification grid.
    pub bezout_max: f64,
    /// The same with the fitted polynomials.
    pub bezout_fit_max: f64,
    /// Per `j`: `max |∂̄g_j|` by central differences over `max |g_j|`.
    pub dbar_residuals: Vec<f64>,
    pub fit_residuals: Vec<f64>,
    pub dmu_norms: Vec<f64>,
    pub bound_ratios: Vec<f64>,
    pub delta: f64,
    pub all_finite: bool,
}

/// Central-difference `∂̄ = (∂_x + i∂_y)/2` from values at `z ± h`, `z ± ih`.
fn dbar_fd(vp: C64, vm: C64, vip: C64, vim: C64, h: f64) -> C64 {
    ((vp - vm) + C64::i() * (vip - vim)) / (4.0 * h)
}

fn stencil(points: &[C64], h: f64) -> Vec<C64> {
    points.iter().flat_map(|&z| [z + h, z - h, z + C64::new(0.0, h), z - C64::new(0.0, h)]).collect()
}

pub fn corona_verify(solution: &CoronaSolution, problem: &CoronaProblem, opts: &VerifyOptions) -> Result<CoronaReport> {
    if solution.n != problem.f.len() || solution.fits.len() != solution.n {
        return Err(Error::InvalidInput("solution does not match the problem".into()));
    }
    if !(opts.radius > 0.0 && opts.radius + opts.step < 1.0 && opts.interior_radius <= opts.radius) {
        return Err(Error::InvalidInput("verification grid must lie inside the disk".into()));
    }
    let n = solution.n;
    let spec = solution.options.transform;
    // Offset by half an angular step from the solve grid.
    let pts: Vec<C64> = polar_grid(opts.radius, opts.grid)
        .into_iter()
        .map(|z| z * C64::from_polar(1.0, PI / opts.grid.n_angular as f64))
        .collect();
    let g = solution_values(problem, &pts, spec)?;
    let (mut bz, mut bf): (f64, f64) = (0.0, 0.0);
    for (i, &z) in pts.iter().enumerate() {
        let fz: Vec<C64> = problem.f.iter().map(|p| p.eval(z)).collect();
        let hz = problem.h.eval(z);
        let s: C64 = (0..n).map(|j| fz[j] * g[i][j]).sum();
        let sf: C64 = (0..n).map(|j| fz[j] * solution.fits[j].poly.eval(z)).sum();
        bz = bz.max((s - hz).norm());
        bf = bf.max((sf - hz).norm());
    }
    let inner: Vec<C64> = pts.iter().copied().filter(|z| z.norm() <= opts.interior_radius + 1e-12).collect();
    let st = solution_values(problem, &stencil(&inner, opts.step), spec)?;
    let mut dbar = vec![0.0f64; n];
    for (j, d) in dbar.iter_mut().enumerate() {
        let gmax = g.iter().map(|row| row[j].norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        for q in st.chunks(4) {
            *d = d.max(dbar_fd(q[0][j], q[1][j], q[2][j], q[3][j], opts.step).norm() / gmax);
        }
    }
    let all_finite = g.iter().flatten().chain(st.iter().flatten()).all(|v| v.re.is_finite() && v.im.is_finite())
        && solution.dmu_norms.iter().all(|v| v.is_finite());
    Ok(CoronaReport {
        n,
        points: pts.len(),
        bezout_max: bz,
        bezout_fit_max: bf,
        dbar_residuals: dbar,
        fit_residuals: solution.fits.iter().map(|r| r.residual).collect(),
        dmu_norms: solution.dmu_norms.clone(),
        bound_ratios: solution.bound_ratios.clone(),
        delta: solution.delta.delta,
        all_finite,
    })
}

/// `max |∂̄a_jk − φ_j ∂̄φ_k h|` over the points, relative to the largest
/// `|φ_j ∂̄φ_k h|`, with `∂̄` by central differences.
pub fn dbar_inversion_residual(problem: &CoronaProblem, points: &[C64], step: f64, spec: PolarSpec) -> Result<f64> {
    let pairs = problem.pairs();
    if pairs.is_empty() {
        return Ok(0.0);
    }
    let a = transforms(problem, &pairs, &stencil(points, step), spec)?;
    let mut err: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for (i, &z) in points.iter().enumerate() {
        let l = Local::at(&problem.f, z);
        let hz = problem.h.eval(z);
        let q = &a[4 * i..4 * i + 4];
        for (idx, &(j, k)) in pairs.iter().enumerate() {
            let want = l.phi_dbar(j, k) * hz;
            let got = dbar_fd(q[0][idx], q[1][idx], q[2][idx], q[3][idx], step);
            err = err.max((got - want).norm());
            scale = scale.max(want.norm());
        }
    }
    Ok(if scale > 0.0 { err / scale } else { err })
}
