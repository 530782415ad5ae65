//! Norms and inner products on D(μ), its Cauchy dual E(μ), H² and HD(μ).
//!
//! The default D(μ) inner product is the V-form
//! `⟨f, g⟩ = ⟨f, g⟩_{H²} + ∫ f′ conj(g′) V_μ dA`; the U-form and the
//! local-Dirichlet (measure) form are kept for cross-validation.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::config::QuadConfig;
use crate::error::{Error, Result};
use crate::linalg::{gram_form, hermitian_defect, hermitian_part, inverse_hpd, min_eigenvalue, CMat};
use crate::measure::{MeasureSpec, BOUNDARY_TOL};
use crate::poly::{h2_norm_green, CPoly, TrigPoly};
use crate::potential::{v_at, weighted_nodes, Weight, WeightedNodes};
use crate::quadrature::{log1p_over_sq, polar_rule_boundary, polar_rule_centered, CircleRule, DiskRule, Rule1d};

type C64 = Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalDirichletMethod {
    /// `‖(f − f(λ))/(z − λ)‖²_{H²}` by coefficient arithmetic.
    Boundary,
    /// Area integral of `|f′|²` against the potential of `δ_λ`.
    Area,
}

pub fn local_dirichlet(f: &CPoly, lambda: C64, method: LocalDirichletMethod, cfg: &QuadConfig) -> Result<f64> {
    let m = lambda.norm();
    if !(m <= 1.0 + BOUNDARY_TOL) {
        return Err(Error::out_of_domain(lambda, "local Dirichlet integral needs |λ| ≤ 1"));
    }
    match method {
        LocalDirichletMethod::Boundary => Ok(f.difference_quotient(lambda).h2_norm_sq()),
        LocalDirichletMethod::Area => local_dirichlet_area(f, lambda, cfg),
    }
}

/// For `λ ∈ D`: `∫|f′|² log|(1 − λ̄z)/(z − λ)|² dA / (1 − |λ|²)`.
/// For `λ ∈ T`: `∫|f′|² (1 − |z|²)/|z − λ|² dA`.
fn local_dirichlet_area(f: &CPoly, lambda: C64, cfg: &QuadConfig) -> Result<f64> {
    let df = f.derivative();
    if df.is_zero() {
        return Ok(0.0);
    }
    let deg = f.degree();
    if (lambda.norm() - 1.0).abs() <= BOUNDARY_TOL {
        let nodes = polar_rule_boundary(
            lambda,
            &Rule1d::gauss_legendre(cfg.n_boundary.max(2 * deg + 32)),
            &Rule1d::gauss_legendre(deg + 4),
        )?;
        return Ok(nodes.iter().map(|n| n.weight * n.one_minus_s / (n.rho * n.rho) * df.eval(n.z).norm_sqr()).sum());
    }
    let cl = 1.0 - lambda.norm_sqr();
    let nodes = polar_rule_centered(lambda, cfg.polar.n_theta.max(4 * deg + 64), &Rule1d::tanh_sinh(cfg.polar.n_rho))?;
    let total: f64 =
        nodes.iter().map(|n| n.weight * log1p_over_sq(cl * n.one_minus_s, n.rho) * df.eval(n.z).norm_sqr()).sum();
    Ok(total / cl)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormMode {
    U,
    V,
    Measure,
}

impl fmt::Display for NormMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NormMode::U => "u",
            NormMode::V => "v",
            NormMode::Measure => "measure",
        };
        f.write_str(s)
    }
}

pub fn dmu_norm_sq(f: &CPoly, mu: &MeasureSpec, mode: NormMode, cfg: &QuadConfig) -> Result<f64> {
    Ok(f.h2_norm_sq() + dmu_seminorm_sq(f, mu, mode, cfg)?)
}

/// The D(μ) norm squared without its H² part.
pub fn dmu_seminorm_sq(f: &CPoly, mu: &MeasureSpec, mode: NormMode, cfg: &QuadConfig) -> Result<f64> {
    let df = f.derivative();
    if df.is_zero() || mu.is_zero() {
        return Ok(0.0);
    }
    match mode {
        NormMode::U | NormMode::V => {
            let w = if mode == NormMode::U { Weight::U } else { Weight::V };
            let nodes = weighted_nodes(mu, w, f.degree(), cfg)?;
            Ok(nodes.integrate(|z| df.eval(z).norm_sqr().into()).re)
        }
        NormMode::Measure => measure_seminorm_sq(f, mu, cfg),
    }
}

/// `∫ D_λ(f) dμ(λ)` with boundary-method local Dirichlet integrals.
fn measure_seminorm_sq(f: &CPoly, mu: &MeasureSpec, cfg: &QuadConfig) -> Result<f64> {
    let d = |lambda: C64| f.difference_quotient(lambda).h2_norm_sq();
    let mut total: f64 = mu.atoms.iter().map(|a| a.mass * d(a.location)).sum();
    if let Some(t) = &mu.circle_density {
        // D_ζ(f) is a trigonometric polynomial of degree < deg f in ζ.
        let n = cfg.n_circle.max(f.degree() + t.max_index() + 1);
        let rule = crate::quadrature::circle_rule(n)?;
        total += rule.integrate(|zeta| (d(zeta) * t.eval(zeta).re).into())?.re;
    }
    if !mu.disk_densities.is_empty() {
        let rule = cfg.global_rule(mu, f.degree());
        total += rule
            .integrate_nodes(|n| {
                let rho: f64 = mu.disk_densities.iter().map(|dd| dd.eval(n.z, n.one_minus_s)).sum();
                (d(n.z) * rho).into()
            })?
            .re;
    }
    Ok(total)
}

/// `|f(0)|² + ∫ |f′|² (1 − |z|²)² / V_μ dA`.
pub fn emu_norm_sq(f: &CPoly, mu: &MeasureSpec, cfg: &QuadConfig) -> Result<f64> {
    if mu.is_zero() {
        return Err(Error::InvalidMeasure("E(μ) needs a nonzero measure".into()));
    }
    let df = f.derivative();
    let nodes = emu_nodes(mu, f.degree(), cfg)?;
    Ok(f.coeff(0).norm_sqr() + nodes.integrate(|z| df.eval(z).norm_sqr().into()).re)
}

fn emu_nodes(mu: &MeasureSpec, degree: usize, cfg: &QuadConfig) -> Result<WeightedNodes> {
    let rule = cfg.global_rule(mu, degree);
    let w: Vec<f64> = rule
        .nodes()
        .par_iter()
        .map(|n| Ok(n.weight * n.one_minus_s * n.one_minus_s / v_at(mu, n.z, n.one_minus_s, cfg)?))
        .collect::<Result<_>>()?;
    Ok(WeightedNodes {
        z: rule.nodes().iter().map(|n| n.z).collect(),
        one_minus_s: rule.nodes().iter().map(|n| n.one_minus_s).collect(),
        w,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    H2,
    /// D(μ) with the V-form inner product.
    Dmu,
    /// The explicit weighted Bergman-type norm
    /// `|f(0)|² + ∫|f′|²(1 − |z|²)²/V_μ dA`.
    Emu,
    /// The Cauchy dual of D(μ) under the H² pairing, i.e. the norm in which
    /// multiplication by `z` is the adjoint of the backward shift on D(μ).
    EmuDual,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Space::H2 => "h2",
            Space::Dmu => "dmu",
            Space::Emu => "emu",
            Space::EmuDual => "emu_dual",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Space {
    type Err = Error;
    fn from_str(s: &str) -> Result<Space> {
        match s.to_ascii_lowercase().as_str() {
            "h2" => Ok(Space::H2),
            "dmu" => Ok(Space::Dmu),
            "emu" => Ok(Space::Emu),
            "emu_dual" | "emu-dual" => Ok(Space::EmuDual),
            other => Err(Error::InvalidInput(format!("unknown space '{other}'"))),
        }
    }
}

/// `G[j][k] = ⟨z^j, z^k⟩` for `0 ≤ j, k ≤ N`.
#[derive(Clone, Debug)]
pub struct GramMatrix {
    pub space: Space,
    pub label: String,
    pub degree: usize,
    pub matrix: CMat,
    /// Relative Hermiticity defect before symmetrization.
    pub hermitian_defect: f64,
    pub min_eigenvalue: f64,
}

impl GramMatrix {
    pub fn inner(&self, f: &CPoly, g: &CPoly) -> C64 {
        let n = self.degree + 1;
        gram_form(&self.matrix, &f.padded(n), &g.padded(n))
    }

    pub fn norm_sq(&self, f: &CPoly) -> f64 {
        self.inner(f, f).re
    }

    /// Leading `(n + 1) × (n + 1)` block.
    pub fn truncated(&self, n: usize) -> GramMatrix {
        let m = self.matrix.view((0, 0), (n + 1, n + 1)).into_owned();
        GramMatrix { degree: n, min_eigenvalue: min_eigenvalue(&m), matrix: m, ..self.clone() }
    }
}

/// Hermitian moments `M[a][b] = Σ w_i z_i^a conj(z_i)^b`, `a, b < n`.
/// Node chunks are summed in a fixed order so the result is reproducible.
pub(crate) fn moment_matrix(nodes: &WeightedNodes, n: usize) -> CMat {
    const CHUNK: usize = 512;
    let idx: Vec<usize> = (0..nodes.len()).step_by(CHUNK).collect();
    let parts: Vec<CMat> = idx
        .par_iter()
        .map(|&start| {
            let mut m = DMatrix::<C64>::zeros(n, n);
            let mut p = vec![C64::new(0.0, 0.0); n];
            for i in start..(start + CHUNK).min(nodes.len()) {
                let z = nodes.z[i];
                let mut zk = C64::new(1.0, 0.0);
                for slot in p.iter_mut() {
                    *slot = zk;
                    zk *= z;
                }
                let w = nodes.w[i];
                for a in 0..n {
                    let pa = p[a] * w;
                    for b in a..n {
                        m[(a, b)] += pa * p[b].conj();
                    }
                }
            }
            m
        })
        .collect();
    let mut m = DMatrix::<C64>::zeros(n, n);
    for part in parts {
        m += part;
    }
    for a in 0..n {
        for b in 0..a {
            m[(a, b)] = m[(b, a)].conj();
        }
    }
    m
}

/// `[j = k = 0]·c₀ + δ_jk·(H² part) + jk·M[j−1][k−1]`.
fn derivative_gram(moments: &CMat, n: usize, h2_identity: bool) -> CMat {
    let mut g = DMatrix::<C64>::zeros(n + 1, n + 1);
    for j in 0..=n {
        if h2_identity || j == 0 {
            g[(j, j)] += C64::new(1.0, 0.0);
        }
        for k in 1..=n {
            if j >= 1 {
                g[(j, k)] += moments[(j - 1, k - 1)] * (j * k) as f64;
            }
        }
    }
    g
}

/// Degree used for the inverse whose leading block is the dual Gram matrix.
pub fn dual_inner_degree(n: usize) -> usize {
    (2 * n).max(n + 16)
}

pub fn gram_matrix(space: Space, mu: &MeasureSpec, n: usize, cfg: &QuadConfig) -> Result<GramMatrix> {
    let raw = match space {
        Space::H2 => CMat::identity(n + 1, n + 1),
        Space::Dmu => {
            let nodes = weighted_nodes(mu, Weight::V, n, cfg)?;
            derivative_gram(&moment_matrix(&nodes, n), n, true)
        }
        Space::Emu => {
            if mu.is_zero() {
                return Err(Error::InvalidMeasure("E(μ) needs a nonzero measure".into()));
            }
            let nodes = emu_nodes(mu, n, cfg)?;
            derivative_gram(&moment_matrix(&nodes, n), n, false)
        }
        Space::EmuDual => {
            let big = gram_matrix(Space::Dmu, mu, dual_inner_degree(n), cfg)?;
            let inv = inverse_hpd(&big.matrix)?;
            inv.view((0, 0), (n + 1, n + 1)).into_owned()
        }
    };
    if let Some(index) = raw.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
        return Err(Error::NonFinite { index });
    }
    let defect = hermitian_defect(&raw);
    if defect > 1e-10 {
        return Err(Error::UnderResolved(format!("Gram matrix Hermiticity defect {defect:e}")));
    }
    let matrix = hermitian_part(&raw);
    Ok(GramMatrix {
        space,
        label: mu.label.clone(),
        degree: n,
        min_eigenvalue: min_eigenvalue(&matrix),
        hermitian_defect: defect,
        matrix,
    })
}

/// Truncated reproducing kernel `K_N(z, w) = u(w)ᴴ G⁻¹ u(z)`,
/// `u(z) = (1, z, …, z^N)`.
#[derive(Clone, Debug)]
pub struct KernelApprox {
    pub space: Space,
    pub degree: usize,
    pub inverse: CMat,
}

impl KernelApprox {
    pub fn new(gram: &GramMatrix) -> Result<Self> {
        Ok(KernelApprox { space: gram.space, degree: gram.degree, inverse: inverse_hpd(&gram.matrix)? })
    }

    pub fn eval(&self, z: C64, w: C64) -> C64 {
        let n = self.degree + 1;
        let uz: Vec<C64> = powers(z, n);
        let uw: Vec<C64> = powers(w, n);
        uw.iter()
            .enumerate()
            .map(|(j, w)| w.conj() * uz.iter().enumerate().map(|(k, z)| self.inverse[(j, k)] * z).sum::<C64>())
            .sum()
    }
}

pub(crate) fn powers(z: C64, n: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(n);
    let mut p = C64::new(1.0, 0.0);
    for _ in 0..n {
        out.push(p);
        p *= z;
    }
    out
}

pub fn kernel_eval(space: Space, mu: &MeasureSpec, n: usize, z: C64, w: C64, cfg: &QuadConfig) -> Result<C64> {
    Ok(KernelApprox::new(&gram_matrix(space, mu, n, cfg)?)?.eval(z, w))
}

/// `(Uf)(λ) = f(λ) + λ ∫ f′(z)(1 − λz̄)^{−2} V_μ(z) dA(z)`.
///
/// For polynomial `f` its Taylor coefficients are `⟨f, z^n⟩_{D(μ)}`.
pub fn cauchy_dual_transform(f: &CPoly, mu: &MeasureSpec, lambda: C64, cfg: &QuadConfig) -> Result<C64> {
    Ok(cauchy_dual_transform_many(f, mu, &[lambda], cfg)?[0])
}

pub fn cauchy_dual_transform_many(f: &CPoly, mu: &MeasureSpec, lambdas: &[C64], cfg: &QuadConfig) -> Result<Vec<C64>> {
    let rmax = lambdas.iter().map(|l| l.norm()).fold(0.0, f64::max);
    if !(rmax < 1.0) {
        return Err(Error::out_of_domain(C64::new(rmax, 0.0), "dual transform needs |λ| < 1"));
    }
    if mu.is_zero() {
        return Ok(lambdas.iter().map(|&l| f.eval(l)).collect());
    }
    // (1 − λz̄)^{−2} has Taylor coefficients decaying like |λ|^n; size the
    // rule for the degree at which they drop below 1e−17.
    let tail = if rmax > 0.0 { (1e-17f64.ln() / rmax.ln()).ceil() as usize } else { 0 };
    let nodes = weighted_nodes(mu, Weight::V, f.degree() + tail.min(400), cfg)?;
    let df = f.derivative();
    let dfz: Vec<C64> = nodes.z.iter().map(|&z| df.eval(z)).collect();
    Ok(lambdas
        .par_iter()
        .map(|&l| {
            let acc: C64 = nodes
                .z
                .iter()
                .zip(&nodes.w)
                .zip(&dfz)
                .map(|((z, w), d)| {
                    let den = C64::new(1.0, 0.0) - l * z.conj();
                    d / (den * den) * w
                })
                .sum();
            f.eval(l) + l * acc
        })
        .collect())
}

/// Outcome of the Cauchy pairing identity check.
#[derive(Clone, Debug, Serialize)]
pub struct PairingCheck {
    /// `∫_T p·conj(Uq) |dζ|/2π` from the transform's Taylor coefficients.
    pub pairing: C64,
    /// `⟨p, q⟩_{D(μ)}` from the Gram matrix.
    pub inner: C64,
    pub residual: f64,
    /// `residual / (‖p‖ ‖q‖)` in D(μ).
    pub relative: f64,
    pub sample_radius: f64,
}

/// Radius of the circle on which `Uq` is sampled for coefficient extraction.
/// Coefficients of `Uq` need not decay (circle atoms give poles on T), so the
/// aliasing error `ρ^{n}` requires a radius well inside the disk.
pub const PAIRING_RADIUS: f64 = 0.5;

pub fn duality_pairing_check(
    p: &CPoly,
    q: &CPoly,
    mu: &MeasureSpec,
    rule: &CircleRule,
    cfg: &QuadConfig,
) -> Result<PairingCheck> {
    let n = rule.len();
    if n <= p.degree() + 1 {
        return Err(Error::InvalidInput(format!("circle rule with {n} nodes cannot resolve degree {}", p.degree())));
    }
    let r = PAIRING_RADIUS;
    let lambdas: Vec<C64> = rule.nodes().map(|z| z * r).collect();
    let mut vals = cauchy_dual_transform_many(q, mu, &lambdas, cfg)?;
    FftPlanner::<f64>::new().plan_fft_forward(n).process(&mut vals);
    // forward FFT: Σ_k v_k e^{−2πi kn/N} = N·c_n·r^n + aliases
    let coeff = |m: usize| vals[m] / (n as f64 * r.powi(m as i32));
    let pairing: C64 = (0..=p.degree()).map(|m| p.coeff(m) * coeff(m).conj()).sum();
    let deg = p.degree().max(q.degree());
    let g = gram_matrix(Space::Dmu, mu, deg, cfg)?;
    let inner = g.inner(p, q);
    let residual = (pairing - inner).norm();
    let scale = (g.norm_sq(p) * g.norm_sq(q)).sqrt();
    Ok(PairingCheck { pairing, inner, residual, relative: residual / scale.max(f64::MIN_POSITIVE), sample_radius: r })
}

/// `‖f‖²_{L²(T)} + Σ seminorms of the analytic parts`, measure form.
pub fn hd_norm_sq(f: &TrigPoly, mu: &MeasureSpec, cfg: &QuadConfig) -> Result<f64> {
    let (f1, f2) = f.analytic_split();
    Ok(f.l2_norm_sq() + measure_seminorm_sq(&f1, mu, cfg)? + measure_seminorm_sq(&f2, mu, cfg)?)
}

/// `|∫_T |p|² − |p(0)|² − 2∫_D |p′|² log(1/|z|) dA|`.
pub fn green_check(p: &CPoly, disk: &DiskRule, circle: &CircleRule) -> Result<f64> {
    if circle.len() <= 2 * p.degree() {
        return Err(Error::InvalidInput(format!(
            "circle rule with {} nodes is not exact for |p|² of degree {}",
            circle.len(),
            p.degree()
        )));
    }
    let boundary = circle.integrate(|z| p.eval(z).norm_sqr().into())?.re;
    Ok((boundary - h2_norm_green(p, disk)?).abs())
}
