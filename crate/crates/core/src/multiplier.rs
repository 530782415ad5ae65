//! Finite-section certificates for Carleson measures, multipliers, the
//! shift, and Pick matrices.
//!
//! Every quantity is a supremum over polynomials of degree at most `N`, so it
//! is a lower bound for the corresponding operator quantity and nondecreasing
//! in `N`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::config::QuadConfig;
use crate::error::{Error, Result};
use crate::linalg::{condition_number, eigenvalues, generalized_max_eigenvalue, CMat};
use crate::measure::MeasureSpec;
use crate::poly::CPoly;
use crate::potential::{weighted_nodes, Weight, WeightedNodes};
use crate::spaces::{gram_matrix, moment_matrix, GramMatrix, KernelApprox, Space};

type C64 = Complex64;

#[derive(Clone, Debug, Serialize)]
pub struct CarlesonReport {
    /// Largest eigenvalue of `A v = λ G v`.
    pub constant: f64,
    pub degree: usize,
    pub nu: String,
    pub mu: String,
    /// Change of `constant` when every quadrature count is doubled.
    pub refinement_delta: f64,
    pub gram_condition: f64,
}

/// `A[j][k] = ∫ z^j z̄^k dν` for `ν` supported in the open disk.
fn embedding_moments(nu: &MeasureSpec, n: usize, cfg: &QuadConfig) -> Result<CMat> {
    if nu.has_circle_part() {
        return Err(Error::InvalidMeasure("Carleson embedding needs a measure on the open disk".into()));
    }
    let mut nodes = WeightedNodes::default();
    for a in nu.disk_atoms() {
        nodes.z.push(a.location);
        nodes.one_minus_s.push(1.0 - a.location.norm_sqr());
        nodes.w.push(a.mass);
    }
    if !nu.disk_densities.is_empty() {
        let rule = cfg.global_rule(nu, 2 * n);
        for p in rule.nodes() {
            let rho: f64 = nu.disk_densities.iter().map(|d| d.eval(p.z, p.one_minus_s)).sum();
            nodes.z.push(p.z);
            nodes.one_minus_s.push(p.one_minus_s);
            nodes.w.push(p.weight * rho);
        }
    }
    Ok(moment_matrix(&nodes, n + 1))
}

fn carleson_from(a: &CMat, g: &GramMatrix) -> Result<f64> {
    Ok(generalized_max_eigenvalue(a, &g.matrix)?.max(0.0))
}

pub fn carleson_constant(nu: &MeasureSpec, mu: &MeasureSpec, n: usize, cfg: &QuadConfig) -> Result<CarlesonReport> {
    let run = |cfg: &QuadConfig| -> Result<(f64, f64)> {
        let g = gram_matrix(Space::Dmu, mu, n, cfg)?;
        let a = embedding_moments(nu, n, cfg)?;
        Ok((carleson_from(&a, &g)?, condition_number(&g.matrix)))
    };
    let (constant, cond) = run(cfg)?;
    let (fine, _) = run(&cfg.refined())?;
    Ok(CarlesonReport {
        constant,
        degree: n,
        nu: nu.label.clone(),
        mu: mu.label.clone(),
        refinement_delta: (fine - constant).abs(),
        gram_condition: cond,
    })
}

/// Coefficients of `φ·z^k`, `k ≤ n`, as the columns of an
/// `(n + deg φ + 1) × (n + 1)` matrix.
fn multiplication_matrix(phi: &CPoly, n: usize) -> CMat {
    let d = phi.degree();
    let mut t = DMatrix::<C64>::zeros(n + d + 1, n + 1);
    for k in 0..=n {
        for (i, &c) in phi.coeffs().iter().enumerate() {
            t[(i + k, k)] = c;
        }
    }
    t
}

/// `sup ‖φp‖ / ‖p‖` over `deg p ≤ n` in the given space.
pub fn operator_norm(space: Space, phi: &CPoly, mu: &MeasureSpec, n: usize, cfg: &QuadConfig) -> Result<f64> {
    let big = gram_matrix(space, mu, n + phi.degree(), cfg)?;
    let small = big.truncated(n);
    let t = multiplication_matrix(phi, n);
    // ‖Ta‖² = aᵀ (Tᵀ G T̄) ā
    let a = t.transpose() * &big.matrix * t.map(|c| c.conj());
    Ok(generalized_max_eigenvalue(&a, &small.matrix)?.max(0.0).sqrt())
}

/// Lower bound for the multiplier norm of `φ` on D(μ).
pub fn multiplier_norm_lb(phi: &CPoly, mu: &MeasureSpec, n: usize, cfg: &QuadConfig) -> Result<f64> {
    operator_norm(Space::Dmu, phi, mu, n, cfg)
}

/// Norm of `M_z` from degree `≤ n` into degree `≤ n + 1`.
pub fn shift_norm(space: Space, mu: &MeasureSpec, n: usize, cfg: &QuadConfig) -> Result<f64> {
    operator_norm(space, &CPoly::z(), mu, n, cfg)
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplierCertificate {
    /// Largest `|φ|` on the sampled circle.
    pub sup_boundary: f64,
    /// Grid maximum plus the derivative bound times half the node spacing.
    pub sup_boundary_upper: f64,
    pub boundary_samples: usize,
    /// Carleson report for `dν = |φ′|² V_μ dA`.
    pub carleson: CarlesonReport,
}

pub fn multiplier_certificate(
    phi: &CPoly,
    mu: &MeasureSpec,
    n: usize,
    grid: usize,
    cfg: &QuadConfig,
) -> Result<MultiplierCertificate> {
    if grid == 0 {
        return Err(Error::InvalidInput("boundary grid needs at least one point".into()));
    }
    let sup = (0..grid)
        .map(|k| phi.eval(C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / grid as f64)).norm())
        .fold(0.0, f64::max);
    let lip = phi.derivative().coefficient_bound();
    let dphi = phi.derivative();
    let run = |cfg: &QuadConfig| -> Result<(f64, f64)> {
        let g = gram_matrix(Space::Dmu, mu, n, cfg)?;
        let a = if dphi.is_zero() {
            CMat::zeros(n + 1, n + 1)
        } else {
            let mut nodes = weighted_nodes(mu, Weight::V, n + dphi.degree(), cfg)?;
            for (w, &z) in nodes.w.iter_mut().zip(&nodes.z) {
                *w *= dphi.eval(z).norm_sqr();
            }
            moment_matrix(&nodes, n + 1)
        };
        Ok((carleson_from(&a, &g)?, condition_number(&g.matrix)))
    };
    let (constant, cond) = run(cfg)?;
    let (fine, _) = run(&cfg.refined())?;
    Ok(MultiplierCertificate {
        sup_boundary: sup,
        sup_boundary_upper: sup + lip * std::f64::consts::PI / grid as f64,
        boundary_samples: grid,
        carleson: CarlesonReport {
            constant,
            degree: n,
            nu: format!("|phi'|^2 V[{}] dA", mu.label),
            mu: mu.label.clone(),
            refinement_delta: (fine - constant).abs(),
            gram_condition: cond,
        },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PickReport {
    pub space: Space,
    pub degree: usize,
    pub points: Vec<C64>,
    /// Smallest eigenvalue of `[(1 − conj(φ(w_i))φ(w_j)) K_N(w_j, w_i)]`.
    pub min_eigenvalue: f64,
    /// Smallest eigenvalue of the kernel matrix alone, for scale.
    pub kernel_min_eigenvalue: f64,
}

pub fn pick_positivity(
    space: Space,
    mu: &MeasureSpec,
    n: usize,
    phi: &CPoly,
    points: &[C64],
    cfg: &QuadConfig,
) -> Result<PickReport> {
    if let Some(w) = points.iter().find(|w| !(w.norm() < 1.0)) {
        return Err(Error::out_of_domain(*w, "Pick points must lie in the open disk"));
    }
    let k = KernelApprox::new(&gram_matrix(space, mu, n, cfg)?)?;
    let m = points.len();
    let fv: Vec<C64> = points.iter().map(|&w| phi.eval(w)).collect();
    let mut kern = DMatrix::<C64>::zeros(m, m);
    let mut pick = DMatrix::<C64>::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let kij = k.eval(points[j], points[i]);
            kern[(i, j)] = kij;
            pick[(i, j)] = (C64::new(1.0, 0.0) - fv[i].conj() * fv[j]) * kij;
        }
    }
    let lo = |x: &CMat| eigenvalues(x).first().copied().unwrap_or(f64::INFINITY);
    Ok(PickReport {
        space,
        degree: n,
        points: points.to_vec(),
        min_eigenvalue: lo(&pick),
        kernel_min_eigenvalue: lo(&kern),
    })
}
