//! The weights `U_μ` and `V_μ`.
//!
//! With `P(z, ζ) = (1 − |z|²)/|1 − ζ̄z|²`,
//!
//! ```text
//! U_μ(z) = ∫_D log|(1 − w̄z)/(z − w)|² dμ(w)/(1 − |w|²) + ∫_T P(z, ζ) dμ(ζ)
//! V_μ(z) = ∫_{D̄} P(z, ζ) dμ(ζ)
//! ```
//!
//! Atoms use these kernels directly. A trigonometric circle density has an
//! exact harmonic extension. Radial disk densities reduce to one-dimensional
//! integrals in `s = |w|²` after averaging the kernels over angles: the
//! Poisson kernel averages to `(1 − |z|²)/(1 − s|z|²)` and the log kernel to
//! `log(1/max(s, |z|²))`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{CirclePoisson, QuadConfig};
use crate::error::{Error, Result};
use crate::measure::{DiskDensity, MeasureSpec};
use crate::poly::ln_of_s;
use crate::quadrature::{
    circle_rule, log1p_over_sq, log_kernel_integral, polar_rule_boundary, polar_rule_centered, DiskRule, RadialScheme,
    Rule1d,
};

type C64 = Complex64;

fn interior(z: C64) -> Result<f64> {
    let c = 1.0 - z.norm_sqr();
    if c > 0.0 && z.re.is_finite() && z.im.is_finite() {
        Ok(c)
    } else {
        Err(Error::out_of_domain(z, "weights are defined on the open disk"))
    }
}

/// `|1 − ζ̄z|²` via `|z − ζ|² + (1 − |z|²)(1 − |ζ|²)`.
fn one_minus_conj_prod_sq(z: C64, cz: f64, w: C64, cw: f64) -> f64 {
    (z - w).norm_sqr() + cz * cw
}

pub fn eval_u(mu: &MeasureSpec, z: C64, cfg: &QuadConfig) -> Result<f64> {
    let c = interior(z)?;
    u_at(mu, z, c, cfg)
}

pub fn eval_v(mu: &MeasureSpec, z: C64, cfg: &QuadConfig) -> Result<f64> {
    let c = interior(z)?;
    v_at(mu, z, c, cfg)
}

/// `U_μ(z)` given `c = 1 − |z|²`. Returns `+∞` at a disk atom.
pub(crate) fn u_at(mu: &MeasureSpec, z: C64, c: f64, cfg: &QuadConfig) -> Result<f64> {
    let mut u = circle_part(mu, z, c, cfg)?;
    for a in mu.disk_atoms() {
        let ca = 1.0 - a.location.norm_sqr();
        let d2 = (z - a.location).norm_sqr();
        if d2 == 0.0 {
            return Ok(f64::INFINITY);
        }
        u += a.mass / ca * (c * ca / d2).ln_1p();
    }
    for d in &mu.disk_densities {
        u += disk_density_u(d, z, c, cfg)?;
    }
    Ok(u)
}

/// `V_μ(z)` given `c = 1 − |z|²`.
pub(crate) fn v_at(mu: &MeasureSpec, z: C64, c: f64, cfg: &QuadConfig) -> Result<f64> {
    Ok(circle_part(mu, z, c, cfg)? + v_disk_part(mu, z, c, cfg)?)
}

fn v_disk_part(mu: &MeasureSpec, z: C64, c: f64, cfg: &QuadConfig) -> Result<f64> {
    let mut v = 0.0;
    for a in mu.disk_atoms() {
        let ca = 1.0 - a.location.norm_sqr();
        v += a.mass * c / one_minus_conj_prod_sq(z, c, a.location, ca);
    }
    for d in &mu.disk_densities {
        v += disk_density_v(d, z, c, cfg)?;
    }
    Ok(v)
}

/// Poisson integral of the circle atoms and the circle density; this part is
/// shared by `U_μ` and `V_μ`.
fn circle_part(mu: &MeasureSpec, z: C64, c: f64, cfg: &QuadConfig) -> Result<f64> {
    let mut v = 0.0;
    for a in mu.circle_atoms() {
        v += a.mass * c / (z - a.location).norm_sqr();
    }
    if let Some(t) = &mu.circle_density {
        v += match cfg.circle_poisson {
            CirclePoisson::Exact => t.harmonic_extension(z).re,
            CirclePoisson::Quadrature => {
                let rule = circle_rule(cfg.n_circle)?;
                rule.integrate(|zeta| (t.eval(zeta) * c / (z - zeta).norm_sqr()).re.into())?.re
            }
        };
    }
    Ok(v)
}

fn disk_density_v(d: &DiskDensity, z: C64, c: f64, cfg: &QuadConfig) -> Result<f64> {
    if d.is_radial() {
        return Ok(radial_v(|s, cs| d.radial_profile(s, cs).unwrap(), 1.0 - c, c, cfg.n_tanh));
    }
    let rule = DiskRule::new(cfg.n_tanh, cfg.n_theta.max(128), RadialScheme::TanhSinh)?;
    let v = rule.integrate_nodes(|n| {
        (d.eval(n.z, n.one_minus_s) * c / one_minus_conj_prod_sq(z, c, n.z, n.one_minus_s)).into()
    })?;
    Ok(v.re)
}

fn disk_density_u(d: &DiskDensity, z: C64, c: f64, cfg: &QuadConfig) -> Result<f64> {
    if d.is_radial() {
        return Ok(radial_u(|s, cs| d.radial_profile(s, cs).unwrap(), 1.0 - c, c, cfg.n_tanh));
    }
    log_kernel_integral(|n| d.eval(n.z, n.one_minus_s) / n.one_minus_s, z, cfg.polar)
}

/// `(1 − a) ∫₀¹ ρ(s) / (1 − sa) ds`.
pub fn radial_v(profile: impl Fn(f64, f64) -> f64, a: f64, c: f64, n: usize) -> f64 {
    let rule = Rule1d::tanh_sinh(n);
    // c/(c + a·cs) ≤ 1 keeps the integrand finite when ρ blows up at s = 1
    rule.integrate(|s, cs| profile(s, cs) * (c / (c + a * cs)))
}

/// `∫₀¹ log(1/max(s, a)) ρ(s)/(1 − s) ds`, split at `s = a`.
pub fn radial_u(profile: impl Fn(f64, f64) -> f64, a: f64, c: f64, n: usize) -> f64 {
    let rule = Rule1d::tanh_sinh(n);
    // s = a + c·t on [a, 1]: 1 − s = c(1 − t).
    let outer = c * rule.integrate(|t, tc| {
        let s = a + c * t;
        let cs = c * tc;
        if cs == 0.0 {
            // underflowed node; the integrable endpoint contributes nothing
            return 0.0;
        }
        let k = if cs < 1e-8 { 1.0 + 0.5 * cs } else { -ln_of_s(s, cs) / cs };
        k * profile(s, cs)
    });
    if a <= 0.0 {
        return outer;
    }
    // s = a·t on [0, a]: 1 − s = c + a(1 − t).
    let inner = a * rule.integrate(|t, tc| {
        let s = a * t;
        let cs = c + a * tc;
        profile(s, cs) * (c / cs)
    });
    // inner carries a factor c; log(1/a)/c is about 1
    let log_ratio = if c < 1e-8 { 1.0 + 0.5 * c } else { -ln_of_s(a, c) / c };
    log_ratio * inner + outer
}

/// Values of `U_μ` and `V_μ` at a list of points.
#[derive(Clone, Debug, Serialize)]
pub struct WeightField {
    pub label: String,
    pub points: Vec<C64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub config: QuadConfig,
}

pub fn weight_field(mu: &MeasureSpec, points: &[C64], cfg: &QuadConfig) -> Result<WeightField> {
    let pairs: Vec<(f64, f64)> = points
        .par_iter()
        .map(|&z| {
            let c = interior(z)?;
            Ok((u_at(mu, z, c, cfg)?, v_at(mu, z, c, cfg)?))
        })
        .collect::<Result<_>>()?;
    Ok(WeightField {
        label: mu.label.clone(),
        points: points.to_vec(),
        u: pairs.iter().map(|p| p.0).collect(),
        v: pairs.iter().map(|p| p.1).collect(),
        config: *cfg,
    })
}

/// A discrete measure `Σ w_i δ_{z_i}` with `Σ w_i F(z_i) ≈ ∫_D F·W dA` for
/// polynomial `F` in `z, z̄`, where `W` is `U_μ` or `V_μ`.
#[derive(Clone, Debug, Default)]
pub struct WeightedNodes {
    pub z: Vec<C64>,
    pub one_minus_s: Vec<f64>,
    pub w: Vec<f64>,
}

impl WeightedNodes {
    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    fn push(&mut self, z: C64, c: f64, w: f64) {
        if w != 0.0 {
            self.z.push(z);
            self.one_minus_s.push(c);
            self.w.push(w);
        }
    }

    pub fn integrate(&self, f: impl Fn(C64) -> C64) -> C64 {
        self.z.iter().zip(&self.w).map(|(&z, &w)| f(z) * w).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weight {
    U,
    V,
}

/// Nodes for `∫ F·W dA` with `F = z^a z̄^b`, `a, b ≤ degree`.
///
/// Each component of `μ` gets the rule that suits its weight: circle atoms a
/// polar rule centered at the atom (the Poisson kernel times the Jacobian is
/// bounded there), disk atoms in the `U` weight a polar rule centered at the
/// atom (the log kernel is absorbed), everything else a global rule.
pub fn weighted_nodes(mu: &MeasureSpec, weight: Weight, degree: usize, cfg: &QuadConfig) -> Result<WeightedNodes> {
    let mut out = WeightedNodes::default();
    let n_ang = cfg.n_boundary.max(2 * degree + 32);
    let angular = Rule1d::gauss_legendre(n_ang);
    let radial = Rule1d::gauss_legendre(degree + 4);
    for a in mu.circle_atoms() {
        for n in polar_rule_boundary(a.location, &angular, &radial)? {
            out.push(n.z, n.one_minus_s, n.weight * a.mass * n.one_minus_s / (n.rho * n.rho));
        }
    }
    if weight == Weight::U {
        let ts = Rule1d::tanh_sinh(cfg.polar.n_rho);
        let n_theta = cfg.polar.n_theta.max(2 * degree + 32);
        for a in mu.disk_atoms() {
            let ca = 1.0 - a.location.norm_sqr();
            for n in polar_rule_centered(a.location, n_theta, &ts)? {
                let k = log1p_over_sq(ca * n.one_minus_s, n.rho);
                out.push(n.z, n.one_minus_s, n.weight * a.mass / ca * k);
            }
        }
    }
    let needs_global = mu.circle_density.is_some()
        || !mu.disk_densities.is_empty()
        || (weight == Weight::V && mu.disk_atoms().next().is_some());
    if !needs_global {
        return Ok(out);
    }
    let rule = cfg.global_rule(mu, degree);
    // Radial parts of the weight depend on the ring only.
    let ring_values: Vec<f64> = rule
        .radial()
        .x
        .par_iter()
        .zip(&rule.radial().one_minus_x)
        .map(|(&s, &c)| {
            mu.disk_densities
                .iter()
                .filter(|d| d.is_radial())
                .map(|d| {
                    let p = |s: f64, cs: f64| d.radial_profile(s, cs).unwrap();
                    match weight {
                        Weight::V => radial_v(p, s, c, cfg.n_tanh),
                        Weight::U => radial_u(p, s, c, cfg.n_tanh),
                    }
                })
                .sum()
        })
        .collect();
    let general: Vec<&DiskDensity> = mu.disk_densities.iter().filter(|d| !d.is_radial()).collect();
    let values: Vec<f64> = rule
        .nodes()
        .par_iter()
        .map(|n| {
            let mut w = ring_values[n.ring];
            if let Some(t) = &mu.circle_density {
                w += t.harmonic_extension(n.z).re;
            }
            if weight == Weight::V {
                for a in mu.disk_atoms() {
                    let ca = 1.0 - a.location.norm_sqr();
                    w += a.mass * n.one_minus_s / one_minus_conj_prod_sq(n.z, n.one_minus_s, a.location, ca);
                }
            }
            for d in &general {
                w += match weight {
                    Weight::V => disk_density_v(d, n.z, n.one_minus_s, cfg)?,
                    Weight::U => disk_density_u(d, n.z, n.one_minus_s, cfg)?,
                };
            }
            Ok(w)
        })
        .collect::<Result<_>>()?;
    for (n, w) in rule.nodes().iter().zip(values) {
        out.push(n.z, n.one_minus_s, n.weight * w);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct EnvelopeReport {
    pub total_mass: f64,
    pub samples: usize,
    /// `min (V − lower)` over the samples.
    pub min_lower_margin: f64,
    /// `min (upper − V)` over the samples.
    pub min_upper_margin: f64,
    /// Samples outside the envelope by more than the slack.
    pub violations: usize,
    pub worst: Option<C64>,
    /// `max V(z)(1 − |z|²)/μ(D̄)`, the constant the upper bound needs. For a
    /// circle atom it tends to 4 along the radius through the atom.
    pub upper_constant: f64,
}

const ENVELOPE_SLACK: f64 = 1e-9;

/// Margins of `(1 − |z|²)μ(D̄)/4 ≤ V_μ(z) ≤ 2μ(D̄)/(1 − |z|²)` at each sample.
pub fn v_envelope(mu: &MeasureSpec, samples: &[C64], cfg: &QuadConfig) -> Result<EnvelopeReport> {
    let m = mu.total_mass();
    let margins: Vec<(C64, f64, f64, f64)> = samples
        .par_iter()
        .map(|&z| {
            let c = interior(z)?;
            let v = v_at(mu, z, c, cfg)?;
            Ok((z, v - c * m / 4.0, 2.0 * m / c - v, v * c / m))
        })
        .collect::<Result<_>>()?;
    let bad: Vec<&(C64, f64, f64, f64)> =
        margins.iter().filter(|(_, lo, hi, _)| *lo < -ENVELOPE_SLACK || *hi < -ENVELOPE_SLACK).collect();
    let worst = margins
        .iter()
        .filter(|(_, lo, hi, _)| *lo < -ENVELOPE_SLACK || *hi < -ENVELOPE_SLACK)
        .min_by(|a, b| a.1.min(a.2).total_cmp(&b.1.min(b.2)))
        .map(|x| x.0);
    Ok(EnvelopeReport {
        total_mass: m,
        samples: samples.len(),
        min_lower_margin: margins.iter().map(|m| m.1).fold(f64::INFINITY, f64::min),
        min_upper_margin: margins.iter().map(|m| m.2).fold(f64::INFINITY, f64::min),
        violations: bad.len(),
        worst,
        upper_constant: margins.iter().map(|m| m.3).fold(0.0, f64::max),
    })
}

/// [`v_envelope`], failing on any violation beyond `1e−9`.
pub fn check_v_envelope(mu: &MeasureSpec, samples: &[C64], cfg: &QuadConfig) -> Result<EnvelopeReport> {
    let rep = v_envelope(mu, samples, cfg)?;
    if let Some(z) = rep.worst {
        return Err(Error::EnvelopeViolation { count: rep.violations, re: z.re, im: z.im });
    }
    Ok(rep)
}

/// `log|(1 − ζ̄z)/(z − ζ)|² − (1 − |z|²)(1 − |ζ|²)/|1 − ζ̄z|²`, nonnegative
/// because `log x ≥ 1 − 1/x`.
pub fn kernel_comparability_gap(z: C64, zeta: C64) -> f64 {
    let (cz, cw) = (1.0 - z.norm_sqr(), 1.0 - zeta.norm_sqr());
    let x = cz * cw / (z - zeta).norm_sqr();
    x.ln_1p() - x / (1.0 + x)
}

/// Resolution of the kernel-estimate integrals.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct KernelEstimateResolution {
    /// Tanh-sinh half-count in the radial direction.
    pub n_radial: usize,
    /// Angular count: uniform angles for interior `ζ`, tanh-sinh half-count
    /// for `ζ` on the circle.
    pub n_angular: usize,
}

impl Default for KernelEstimateResolution {
    fn default() -> Self {
        KernelEstimateResolution { n_radial: 64, n_angular: 512 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelEstimateSample {
    pub lambda: C64,
    pub zeta: C64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub ratio_refined: f64,
    pub relative_change: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelEstimateReport {
    pub s: f64,
    pub r: f64,
    pub t: f64,
    pub samples: Vec<KernelEstimateSample>,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    pub max_relative_change: f64,
    /// All ratios finite and stable to 5% under refinement.
    pub stable: bool,
}

/// Compares
/// `∫_D (1 − |z|²)^s / (|1 − λz̄|^r |1 − ζ̄z|^t) dA(z)` with
/// `(1 − |λ|²)^{−(r − s − 2)} |1 − ζ̄λ|^{−t}` for each `(λ, ζ)` pair, at the
/// given resolution and at twice it.
pub fn check_kernel_estimate(
    s: f64,
    r: f64,
    t: f64,
    pairs: &[(C64, C64)],
    res: KernelEstimateResolution,
) -> Result<KernelEstimateReport> {
    if !(s > -1.0 && r >= 0.0 && t >= 0.0 && r + t - s > 2.0 && t < s + 2.0 && s + 2.0 < r) {
        return Err(Error::InvalidInput(format!(
            "kernel estimate needs t < s + 2 < r, s > −1; got s={s}, r={r}, t={t}"
        )));
    }
    let fine = KernelEstimateResolution { n_radial: 2 * res.n_radial, n_angular: 2 * res.n_angular };
    let samples: Vec<KernelEstimateSample> = pairs
        .par_iter()
        .map(|&(lambda, zeta)| {
            let cl = interior(lambda)?;
            if zeta.norm() > 1.0 + 1e-12 {
                return Err(Error::out_of_domain(zeta, "ζ must lie in the closed disk"));
            }
            let lhs = kernel_lhs(s, r, t, lambda, zeta, res)?;
            let lhs_fine = kernel_lhs(s, r, t, lambda, zeta, fine)?;
            let cz = (1.0 - zeta.norm_sqr()).max(0.0);
            let rhs = cl.powf(-(r - s - 2.0)) * one_minus_conj_prod_sq(lambda, cl, zeta, cz).powf(-t / 2.0);
            let (ratio, ratio_refined) = (lhs / rhs, lhs_fine / rhs);
            Ok(KernelEstimateSample {
                lambda,
                zeta,
                lhs,
                rhs,
                ratio,
                ratio_refined,
                relative_change: (ratio_refined - ratio).abs() / ratio_refined.abs(),
            })
        })
        .collect::<Result<_>>()?;
    let max_ratio = samples.iter().map(|x| x.ratio_refined).fold(0.0, f64::max);
    let mean_ratio = samples.iter().map(|x| x.ratio_refined).sum::<f64>() / samples.len().max(1) as f64;
    let max_relative_change = samples.iter().map(|x| x.relative_change).fold(0.0, f64::max);
    let stable =
        samples.iter().all(|x| x.ratio.is_finite() && x.ratio_refined.is_finite()) && max_relative_change < 0.05;
    Ok(KernelEstimateReport { s, r, t, samples, max_ratio, mean_ratio, max_relative_change, stable })
}

fn kernel_lhs(s: f64, r: f64, t: f64, lambda: C64, zeta: C64, res: KernelEstimateResolution) -> Result<f64> {
    let cl = 1.0 - lambda.norm_sqr();
    let on_circle = (zeta.norm() - 1.0).abs() <= 1e-12;
    // weight × integrand, assembled from logarithms because the boundary
    // rule reaches distances far below the square root of the smallest double
    let term = |weight: f64, z: C64, cz: f64, ln_dist_zeta_sq: f64| {
        let a = one_minus_conj_prod_sq(z, cz, lambda, cl);
        (weight.ln() + s * cz.ln() - 0.5 * r * a.ln() - 0.5 * t * ln_dist_zeta_sq).exp()
    };
    let mut acc = 0.0;
    if on_circle {
        let zeta = zeta / zeta.norm();
        let nodes = polar_rule_boundary(zeta, &Rule1d::tanh_sinh(res.n_angular), &Rule1d::tanh_sinh(res.n_radial))?;
        for n in nodes {
            if n.weight > 0.0 && n.one_minus_s > 0.0 {
                acc += term(n.weight, n.z, n.one_minus_s, 2.0 * n.rho.ln());
            }
        }
    } else {
        let cz = 1.0 - zeta.norm_sqr();
        let rule = DiskRule::new(res.n_radial, res.n_angular, RadialScheme::TanhSinh)?;
        for n in rule.nodes() {
            let d = one_minus_conj_prod_sq(n.z, n.one_minus_s, zeta, cz);
            acc += term(n.weight, n.z, n.one_minus_s, d.ln());
        }
    }
    if !acc.is_finite() {
        return Err(Error::UnderResolved("kernel estimate integral is not finite".into()));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{make_measure, Atom, Preset};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn cfg() -> QuadConfig {
        QuadConfig::default()
    }

    #[test]
    fn dirichlet_weights_are_one() {
        let mu = make_measure(Preset::Dirichlet).unwrap();
        let quad = QuadConfig { circle_poisson: CirclePoisson::Quadrature, ..cfg() };
        for &z in &[c(0.0, 0.0), c(0.5, 0.5), c(-0.9, 0.0)] {
            assert!((eval_u(&mu, z, &cfg()).unwrap() - 1.0).abs() < 1e-14);
            assert!((eval_v(&mu, z, &quad).unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn atom_weights() {
        let one = make_measure(Preset::Atoms(vec![Atom::new(c(1.0, 0.0), 1.0)])).unwrap();
        assert!((eval_u(&one, c(0.0, 0.0), &cfg()).unwrap() - 1.0).abs() < 1e-15);
        let z = c(0.3, -0.2);
        let p = (1.0 - z.norm_sqr()) / (c(1.0, 0.0) - z).norm_sqr();
        assert!((eval_v(&one, z, &cfg()).unwrap() - p).abs() < 1e-15);
        let center = make_measure(Preset::Atoms(vec![Atom::new(c(0.0, 0.0), 1.0)])).unwrap();
        let u = eval_u(&center, c(0.5, 0.0), &cfg()).unwrap();
        assert!((u - 4f64.ln()).abs() < 1e-14);
        assert_eq!(eval_u(&center, c(0.0, 0.0), &cfg()).unwrap(), f64::INFINITY);
        assert!(eval_v(&center, c(1.0, 0.0), &cfg()).is_err());
    }

    #[test]
    fn hardy_weights_match_closed_forms() {
        let mu = make_measure(Preset::Hardy).unwrap();
        assert!((eval_v(&mu, c(0.0, 0.0), &cfg()).unwrap() - 0.5).abs() < 1e-14);
        for &z in &[c(0.1, 0.0), c(0.3, 0.4), c(0.0, -0.9), c(0.99, 0.0)] {
            let a = z.norm_sqr();
            let u = eval_u(&mu, z, &cfg()).unwrap();
            assert!((u - (1.0 - a)).abs() < 1e-12, "U at {z}: {u}");
            // ∫₀¹ (1−t)/(1−ta) dt = 1/a + (1−a)ln(1−a)/a²
            let want = (1.0 - a) * (1.0 / a + (1.0 - a) * (-a).ln_1p() / (a * a));
            let v = eval_v(&mu, z, &cfg()).unwrap();
            assert!((v - want).abs() < 1e-10 * want.max(1e-3), "V at {z}: {v} vs {want}");
        }
    }

    #[test]
    fn alpha_u_is_power_weight() {
        let alpha = 0.5;
        let mu = make_measure(Preset::Alpha(alpha)).unwrap();
        for &z in &[c(0.0, 0.0), c(0.2, 0.1), c(-0.6, 0.3), c(0.0, 0.95)] {
            let want = (1.0 - z.norm_sqr()).powf(1.0 - alpha);
            let u = eval_u(&mu, z, &cfg()).unwrap();
            assert!((u - want).abs() < 1e-10, "{z}: {u} vs {want}");
        }
    }

    #[test]
    fn general_density_paths_match_radial() {
        let radial = make_measure(Preset::Hardy).unwrap();
        let general =
            MeasureSpec { disk_densities: vec![DiskDensity::general("hardy", |_, c| c)], ..Default::default() };
        for &z in &[c(0.0, 0.0), c(0.4, -0.3), c(-0.8, 0.1)] {
            let (u1, u2) = (eval_u(&radial, z, &cfg()).unwrap(), eval_u(&general, z, &cfg()).unwrap());
            let (v1, v2) = (eval_v(&radial, z, &cfg()).unwrap(), eval_v(&general, z, &cfg()).unwrap());
            assert!((u1 - u2).abs() < 1e-9, "{u1} {u2}");
            assert!((v1 - v2).abs() < 1e-9, "{v1} {v2}");
        }
    }

    #[test]
    fn weights_are_linear_in_the_measure() {
        let a = make_measure(Preset::Alpha(0.3)).unwrap();
        let b = make_measure(Preset::Atoms(vec![Atom::new(c(0.2, 0.3), 0.5), Atom::new(c(0.0, 1.0), 2.0)])).unwrap();
        let d = make_measure(Preset::Dirichlet).unwrap();
        let ab = a.merged(&b).merged(&d);
        for &z in &[c(0.1, 0.1), c(-0.5, 0.6)] {
            for f in [eval_u, eval_v] {
                let sum = f(&a, z, &cfg()).unwrap() + f(&b, z, &cfg()).unwrap() + f(&d, z, &cfg()).unwrap();
                let m = f(&ab, z, &cfg()).unwrap();
                assert!((m - sum).abs() <= 1e-10 * sum);
            }
        }
    }

    #[test]
    fn envelope_examples() {
        for (p, lo, v, hi) in [
            (Preset::Dirichlet, 0.25, 1.0, 2.0),
            (Preset::Atoms(vec![Atom::new(c(1.0, 0.0), 1.0)]), 0.25, 1.0, 2.0),
            (Preset::Hardy, 0.125, 0.5, 1.0),
        ] {
            let mu = make_measure(p).unwrap();
            let r = check_v_envelope(&mu, &[c(0.0, 0.0)], &cfg()).unwrap();
            assert!((r.min_lower_margin - (v - lo)).abs() < 1e-12);
            assert!((r.min_upper_margin - (hi - v)).abs() < 1e-12);
        }
        let mut bad = make_measure(Preset::Dirichlet).unwrap();
        bad.atoms.push(Atom::new(c(0.5, 0.0), -0.9));
        assert!(matches!(check_v_envelope(&bad, &[c(0.5, 0.0)], &cfg()), Err(Error::EnvelopeViolation { .. })));
    }

    #[test]
    fn circle_atom_needs_upper_constant_four() {
        // V = (1 + r)/(1 − r) on the radius through the atom, so
        // V(1 − r²) = (1 + r)² exceeds 2 once r > √2 − 1.
        let mu = make_measure(Preset::Atoms(vec![Atom::new(c(1.0, 0.0), 1.0)])).unwrap();
        let pts = [c(0.3, 0.0), c(0.5, 0.0), c(0.99, 0.0)];
        let r = v_envelope(&mu, &pts, &cfg()).unwrap();
        assert_eq!(r.violations, 2);
        assert!((r.upper_constant - 1.99f64.powi(2)).abs() < 1e-10);
        assert!(check_v_envelope(&mu, &pts[..1], &cfg()).is_ok());
    }

    #[test]
    fn comparability_on_nodes() {
        let rule = crate::quadrature::disk_rule(8, 16).unwrap();
        for a in rule.nodes() {
            for b in rule.nodes().iter().step_by(7) {
                if a.z != b.z {
                    assert!(kernel_comparability_gap(a.z, b.z) >= 0.0);
                }
            }
            assert!(kernel_comparability_gap(a.z, c(1.0, 0.0)) >= 0.0);
        }
    }

    #[test]
    fn kernel_estimate_examples() {
        let res = KernelEstimateResolution { n_radial: 40, n_angular: 128 };
        let r = check_kernel_estimate(0.5, 3.0, 2.0, &[(c(0.0, 0.0), c(0.0, 0.0))], res).unwrap();
        assert!((r.samples[0].ratio - 1.0 / 1.5).abs() < 1e-10);
        let r = check_kernel_estimate(0.5, 3.0, 2.0, &[(c(0.0, 0.0), c(1.0, 0.0))], res).unwrap();
        assert!(r.stable && r.samples[0].ratio.is_finite());
        // Oracle: the angular mean of |1 − z|^{−2} over |z| = r is 1/(1 − r²), so
        // the integral is ∫₀¹ (1 − s)^{−1/2} ds = 2.
        assert!((r.samples[0].lhs - 2.0).abs() < 1e-8, "{}", r.samples[0].lhs);
        assert!(check_kernel_estimate(0.5, 2.0, 2.0, &[], res).is_err());
    }
}
