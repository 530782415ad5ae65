//! Deterministic quadrature on the circle and the disk.
//!
//! Area integrals are against normalized area `dA = dx dy / π`, circle
//! integrals against `|dζ| / 2π`. Every node carries `1 − |z|²` computed
//! without cancellation so that weights which degenerate on the circle can be
//! evaluated accurately near it.
//!
//! Two families of rules exist. Global rules ([`DiskRule`]) use a radial rule
//! in `s = r²` and uniform angles. Centered rules ([`polar_rule_centered`],
//! [`polar_rule_boundary`]) use polar coordinates about a point `c`, which
//! absorbs `log|w − c|` and `1/(w − c)` singularities into the Jacobian.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

type C64 = Complex64;

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
///
/// Newton iteration on the three-term recurrence; nodes are returned in
/// increasing order.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, t);
            dp = d;
            let dt = p / d;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, t);
        if d != 0.0 {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre(n: usize, t: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, t);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (t * p1 - p0) / (t * t - 1.0);
    (p1, d)
}

/// A rule on `[0, 1]` storing each node together with its complement `1 − x`.
#[derive(Clone, Debug)]
pub struct Rule1d {
    pub x: Vec<f64>,
    pub one_minus_x: Vec<f64>,
    pub w: Vec<f64>,
}

/// Truncation point of the tanh-sinh sum. At `t = 5.5` the outermost node
/// sits about `1e−167` from the endpoint, so the neglected tail of an
/// endpoint singularity `x^{−β}` is `O(10^{−167(1−β)})`.
const TANH_SINH_TMAX: f64 = 5.5;

impl Rule1d {
    pub fn gauss_legendre(n: usize) -> Self {
        let (t, w) = gauss_legendre(n);
        Rule1d {
            x: t.iter().map(|t| 0.5 * (1.0 + t)).collect(),
            one_minus_x: t.iter().map(|t| 0.5 * (1.0 - t)).collect(),
            w: w.iter().map(|w| 0.5 * w).collect(),
        }
    }

    /// Tanh-sinh rule with `2n + 1` nodes. Handles algebraic and logarithmic
    /// endpoint singularities at either end.
    pub fn tanh_sinh(n: usize) -> Self {
        let n = n.max(1);
        let h = TANH_SINH_TMAX / n as f64;
        let mut rule = Rule1d { x: Vec::new(), one_minus_x: Vec::new(), w: Vec::new() };
        for k in -(n as i64)..=(n as i64) {
            let t = k as f64 * h;
            let u = FRAC_PI_2 * t.sinh();
            let e = (-2.0 * u.abs()).exp();
            // x = 1/(1+e^{-2u}), 1 - x = 1/(1+e^{2u}), written without overflow.
            let (x, xc) = if u >= 0.0 { (1.0 / (1.0 + e), e / (1.0 + e)) } else { (e / (1.0 + e), 1.0 / (1.0 + e)) };
            let sech2 = 4.0 * e / ((1.0 + e) * (1.0 + e));
            let w = h * 0.5 * FRAC_PI_2 * t.cosh() * sech2;
            if x > 0.0 && xc > 0.0 && w > 0.0 {
                rule.x.push(x);
                rule.one_minus_x.push(xc);
                rule.w.push(w);
            }
        }
        rule
    }

    /// Substitution `x = u^p`, which clusters nodes at 0.
    pub fn graded(&self, p: f64) -> Self {
        let mut out = Rule1d { x: Vec::new(), one_minus_x: Vec::new(), w: Vec::new() };
        for i in 0..self.len() {
            let u = self.x[i];
            let lu = if u > 0.5 { (-self.one_minus_x[i]).ln_1p() } else { u.ln() };
            out.x.push((p * lu).exp());
            out.one_minus_x.push(-(p * lu).exp_m1());
            out.w.push(self.w[i] * p * ((p - 1.0) * lu).exp());
        }
        out
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// `Σ w_i f(x_i, 1 − x_i)`.
    pub fn integrate(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        (0..self.len()).map(|i| self.w[i] * f(self.x[i], self.one_minus_x[i])).sum()
    }
}

/// Equispaced rule on the unit circle with weights `1/n`; exact for
/// trigonometric polynomials of degree `≤ n − 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CircleRule {
    n: usize,
}

pub fn circle_rule(n: usize) -> Result<CircleRule> {
    if n == 0 {
        return Err(Error::InvalidInput("circle rule needs at least one node".into()));
    }
    Ok(CircleRule { n })
}

impl CircleRule {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn node(&self, k: usize) -> C64 {
        C64::from_polar(1.0, 2.0 * PI * k as f64 / self.n as f64)
    }

    pub fn nodes(&self) -> impl Iterator<Item = C64> + '_ {
        (0..self.n).map(|k| self.node(k))
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn integrate(&self, f: impl Fn(C64) -> C64) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for (k, zeta) in self.nodes().enumerate() {
            let v = f(zeta);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFinite { index: k });
            }
            acc += v;
        }
        Ok(acc * self.weight())
    }
}

/// Radial rule in `s = r²` used by a [`DiskRule`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RadialScheme {
    /// Exact for polynomials of degree `≤ 2n_r − 1` in `s`.
    GaussLegendre,
    /// `2n_r + 1` nodes; for weights singular or non-smooth at `|z| = 1`.
    TanhSinh,
}

#[derive(Clone, Copy, Debug)]
pub struct DiskNode {
    pub z: C64,
    pub s: f64,
    pub one_minus_s: f64,
    pub weight: f64,
    pub ring: usize,
}

/// Product rule on the disk: a radial rule in `s = |z|²` times `n_θ` uniform
/// angles. With Gauss–Legendre radial nodes it integrates `z^a z̄^b` exactly
/// when `|a − b| ≤ n_θ − 1` and `min(a, b) ≤ 2n_r − 1`.
#[derive(Clone, Debug)]
pub struct DiskRule {
    n_r: usize,
    n_theta: usize,
    scheme: RadialScheme,
    radial: Rule1d,
    nodes: Vec<DiskNode>,
}

pub fn disk_rule(n_r: usize, n_theta: usize) -> Result<DiskRule> {
    DiskRule::new(n_r, n_theta, RadialScheme::GaussLegendre)
}

impl DiskRule {
    pub fn new(n_r: usize, n_theta: usize, scheme: RadialScheme) -> Result<Self> {
        if n_r == 0 || n_theta == 0 {
            return Err(Error::InvalidInput("disk rule needs positive node counts".into()));
        }
        let radial = match scheme {
            RadialScheme::GaussLegendre => Rule1d::gauss_legendre(n_r),
            RadialScheme::TanhSinh => Rule1d::tanh_sinh(n_r),
        };
        let mut nodes = Vec::with_capacity(radial.len() * n_theta);
        for i in 0..radial.len() {
            let (s, c) = (radial.x[i], radial.one_minus_x[i]);
            let r = s.sqrt();
            for k in 0..n_theta {
                let th = 2.0 * PI * k as f64 / n_theta as f64;
                nodes.push(DiskNode {
                    z: C64::from_polar(r, th),
                    s,
                    one_minus_s: c,
                    weight: radial.w[i] / n_theta as f64,
                    ring: i,
                });
            }
        }
        Ok(DiskRule { n_r, n_theta, scheme, radial, nodes })
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn scheme(&self) -> RadialScheme {
        self.scheme
    }

    pub fn radial(&self) -> &Rule1d {
        &self.radial
    }

    pub fn nodes(&self) -> &[DiskNode] {
        &self.nodes
    }

    /// Same scheme with both counts doubled.
    pub fn refined(&self) -> DiskRule {
        DiskRule::new(2 * self.n_r, 2 * self.n_theta, self.scheme).expect("positive counts")
    }

    /// Largest gap between neighbouring nodes, radially in `r` or along the
    /// outermost ring.
    pub fn spacing(&self) -> f64 {
        let mut rs: Vec<f64> = self.radial.x.iter().map(|s| s.sqrt()).collect();
        rs.insert(0, 0.0);
        rs.push(1.0);
        let radial_gap = rs.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        radial_gap.max(2.0 * PI / self.n_theta as f64)
    }

    pub fn integrate_nodes(&self, f: impl Fn(&DiskNode) -> C64) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for (i, node) in self.nodes.iter().enumerate() {
            let v = f(node);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFinite { index: i });
            }
            acc += v * node.weight;
        }
        Ok(acc)
    }

    pub fn integrate(&self, f: impl Fn(C64) -> C64) -> Result<C64> {
        self.integrate_nodes(|n| f(n.z))
    }
}

/// Node of a centered polar rule. `weight` is the full `dA` weight, so
/// `Σ weight·F(z)` approximates `∫ F dA` over the disk.
#[derive(Clone, Copy, Debug)]
pub struct PolarNode {
    pub z: C64,
    /// Distance to the center.
    pub rho: f64,
    /// Unit direction from the center.
    pub dir: C64,
    pub one_minus_s: f64,
    pub weight: f64,
}

/// Sizes of a centered polar rule: `n_theta` directions and `n_rho` radial
/// parameter (Gauss–Legendre count, or tanh-sinh half-count).
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PolarSpec {
    pub n_theta: usize,
    pub n_rho: usize,
}

impl Default for PolarSpec {
    fn default() -> Self {
        PolarSpec { n_theta: 128, n_rho: 32 }
    }
}

/// Polar rule centered at an interior point `c`: `w = c + ρe^{iθ}` with
/// `ρ ∈ [0, R(θ)]`, trapezoid in `θ` and `radial` in `ρ / R(θ)`.
pub fn polar_rule_centered(c: C64, n_theta: usize, radial: &Rule1d) -> Result<Vec<PolarNode>> {
    let d = 1.0 - c.norm_sqr();
    if !(d > 0.0) {
        return Err(Error::out_of_domain(c, "polar rule center must lie in the open disk"));
    }
    if n_theta == 0 || radial.is_empty() {
        return Err(Error::InvalidInput("polar rule needs positive node counts".into()));
    }
    let mut out = Vec::with_capacity(n_theta * radial.len());
    for k in 0..n_theta {
        let th = 2.0 * PI * (k as f64 + 0.5) / n_theta as f64;
        let e = C64::from_polar(1.0, th);
        let b = (c.conj() * e).re;
        let sq = (b * b + d).sqrt();
        // Roots of ρ² + 2bρ − d: R and −R'.
        let (r_plus, r_other) = if b > 0.0 { (d / (b + sq), b + sq) } else { (sq - b, d / (sq - b)) };
        for i in 0..radial.len() {
            let rho = r_plus * radial.x[i];
            let gap = r_plus * radial.one_minus_x[i];
            out.push(PolarNode {
                z: c + e * rho,
                rho,
                dir: e,
                one_minus_s: gap * (rho + r_other),
                weight: 2.0 * rho * r_plus * radial.w[i] / n_theta as f64,
            });
        }
    }
    Ok(out)
}

/// Polar rule centered at a point `ζ` of the unit circle. Directions point
/// into the disk, `θ = arg ζ + π + u` with `u ∈ (−π/2, π/2)` discretized by
/// `angular`, and `ρ ∈ [0, 2cos u]` by `radial`.
pub fn polar_rule_boundary(zeta: C64, angular: &Rule1d, radial: &Rule1d) -> Result<Vec<PolarNode>> {
    let nz = zeta.norm();
    if (nz - 1.0).abs() > 1e-12 {
        return Err(Error::out_of_domain(zeta, "boundary polar rule needs a point of the circle"));
    }
    let zeta = zeta / nz;
    let mut out = Vec::with_capacity(angular.len() * radial.len());
    for a in 0..angular.len() {
        let u = PI * (angular.x[a] - 0.5);
        let edge = angular.x[a].min(angular.one_minus_x[a]);
        let big_r = 2.0 * (PI * edge).sin();
        let e = -zeta * C64::from_polar(1.0, u);
        for i in 0..radial.len() {
            let rho = big_r * radial.x[i];
            out.push(PolarNode {
                z: zeta + e * rho,
                rho,
                dir: e,
                one_minus_s: rho * big_r * radial.one_minus_x[i],
                weight: rho * big_r * radial.w[i] * angular.w[a],
            });
        }
    }
    Ok(out)
}

/// `log|(1 − w̄z)/(z − w)|²`, evaluated as `ln(1 + (1−|z|²)(1−|w|²)/|z−w|²)`.
pub fn log_kernel(z: C64, one_minus_sz: f64, w: C64, one_minus_sw: f64) -> f64 {
    log1p_over_sq(one_minus_sz * one_minus_sw, (z - w).norm())
}

/// `ln(1 + num/ρ²)` without overflow for tiny `ρ`.
pub fn log1p_over_sq(num: f64, rho: f64) -> f64 {
    if rho > 1e-100 {
        (num / (rho * rho)).ln_1p()
    } else {
        num.ln() - 2.0 * rho.ln()
    }
}

/// `∫_D log|(1 − w̄z)/(z − w)|² F(w) dA(w)` for `F` bounded near `z`.
///
/// Uses a polar rule centered at `z` with tanh-sinh in the radial variable,
/// so the logarithmic singularity is absorbed by the Jacobian and the
/// kernel's zero on the circle is an endpoint of every ray.
pub fn log_kernel_integral(f: impl Fn(&PolarNode) -> f64, z: C64, spec: PolarSpec) -> Result<f64> {
    let dz = 1.0 - z.norm_sqr();
    if !(dz > 0.0) {
        return Err(Error::out_of_domain(z, "log kernel integral needs |z| < 1"));
    }
    let nodes = polar_rule_centered(z, spec.n_theta, &Rule1d::tanh_sinh(spec.n_rho))?;
    let mut acc = 0.0;
    for (i, node) in nodes.iter().enumerate() {
        let v = log1p_over_sq(dz * node.one_minus_s, node.rho) * f(node);
        if !v.is_finite() {
            return Err(Error::NonFinite { index: i });
        }
        acc += node.weight * v;
    }
    Ok(acc)
}

/// Planar Cauchy transform `∫_D F(w)/(z − w) dA(w)` at each target.
///
/// In polar coordinates about the target the kernel times the Jacobian is
/// `−e^{−iθ}`, so each ray carries a smooth integrand and Gauss–Legendre in
/// `ρ / R(θ)` with the trapezoid rule in `θ` converges spectrally for `F`
/// smooth on the closed disk.
pub fn cauchy_transform<F>(f: F, targets: &[C64], spec: PolarSpec) -> Result<Vec<C64>>
where
    F: Fn(C64) -> C64 + Sync,
{
    let radial = Rule1d::gauss_legendre(spec.n_rho);
    targets
        .par_iter()
        .map(|&z| {
            let nodes = polar_rule_centered(z, spec.n_theta, &radial)?;
            let mut acc = C64::new(0.0, 0.0);
            for (i, node) in nodes.iter().enumerate() {
                let v = f(node.z);
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::NonFinite { index: i });
                }
                acc -= v * node.dir.conj() * (node.weight / node.rho);
            }
            Ok(acc)
        })
        .collect()
}

/// [`cauchy_transform`] of `m` fields at once. `f(w, out)` writes the field
/// values at `w` into `out`; the result is indexed `[target][field]`.
pub fn cauchy_transform_multi<F>(f: F, m: usize, targets: &[C64], spec: PolarSpec) -> Result<Vec<Vec<C64>>>
where
    F: Fn(C64, &mut [C64]) + Sync,
{
    let radial = Rule1d::gauss_legendre(spec.n_rho);
    targets
        .par_iter()
        .map(|&z| {
            let nodes = polar_rule_centered(z, spec.n_theta, &radial)?;
            let mut acc = vec![C64::new(0.0, 0.0); m];
            let mut buf = vec![C64::new(0.0, 0.0); m];
            for (i, node) in nodes.iter().enumerate() {
                f(node.z, &mut buf);
                let k = -node.dir.conj() * (node.weight / node.rho);
                for (a, v) in acc.iter_mut().zip(&buf) {
                    if !(v.re.is_finite() && v.im.is_finite()) {
                        return Err(Error::NonFinite { index: i });
                    }
                    *a += v * k;
                }
            }
            Ok(acc)
        })
        .collect()
}

/// Cauchy transform of data sampled on the nodes of a global rule.
///
/// Singularity subtraction: `F(w) = F(z) + (F(w) − F(z))`, the constant part
/// integrates exactly to `F(z)·z̄`, and the bounded remainder is summed over
/// the rule with nodes closer than `ρ_s` (half the rule spacing) to the
/// target dropped. The dropped disc contributes `O(ρ_s²)`; accuracy is first
/// order in the spacing, so [`cauchy_transform`] is preferred whenever `F` can
/// be evaluated off the grid.
pub fn cauchy_transform_field(rule: &DiskRule, samples: &[C64], targets: &[(C64, C64)]) -> Result<Vec<C64>> {
    if samples.len() != rule.nodes().len() {
        return Err(Error::InvalidInput(format!("expected {} samples, got {}", rule.nodes().len(), samples.len())));
    }
    let rho_s = 0.5 * rule.spacing();
    targets
        .par_iter()
        .map(|&(z, fz)| {
            if z.norm_sqr() >= 1.0 {
                return Err(Error::out_of_domain(z, "Cauchy transform target must lie in the open disk"));
            }
            if !(fz.re.is_finite() && fz.im.is_finite()) {
                return Err(Error::InvalidInput("sample value at target is not finite".into()));
            }
            let mut acc = fz * z.conj();
            for (node, &fw) in rule.nodes().iter().zip(samples) {
                let d = z - node.z;
                if d.norm() < rho_s {
                    continue;
                }
                acc += (fw - fz) / d * node.weight;
            }
            Ok(acc)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn gauss_legendre_exactness() {
        for n in 1..12 {
            let (x, w) = gauss_legendre(n);
            for p in 0..(2 * n) {
                let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p as i32)).sum();
                let want = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
                assert!((got - want).abs() < 1e-14, "n={n} p={p} got {got}");
            }
        }
        let (x, _) = gauss_legendre(64);
        assert!(x.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn tanh_sinh_handles_endpoint_singularities() {
        let r = Rule1d::tanh_sinh(60);
        // ∫ x^{-1/2} = 2, ∫ (1-x)^{-1/2} = 2, ∫ -ln x = 1
        assert!((r.integrate(|x, _| x.powf(-0.5)) - 2.0).abs() < 1e-12);
        assert!((r.integrate(|_, xc| xc.powf(-0.5)) - 2.0).abs() < 1e-12);
        assert!((r.integrate(|x, _| -x.ln()) - 1.0).abs() < 1e-13);
        assert!((r.integrate(|_, _| 1.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn graded_rule() {
        let r = Rule1d::gauss_legendre(20).graded(3.0);
        assert!((r.integrate(|x, _| x * x) - 1.0 / 3.0).abs() < 1e-14);
        for i in 0..r.len() {
            assert!((r.x[i] + r.one_minus_x[i] - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn circle_rule_examples() {
        let r4 = circle_rule(4).unwrap();
        assert!((r4.integrate(|_| c(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
        let r8 = circle_rule(8).unwrap();
        let v = r8.integrate(|z| z.powu(3) * z.conj().powu(3)).unwrap();
        assert!((v - 1.0).norm() < 1e-14);
        assert!(r8.integrate(|z| z * z).unwrap().norm() < 1e-15);
        assert!(r8.integrate(|z| z * z.conj()).unwrap().re - 1.0 < 1e-15);
        assert!(circle_rule(0).is_err());
    }

    #[test]
    fn disk_rule_examples() {
        let r = disk_rule(4, 8).unwrap();
        assert!((r.integrate(|_| c(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-14);
        assert!((r.integrate(|z| c(z.norm_sqr(), 0.0)).unwrap() - 0.5).norm() < 1e-14);
        assert!((r.integrate_nodes(|n| c(n.one_minus_s, 0.0)).unwrap() - 0.5).norm() < 1e-14);
        assert!((r.integrate(|z| c(z.norm_sqr().powi(2), 0.0)).unwrap() - 1.0 / 3.0).norm() < 1e-14);
        assert!(r.integrate(|z| z * z.conj() * z.conj()).unwrap().norm() < 1e-15);
        assert!(r.nodes().iter().all(|n| n.z.norm() < 1.0));
        let total: f64 = r.nodes().iter().map(|n| n.weight).sum();
        assert!((total - 1.0).abs() < 1e-14);
        assert!(disk_rule(0, 3).is_err());
    }

    #[test]
    fn disk_rule_monomial_exactness() {
        // ∫ z^a z̄^b dA = δ_ab / (a + 1)
        let (n_r, n_t) = (6, 9);
        let r = disk_rule(n_r, n_t).unwrap();
        for a in 0..10u32 {
            for b in 0..10u32 {
                if (a as i64 - b as i64).unsigned_abs() as usize > n_t - 1 || a.min(b) as usize > 2 * n_r - 1 {
                    continue;
                }
                let v = r.integrate(|z| z.powu(a) * z.conj().powu(b)).unwrap();
                let want = if a == b { 1.0 / (a as f64 + 1.0) } else { 0.0 };
                assert!((v - want).norm() < 1e-13, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn tanh_sinh_disk_rule_resolves_log() {
        // 2∫ log(1/|w|) dA = ∫₀¹ −ln s ds in s = |w|²; the 1-D oracle is a
        // graded Gauss–Legendre rule in r: 4∫₀¹ r log(1/r) dr.
        let oracle = Rule1d::gauss_legendre(200).graded(6.0).integrate(|r, _| -4.0 * r * r.ln());
        assert!((oracle - 1.0).abs() < 1e-12);
        let r = DiskRule::new(40, 4, RadialScheme::TanhSinh).unwrap();
        let v = r.integrate_nodes(|n| c(-n.s.ln(), 0.0)).unwrap().re;
        assert!((v - oracle).abs() < 1e-12);
    }

    #[test]
    fn centered_rules_integrate_area() {
        for &cz in &[c(0.0, 0.0), c(0.3, -0.4), c(-0.9, 0.2), c(0.0, 0.97)] {
            let nodes = polar_rule_centered(cz, 96, &Rule1d::gauss_legendre(16)).unwrap();
            let area: f64 = nodes.iter().map(|n| n.weight).sum();
            assert!((area - 1.0).abs() < 1e-12, "{cz}");
            let m: C64 = nodes.iter().map(|n| n.z.norm_sqr() * n.weight).sum::<f64>().into();
            assert!((m - 0.5).norm() < 1e-12);
            for n in &nodes {
                assert!(((1.0 - n.z.norm_sqr()) - n.one_minus_s).abs() < 1e-13);
            }
        }
        let nodes = polar_rule_boundary(c(0.6, 0.8), &Rule1d::gauss_legendre(40), &Rule1d::gauss_legendre(8)).unwrap();
        let area: f64 = nodes.iter().map(|n| n.weight).sum();
        assert!((area - 1.0).abs() < 1e-12);
        let m: f64 = nodes.iter().map(|n| n.one_minus_s * n.weight).sum();
        assert!((m - 0.5).abs() < 1e-12);
    }

    #[test]
    fn log_kernel_examples() {
        let spec = PolarSpec::default();
        assert_eq!(log_kernel_integral(|_| 0.0, c(0.2, 0.1), spec).unwrap(), 0.0);
        // at z = 0 the kernel is 2 log(1/|w|), which integrates to 1
        let v = log_kernel_integral(|_| 1.0, c(0.0, 0.0), spec).unwrap();
        assert!((v - 1.0).abs() < 1e-12, "{v}");
        // ∫ log|(1−w̄z)/(z−w)|² dA(w) = 1 − |z|²
        for &z in &[c(0.5, 0.0), c(-0.3, 0.7), c(0.0, -0.95)] {
            let v = log_kernel_integral(|_| 1.0, z, spec).unwrap();
            assert!((v - (1.0 - z.norm_sqr())).abs() < 1e-11, "{z}: {v}");
        }
        assert!(log_kernel_integral(|_| 1.0, c(1.0, 0.0), spec).is_err());
    }

    #[test]
    fn log_kernel_refinement() {
        let f = |n: &PolarNode| (3.0 * n.z.re).cos() + n.z.im * n.z.im;
        let z = c(0.4, -0.5);
        let a = log_kernel_integral(f, z, PolarSpec { n_theta: 64, n_rho: 20 }).unwrap();
        let b = log_kernel_integral(f, z, PolarSpec { n_theta: 128, n_rho: 40 }).unwrap();
        assert!((a - b).abs() < 1e-6);
    }

    #[test]
    fn cauchy_transform_examples() {
        let spec = PolarSpec { n_theta: 64, n_rho: 16 };
        let targets = [c(0.0, 0.0), c(0.5, 0.2), c(-0.7, -0.6), c(0.0, 0.99)];
        let zero = cauchy_transform(|_| c(0.0, 0.0), &targets, spec).unwrap();
        assert!(zero.iter().all(|v| v.norm() == 0.0));
        let one = cauchy_transform(|_| c(1.0, 0.0), &targets, spec).unwrap();
        for (z, v) in targets.iter().zip(&one) {
            assert!((v - z.conj()).norm() < 1e-13, "{z}: {v}");
        }
        // F = w̄: ∫ w̄/(z−w) dA = z̄²/2 (expand in the two regions).
        let v = cauchy_transform(|w| w.conj(), &targets, spec).unwrap();
        for (z, v) in targets.iter().zip(&v) {
            assert!((v - z.conj() * z.conj() * 0.5).norm() < 1e-13, "{z}: {v}");
        }
    }

    #[test]
    fn cauchy_identity_brute_force_oracle() {
        // Independent check of ∫ 1/(z−w) dA = z̄ with a global rule and an
        // excluded ε-disc around the target.
        let z = c(0.3, 0.4);
        let r = disk_rule(400, 800).unwrap();
        let eps = 0.02;
        let v = r.integrate(|w| if (w - z).norm() < eps { c(0.0, 0.0) } else { 1.0 / (z - w) }).unwrap();
        assert!((v - z.conj()).norm() < 5e-3, "{v}");
    }

    #[test]
    fn sampled_transform() {
        let r = disk_rule(40, 80).unwrap();
        let ones = vec![c(1.0, 0.0); r.nodes().len()];
        let targets = [(c(0.2, 0.1), c(1.0, 0.0)), (c(-0.5, 0.5), c(1.0, 0.0))];
        let v = cauchy_transform_field(&r, &ones, &targets).unwrap();
        for ((z, _), v) in targets.iter().zip(&v) {
            assert!((v - z.conj()).norm() < 1e-14);
        }
        let f = |w: C64| w.conj() * w + 1.0;
        let samples: Vec<C64> = r.nodes().iter().map(|n| f(n.z)).collect();
        let pts = [c(0.1, -0.2), c(0.4, 0.3)];
        let t: Vec<(C64, C64)> = pts.iter().map(|&z| (z, f(z))).collect();
        let got = cauchy_transform_field(&r, &samples, &t).unwrap();
        let want = cauchy_transform(f, &pts, PolarSpec::default()).unwrap();
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() < 2e-2, "{g} vs {w}");
        }
    }
}
