//! Resolution settings shared by the numerical modules.

use serde::{Deserialize, Serialize};

use crate::measure::MeasureSpec;
use crate::quadrature::{DiskRule, PolarSpec, RadialScheme};

/// How the circle-density part of a weight is evaluated at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CirclePoisson {
    /// Closed-form harmonic extension of the trigonometric polynomial.
    Exact,
    /// Poisson integral by the `n_circle`-point circle rule.
    Quadrature,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct QuadConfig {
    /// Gauss–Legendre radial count of global disk rules.
    pub n_r: usize,
    /// Minimum angular count of global disk rules.
    pub n_theta: usize,
    pub n_circle: usize,
    /// Tanh-sinh half-count used for radial weight integrals and for global
    /// rules when the measure has a disk density.
    pub n_tanh: usize,
    /// Centered rules for logarithmic kernels and Cauchy transforms.
    pub polar: PolarSpec,
    /// Minimum angular count of rules centered on the circle.
    pub n_boundary: usize,
    pub circle_poisson: CirclePoisson,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            n_r: 48,
            n_theta: 64,
            n_circle: 256,
            n_tanh: 64,
            polar: PolarSpec::default(),
            n_boundary: 64,
            circle_poisson: CirclePoisson::Exact,
        }
    }
}

impl QuadConfig {
    /// Every count doubled.
    pub fn refined(&self) -> QuadConfig {
        QuadConfig {
            n_r: 2 * self.n_r,
            n_theta: 2 * self.n_theta,
            n_circle: 2 * self.n_circle,
            n_tanh: 2 * self.n_tanh,
            polar: PolarSpec { n_theta: 2 * self.polar.n_theta, n_rho: 2 * self.polar.n_rho },
            n_boundary: 2 * self.n_boundary,
            circle_poisson: self.circle_poisson,
        }
    }

    /// Global rule for integrands `z^a z̄^b`, `a, b ≤ degree`, times a weight
    /// derived from `mu`. Gauss–Legendre in `s` keeps such integrals exact
    /// for circle measures; disk densities switch to tanh-sinh because their
    /// weights are not polynomial near the circle.
    pub fn global_rule(&self, mu: &MeasureSpec, degree: usize) -> DiskRule {
        let m = mu.circle_degree();
        let n_theta = self.n_theta.max(2 * degree + m + 8);
        if mu.disk_densities.is_empty() {
            DiskRule::new(self.n_r.max(degree + m + 4), n_theta, RadialScheme::GaussLegendre)
        } else {
            DiskRule::new(self.n_tanh.max(degree + 16), n_theta, RadialScheme::TanhSinh)
        }
        .expect("positive counts")
    }
}
