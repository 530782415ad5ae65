//! Finite positive measures on the closed unit disk.
//!
//! A [`MeasureSpec`] is a sum of atoms, a trigonometric-polynomial density on
//! the circle (against `|dζ|/2π`) and densities on the open disk (against
//! `dA`). Atoms within `1e−12` of the circle are treated as circle atoms.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::TrigPoly;
use crate::quadrature::{circle_rule, DiskRule, RadialScheme, Rule1d};

type C64 = Complex64;

/// Tolerance for `|location| ≤ 1` and for locating atoms on the circle.
pub const BOUNDARY_TOL: f64 = 1e-12;
/// Density values down to this are accepted as nonnegative.
pub const DENSITY_TOL: f64 = 1e-10;

const MASS_TANH_SINH_N: usize = 60;
const VALIDATION_ANGLES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub location: C64,
    pub mass: f64,
}

impl Atom {
    pub fn new(location: C64, mass: f64) -> Self {
        Atom { location, mass }
    }

    pub fn on_circle(&self) -> bool {
        (self.location.norm() - 1.0).abs() <= BOUNDARY_TOL
    }
}

type RadialFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type GeneralFn = Arc<dyn Fn(C64, f64) -> f64 + Send + Sync>;

/// Density on the open disk against normalized area measure.
///
/// Profiles receive `1 − |w|²` alongside the point so that densities with
/// boundary behaviour like `(1 − |w|²)^{−α}` can be evaluated accurately.
#[derive(Clone)]
pub enum DiskDensity {
    /// `1 − |w|²`.
    Hardy,
    /// `(1−α)(1−|w|²)^{−α}[(1−|w|²) + α|w|²]`, the measure giving the
    /// standard weighted Dirichlet space with parameter `α ∈ (0, 1)`.
    Alpha(f64),
    /// Radially symmetric density `ρ(s, 1 − s)` with `s = |w|²`.
    Radial { label: String, profile: RadialFn },
    /// Arbitrary density `ρ(w, 1 − |w|²)`.
    General { label: String, density: GeneralFn },
}

impl fmt::Debug for DiskDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiskDensity::Hardy => write!(f, "Hardy"),
            DiskDensity::Alpha(a) => write!(f, "Alpha({a})"),
            DiskDensity::Radial { label, .. } => write!(f, "Radial({label})"),
            DiskDensity::General { label, .. } => write!(f, "General({label})"),
        }
    }
}

impl DiskDensity {
    pub fn radial(label: impl Into<String>, profile: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        DiskDensity::Radial { label: label.into(), profile: Arc::new(profile) }
    }

    pub fn general(label: impl Into<String>, density: impl Fn(C64, f64) -> f64 + Send + Sync + 'static) -> Self {
        DiskDensity::General { label: label.into(), density: Arc::new(density) }
    }

    /// `ρ(s, 1 − s)` for radial densities, `None` otherwise.
    pub fn radial_profile(&self, s: f64, one_minus_s: f64) -> Option<f64> {
        match self {
            DiskDensity::Hardy => Some(one_minus_s),
            DiskDensity::Alpha(a) => Some((1.0 - a) * one_minus_s.powf(-a) * (one_minus_s + a * s)),
            DiskDensity::Radial { profile, .. } => Some(profile(s, one_minus_s)),
            DiskDensity::General { .. } => None,
        }
    }

    pub fn is_radial(&self) -> bool {
        !matches!(self, DiskDensity::General { .. })
    }

    pub fn eval(&self, w: C64, one_minus_s: f64) -> f64 {
        match self {
            DiskDensity::General { density, .. } => density(w, one_minus_s),
            _ => self.radial_profile(w.norm_sqr(), one_minus_s).expect("radial"),
        }
    }

    /// `∫_D ρ dA`.
    pub fn mass(&self) -> f64 {
        if self.is_radial() {
            // dA = ds dθ / 2π, so a radial density integrates as ∫₀¹ ρ(s) ds.
            Rule1d::tanh_sinh(MASS_TANH_SINH_N).integrate(|s, c| self.radial_profile(s, c).unwrap())
        } else {
            let rule = DiskRule::new(MASS_TANH_SINH_N, 2 * VALIDATION_ANGLES, RadialScheme::TanhSinh).expect("counts");
            rule.nodes().iter().map(|n| n.weight * self.eval(n.z, n.one_minus_s)).sum()
        }
    }

    fn label(&self) -> String {
        match self {
            DiskDensity::Hardy => "hardy".into(),
            DiskDensity::Alpha(a) => format!("alpha({a})"),
            DiskDensity::Radial { label, .. } | DiskDensity::General { label, .. } => label.clone(),
        }
    }
}

/// A finite positive Borel measure on the closed disk.
#[derive(Clone, Debug, Default)]
pub struct MeasureSpec {
    pub label: String,
    pub atoms: Vec<Atom>,
    pub circle_density: Option<TrigPoly>,
    /// Summed; more than one entry arises from [`MeasureSpec::merged`].
    pub disk_densities: Vec<DiskDensity>,
}

/// Named constructions of commonly used measures.
#[derive(Clone, Debug)]
pub enum Preset {
    /// `(1 − |w|²) dA`, giving H².
    Hardy,
    /// `|dζ|/2π`, giving the classical Dirichlet space.
    Dirichlet,
    /// Disk density giving the weighted Dirichlet space `D_α`.
    Alpha(f64),
    Atoms(Vec<Atom>),
    Custom(MeasureSpec),
}

impl Preset {
    /// Parses `hardy`, `dirichlet`, `alpha:<α>`, `atom:<re>[,<im>[,<mass>]]`.
    pub fn parse(name: &str) -> Result<Preset> {
        let lower = name.trim().to_ascii_lowercase();
        let (head, tail) = match lower.split_once(':') {
            Some((h, t)) => (h, Some(t)),
            None => (lower.as_str(), None),
        };
        let nums = |t: &str| -> Result<Vec<f64>> {
            t.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::InvalidInput(format!("bad number '{x}' in preset '{name}'")))
                })
                .collect()
        };
        match (head, tail) {
            ("hardy", None) => Ok(Preset::Hardy),
            ("dirichlet", None) => Ok(Preset::Dirichlet),
            ("alpha", Some(t)) => Ok(Preset::Alpha(nums(t)?[0])),
            ("atom", Some(t)) => {
                let v = nums(t)?;
                let im = v.get(1).copied().unwrap_or(0.0);
                let mass = v.get(2).copied().unwrap_or(1.0);
                Ok(Preset::Atoms(vec![Atom::new(C64::new(v[0], im), mass)]))
            }
            _ => Err(Error::InvalidInput(format!("unknown preset '{name}'"))),
        }
    }
}

pub fn make_measure(preset: Preset) -> Result<MeasureSpec> {
    let mu = match preset {
        Preset::Hardy => {
            MeasureSpec { label: "hardy".into(), disk_densities: vec![DiskDensity::Hardy], ..Default::default() }
        }
        Preset::Dirichlet => MeasureSpec {
            label: "dirichlet".into(),
            circle_density: Some(TrigPoly::constant(1.0)),
            ..Default::default()
        },
        Preset::Alpha(a) => {
            if !(a > 0.0 && a < 1.0) {
                return Err(Error::InvalidMeasure(format!("alpha must lie in (0, 1), got {a}")));
            }
            MeasureSpec {
                label: format!("alpha({a})"),
                disk_densities: vec![DiskDensity::Alpha(a)],
                ..Default::default()
            }
        }
        Preset::Atoms(atoms) => MeasureSpec { label: "atoms".into(), atoms, ..Default::default() },
        Preset::Custom(spec) => spec,
    };
    let report = mu.validate();
    if !report.is_valid() {
        return Err(Error::InvalidMeasure(report.to_string()));
    }
    Ok(mu)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    NonPositiveMass,
    AtomOutsideDisk,
    NonRealCircleDensity,
    NegativeDensity,
    NonFiniteMass,
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ViolationKind::NonPositiveMass => "non-positive atom mass",
            ViolationKind::AtomOutsideDisk => "atom outside closed disk",
            ViolationKind::NonRealCircleDensity => "circle density not real",
            ViolationKind::NegativeDensity => "negative density at node",
            ViolationKind::NonFiniteMass => "total mass not finite",
        };
        write!(f, "{what} ({})", self.detail)
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

impl MeasureSpec {
    pub fn zero() -> Self {
        MeasureSpec { label: "zero".into(), ..Default::default() }
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty() && self.circle_density.is_none() && self.disk_densities.is_empty()
    }

    /// Atoms on the circle, with locations normalized to modulus one.
    pub fn circle_atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        self.atoms.iter().filter(|a| a.on_circle()).map(|a| Atom::new(a.location / a.location.norm(), a.mass))
    }

    pub fn disk_atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        self.atoms.iter().filter(|a| !a.on_circle()).copied()
    }

    pub fn has_circle_part(&self) -> bool {
        self.circle_atoms().next().is_some() || self.circle_density.is_some()
    }

    /// Degree of the circle density, zero when absent.
    pub fn circle_degree(&self) -> usize {
        self.circle_density.as_ref().map_or(0, |t| t.max_index())
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let mut push = |kind, detail: String| report.violations.push(Violation { kind, detail });
        for (i, a) in self.atoms.iter().enumerate() {
            if !(a.mass > 0.0) || !a.mass.is_finite() {
                push(ViolationKind::NonPositiveMass, format!("atom {i} has mass {}", a.mass));
            }
            if !(a.location.norm() <= 1.0 + BOUNDARY_TOL) {
                push(ViolationKind::AtomOutsideDisk, format!("atom {i} at |w| = {}", a.location.norm()));
            }
        }
        if let Some(t) = &self.circle_density {
            let defect = t.hermitian_defect();
            if defect > 0.0 {
                push(ViolationKind::NonRealCircleDensity, format!("max |c_-m - conj(c_m)| = {defect:e}"));
            }
            let n = (4 * t.max_index() + 4).max(256);
            let rule = circle_rule(n).expect("positive count");
            let bad = rule.nodes().map(|z| (z, t.eval(z).re)).find(|(_, v)| *v < -DENSITY_TOL || !v.is_finite());
            if let Some((zeta, v)) = bad {
                push(ViolationKind::NegativeDensity, format!("circle density {v} at angle {}", zeta.arg()));
            }
        }
        if !self.disk_densities.is_empty() {
            let rule = DiskRule::new(MASS_TANH_SINH_N, VALIDATION_ANGLES, RadialScheme::TanhSinh).expect("counts");
            let bad = rule.nodes().iter().find_map(|n| {
                let v: f64 = self.disk_densities.iter().map(|d| d.eval(n.z, n.one_minus_s)).sum();
                (v < -DENSITY_TOL || !v.is_finite()).then_some((n.z, v))
            });
            if let Some((z, v)) = bad {
                push(ViolationKind::NegativeDensity, format!("disk density {v} at {z}"));
            }
        }
        let m = self.total_mass();
        if !m.is_finite() || m < 0.0 {
            push(ViolationKind::NonFiniteMass, format!("total mass {m}"));
        }
        report
    }

    /// `μ(D̄)`: atom masses, plus `c₀` of the circle density, plus the disk
    /// density integrals.
    pub fn total_mass(&self) -> f64 {
        let atoms: f64 = self.atoms.iter().map(|a| a.mass).sum();
        let circle = self.circle_density.as_ref().map_or(0.0, |t| t.coeff(0).re);
        let disk: f64 = self.disk_densities.iter().map(DiskDensity::mass).sum();
        atoms + circle + disk
    }

    /// The sum measure.
    pub fn merged(&self, other: &MeasureSpec) -> MeasureSpec {
        let circle_density = match (&self.circle_density, &other.circle_density) {
            (Some(a), Some(b)) => Some(a.add(b)),
            (a, b) => a.clone().or_else(|| b.clone()),
        };
        MeasureSpec {
            label: format!("{}+{}", self.label, other.label),
            atoms: self.atoms.iter().chain(&other.atoms).copied().collect(),
            circle_density,
            disk_densities: self.disk_densities.iter().chain(&other.disk_densities).cloned().collect(),
        }
    }

    pub fn with_atom(&self, atom: Atom) -> MeasureSpec {
        let mut out = self.clone();
        out.atoms.push(atom);
        out.label = format!("{}+atom", self.label);
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&MeasureJson::try_from(self)?)?)
    }

    pub fn from_json(text: &str) -> Result<MeasureSpec> {
        let raw: MeasureJson = serde_json::from_str(text)?;
        make_measure(Preset::Custom(raw.try_into()?))
    }

    pub fn to_value(&self) -> Result<serde_json::Value> {
        Ok(serde_json::to_value(MeasureJson::try_from(self)?)?)
    }

    /// A measure object, or a string naming a preset.
    pub fn from_value(value: serde_json::Value) -> Result<MeasureSpec> {
        match value {
            serde_json::Value::String(name) => make_measure(Preset::parse(&name)?),
            other => {
                let raw: MeasureJson = serde_json::from_value(other)?;
                make_measure(Preset::Custom(raw.try_into()?))
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiskDensityJson {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(DiskDensityJson),
    Many(Vec<DiskDensityJson>),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureJson {
    #[serde(default)]
    label: String,
    #[serde(default)]
    atoms: Vec<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    circle_density: Option<TrigPoly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    disk_density: Option<OneOrMany>,
}

impl TryFrom<&MeasureSpec> for MeasureJson {
    type Error = Error;
    fn try_from(mu: &MeasureSpec) -> Result<Self> {
        let mut dens = Vec::new();
        for d in &mu.disk_densities {
            dens.push(match d {
                DiskDensity::Hardy => DiskDensityJson { kind: "hardy".into(), alpha: None },
                DiskDensity::Alpha(a) => DiskDensityJson { kind: "alpha".into(), alpha: Some(*a) },
                other => {
                    return Err(Error::InvalidInput(format!("density '{}' has no JSON form", other.label())));
                }
            });
        }
        let disk_density = match dens.len() {
            0 => None,
            1 => Some(OneOrMany::One(dens.pop().unwrap())),
            _ => Some(OneOrMany::Many(dens)),
        };
        Ok(MeasureJson {
            label: mu.label.clone(),
            atoms: mu.atoms.iter().map(|a| [a.location.re, a.location.im, a.mass]).collect(),
            circle_density: mu.circle_density.clone(),
            disk_density,
        })
    }
}

impl TryFrom<MeasureJson> for MeasureSpec {
    type Error = Error;
    fn try_from(raw: MeasureJson) -> Result<Self> {
        let list = match raw.disk_density {
            None => Vec::new(),
            Some(OneOrMany::One(d)) => vec![d],
            Some(OneOrMany::Many(v)) => v,
        };
        let disk_densities = list
            .into_iter()
            .map(|d| match (d.kind.as_str(), d.alpha) {
                ("hardy", None) => Ok(DiskDensity::Hardy),
                ("alpha", Some(a)) if a > 0.0 && a < 1.0 => Ok(DiskDensity::Alpha(a)),
                ("alpha", a) => Err(Error::InvalidMeasure(format!("alpha must lie in (0, 1), got {a:?}"))),
                (k, _) => Err(Error::InvalidMeasure(format!("unknown disk density kind '{k}'"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MeasureSpec {
            label: raw.label,
            atoms: raw.atoms.iter().map(|[re, im, m]| Atom::new(C64::new(*re, *im), *m)).collect(),
            circle_density: raw.circle_density,
            disk_densities,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn presets() {
        let h = make_measure(Preset::Hardy).unwrap();
        assert!(h.atoms.is_empty() && h.circle_density.is_none());
        assert_eq!(h.disk_densities[0].eval(c(0.3, 0.4), 0.75), 0.75);
        let d = make_measure(Preset::Dirichlet).unwrap();
        let t = d.circle_density.as_ref().unwrap();
        assert_eq!(t.coeff(0), c(1.0, 0.0));
        assert_eq!(t.max_index(), 0);
        let a = make_measure(Preset::Atoms(vec![Atom::new(c(1.0, 0.0), 1.0)])).unwrap();
        assert_eq!(a.circle_atoms().count(), 1);
        assert_eq!(a.disk_atoms().count(), 0);
        assert!(make_measure(Preset::Alpha(1.0)).is_err());
        assert!(make_measure(Preset::Alpha(0.0)).is_err());
        assert!(make_measure(Preset::Atoms(vec![Atom::new(c(0.0, 0.0), 0.0)])).is_err());
        assert!(make_measure(Preset::Atoms(vec![Atom::new(c(1.5, 0.0), 1.0)])).is_err());
        assert!(Preset::parse("bergman").is_err());
        assert!(matches!(Preset::parse("alpha:0.5").unwrap(), Preset::Alpha(a) if a == 0.5));
    }

    #[test]
    fn total_masses() {
        assert!((make_measure(Preset::Dirichlet).unwrap().total_mass() - 1.0).abs() < 1e-15);
        assert!((make_measure(Preset::Hardy).unwrap().total_mass() - 0.5).abs() < 1e-14);
        let a = make_measure(Preset::Atoms(vec![Atom::new(c(0.0, 1.0), 2.5)])).unwrap();
        assert_eq!(a.total_mass(), 2.5);
        // ∫ alpha density dA = 1/(2 − α), from ∫₀¹ (1−α)c^{−α}(c + α(1−c)) dc.
        for alpha in [0.1, 0.5, 0.9] {
            let m = make_measure(Preset::Alpha(alpha)).unwrap().total_mass();
            assert!((m - 1.0 / (2.0 - alpha)).abs() < 1e-10, "alpha {alpha}: {m}");
        }
    }

    #[test]
    fn alpha_density_is_the_laplacian_of_the_weight() {
        // ρ = −(1−|w|²)·Δ_{∂∂̄}(1−|w|²)^{1−α}, checked by finite differences:
        // ∂∂̄ = Δ/4 and the weight is radial.
        let alpha = 0.5;
        let u = |x: f64, y: f64| (1.0 - x * x - y * y).powf(1.0 - alpha);
        let h = 1e-4;
        for &(x, y) in &[(0.1, 0.2), (0.5, -0.3), (-0.7, 0.1)] {
            let lap = (u(x + h, y) + u(x - h, y) + u(x, y + h) + u(x, y - h) - 4.0 * u(x, y)) / (h * h);
            let c = 1.0 - x * x - y * y;
            let want = -c * lap / 4.0;
            let got = DiskDensity::Alpha(alpha).eval(C64::new(x, y), c);
            assert!((got - want).abs() < 1e-5 * want.abs().max(1.0), "{got} vs {want}");
            assert!(got > 0.0);
        }
    }

    #[test]
    fn validation_reports() {
        let out = MeasureSpec { atoms: vec![Atom::new(c(2.0, 0.0), 1.0)], ..Default::default() };
        assert!(out.validate().has(ViolationKind::AtomOutsideDisk));
        assert!(out.validate().to_string().contains("atom outside closed disk"));
        assert!(make_measure(Preset::Hardy).unwrap().validate().is_valid());
        let cos = MeasureSpec {
            circle_density: Some(TrigPoly::from_terms(&[(1, c(1.0, 0.0)), (-1, c(1.0, 0.0))])),
            ..Default::default()
        };
        let r = cos.validate();
        assert!(r.has(ViolationKind::NegativeDensity));
        assert!(r.to_string().contains("negative density at node"));
        let complex = MeasureSpec {
            circle_density: Some(TrigPoly::from_terms(&[(0, c(3.0, 0.0)), (1, c(1.0, 0.0))])),
            ..Default::default()
        };
        assert!(complex.validate().has(ViolationKind::NonRealCircleDensity));
        let neg = MeasureSpec { disk_densities: vec![DiskDensity::general("neg", |w, _| w.re)], ..Default::default() };
        assert!(neg.validate().has(ViolationKind::NegativeDensity));
        assert!(MeasureSpec::zero().validate().is_valid());
    }

    #[test]
    fn merged_mass_is_additive() {
        let parts = [
            make_measure(Preset::Hardy).unwrap(),
            make_measure(Preset::Dirichlet).unwrap(),
            make_measure(Preset::Alpha(0.3)).unwrap(),
            make_measure(Preset::Atoms(vec![Atom::new(c(0.2, 0.1), 0.7), Atom::new(c(0.0, -1.0), 1.3)])).unwrap(),
        ];
        for a in &parts {
            for b in &parts {
                let m = a.merged(b).total_mass();
                let want = a.total_mass() + b.total_mass();
                assert!((m - want).abs() <= 1e-12 * want, "{} + {}", a.label, b.label);
            }
        }
    }

    #[test]
    fn json_round_trip_is_exact() {
        let mu = MeasureSpec {
            label: "mixed".into(),
            atoms: vec![Atom::new(c(0.1, 0.2), 0.3), Atom::new(c(1.0 / 3f64.sqrt(), (2.0f64 / 3.0).sqrt()), 1.0 / 7.0)],
            circle_density: Some(TrigPoly::from_terms(&[(0, c(1.0, 0.0)), (1, c(0.1, 0.3)), (-1, c(0.1, -0.3))])),
            disk_densities: vec![DiskDensity::Alpha(0.25)],
        };
        let text = mu.to_json().unwrap();
        let back = MeasureSpec::from_json(&text).unwrap();
        assert_eq!(back.atoms, mu.atoms);
        assert_eq!(back.circle_density, mu.circle_density);
        assert!(matches!(back.disk_densities[..], [DiskDensity::Alpha(a)] if a == 0.25));
        for p in [Preset::Hardy, Preset::Dirichlet, Preset::Alpha(0.5)] {
            let m = make_measure(p).unwrap();
            let back = MeasureSpec::from_json(&m.to_json().unwrap()).unwrap();
            assert_eq!(back.circle_density, m.circle_density);
            assert_eq!(back.total_mass(), m.total_mass());
        }
        let bad = r#"{"atoms": [[2.0, 0.0, 1.0]]}"#;
        assert!(MeasureSpec::from_json(bad).is_err());
        assert!(MeasureSpec::from_json(r#"{"disk_density": {"kind": "bergman"}}"#).is_err());
        let custom = MeasureSpec { disk_densities: vec![DiskDensity::radial("r", |s, _| s)], ..Default::default() };
        assert!(custom.to_json().is_err());
    }
}
