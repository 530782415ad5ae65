//! Complex polynomials and trigonometric polynomials.
//!
//! Every function-space operation in the crate acts on [`CPoly`] values, so
//! derivatives, difference quotients and H² norms are exact coefficient
//! arithmetic.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::DiskRule;

type C64 = Complex64;

/// Polynomial `Σ c_k z^k` with trailing zero coefficients trimmed.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct CPoly {
    coeffs: Vec<C64>,
}

impl From<Vec<[f64; 2]>> for CPoly {
    fn from(pairs: Vec<[f64; 2]>) -> Self {
        CPoly::new(pairs.into_iter().map(|[re, im]| C64::new(re, im)).collect())
    }
}

impl From<CPoly> for Vec<[f64; 2]> {
    fn from(p: CPoly) -> Self {
        p.coeffs.iter().map(|c| [c.re, c.im]).collect()
    }
}

impl CPoly {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == C64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        CPoly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        CPoly::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        CPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: C64) -> Self {
        CPoly::new(vec![c])
    }

    /// `c z^k`.
    pub fn monomial(k: usize, c: C64) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); k + 1];
        coeffs[k] = c;
        CPoly::new(coeffs)
    }

    /// The identity polynomial `z`.
    pub fn z() -> Self {
        CPoly::monomial(1, C64::new(1.0, 0.0))
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: C64) -> (C64, C64) {
        let zero = C64::new(0.0, 0.0);
        self.coeffs.iter().rev().fold((zero, zero), |(p, dp), &c| (p * z + c, dp * z + p))
    }

    pub fn derivative(&self) -> CPoly {
        CPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect())
    }

    /// `(f − f(λ)) / (z − λ)` by synthetic division.
    pub fn difference_quotient(&self, lambda: C64) -> CPoly {
        let n = self.coeffs.len();
        if n <= 1 {
            return CPoly::zero();
        }
        let mut q = vec![C64::new(0.0, 0.0); n - 1];
        let mut acc = C64::new(0.0, 0.0);
        for k in (1..n).rev() {
            acc = acc * lambda + self.coeffs[k];
            q[k - 1] = acc;
        }
        CPoly::new(q)
    }

    /// `(f − f(0)) / z`.
    pub fn backward_shift(&self) -> CPoly {
        CPoly::new(self.coeffs.iter().skip(1).copied().collect())
    }

    /// `z · f`.
    pub fn shift(&self) -> CPoly {
        if self.is_zero() {
            return CPoly::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(C64::new(0.0, 0.0));
        coeffs.extend_from_slice(&self.coeffs);
        CPoly { coeffs }
    }

    pub fn h2_norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `Σ |c_k|`, an upper bound for `sup_{|z| ≤ 1} |f(z)|`.
    pub fn coefficient_bound(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn scale(&self, c: C64) -> CPoly {
        CPoly::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// Coefficientwise complex conjugate, i.e. the polynomial `conj(f(conj z))`.
    pub fn conj_coeffs(&self) -> CPoly {
        CPoly::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// Coefficient vector padded or truncated to length `len`.
    pub fn padded(&self, len: usize) -> Vec<C64> {
        (0..len).map(|k| self.coeff(k)).collect()
    }
}

/// H² norm through the Green identity `|f(0)|² + 2∫|f′|² log(1/|z|) dA`.
///
/// The rule should resolve the logarithmic singularity at the origin; a
/// tanh-sinh radial rule does.
pub fn h2_norm_green(f: &CPoly, rule: &DiskRule) -> Result<f64> {
    let df = f.derivative();
    let integral = rule.integrate_nodes(|node| {
        // log(1/|z|) = -log(s)/2 with s = |z|².
        let log_inv = -0.5 * ln_of_s(node.s, node.one_minus_s);
        C64::new(df.eval(node.z).norm_sqr() * log_inv, 0.0)
    })?;
    Ok(f.coeff(0).norm_sqr() + 2.0 * integral.re)
}

/// `ln s` computed from whichever of `s`, `1 − s` is more accurate.
pub(crate) fn ln_of_s(s: f64, one_minus_s: f64) -> f64 {
    if s > 0.5 {
        (-one_minus_s).ln_1p()
    } else {
        s.ln()
    }
}

impl Add for &CPoly {
    type Output = CPoly;
    fn add(self, rhs: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &CPoly {
    type Output = CPoly;
    fn sub(self, rhs: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &CPoly {
    type Output = CPoly;
    fn neg(self) -> CPoly {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul for &CPoly {
    type Output = CPoly;
    fn mul(self, rhs: &CPoly) -> CPoly {
        if self.is_zero() || rhs.is_zero() {
            return CPoly::zero();
        }
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        CPoly::new(out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CPoly {
            type Output = CPoly;
            fn $m(self, rhs: CPoly) -> CPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Trigonometric polynomial `Σ_{m=−M}^{M} c_m ζ^m` on the unit circle.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPoly {
    max_index: usize,
    // c_m stored at m + max_index
    coeffs: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
struct TrigPolyJson {
    coeffs: Vec<(i64, f64, f64)>,
}

impl Serialize for TrigPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self.terms().filter(|(_, c)| *c != C64::new(0.0, 0.0)).map(|(m, c)| (m, c.re, c.im)).collect();
        TrigPolyJson { coeffs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TrigPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = TrigPolyJson::deserialize(d)?;
        let pairs: Vec<(i64, C64)> = raw.coeffs.into_iter().map(|(m, re, im)| (m, C64::new(re, im))).collect();
        Ok(TrigPoly::from_terms(&pairs))
    }
}

impl TrigPoly {
    /// Builds from `(m, c_m)` pairs; repeated indices are summed.
    pub fn from_terms(terms: &[(i64, C64)]) -> Self {
        let max_index = terms.iter().map(|(m, _)| m.unsigned_abs() as usize).max().unwrap_or(0);
        let mut coeffs = vec![C64::new(0.0, 0.0); 2 * max_index + 1];
        for &(m, c) in terms {
            coeffs[(m + max_index as i64) as usize] += c;
        }
        TrigPoly { max_index, coeffs }
    }

    pub fn constant(c: f64) -> Self {
        TrigPoly::from_terms(&[(0, C64::new(c, 0.0))])
    }

    /// Boundary values `f₁ + conj(f₂)` of the harmonic function with analytic
    /// parts `f₁` and `f₂`; the constant term of `f₂` is dropped.
    pub fn from_analytic_parts(f1: &CPoly, f2: &CPoly) -> Self {
        let mut terms: Vec<(i64, C64)> = f1.coeffs().iter().enumerate().map(|(k, &c)| (k as i64, c)).collect();
        terms.extend(f2.coeffs().iter().enumerate().skip(1).map(|(k, c)| (-(k as i64), c.conj())));
        TrigPoly::from_terms(&terms)
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    pub fn coeff(&self, m: i64) -> C64 {
        if m.unsigned_abs() as usize > self.max_index {
            return C64::new(0.0, 0.0);
        }
        self.coeffs[(m + self.max_index as i64) as usize]
    }

    /// `(m, c_m)` for `m = −M..=M`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        let off = self.max_index as i64;
        self.coeffs.iter().enumerate().map(move |(i, &c)| (i as i64 - off, c))
    }

    pub fn eval(&self, zeta: C64) -> C64 {
        self.harmonic_extension(zeta)
    }

    /// Largest `|c_{−m} − conj(c_m)|`; zero exactly when the function is real.
    pub fn hermitian_defect(&self) -> f64 {
        (0..=self.max_index as i64).map(|m| (self.coeff(-m) - self.coeff(m).conj()).norm()).fold(0.0, f64::max)
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Split `f = f₁ + conj(f₂)` with `f₂(0) = 0`.
    pub fn analytic_split(&self) -> (CPoly, CPoly) {
        let m = self.max_index as i64;
        let f1 = CPoly::new((0..=m).map(|k| self.coeff(k)).collect());
        let f2 = CPoly::new((0..=m).map(|k| if k == 0 { C64::new(0.0, 0.0) } else { self.coeff(-k).conj() }).collect());
        (f1, f2)
    }

    /// Poisson extension into the disk, `Σ_{m≥0} c_m z^m + Σ_{m<0} c_m z̄^{|m|}`.
    pub fn harmonic_extension(&self, z: C64) -> C64 {
        let (f1, f2) = self.analytic_split();
        f1.eval(z) + f2.eval(z).conj()
    }

    pub fn add(&self, other: &TrigPoly) -> TrigPoly {
        let terms: Vec<(i64, C64)> = self.terms().chain(other.terms()).collect();
        TrigPoly::from_terms(&terms)
    }
}

/// Rejects polynomials with non-finite coefficients.
pub fn check_finite(p: &CPoly, what: &str) -> Result<()> {
    if p.coeffs().iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{what} has non-finite coefficients")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn evaluation() {
        assert_eq!(CPoly::from_real(&[1.0, 1.0]).eval(c(0.0, 1.0)), c(1.0, 1.0));
        assert_eq!(CPoly::monomial(3, c(1.0, 0.0)).eval(c(0.0, 0.0)), c(0.0, 0.0));
        assert_eq!(CPoly::from_real(&[2.0]).eval(c(0.3, -7.0)), c(2.0, 0.0));
    }

    #[test]
    fn derivative() {
        assert_eq!(CPoly::monomial(2, c(1.0, 0.0)).derivative(), CPoly::from_real(&[0.0, 2.0]));
        assert!(CPoly::from_real(&[5.0]).derivative().is_zero());
        assert_eq!(CPoly::from_real(&[1.0, 3.0, 0.0, 1.0]).derivative(), CPoly::from_real(&[3.0, 0.0, 3.0]));
        let p = CPoly::new(vec![c(1.0, 2.0), c(-0.5, 0.25), c(0.0, 3.0)]);
        let z = c(0.3, -0.7);
        let (v, dv) = p.eval_with_derivative(z);
        assert!((v - p.eval(z)).norm() < 1e-15);
        assert!((dv - p.derivative().eval(z)).norm() < 1e-15);
    }

    #[test]
    fn difference_quotients() {
        let z2 = CPoly::monomial(2, c(1.0, 0.0));
        assert_eq!(z2.difference_quotient(c(1.0, 0.0)), CPoly::from_real(&[1.0, 1.0]));
        for k in 1..6 {
            assert_eq!(
                CPoly::monomial(k, c(1.0, 0.0)).difference_quotient(c(0.0, 0.0)),
                CPoly::monomial(k - 1, c(1.0, 0.0))
            );
        }
        assert!(CPoly::from_real(&[4.0]).difference_quotient(c(0.2, 0.1)).is_zero());
    }

    #[test]
    fn backward_shift() {
        assert_eq!(CPoly::from_real(&[1.0, 2.0, 1.0]).backward_shift(), CPoly::from_real(&[2.0, 1.0]));
        assert!(CPoly::from_real(&[3.0]).backward_shift().is_zero());
        assert_eq!(CPoly::monomial(4, c(1.0, 0.0)).backward_shift(), CPoly::monomial(3, c(1.0, 0.0)));
    }

    #[test]
    fn h2_norms() {
        assert_eq!(CPoly::monomial(7, c(1.0, 0.0)).h2_norm_sq(), 1.0);
        assert_eq!(CPoly::from_real(&[1.0, 1.0]).h2_norm_sq(), 2.0);
        assert_eq!(CPoly::monomial(2, c(3.0, 0.0)).h2_norm_sq(), 9.0);
    }

    #[test]
    fn trimming_and_arithmetic() {
        let p = CPoly::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(p.degree(), 0);
        let a = CPoly::from_real(&[1.0, 1.0]);
        let b = CPoly::from_real(&[-1.0, 1.0]);
        assert_eq!(&a * &b, CPoly::from_real(&[-1.0, 0.0, 1.0]));
        assert!((&a - &a).is_zero());
        assert_eq!(a.shift(), CPoly::from_real(&[0.0, 1.0, 1.0]));
    }

    #[test]
    fn trig_split() {
        // 2cosθ = ζ + ζ̄
        let t = TrigPoly::from_terms(&[(1, c(1.0, 0.0)), (-1, c(1.0, 0.0))]);
        let (f1, f2) = t.analytic_split();
        assert_eq!(f1, CPoly::z());
        assert_eq!(f2, CPoly::z());
        assert_eq!(t.hermitian_defect(), 0.0);
        let back = TrigPoly::from_analytic_parts(&f1, &f2);
        assert_eq!(back, t);
        let zeta = C64::from_polar(1.0, 0.7);
        assert!((t.eval(zeta) - c(2.0 * 0.7f64.cos(), 0.0)).norm() < 1e-15);
        let s = TrigPoly::from_terms(&[(2, c(0.0, 1.0))]);
        assert!(s.hermitian_defect() > 0.5);
    }

    #[test]
    fn json_round_trip() {
        let p = CPoly::new(vec![c(0.1, -0.2), c(3.0, 0.0)]);
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, "[[0.1,-0.2],[3.0,0.0]]");
        assert_eq!(serde_json::from_str::<CPoly>(&text).unwrap(), p);
        let t = TrigPoly::from_terms(&[(-2, c(0.5, 0.25)), (0, c(1.0, 0.0)), (2, c(0.5, -0.25))]);
        let text = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<TrigPoly>(&text).unwrap(), t);
    }
}
