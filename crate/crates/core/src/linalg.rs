//! Hermitian matrix helpers on top of nalgebra.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;

/// `max |m_ij − conj(m_ji)|` relative to `max |m_ij|`.
pub fn hermitian_defect(m: &CMat) -> f64 {
    let scale = m.iter().map(|x| x.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut d: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            d = d.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    d / scale
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Eigenvalues in increasing order.
pub fn eigenvalues(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut v: Vec<f64> = hermitian_part(m).symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

pub fn min_eigenvalue(m: &CMat) -> f64 {
    eigenvalues(m).first().copied().unwrap_or(f64::INFINITY)
}

pub fn condition_number(m: &CMat) -> f64 {
    let e = eigenvalues(m);
    match (e.first(), e.last()) {
        (Some(&lo), Some(&hi)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

/// Lower Cholesky factor of a Hermitian positive definite matrix.
///
/// The complex square root never fails, so definiteness is checked on the
/// diagonal of the factor: every pivot must be real and positive.
pub fn cholesky_lower(g: &CMat) -> Result<CMat> {
    checked_cholesky(g).map(|c| c.l())
}

fn checked_cholesky(g: &CMat) -> Result<nalgebra::Cholesky<Complex64, nalgebra::Dyn>> {
    let err = || Error::NotPositiveDefinite(format!("{}×{} Gram matrix", g.nrows(), g.ncols()));
    let c = hermitian_part(g).cholesky().ok_or_else(err)?;
    let ok = c.l_dirty().diagonal().iter().all(|d| d.re > 0.0 && d.re.is_finite() && d.im.abs() <= 1e-8 * d.re);
    if ok {
        Ok(c)
    } else {
        Err(err())
    }
}

pub fn inverse_hpd(g: &CMat) -> Result<CMat> {
    Ok(hermitian_part(&checked_cholesky(g)?.inverse()))
}

/// Eigenvalues of the pencil `A v = λ G v` for Hermitian `A` and positive
/// definite `G`, via `L⁻¹ A L⁻ᴴ` with `G = L Lᴴ`.
pub fn generalized_eigenvalues(a: &CMat, g: &CMat) -> Result<Vec<f64>> {
    let l = cholesky_lower(g)?;
    let x = l.solve_lower_triangular(a).ok_or_else(|| Error::NotPositiveDefinite("singular factor".into()))?;
    let b =
        l.solve_lower_triangular(&x.adjoint()).ok_or_else(|| Error::NotPositiveDefinite("singular factor".into()))?;
    Ok(eigenvalues(&b))
}

pub fn generalized_max_eigenvalue(a: &CMat, g: &CMat) -> Result<f64> {
    Ok(generalized_eigenvalues(a, g)?.last().copied().unwrap_or(0.0))
}

/// `xᵀ G conj(y)`: the inner product of coefficient vectors `x, y` under the
/// Gram matrix `G[j][k] = ⟨z^j, z^k⟩`.
pub fn gram_form(g: &CMat, x: &[Complex64], y: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, &xj) in x.iter().enumerate() {
        for (k, &yk) in y.iter().enumerate() {
            acc += xj * g[(j, k)] * yk.conj();
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn generalized_problem_matches_direct_solve() {
        let g = CMat::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.5, 0.5), c(0.5, -0.5), c(1.0, 0.0)]);
        let a = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(3.0, 0.0)]);
        let ev = generalized_eigenvalues(&a, &g).unwrap();
        // det(A − λG) = 0 by hand: (1−2λ)(3−λ) − |i − λ(0.5+0.5i)|² = 0.
        for l in ev {
            let d = (c(1.0, 0.0) - 2.0 * l) * (c(3.0, 0.0) - l)
                - (c(0.0, 1.0) - c(0.5, 0.5) * l) * (c(0.0, -1.0) - c(0.5, -0.5) * l);
            assert!(d.norm() < 1e-12, "{l}");
        }
        let inv = inverse_hpd(&g).unwrap();
        assert!(((&g * &inv) - CMat::identity(2, 2)).norm() < 1e-14);
        assert!(cholesky_lower(&(-g)).is_err());
    }

    #[test]
    fn gram_form_convention() {
        let g = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(3.0, 0.0)]);
        let v = gram_form(&g, &[c(0.0, 0.0), c(1.0, 0.0)], &[c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(v, g[(1, 0)]);
        assert_eq!(hermitian_defect(&g), 0.0);
    }
}
