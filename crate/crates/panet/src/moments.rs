//! Photon-number statistics extracted from the quadrature CM.
//!
//! Photon numbers are quadratic in the quadratures, so for a zero-mean
//! Gaussian state every number moment follows from the CM alone via the
//! Wick/Isserlis factorization of fourth moments. The bookkeeping runs
//! through the complex correlators `m_ij = <a_i a_j>` and `k_ij =
//! <a_i† a_j>`, recovered from the symmetrized CM entries with the operator
//! ordering corrections of `[X, Y] = 2i`.
//!
//! The observable of interest is the variance of the photon-number
//! difference between two modes: twin beams (a lone squeezed pair) have
//! perfectly correlated photon numbers and zero difference variance, while
//! the two-stage network trades some of that correlation for multipartite
//! structure.

use nalgebra::Complex;
use serde::Serialize;

use crate::symplectic::CovarianceMatrix;
use crate::{Error, Result};

/// Photon-number-difference statistics for one mode pair.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MomentsResult {
    pub mode_i: usize,
    pub mode_j: usize,
    /// Variance of `n_i - n_j`.
    pub v_diff: f64,
    pub nbar_i: f64,
    pub nbar_j: f64,
}

/// `<a_i a_j>` of a zero-mean Gaussian state.
fn m_corr(cm: &CovarianceMatrix, i: usize, j: usize) -> Complex<f64> {
    let sig = cm.matrix();
    let (xi, yi, xj, yj) = (2 * i, 2 * i + 1, 2 * j, 2 * j + 1);
    Complex::new(
        sig[(xi, xj)] - sig[(yi, yj)],
        sig[(xi, yj)] + sig[(yi, xj)],
    ) * 0.25
}

/// `<a_i† a_j>` of a zero-mean Gaussian state.
fn k_corr(cm: &CovarianceMatrix, i: usize, j: usize) -> Complex<f64> {
    let sig = cm.matrix();
    let (xi, yi, xj, yj) = (2 * i, 2 * i + 1, 2 * j, 2 * j + 1);
    let correction = if i == j { 0.5 } else { 0.0 };
    Complex::new(
        sig[(xi, xj)] + sig[(yi, yj)] - 4.0 * correction,
        sig[(xi, yj)] - sig[(yi, xj)],
    ) * 0.25
}

/// Mean photon number `nbar_i = (<X_i^2> + <Y_i^2> - 2) / 4`.
pub fn mean_photon_number(cm: &CovarianceMatrix, i: usize) -> Result<f64> {
    if i >= cm.n_modes() {
        return Err(Error::ModeOutOfRange(i, cm.n_modes()));
    }
    Ok(k_corr(cm, i, i).re.max(0.0))
}

/// Variance of the photon-number difference `n_i - n_j`, from the Wick
/// expansion: `Var(n_i) = |m_ii|^2 + nbar_i (nbar_i + 1)` per mode and
/// `Cov(n_i, n_j) = |m_ij|^2 + |k_ij|^2` across modes.
pub fn number_difference_variance(
    cm: &CovarianceMatrix,
    i: usize,
    j: usize,
) -> Result<MomentsResult> {
    for &mode in &[i, j] {
        if mode >= cm.n_modes() {
            return Err(Error::ModeOutOfRange(mode, cm.n_modes()));
        }
    }
    if i == j {
        return Err(Error::EqualModes(i));
    }
    let nbar_i = mean_photon_number(cm, i)?;
    let nbar_j = mean_photon_number(cm, j)?;
    let var_i = m_corr(cm, i, i).norm_sqr() + nbar_i * (nbar_i + 1.0);
    let var_j = m_corr(cm, j, j).norm_sqr() + nbar_j * (nbar_j + 1.0);
    let cov = m_corr(cm, i, j).norm_sqr() + k_corr(cm, i, j).norm_sqr();
    Ok(MomentsResult {
        mode_i: i,
        mode_j: j,
        v_diff: var_i + var_j - 2.0 * cov,
        nbar_i,
        nbar_j,
    })
}

/// Closed-form ratio `V(stage-1 pair) / V(stage-2 pair)` at equal squeezing
/// `s1 = s2 = s`, which collapses to `2 sinh^4 s + cosh^4 s`. Undefined at
/// `s = 0`, where the stage-2 pair variance vanishes.
pub fn variance_ratio_diagonal(s: f64) -> Result<f64> {
    if !s.is_finite() || s < 0.0 {
        return Err(Error::BadSqueezing);
    }
    if s == 0.0 {
        return Err(Error::ZeroSqueezing);
    }
    Ok(2.0 * s.sinh().powi(4) + s.cosh().powi(4))
}
