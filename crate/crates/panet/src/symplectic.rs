//! Symplectic algebra on quadrature covariance matrices.
//!
//! A zero-mean Gaussian state of `n` bosonic modes is fully described by its
//! covariance matrix `sigma`, the table of symmetrized second moments of the
//! quadratures `X = a† + a` and `Y = i(a† - a)`. In this normalization the
//! vacuum CM is the identity. Quadratures are interleaved per mode, so row
//! `2k` is `X_k` and row `2k + 1` is `Y_k`.
//!
//! Gaussian unitaries act on quadratures as symplectic matrices, `sigma ->
//! S sigma S^T` with `S Omega S^T = Omega`. The symplectic form `Omega` is
//! block diagonal with one `J = [[0, -1], [1, 0]]` block per mode. The
//! Williamson spectrum of a CM, the absolute values of the eigenvalues of
//! `i Omega sigma`, decides physicality (`nu >= 1`), purity (`nu = 1`), and,
//! applied after a partial transpose, separability.

use nalgebra::{DMatrix, Matrix2, Schur};
use serde::{Deserialize, Serialize};

use crate::{Error, Result, PAIR_RTOL, TOL_STRUCTURAL, TOL_SYMPLECTIC};

/// Iteration cap for the Schur decomposition behind the Williamson spectrum.
const SCHUR_MAX_ITER: usize = 10_000;

/// Block-diagonal symplectic form `Omega`, one `J` block per mode.
///
/// Satisfies `Omega^T = -Omega` and `Omega^2 = -I`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    n_modes: usize,
    entries: DMatrix<f64>,
}

impl SymplecticForm {
    pub fn new(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::BadModeCount(0, 1));
        }
        let dim = 2 * n_modes;
        let mut entries = DMatrix::zeros(dim, dim);
        for m in 0..n_modes {
            entries[(2 * m, 2 * m + 1)] = -1.0;
            entries[(2 * m + 1, 2 * m)] = 1.0;
        }
        Ok(Self { n_modes, entries })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }
}

/// Real symplectic matrix representing a Gaussian unitary on quadratures.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    n_modes: usize,
    entries: DMatrix<f64>,
}

impl SymplecticMatrix {
    /// Wraps a matrix after checking the symplectic condition
    /// `S Omega S^T = Omega` to within [`TOL_SYMPLECTIC`].
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = entries.shape();
        if rows != cols || rows == 0 || rows % 2 != 0 {
            return Err(Error::BadShape(rows, cols));
        }
        for r in 0..rows {
            for c in 0..cols {
                if !entries[(r, c)].is_finite() {
                    return Err(Error::NonFinite(r, c));
                }
            }
        }
        let n_modes = rows / 2;
        let omega = SymplecticForm::new(n_modes)?;
        let residual = &entries * omega.matrix() * entries.transpose() - omega.matrix();
        let worst = residual.iter().fold(0.0_f64, |acc, &v| acc.max(v.abs()));
        if worst > TOL_SYMPLECTIC {
            return Err(Error::NotSymplectic(worst));
        }
        Ok(Self { n_modes, entries })
    }

    pub fn identity(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::BadModeCount(0, 1));
        }
        Ok(Self {
            n_modes,
            entries: DMatrix::identity(2 * n_modes, 2 * n_modes),
        })
    }

    /// Composition `self . other`, the transformation applying `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n_modes != other.n_modes {
            return Err(Error::DimensionMismatch(self.n_modes, other.n_modes));
        }
        Self::new(&self.entries * &other.entries)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }
}

/// Two-mode squeezer parameters: the squeezed pair, the degree of squeezing
/// `s`, and the squeezing angle `theta` of `zeta = s e^(i theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TmsParams {
    pub mode_i: usize,
    pub mode_j: usize,
    pub s: f64,
    pub theta: f64,
}

impl TmsParams {
    /// Squeezer at the angle `theta = pi` used by every amplifier in the ring.
    pub fn new(mode_i: usize, mode_j: usize, s: f64) -> Self {
        Self {
            mode_i,
            mode_j,
            s,
            theta: std::f64::consts::PI,
        }
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }
}

/// Symplectic matrix of the two-mode squeezer `exp(zeta* ab - zeta a†b†)`.
///
/// The matrix is the identity outside the two 2x2 diagonal blocks of the
/// squeezed pair (both `cosh(s) I`) and the symmetric coupling blocks between
/// them. At `theta = pi` the coupling mixes `X_i <-> X_j` with `+sinh(s)` and
/// `Y_i <-> Y_j` with `-sinh(s)`.
pub fn tms_symplectic(params: TmsParams, n_modes: usize) -> Result<SymplecticMatrix> {
    let TmsParams {
        mode_i,
        mode_j,
        s,
        theta,
    } = params;
    if mode_i >= n_modes {
        return Err(Error::ModeOutOfRange(mode_i, n_modes));
    }
    if mode_j >= n_modes {
        return Err(Error::ModeOutOfRange(mode_j, n_modes));
    }
    if mode_i == mode_j {
        return Err(Error::EqualModes(mode_i));
    }
    if !s.is_finite() || !theta.is_finite() {
        return Err(Error::BadSqueezing);
    }
    let dim = 2 * n_modes;
    let mut m = DMatrix::identity(dim, dim);
    let (ch, sh) = (s.cosh(), s.sinh());
    for &mode in &[mode_i, mode_j] {
        m[(2 * mode, 2 * mode)] = ch;
        m[(2 * mode + 1, 2 * mode + 1)] = ch;
    }
    let (cos_t, sin_t) = (theta.cos(), theta.sin());
    let coupling = [[-sh * cos_t, -sh * sin_t], [-sh * sin_t, sh * cos_t]];
    for (r, row) in coupling.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            m[(2 * mode_i + r, 2 * mode_j + c)] = v;
            m[(2 * mode_j + r, 2 * mode_i + c)] = v;
        }
    }
    SymplecticMatrix::new(m)
}

/// Covariance matrix of a zero-mean Gaussian state in the interleaved
/// `(X_0, Y_0, X_1, Y_1, ...)` quadrature ordering, vacuum variance 1.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    n_modes: usize,
    entries: DMatrix<f64>,
}

impl CovarianceMatrix {
    /// Wraps a matrix after checking shape, finiteness, and symmetry to
    /// within [`TOL_STRUCTURAL`] relative tolerance. The stored entries are
    /// symmetrized so later congruences cannot amplify roundoff asymmetry.
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = entries.shape();
        if rows != cols || rows == 0 || rows % 2 != 0 {
            return Err(Error::BadShape(rows, cols));
        }
        let mut scale = 1.0_f64;
        for r in 0..rows {
            for c in 0..cols {
                let v = entries[(r, c)];
                if !v.is_finite() {
                    return Err(Error::NonFinite(r, c));
                }
                scale = scale.max(v.abs());
            }
        }
        for r in 0..rows {
            for c in (r + 1)..cols {
                let delta = (entries[(r, c)] - entries[(c, r)]).abs();
                if delta > TOL_STRUCTURAL * scale {
                    return Err(Error::NotSymmetric { i: r, j: c, delta });
                }
            }
        }
        let entries = 0.5 * (&entries + entries.transpose());
        Ok(Self {
            n_modes: rows / 2,
            entries,
        })
    }

    /// The `n`-mode vacuum, an identity CM. Physical and pure.
    pub fn vacuum(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::BadModeCount(0, 1));
        }
        Ok(Self {
            n_modes,
            entries: DMatrix::identity(2 * n_modes, 2 * n_modes),
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn dim(&self) -> usize {
        2 * self.n_modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// The 2x2 quadrature block coupling modes `i` and `j`.
    pub fn block(&self, i: usize, j: usize) -> Result<Matrix2<f64>> {
        for &mode in &[i, j] {
            if mode >= self.n_modes {
                return Err(Error::ModeOutOfRange(mode, self.n_modes));
            }
        }
        Ok(self.entries.fixed_view::<2, 2>(2 * i, 2 * j).into_owned())
    }

    /// Evolves the CM under a Gaussian unitary, `sigma -> S sigma S^T`.
    pub fn apply(&self, s: &SymplecticMatrix) -> Result<Self> {
        if s.n_modes() != self.n_modes {
            return Err(Error::DimensionMismatch(self.n_modes, s.n_modes()));
        }
        let m = s.matrix() * &self.entries * s.matrix().transpose();
        Ok(Self {
            n_modes: self.n_modes,
            entries: 0.5 * (&m + m.transpose()),
        })
    }

    /// Partial transpose on the listed modes: `P sigma P` where `P` flips the
    /// sign of the Y quadrature of each listed mode. Involutive.
    pub fn partial_transpose(&self, modes: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.n_modes];
        for &m in modes {
            if m >= self.n_modes {
                return Err(Error::ModeOutOfRange(m, self.n_modes));
            }
            if seen[m] {
                return Err(Error::DuplicateMode(m));
            }
            seen[m] = true;
        }
        let dim = self.dim();
        let mut entries = self.entries.clone();
        for &m in modes {
            let y = 2 * m + 1;
            for c in 0..dim {
                entries[(y, c)] = -entries[(y, c)];
            }
            for r in 0..dim {
                entries[(r, y)] = -entries[(r, y)];
            }
        }
        Ok(Self {
            n_modes: self.n_modes,
            entries,
        })
    }

    /// Williamson spectrum: the `n` absolute imaginary parts of the
    /// eigenvalues of `Omega sigma`, deduplicated into conjugate pairs and
    /// sorted ascending. Invariant under symplectic congruence.
    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        let omega = SymplecticForm::new(self.n_modes)?;
        let prod = omega.matrix() * &self.entries;
        let schur = Schur::try_new(prod, f64::EPSILON, SCHUR_MAX_ITER).ok_or(Error::EigenFailed)?;
        let mut mags: Vec<f64> = schur
            .complex_eigenvalues()
            .iter()
            .map(|z| z.im.abs())
            .collect();
        mags.sort_by(f64::total_cmp);
        let mut nus = Vec::with_capacity(self.n_modes);
        for pair in mags.chunks_exact(2) {
            let (lo, hi) = (pair[0], pair[1]);
            if hi - lo > PAIR_RTOL * hi.max(1.0) {
                return Err(Error::UnpairedEigenvalues(lo, hi));
            }
            nus.push(0.5 * (lo + hi));
        }
        Ok(nus)
    }

    /// Smallest symplectic eigenvalue, the quantity the PPT criterion tests.
    pub fn min_symplectic_eigenvalue(&self) -> Result<f64> {
        let nus = self.symplectic_eigenvalues()?;
        Ok(nus[0])
    }

    /// True iff every symplectic eigenvalue is at least `1 - tol`, the
    /// uncertainty-principle condition `sigma + i Omega >= 0`. Pathological
    /// input (failed eigen-decomposition) reports as unphysical.
    pub fn is_physical(&self, tol: f64) -> bool {
        match self.symplectic_eigenvalues() {
            Ok(nus) => nus.first().is_some_and(|&lo| lo >= 1.0 - tol),
            Err(_) => false,
        }
    }

    /// True iff every symplectic eigenvalue equals 1 to within `tol`.
    pub fn is_pure(&self, tol: f64) -> bool {
        match self.symplectic_eigenvalues() {
            Ok(nus) => nus.iter().all(|&nu| (nu - 1.0).abs() <= tol),
            Err(_) => false,
        }
    }
}

/// Serialization schema for covariance matrices. The `ordering` and
/// `vacuum_variance` tags make the stored conventions explicit so a file
/// produced under a different normalization is rejected instead of
/// silently misread.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CmJson {
    pub modes: usize,
    pub ordering: String,
    pub vacuum_variance: f64,
    pub matrix: Vec<Vec<f64>>,
}

impl From<&CovarianceMatrix> for CmJson {
    fn from(cm: &CovarianceMatrix) -> Self {
        let dim = cm.dim();
        let matrix = (0..dim)
            .map(|r| (0..dim).map(|c| cm.entries[(r, c)]).collect())
            .collect();
        Self {
            modes: cm.n_modes,
            ordering: "XYXY".to_owned(),
            vacuum_variance: 1.0,
            matrix,
        }
    }
}

impl TryFrom<CmJson> for CovarianceMatrix {
    type Error = Error;

    fn try_from(json: CmJson) -> Result<Self> {
        if json.ordering != "XYXY" {
            return Err(Error::BadOrdering(json.ordering));
        }
        if json.vacuum_variance != 1.0 {
            return Err(Error::BadNormalization(json.vacuum_variance));
        }
        let dim = 2 * json.modes;
        if json.matrix.len() != dim || json.matrix.iter().any(|row| row.len() != dim) {
            let cols = json.matrix.first().map_or(0, Vec::len);
            return Err(Error::BadShape(json.matrix.len(), cols));
        }
        Self::new(DMatrix::from_fn(dim, dim, |r, c| json.matrix[r][c]))
    }
}
