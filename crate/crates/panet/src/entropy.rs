//! Entanglement entropy of reduced network states and its minimization.
//!
//! For a pure `2N`-mode state, the von Neumann entropy of the state reduced
//! to a subset of modes measures the entanglement between that subset and
//! the rest. The genuine multipartite entanglement measure `E_2N` is the
//! minimum of this entropy over all subsets of at most `N` modes (the
//! complement symmetry of pure-state entropy makes larger subsets
//! redundant). `E_2N > 0` certifies genuine `2N`-partite entanglement.
//!
//! The ring's short correlation range makes the minimization cheap: the
//! minimum is always attained on a ring-consecutive window of length at most
//! four. The module provides both the exhaustive minimization (the oracle)
//! and the consecutive-window shortcut, plus the unitary window reduction
//! that explains the shortcut: undoing the squeezers that act entirely
//! inside a window leaves its entropy unchanged while shrinking its
//! correlated core.

use serde::Serialize;

use crate::network::{build_network, edge_stage, EdgeStage, NetworkSpec};
use crate::symplectic::{tms_symplectic, CovarianceMatrix, TmsParams};
use crate::{Error, Result, ALL_SUBSETS_GUARD, TOL_PHYSICAL};

/// Sorted set of modes to keep under a partial trace.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Subset {
    modes: Vec<usize>,
    n_modes: usize,
    consecutive: bool,
}

impl Subset {
    pub fn new(modes: &[usize], n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::BadModeCount(0, 1));
        }
        if modes.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut seen = vec![false; n_modes];
        for &m in modes {
            if m >= n_modes {
                return Err(Error::ModeOutOfRange(m, n_modes));
            }
            if seen[m] {
                return Err(Error::DuplicateMode(m));
            }
            seen[m] = true;
        }
        let modes: Vec<usize> = (0..n_modes).filter(|&m| seen[m]).collect();
        let boundary = modes
            .iter()
            .filter(|&&m| !seen[(m + 1) % n_modes])
            .count();
        Ok(Self {
            consecutive: boundary <= 1,
            modes,
            n_modes,
        })
    }

    pub fn modes(&self) -> &[usize] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// True when the modes form one contiguous arc of the ring, wrap-around
    /// across the last-to-first seam included.
    pub fn is_consecutive(&self) -> bool {
        self.consecutive
    }

    /// Dash-joined index label, such as `"0-1-11"`.
    pub fn label(&self) -> String {
        let mut out = String::new();
        for (i, m) in self.modes.iter().enumerate() {
            if i > 0 {
                out.push('-');
            }
            out.push_str(&m.to_string());
        }
        out
    }

    /// The subset's modes in ring-arc order (only meaningful when
    /// consecutive): starts at the mode whose ring predecessor is absent.
    fn arc_order(&self) -> Vec<usize> {
        let in_set = |m: usize| self.modes.binary_search(&m).is_ok();
        let start = self
            .modes
            .iter()
            .copied()
            .find(|&m| !in_set((m + self.n_modes - 1) % self.n_modes))
            .unwrap_or(0);
        (0..self.len())
            .map(|o| (start + o) % self.n_modes)
            .collect()
    }
}

/// Partial trace: the principal submatrix on the subset's quadratures.
pub fn reduced_cm(cm: &CovarianceMatrix, subset: &Subset) -> Result<CovarianceMatrix> {
    if subset.n_modes() != cm.n_modes() {
        return Err(Error::DimensionMismatch(cm.n_modes(), subset.n_modes()));
    }
    let dim = 2 * subset.len();
    let mut rows = Vec::with_capacity(dim);
    for &m in subset.modes() {
        rows.push(2 * m);
        rows.push(2 * m + 1);
    }
    let entries =
        nalgebra::DMatrix::from_fn(dim, dim, |r, c| cm.matrix()[(rows[r], rows[c])]);
    CovarianceMatrix::new(entries)
}

/// Threshold below which `h` switches to its series expansion; pure-state
/// eigenvalues sit at 1 up to roundoff and the exact formula would take
/// `log` of that roundoff.
const H_SERIES_THRESHOLD: f64 = 1e-8;

/// The single-eigenvalue entropy kernel in bits,
/// `h(x) = ((x+1)/2) log2((x+1)/2) - ((x-1)/2) log2((x-1)/2)`, with
/// `h(1) = 0` as the limit value.
fn h(x: f64) -> f64 {
    let eps = x - 1.0;
    if eps <= 0.0 {
        0.0
    } else if eps < H_SERIES_THRESHOLD {
        0.5 * eps * (std::f64::consts::LOG2_E + (2.0 / eps).log2())
    } else {
        let xp = 0.5 * (x + 1.0);
        let xm = 0.5 * (x - 1.0);
        xp * xp.log2() - xm * xm.log2()
    }
}

/// Von Neumann entropy of a Gaussian state in bits,
/// `S = (1/2) sum h(nu_n)` over the symplectic eigenvalues.
pub fn gaussian_entropy(cm: &CovarianceMatrix) -> Result<f64> {
    let nus = cm.symplectic_eigenvalues()?;
    if nus[0] < 1.0 - TOL_PHYSICAL {
        return Err(Error::Unphysical(nus[0]));
    }
    Ok(0.5 * nus.iter().map(|&nu| h(nu)).sum::<f64>())
}

/// How [`e2n`] enumerates candidate subsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EnumerationMode {
    /// Every subset of size up to `N`; exact but exponential, guarded.
    AllSubsets,
    /// Ring-consecutive windows of length up to 4, every translate; the
    /// window reduction argument makes this set sufficient.
    ConsecutiveOnly,
}

/// One evaluated candidate subset.
#[derive(Debug, Clone, Serialize)]
pub struct SubsetEntropy {
    pub subset: Subset,
    pub entropy_bits: f64,
}

/// Outcome of the `E_2N` minimization.
#[derive(Debug, Clone, Serialize)]
pub struct EntropyReport {
    pub spec: NetworkSpec,
    pub mode: EnumerationMode,
    /// Every candidate, ordered by size then lexicographically.
    pub entries: Vec<SubsetEntropy>,
    pub e2n_bits: f64,
    /// First candidate (in entry order) attaining the minimum.
    pub argmin: Subset,
}

fn candidate_subsets(spec: NetworkSpec, mode: EnumerationMode) -> Result<Vec<Subset>> {
    let n = spec.n_modes;
    let half = spec.half_modes();
    let mut subsets = match mode {
        EnumerationMode::AllSubsets => {
            if n > ALL_SUBSETS_GUARD {
                return Err(Error::GuardExceeded(n, ALL_SUBSETS_GUARD));
            }
            let mut out = Vec::new();
            for mask in 1_u32..(1 << n) {
                if mask.count_ones() as usize > half {
                    continue;
                }
                let modes: Vec<usize> = (0..n).filter(|&m| mask & (1 << m) != 0).collect();
                out.push(Subset::new(&modes, n)?);
            }
            out
        }
        EnumerationMode::ConsecutiveOnly => {
            let mut out = Vec::new();
            for len in 1..=half.min(4) {
                for start in 0..n {
                    let modes: Vec<usize> = (0..len).map(|o| (start + o) % n).collect();
                    out.push(Subset::new(&modes, n)?);
                }
            }
            out
        }
    };
    subsets.sort_by(|a, b| (a.len(), a.modes()).cmp(&(b.len(), b.modes())));
    Ok(subsets)
}

/// Genuine `2N`-partite entanglement entropy: the minimum reduced-state
/// entropy over candidate subsets, with the first minimizer (by size, then
/// lexicographic order) reported as `argmin`.
pub fn e2n(spec: NetworkSpec, mode: EnumerationMode) -> Result<EntropyReport> {
    let cm = build_network(spec)?;
    let candidates = candidate_subsets(spec, mode)?;
    let mut entries = Vec::with_capacity(candidates.len());
    let mut best: Option<usize> = None;
    for subset in candidates {
        let entropy_bits = gaussian_entropy(&reduced_cm(&cm, &subset)?)?;
        entries.push(SubsetEntropy {
            subset,
            entropy_bits,
        });
        if best.is_none_or(|b| entropy_bits < entries[b].entropy_bits) {
            best = Some(entries.len() - 1);
        }
    }
    let best = best.expect("candidate enumeration is never empty");
    Ok(EntropyReport {
        spec,
        mode,
        e2n_bits: entries[best].entropy_bits,
        argmin: entries[best].subset.clone(),
        entries,
    })
}

/// Undoes the squeezers acting entirely inside a consecutive window, on the
/// window's reduced CM: stage-2 inverses first, then stage-1, reversing the
/// creation order. The window's entropy is untouched (the operation is
/// unitary on the kept modes) while its correlated core shrinks; for a
/// stage-aligned length-4 window the result splits into the two end modes
/// exactly.
pub fn reduce_consecutive(
    cm: &CovarianceMatrix,
    window: &Subset,
    spec: NetworkSpec,
) -> Result<CovarianceMatrix> {
    spec.validate()?;
    if spec.n_modes != cm.n_modes() {
        return Err(Error::DimensionMismatch(cm.n_modes(), spec.n_modes));
    }
    if !window.is_consecutive() {
        return Err(Error::NotConsecutive);
    }
    if window.len() < 3 {
        return Err(Error::BadModeCount(window.len(), 3));
    }
    let mut reduced = reduced_cm(cm, window)?;
    let arc = window.arc_order();
    let local = |global: usize| {
        window
            .modes()
            .binary_search(&global)
            .expect("arc modes are window modes")
    };
    let wraps = window.len() == spec.n_modes;
    let edge_count = if wraps { arc.len() } else { arc.len() - 1 };
    for undo_stage in [EdgeStage::Two, EdgeStage::One] {
        for e in 0..edge_count {
            let (a, b) = (arc[e], arc[(e + 1) % arc.len()]);
            if edge_stage(a, b, spec.n_modes) != Some(undo_stage) {
                continue;
            }
            let s = match undo_stage {
                EdgeStage::One => spec.s1,
                EdgeStage::Two => spec.s2,
            };
            let params = TmsParams::new(local(a), local(b), -s).with_theta(spec.theta);
            reduced = reduced.apply(&tms_symplectic(params, window.len())?)?;
        }
    }
    Ok(reduced)
}

/// Entropy difference `S(Tr_A) - S(Tr_B)` in bits between two kept subsets
/// of the network state.
pub fn entropy_difference(spec: NetworkSpec, a: &Subset, b: &Subset) -> Result<f64> {
    let cm = build_network(spec)?;
    let s_a = gaussian_entropy(&reduced_cm(&cm, a)?)?;
    let s_b = gaussian_entropy(&reduced_cm(&cm, b)?)?;
    Ok(s_a - s_b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::ClosedFormParams;
    use approx::assert_relative_eq;

    fn hexa_spec(s1: f64, s2: f64) -> NetworkSpec {
        NetworkSpec::new(6, s1, s2).unwrap()
    }

    #[test]
    fn subset_validation_and_consecutive_flag() {
        let s = Subset::new(&[2, 0, 1], 6).unwrap();
        assert_eq!(s.modes(), &[0, 1, 2]);
        assert!(s.is_consecutive());
        assert!(Subset::new(&[5, 0], 6).unwrap().is_consecutive());
        assert!(!Subset::new(&[0, 2], 6).unwrap().is_consecutive());
        assert!(!Subset::new(&[0, 1, 3], 6).unwrap().is_consecutive());
        assert!(Subset::new(&[0, 1, 2, 3, 4, 5], 6).unwrap().is_consecutive());
        assert_eq!(Subset::new(&[11, 0, 1], 12).unwrap().label(), "0-1-11");
        assert!(matches!(Subset::new(&[], 6), Err(Error::EmptySubset)));
        assert!(matches!(
            Subset::new(&[6], 6),
            Err(Error::ModeOutOfRange(6, 6))
        ));
    }

    #[test]
    fn arc_order_follows_the_ring() {
        assert_eq!(Subset::new(&[4, 5, 0, 1], 6).unwrap().arc_order(), [4, 5, 0, 1]);
        assert_eq!(Subset::new(&[1, 2, 3], 6).unwrap().arc_order(), [1, 2, 3]);
    }

    #[test]
    fn partial_trace_basics() {
        let cm = build_network(hexa_spec(0.4, 0.6)).unwrap();
        let full = Subset::new(&[0, 1, 2, 3, 4, 5], 6).unwrap();
        assert_eq!(&reduced_cm(&cm, &full).unwrap(), &cm);
        let quad = build_network(NetworkSpec::new(4, 0.3, 0.7).unwrap()).unwrap();
        let one = reduced_cm(&quad, &Subset::new(&[2], 4).unwrap()).unwrap();
        let p = ClosedFormParams::new(0.3, 0.7);
        for d in 0..2 {
            assert_relative_eq!(
                one.matrix()[(d, d)],
                p.alpha_plus * p.beta_plus,
                max_relative = 1e-12
            );
        }
        assert!(one.is_physical(1e-10));
    }

    #[test]
    fn distant_mode_pairs_reduce_to_a_block_diagonal_product() {
        let cm = build_network(NetworkSpec::new(10, 0.5, 0.8).unwrap()).unwrap();
        let pair = reduced_cm(&cm, &Subset::new(&[0, 5], 10).unwrap()).unwrap();
        assert!(pair.block(0, 1).unwrap().abs().max() < 1e-12);
    }

    #[test]
    fn vacuum_entropy_is_zero() {
        let cm = CovarianceMatrix::vacuum(3).unwrap();
        assert_relative_eq!(gaussian_entropy(&cm).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn single_mode_of_a_squeezed_pair_has_the_thermal_entropy() {
        let s = 0.65;
        let sym = tms_symplectic(TmsParams::new(0, 1, s), 2).unwrap();
        let cm = CovarianceMatrix::vacuum(2).unwrap().apply(&sym).unwrap();
        let one = reduced_cm(&cm, &Subset::new(&[0], 2).unwrap()).unwrap();
        let x = (2.0 * s).cosh();
        let xp = 0.5 * (x + 1.0);
        let xm = 0.5 * (x - 1.0);
        let expected = 0.5 * (xp * xp.log2() - xm * xm.log2());
        assert_relative_eq!(gaussian_entropy(&one).unwrap(), expected, max_relative = 1e-10);
    }

    #[test]
    fn complementary_subsets_of_a_pure_state_share_their_entropy() {
        let cm = build_network(hexa_spec(0.5, 0.8)).unwrap();
        for modes in [&[0_usize][..], &[0, 3], &[1, 2, 5]] {
            let kept = Subset::new(modes, 6).unwrap();
            let rest: Vec<usize> = (0..6).filter(|m| !modes.contains(m)).collect();
            let comp = Subset::new(&rest, 6).unwrap();
            let s_kept = gaussian_entropy(&reduced_cm(&cm, &kept).unwrap()).unwrap();
            let s_comp = gaussian_entropy(&reduced_cm(&cm, &comp).unwrap()).unwrap();
            assert_relative_eq!(s_kept, s_comp, epsilon = 1e-9);
        }
    }

    #[test]
    fn unphysical_input_is_reported() {
        let cm = CovarianceMatrix::new(nalgebra::DMatrix::from_diagonal_element(2, 2, 0.5))
            .unwrap();
        assert!(matches!(gaussian_entropy(&cm), Err(Error::Unphysical(_))));
    }

    #[test]
    fn entropy_kernel_is_continuous_across_the_series_threshold() {
        let below = h(1.0 + (1.0 - 1e-6) * 1e-8);
        let above = h(1.0 + (1.0 + 1e-6) * 1e-8);
        assert!(below < above);
        assert_relative_eq!(below, above, max_relative = 1e-4);
        assert_eq!(h(1.0), 0.0);
        assert_eq!(h(1.0 - 1e-12), 0.0);
    }

    #[test]
    fn minimum_entropy_on_the_hexapartite_ring() {
        let report = e2n(hexa_spec(0.4, 0.6), EnumerationMode::ConsecutiveOnly).unwrap();
        assert_relative_eq!(report.e2n_bits, 0.6960267201, epsilon = 1e-8);
        assert_eq!(report.argmin.modes(), &[0, 5]);
        let exhaustive = e2n(hexa_spec(0.4, 0.6), EnumerationMode::AllSubsets).unwrap();
        assert_relative_eq!(report.e2n_bits, exhaustive.e2n_bits, epsilon = 1e-9);
    }

    #[test]
    fn e2n_vanishes_without_either_stage() {
        for (s1, s2) in [(0.0, 0.7), (0.7, 0.0)] {
            let report = e2n(hexa_spec(s1, s2), EnumerationMode::ConsecutiveOnly).unwrap();
            assert!(report.e2n_bits.abs() < 1e-10, "E = {}", report.e2n_bits);
        }
    }

    #[test]
    fn exhaustive_mode_is_guarded() {
        let spec = NetworkSpec::new(14, 0.4, 0.6).unwrap();
        assert!(matches!(
            e2n(spec, EnumerationMode::AllSubsets),
            Err(Error::GuardExceeded(14, 12))
        ));
    }

    #[test]
    fn window_reduction_preserves_entropy_and_splits_the_ends() {
        let spec = NetworkSpec::new(12, 0.4, 0.6).unwrap();
        let cm = build_network(spec).unwrap();
        let window = Subset::new(&[1, 2, 3, 4], 12).unwrap();
        let before = gaussian_entropy(&reduced_cm(&cm, &window).unwrap()).unwrap();
        let reduced = reduce_consecutive(&cm, &window, spec).unwrap();
        let after = gaussian_entropy(&reduced).unwrap();
        assert_relative_eq!(before, after, epsilon = 1e-8);
        for (i, j) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
            let coupling = reduced.block(i, j).unwrap().abs().max();
            assert!(coupling < 1e-10, "block ({i},{j}) couples at {coupling:e}");
        }
        for mid in [1_usize, 2] {
            let off_vacuum =
                (reduced.block(mid, mid).unwrap() - nalgebra::Matrix2::identity()).abs().max();
            assert!(off_vacuum < 1e-10, "middle mode {mid} is not vacuum");
        }
        let s_first = gaussian_entropy(
            &reduced_cm(&reduced, &Subset::new(&[0], 4).unwrap()).unwrap(),
        )
        .unwrap();
        let s_last = gaussian_entropy(
            &reduced_cm(&reduced, &Subset::new(&[3], 4).unwrap()).unwrap(),
        )
        .unwrap();
        assert_relative_eq!(before, s_first + s_last, epsilon = 1e-8);
    }

    #[test]
    fn window_reduction_rejects_bad_windows() {
        let spec = NetworkSpec::new(12, 0.4, 0.6).unwrap();
        let cm = build_network(spec).unwrap();
        let gap = Subset::new(&[1, 2, 4], 12).unwrap();
        assert!(matches!(
            reduce_consecutive(&cm, &gap, spec),
            Err(Error::NotConsecutive)
        ));
        let short = Subset::new(&[1, 2], 12).unwrap();
        assert!(matches!(
            reduce_consecutive(&cm, &short, spec),
            Err(Error::BadModeCount(2, 3))
        ));
    }

    #[test]
    fn five_mode_window_reduces_to_a_three_mode_core() {
        let spec = NetworkSpec::new(12, 0.4, 0.6).unwrap();
        let cm = build_network(spec).unwrap();
        let window = Subset::new(&[1, 2, 3, 4, 5], 12).unwrap();
        let before = gaussian_entropy(&reduced_cm(&cm, &window).unwrap()).unwrap();
        let reduced = reduce_consecutive(&cm, &window, spec).unwrap();
        assert_relative_eq!(before, gaussian_entropy(&reduced).unwrap(), epsilon = 1e-8);
        let decoupled_vacuum = (0..5)
            .filter(|&m| {
                let self_block =
                    (reduced.block(m, m).unwrap() - nalgebra::Matrix2::identity()).abs().max();
                let cross = (0..5)
                    .filter(|&o| o != m)
                    .map(|o| reduced.block(m, o).unwrap().abs().max())
                    .fold(0.0_f64, f64::max);
                self_block < 1e-10 && cross < 1e-10
            })
            .count();
        assert!(decoupled_vacuum >= 2, "only {decoupled_vacuum} modes decoupled");
    }

    #[test]
    fn entropy_difference_basics() {
        let spec = NetworkSpec::new(12, 0.5, 0.5).unwrap();
        let a = Subset::new(&[2, 4, 5], 12).unwrap();
        assert_relative_eq!(
            entropy_difference(spec, &a, &a).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        let b = Subset::new(&[4, 5], 12).unwrap();
        assert!(entropy_difference(spec, &a, &b).unwrap() >= -1e-10);
    }
}
