//! Construction of the two-stage parametric-amplifier ring state.
//!
//! The network acts on `2N` vacuum modes. Stage one squeezes the pairs
//! `(0,1), (2,3), ..., (2N-2, 2N-1)`; stage two squeezes the staggered pairs
//! `(1,2), (3,4), ..., (2N-1, 0)`. Every amplifier of a stage shares one
//! squeezing degree (`s1` or `s2`) and all share the angle `theta`. The
//! pairing turns the modes into a ring whose edges alternate between the two
//! stages, and correlations spread at most three steps along that ring.
//!
//! Two independently derived forms of the same state are kept side by side
//! for cross-checking: [`build_network`] composes the actual squeezing
//! transformations, while [`closed_form_cm_4`] transcribes the known closed
//! form of the quadripartite CM. The two differ by a local sign flip on every
//! other mode (the closed form's convention absorbs a minus sign into the odd
//! ring positions); all entanglement quantities are blind to that flip.

use nalgebra::{DMatrix, Matrix2};
use serde::{Deserialize, Serialize};

use crate::symplectic::{tms_symplectic, CovarianceMatrix, TmsParams};
use crate::{Error, Result};

fn default_theta() -> f64 {
    std::f64::consts::PI
}

/// Declarative description of the PA ring.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec {
    /// Total mode count `2N`, even and at least 4.
    #[serde(rename = "modes")]
    pub n_modes: usize,
    /// Squeezing degree of every first-stage amplifier.
    pub s1: f64,
    /// Squeezing degree of every second-stage amplifier.
    pub s2: f64,
    /// Squeezing angle shared by all amplifiers.
    #[serde(default = "default_theta")]
    pub theta: f64,
}

impl NetworkSpec {
    pub fn new(n_modes: usize, s1: f64, s2: f64) -> Result<Self> {
        let spec = Self {
            n_modes,
            s1,
            s2,
            theta: default_theta(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    /// Checks the invariants; deserialized specs pass through here too.
    pub fn validate(&self) -> Result<()> {
        if self.n_modes % 2 != 0 || self.n_modes < 4 {
            return Err(Error::BadRingSize(self.n_modes));
        }
        if !self.s1.is_finite() || !self.s2.is_finite() || !self.theta.is_finite() {
            return Err(Error::BadSqueezing);
        }
        for s in [self.s1, self.s2] {
            if s < 0.0 {
                return Err(Error::NegativeStageSqueezing(s));
            }
        }
        Ok(())
    }

    /// Half the mode count, the `N` of `2N`.
    pub fn half_modes(&self) -> usize {
        self.n_modes / 2
    }
}

/// Covariance matrix of the full two-stage network output.
pub fn build_network(spec: NetworkSpec) -> Result<CovarianceMatrix> {
    spec.validate()?;
    let n = spec.n_modes;
    let mut cm = CovarianceMatrix::vacuum(n)?;
    for i in (0..n).step_by(2) {
        let params = TmsParams::new(i, i + 1, spec.s1).with_theta(spec.theta);
        cm = cm.apply(&tms_symplectic(params, n)?)?;
    }
    for i in (1..n).step_by(2) {
        let params = TmsParams::new(i, (i + 1) % n, spec.s2).with_theta(spec.theta);
        cm = cm.apply(&tms_symplectic(params, n)?)?;
    }
    Ok(cm)
}

/// The four squeezing-dependent coefficients of the closed-form CM,
/// `alpha_pm = (e^(-2 s1) ± e^(2 s1)) / 2` and the same for `beta` with `s2`.
///
/// `alpha_plus = cosh(2 s1) >= 1` and `alpha_minus = -sinh(2 s1) <= 0`, so
/// `alpha_plus^2 - alpha_minus^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormParams {
    pub alpha_plus: f64,
    pub alpha_minus: f64,
    pub beta_plus: f64,
    pub beta_minus: f64,
}

impl ClosedFormParams {
    pub fn new(s1: f64, s2: f64) -> Self {
        Self {
            alpha_plus: ((-2.0 * s1).exp() + (2.0 * s1).exp()) / 2.0,
            alpha_minus: ((-2.0 * s1).exp() - (2.0 * s1).exp()) / 2.0,
            beta_plus: ((-2.0 * s2).exp() + (2.0 * s2).exp()) / 2.0,
            beta_minus: ((-2.0 * s2).exp() - (2.0 * s2).exp()) / 2.0,
        }
    }
}

/// Closed-form quadripartite CM, transcribed verbatim: every entry is one of
/// `{0, ±alpha_plus beta_plus, ±alpha_minus beta_plus, ±alpha_minus
/// beta_minus, ±alpha_plus beta_minus}`, with X and Y strictly uncorrelated.
pub fn closed_form_cm_4(s1: f64, s2: f64) -> Result<CovarianceMatrix> {
    if !s1.is_finite() || !s2.is_finite() {
        return Err(Error::BadSqueezing);
    }
    let p = ClosedFormParams::new(s1, s2);
    let mut m = DMatrix::zeros(8, 8);
    let mut set_block = |i: usize, j: usize, x: f64, y: f64| {
        m[(2 * i, 2 * j)] = x;
        m[(2 * i + 1, 2 * j + 1)] = y;
        m[(2 * j, 2 * i)] = x;
        m[(2 * j + 1, 2 * i + 1)] = y;
    };
    for i in 0..4 {
        let d = p.alpha_plus * p.beta_plus;
        set_block(i, i, d, d);
    }
    let first = p.alpha_minus * p.beta_plus;
    set_block(0, 1, first, -first);
    set_block(2, 3, first, -first);
    let second = p.alpha_minus * p.beta_minus;
    set_block(0, 2, second, second);
    set_block(1, 3, second, second);
    let cross = p.alpha_plus * p.beta_minus;
    set_block(0, 3, cross, -cross);
    set_block(1, 2, cross, -cross);
    CovarianceMatrix::new(m)
}

/// Which stage squeezed a given ring edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeStage {
    One,
    Two,
}

/// Shortest path length between two modes along the ring.
pub fn ring_distance(i: usize, j: usize, n_modes: usize) -> usize {
    let d = (n_modes + i - j) % n_modes;
    d.min(n_modes - d)
}

/// Stage of the edge between two modes, if they are ring neighbors.
///
/// The edge from an even mode to its successor was squeezed in stage one;
/// the edge from an odd mode to its successor (including the wrap-around
/// edge into mode 0) in stage two.
pub fn edge_stage(i: usize, j: usize, n_modes: usize) -> Option<EdgeStage> {
    let lower = if (i + 1) % n_modes == j {
        i
    } else if (j + 1) % n_modes == i {
        j
    } else {
        return None;
    };
    Some(if lower % 2 == 0 {
        EdgeStage::One
    } else {
        EdgeStage::Two
    })
}

/// True for third neighbors linked by a cascade of three edges starting on a
/// stage-2 edge, the only distance-3 geometry both stages act across. The
/// other third-neighbor family shares no amplifier and stays uncorrelated.
pub fn is_cascaded_third(i: usize, j: usize, n_modes: usize) -> bool {
    ((j + n_modes - i) % n_modes == 3 && i % 2 == 1)
        || ((i + n_modes - j) % n_modes == 3 && j % 2 == 1)
}

/// Structural classification of the 2x2 blocks of the network CM.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockKind {
    /// Diagonal self-correlation block.
    A,
    /// Stage-1 edge block.
    B,
    /// Stage-2 edge block.
    Bprime,
    /// Second-neighbor block.
    C,
    /// Cascaded third-neighbor block.
    D,
    /// Independent third neighbors and all pairs at ring distance 4 or more.
    Zero,
}

/// Classifies the block between modes `i` and `j` by ring geometry alone and
/// returns it alongside the block's entries.
pub fn block_of(cm: &CovarianceMatrix, i: usize, j: usize) -> Result<(BlockKind, Matrix2<f64>)> {
    let n = cm.n_modes();
    let block = cm.block(i, j)?;
    let kind = if i == j {
        BlockKind::A
    } else {
        match ring_distance(i, j, n) {
            1 => match edge_stage(i, j, n) {
                Some(EdgeStage::One) => BlockKind::B,
                _ => BlockKind::Bprime,
            },
            2 => BlockKind::C,
            3 if is_cascaded_third(i, j, n) => BlockKind::D,
            _ => BlockKind::Zero,
        }
    };
    Ok((kind, block))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::SymplecticMatrix;
    use approx::assert_relative_eq;

    fn entrywise_close(a: &CovarianceMatrix, b: &CovarianceMatrix, tol: f64) -> bool {
        (a.matrix() - b.matrix())
            .iter()
            .all(|&delta| delta.abs() <= tol)
    }

    #[test]
    fn zero_squeezing_yields_the_vacuum() {
        let cm = build_network(NetworkSpec::new(6, 0.0, 0.0).unwrap()).unwrap();
        assert_eq!(cm, CovarianceMatrix::vacuum(6).unwrap());
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(matches!(NetworkSpec::new(5, 0.1, 0.1), Err(Error::BadRingSize(5))));
        assert!(matches!(NetworkSpec::new(2, 0.1, 0.1), Err(Error::BadRingSize(2))));
        assert!(matches!(
            NetworkSpec::new(6, -0.1, 0.1),
            Err(Error::NegativeStageSqueezing(_))
        ));
        assert!(matches!(
            NetworkSpec::new(6, f64::INFINITY, 0.1),
            Err(Error::BadSqueezing)
        ));
    }

    #[test]
    fn config_json_round_trips_with_default_angle() {
        let spec: NetworkSpec = serde_json::from_str(r#"{"modes":6,"s1":0.3,"s2":0.7}"#).unwrap();
        assert_eq!(spec.n_modes, 6);
        assert_relative_eq!(spec.theta, std::f64::consts::PI);
        spec.validate().unwrap();
    }

    #[test]
    fn quadripartite_diagonal_is_alpha_plus_beta_plus() {
        let (s1, s2) = (0.3, 0.7);
        let cm = build_network(NetworkSpec::new(4, s1, s2).unwrap()).unwrap();
        let p = ClosedFormParams::new(s1, s2);
        for d in 0..8 {
            assert_relative_eq!(
                cm.matrix()[(d, d)],
                p.alpha_plus * p.beta_plus,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn built_cm_matches_the_closed_form_up_to_local_signs() {
        let (s1, s2) = (0.3, 0.7);
        let built = build_network(NetworkSpec::new(4, s1, s2).unwrap()).unwrap();
        let mut flip = DMatrix::<f64>::identity(8, 8);
        for mode in [1_usize, 3] {
            flip[(2 * mode, 2 * mode)] = -1.0;
            flip[(2 * mode + 1, 2 * mode + 1)] = -1.0;
        }
        let flipped = built.apply(&SymplecticMatrix::new(flip).unwrap()).unwrap();
        let closed = closed_form_cm_4(s1, s2).unwrap();
        assert!(entrywise_close(&flipped, &closed, 1e-12));
    }

    #[test]
    fn closed_form_entries_and_purity() {
        assert_eq!(
            closed_form_cm_4(0.0, 0.0).unwrap(),
            CovarianceMatrix::vacuum(4).unwrap()
        );
        let (s1, s2) = (0.4, 0.9);
        let cm = closed_form_cm_4(s1, s2).unwrap();
        let p = ClosedFormParams::new(s1, s2);
        assert_relative_eq!(
            cm.matrix()[(0, 2)],
            p.alpha_minus * p.beta_plus,
            max_relative = 1e-12
        );
        assert!(cm.is_pure(1e-10));
    }

    #[test]
    fn built_network_is_pure_across_sizes() {
        for n_modes in [4, 6, 8, 12] {
            let cm = build_network(NetworkSpec::new(n_modes, 0.5, 0.8).unwrap()).unwrap();
            assert!(cm.is_pure(1e-10), "2N = {n_modes}");
        }
    }

    #[test]
    fn ring_translation_by_two_is_a_symmetry() {
        let n = 8;
        let cm = build_network(NetworkSpec::new(n, 0.6, 0.3).unwrap()).unwrap();
        for i in 0..n {
            for j in 0..n {
                let orig = cm.block(i, j).unwrap();
                let shifted = cm.block((i + 2) % n, (j + 2) % n).unwrap();
                assert!((orig - shifted).abs().max() < 1e-12, "pair ({i},{j})");
            }
        }
    }

    #[test]
    fn blocks_vanish_beyond_third_neighbors() {
        let n = 10;
        let cm = build_network(NetworkSpec::new(n, 0.7, 0.9).unwrap()).unwrap();
        for i in 0..n {
            for j in 0..n {
                if ring_distance(i, j, n) >= 4 {
                    let block = cm.block(i, j).unwrap();
                    assert!(block.abs().max() < 1e-12, "pair ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn ring_geometry_helpers() {
        assert_eq!(ring_distance(0, 11, 12), 1);
        assert_eq!(ring_distance(2, 7, 12), 5);
        assert_eq!(edge_stage(0, 1, 12), Some(EdgeStage::One));
        assert_eq!(edge_stage(1, 2, 12), Some(EdgeStage::Two));
        assert_eq!(edge_stage(11, 0, 12), Some(EdgeStage::Two));
        assert_eq!(edge_stage(0, 2, 12), None);
        assert!(is_cascaded_third(1, 4, 12));
        assert!(!is_cascaded_third(0, 3, 12));
        assert!(is_cascaded_third(0, 9, 12));
    }

    #[test]
    fn block_classification_follows_ring_geometry() {
        let cm = build_network(NetworkSpec::new(12, 0.5, 0.5).unwrap()).unwrap();
        let kind = |i, j| block_of(&cm, i, j).unwrap().0;
        assert_eq!(kind(3, 3), BlockKind::A);
        assert_eq!(kind(0, 1), BlockKind::B);
        assert_eq!(kind(1, 2), BlockKind::Bprime);
        assert_eq!(kind(11, 0), BlockKind::Bprime);
        assert_eq!(kind(0, 2), BlockKind::C);
        assert_eq!(kind(1, 4), BlockKind::D);
        assert_eq!(kind(0, 3), BlockKind::Zero);
        assert_eq!(kind(1, 7), BlockKind::Zero);
    }

    #[test]
    fn every_antipodal_pair_wraps_to_a_cascade_on_the_hexapartite_ring() {
        for (i, j) in [(0, 3), (1, 4), (2, 5)] {
            assert!(is_cascaded_third(i, j, 6), "pair ({i},{j})");
        }
    }
}
