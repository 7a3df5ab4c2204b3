//! PPT separability tests over all bipartitions of the ring.
//!
//! A Gaussian state is separable across a cut iff its partial transpose
//! across that cut is again a physical state. The witness is the smallest
//! symplectic eigenvalue `nu` of the transposed CM: `nu < 1` proves the cut
//! inseparable, and inseparability of every bipartition certifies genuine
//! multipartite entanglement.
//!
//! Bipartitions are enumerated canonically (the smaller side, ties broken
//! lexicographically), which realizes the divide-by-two rule for equal
//! halves: `n` modes give `2^(n-1) - 1` cuts. The ring's translation and
//! reflection symmetries collapse those cuts into a handful of classes with
//! identical `nu`; [`classify_partitions`] recovers the classes numerically
//! by sampling `nu` over a squeezing grid.

use serde::Serialize;

use crate::network::{build_network, NetworkSpec};
use crate::symplectic::CovarianceMatrix;
use crate::{Error, Result, ENUMERATION_GUARD, SEPARABILITY_TOL, TOL_EIGEN};

/// Canonical two-block split of the modes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bipartition {
    block: Vec<usize>,
    n_modes: usize,
    label: String,
    shape: (usize, usize),
}

impl Ord for Bipartition {
    /// Canonical report order: block size, then lexicographic block.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.block.len(), &self.block, self.n_modes)
            .cmp(&(other.block.len(), &other.block, other.n_modes))
    }
}

impl PartialOrd for Bipartition {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

fn mode_letter(mode: usize) -> char {
    (b'a' + mode as u8) as char
}

impl Bipartition {
    /// Canonicalizes a mode set against its complement: the stored block is
    /// the smaller side, ties resolved lexicographically.
    pub fn new(block: &[usize], n_modes: usize) -> Result<Self> {
        if n_modes < 2 {
            return Err(Error::BadModeCount(n_modes, 2));
        }
        if n_modes > ENUMERATION_GUARD {
            return Err(Error::GuardExceeded(n_modes, ENUMERATION_GUARD));
        }
        if block.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut seen = vec![false; n_modes];
        for &m in block {
            if m >= n_modes {
                return Err(Error::ModeOutOfRange(m, n_modes));
            }
            if seen[m] {
                return Err(Error::DuplicateMode(m));
            }
            seen[m] = true;
        }
        let side: Vec<usize> = (0..n_modes).filter(|&m| seen[m]).collect();
        let other: Vec<usize> = (0..n_modes).filter(|&m| !seen[m]).collect();
        if other.is_empty() {
            return Err(Error::BadShape(n_modes, 0));
        }
        let block = match side.len().cmp(&other.len()) {
            std::cmp::Ordering::Less => side,
            std::cmp::Ordering::Greater => other,
            std::cmp::Ordering::Equal => side.min(other),
        };
        let shape = (block.len(), n_modes - block.len());
        let label = Self::format_label(&block, n_modes);
        Ok(Self {
            block,
            n_modes,
            label,
            shape,
        })
    }

    fn format_label(block: &[usize], n_modes: usize) -> String {
        let mut label = String::with_capacity(n_modes + 1);
        for &m in block {
            label.push(mode_letter(m));
        }
        label.push('|');
        for m in (0..n_modes).filter(|m| !block.contains(m)) {
            label.push(mode_letter(m));
        }
        label
    }

    /// The canonical (smaller) side, sorted ascending.
    pub fn block(&self) -> &[usize] {
        &self.block
    }

    pub fn complement(&self) -> Vec<usize> {
        (0..self.n_modes)
            .filter(|m| !self.block.contains(m))
            .collect()
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Mode-letter label such as `"ab|cdef"`.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Block sizes `(k, n - k)` with `k <= n - k`.
    pub fn shape(&self) -> (usize, usize) {
        self.shape
    }
}

/// All canonical bipartitions of `n_modes` modes, sorted by block size and
/// then lexicographically. The count is `2^(n_modes - 1) - 1`.
pub fn enumerate_bipartitions(n_modes: usize) -> Result<Vec<Bipartition>> {
    if n_modes < 2 {
        return Err(Error::BadModeCount(n_modes, 2));
    }
    if n_modes > ENUMERATION_GUARD {
        return Err(Error::GuardExceeded(n_modes, ENUMERATION_GUARD));
    }
    let mut partitions = Vec::with_capacity((1_usize << (n_modes - 1)) - 1);
    for mask in 1_u32..(1 << n_modes) {
        let k = mask.count_ones() as usize;
        if 2 * k > n_modes || (2 * k == n_modes && mask & 1 == 0) {
            continue;
        }
        let block: Vec<usize> = (0..n_modes).filter(|&m| mask & (1 << m) != 0).collect();
        partitions.push(Bipartition::new(&block, n_modes)?);
    }
    partitions.sort();
    Ok(partitions)
}

/// PPT outcome for one bipartition.
#[derive(Debug, Clone, Serialize)]
pub struct PptResult {
    pub bipartition: Bipartition,
    /// Smallest symplectic eigenvalue of the partially transposed CM.
    pub nu: f64,
    /// True when `nu < 1 - SEPARABILITY_TOL`, witnessing entanglement.
    pub inseparable: bool,
}

fn transposed_min_nu(cm: &CovarianceMatrix, side: &[usize]) -> Result<f64> {
    cm.partial_transpose(side)?.min_symplectic_eigenvalue()
}

/// Evaluates the PPT criterion across one bipartition. Both sides are
/// transposed and must agree; the canonical side's value is reported.
pub fn ppt_nu(cm: &CovarianceMatrix, partition: &Bipartition) -> Result<PptResult> {
    if cm.n_modes() != partition.n_modes() {
        return Err(Error::DimensionMismatch(cm.n_modes(), partition.n_modes()));
    }
    let nu = transposed_min_nu(cm, partition.block())?;
    let from_complement = transposed_min_nu(cm, &partition.complement())?;
    if (nu - from_complement).abs() > 1e-10 * nu.max(1.0) {
        return Err(Error::PptSideMismatch(nu, from_complement));
    }
    Ok(PptResult {
        bipartition: partition.clone(),
        nu,
        inseparable: nu < 1.0 - SEPARABILITY_TOL,
    })
}

/// Closed form for the smallest PPT symplectic eigenvalue of any 1x3 cut of
/// the quadripartite network, transcribed and square-rooted (the printed
/// expression is `nu^2`).
pub fn closed_form_nu_1x3(s1: f64, s2: f64) -> f64 {
    let p = crate::network::ClosedFormParams::new(s1, s2);
    let (ap2, am2) = (p.alpha_plus * p.alpha_plus, p.alpha_minus * p.alpha_minus);
    let (bp2, bm2) = (p.beta_plus * p.beta_plus, p.beta_minus * p.beta_minus);
    let lead = am2 * (bp2 - bm2) + ap2 * (bm2 + bp2);
    let delta =
        lead - 2.0 * p.alpha_plus * p.beta_plus * (lead - ap2 * bp2).max(0.0).sqrt();
    delta.max(0.0).sqrt()
}

/// Bipartitions sharing one `nu` trace over a squeezing grid.
#[derive(Debug, Clone, Serialize)]
pub struct SymmetryClass {
    pub representative: Bipartition,
    pub members: Vec<Bipartition>,
    /// `nu` of the representative at each grid point, in grid order.
    pub nus: Vec<f64>,
}

impl SymmetryClass {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, partition: &Bipartition) -> bool {
        self.members.iter().any(|m| m == partition)
    }
}

/// Groups bipartitions into symmetry classes by sampling `nu` on the given
/// `(s1, s2)` grid; partitions agreeing within [`TOL_EIGEN`] at every point
/// share a class. Classes come out sorted by representative.
pub fn classify_partitions(
    base: NetworkSpec,
    grid: &[(f64, f64)],
    partitions: &[Bipartition],
) -> Result<Vec<SymmetryClass>> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let cms = grid
        .iter()
        .map(|&(s1, s2)| {
            build_network(NetworkSpec {
                s1,
                s2,
                ..base
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut classes: Vec<SymmetryClass> = Vec::new();
    for partition in partitions {
        let nus = cms
            .iter()
            .map(|cm| ppt_nu(cm, partition).map(|r| r.nu))
            .collect::<Result<Vec<f64>>>()?;
        let found = classes.iter_mut().find(|class| {
            class
                .nus
                .iter()
                .zip(&nus)
                .all(|(a, b)| (a - b).abs() <= TOL_EIGEN)
        });
        match found {
            Some(class) => class.members.push(partition.clone()),
            None => classes.push(SymmetryClass {
                representative: partition.clone(),
                members: vec![partition.clone()],
                nus,
            }),
        }
    }
    for class in &mut classes {
        class.members.sort();
    }
    classes.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(classes)
}

/// Full PPT sweep of one state with the genuine-multipartite-entanglement
/// verdict.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub n_modes: usize,
    /// Per-bipartition outcomes in canonical order.
    pub results: Vec<PptResult>,
    /// True iff every bipartition is inseparable at the report's tolerance.
    pub gme: bool,
    pub tol: f64,
    pub min_nu: f64,
    pub max_nu: f64,
    /// The cut closest to separability; it alone decides the verdict.
    pub witness: Bipartition,
}

/// Tests every bipartition of the state and issues the GME verdict: genuine
/// multipartite entanglement requires `nu < 1 - tol` across the board.
pub fn gme_verdict(cm: &CovarianceMatrix, tol: f64) -> Result<AnalysisReport> {
    let partitions = enumerate_bipartitions(cm.n_modes())?;
    let results = partitions
        .iter()
        .map(|p| ppt_nu(cm, p))
        .collect::<Result<Vec<_>>>()?;
    let (mut min_nu, mut max_nu, mut witness) = (f64::INFINITY, f64::NEG_INFINITY, 0);
    for (idx, r) in results.iter().enumerate() {
        min_nu = min_nu.min(r.nu);
        if r.nu > max_nu {
            max_nu = r.nu;
            witness = idx;
        }
    }
    Ok(AnalysisReport {
        n_modes: cm.n_modes(),
        gme: max_nu < 1.0 - tol,
        tol,
        min_nu,
        max_nu,
        witness: results[witness].bipartition.clone(),
        results,
    })
}
