//! Property suite for the symplectic core: invariances that every
//! downstream entanglement quantity silently relies on.

use nalgebra::DMatrix;
use panet::network::{build_network, NetworkSpec};
use panet::symplectic::{tms_symplectic, CovarianceMatrix, SymplecticMatrix, TmsParams};
use proptest::prelude::*;

/// Single-mode phase rotation, the local Gaussian unitary used to probe
/// convention independence.
fn rotation(n_modes: usize, mode: usize, phi: f64) -> SymplecticMatrix {
    let mut m = DMatrix::identity(2 * n_modes, 2 * n_modes);
    m[(2 * mode, 2 * mode)] = phi.cos();
    m[(2 * mode, 2 * mode + 1)] = phi.sin();
    m[(2 * mode + 1, 2 * mode)] = -phi.sin();
    m[(2 * mode + 1, 2 * mode + 1)] = phi.cos();
    SymplecticMatrix::new(m).expect("rotations are symplectic")
}

/// Composition of a few squeezers and rotations, dense enough to scramble
/// every quadrature.
fn scrambled_symplectic(n_modes: usize, seeds: &[(usize, usize, f64, f64)]) -> SymplecticMatrix {
    let mut acc = SymplecticMatrix::identity(n_modes).unwrap();
    for &(a, b, s, phi) in seeds {
        let (a, b) = (a % n_modes, b % n_modes);
        if a != b {
            let step = tms_symplectic(TmsParams::new(a, b, s), n_modes).unwrap();
            acc = step.compose(&acc).unwrap();
        }
        acc = rotation(n_modes, a, phi).compose(&acc).unwrap();
    }
    acc
}

fn seed_strategy() -> impl Strategy<Value = Vec<(usize, usize, f64, f64)>> {
    proptest::collection::vec(
        (0_usize..8, 0_usize..8, -1.2_f64..1.2, 0.0_f64..6.3),
        1..4,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn tms_satisfies_the_symplectic_condition(
        s in -1.5_f64..1.5,
        theta in 0.0_f64..6.3,
        pair in (0_usize..6, 0_usize..6),
    ) {
        prop_assume!(pair.0 != pair.1);
        let params = TmsParams::new(pair.0, pair.1, s).with_theta(theta);
        prop_assert!(tms_symplectic(params, 6).is_ok());
    }

    #[test]
    fn symplectic_eigenvalues_are_congruence_invariant(
        s1 in 0.0_f64..1.0,
        s2 in 0.0_f64..1.0,
        seeds in seed_strategy(),
    ) {
        let cm = build_network(NetworkSpec::new(6, s1, s2).unwrap()).unwrap();
        let u = scrambled_symplectic(6, &seeds);
        let before = cm.symplectic_eigenvalues().unwrap();
        let after = cm.apply(&u).unwrap().symplectic_eigenvalues().unwrap();
        for (a, b) in before.iter().zip(&after) {
            prop_assert!((a - b).abs() < 1e-9 * a.max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn purity_and_physicality_survive_any_gaussian_unitary(
        occupations in proptest::collection::vec(1.0_f64..3.0, 4),
        seeds in seed_strategy(),
    ) {
        let pure = CovarianceMatrix::vacuum(4).unwrap();
        let u = scrambled_symplectic(4, &seeds);
        prop_assert!(pure.apply(&u).unwrap().is_pure(1e-10));

        let mixed = CovarianceMatrix::new(DMatrix::from_fn(8, 8, |r, c| {
            if r == c { occupations[r / 2] } else { 0.0 }
        }))
        .unwrap();
        prop_assert!(mixed.apply(&u).unwrap().is_physical(1e-10));
    }

    #[test]
    fn partial_transpose_is_involutive_on_network_states(
        s1 in 0.0_f64..1.2,
        s2 in 0.0_f64..1.2,
        mask in 1_u32..64,
    ) {
        let cm = build_network(NetworkSpec::new(6, s1, s2).unwrap()).unwrap();
        let modes: Vec<usize> = (0..6).filter(|&m| mask & (1 << m) != 0).collect();
        let twice = cm
            .partial_transpose(&modes)
            .unwrap()
            .partial_transpose(&modes)
            .unwrap();
        prop_assert_eq!(twice, cm);
    }

    #[test]
    fn local_rotations_leave_the_ppt_eigenvalue_alone(
        s1 in 0.1_f64..1.2,
        s2 in 0.1_f64..1.2,
        phis in proptest::collection::vec(0.0_f64..6.3, 6),
    ) {
        let cm = build_network(NetworkSpec::new(6, s1, s2).unwrap()).unwrap();
        let side = [0_usize, 2, 3];
        let reference = cm
            .partial_transpose(&side)
            .unwrap()
            .min_symplectic_eigenvalue()
            .unwrap();
        let mut rotated = cm;
        for (mode, &phi) in phis.iter().enumerate() {
            rotated = rotated.apply(&rotation(6, mode, phi)).unwrap();
        }
        let nu = rotated
            .partial_transpose(&side)
            .unwrap()
            .min_symplectic_eigenvalue()
            .unwrap();
        prop_assert!((nu - reference).abs() < 1e-9, "{nu} vs {reference}");
    }
}

#[test]
fn partial_transpose_commutes_with_restriction() {
    let cm = build_network(NetworkSpec::new(8, 0.6, 0.9).unwrap()).unwrap();
    let kept = panet::entropy::Subset::new(&[1, 2, 3, 6], 8).unwrap();
    let transpose_then_keep =
        panet::entropy::reduced_cm(&cm.partial_transpose(&[2, 6]).unwrap(), &kept).unwrap();
    let keep_then_transpose = panet::entropy::reduced_cm(&cm, &kept)
        .unwrap()
        .partial_transpose(&[1, 3])
        .unwrap();
    assert_eq!(transpose_then_keep, keep_then_transpose);
}
