use movingwell::frames::{comoving_inverse, TauMap};
use movingwell::grid::{fidelity, l2_norm};
use movingwell::revival::{revival_schedule, revive_phi, revive_psi};
use movingwell::solver::{evolve_lab, gaussian_packet};
use movingwell::{Error, Frame, PhysicalParams, RevivalSpec, SolverConfig, SpatialGrid, WallTrajectory};
use proptest::prelude::*;

fn nat() -> PhysicalParams {
    PhysicalParams::natural()
}

#[test]
fn lab_revival_matches_solver_in_expanding_well() {
    let traj = WallTrajectory::linear(1.0, -0.2, 0.6).unwrap();
    let unit = SpatialGrid::unit(1024).unwrap();
    let phi0 = gaussian_packet(0.3, 0.04, 0.0, &unit, Frame::ComovingY, &nat()).unwrap();
    let psi0 = comoving_inverse(&phi0, &traj, 0.0, &nat()).unwrap();
    let cfg = SolverConfig::new(1024, 8192).unwrap();
    for (p, q) in [(1, 3), (1, 2), (2, 3)] {
        let (predicted, t_rev) = revive_psi(&psi0, &traj, RevivalSpec::new(p, q).unwrap(), &nat()).unwrap();
        let numeric = evolve_lab(&psi0, &traj, &[t_rev], &cfg, &nat()).unwrap().remove(0);
        let f = fidelity(&predicted, &numeric).unwrap();
        assert!(f >= 0.999, "{p}/{q}: fidelity {f}");
    }
}

#[test]
fn schedule_times_follow_tau_map() {
    let traj = WallTrajectory::linear(1.0, 0.0, 0.5).unwrap();
    let map = TauMap::new(traj.clone(), nat());
    let rows = revival_schedule(&traj, 6, 10.0, &nat()).unwrap();
    assert!(!rows.is_empty());
    for pair in rows.windows(2) {
        assert!(pair[0].1 <= pair[1].1);
    }
    for (spec, t) in &rows {
        assert!(*t <= 10.0);
        let tp = map.tau_prime_of_t(*t).unwrap();
        assert!((tp - spec.tau_prime()).abs() < 1e-10);
    }
    // sup tau' = pi / (2 * 0.5) = pi, and the horizon at t = 10 is 5 pi / 6
    let horizon = map.tau_prime_of_t(10.0).unwrap();
    assert!(rows.iter().all(|(s, _)| s.tau_prime() <= horizon + 1e-12));
}

#[test]
fn fast_expanding_well_never_reaches_full_revival() {
    // sup tau' = pi / 4 < 1
    let traj = WallTrajectory::linear(1.0, 0.0, 2.0).unwrap();
    let lab = SpatialGrid::unit(256).unwrap();
    let psi0 = gaussian_packet(0.5, 0.05, 0.0, &lab, Frame::LabX, &nat()).unwrap();
    let err = revive_psi(&psi0, &traj, RevivalSpec::new(1, 1).unwrap(), &nat()).unwrap_err();
    assert!(matches!(err, Error::UnreachableTau { .. }));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn revival_preserves_norm(center in 0.25f64..0.75, width in 0.03f64..0.06, p in 1u64..12, q in 1u64..9) {
        prop_assume!(num_integer::gcd(p, q) == 1);
        let grid = SpatialGrid::unit(1681).unwrap();
        let phi0 = gaussian_packet(center, width, 0.0, &grid, Frame::ComovingY, &nat()).unwrap();
        let phi = revive_phi(&phi0, RevivalSpec::new(p, q).unwrap()).unwrap();
        prop_assert!((l2_norm(&phi) - l2_norm(&phi0)).abs() < 1e-8);
    }

    #[test]
    fn coefficient_weights_sum_to_one(p in 1u64..40, q in 1u64..40) {
        prop_assume!(num_integer::gcd(p, q) == 1);
        let spec = RevivalSpec::new(p, q).unwrap();
        let total: f64 = spec.coefficients().iter().map(|c| c.value.norm_sqr()).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }
}
