use movingwell::frames::{
    appell_apply, appell_inverse, comoving_forward, comoving_inverse, expansion_apply, expansion_compose, well_grid,
    TauMap,
};
use movingwell::{ComplexField, Frame, PhysicalParams, WallTrajectory};
use num_complex::Complex64;
use proptest::prelude::*;

fn nat() -> PhysicalParams {
    PhysicalParams::natural()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn comoving_round_trip(w0 in 0.5f64..3.0, v1 in -0.5f64..0.5, v2 in -0.2f64..1.5, t in 0.0f64..0.3) {
        let traj = WallTrajectory::linear(w0, v1, v2).unwrap();
        prop_assume!(traj.width(t).map(|w| w > 0.1).unwrap_or(false));
        let grid = well_grid(&traj, t, 257).unwrap();
        let psi = ComplexField::from_fn(grid, Frame::LabX, |x| {
            let y = (x - grid.lo()) / (grid.hi() - grid.lo());
            Complex64::new((std::f64::consts::PI * y).sin(), y * (1.0 - y))
        });
        let back = comoving_inverse(&comoving_forward(&psi, &traj, t, &nat()).unwrap(), &traj, t, &nat()).unwrap();
        prop_assert!(back.max_abs_diff(&psi).unwrap() < 1e-12);
    }

    #[test]
    fn expansion_is_additive(a1 in -1.0f64..1.0, a2 in -1.0f64..1.0, x in -2.0f64..2.0, t in 0.0f64..0.4) {
        let (x1, t1) = expansion_apply(a1, x, t).unwrap();
        let (x2, t2) = expansion_apply(a2, x1, t1).unwrap();
        let (x3, t3) = expansion_apply(expansion_compose(a1, a2), x, t).unwrap();
        prop_assert!((x2 - x3).abs() < 1e-12 * (1.0 + x3.abs()));
        prop_assert!((t2 - t3).abs() < 1e-12 * (1.0 + t3.abs()));
    }

    #[test]
    fn appell_inverts(x in -3.0f64..3.0, t in 0.1f64..5.0) {
        let (xa, ta) = appell_apply(x, t).unwrap();
        let (xb, tb) = appell_inverse(xa, ta).unwrap();
        prop_assert!((xb - x).abs() < 1e-12 * (1.0 + x.abs()));
        prop_assert!((tb - t).abs() < 1e-12 * t);
    }

    #[test]
    fn tau_round_trip(w0 in 0.5f64..2.0, n in prop_oneof![Just(-1.0), Just(0.25), Just(0.5), Just(2.0)], t in 0.01f64..50.0) {
        let map = TauMap::new(WallTrajectory::monomial(w0, 1.0, n).unwrap(), nat());
        let back = map.t_of_tau(map.tau_of_t(t).unwrap()).unwrap();
        prop_assert!((back - t).abs() < 1e-10 * t);
    }
}

#[test]
fn sinusoidal_tau_is_monotone() {
    let map = TauMap::new(WallTrajectory::sinusoidal(1.0, 0.3, 2.0).unwrap(), nat());
    let mut prev = 0.0;
    for i in 1..200 {
        let tp = map.tau_prime_of_t(i as f64 * 0.05).unwrap();
        assert!(tp > prev);
        prev = tp;
    }
}
