//! Property-based invariants for the mesh builders, fitting factors, and
//! interpolation.

use proptest::prelude::*;

use spcd::mesh::{build_x_mesh, build_y_mesh, overlay, transition_x, transition_y, TensorMesh};
use spcd::scheme::{qminus_ratio, qplus_ratio, sigma};
use spcd::solution::GridFunction;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sigma_positive_and_identity(x in -700.0f64..700.0) {
        let s = sigma(x).unwrap();
        prop_assert!(s > 0.0);
        let diff = sigma(x).unwrap() - sigma(-x).unwrap();
        prop_assert!((diff - x).abs() <= 1e-12 * x.abs().max(1.0));
    }

    #[test]
    fn q_ratios_partition_unity(log_rho in -10.0f64..3.0) {
        let rho = 10f64.powf(log_rho);
        let qm = qminus_ratio(rho).unwrap();
        let qp = qplus_ratio(rho).unwrap();
        prop_assert!((qm + qp - 1.0).abs() <= 1e-13);
        prop_assert!(qm >= 0.5 - 1e-13 && qm <= 1.0);
    }

    #[test]
    fn x_mesh_invariants(exp in -20i32..0, k in 2u32..8) {
        let n = 1usize << k;
        let eps = 2f64.powi(exp);
        let tau = transition_x(eps, 2.0, n).unwrap();
        let m = build_x_mesh(n, tau).unwrap();
        prop_assert_eq!(m.n(), n);
        prop_assert!(m.nodes.windows(2).all(|w| w[1] > w[0]));
        prop_assert!((m.steps.iter().sum::<f64>() - 1.0).abs() <= 1e-14);
        prop_assert!((m.nodes[n / 2] - (1.0 - tau)).abs() <= 1e-14);
        prop_assert!(m.steps.windows(2).all(|w| w[0] >= w[1] - 1e-15));
    }

    #[test]
    fn y_mesh_invariants(exp in -20i32..0, k in 2u32..8) {
        let mm = 1usize << k;
        let eps = 2f64.powi(exp);
        let tau = transition_y(eps, mm).unwrap();
        let m = build_y_mesh(mm, tau).unwrap();
        prop_assert!((m.nodes[mm / 4] - tau).abs() <= 1e-15);
        prop_assert!((m.nodes[3 * mm / 4] - (1.0 - tau)).abs() <= 1e-15);
    }

    #[test]
    fn overlay_is_sorted_superset(ta in 0.02f64..0.5, tb in 0.02f64..0.5) {
        let a = build_x_mesh(8, ta).unwrap();
        let b = build_x_mesh(16, tb).unwrap();
        let o = overlay(&a, &b);
        prop_assert!(o.windows(2).all(|w| w[1] > w[0]));
        for &x in &a.nodes {
            prop_assert!(o.iter().any(|&y| (x - y).abs() <= 1e-14));
        }
        prop_assert!(o.len() <= a.nodes.len() + b.nodes.len());
    }

    #[test]
    fn eval_stays_within_nodal_bounds(seed in 0u64..1000, x in 0.0f64..=1.0, y in 0.0f64..=1.0) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let mesh = TensorMesh::shishkin(2f64.powi(-8), 2.0, 8, 8).unwrap();
        let vals: Vec<f64> = (0..81).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let g = GridFunction::new(mesh, vals).unwrap();
        let v = g.eval(x, y).unwrap();
        prop_assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
    }
}
