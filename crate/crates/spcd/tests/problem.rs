use std::sync::Arc;

use spcd::mesh::{build_x_mesh, build_y_mesh, TensorMesh};
use spcd::problem::{by_name, example1, example2, example3, ProblemSpec};

fn assert_close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}

#[test]
fn example1_data() {
    let p = example1();
    assert_eq!((p.a)(0.0, 0.0), 2.0);
    for k in 0..=10 {
        let x = k as f64 / 10.0;
        assert_eq!((p.f)(x, 0.0), 0.0);
        assert_eq!((p.f)(x, 1.0), 0.0);
    }
    assert_close((p.f)(1.0, 0.5), 0.5, 1e-15);
    assert_eq!(p.alpha, 2.0);
}

#[test]
fn example2_data() {
    let p = example2();
    for k in 0..=10 {
        assert_eq!((p.f)(1.0, k as f64 / 10.0), 0.0);
    }
    // inflow-corner incompatibility: f does not vanish at (0,1)
    assert_eq!((p.f)(0.0, 1.0), 8.0);
    assert_eq!((p.a)(1.0, 1.0), 5.0);
}

#[test]
fn example3_data() {
    let p = example3();
    for k in 0..=10 {
        let y = k as f64 / 10.0;
        assert_close((p.f)(0.5, y), 2.0 * y * y, 1e-15);
    }
    // real cube-root branch: ((-1)(-1))^{2/3} = 1
    assert_eq!((p.f)(0.0, 0.0), 2.0);
    assert_eq!((p.a)(0.0, 0.0), 1.0);
    assert_eq!(p.alpha, 1.0);
}

#[test]
fn coefficient_minima_on_sample_grid() {
    for (p, want) in [(example1(), 2.0), (example2(), 2.0), (example3(), 1.0)] {
        let mut min = f64::INFINITY;
        let mut argmin = (0.0, 0.0);
        for i in 0..=64 {
            for j in 0..=64 {
                let (x, y) = (i as f64 / 64.0, j as f64 / 64.0);
                let v = (p.a)(x, y);
                if v < min {
                    min = v;
                    argmin = (x, y);
                }
            }
        }
        assert_close(min, want, 1e-12);
        assert_eq!(argmin, (0.0, 0.0));
    }
}

#[test]
fn example3_f_is_continuous_across_midlines() {
    let p = example3();
    let h = 1e-6;
    for k in 0..=20 {
        let t = k as f64 / 20.0;
        assert!(((p.f)(0.5 - h, t) - (p.f)(0.5 + h, t)).abs() < 1e-3);
        assert!(((p.f)(t, 0.5 - h) - (p.f)(t, 0.5 + h)).abs() < 1e-3);
    }
}

#[test]
fn construction_rejects_a_below_alpha() {
    let r = ProblemSpec::new(
        "bad",
        Arc::new(|_, _| 1.0),
        Arc::new(|_, _| 0.0),
        Arc::new(|_, _| 0.0),
        2.0,
    );
    assert!(r.is_err());
    assert!(ProblemSpec::new(
        "bad-alpha",
        Arc::new(|_, _| 1.0),
        Arc::new(|_, _| 0.0),
        Arc::new(|_, _| 0.0),
        0.0,
    )
    .is_err());
}

#[test]
fn by_name_lookup() {
    assert_eq!(by_name("example2").unwrap().label, "example2");
    assert!(by_name("example4").is_err());
}

fn uniform_mesh(n: usize) -> TensorMesh {
    TensorMesh::new(
        build_x_mesh(n, 0.5).unwrap(),
        build_y_mesh(n.max(4), 0.25).unwrap(),
    )
}

#[test]
fn avg_a_example1() {
    // uniform N=4 mesh: x_0 = 0, x_1 = 0.25
    let mesh = uniform_mesh(4);
    let p = example1();
    assert_close(p.avg_a(&mesh, 1, 0).unwrap(), (2.0 + 2.3125) / 2.0, 1e-15);
}

#[test]
fn avg_a_constant_and_symmetric() {
    let mesh = uniform_mesh(8);
    let c = ProblemSpec::new(
        "const",
        Arc::new(|_, _| 3.5),
        Arc::new(|_, _| 0.0),
        Arc::new(|_, _| 0.0),
        3.5,
    )
    .unwrap();
    for i in 1..=8 {
        for j in 0..=8 {
            assert_eq!(c.avg_a(&mesh, i, j).unwrap(), 3.5);
        }
    }
}

#[test]
fn avg_f_example2() {
    // uniform N=8 mesh: cell [0, 0.125] at y = 1
    let mesh = uniform_mesh(8);
    let p = example2();
    assert_close(p.avg_f(&mesh, 1, 8).unwrap(), 7.5, 1e-15);
}

#[test]
fn avg_f_zero_and_linear_midpoint() {
    let mesh = uniform_mesh(8);
    let z = ProblemSpec::new(
        "zero-f",
        Arc::new(|_, _| 1.0),
        Arc::new(|_, _| 0.0),
        Arc::new(|_, _| 0.0),
        1.0,
    )
    .unwrap();
    assert_eq!(z.avg_f(&mesh, 3, 2).unwrap(), 0.0);

    // f linear in x: the two-point mean is the midpoint value
    let lin = ProblemSpec::new(
        "linear-f",
        Arc::new(|_, _| 1.0),
        Arc::new(|x, y| 3.0 * x + y),
        Arc::new(|_, _| 0.0),
        1.0,
    )
    .unwrap();
    for i in 1..=8 {
        let mid = 0.5 * (mesh.x.nodes[i - 1] + mesh.x.nodes[i]);
        assert_close(lin.avg_f(&mesh, i, 4).unwrap(), 3.0 * mid + 0.5, 1e-15);
    }
}

#[test]
fn avg_rejects_out_of_range() {
    let mesh = uniform_mesh(8);
    let p = example1();
    assert!(p.avg_a(&mesh, 0, 0).is_err());
    assert!(p.avg_a(&mesh, 9, 0).is_err());
    assert!(p.avg_a(&mesh, 1, 9).is_err());
}
