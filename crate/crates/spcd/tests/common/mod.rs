//! Shared test oracles: a literal step-by-step transcription of the fitted
//! operator (independent of the closed-form stencil in the library), a
//! dense-sampling sup-norm, and the manufactured-solution setup.

#![allow(dead_code)]

use std::sync::Arc;

use spcd::linsolve;
use spcd::mesh::TensorMesh;
use spcd::problem::{Field, ProblemSpec};
use spcd::scheme::{assemble_fitted, sigma, StencilRow};
use spcd::solution::GridFunction;

/// Literal fitted row at interior (i, j), composing the divided differences
/// step by step:
///
///   L^N U = (1/h̄_i) [ -ε h_{i+1} D⁺_x( σ(-ρ_{·,j}) D⁻_x U )
///                      - ε Q^C δ²_y U + ā_i h_i D⁻_x U ]
///
/// with Q⁻ = h_i (σ(ρ_i)-1)/ρ_i, Q⁺ = h_{i+1} (1-σ(-ρ_{i+1}))/ρ_{i+1},
/// Q^C = Q⁻ + Q⁺, and the rhs quadrature (Q⁻ f̄_i + Q⁺ f̄_{i+1})/h̄_i.
/// Coefficients are extracted by applying the operator to indicator vectors.
pub fn literal_fitted_row(
    p: &ProblemSpec,
    mesh: &TensorMesh,
    eps: f64,
    i: usize,
    j: usize,
) -> StencilRow {
    let hi = mesh.x.steps[i - 1];
    let hip = mesh.x.steps[i];
    let hbar = mesh.hbar(i);
    let kj = mesh.y.steps[j - 1];
    let kjp = mesh.y.steps[j];
    let kbar = mesh.kbar(j);
    let abar_i = p.avg_a(mesh, i, j).unwrap();
    let abar_ip = p.avg_a(mesh, i + 1, j).unwrap();
    let rho_i = abar_i * hi / eps;
    let rho_ip = abar_ip * hip / eps;
    let qm = hi * (sigma(rho_i).unwrap() - 1.0) / rho_i;
    let qp = hip * (1.0 - sigma(-rho_ip).unwrap()) / rho_ip;
    let qc = qm + qp;

    // U is a 3x3 patch centered at (i, j): u[di+1][dj+1] = U_{i+di, j+dj}.
    let apply = |u: [[f64; 3]; 3]| -> f64 {
        let uc = u[1][1];
        let uw = u[0][1];
        let ue = u[2][1];
        let us = u[1][0];
        let un = u[1][2];
        let dm_at_i = (uc - uw) / hi;
        let dm_at_ip = (ue - uc) / hip;
        let dplus = (sigma(-rho_ip).unwrap() * dm_at_ip - sigma(-rho_i).unwrap() * dm_at_i) / hip;
        let d2y = ((un - uc) / kjp - (uc - us) / kj) / kbar;
        (-eps * hip * dplus - eps * qc * d2y + abar_i * hi * dm_at_i) / hbar
    };
    let indicator = |di: usize, dj: usize| -> [[f64; 3]; 3] {
        let mut u = [[0.0; 3]; 3];
        u[di][dj] = 1.0;
        u
    };

    StencilRow {
        cw: apply(indicator(0, 1)),
        ce: apply(indicator(2, 1)),
        cs: apply(indicator(1, 0)),
        cn: apply(indicator(1, 2)),
        cc: apply(indicator(1, 1)),
        rhs: (qm * p.avg_f(mesh, i, j).unwrap() + qp * p.avg_f(mesh, i + 1, j).unwrap()) / hbar,
    }
}

/// Max |Ā - B̄| over a uniform (samples+1)² grid.
pub fn dense_sup(a: &GridFunction, b: &GridFunction, samples: usize) -> f64 {
    let pts: Vec<f64> = (0..=samples).map(|k| k as f64 / samples as f64).collect();
    let sa = a.sample(&pts, &pts);
    let sb = b.sample(&pts, &pts);
    sa.iter()
        .zip(&sb)
        .map(|(u, v)| (u - v).abs())
        .fold(0.0, f64::max)
}

/// ε = 1, a from example 1, u* = sin(πx) sin(πy), f = -εΔu* + a u*_x.
/// Returns the problem and the exact solution.
pub fn manufactured() -> (ProblemSpec, Field) {
    use std::f64::consts::PI;
    let a: Field = Arc::new(|x, y| 2.0 + x + x * x + y * y);
    let ustar: Field = Arc::new(|x: f64, y: f64| (PI * x).sin() * (PI * y).sin());
    let a2 = a.clone();
    let f: Field = Arc::new(move |x: f64, y: f64| {
        2.0 * PI * PI * (PI * x).sin() * (PI * y).sin()
            + a2(x, y) * PI * (PI * x).cos() * (PI * y).sin()
    });
    let p = ProblemSpec::new("manufactured", a, f, Arc::new(|_, _| 0.0), 2.0).unwrap();
    (p, ustar)
}

/// Max nodal error of the fitted scheme on the manufactured problem at ε = 1.
pub fn manufactured_error(n: usize) -> f64 {
    let (p, ustar) = manufactured();
    let mesh = TensorMesh::shishkin(1.0, p.alpha, n, n).unwrap();
    let sys = assemble_fitted(&p, &mesh, 1.0).unwrap();
    let (u, _) = linsolve::solve(&sys, linsolve::DEFAULT_TOL).unwrap();
    let mut err: f64 = 0.0;
    for j in 0..=n {
        for i in 0..=n {
            let exact = ustar(mesh.x.nodes[i], mesh.y.nodes[j]);
            err = err.max((u.value(i, j) - exact).abs());
        }
    }
    err
}

/// Deterministic random problem/mesh instances for the equivalence oracle.
pub struct RandomInstance {
    pub problem: ProblemSpec,
    pub mesh: TensorMesh,
    pub eps: f64,
}

pub fn random_instances(count: usize, seed: u64) -> Vec<RandomInstance> {
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = *[4usize, 8, 16].get(rng.gen_range(0..3)).unwrap();
            let m = *[4usize, 8, 16].get(rng.gen_range(0..3)).unwrap();
            let tau_x: f64 = rng.gen_range(0.05..=0.5);
            let tau_y: f64 = rng.gen_range(0.05..=0.25);
            // eps kept small enough that rho stays O(0.1) or larger, so the
            // literal (sigma(rho)-1)/rho quotient has no catastrophic
            // cancellation to spoil a 1e-12 comparison.
            let eps = 10f64.powf(rng.gen_range(-4.0..=-2.0));
            let (c0, c1, c2) = (
                rng.gen_range(0.5..=2.0),
                rng.gen_range(0.0..=1.0),
                rng.gen_range(0.0..=1.0),
            );
            let (f0, f1) = (rng.gen_range(-2.0..=2.0), rng.gen_range(-2.0..=2.0));
            let a: Field = Arc::new(move |x, y| c0 + c1 * x + c2 * y * y);
            let f: Field = Arc::new(move |x: f64, y: f64| f0 + f1 * x * y);
            let problem =
                ProblemSpec::new("random", a, f, Arc::new(|_, _| 0.0), c0).unwrap();
            let mesh = TensorMesh::new(
                spcd::mesh::build_x_mesh(n, tau_x).unwrap(),
                spcd::mesh::build_y_mesh(m, tau_y).unwrap(),
            );
            RandomInstance { problem, mesh, eps }
        })
        .collect()
}
