//! Problem instances -εΔu + a(x,y) u_x = f on (0,1)², u = g on the boundary,
//! with a(x,y) ≥ α > 0, plus the three benchmark problems and the
//! piecewise-constant cell averages ā, f̄ used by the fitted scheme.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mesh::TensorMesh;

/// A pure scalar field on [0,1]².
pub type Field = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct ProblemSpec {
    pub a: Field,
    pub f: Field,
    /// Boundary data; all benchmark problems use g ≡ 0, nonzero g supports
    /// manufactured-solution diagnostics.
    pub g: Field,
    /// Lower bound on the convection coefficient, a(x,y) ≥ alpha > 0.
    pub alpha: f64,
    pub label: String,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        fm.debug_struct("ProblemSpec")
            .field("label", &self.label)
            .field("alpha", &self.alpha)
            .finish_non_exhaustive()
    }
}

impl ProblemSpec {
    /// Builds a problem, spot-checking a ≥ alpha on a 33×33 grid.
    pub fn new(label: &str, a: Field, f: Field, g: Field, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "alpha must be > 0, got {alpha}"
            )));
        }
        for i in 0..=32 {
            for j in 0..=32 {
                let (x, y) = (i as f64 / 32.0, j as f64 / 32.0);
                let v = a(x, y);
                if !(v >= alpha) {
                    return Err(Error::InvalidArgument(format!(
                        "a({x},{y}) = {v} falls below alpha = {alpha}"
                    )));
                }
            }
        }
        Ok(ProblemSpec {
            a,
            f,
            g,
            alpha,
            label: label.to_string(),
        })
    }

    /// ā_i(y_j) = (a(x_{i-1}, y_j) + a(x_i, y_j)) / 2 on cell i ∈ 1..=N,
    /// at any node height j ∈ 0..=M.
    pub fn avg_a(&self, mesh: &TensorMesh, i: usize, j: usize) -> Result<f64> {
        self.cell_avg(&self.a, mesh, i, j)
    }

    /// f̄_i(y_j), defined analogously.
    pub fn avg_f(&self, mesh: &TensorMesh, i: usize, j: usize) -> Result<f64> {
        self.cell_avg(&self.f, mesh, i, j)
    }

    fn cell_avg(&self, field: &Field, mesh: &TensorMesh, i: usize, j: usize) -> Result<f64> {
        if i < 1 || i > mesh.nx() || j > mesh.ny() {
            return Err(Error::IndexOutOfRange(format!(
                "cell average index (i={i}, j={j}) outside 1..={} x 0..={}",
                mesh.nx(),
                mesh.ny()
            )));
        }
        let y = mesh.y.nodes[j];
        Ok(0.5 * (field(mesh.x.nodes[i - 1], y) + field(mesh.x.nodes[i], y)))
    }
}

fn zero_field() -> Field {
    Arc::new(|_, _| 0.0)
}

/// a = 2 + x + x² + y², f = 2(2 - x³) y (1 - y), g ≡ 0, α = 2.
pub fn example1() -> ProblemSpec {
    ProblemSpec::new(
        "example1",
        Arc::new(|x, y| 2.0 + x + x * x + y * y),
        Arc::new(|x: f64, y: f64| 2.0 * (2.0 - x.powi(3)) * y * (1.0 - y)),
        zero_field(),
        2.0,
    )
    .expect("example1 data is valid")
}

/// a = 2 + x + x² + y², f = 8(1 - x) y, g ≡ 0, α = 2.
/// f(0,1) = 8 ≠ 0: the data are incompatible at the inflow corner.
pub fn example2() -> ProblemSpec {
    ProblemSpec::new(
        "example2",
        Arc::new(|x, y| 2.0 + x + x * x + y * y),
        Arc::new(|x: f64, y: f64| 8.0 * (1.0 - x) * y),
        zero_field(),
        2.0,
    )
    .expect("example2 data is valid")
}

/// a = 1 + x + x² + y², f = 2((2x-1)(2y-1))^{2/3} + 4xy², g ≡ 0, α = 1.
///
/// The fractional power uses the real cube-root branch, (∛t)², so f is real
/// and continuous for negative arguments.
pub fn example3() -> ProblemSpec {
    ProblemSpec::new(
        "example3",
        Arc::new(|x, y| 1.0 + x + x * x + y * y),
        Arc::new(|x: f64, y: f64| {
            let t = (2.0 * x - 1.0) * (2.0 * y - 1.0);
            2.0 * t.cbrt().powi(2) + 4.0 * x * y * y
        }),
        zero_field(),
        1.0,
    )
    .expect("example3 data is valid")
}

/// Look up a benchmark problem by CLI name.
pub fn by_name(name: &str) -> Result<ProblemSpec> {
    match name {
        "example1" => Ok(example1()),
        "example2" => Ok(example2()),
        "example3" => Ok(example3()),
        _ => Err(Error::InvalidArgument(format!(
            "unknown problem {name:?}; expected example1|example2|example3"
        ))),
    }
}
