//! Piecewise-uniform Shishkin meshes on [0,1] and their tensor product.
//!
//! The x-axis mesh resolves the regular outflow layer at x=1 (two uniform
//! regions split at 1-τ_x); the y-axis mesh resolves the characteristic
//! layers at y=0 and y=1 (three regions in the ratio 1:2:1).

use crate::error::{Error, Result};

/// Tolerance below which two node coordinates are considered identical when
/// overlaying meshes. Well above round-off for [0,1] coordinates, well below
/// any mesh step in use.
pub const OVERLAY_MERGE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshKind {
    /// Two regions, fine near x=1 (x-axis layer mesh).
    BoundaryLayerRight,
    /// Three regions 1:2:1, fine near y=0 and y=1 (y-axis layer mesh).
    BoundaryLayersBoth,
    Uniform,
}

/// A 1D mesh: `nodes[0] = 0`, `nodes[n] = 1`, strictly increasing,
/// `steps[i] = nodes[i+1] - nodes[i]`.
#[derive(Debug, Clone)]
pub struct Mesh1D {
    pub nodes: Vec<f64>,
    pub steps: Vec<f64>,
    /// The transition parameter τ used to build this mesh.
    pub transition: f64,
    pub kind: MeshKind,
}

impl Mesh1D {
    /// Number of cells.
    pub fn n(&self) -> usize {
        self.steps.len()
    }
}

/// τ_x = min{1/2, 2(ε/α) ln N}.
pub fn transition_x(eps: f64, alpha: f64, n: usize) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be > 0, got {eps}")));
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "alpha must be > 0, got {alpha}"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!("N must be >= 2, got {n}")));
    }
    Ok(0.5f64.min(2.0 * (eps / alpha) * (n as f64).ln()))
}

/// τ_y = min{1/4, 2 √ε ln M}.
pub fn transition_y(eps: f64, m: usize) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be > 0, got {eps}")));
    }
    if m < 4 {
        return Err(Error::InvalidArgument(format!("M must be >= 4, got {m}")));
    }
    Ok(0.25f64.min(2.0 * eps.sqrt() * (m as f64).ln()))
}

/// N/2 uniform cells on [0, 1-τ], N/2 uniform cells on [1-τ, 1].
///
/// The transition node x_{N/2} = 1-τ and the endpoints are placed exactly;
/// interior nodes are computed per region so each region is exactly uniform.
pub fn build_x_mesh(n: usize, tau: f64) -> Result<Mesh1D> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "N must be even and >= 2, got {n}"
        )));
    }
    if !(tau > 0.0 && tau <= 0.5) {
        return Err(Error::InvalidArgument(format!(
            "tau_x must lie in (0, 0.5], got {tau}"
        )));
    }
    let half = n / 2;
    let mut nodes = Vec::with_capacity(n + 1);
    for i in 0..=half {
        nodes.push((1.0 - tau) * i as f64 / half as f64);
    }
    for i in half + 1..=n {
        nodes.push(1.0 - tau * (n - i) as f64 / half as f64);
    }
    let kind = if tau == 0.5 {
        MeshKind::Uniform
    } else {
        MeshKind::BoundaryLayerRight
    };
    Ok(finish_mesh(nodes, tau, kind))
}

/// M/4 uniform cells on [0, τ], M/2 on [τ, 1-τ], M/4 on [1-τ, 1].
pub fn build_y_mesh(m: usize, tau: f64) -> Result<Mesh1D> {
    if m < 4 || m % 4 != 0 {
        return Err(Error::InvalidArgument(format!(
            "M must be divisible by 4 and >= 4, got {m}"
        )));
    }
    if !(tau > 0.0 && tau <= 0.25) {
        return Err(Error::InvalidArgument(format!(
            "tau_y must lie in (0, 0.25], got {tau}"
        )));
    }
    let q = m / 4;
    let mut nodes = Vec::with_capacity(m + 1);
    for j in 0..=q {
        nodes.push(tau * j as f64 / q as f64);
    }
    for j in q + 1..3 * q {
        nodes.push(tau + (1.0 - 2.0 * tau) * (j - q) as f64 / (2 * q) as f64);
    }
    for j in 3 * q..=m {
        nodes.push(1.0 - tau * (m - j) as f64 / q as f64);
    }
    let kind = if tau == 0.25 {
        MeshKind::Uniform
    } else {
        MeshKind::BoundaryLayersBoth
    };
    Ok(finish_mesh(nodes, tau, kind))
}

fn finish_mesh(nodes: Vec<f64>, tau: f64, kind: MeshKind) -> Mesh1D {
    let steps = nodes.windows(2).map(|w| w[1] - w[0]).collect();
    Mesh1D {
        nodes,
        steps,
        transition: tau,
        kind,
    }
}

/// Sorted union of the node sets of two meshes, merging duplicates within
/// [`OVERLAY_MERGE_TOL`]. Supports the exact two-mesh sup-norm.
pub fn overlay(a: &Mesh1D, b: &Mesh1D) -> Vec<f64> {
    overlay_nodes(&a.nodes, &b.nodes)
}

pub(crate) fn overlay_nodes(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut ia, mut ib) = (0, 0);
    while ia < a.len() || ib < b.len() {
        let next = match (a.get(ia), b.get(ib)) {
            (Some(&x), Some(&y)) => {
                if x <= y {
                    ia += 1;
                    x
                } else {
                    ib += 1;
                    y
                }
            }
            (Some(&x), None) => {
                ia += 1;
                x
            }
            (None, Some(&y)) => {
                ib += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        match out.last() {
            Some(&last) if next - last <= OVERLAY_MERGE_TOL => {}
            _ => out.push(next),
        }
    }
    out
}

/// Tensor product of an x-mesh (N cells) and a y-mesh (M cells), with the
/// averaged steps h̄_i = (h_i + h_{i+1})/2 and k̄_j = (k_j + k_{j+1})/2
/// precomputed for interior indices.
#[derive(Debug, Clone)]
pub struct TensorMesh {
    pub x: Mesh1D,
    pub y: Mesh1D,
    hbar: Vec<f64>,
    kbar: Vec<f64>,
}

impl TensorMesh {
    pub fn new(x: Mesh1D, y: Mesh1D) -> Self {
        let hbar = x.steps.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        let kbar = y.steps.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        TensorMesh { x, y, hbar, kbar }
    }

    /// Shishkin mesh for the given ε, convection bound α and cell counts.
    pub fn shishkin(eps: f64, alpha: f64, n: usize, m: usize) -> Result<Self> {
        let tx = transition_x(eps, alpha, n)?;
        let ty = transition_y(eps, m)?;
        Ok(TensorMesh::new(build_x_mesh(n, tx)?, build_y_mesh(m, ty)?))
    }

    pub fn nx(&self) -> usize {
        self.x.n()
    }

    pub fn ny(&self) -> usize {
        self.y.n()
    }

    /// h̄_i for interior i ∈ 1..N.
    pub fn hbar(&self, i: usize) -> f64 {
        self.hbar[i - 1]
    }

    /// k̄_j for interior j ∈ 1..M.
    pub fn kbar(&self, j: usize) -> f64 {
        self.kbar[j - 1]
    }

    /// True if both meshes have identical nodes (used to detect mismatched
    /// grid functions).
    pub fn same_nodes(&self, other: &TensorMesh) -> bool {
        self.x.nodes == other.x.nodes && self.y.nodes == other.y.nodes
    }
}
