//! Nodal grid functions, bilinear interpolation, the exact sup-norm of
//! interpolant differences, and CSV export of grids and slices.

use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::mesh::{overlay_nodes, TensorMesh};

/// Nodal values U_{i,j} at (x_i, y_j), stored y-major:
/// `values[j * (N+1) + i]`. Evaluation between nodes is bilinear.
#[derive(Debug, Clone)]
pub struct GridFunction {
    pub mesh: TensorMesh,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(mesh: TensorMesh, values: Vec<f64>) -> Result<Self> {
        let expect = (mesh.nx() + 1) * (mesh.ny() + 1);
        if values.len() != expect {
            return Err(Error::MeshMismatch(format!(
                "grid function has {} values, mesh wants {expect}",
                values.len()
            )));
        }
        Ok(GridFunction { mesh, values })
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * (self.mesh.nx() + 1) + i]
    }

    /// Bilinear interpolation at (x, y) ∈ [0,1]².
    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y) {
            return Err(Error::InvalidArgument(format!(
                "eval point ({x}, {y}) outside [0,1]^2"
            )));
        }
        let (ix, tx) = locate(&self.mesh.x.nodes, x);
        let (iy, ty) = locate(&self.mesh.y.nodes, y);
        Ok(self.bilerp(ix, iy, tx, ty))
    }

    fn bilerp(&self, ix: usize, iy: usize, tx: f64, ty: f64) -> f64 {
        let v00 = self.value(ix, iy);
        let v10 = self.value(ix + 1, iy);
        let v01 = self.value(ix, iy + 1);
        let v11 = self.value(ix + 1, iy + 1);
        (1.0 - ty) * ((1.0 - tx) * v00 + tx * v10) + ty * ((1.0 - tx) * v01 + tx * v11)
    }

    /// Samples the interpolant on a tensor grid xs × ys (y-major output).
    /// Coordinates must lie in [0,1]; used by [`sup_diff`] and slice export.
    pub fn sample(&self, xs: &[f64], ys: &[f64]) -> Vec<f64> {
        let xloc: Vec<(usize, f64)> = xs.iter().map(|&x| locate(&self.mesh.x.nodes, x)).collect();
        let yloc: Vec<(usize, f64)> = ys.iter().map(|&y| locate(&self.mesh.y.nodes, y)).collect();
        let mut out = Vec::with_capacity(xs.len() * ys.len());
        for &(iy, ty) in &yloc {
            for &(ix, tx) in &xloc {
                out.push(self.bilerp(ix, iy, tx, ty));
            }
        }
        out
    }
}

/// Cell index and local coordinate for c within `nodes` (clamped to [0,1]).
fn locate(nodes: &[f64], c: f64) -> (usize, f64) {
    // partition_point gives the count of nodes <= c; the containing cell
    // starts one node earlier, clamped so c = 1 lands in the last cell.
    let k = nodes.partition_point(|&v| v <= c).clamp(1, nodes.len() - 1);
    let i = k - 1;
    let t = ((c - nodes[i]) / (nodes[i + 1] - nodes[i])).clamp(0.0, 1.0);
    (i, t)
}

/// Exact sup-norm ‖Ā - B̄‖_∞ of the difference of two bilinear interpolants.
///
/// On every cell of the overlay tensor grid the difference is bilinear, and a
/// bilinear function on a rectangle attains its extrema at the corners, so the
/// exact sup equals the max of |Ā - B̄| over all overlay grid points.
pub fn sup_diff(a: &GridFunction, b: &GridFunction) -> f64 {
    let xs = overlay_nodes(&a.mesh.x.nodes, &b.mesh.x.nodes);
    let ys = overlay_nodes(&a.mesh.y.nodes, &b.mesh.y.nodes);
    let sa = a.sample(&xs, &ys);
    let sb = b.sample(&xs, &ys);
    sa.iter()
        .zip(&sb)
        .map(|(u, v)| (u - v).abs())
        .fold(0.0, f64::max)
}

/// Writes `contents` to `path` atomically: temp file in the same directory,
/// then rename. No partial files are left on failure.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let wrap = |source: std::io::Error| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(wrap)?;
    tmp.write_all(contents.as_bytes()).map_err(wrap)?;
    tmp.persist(path).map_err(|e| wrap(e.error))?;
    Ok(())
}

/// Grid CSV: header `x,y,u`, rows y-major (all x for y_0, then y_1, ...).
/// Numbers use the shortest representation that round-trips f64 exactly.
pub fn grid_csv(gf: &GridFunction) -> String {
    let (n, m) = (gf.mesh.nx(), gf.mesh.ny());
    let mut s = String::from("x,y,u\n");
    for j in 0..=m {
        for i in 0..=n {
            s.push_str(&format!(
                "{},{},{}\n",
                gf.mesh.x.nodes[i],
                gf.mesh.y.nodes[j],
                gf.value(i, j)
            ));
        }
    }
    s
}

pub fn export_grid(gf: &GridFunction, path: &Path) -> Result<()> {
    write_atomic(path, &grid_csv(gf))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SliceAxis {
    /// Slice x = const; coordinate column holds y_j.
    XConst,
    /// Slice y = const; coordinate column holds x_i.
    YConst,
}

/// Slice CSV: header `coord,u`, one row per node of the axis being traversed.
pub fn slice_csv(gf: &GridFunction, axis: SliceAxis, value: f64) -> Result<String> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::InvalidArgument(format!(
            "slice position {value} outside [0,1]"
        )));
    }
    let mut s = String::from("coord,u\n");
    match axis {
        SliceAxis::YConst => {
            for &x in &gf.mesh.x.nodes {
                s.push_str(&format!("{},{}\n", x, gf.eval(x, value)?));
            }
        }
        SliceAxis::XConst => {
            for &y in &gf.mesh.y.nodes {
                s.push_str(&format!("{},{}\n", y, gf.eval(value, y)?));
            }
        }
    }
    Ok(s)
}

pub fn export_slice(gf: &GridFunction, axis: SliceAxis, value: f64, path: &Path) -> Result<()> {
    write_atomic(path, &slice_csv(gf, axis, value)?)
}
