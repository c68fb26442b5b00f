//! Box domain, structured grid, and nodal field storage.
//!
//! The box is discretized into `(N_x+2) x (N_y+2) x (N_z+2)` nodes per
//! axis: indices `0` and `N+1` are boundary nodes, `1..=N` interior.
//! Evolving fields store interior nodes only; Dirichlet data lives on
//! the faces. Interior storage is laid out with `i` fastest, then `j`,
//! then `k`.

use crate::error::{Error, Result};

/// Coordinate axis selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// Axis-aligned box `[x_min,x_max] x [y_min,y_max] x [z_min,z_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub z_min: f64,
    pub z_max: f64,
}

impl Domain {
    pub fn new(x: (f64, f64), y: (f64, f64), z: (f64, f64)) -> Result<Self> {
        let d = Domain {
            x_min: x.0,
            x_max: x.1,
            y_min: y.0,
            y_max: y.1,
            z_min: z.0,
            z_max: z.1,
        };
        for axis in Axis::ALL {
            let (lo, hi) = d.bounds(axis);
            if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                return Err(Error::InvalidArgument(format!(
                    "degenerate domain on {axis:?}: [{lo}, {hi}]"
                )));
            }
        }
        Ok(d)
    }

    /// Unit cube `[0,1]^3`.
    pub fn unit_cube() -> Self {
        Domain::new((0.0, 1.0), (0.0, 1.0), (0.0, 1.0)).unwrap()
    }

    #[inline]
    pub fn bounds(&self, axis: Axis) -> (f64, f64) {
        match axis {
            Axis::X => (self.x_min, self.x_max),
            Axis::Y => (self.y_min, self.y_max),
            Axis::Z => (self.z_min, self.z_max),
        }
    }

    #[inline]
    pub fn extent(&self, axis: Axis) -> f64 {
        let (lo, hi) = self.bounds(axis);
        hi - lo
    }
}

/// Structured grid over a [`Domain`] with `n[axis]` interior nodes per
/// axis and spacing `h = extent / (n + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    domain: Domain,
    n: [usize; 3],
    h: [f64; 3],
}

impl Grid {
    pub fn new(domain: Domain, nx: usize, ny: usize, nz: usize) -> Result<Self> {
        let n = [nx, ny, nz];
        for (axis, &count) in Axis::ALL.iter().zip(&n) {
            if count < 1 {
                return Err(Error::InvalidArgument(format!(
                    "interior node count on {axis:?} must be >= 1"
                )));
            }
        }
        let h = [
            domain.extent(Axis::X) / (nx as f64 + 1.0),
            domain.extent(Axis::Y) / (ny as f64 + 1.0),
            domain.extent(Axis::Z) / (nz as f64 + 1.0),
        ];
        Ok(Grid { domain, n, h })
    }

    /// Grid with interior counts chosen so each spacing is (close to) a
    /// target `h`. Errors when `h` does not evenly divide an extent.
    pub fn with_spacing(domain: Domain, h: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidArgument(format!("spacing must be positive, got {h}")));
        }
        let mut n = [0usize; 3];
        for axis in Axis::ALL {
            let cells = domain.extent(axis) / h;
            let rounded = cells.round();
            if rounded < 2.0 || (cells - rounded).abs() > 1e-6 * rounded {
                return Err(Error::InvalidArgument(format!(
                    "spacing {h} does not divide the {axis:?} extent {}",
                    domain.extent(axis)
                )));
            }
            n[axis.index()] = rounded as usize - 1;
        }
        Grid::new(domain, n[0], n[1], n[2])
    }

    #[inline]
    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Interior node count along `axis`.
    #[inline]
    pub fn n(&self, axis: Axis) -> usize {
        self.n[axis.index()]
    }

    #[inline]
    pub fn h(&self, axis: Axis) -> f64 {
        self.h[axis.index()]
    }

    #[inline]
    pub fn nx(&self) -> usize {
        self.n[0]
    }

    #[inline]
    pub fn ny(&self) -> usize {
        self.n[1]
    }

    #[inline]
    pub fn nz(&self) -> usize {
        self.n[2]
    }

    /// Interior dimensions `[nx, ny, nz]`.
    #[inline]
    pub fn dims(&self) -> [usize; 3] {
        self.n
    }

    #[inline]
    pub fn interior_len(&self) -> usize {
        self.n[0] * self.n[1] * self.n[2]
    }

    /// Node coordinate for a full-grid index `0..=n+1`; index 0 is the
    /// lower boundary, `n+1` the upper.
    #[inline]
    pub fn coord(&self, axis: Axis, idx: usize) -> f64 {
        debug_assert!(idx <= self.n(axis) + 1);
        let (lo, hi) = self.domain.bounds(axis);
        if idx == self.n(axis) + 1 {
            hi
        } else {
            lo + idx as f64 * self.h(axis)
        }
    }

    /// Coordinate of interior node `i` (0-based, `0..n`).
    #[inline]
    pub fn interior_coord(&self, axis: Axis, i: usize) -> f64 {
        debug_assert!(i < self.n(axis));
        self.coord(axis, i + 1)
    }

    /// Coordinates of interior node `(i,j,k)` (0-based).
    #[inline]
    pub fn interior_node(&self, i: usize, j: usize, k: usize) -> (f64, f64, f64) {
        (
            self.interior_coord(Axis::X, i),
            self.interior_coord(Axis::Y, j),
            self.interior_coord(Axis::Z, k),
        )
    }

    #[inline]
    pub fn min_h(&self) -> f64 {
        self.h[0].min(self.h[1]).min(self.h[2])
    }

    /// The common spacing when the grid is (numerically) isotropic.
    pub fn uniform_h(&self) -> Option<f64> {
        let h = self.h[0];
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
        if close(self.h[1], h) && close(self.h[2], h) {
            Some(h)
        } else {
            None
        }
    }
}

/// Interior nodal values of a scalar field, `i` fastest then `j` then `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field3D {
    n: [usize; 3],
    data: Vec<f64>,
}

impl Field3D {
    pub fn zeros(grid: &Grid) -> Self {
        Field3D::zeros_dims(grid.dims())
    }

    pub fn zeros_dims(n: [usize; 3]) -> Self {
        Field3D {
            n,
            data: vec![0.0; n[0] * n[1] * n[2]],
        }
    }

    /// Sample `f(x,y,z)` at every interior node. Errors if `f` produces
    /// a non-finite value.
    pub fn sample(grid: &Grid, f: impl Fn(f64, f64, f64) -> f64) -> Result<Self> {
        let mut out = Field3D::zeros(grid);
        let [nx, ny, nz] = out.n;
        let mut idx = 0;
        for k in 0..nz {
            let z = grid.interior_coord(Axis::Z, k);
            for j in 0..ny {
                let y = grid.interior_coord(Axis::Y, j);
                for i in 0..nx {
                    let x = grid.interior_coord(Axis::X, i);
                    let v = f(x, y, z);
                    if !v.is_finite() {
                        return Err(Error::NonFinite(format!(
                            "sampled field at node ({x}, {y}, {z})"
                        )));
                    }
                    out.data[idx] = v;
                    idx += 1;
                }
            }
        }
        Ok(out)
    }

    #[inline]
    pub fn dims(&self) -> [usize; 3] {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        debug_assert!(i < self.n[0] && j < self.n[1] && k < self.n[2]);
        (k * self.n[1] + j) * self.n[0] + i
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[self.idx(i, j, k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let idx = self.idx(i, j, k);
        self.data[idx] = v;
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn fill(&mut self, v: f64) {
        self.data.fill(v);
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Squared l2 sum over interior nodes (unweighted).
    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn same_dims(&self, other: &Field3D) -> bool {
        self.n == other.n
    }
}

/// Acoustic velocity sampled at every node of the grid, boundary
/// included (full-grid indices `0..=n+1` per axis).
#[derive(Debug, Clone)]
pub struct VelocityModel {
    n: [usize; 3],
    data: Vec<f64>,
    max: f64,
}

impl VelocityModel {
    /// Sample `v(x,y,z)` over all nodes. Errors unless `v` is finite
    /// and strictly positive everywhere.
    pub fn from_fn(grid: &Grid, v: impl Fn(f64, f64, f64) -> f64) -> Result<Self> {
        let n = grid.dims();
        let (mx, my, mz) = (n[0] + 2, n[1] + 2, n[2] + 2);
        let mut data = vec![0.0; mx * my * mz];
        let mut max = 0.0f64;
        let mut idx = 0;
        for k in 0..mz {
            let z = grid.coord(Axis::Z, k);
            for j in 0..my {
                let y = grid.coord(Axis::Y, j);
                for i in 0..mx {
                    let x = grid.coord(Axis::X, i);
                    let val = v(x, y, z);
                    if !val.is_finite() || val <= 0.0 {
                        return Err(Error::InvalidArgument(format!(
                            "velocity must be finite and positive, got {val} at ({x}, {y}, {z})"
                        )));
                    }
                    data[idx] = val;
                    max = max.max(val);
                    idx += 1;
                }
            }
        }
        Ok(VelocityModel { n, data, max })
    }

    pub fn constant(grid: &Grid, v: f64) -> Result<Self> {
        VelocityModel::from_fn(grid, |_, _, _| v)
    }

    /// Interior dimensions of the grid this model was sampled on.
    #[inline]
    pub fn interior_dims(&self) -> [usize; 3] {
        self.n
    }

    /// Velocity at full-grid node `(i,j,k)`, each index in `0..=n+1`.
    #[inline]
    pub fn at(&self, i: usize, j: usize, k: usize) -> f64 {
        let (mx, my) = (self.n[0] + 2, self.n[1] + 2);
        debug_assert!(i < mx && j < my && k < self.n[2] + 2);
        self.data[(k * my + j) * mx + i]
    }

    /// Squared velocity at full-grid node `(i,j,k)`.
    #[inline]
    pub fn sq_at(&self, i: usize, j: usize, k: usize) -> f64 {
        let v = self.at(i, j, k);
        v * v
    }

    /// Squared velocity sampled on interior nodes only.
    pub fn sq_interior(&self) -> Field3D {
        let mut out = Field3D::zeros_dims(self.n);
        let [nx, ny, nz] = self.n;
        let mut idx = 0;
        for k in 0..nz {
            for j in 0..ny {
                for i in 0..nx {
                    out.as_mut_slice()[idx] = self.sq_at(i + 1, j + 1, k + 1);
                    idx += 1;
                }
            }
        }
        out
    }

    #[inline]
    pub fn max(&self) -> f64 {
        self.max
    }
}
