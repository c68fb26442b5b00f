//! Fourth-order compact approximation of `u_xx`, `u_yy`, `u_zz` and the
//! Laplacian, with boundary values for the second derivatives recovered
//! from the equation itself.
//!
//! Each directional derivative solves, per grid line, the tridiagonal
//! system `A w = (B u + b1 q_b)/h^2 - a1 q_a`, where `q_b` carries the
//! Dirichlet face values and `q_a` the second normal derivatives at the
//! faces. On a Dirichlet face the normal second derivative follows from
//! the wave equation: e.g. at `x = x_min`,
//! `u_xx = (d_tt f0 - s)/v^2 - d_yy f0 - d_zz f0`.
//!
//! Line solves are batched: the x direction is contiguous per line, the
//! y and z directions eliminate whole rows/slabs at once so the inner
//! loops stay unit-stride.

use crate::error::{Error, Result};
use crate::grid::{Axis, Field3D, Grid, VelocityModel};
use crate::problem::SourceTerm;
use crate::tridiag::{SchemeCoefficients, ThomasFactor};

/// One of the six box faces. Order: f0, f1, g0, g1, h0, h1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceId {
    XMin,
    XMax,
    YMin,
    YMax,
    ZMin,
    ZMax,
}

impl FaceId {
    pub const ALL: [FaceId; 6] = [
        FaceId::XMin,
        FaceId::XMax,
        FaceId::YMin,
        FaceId::YMax,
        FaceId::ZMin,
        FaceId::ZMax,
    ];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            FaceId::XMin => 0,
            FaceId::XMax => 1,
            FaceId::YMin => 2,
            FaceId::YMax => 3,
            FaceId::ZMin => 4,
            FaceId::ZMax => 5,
        }
    }

    /// Axis normal to the face.
    #[inline]
    pub fn normal(self) -> Axis {
        match self {
            FaceId::XMin | FaceId::XMax => Axis::X,
            FaceId::YMin | FaceId::YMax => Axis::Y,
            FaceId::ZMin | FaceId::ZMax => Axis::Z,
        }
    }

    /// Tangential axes `(a, b)` in slab order (`a` fastest).
    #[inline]
    pub fn tangential(self) -> (Axis, Axis) {
        match self.normal() {
            Axis::X => (Axis::Y, Axis::Z),
            Axis::Y => (Axis::X, Axis::Z),
            Axis::Z => (Axis::X, Axis::Y),
        }
    }

    #[inline]
    pub fn is_lower(self) -> bool {
        matches!(self, FaceId::XMin | FaceId::YMin | FaceId::ZMin)
    }
}

/// Boundary callback of `(t, a, b)` where `a, b` are the face's
/// tangential coordinates.
pub type BoundaryFn = Box<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

fn zero_fn() -> BoundaryFn {
    Box::new(|_, _, _| 0.0)
}

/// Dirichlet data on one face together with the derivatives the scheme
/// consumes. `value`, `dtt` and the two tangential second derivatives
/// drive the leapfrog closure; `dt`, `dttt` and `dt_lap_tan`
/// (the time derivative of the tangential Laplacian of the trace) are
/// only required by the RK4 stage boundaries and by ghost-level
/// initialization when the initial Laplacians are not analytic.
pub struct FaceFns {
    pub value: BoundaryFn,
    pub dtt: BoundaryFn,
    pub d2_tan1: BoundaryFn,
    pub d2_tan2: BoundaryFn,
    pub dt: Option<BoundaryFn>,
    pub dttt: Option<BoundaryFn>,
    pub dt_lap_tan: Option<BoundaryFn>,
}

impl FaceFns {
    pub fn new(
        value: BoundaryFn,
        dtt: BoundaryFn,
        d2_tan1: BoundaryFn,
        d2_tan2: BoundaryFn,
    ) -> Self {
        FaceFns {
            value,
            dtt,
            d2_tan1,
            d2_tan2,
            dt: None,
            dttt: None,
            dt_lap_tan: None,
        }
    }

    /// Attach the extra time derivatives needed for RK4 stages.
    pub fn with_time_derivatives(
        mut self,
        dt: BoundaryFn,
        dttt: BoundaryFn,
        dt_lap_tan: BoundaryFn,
    ) -> Self {
        self.dt = Some(dt);
        self.dttt = Some(dttt);
        self.dt_lap_tan = Some(dt_lap_tan);
        self
    }

    /// Identically zero face, all derivatives included.
    pub fn zero() -> Self {
        FaceFns::new(zero_fn(), zero_fn(), zero_fn(), zero_fn()).with_time_derivatives(
            zero_fn(),
            zero_fn(),
            zero_fn(),
        )
    }
}

/// Dirichlet data for all six faces.
///
/// Consistency of the six functions along shared edges and corners is
/// the problem author's responsibility; it is not checked here.
pub struct FaceData {
    faces: [FaceFns; 6],
}

impl FaceData {
    pub fn new(
        x_min: FaceFns,
        x_max: FaceFns,
        y_min: FaceFns,
        y_max: FaceFns,
        z_min: FaceFns,
        z_max: FaceFns,
    ) -> Self {
        FaceData {
            faces: [x_min, x_max, y_min, y_max, z_min, z_max],
        }
    }

    /// All faces identically zero.
    pub fn homogeneous() -> Self {
        FaceData {
            faces: [
                FaceFns::zero(),
                FaceFns::zero(),
                FaceFns::zero(),
                FaceFns::zero(),
                FaceFns::zero(),
                FaceFns::zero(),
            ],
        }
    }

    #[inline]
    pub fn face(&self, id: FaceId) -> &FaceFns {
        &self.faces[id.index()]
    }
}

/// Values on the interior tangential nodes of the six faces.
///
/// Slab layouts (`a` fastest): x faces `(j,k) -> k*ny + j`, y faces
/// `(i,k) -> k*nx + i`, z faces `(i,j) -> j*nx + i`. Edge and corner
/// nodes of the faces are never stored; the line solves do not read
/// them.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceSet {
    dims: [usize; 3],
    slabs: [Vec<f64>; 6],
}

/// Slab dimensions `(na, nb)` of a face on the given grid.
pub fn face_slab_dims(grid: &Grid, face: FaceId) -> (usize, usize) {
    let (a, b) = face.tangential();
    (grid.n(a), grid.n(b))
}

impl FaceSet {
    pub fn zeros(grid: &Grid) -> Self {
        let slabs = FaceId::ALL.map(|f| {
            let (na, nb) = face_slab_dims(grid, f);
            vec![0.0; na * nb]
        });
        FaceSet {
            dims: grid.dims(),
            slabs,
        }
    }

    #[inline]
    pub fn slab(&self, face: FaceId) -> &[f64] {
        &self.slabs[face.index()]
    }

    #[inline]
    pub fn slab_mut(&mut self, face: FaceId) -> &mut [f64] {
        &mut self.slabs[face.index()]
    }

    #[inline]
    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    /// Fill every face from `f(face, x, y, z)` at the face nodes.
    pub fn fill_fn(&mut self, grid: &Grid, mut f: impl FnMut(FaceId, f64, f64, f64) -> f64) {
        for face in FaceId::ALL {
            let slab = &mut self.slabs[face.index()];
            for_each_face_node(grid, face, |idx, _, _, (x, y, z), _| {
                slab[idx] = f(face, x, y, z);
            });
        }
    }
}

/// Visit the interior tangential nodes of `face` in slab order, passing
/// `(slab_idx, a, b, (x,y,z), full_grid_indices)`.
pub(crate) fn for_each_face_node(
    grid: &Grid,
    face: FaceId,
    mut f: impl FnMut(usize, f64, f64, (f64, f64, f64), (usize, usize, usize)),
) {
    let (a_axis, b_axis) = face.tangential();
    let (na, nb) = face_slab_dims(grid, face);
    let normal = face.normal();
    let n_idx = if face.is_lower() { 0 } else { grid.n(normal) + 1 };
    let n_coord = grid.coord(normal, n_idx);
    for bi in 0..nb {
        let b = grid.interior_coord(b_axis, bi);
        for ai in 0..na {
            let a = grid.interior_coord(a_axis, ai);
            let idx = bi * na + ai;
            let (gi, gj, gk): (usize, usize, usize);
            let (x, y, z) = match normal {
                Axis::X => {
                    gi = n_idx;
                    gj = ai + 1;
                    gk = bi + 1;
                    (n_coord, a, b)
                }
                Axis::Y => {
                    gi = ai + 1;
                    gj = n_idx;
                    gk = bi + 1;
                    (a, n_coord, b)
                }
                Axis::Z => {
                    gi = ai + 1;
                    gj = bi + 1;
                    gk = n_idx;
                    (a, b, n_coord)
                }
            };
            f(idx, a, b, (x, y, z), (gi, gj, gk));
        }
    }
}

/// Dirichlet face values at one time level (the `q_b` vectors).
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletValues(pub(crate) FaceSet);

/// Second normal derivatives at the faces (the `q_a` vectors).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryClosure(pub(crate) FaceSet);

impl DirichletValues {
    pub fn zeros(grid: &Grid) -> Self {
        DirichletValues(FaceSet::zeros(grid))
    }

    pub fn sample_fn(grid: &Grid, f: impl Fn(FaceId, f64, f64, f64) -> f64) -> Self {
        let mut set = FaceSet::zeros(grid);
        set.fill_fn(grid, f);
        DirichletValues(set)
    }

    #[inline]
    pub fn slab(&self, face: FaceId) -> &[f64] {
        self.0.slab(face)
    }
}

impl BoundaryClosure {
    pub fn zeros(grid: &Grid) -> Self {
        BoundaryClosure(FaceSet::zeros(grid))
    }

    pub fn sample_fn(grid: &Grid, f: impl Fn(FaceId, f64, f64, f64) -> f64) -> Self {
        let mut set = FaceSet::zeros(grid);
        set.fill_fn(grid, f);
        BoundaryClosure(set)
    }

    #[inline]
    pub fn slab(&self, face: FaceId) -> &[f64] {
        self.0.slab(face)
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .slabs
            .iter()
            .flat_map(|s| s.iter())
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Sample the Dirichlet face values at time `t`.
pub fn sample_dirichlet(faces: &FaceData, grid: &Grid, t: f64) -> DirichletValues {
    let mut set = FaceSet::zeros(grid);
    for face in FaceId::ALL {
        let fns = faces.face(face);
        let slab = set.slab_mut(face);
        for_each_face_node(grid, face, |idx, a, b, _, _| {
            slab[idx] = (fns.value)(t, a, b);
        });
    }
    DirichletValues(set)
}

/// Second normal derivatives of `u` on the faces at time `t`, from the
/// equation: `(d_tt F - s)/v^2` minus the tangential Laplacian of the
/// face data.
pub fn boundary_closure(
    faces: &FaceData,
    velocity: &VelocityModel,
    source: &dyn SourceTerm,
    grid: &Grid,
    t: f64,
) -> BoundaryClosure {
    let mut set = FaceSet::zeros(grid);
    for face in FaceId::ALL {
        let fns = faces.face(face);
        let slab = set.slab_mut(face);
        for_each_face_node(grid, face, |idx, a, b, (x, y, z), (gi, gj, gk)| {
            let nu_sq = velocity.sq_at(gi, gj, gk);
            let s = source.boundary_value(t, x, y, z);
            slab[idx] = ((fns.dtt)(t, a, b) - s) / nu_sq
                - (fns.d2_tan1)(t, a, b)
                - (fns.d2_tan2)(t, a, b);
        });
    }
    BoundaryClosure(set)
}

/// Second normal derivatives of `u_t` on the faces at time `t`,
/// obtained by differentiating the closure in time:
/// `(d_ttt F - d_t s)/v^2 - d_t(tangential Laplacian of F)`.
///
/// Requires the faces' `dttt` and `dt_lap_tan` callbacks and the
/// source's time derivative; used by the RK4 stage boundaries and the
/// compact ghost-level fallback.
pub fn boundary_closure_dt(
    faces: &FaceData,
    velocity: &VelocityModel,
    source: &dyn SourceTerm,
    grid: &Grid,
    t: f64,
) -> Result<BoundaryClosure> {
    let mut set = FaceSet::zeros(grid);
    for face in FaceId::ALL {
        let fns = faces.face(face);
        let dttt = fns
            .dttt
            .as_ref()
            .ok_or(Error::MissingDerivative("face third time derivative (dttt)"))?;
        let dt_lap_tan = fns.dt_lap_tan.as_ref().ok_or(Error::MissingDerivative(
            "time derivative of the face tangential Laplacian (dt_lap_tan)",
        ))?;
        let slab = set.slab_mut(face);
        let mut err = None;
        for_each_face_node(grid, face, |idx, a, b, (x, y, z), (gi, gj, gk)| {
            if err.is_some() {
                return;
            }
            let nu_sq = velocity.sq_at(gi, gj, gk);
            match source.boundary_dt(t, x, y, z) {
                Ok(ds) => {
                    slab[idx] = (dttt(t, a, b) - ds) / nu_sq - dt_lap_tan(t, a, b);
                }
                Err(e) => err = Some(e),
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    Ok(BoundaryClosure(set))
}

/// Fourth-order second derivative along one grid line.
///
/// `dirichlet` and `closure` hold the `(low, high)` end values of `u`
/// and of the second derivative.
pub fn second_derivative_line(
    line: &[f64],
    dirichlet: (f64, f64),
    closure: (f64, f64),
    h: f64,
    coeffs: &SchemeCoefficients,
) -> Vec<f64> {
    assert!(h > 0.0, "second_derivative_line: spacing must be positive");
    let n = line.len();
    assert!(n >= 1);
    let inv_h2 = 1.0 / (h * h);
    let (b0, b1, a1) = (coeffs.b0, coeffs.b1, coeffs.a1);
    let mut rhs = vec![0.0; n];
    for i in 0..n {
        let left = if i > 0 { line[i - 1] } else { dirichlet.0 };
        let right = if i + 1 < n { line[i + 1] } else { dirichlet.1 };
        rhs[i] = inv_h2 * (b1 * (left + right) + b0 * line[i]);
    }
    rhs[0] -= a1 * closure.0;
    rhs[n - 1] -= a1 * closure.1;
    let factor = ThomasFactor::new(&coeffs.matrix_a(n));
    factor.solve_in_place(&mut rhs);
    rhs
}

/// Batched compact Laplacian with per-direction Thomas factorizations
/// and reusable right-hand-side scratch.
pub struct CompactLaplacian {
    coeffs: SchemeCoefficients,
    dims: [usize; 3],
    inv_h2: [f64; 3],
    factors: [ThomasFactor; 3],
    rhs_line: Vec<f64>,
    rhs_slab: Vec<f64>,
    rhs_vol: Vec<f64>,
}

impl CompactLaplacian {
    pub fn new(grid: &Grid, coeffs: SchemeCoefficients) -> Self {
        let dims = grid.dims();
        let factors = [
            ThomasFactor::new(&coeffs.matrix_a(dims[0])),
            ThomasFactor::new(&coeffs.matrix_a(dims[1])),
            ThomasFactor::new(&coeffs.matrix_a(dims[2])),
        ];
        let inv_h2 = [
            1.0 / (grid.h(Axis::X) * grid.h(Axis::X)),
            1.0 / (grid.h(Axis::Y) * grid.h(Axis::Y)),
            1.0 / (grid.h(Axis::Z) * grid.h(Axis::Z)),
        ];
        CompactLaplacian {
            coeffs,
            dims,
            inv_h2,
            factors,
            rhs_line: vec![0.0; dims[0]],
            rhs_slab: vec![0.0; dims[0] * dims[1]],
            rhs_vol: vec![0.0; dims[0] * dims[1] * dims[2]],
        }
    }

    #[inline]
    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    fn check_dims(&self, u: &Field3D) {
        assert_eq!(
            u.dims(),
            self.dims,
            "CompactLaplacian: field dimensions do not match the grid"
        );
    }

    /// `out = u_xx + u_yy + u_zz` with the given face data.
    pub fn apply(
        &mut self,
        u: &Field3D,
        dirichlet: &DirichletValues,
        closure: &BoundaryClosure,
        out: &mut Field3D,
    ) {
        self.check_dims(u);
        self.check_dims(out);
        assert_eq!(dirichlet.0.dims(), self.dims);
        assert_eq!(closure.0.dims(), self.dims);
        out.fill(0.0);
        self.add_directional(u, Some((dirichlet, closure)), Axis::X, out);
        self.add_directional(u, Some((dirichlet, closure)), Axis::Y, out);
        self.add_directional(u, Some((dirichlet, closure)), Axis::Z, out);
    }

    /// Laplacian with identically zero Dirichlet values and closures.
    pub fn apply_homogeneous(&mut self, u: &Field3D, out: &mut Field3D) {
        self.check_dims(u);
        self.check_dims(out);
        out.fill(0.0);
        self.add_directional(u, None, Axis::X, out);
        self.add_directional(u, None, Axis::Y, out);
        self.add_directional(u, None, Axis::Z, out);
    }

    /// Accumulate one directional second derivative into `out`.
    pub fn add_directional(
        &mut self,
        u: &Field3D,
        boundary: Option<(&DirichletValues, &BoundaryClosure)>,
        axis: Axis,
        out: &mut Field3D,
    ) {
        match axis {
            Axis::X => self.add_d2_x(u, boundary, out),
            Axis::Y => self.add_d2_y(u, boundary, out),
            Axis::Z => self.add_d2_z(u, boundary, out),
        }
    }

    fn add_d2_x(
        &mut self,
        u: &Field3D,
        boundary: Option<(&DirichletValues, &BoundaryClosure)>,
        out: &mut Field3D,
    ) {
        let [nx, ny, nz] = self.dims;
        let (b0, b1, a1) = (self.coeffs.b0, self.coeffs.b1, self.coeffs.a1);
        let inv_h2 = self.inv_h2[0];
        let data = u.as_slice();
        let rhs = &mut self.rhs_line;
        for k in 0..nz {
            for j in 0..ny {
                let base = (k * ny + j) * nx;
                let line = &data[base..base + nx];
                let face = k * ny + j;
                let (lo, hi, q_lo, q_hi) = match boundary {
                    Some((dv, qc)) => (
                        dv.slab(FaceId::XMin)[face],
                        dv.slab(FaceId::XMax)[face],
                        qc.slab(FaceId::XMin)[face],
                        qc.slab(FaceId::XMax)[face],
                    ),
                    None => (0.0, 0.0, 0.0, 0.0),
                };
                for i in 0..nx {
                    let left = if i > 0 { line[i - 1] } else { lo };
                    let right = if i + 1 < nx { line[i + 1] } else { hi };
                    rhs[i] = inv_h2 * (b1 * (left + right) + b0 * line[i]);
                }
                rhs[0] -= a1 * q_lo;
                rhs[nx - 1] -= a1 * q_hi;
                self.factors[0].solve_in_place(rhs);
                let out_line = &mut out.as_mut_slice()[base..base + nx];
                for (o, r) in out_line.iter_mut().zip(rhs.iter()) {
                    *o += r;
                }
            }
        }
    }

    fn add_d2_y(
        &mut self,
        u: &Field3D,
        boundary: Option<(&DirichletValues, &BoundaryClosure)>,
        out: &mut Field3D,
    ) {
        let [nx, ny, nz] = self.dims;
        let (b0, b1, a1) = (self.coeffs.b0, self.coeffs.b1, self.coeffs.a1);
        let inv_h2 = self.inv_h2[1];
        let data = u.as_slice();
        let slab = &mut self.rhs_slab;
        for k in 0..nz {
            let k_base = k * ny * nx;
            for j in 0..ny {
                let row = &data[k_base + j * nx..k_base + (j + 1) * nx];
                let out_row = &mut slab[j * nx..(j + 1) * nx];
                if j > 0 && j + 1 < ny {
                    let down = &data[k_base + (j - 1) * nx..k_base + j * nx];
                    let up = &data[k_base + (j + 1) * nx..k_base + (j + 2) * nx];
                    for i in 0..nx {
                        out_row[i] = inv_h2 * (b1 * (down[i] + up[i]) + b0 * row[i]);
                    }
                } else {
                    for i in 0..nx {
                        let down = if j > 0 {
                            data[k_base + (j - 1) * nx + i]
                        } else {
                            boundary.map_or(0.0, |(dv, _)| dv.slab(FaceId::YMin)[k * nx + i])
                        };
                        let up = if j + 1 < ny {
                            data[k_base + (j + 1) * nx + i]
                        } else {
                            boundary.map_or(0.0, |(dv, _)| dv.slab(FaceId::YMax)[k * nx + i])
                        };
                        out_row[i] = inv_h2 * (b1 * (down + up) + b0 * row[i]);
                    }
                }
            }
            if let Some((_, qc)) = boundary {
                let q_lo = &qc.slab(FaceId::YMin)[k * nx..(k + 1) * nx];
                let q_hi = &qc.slab(FaceId::YMax)[k * nx..(k + 1) * nx];
                for i in 0..nx {
                    slab[i] -= a1 * q_lo[i];
                    slab[(ny - 1) * nx + i] -= a1 * q_hi[i];
                }
            }
            self.factors[1].solve_planes(slab, nx);
            let out_slab = &mut out.as_mut_slice()[k_base..k_base + ny * nx];
            for (o, r) in out_slab.iter_mut().zip(slab.iter()) {
                *o += r;
            }
        }
    }

    fn add_d2_z(
        &mut self,
        u: &Field3D,
        boundary: Option<(&DirichletValues, &BoundaryClosure)>,
        out: &mut Field3D,
    ) {
        let [nx, ny, nz] = self.dims;
        let plane = nx * ny;
        let (b0, b1, a1) = (self.coeffs.b0, self.coeffs.b1, self.coeffs.a1);
        let inv_h2 = self.inv_h2[2];
        let data = u.as_slice();
        let vol = &mut self.rhs_vol;
        for k in 0..nz {
            let cur = &data[k * plane..(k + 1) * plane];
            let out_slab = &mut vol[k * plane..(k + 1) * plane];
            if k > 0 && k + 1 < nz {
                let below = &data[(k - 1) * plane..k * plane];
                let above = &data[(k + 1) * plane..(k + 2) * plane];
                for q in 0..plane {
                    out_slab[q] = inv_h2 * (b1 * (below[q] + above[q]) + b0 * cur[q]);
                }
            } else {
                for q in 0..plane {
                    let below = if k > 0 {
                        data[(k - 1) * plane + q]
                    } else {
                        boundary.map_or(0.0, |(dv, _)| dv.slab(FaceId::ZMin)[q])
                    };
                    let above = if k + 1 < nz {
                        data[(k + 1) * plane + q]
                    } else {
                        boundary.map_or(0.0, |(dv, _)| dv.slab(FaceId::ZMax)[q])
                    };
                    out_slab[q] = inv_h2 * (b1 * (below + above) + b0 * cur[q]);
                }
            }
        }
        if let Some((_, qc)) = boundary {
            let q_lo = qc.slab(FaceId::ZMin);
            let q_hi = qc.slab(FaceId::ZMax);
            for q in 0..plane {
                vol[q] -= a1 * q_lo[q];
                vol[(nz - 1) * plane + q] -= a1 * q_hi[q];
            }
        }
        self.factors[2].solve_planes(vol, plane);
        for (o, r) in out.as_mut_slice().iter_mut().zip(vol.iter()) {
            *o += r;
        }
    }
}

/// One-shot compact Laplacian with default coefficients.
///
/// `dirichlet` and `closure` must be sampled at the same time level as
/// the field's boundary data.
pub fn laplacian(
    u: &Field3D,
    dirichlet: &DirichletValues,
    closure: &BoundaryClosure,
    grid: &Grid,
) -> Field3D {
    let mut lap = CompactLaplacian::new(grid, SchemeCoefficients::default());
    let mut out = Field3D::zeros_dims(u.dims());
    lap.apply(u, dirichlet, closure, &mut out);
    out
}
