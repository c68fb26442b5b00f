//! Initial-boundary value problem descriptions shared by the
//! integrators: velocity, source term, initial data, Dirichlet faces,
//! and final time.

use crate::compact::FaceData;
use crate::error::{Error, Result};
use crate::grid::{Domain, Field3D, Grid, VelocityModel};

pub type SpaceFn = Box<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;
pub type SpaceTimeFn = Box<dyn Fn(f64, f64, f64, f64) -> f64 + Send + Sync>;

/// Source term `s(t,x,y,z)` of the wave equation.
///
/// Interior evaluations add into a field (so point sources touch a
/// single node); boundary evaluations feed the face closures.
pub trait SourceTerm: Send + Sync {
    /// Add `s(t, .)` sampled at the interior nodes into `out`.
    fn add_interior(&self, grid: &Grid, t: f64, out: &mut Field3D) -> Result<()>;

    /// Add `d_t s(t, .)` sampled at the interior nodes into `out`.
    fn add_dt_interior(&self, grid: &Grid, t: f64, out: &mut Field3D) -> Result<()>;

    /// `s` at a boundary point.
    fn boundary_value(&self, t: f64, x: f64, y: f64, z: f64) -> f64;

    /// `d_t s` at a boundary point; errors when the derivative is
    /// unavailable.
    fn boundary_dt(&self, t: f64, x: f64, y: f64, z: f64) -> Result<f64>;
}

/// The zero source.
pub struct ZeroSource;

impl SourceTerm for ZeroSource {
    fn add_interior(&self, _: &Grid, _: f64, _: &mut Field3D) -> Result<()> {
        Ok(())
    }
    fn add_dt_interior(&self, _: &Grid, _: f64, _: &mut Field3D) -> Result<()> {
        Ok(())
    }
    fn boundary_value(&self, _: f64, _: f64, _: f64, _: f64) -> f64 {
        0.0
    }
    fn boundary_dt(&self, _: f64, _: f64, _: f64, _: f64) -> Result<f64> {
        Ok(0.0)
    }
}

/// Pointwise-analytic source given by callbacks.
pub struct AnalyticSource {
    s: SpaceTimeFn,
    ds_dt: Option<SpaceTimeFn>,
}

impl AnalyticSource {
    pub fn new(s: SpaceTimeFn, ds_dt: Option<SpaceTimeFn>) -> Self {
        AnalyticSource { s, ds_dt }
    }
}

impl SourceTerm for AnalyticSource {
    fn add_interior(&self, grid: &Grid, t: f64, out: &mut Field3D) -> Result<()> {
        add_sampled(grid, out, |x, y, z| (self.s)(t, x, y, z))
    }

    fn add_dt_interior(&self, grid: &Grid, t: f64, out: &mut Field3D) -> Result<()> {
        let ds = self
            .ds_dt
            .as_ref()
            .ok_or(Error::MissingDerivative("source time derivative (ds_dt)"))?;
        add_sampled(grid, out, |x, y, z| ds(t, x, y, z))
    }

    fn boundary_value(&self, t: f64, x: f64, y: f64, z: f64) -> f64 {
        (self.s)(t, x, y, z)
    }

    fn boundary_dt(&self, t: f64, x: f64, y: f64, z: f64) -> Result<f64> {
        let ds = self
            .ds_dt
            .as_ref()
            .ok_or(Error::MissingDerivative("source time derivative (ds_dt)"))?;
        Ok(ds(t, x, y, z))
    }
}

fn add_sampled(grid: &Grid, out: &mut Field3D, f: impl Fn(f64, f64, f64) -> f64) -> Result<()> {
    assert_eq!(out.dims(), grid.dims());
    let [nx, ny, nz] = grid.dims();
    let data = out.as_mut_slice();
    let mut idx = 0;
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let (x, y, z) = grid.interior_node(i, j, k);
                let v = f(x, y, z);
                if !v.is_finite() {
                    return Err(Error::NonFinite(format!("source at ({x}, {y}, {z})")));
                }
                data[idx] += v;
                idx += 1;
            }
        }
    }
    Ok(())
}

/// Initial displacement and velocity, optionally with their analytic
/// Laplacians. When a Laplacian callback is absent the ghost level
/// falls back to the compact operator with closures at `t = 0`.
pub struct InitialData {
    pub alpha: SpaceFn,
    pub beta: SpaceFn,
    pub lap_alpha: Option<SpaceFn>,
    pub lap_beta: Option<SpaceFn>,
}

impl InitialData {
    pub fn zero() -> Self {
        InitialData {
            alpha: Box::new(|_, _, _| 0.0),
            beta: Box::new(|_, _, _| 0.0),
            lap_alpha: Some(Box::new(|_, _, _| 0.0)),
            lap_beta: Some(Box::new(|_, _, _| 0.0)),
        }
    }
}

/// Full problem description: domain, default resolution, velocity,
/// source, initial data, Dirichlet faces, and final time. The optional
/// exact solution is carried for error reporting only.
pub struct ProblemSpec {
    pub domain: Domain,
    pub default_n: [usize; 3],
    pub velocity: SpaceFn,
    pub source: Box<dyn SourceTerm>,
    pub initial: InitialData,
    pub faces: FaceData,
    pub t_final: f64,
    pub exact: Option<SpaceTimeFn>,
}

impl ProblemSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "final time must be positive, got {}",
                self.t_final
            )));
        }
        Ok(())
    }

    /// Grid at the spec's default resolution.
    pub fn grid(&self) -> Result<Grid> {
        let [nx, ny, nz] = self.default_n;
        Grid::new(self.domain, nx, ny, nz)
    }

    /// Grid with overridden interior counts.
    pub fn grid_with(&self, n: [usize; 3]) -> Result<Grid> {
        Grid::new(self.domain, n[0], n[1], n[2])
    }

    /// Velocity sampled on all nodes of `grid`.
    pub fn velocity_model(&self, grid: &Grid) -> Result<VelocityModel> {
        VelocityModel::from_fn(grid, &self.velocity)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_source_samples_and_requires_dt() {
        let grid = Grid::new(Domain::unit_cube(), 3, 3, 3).unwrap();
        let src = AnalyticSource::new(Box::new(|t, x, _, _| t + x), None);
        let mut f = Field3D::zeros(&grid);
        src.add_interior(&grid, 2.0, &mut f).unwrap();
        assert!((f.get(0, 0, 0) - 2.25).abs() < 1e-15);
        assert!(src.add_dt_interior(&grid, 0.0, &mut f).is_err());
        assert!(src.boundary_dt(0.0, 0.0, 0.0, 0.0).is_err());
        assert_eq!(src.boundary_value(1.0, 0.5, 0.0, 0.0), 1.5);
    }

    #[test]
    fn zero_source_is_zero() {
        let grid = Grid::new(Domain::unit_cube(), 2, 2, 2).unwrap();
        let mut f = Field3D::zeros(&grid);
        ZeroSource.add_interior(&grid, 1.0, &mut f).unwrap();
        assert_eq!(f.max_abs(), 0.0);
        assert_eq!(ZeroSource.boundary_dt(0.0, 1.0, 1.0, 1.0).unwrap(), 0.0);
    }
}
