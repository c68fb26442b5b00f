//! Built-in velocity models and source terms for seismic runs: the
//! Ricker wavelet point source and a two-layer medium.

use crate::error::{Error, Result};
use crate::grid::{Axis, Field3D, Grid, VelocityModel};
use crate::problem::SourceTerm;
use std::f64::consts::PI;

/// Ricker wavelet point source: amplitude
/// `[1 - 2 pi^2 f_p^2 (t-d_r)^2] exp(-pi^2 f_p^2 (t-d_r)^2)` injected
/// at the grid node nearest to `location`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RickerSource {
    /// Dominant frequency (Hz).
    pub f_p: f64,
    /// Temporal delay (s).
    pub d_r: f64,
    pub location: (f64, f64, f64),
}

impl RickerSource {
    pub fn new(f_p: f64, d_r: f64, location: (f64, f64, f64)) -> Result<Self> {
        if !(f_p > 0.0 && f_p.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "dominant frequency must be positive, got {f_p}"
            )));
        }
        Ok(RickerSource { f_p, d_r, location })
    }

    /// Full-grid index of the interior node nearest to the source.
    /// Errors when the source falls outside the domain or on a
    /// boundary face.
    pub fn nearest_interior_node(&self, grid: &Grid) -> Result<(usize, usize, usize)> {
        let coords = [self.location.0, self.location.1, self.location.2];
        let mut idx = [0usize; 3];
        for axis in Axis::ALL {
            let (lo, hi) = grid.domain().bounds(axis);
            let c = coords[axis.index()];
            if !(c >= lo && c <= hi) {
                return Err(Error::InvalidArgument(format!(
                    "source coordinate {c} outside the domain on {axis:?}"
                )));
            }
            let n = grid.n(axis);
            let raw = ((c - lo) / grid.h(axis)).round() as isize;
            let full = raw.clamp(0, n as isize + 1) as usize;
            if full == 0 || full == n + 1 {
                return Err(Error::InvalidArgument(format!(
                    "source lies on a boundary face along {axis:?}"
                )));
            }
            idx[axis.index()] = full;
        }
        Ok((idx[0], idx[1], idx[2]))
    }
}

/// Ricker amplitude at time `t`.
pub fn ricker_amplitude(t: f64, src: &RickerSource) -> f64 {
    let arg = PI * src.f_p * (t - src.d_r);
    let a = arg * arg;
    (1.0 - 2.0 * a) * (-a).exp()
}

/// Time derivative of the Ricker amplitude.
pub fn ricker_amplitude_dt(t: f64, src: &RickerSource) -> f64 {
    let w = PI * src.f_p;
    let u = t - src.d_r;
    let a = w * w * u * u;
    // d/dt [(1-2a) e^{-a}] with da/dt = 2 w^2 u
    -2.0 * w * w * u * (3.0 - 2.0 * a) * (-a).exp()
}

/// Discrete delta times the Ricker amplitude:
/// `amplitude(t) / (h_x h_y h_z)` at the nearest interior node, zero
/// elsewhere.
pub fn point_source_field(src: &RickerSource, grid: &Grid, t: f64) -> Result<Field3D> {
    let mut out = Field3D::zeros(grid);
    add_point_source(src, grid, ricker_amplitude(t, src), &mut out)?;
    Ok(out)
}

fn add_point_source(src: &RickerSource, grid: &Grid, amplitude: f64, out: &mut Field3D) -> Result<()> {
    let (i, j, k) = src.nearest_interior_node(grid)?;
    let cell = grid.h(Axis::X) * grid.h(Axis::Y) * grid.h(Axis::Z);
    let v = out.get(i - 1, j - 1, k - 1) + amplitude / cell;
    out.set(i - 1, j - 1, k - 1, v);
    Ok(())
}

impl SourceTerm for RickerSource {
    fn add_interior(&self, grid: &Grid, t: f64, out: &mut Field3D) -> Result<()> {
        add_point_source(self, grid, ricker_amplitude(t, self), out)
    }

    fn add_dt_interior(&self, grid: &Grid, t: f64, out: &mut Field3D) -> Result<()> {
        add_point_source(self, grid, ricker_amplitude_dt(t, self), out)
    }

    fn boundary_value(&self, _: f64, _: f64, _: f64, _: f64) -> f64 {
        0.0
    }

    fn boundary_dt(&self, _: f64, _: f64, _: f64, _: f64) -> Result<f64> {
        Ok(0.0)
    }
}

/// Two-layer medium split at depth `z_interface` (inclusive in the
/// upper layer).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayeredVelocity {
    pub z_interface: f64,
    pub v_upper: f64,
    pub v_lower: f64,
}

impl LayeredVelocity {
    pub fn new(z_interface: f64, v_upper: f64, v_lower: f64) -> Result<Self> {
        if !(v_upper > 0.0 && v_lower > 0.0) {
            return Err(Error::InvalidArgument(
                "layer speeds must be positive".into(),
            ));
        }
        Ok(LayeredVelocity {
            z_interface,
            v_upper,
            v_lower,
        })
    }

    #[inline]
    pub fn at(&self, z: f64) -> f64 {
        if z <= self.z_interface {
            self.v_upper
        } else {
            self.v_lower
        }
    }
}

/// Sample a layered model on all nodes of `grid`.
pub fn layered_velocity(model: &LayeredVelocity, grid: &Grid) -> Result<VelocityModel> {
    let (z_lo, z_hi) = grid.domain().bounds(Axis::Z);
    if !(model.z_interface >= z_lo && model.z_interface <= z_hi) {
        return Err(Error::InvalidArgument(format!(
            "interface depth {} outside the domain [{z_lo}, {z_hi}]",
            model.z_interface
        )));
    }
    VelocityModel::from_fn(grid, |_, _, z| model.at(z))
}
