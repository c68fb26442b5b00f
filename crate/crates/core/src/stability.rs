//! Spectral bounds, CFL gate, and the discrete energy functional of the
//! scheme.
//!
//! On an isotropic grid the composite spatial operator
//! `L = A^{-1}B (x) + A^{-1}B (y) + A^{-1}B (z)` is self-adjoint with
//! spectrum in `(-18, -3 r(N)]`, which yields the Courant bound
//! `max v tau / h < sqrt(2)/3`. `L` is never materialized; it is
//! applied matrix-free through the directional sweeps with zero
//! boundary data, scaled by `h^2`.

use crate::compact::CompactLaplacian;
use crate::error::{Error, Result};
use crate::grid::{Field3D, Grid, VelocityModel};
use crate::tridiag::SchemeCoefficients;
use std::f64::consts::PI;
use std::fmt;

/// Courant stability limit `sqrt(2)/3`.
pub fn cfl_limit() -> f64 {
    2.0f64.sqrt() / 3.0
}

/// Lower spectral bound factor
/// `r(N) = (1 + cos(pi/(N+1))/5)^{-1} (12/5)(1 - cos(pi/(N+1)))`,
/// strictly decreasing from `r(1) = 2.4` towards 0.
pub fn r_of_n(n: usize) -> f64 {
    assert!(n >= 1, "r_of_n: N must be >= 1");
    let c = (PI / (n as f64 + 1.0)).cos();
    (12.0 / 5.0) * (1.0 - c) / (1.0 + c / 5.0)
}

/// Outcome of the CFL gate plus the coercivity bounds entering it.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    /// Largest interior node count across the axes (the bound uses the
    /// most pessimistic direction).
    pub n_effective: usize,
    pub r_n: f64,
    /// Coercivity lower bound `m = 3 r(N)`.
    pub m: f64,
    /// Coercivity upper bound `M = 18`.
    pub big_m: f64,
    pub cfl_limit: f64,
    /// `max v * tau / h` over the grid (minimum spacing on anisotropic
    /// grids, a conservative extension of the isotropic bound).
    pub courant: f64,
    pub pass: bool,
    pub margin: f64,
}

impl fmt::Display for StabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n_effective = {}", self.n_effective)?;
        writeln!(f, "r_n = {:.15e}", self.r_n)?;
        writeln!(f, "m = {:.15e}", self.m)?;
        writeln!(f, "M = {:.15e}", self.big_m)?;
        writeln!(f, "cfl_limit = {:.15e}", self.cfl_limit)?;
        writeln!(f, "courant = {:.15e}", self.courant)?;
        writeln!(f, "margin = {:.15e}", self.margin)?;
        write!(f, "pass = {}", self.pass)
    }
}

/// Evaluate the Courant number `max v tau / h` against the limit.
pub fn cfl_check(velocity: &VelocityModel, tau: f64, grid: &Grid) -> StabilityReport {
    let n_effective = grid.dims().into_iter().max().unwrap();
    let r_n = r_of_n(n_effective);
    let limit = cfl_limit();
    let courant = velocity.max() * tau / grid.min_h();
    StabilityReport {
        n_effective,
        r_n,
        m: 3.0 * r_n,
        big_m: 18.0,
        cfl_limit: limit,
        courant,
        pass: courant < limit,
        margin: limit - courant,
    }
}

/// Discrete energy functional
/// `R = <Phi o G, G> + <L G, G>/4 - <L (u + u'), (u + u')>/4` with
/// `G = u - u'` and `Phi = h^2 / (tau^2 v^2)`.
///
/// The homogeneous leapfrog scheme (zero Dirichlet data, zero source)
/// conserves `R` exactly; the identity does not apply to problems with
/// boundary forcing. Requires an isotropic grid.
pub fn energy_functional(
    u_curr: &Field3D,
    u_prev: &Field3D,
    velocity: &VelocityModel,
    tau: f64,
    grid: &Grid,
) -> Result<f64> {
    if !u_curr.same_dims(u_prev) || u_curr.dims() != grid.dims() {
        return Err(Error::DimensionMismatch {
            expected: grid.dims().to_vec(),
            got: u_curr.dims().to_vec(),
        });
    }
    let h = grid.uniform_h().ok_or_else(|| {
        Error::InvalidArgument("energy functional requires an isotropic grid".into())
    })?;
    if !(tau > 0.0) {
        return Err(Error::InvalidArgument(format!("tau must be positive, got {tau}")));
    }

    let [nx, ny, nz] = grid.dims();
    let mut gamma = Field3D::zeros(grid);
    let mut sum = Field3D::zeros(grid);
    for (idx, (g, s)) in gamma
        .as_mut_slice()
        .iter_mut()
        .zip(sum.as_mut_slice().iter_mut())
        .enumerate()
    {
        let a = u_curr.as_slice()[idx];
        let b = u_prev.as_slice()[idx];
        *g = a - b;
        *s = a + b;
    }

    let mut lap = CompactLaplacian::new(grid, SchemeCoefficients::default());
    let mut l_gamma = Field3D::zeros(grid);
    lap.apply_homogeneous(&gamma, &mut l_gamma);
    let mut l_sum = Field3D::zeros(grid);
    lap.apply_homogeneous(&sum, &mut l_sum);

    let h2 = h * h;
    let inv_tau2 = 1.0 / (tau * tau);
    let mut r = 0.0;
    let mut idx = 0;
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let phi = h2 * inv_tau2 / velocity.sq_at(i + 1, j + 1, k + 1);
                let g = gamma.as_slice()[idx];
                let s = sum.as_slice()[idx];
                // L scaled by h^2 turns the Laplacian back into A^{-1}B sums
                r += phi * g * g + 0.25 * h2 * (l_gamma.as_slice()[idx] * g - l_sum.as_slice()[idx] * s);
                idx += 1;
            }
        }
    }
    Ok(r)
}
