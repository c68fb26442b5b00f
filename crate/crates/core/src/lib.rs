//! Explicit compact fourth-order finite-difference solver for the 3D
//! acoustic wave equation `u_tt = v^2(x,y,z) Δu + s(t,x,y,z)` on a box
//! with Dirichlet boundaries.
//!
//! Spatial derivatives use a combined compact approximation: each
//! directional second derivative solves a tridiagonal Toeplitz system
//! along grid lines, with boundary values for the second derivatives
//! recovered from the equation itself. Time stepping is second-order
//! leapfrog, upgradeable to fourth order via Richardson extrapolation
//! or a classical RK4 on the first-order system.
//!
//! Module map:
//! - [`grid`]: box domain, structured grid, interior field storage,
//!   velocity models sampled on all nodes
//! - [`tridiag`]: Thomas solver and closed-form spectra for the
//!   symmetric tridiagonal Toeplitz matrices of the scheme
//! - [`compact`]: directional line solves, boundary closures, and the
//!   assembled compact Laplacian
//! - [`problem`]: problem descriptions (velocity, source, initial and
//!   boundary data) shared by the integrators
//! - [`time`]: leapfrog driver with ghost-level start, Richardson
//!   extrapolation, RK4
//! - [`stability`]: spectral bounds, CFL gate, discrete energy
//!   diagnostic
//! - [`physics`]: Ricker wavelet point source and layered velocity
//!   models

pub mod compact;
pub mod error;
pub mod grid;
pub mod physics;
pub mod problem;
pub mod stability;
pub mod time;
pub mod tridiag;

pub use compact::{
    boundary_closure, laplacian, sample_dirichlet, BoundaryClosure, CompactLaplacian,
    DirichletValues, FaceData, FaceFns, FaceId,
};
pub use error::{Error, Result};
pub use grid::{Axis, Domain, Field3D, Grid, VelocityModel};
pub use problem::{AnalyticSource, InitialData, ProblemSpec, SourceTerm, ZeroSource};
pub use stability::{cfl_check, cfl_limit, energy_functional, r_of_n, StabilityReport};
pub use time::{
    ghost_level, leapfrog_step, richardson_extrapolate, rk4_step, rk_boundary_values,
    run_leapfrog, run_rk4, CflPolicy, LeapfrogConfig, ObserverSlot, RkStageBoundaries, RkState,
    StepState,
};
pub use tridiag::{
    apply_toeplitz, thomas_solve, toeplitz_spectrum, SchemeCoefficients, ThomasFactor,
    TriDiagToeplitz,
};
