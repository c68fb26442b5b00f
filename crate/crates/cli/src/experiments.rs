//! Built-in benchmark problems.
//!
//! `example1`: manufactured exponential solution with smoothly varying
//! velocity; verifies the combined second-order-in-time,
//! fourth-order-in-space accuracy with `tau = h^2`.
//!
//! `example2`: manufactured separable solution with homogeneous
//! Dirichlet walls and velocity `1 + xyz`; the testbed for Richardson
//! extrapolation and RK4 in the `tau = h/10` regime.
//!
//! `example3`: seismic two-layer medium driven by a Ricker wavelet
//! point source, reflecting Dirichlet walls.

use acwave::compact::{FaceData, FaceFns};
use acwave::grid::{Axis, Domain};
use acwave::physics::{LayeredVelocity, RickerSource};
use acwave::problem::{AnalyticSource, InitialData, ProblemSpec};
use acwave::Result;
use std::f64::consts::PI;

/// Exact solution of example 1: `u = e^{2t} e^{x+2y+3z}`.
pub fn example1_exact(t: f64, x: f64, y: f64, z: f64) -> f64 {
    (2.0 * t).exp() * (x + 2.0 * y + 3.0 * z).exp()
}

/// Squared velocity of example 1.
pub fn example1_nu_sq(x: f64, y: f64, z: f64) -> f64 {
    1.0 / ((x - 0.5) * (y - 0.5) * (z - 0.5) + 1.0 / 6.0)
}

fn example1_faces() -> FaceData {
    let face = |fixed: Axis, at: f64| -> FaceFns {
        // tangential second-derivative factors of e^{x+2y+3z}
        let (fa, fb) = match fixed {
            Axis::X => (4.0, 9.0),
            Axis::Y => (1.0, 9.0),
            Axis::Z => (1.0, 4.0),
        };
        let value = move |t: f64, a: f64, b: f64| match fixed {
            Axis::X => example1_exact(t, at, a, b),
            Axis::Y => example1_exact(t, a, at, b),
            Axis::Z => example1_exact(t, a, b, at),
        };
        FaceFns::new(
            Box::new(value),
            Box::new(move |t, a, b| 4.0 * value(t, a, b)),
            Box::new(move |t, a, b| fa * value(t, a, b)),
            Box::new(move |t, a, b| fb * value(t, a, b)),
        )
        .with_time_derivatives(
            Box::new(move |t, a, b| 2.0 * value(t, a, b)),
            Box::new(move |t, a, b| 8.0 * value(t, a, b)),
            Box::new(move |t, a, b| 2.0 * (fa + fb) * value(t, a, b)),
        )
    };
    FaceData::new(
        face(Axis::X, 0.0),
        face(Axis::X, 1.0),
        face(Axis::Y, 0.0),
        face(Axis::Y, 1.0),
        face(Axis::Z, 0.0),
        face(Axis::Z, 1.0),
    )
}

/// Manufactured exponential problem on the unit cube, `T = 1`.
pub fn example1_spec() -> ProblemSpec {
    let s = |t: f64, x: f64, y: f64, z: f64| {
        (4.0 - 14.0 * example1_nu_sq(x, y, z)) * example1_exact(t, x, y, z)
    };
    ProblemSpec {
        domain: Domain::unit_cube(),
        default_n: [9, 9, 9],
        velocity: Box::new(|x, y, z| example1_nu_sq(x, y, z).sqrt()),
        source: Box::new(AnalyticSource::new(
            Box::new(s),
            Some(Box::new(move |t, x, y, z| 2.0 * s(t, x, y, z))),
        )),
        initial: InitialData {
            alpha: Box::new(|x, y, z| example1_exact(0.0, x, y, z)),
            beta: Box::new(|x, y, z| 2.0 * example1_exact(0.0, x, y, z)),
            lap_alpha: Some(Box::new(|x, y, z| 14.0 * example1_exact(0.0, x, y, z))),
            lap_beta: Some(Box::new(|x, y, z| 28.0 * example1_exact(0.0, x, y, z))),
        },
        faces: example1_faces(),
        t_final: 1.0,
        exact: Some(Box::new(example1_exact)),
    }
}

/// Exact solution of example 2:
/// `u = e^{pi t} sin(pi x) sin(pi y) sin(pi z)`.
pub fn example2_exact(t: f64, x: f64, y: f64, z: f64) -> f64 {
    (PI * t).exp() * (PI * x).sin() * (PI * y).sin() * (PI * z).sin()
}

/// Separable problem with `v^2 = 1 + xyz` and zero Dirichlet walls,
/// `T = 1`.
pub fn example2_spec() -> ProblemSpec {
    let s = |t: f64, x: f64, y: f64, z: f64| {
        (4.0 + 3.0 * x * y * z) * PI * PI * example2_exact(t, x, y, z)
    };
    ProblemSpec {
        domain: Domain::unit_cube(),
        default_n: [9, 9, 9],
        velocity: Box::new(|x, y, z| (1.0 + x * y * z).sqrt()),
        source: Box::new(AnalyticSource::new(
            Box::new(s),
            Some(Box::new(move |t, x, y, z| PI * s(t, x, y, z))),
        )),
        initial: InitialData {
            alpha: Box::new(|x, y, z| example2_exact(0.0, x, y, z)),
            beta: Box::new(|x, y, z| PI * example2_exact(0.0, x, y, z)),
            lap_alpha: Some(Box::new(|x, y, z| {
                -3.0 * PI * PI * example2_exact(0.0, x, y, z)
            })),
            lap_beta: Some(Box::new(|x, y, z| {
                -3.0 * PI * PI * PI * example2_exact(0.0, x, y, z)
            })),
        },
        faces: FaceData::homogeneous(),
        t_final: 1.0,
        exact: Some(Box::new(example2_exact)),
    }
}

/// Seismic box of example 3.
pub const EX3_X_MAX: f64 = 1200.0;
pub const EX3_Y_MAX: f64 = 1200.0;
pub const EX3_Z_MAX: f64 = 1350.0;
/// Depth of the soil/rock interface.
pub const EX3_INTERFACE: f64 = 879.75;
pub const EX3_V_UPPER: f64 = 1200.0;
pub const EX3_V_LOWER: f64 = 2500.0;
pub const EX3_SOURCE: (f64, f64, f64) = (600.0, 600.0, 600.0);
pub const EX3_F_P: f64 = 10.0;
pub const EX3_D_R: f64 = 0.05;
/// Reference spacing and time step of the production run.
pub const EX3_H: f64 = 5.0;
pub const EX3_TAU: f64 = 0.0005;
/// Straight-ray arrival time of the direct wave at the interface:
/// `(879.75 - 600) / 1200`.
pub const EX3_FIRST_ARRIVAL: f64 = 279.75 / 1200.0;

/// Example-3 problem plus the spacing/step pair it was scaled for.
pub struct Example3 {
    pub spec: ProblemSpec,
    pub h: f64,
    pub tau: f64,
}

/// Two-layer Ricker-source problem. `h_override` rescales the grid;
/// the time step scales proportionally so the Courant number stays at
/// the production value 0.25.
pub fn example3_spec(h_override: Option<f64>) -> Result<Example3> {
    let h = h_override.unwrap_or(EX3_H);
    let tau = EX3_TAU * h / EX3_H;
    let domain = Domain::new((0.0, EX3_X_MAX), (0.0, EX3_Y_MAX), (0.0, EX3_Z_MAX))?;
    // validates that h divides the box
    let grid = acwave::grid::Grid::with_spacing(domain, h)?;
    let layered = LayeredVelocity::new(EX3_INTERFACE, EX3_V_UPPER, EX3_V_LOWER)?;
    let source = RickerSource::new(EX3_F_P, EX3_D_R, EX3_SOURCE)?;
    let spec = ProblemSpec {
        domain,
        default_n: grid.dims(),
        velocity: Box::new(move |_, _, z| layered.at(z)),
        source: Box::new(source),
        initial: InitialData::zero(),
        faces: FaceData::homogeneous(),
        t_final: 0.7,
        exact: None,
    };
    Ok(Example3 { spec, h, tau })
}

#[cfg(test)]
mod tests {
    use super::*;
    use acwave::grid::Field3D;
    use acwave::stability::cfl_check;

    #[test]
    fn example1_values() {
        assert_eq!(example1_exact(0.0, 0.0, 0.0, 0.0), 1.0);
        assert!((example1_nu_sq(0.5, 0.5, 0.5) - 6.0).abs() < 1e-15);
        // Laplacian of the initial data is 14 alpha
        let spec = example1_spec();
        let a = (spec.initial.alpha)(0.3, 0.7, 0.2);
        let la = spec.initial.lap_alpha.as_ref().unwrap()(0.3, 0.7, 0.2);
        assert!((la - 14.0 * a).abs() < 1e-12 * la.abs());
    }

    #[test]
    fn example2_values() {
        let spec = example2_spec();
        // walls are zero, and so are all RK4 stage boundary values
        let grid = spec.grid().unwrap();
        let dv = acwave::compact::sample_dirichlet(&spec.faces, &grid, 0.37);
        let v = spec.velocity_model(&grid).unwrap();
        let stages =
            acwave::time::rk_boundary_values(&spec.faces, spec.source.as_ref(), &v, &grid, 0.37, 0.01)
                .unwrap();
        for face in acwave::compact::FaceId::ALL {
            for &x in dv.slab(face) {
                assert_eq!(x, 0.0);
            }
            for &x in stages.k21_dirichlet.slab(face) {
                assert_eq!(x, 0.0);
            }
            for &x in stages.k31_dirichlet.slab(face) {
                assert_eq!(x, 0.0);
            }
            for &x in stages.k11_closure.slab(face) {
                assert_eq!(x, 0.0);
            }
        }
        // u_t(0) = pi u(0)
        let u0 = example2_exact(0.0, 0.3, 0.4, 0.5);
        let b = (spec.initial.beta)(0.3, 0.4, 0.5);
        assert!((b - PI * u0).abs() < 1e-14);
        // source at the center at t = 0: (4 + 3/8) pi^2
        let s_expect = 4.375 * PI * PI;
        let mut field = Field3D::zeros(&grid);
        spec.source.add_interior(&grid, 0.0, &mut field).unwrap();
        // center of the 9^3 grid is node (4,4,4) at (0.5,0.5,0.5)
        assert!((field.get(4, 4, 4) - s_expect).abs() < 1e-12 * s_expect);
    }

    #[test]
    fn example3_parameters() {
        let ex = example3_spec(None).unwrap();
        assert_eq!(ex.h, 5.0);
        assert_eq!(ex.tau, 0.0005);
        let grid = ex.spec.grid().unwrap();
        assert_eq!(grid.dims(), [239, 239, 269]);
        assert!((EX3_FIRST_ARRIVAL - 0.233125).abs() < 1e-15);

        let desk = example3_spec(Some(15.0)).unwrap();
        assert!((desk.tau - 0.0015).abs() < 1e-18);
        let grid = desk.spec.grid().unwrap();
        assert_eq!(grid.dims(), [79, 79, 89]);
        let v = desk.spec.velocity_model(&grid).unwrap();
        let rep = cfl_check(&v, desk.tau, &grid);
        assert!((rep.courant - 0.25).abs() < 1e-12);
        assert!(rep.pass);
    }
}
