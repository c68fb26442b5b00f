//! Run orchestration: problem resolution, stability reporting,
//! integration, error tables, and snapshot output.

use crate::config::{
    Integrator, ProblemKind, RunConfig, SourceCfg, VelocityCfg,
};
use crate::experiments::{example1_spec, example2_spec, example3_spec};
use crate::report::{
    convergence_order, error_norms, write_convergence_csv, write_re_rk4_csv, write_run_csv,
    ErrorReport, ReRk4Row,
};
use crate::snapshot::{snapshot_slice, write_slice};
use acwave::grid::{Axis, Domain, Field3D, Grid};
use acwave::physics::{LayeredVelocity, RickerSource};
use acwave::problem::{InitialData, ProblemSpec, ZeroSource};
use acwave::stability::cfl_check;
use acwave::time::{
    richardson_extrapolate, run_leapfrog, run_rk4, LeapfrogConfig, ObserverSlot,
};
use acwave::compact::FaceData;
use std::cell::RefCell;
use std::fmt;
use std::path::{Path, PathBuf};

#[derive(Debug)]
pub enum HarnessError {
    Config(String),
    Solver(acwave::Error),
    Io(std::io::Error),
}

impl fmt::Display for HarnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HarnessError::Config(msg) => write!(f, "config error: {msg}"),
            HarnessError::Solver(e) => write!(f, "solver error: {e}"),
            HarnessError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for HarnessError {}

impl From<acwave::Error> for HarnessError {
    fn from(e: acwave::Error) -> Self {
        HarnessError::Solver(e)
    }
}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        HarnessError::Io(e)
    }
}

impl HarnessError {
    /// Process exit code: 2 config, 3 CFL abort, 4 instability, 1 other.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Solver(acwave::Error::CflExceeded { .. }) => 3,
            HarnessError::Solver(acwave::Error::Instability { .. }) => 4,
            _ => 1,
        }
    }
}

/// Outcome of a completed run.
#[derive(Debug)]
pub struct RunSummary {
    pub steps: usize,
    pub t_final: f64,
    pub max_abs: f64,
    pub outdir: PathBuf,
}

fn build_custom(cfg: &RunConfig) -> Result<ProblemSpec, HarnessError> {
    let c = cfg.custom.as_ref().expect("validated");
    let domain = Domain::new(
        (c.domain.x[0], c.domain.x[1]),
        (c.domain.y[0], c.domain.y[1]),
        (c.domain.z[0], c.domain.z[1]),
    )
    .map_err(|e| HarnessError::Config(e.to_string()))?;
    let velocity: Box<dyn Fn(f64, f64, f64) -> f64 + Send + Sync> = match c.velocity {
        VelocityCfg::Constant { value } => Box::new(move |_, _, _| value),
        VelocityCfg::Layered {
            z_interface,
            upper,
            lower,
        } => {
            let layered = LayeredVelocity::new(z_interface, upper, lower)?;
            Box::new(move |_, _, z| layered.at(z))
        }
    };
    let source: Box<dyn acwave::problem::SourceTerm> = match c.source {
        SourceCfg::None => Box::new(ZeroSource),
        SourceCfg::Ricker {
            f_p,
            delay,
            location,
        } => Box::new(RickerSource::new(f_p, delay, (location[0], location[1], location[2]))?),
    };
    let t_final = cfg
        .t_final
        .ok_or_else(|| HarnessError::Config("t_final is required for custom problems".into()))?;
    Ok(ProblemSpec {
        domain,
        default_n: [1, 1, 1], // resolution always comes from the config
        velocity,
        source,
        initial: InitialData::zero(),
        faces: FaceData::homogeneous(),
        t_final,
        exact: None,
    })
}

fn resolve(cfg: &RunConfig) -> Result<(ProblemSpec, Grid), HarnessError> {
    // problem/grid construction failures are bad configuration
    let as_config = |e: acwave::Error| HarnessError::Config(e.to_string());
    let spec = match cfg.problem {
        ProblemKind::Example1 => example1_spec(),
        ProblemKind::Example2 => example2_spec(),
        ProblemKind::Example3 => example3_spec(cfg.h).map_err(as_config)?.spec,
        ProblemKind::Custom => build_custom(cfg)?,
    };
    let grid = match (cfg.h, cfg.n) {
        (Some(h), None) => Grid::with_spacing(spec.domain, h).map_err(as_config)?,
        (None, Some(n)) => spec.grid_with(n).map_err(as_config)?,
        _ => unreachable!("config validation enforces exactly one"),
    };
    Ok((spec, grid))
}

/// Execute a configured run: write `stability.txt`, integrate, write
/// `table.csv` and any requested snapshot slices under `cfg.outdir`.
pub fn run(cfg: &RunConfig) -> Result<RunSummary, HarnessError> {
    let (spec, grid) = resolve(cfg)?;
    let t_final = cfg.t_final.unwrap_or(spec.t_final);
    let tau = cfg.tau;
    std::fs::create_dir_all(&cfg.outdir)?;

    let velocity = spec.velocity_model(&grid)?;
    let report = cfl_check(&velocity, tau, &grid);
    std::fs::write(cfg.outdir.join("stability.txt"), format!("{report}\n"))?;

    let lf_cfg = LeapfrogConfig {
        tau,
        t_final,
        cfl_policy: cfg.cfl_policy,
    };

    // snapshot observer; io failures surface after the run
    let snapshot_err: RefCell<Option<std::io::Error>> = RefCell::new(None);
    let mut observers = Vec::new();
    if cfg.snapshot_every > 0 && !cfg.slices.is_empty() {
        let slices = cfg.slices.clone();
        let outdir = cfg.outdir.clone();
        let spec_faces = &spec.faces;
        let grid_ref = &grid;
        let err_cell = &snapshot_err;
        observers.push(ObserverSlot::new(cfg.snapshot_every, move |_n, t, field| {
            if err_cell.borrow().is_some() {
                return;
            }
            for &(axis, index) in &slices {
                let result = snapshot_slice(field, spec_faces, grid_ref, axis, index, t)
                    .map_err(|e| std::io::Error::other(e.to_string()))
                    .and_then(|s| write_slice(&outdir, &s, grid_ref).map(|_| ()));
                if let Err(e) = result {
                    *err_cell.borrow_mut() = Some(e);
                    return;
                }
            }
        }));
    }

    let (final_field, final_t, steps) = match cfg.integrator {
        Integrator::Leapfrog => {
            let state = run_leapfrog(&spec, &grid, &lf_cfg, &mut observers)?;
            (state.u_curr, state.t, state.n)
        }
        Integrator::LeapfrogRe => {
            let coarse = run_leapfrog(&spec, &grid, &lf_cfg, &mut observers)?;
            let fine_cfg = LeapfrogConfig {
                tau: 0.5 * tau,
                ..lf_cfg
            };
            let fine = run_leapfrog(&spec, &grid, &fine_cfg, &mut [])?;
            let field = richardson_extrapolate(&coarse.u_curr, &fine.u_curr, 2)?;
            (field, coarse.t, coarse.n + fine.n)
        }
        Integrator::Rk4 => {
            let state = run_rk4(&spec, &grid, &lf_cfg, &mut observers)?;
            let n_full = (t_final / tau + 1e-9).floor() as usize;
            let partial = (t_final - n_full as f64 * tau) > tau * 1e-9;
            (state.u, state.t, n_full + usize::from(partial))
        }
    };
    drop(observers);
    if let Some(e) = snapshot_err.into_inner() {
        return Err(HarnessError::Io(e));
    }

    let h_report = grid.uniform_h().unwrap_or_else(|| grid.min_h());
    match &spec.exact {
        Some(exact) => {
            let (e_max, e_energy) = error_norms(&final_field, exact.as_ref(), &grid, final_t);
            write_convergence_csv(
                &cfg.outdir.join("table.csv"),
                &[ErrorReport {
                    h: h_report,
                    tau,
                    t: final_t,
                    e_max,
                    e_energy,
                    order_max: None,
                    order_energy: None,
                }],
            )?;
        }
        None => {
            write_run_csv(
                &cfg.outdir.join("table.csv"),
                h_report,
                tau,
                final_t,
                final_field.max_abs(),
            )?;
        }
    }

    Ok(RunSummary {
        steps,
        t_final: final_t,
        max_abs: final_field.max_abs(),
        outdir: cfg.outdir.clone(),
    })
}

/// Spacing-to-counts helper for the unit cube: `h = 1/(n+1)`.
fn unit_cube_grid(h: f64) -> Result<Grid, HarnessError> {
    Grid::with_spacing(Domain::unit_cube(), h).map_err(|e| HarnessError::Config(e.to_string()))
}

/// Sweep example 1 with `tau = h^2`; writes `table.csv` under `outdir`
/// and returns the rows.
pub fn convergence_example1(
    h_list: &[f64],
    t_final: f64,
    outdir: &Path,
) -> Result<Vec<ErrorReport>, HarnessError> {
    let spec = example1_spec();
    let mut rows: Vec<ErrorReport> = Vec::new();
    for &h in h_list {
        let grid = unit_cube_grid(h)?;
        let tau = h * h;
        // tau = h^2 puts the coarsest grid slightly above the Courant
        // bound (0.49 vs 0.471); the benchmark still converges, so warn
        // instead of aborting.
        let cfg = LeapfrogConfig {
            tau,
            t_final,
            cfl_policy: acwave::time::CflPolicy::Warn,
        };
        let state = run_leapfrog(&spec, &grid, &cfg, &mut [])?;
        let exact = spec.exact.as_ref().expect("example 1 has an exact solution");
        let (e_max, e_energy) = error_norms(&state.u_curr, exact.as_ref(), &grid, state.t);
        let (order_max, order_energy) = match rows.last() {
            Some(prev) => (
                Some(convergence_order(prev.e_max, e_max, prev.h, h)),
                Some(convergence_order(prev.e_energy, e_energy, prev.h, h)),
            ),
            None => (None, None),
        };
        rows.push(ErrorReport {
            h,
            tau,
            t: state.t,
            e_max,
            e_energy,
            order_max,
            order_energy,
        });
    }
    std::fs::create_dir_all(outdir)?;
    write_convergence_csv(&outdir.join("table.csv"), &rows)?;
    Ok(rows)
}

/// Sweep example 2 with `tau = h/10`, comparing Richardson
/// extrapolation (l = 2) against RK4 in the energy norm; writes
/// `table.csv` under `outdir` and returns the rows.
pub fn convergence_example2(
    h_list: &[f64],
    t_final: f64,
    outdir: &Path,
) -> Result<Vec<ReRk4Row>, HarnessError> {
    let spec = example2_spec();
    let exact = |t: f64, x: f64, y: f64, z: f64| crate::experiments::example2_exact(t, x, y, z);
    let mut rows: Vec<ReRk4Row> = Vec::new();
    for &h in h_list {
        let grid = unit_cube_grid(h)?;
        let tau = h / 10.0;
        let cfg = LeapfrogConfig {
            tau,
            t_final,
            cfl_policy: acwave::time::CflPolicy::Abort,
        };
        let coarse = run_leapfrog(&spec, &grid, &cfg, &mut [])?;
        let fine_cfg = LeapfrogConfig {
            tau: 0.5 * tau,
            ..cfg
        };
        let fine = run_leapfrog(&spec, &grid, &fine_cfg, &mut [])?;
        let re = richardson_extrapolate(&coarse.u_curr, &fine.u_curr, 2)?;
        let (_, e_re) = error_norms(&re, &exact, &grid, coarse.t);

        let rk = run_rk4(&spec, &grid, &cfg, &mut [])?;
        let (_, e_rk4) = error_norms(&rk.u, &exact, &grid, rk.t);

        let (order_re, order_rk4) = match rows.last() {
            Some(prev) => (
                Some(convergence_order(prev.e_re, e_re, prev.h, h)),
                Some(convergence_order(prev.e_rk4, e_rk4, prev.h, h)),
            ),
            None => (None, None),
        };
        rows.push(ReRk4Row {
            h,
            tau,
            e_re,
            e_rk4,
            order_re,
            order_rk4,
        });
    }
    std::fs::create_dir_all(outdir)?;
    write_re_rk4_csv(&outdir.join("table.csv"), &rows)?;
    Ok(rows)
}

/// Run a problem while watching for the first time the field exceeds
/// `rel_threshold` times the running peak at any node with
/// `z >= z_threshold`; returns that time, or `None` if it never
/// happens before `t_final`.
pub fn detect_first_arrival(
    spec: &ProblemSpec,
    grid: &Grid,
    tau: f64,
    t_final: f64,
    z_threshold: f64,
    rel_threshold: f64,
) -> Result<Option<f64>, HarnessError> {
    let [nx, ny, nz] = grid.dims();
    // interior k indices in the deep region
    let k_start = (0..nz)
        .find(|&k| grid.interior_coord(Axis::Z, k) >= z_threshold)
        .unwrap_or(nz);
    let arrival: RefCell<Option<f64>> = RefCell::new(None);
    let peak: RefCell<f64> = RefCell::new(0.0);
    {
        let mut observers = vec![ObserverSlot::new(1, |_n, t, field: &Field3D| {
            if arrival.borrow().is_some() {
                return;
            }
            let mut p = peak.borrow_mut();
            *p = p.max(field.max_abs());
            if *p == 0.0 {
                return;
            }
            let mut deep_max = 0.0f64;
            for k in k_start..nz {
                for j in 0..ny {
                    for i in 0..nx {
                        deep_max = deep_max.max(field.get(i, j, k).abs());
                    }
                }
            }
            if deep_max > rel_threshold * *p {
                *arrival.borrow_mut() = Some(t);
            }
        })];
        let cfg = LeapfrogConfig {
            tau,
            t_final,
            cfl_policy: acwave::time::CflPolicy::Abort,
        };
        run_leapfrog(spec, grid, &cfg, &mut observers)?;
    }
    Ok(arrival.into_inner())
}
