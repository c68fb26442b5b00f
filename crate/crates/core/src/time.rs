//! Time integration: leapfrog with ghost-level start, Richardson
//! extrapolation of final fields, and a classical RK4 on the
//! first-order system `u_t = v`, `v_t = v^2 Δu + s`.
//!
//! The two-level leapfrog needs the solution at the ghost level
//! `t = -tau`, approximated to O(tau^4) from the initial data and the
//! equation. Boundary closures are recomputed every step. Each RK4
//! stage Laplacian uses the same compact operator, with stage boundary
//! values assembled from the time-differentiated face data.

use crate::compact::{
    boundary_closure, boundary_closure_dt, sample_dirichlet, BoundaryClosure, CompactLaplacian,
    DirichletValues, FaceData, FaceId, FaceSet, for_each_face_node,
};
use crate::error::{Error, Result};
use crate::grid::{Field3D, Grid, VelocityModel};
use crate::problem::{ProblemSpec, SourceTerm};
use crate::stability::cfl_check;
use crate::tridiag::SchemeCoefficients;

/// Leapfrog pair `(u^n, u^{n-1})` with current time and step size.
#[derive(Debug, Clone)]
pub struct StepState {
    pub u_curr: Field3D,
    pub u_prev: Field3D,
    pub t: f64,
    pub tau: f64,
    pub n: usize,
}

/// What to do when the Courant number violates the stability limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CflPolicy {
    Abort,
    Warn,
}

#[derive(Debug, Clone, Copy)]
pub struct LeapfrogConfig {
    pub tau: f64,
    pub t_final: f64,
    pub cfl_policy: CflPolicy,
}

/// Observer invoked with `(n, t_n, field)` whenever `n % every == 0`,
/// including the initial state at `n = 0`.
pub struct ObserverSlot<'a> {
    every: usize,
    f: Box<dyn FnMut(usize, f64, &Field3D) + 'a>,
}

impl<'a> ObserverSlot<'a> {
    pub fn new(every: usize, f: impl FnMut(usize, f64, &Field3D) + 'a) -> Self {
        assert!(every >= 1, "observer cadence must be >= 1");
        ObserverSlot {
            every,
            f: Box::new(f),
        }
    }
}

fn notify(observers: &mut [ObserverSlot], n: usize, t: f64, u: &Field3D) {
    for slot in observers.iter_mut() {
        if n % slot.every == 0 {
            (slot.f)(n, t, u);
        }
    }
}

/// Ghost-level field
/// `u^{-1} = a - tau b + tau^2/2 (v^2 Δa + s^0) - tau^3/6 (v^2 Δb + d_t s^0)`.
///
/// Analytic Laplacian callbacks are preferred; otherwise the compact
/// operator with closures at `t = 0` stands in, which keeps the O(tau^4)
/// truncation once the spatial resolution is adequate.
pub fn ghost_level(
    spec: &ProblemSpec,
    grid: &Grid,
    velocity: &VelocityModel,
    tau: f64,
) -> Result<Field3D> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidArgument(format!("tau must be positive, got {tau}")));
    }
    let alpha = Field3D::sample(grid, &spec.initial.alpha)?;
    let beta = Field3D::sample(grid, &spec.initial.beta)?;

    let lap_alpha = match &spec.initial.lap_alpha {
        Some(f) => Field3D::sample(grid, f)?,
        None => {
            let dv = sample_dirichlet(&spec.faces, grid, 0.0);
            let qc = boundary_closure(&spec.faces, velocity, spec.source.as_ref(), grid, 0.0);
            let mut lap = CompactLaplacian::new(grid, SchemeCoefficients::default());
            let mut out = Field3D::zeros(grid);
            lap.apply(&alpha, &dv, &qc, &mut out);
            out
        }
    };
    let lap_beta = match &spec.initial.lap_beta {
        Some(f) => Field3D::sample(grid, f)?,
        None => {
            let dv = sample_dirichlet_dt(&spec.faces, grid, 0.0)?;
            let qc = boundary_closure_dt(&spec.faces, velocity, spec.source.as_ref(), grid, 0.0)?;
            let mut lap = CompactLaplacian::new(grid, SchemeCoefficients::default());
            let mut out = Field3D::zeros(grid);
            lap.apply(&beta, &dv, &qc, &mut out);
            out
        }
    };

    let mut s0 = Field3D::zeros(grid);
    spec.source.add_interior(grid, 0.0, &mut s0)?;
    let mut ds0 = Field3D::zeros(grid);
    spec.source.add_dt_interior(grid, 0.0, &mut ds0)?;

    let nu_sq = velocity.sq_interior();
    let mut out = Field3D::zeros(grid);
    let half_t2 = 0.5 * tau * tau;
    let sixth_t3 = tau * tau * tau / 6.0;
    for (idx, o) in out.as_mut_slice().iter_mut().enumerate() {
        let utt = nu_sq.as_slice()[idx] * lap_alpha.as_slice()[idx] + s0.as_slice()[idx];
        let uttt = nu_sq.as_slice()[idx] * lap_beta.as_slice()[idx] + ds0.as_slice()[idx];
        *o = alpha.as_slice()[idx] - tau * beta.as_slice()[idx] + half_t2 * utt - sixth_t3 * uttt;
    }
    Ok(out)
}

/// Dirichlet traces of `u_t` (the faces' `dt` callbacks) at time `t`.
pub fn sample_dirichlet_dt(faces: &FaceData, grid: &Grid, t: f64) -> Result<DirichletValues> {
    let mut set = FaceSet::zeros(grid);
    for face in FaceId::ALL {
        let dt = faces
            .face(face)
            .dt
            .as_ref()
            .ok_or(Error::MissingDerivative("face first time derivative (dt)"))?;
        let slab = set.slab_mut(face);
        for_each_face_node(grid, face, |idx, a, b, _, _| {
            slab[idx] = dt(t, a, b);
        });
    }
    Ok(DirichletValues(set))
}

fn leapfrog_kernel(
    next: &mut Field3D,
    curr: &Field3D,
    prev: &Field3D,
    delta: &Field3D,
    nu_sq: &Field3D,
    source: &Field3D,
    tau: f64,
) {
    let t2 = tau * tau;
    let n = next.len();
    assert!(
        curr.len() == n && prev.len() == n && delta.len() == n && nu_sq.len() == n && source.len() == n,
        "leapfrog: field dimensions do not match"
    );
    let next = next.as_mut_slice();
    let (curr, prev) = (curr.as_slice(), prev.as_slice());
    let (delta, nu_sq, source) = (delta.as_slice(), nu_sq.as_slice(), source.as_slice());
    for i in 0..n {
        next[i] = t2 * (nu_sq[i] * delta[i] + source[i]) + 2.0 * curr[i] - prev[i];
    }
}

/// One leapfrog step
/// `u^{n+1} = tau^2 (v^2 Δu^n + s^n) + 2 u^n - u^{n-1}`,
/// returning the rotated state.
pub fn leapfrog_step(
    state: &StepState,
    delta_u: &Field3D,
    nu_sq: &Field3D,
    source_n: &Field3D,
) -> StepState {
    let mut next = Field3D::zeros_dims(state.u_curr.dims());
    leapfrog_kernel(
        &mut next,
        &state.u_curr,
        &state.u_prev,
        delta_u,
        nu_sq,
        source_n,
        state.tau,
    );
    StepState {
        u_prev: state.u_curr.clone(),
        u_curr: next,
        t: state.t + state.tau,
        tau: state.tau,
        n: state.n + 1,
    }
}

/// Run the leapfrog scheme from `t = 0` to `cfg.t_final`.
///
/// Boundary closures are recomputed every step. If the final time is
/// not an integer multiple of `tau`, the trailing remainder is covered
/// by a Taylor completion built from the equation (the returned state's
/// `tau` then reflects the shortened final spacing).
pub fn run_leapfrog(
    spec: &ProblemSpec,
    grid: &Grid,
    cfg: &LeapfrogConfig,
    observers: &mut [ObserverSlot],
) -> Result<StepState> {
    if !(cfg.tau > 0.0 && cfg.tau.is_finite()) {
        return Err(Error::InvalidArgument(format!("tau must be positive, got {}", cfg.tau)));
    }
    if !(cfg.t_final >= 0.0 && cfg.t_final.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "final time must be non-negative, got {}",
            cfg.t_final
        )));
    }

    let velocity = spec.velocity_model(grid)?;
    let report = cfl_check(&velocity, cfg.tau, grid);
    if !report.pass {
        match cfg.cfl_policy {
            CflPolicy::Abort => {
                return Err(Error::CflExceeded {
                    courant: report.courant,
                    limit: report.cfl_limit,
                })
            }
            CflPolicy::Warn => eprintln!(
                "warning: Courant number {:.4} exceeds the stability limit {:.4}",
                report.courant, report.cfl_limit
            ),
        }
    }

    let nu_sq = velocity.sq_interior();
    let u0 = Field3D::sample(grid, &spec.initial.alpha)?;
    let ghost = ghost_level(spec, grid, &velocity, cfg.tau)?;
    let mut state = StepState {
        u_curr: u0,
        u_prev: ghost,
        t: 0.0,
        tau: cfg.tau,
        n: 0,
    };
    notify(observers, 0, 0.0, &state.u_curr);

    let tau = cfg.tau;
    let n_full = (cfg.t_final / tau + 1e-9).floor() as usize;
    let remainder = cfg.t_final - n_full as f64 * tau;
    let do_partial = remainder > tau * 1e-9;

    let mut lap = CompactLaplacian::new(grid, SchemeCoefficients::default());
    let mut delta = Field3D::zeros(grid);
    let mut s_buf = Field3D::zeros(grid);
    let mut next = Field3D::zeros(grid);

    for n in 0..n_full {
        let t_n = n as f64 * tau;
        let dv = sample_dirichlet(&spec.faces, grid, t_n);
        let qc = boundary_closure(&spec.faces, &velocity, spec.source.as_ref(), grid, t_n);
        lap.apply(&state.u_curr, &dv, &qc, &mut delta);
        s_buf.fill(0.0);
        spec.source.add_interior(grid, t_n, &mut s_buf)?;
        leapfrog_kernel(&mut next, &state.u_curr, &state.u_prev, &delta, &nu_sq, &s_buf, tau);
        std::mem::swap(&mut state.u_prev, &mut state.u_curr);
        std::mem::swap(&mut state.u_curr, &mut next);
        state.n = n + 1;
        state.t = (n + 1) as f64 * tau;
        if !state.u_curr.all_finite() {
            return Err(Error::Instability {
                step: state.n,
                time: state.t,
            });
        }
        notify(observers, state.n, state.t, &state.u_curr);
    }

    if do_partial {
        let t_n = state.t;
        let dv = sample_dirichlet(&spec.faces, grid, t_n);
        let qc = boundary_closure(&spec.faces, &velocity, spec.source.as_ref(), grid, t_n);
        lap.apply(&state.u_curr, &dv, &qc, &mut delta);
        s_buf.fill(0.0);
        spec.source.add_interior(grid, t_n, &mut s_buf)?;
        let tp = remainder;
        {
            let next = next.as_mut_slice();
            let curr = state.u_curr.as_slice();
            let prev = state.u_prev.as_slice();
            for i in 0..curr.len() {
                let acc = nu_sq.as_slice()[i] * delta.as_slice()[i] + s_buf.as_slice()[i];
                // u_t from the backward pair plus the equation's curvature
                let ut = (curr[i] - prev[i]) / tau + 0.5 * tau * acc;
                next[i] = curr[i] + tp * ut + 0.5 * tp * tp * acc;
            }
        }
        std::mem::swap(&mut state.u_prev, &mut state.u_curr);
        std::mem::swap(&mut state.u_curr, &mut next);
        state.n += 1;
        state.t = cfg.t_final;
        state.tau = tp;
        if !state.u_curr.all_finite() {
            return Err(Error::Instability {
                step: state.n,
                time: state.t,
            });
        }
        notify(observers, state.n, state.t, &state.u_curr);
    }

    Ok(state)
}

/// Richardson extrapolation `(2^l fine - coarse) / (2^l - 1)` of two
/// runs at steps `tau` and `tau/2` on the same grid and final time.
///
/// `l = 2` cancels the leading temporal error of the leapfrog scheme;
/// larger `l` is accepted but experimental for this base scheme.
pub fn richardson_extrapolate(coarse: &Field3D, fine: &Field3D, l: u32) -> Result<Field3D> {
    if !coarse.same_dims(fine) {
        return Err(Error::DimensionMismatch {
            expected: coarse.dims().to_vec(),
            got: fine.dims().to_vec(),
        });
    }
    if l < 2 {
        return Err(Error::InvalidArgument(format!(
            "extrapolation order must be >= 2, got {l}"
        )));
    }
    let w = (1u64 << l) as f64;
    let mut out = Field3D::zeros_dims(coarse.dims());
    for (o, (f, c)) in out
        .as_mut_slice()
        .iter_mut()
        .zip(fine.as_slice().iter().zip(coarse.as_slice()))
    {
        *o = (w * f - c) / (w - 1.0);
    }
    Ok(out)
}

/// First-order-system state `(u, u_t)` for RK4.
#[derive(Debug, Clone)]
pub struct RkState {
    pub u: Field3D,
    pub u_t: Field3D,
    pub t: f64,
}

/// Per-step boundary data for the RK4 stage Laplacians.
///
/// Dirichlet traces follow the stage chain exactly:
/// `K11 = d_t F`, `K12 = d_tt F`, `K21 = K11 + tau/2 K12`,
/// `K22 = (d_tt F - s) + tau/2 (d_ttt F - d_t s) + s(t + tau/2)`,
/// `K31 = K11 + tau/2 K22`, and `v^2 ΔK11 = d_ttt F - d_t s` on each
/// face. The second-normal-derivative closures for the stage-2/3
/// solves reuse the `u_t` closure evaluated at the stage-consistent
/// midpoint time.
pub struct RkStageBoundaries {
    pub k11_dirichlet: DirichletValues,
    pub k12_trace: DirichletValues,
    pub k21_dirichlet: DirichletValues,
    pub k22_trace: DirichletValues,
    pub k31_dirichlet: DirichletValues,
    /// Face values of `v^2 ΔK11`.
    pub nu2_lap_k11: FaceSet,
    /// Closure for the `ΔK11` solve, exact at `t_n`.
    pub k11_closure: BoundaryClosure,
    /// Closure for the `ΔK21`/`ΔK31` solves, evaluated at `t_n + tau/2`.
    pub mid_closure: BoundaryClosure,
}

/// Assemble the stage boundary values for one RK4 step at `t_n`.
///
/// Requires the faces' `dt`, `dttt` and `dt_lap_tan` callbacks and the
/// source's boundary time derivative.
pub fn rk_boundary_values(
    faces: &FaceData,
    source: &dyn SourceTerm,
    velocity: &VelocityModel,
    grid: &Grid,
    t_n: f64,
    tau: f64,
) -> Result<RkStageBoundaries> {
    let mut k11 = FaceSet::zeros(grid);
    let mut k12 = FaceSet::zeros(grid);
    let mut k21 = FaceSet::zeros(grid);
    let mut k22 = FaceSet::zeros(grid);
    let mut k31 = FaceSet::zeros(grid);
    let mut nu2_lap_k11 = FaceSet::zeros(grid);

    for face in FaceId::ALL {
        let fns = faces.face(face);
        let dt = fns
            .dt
            .as_ref()
            .ok_or(Error::MissingDerivative("face first time derivative (dt)"))?;
        let dttt = fns
            .dttt
            .as_ref()
            .ok_or(Error::MissingDerivative("face third time derivative (dttt)"))?;
        let mut err = None;
        let s11 = k11.slab_mut(face);
        let s12 = k12.slab_mut(face);
        let s21 = k21.slab_mut(face);
        let s22 = k22.slab_mut(face);
        let s31 = k31.slab_mut(face);
        let slap = nu2_lap_k11.slab_mut(face);
        for_each_face_node(grid, face, |idx, a, b, (x, y, z), _| {
            if err.is_some() {
                return;
            }
            let v_dt = dt(t_n, a, b);
            let v_dtt = (fns.dtt)(t_n, a, b);
            let v_dttt = dttt(t_n, a, b);
            let s_n = source.boundary_value(t_n, x, y, z);
            let s_mid = source.boundary_value(t_n + 0.5 * tau, x, y, z);
            let ds_n = match source.boundary_dt(t_n, x, y, z) {
                Ok(v) => v,
                Err(e) => {
                    err = Some(e);
                    return;
                }
            };
            s11[idx] = v_dt;
            s12[idx] = v_dtt;
            s21[idx] = v_dt + 0.5 * tau * v_dtt;
            let lap_k11 = v_dttt - ds_n;
            slap[idx] = lap_k11;
            let k22_v = (v_dtt - s_n) + 0.5 * tau * lap_k11 + s_mid;
            s22[idx] = k22_v;
            s31[idx] = v_dt + 0.5 * tau * k22_v;
        });
        if let Some(e) = err {
            return Err(e);
        }
    }

    let k11_closure = boundary_closure_dt(faces, velocity, source, grid, t_n)?;
    let mid_closure = boundary_closure_dt(faces, velocity, source, grid, t_n + 0.5 * tau)?;

    Ok(RkStageBoundaries {
        k11_dirichlet: DirichletValues(k11),
        k12_trace: DirichletValues(k12),
        k21_dirichlet: DirichletValues(k21),
        k22_trace: DirichletValues(k22),
        k31_dirichlet: DirichletValues(k31),
        nu2_lap_k11,
        k11_closure,
        mid_closure,
    })
}

/// Reusable buffers for [`rk4_step`].
pub struct Rk4Workspace {
    lap: CompactLaplacian,
    delta_u: Field3D,
    delta_stage: Field3D,
    k1v: Field3D,
    k2u: Field3D,
    k2v: Field3D,
    k3u: Field3D,
    k3v: Field3D,
    s_buf: Field3D,
}

impl Rk4Workspace {
    pub fn new(grid: &Grid) -> Self {
        Rk4Workspace {
            lap: CompactLaplacian::new(grid, SchemeCoefficients::default()),
            delta_u: Field3D::zeros(grid),
            delta_stage: Field3D::zeros(grid),
            k1v: Field3D::zeros(grid),
            k2u: Field3D::zeros(grid),
            k2v: Field3D::zeros(grid),
            k3u: Field3D::zeros(grid),
            k3v: Field3D::zeros(grid),
            s_buf: Field3D::zeros(grid),
        }
    }
}

/// One classical RK4 step
/// `U^{n+1} = U^n + tau/6 (K1 + 2 K2 + 2 K3 + K4)` on the first-order
/// system, with every stage Laplacian approximated by the compact
/// operator.
#[allow(clippy::too_many_arguments)]
pub fn rk4_step(
    state: &mut RkState,
    spec: &ProblemSpec,
    velocity: &VelocityModel,
    nu_sq: &Field3D,
    grid: &Grid,
    tau: f64,
    ws: &mut Rk4Workspace,
) -> Result<()> {
    let t_n = state.t;
    let faces = &spec.faces;
    let source = spec.source.as_ref();
    let bounds = rk_boundary_values(faces, source, velocity, grid, t_n, tau)?;

    // stage 1: K1 = (v, v^2 Δu + s(t_n))
    let dv_u = sample_dirichlet(faces, grid, t_n);
    let qc_u = boundary_closure(faces, velocity, source, grid, t_n);
    ws.lap.apply(&state.u, &dv_u, &qc_u, &mut ws.delta_u);
    ws.s_buf.fill(0.0);
    source.add_interior(grid, t_n, &mut ws.s_buf)?;
    let n = state.u.len();
    for i in 0..n {
        ws.k1v.as_mut_slice()[i] =
            nu_sq.as_slice()[i] * ws.delta_u.as_slice()[i] + ws.s_buf.as_slice()[i];
    }

    // stage 2: K2u = v + tau/2 K1v; K2v = v^2 (Δu + tau/2 ΔK11) + s(t_n + tau/2)
    ws.lap
        .apply(&state.u_t, &bounds.k11_dirichlet, &bounds.k11_closure, &mut ws.delta_stage);
    ws.s_buf.fill(0.0);
    source.add_interior(grid, t_n + 0.5 * tau, &mut ws.s_buf)?;
    for i in 0..n {
        ws.k2u.as_mut_slice()[i] = state.u_t.as_slice()[i] + 0.5 * tau * ws.k1v.as_slice()[i];
        ws.k2v.as_mut_slice()[i] = nu_sq.as_slice()[i]
            * (ws.delta_u.as_slice()[i] + 0.5 * tau * ws.delta_stage.as_slice()[i])
            + ws.s_buf.as_slice()[i];
    }

    // stage 3: K3u = v + tau/2 K2v; K3v = v^2 (Δu + tau/2 ΔK21) + s(t_n + tau/2)
    ws.lap
        .apply(&ws.k2u, &bounds.k21_dirichlet, &bounds.mid_closure, &mut ws.delta_stage);
    for i in 0..n {
        ws.k3u.as_mut_slice()[i] = state.u_t.as_slice()[i] + 0.5 * tau * ws.k2v.as_slice()[i];
        ws.k3v.as_mut_slice()[i] = nu_sq.as_slice()[i]
            * (ws.delta_u.as_slice()[i] + 0.5 * tau * ws.delta_stage.as_slice()[i])
            + ws.s_buf.as_slice()[i];
    }

    // stage 4: K4u = v + tau K3v; K4v = v^2 (Δu + tau ΔK31) + s(t_n + tau)
    ws.lap
        .apply(&ws.k3u, &bounds.k31_dirichlet, &bounds.mid_closure, &mut ws.delta_stage);
    ws.s_buf.fill(0.0);
    source.add_interior(grid, t_n + tau, &mut ws.s_buf)?;

    let sixth = tau / 6.0;
    for i in 0..n {
        let k4u = state.u_t.as_slice()[i] + tau * ws.k3v.as_slice()[i];
        let k4v = nu_sq.as_slice()[i]
            * (ws.delta_u.as_slice()[i] + tau * ws.delta_stage.as_slice()[i])
            + ws.s_buf.as_slice()[i];
        let du = sixth
            * (state.u_t.as_slice()[i]
                + 2.0 * ws.k2u.as_slice()[i]
                + 2.0 * ws.k3u.as_slice()[i]
                + k4u);
        let dv = sixth
            * (ws.k1v.as_slice()[i]
                + 2.0 * ws.k2v.as_slice()[i]
                + 2.0 * ws.k3v.as_slice()[i]
                + k4v);
        state.u.as_mut_slice()[i] += du;
        state.u_t.as_mut_slice()[i] += dv;
    }
    state.t = t_n + tau;
    if !(state.u.all_finite() && state.u_t.all_finite()) {
        return Err(Error::NonFinite("RK4 stage update".into()));
    }
    Ok(())
}

/// Run RK4 from `t = 0` to `cfg.t_final`.
///
/// The leapfrog CFL bound is applied as a warning only; no proof backs
/// it for this integrator.
pub fn run_rk4(
    spec: &ProblemSpec,
    grid: &Grid,
    cfg: &LeapfrogConfig,
    observers: &mut [ObserverSlot],
) -> Result<RkState> {
    if !(cfg.tau > 0.0 && cfg.tau.is_finite()) {
        return Err(Error::InvalidArgument(format!("tau must be positive, got {}", cfg.tau)));
    }
    let velocity = spec.velocity_model(grid)?;
    let report = cfl_check(&velocity, cfg.tau, grid);
    if !report.pass {
        eprintln!(
            "warning: Courant number {:.4} exceeds the leapfrog stability limit {:.4}",
            report.courant, report.cfl_limit
        );
    }
    let nu_sq = velocity.sq_interior();
    let mut state = RkState {
        u: Field3D::sample(grid, &spec.initial.alpha)?,
        u_t: Field3D::sample(grid, &spec.initial.beta)?,
        t: 0.0,
    };
    let mut ws = Rk4Workspace::new(grid);
    notify(observers, 0, 0.0, &state.u);

    let tau = cfg.tau;
    let n_full = (cfg.t_final / tau + 1e-9).floor() as usize;
    let remainder = cfg.t_final - n_full as f64 * tau;
    for n in 0..n_full {
        state.t = n as f64 * tau;
        rk4_step(&mut state, spec, &velocity, &nu_sq, grid, tau, &mut ws)?;
        notify(observers, n + 1, state.t, &state.u);
    }
    if remainder > tau * 1e-9 {
        rk4_step(&mut state, spec, &velocity, &nu_sq, grid, remainder, &mut ws)?;
        state.t = cfg.t_final;
        notify(observers, n_full + 1, state.t, &state.u);
    }
    Ok(state)
}
