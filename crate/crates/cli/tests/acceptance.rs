//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines for passing criteria too.

use acwave::compact::{
    laplacian, second_derivative_line, BoundaryClosure, CompactLaplacian, DirichletValues,
};
use acwave::grid::{Axis, Domain, Field3D, Grid, VelocityModel};
use acwave::stability::{cfl_check, energy_functional, r_of_n};
use acwave::time::{ghost_level, leapfrog_step, StepState};
use acwave::tridiag::{toeplitz_spectrum, SchemeCoefficients};
use acwave_cli::experiments::{
    example1_exact, example1_spec, example3_spec, EX3_FIRST_ARRIVAL, EX3_INTERFACE,
};
use acwave_cli::runner::{convergence_example1, convergence_example2, detect_first_arrival};
use acwave_cli::snapshot::snapshot_slice;
use nalgebra::DMatrix;

fn pass(name: &str, detail: &str) {
    println!("ACCEPTANCE {name}: PASS ({detail})");
}

fn tmp_dir(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join("acwave_acceptance").join(name);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// Spatial order, example 1: h in {1/10, 1/15, 1/20}, tau = h^2,
/// T = 1; every adjacent-pair order in max and energy norms within
/// [3.7, 4.3].
#[test]
fn spatial_order_example1() {
    let hs = [1.0 / 10.0, 1.0 / 15.0, 1.0 / 20.0];
    let rows = convergence_example1(&hs, 1.0, &tmp_dir("ex1")).unwrap();
    assert_eq!(rows.len(), 3);
    let mut orders = Vec::new();
    for r in rows.iter().skip(1) {
        let om = r.order_max.unwrap();
        let oe = r.order_energy.unwrap();
        assert!(
            (3.7..=4.3).contains(&om),
            "max-norm order {om} outside [3.7, 4.3] at h = {}",
            r.h
        );
        assert!(
            (3.7..=4.3).contains(&oe),
            "energy-norm order {oe} outside [3.7, 4.3] at h = {}",
            r.h
        );
        orders.push((om, oe));
    }
    pass(
        "spatial-order-example1",
        &format!(
            "orders max = [{:.4}, {:.4}], energy = [{:.4}, {:.4}]",
            orders[0].0, orders[1].0, orders[0].1, orders[1].1
        ),
    );
}

/// Temporal upgrade, example 2: tau = h/10; RE (l = 2) and RK4 orders
/// within [3.8, 4.4] and energy-norm errors agreeing to 2% at each h.
#[test]
fn temporal_upgrade_example2() {
    let hs = [1.0 / 10.0, 1.0 / 15.0, 1.0 / 20.0];
    let rows = convergence_example2(&hs, 1.0, &tmp_dir("ex2")).unwrap();
    assert_eq!(rows.len(), 3);
    for r in &rows {
        let gap = (r.e_re - r.e_rk4).abs() / r.e_rk4;
        assert!(
            gap <= 0.02,
            "RE/RK4 disagreement {gap:.4} > 2% at h = {}",
            r.h
        );
    }
    let mut orders = Vec::new();
    for r in rows.iter().skip(1) {
        let ore = r.order_re.unwrap();
        let ork = r.order_rk4.unwrap();
        assert!((3.8..=4.4).contains(&ore), "RE order {ore} outside [3.8, 4.4]");
        assert!((3.8..=4.4).contains(&ork), "RK4 order {ork} outside [3.8, 4.4]");
        orders.push((ore, ork));
    }
    pass(
        "temporal-upgrade-example2",
        &format!(
            "orders RE = [{:.4}, {:.4}], RK4 = [{:.4}, {:.4}], max rel gap = {:.2e}",
            orders[0].0, orders[1].0, orders[0].1, orders[1].1,
            rows.iter()
                .map(|r| (r.e_re - r.e_rk4).abs() / r.e_rk4)
                .fold(0.0f64, f64::max)
        ),
    );
}

/// Absolute error magnitudes are reported, not gated (the reference
/// tables' final time is a reconstruction).
#[test]
fn absolute_error_magnitude_reported() {
    let rows = convergence_example1(&[1.0 / 10.0], 1.0, &tmp_dir("ex1_mag")).unwrap();
    let e = rows[0].e_max;
    assert!(e.is_finite() && e > 0.0);
    pass(
        "absolute-error-magnitude",
        &format!("e_max(h = 1/10, T = 1) = {e:.4e}; reference magnitude 4.7e-3 (reported, not gated)"),
    );
}

fn dense(n: usize, diag: f64, off: f64) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = diag;
        if i + 1 < n {
            m[(i, i + 1)] = off;
            m[(i + 1, i)] = off;
        }
    }
    m
}

/// Spectral oracle: closed-form spectra match a dense eigensolver to
/// 1e-12 for N in {1, 2, 4, 8, 16}, and max eigenvalue of A^{-1}B
/// equals -r(N) to 1e-12.
#[test]
fn spectral_oracle() {
    let c = SchemeCoefficients::default();
    for n in [1usize, 2, 4, 8, 16] {
        for m in [c.matrix_a(n), c.matrix_b(n)] {
            let closed = toeplitz_spectrum(&m);
            let mut eig: Vec<f64> = dense(n, m.diag, m.offdiag)
                .symmetric_eigen()
                .eigenvalues
                .iter()
                .copied()
                .collect();
            eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for (got, want) in closed.iter().zip(&eig) {
                assert!(
                    (got - want).abs() < 1e-12,
                    "N = {n}: closed {got} vs dense {want}"
                );
            }
        }
        let a = dense(n, c.a0, c.a1);
        let b = dense(n, c.b0, c.b1);
        let ainv_b = a.lu().solve(&b).unwrap();
        let max_re = ainv_b
            .complex_eigenvalues()
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(
            (max_re + r_of_n(n)).abs() < 1e-12,
            "N = {n}: max eig {max_re} vs -r(N) = {}",
            -r_of_n(n)
        );
    }
    pass("spectral-oracle", "closed forms match dense eigensolver to 1e-12 for N in {1,2,4,8,16}");
}

fn xorshift_field(grid: &Grid, mut state: u64) -> Field3D {
    let mut f = Field3D::zeros(grid);
    for v in f.as_mut_slice() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        *v = (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0;
    }
    f
}

/// Energy identity: zero source and boundaries, random data on a 16^3
/// grid, unit velocity, Courant 0.4; the quadratic form R is conserved
/// to relative 1e-10 over 500 steps and the norm pair stays below 4x
/// its initial value.
#[test]
fn energy_identity_500_steps() {
    let grid = Grid::new(Domain::unit_cube(), 16, 16, 16).unwrap();
    let velocity = VelocityModel::constant(&grid, 1.0).unwrap();
    let nu_sq = velocity.sq_interior();
    let tau = 0.4 * grid.h(Axis::X);
    let mut lap = CompactLaplacian::new(&grid, SchemeCoefficients::default());
    let zero = Field3D::zeros(&grid);

    let mut state = StepState {
        u_curr: xorshift_field(&grid, 0x9e3779b97f4a7c15),
        u_prev: xorshift_field(&grid, 0xd1b54a32d192ed03),
        t: 0.0,
        tau,
        n: 0,
    };
    let energy_pair = |s: &StepState| 2.0 * (s.u_curr.norm_sq() + s.u_prev.norm_sq());
    let r0 = energy_functional(&state.u_curr, &state.u_prev, &velocity, tau, &grid).unwrap();
    let e0 = energy_pair(&state);
    let mut max_drift = 0.0f64;
    let mut max_energy = e0;
    let mut delta = Field3D::zeros(&grid);
    for _ in 0..500 {
        lap.apply_homogeneous(&state.u_curr, &mut delta);
        state = leapfrog_step(&state, &delta, &nu_sq, &zero);
        let r = energy_functional(&state.u_curr, &state.u_prev, &velocity, tau, &grid).unwrap();
        max_drift = max_drift.max((r - r0).abs() / r0.abs());
        max_energy = max_energy.max(energy_pair(&state));
    }
    assert!(max_drift <= 1e-10, "relative R drift {max_drift:.3e} > 1e-10");
    assert!(
        max_energy <= 4.0 * e0,
        "norm pair grew to {max_energy:.3e} > 4 x initial {e0:.3e}"
    );
    pass(
        "energy-identity",
        &format!("max relative drift {max_drift:.2e} over 500 steps, norm ratio {:.3}", max_energy / e0),
    );
}

/// CFL gate on the seismic parameters: tau = 0.0005 at h = 5 passes
/// with Courant 0.25; tau = 0.001 fails with Courant 0.5.
#[test]
fn cfl_gate_seismic_parameters() {
    let ex = example3_spec(None).unwrap();
    let grid = ex.spec.grid().unwrap();
    let velocity = ex.spec.velocity_model(&grid).unwrap();

    let ok = cfl_check(&velocity, 0.0005, &grid);
    assert!((ok.courant - 0.25).abs() < 1e-12);
    assert!(ok.pass);

    let bad = cfl_check(&velocity, 0.001, &grid);
    assert!((bad.courant - 0.5).abs() < 1e-12);
    assert!(!bad.pass);
    pass(
        "cfl-gate",
        &format!(
            "courant 0.25 < {:.4} passes; 0.5 fails",
            ok.cfl_limit
        ),
    );
}

/// Ghost-level start is fourth order: halving tau shrinks the error
/// against the exact solution at -tau by a factor in [12, 20].
#[test]
fn ghost_level_order() {
    let spec = example1_spec();
    let grid = spec.grid().unwrap();
    let velocity = spec.velocity_model(&grid).unwrap();
    let err_at = |tau: f64| {
        let ghost = ghost_level(&spec, &grid, &velocity, tau).unwrap();
        let mut err = 0.0f64;
        for k in 0..grid.nz() {
            for j in 0..grid.ny() {
                for i in 0..grid.nx() {
                    let (x, y, z) = grid.interior_node(i, j, k);
                    err = err.max((ghost.get(i, j, k) - example1_exact(-tau, x, y, z)).abs());
                }
            }
        }
        err
    };
    let ratio = err_at(0.02) / err_at(0.01);
    assert!(
        (12.0..=20.0).contains(&ratio),
        "tau-halving ratio {ratio} outside [12, 20]"
    );
    pass("ghost-level-order", &format!("tau-halving error ratio {ratio:.2} (nominal 16)"));
}

/// Operator exactness: the compact Laplacian reproduces 6 on
/// x^2+y^2+z^2 to 1e-11 and annihilates linears per line to 1e-12.
#[test]
fn operator_exactness() {
    let grid = Grid::new(Domain::unit_cube(), 9, 9, 9).unwrap();
    let f = |x: f64, y: f64, z: f64| x * x + y * y + z * z;
    let u = Field3D::sample(&grid, f).unwrap();
    let dv = DirichletValues::sample_fn(&grid, |_, x, y, z| f(x, y, z));
    let qc = BoundaryClosure::sample_fn(&grid, |_, _, _, _| 2.0);
    let out = laplacian(&u, &dv, &qc, &grid);
    let mut worst = 0.0f64;
    for v in out.as_slice() {
        worst = worst.max((v - 6.0).abs());
    }
    assert!(worst < 1e-11, "Laplacian of x^2+y^2+z^2 off by {worst:.3e}");

    let c = SchemeCoefficients::default();
    let n = 17;
    let h = 1.0 / (n as f64 + 1.0);
    let line: Vec<f64> = (1..=n).map(|i| i as f64 * h).collect();
    let d2 = second_derivative_line(&line, (0.0, 1.0), (0.0, 0.0), h, &c);
    let worst_line = d2.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!(worst_line < 1e-12, "line derivative of x off by {worst_line:.3e}");
    pass(
        "operator-exactness",
        &format!("quadratic error {worst:.2e} (<=1e-11), linear line error {worst_line:.2e} (<=1e-12)"),
    );
}

/// Seismic snapshots, desk scale: the y-section at the source plane is
/// confined above the interface at t = 0.225 s and shows transmitted
/// energy below it at t = 0.375 s.
#[test]
fn seismic_snapshot_confinement_and_transmission() {
    use acwave::time::{run_leapfrog, CflPolicy, LeapfrogConfig, ObserverSlot};
    use std::cell::RefCell;

    let ex = example3_spec(Some(15.0)).unwrap();
    let grid = ex.spec.grid().unwrap();
    // y-section through the source plane y = 600 -> full-grid index 40
    let j_slice = 40usize;
    assert_eq!(grid.coord(Axis::Y, j_slice), 600.0);
    let (rows, cols) = acwave_cli::snapshot::slice_dims(&grid, Axis::Y);
    assert_eq!((rows, cols), (81, 91));
    // first slice column at or below the interface depth
    let k_deep = (0..cols)
        .find(|&k| grid.coord(Axis::Z, k) >= EX3_INTERFACE)
        .unwrap();

    // deepest region of the slice, max |u| below the interface
    let deep_max = |slice: &acwave_cli::snapshot::Slice2D| {
        let mut deep = 0.0f64;
        for r in 0..slice.rows {
            for c in k_deep..slice.cols {
                deep = deep.max(slice.data[r * slice.cols + c].abs());
            }
        }
        deep
    };

    // frames are judged against one shared scale, the running peak
    let running_peak: RefCell<f64> = RefCell::new(0.0);
    let early: RefCell<Option<f64>> = RefCell::new(None);
    let late: RefCell<Option<f64>> = RefCell::new(None);
    {
        let faces = &ex.spec.faces;
        let grid_ref = &grid;
        let mut observers = vec![ObserverSlot::new(1, |_n, t, field: &Field3D| {
            let mut p = running_peak.borrow_mut();
            *p = p.max(field.max_abs());
            for (target, cell) in [(0.225, &early), (0.375, &late)] {
                if (t - target).abs() < 1e-9 {
                    let slice =
                        snapshot_slice(field, faces, grid_ref, Axis::Y, j_slice, t).unwrap();
                    *cell.borrow_mut() = Some(deep_max(&slice));
                }
            }
        })];
        let cfg = LeapfrogConfig {
            tau: ex.tau,
            t_final: 0.375,
            cfl_policy: CflPolicy::Abort,
        };
        run_leapfrog(&ex.spec, &grid, &cfg, &mut observers).unwrap();
    }
    let deep_early = early.into_inner().expect("snapshot at 0.225 s");
    let deep_late = late.into_inner().expect("snapshot at 0.375 s");
    let peak = running_peak.into_inner();

    let ratio_early = deep_early / peak;
    let ratio_late = deep_late / peak;
    assert!(
        ratio_early <= 1e-2,
        "wave not confined above the interface at 0.225 s: deep/peak = {ratio_early:.3e}"
    );
    assert!(
        ratio_late >= 1e-2,
        "no visible transmitted energy below the interface at 0.375 s: deep/peak = {ratio_late:.3e}"
    );
    assert!(
        deep_late >= 10.0 * deep_early,
        "transmission did not grow: {deep_early:.3e} -> {deep_late:.3e}"
    );
    pass(
        "seismic-snapshots",
        &format!("deep/peak {ratio_early:.2e} at 0.225 s -> {ratio_late:.2e} at 0.375 s"),
    );
}

/// Seismic first arrival, desk scale: detector threshold 1e-6 of the
/// running peak, window 0.233125 +- 0.02 s.
///
/// KNOWN RED: at every tested resolution (h = 15, 7.5 and the
/// production 5) the 1e-6 threshold trips on the dispersive precursor
/// of the point source (measured crossings 0.1725 s, 0.2010 s,
/// 0.2075 s) well before the physical front, whose passage raises the
/// deep-region amplitude from ~3e-4 to ~8e-3 of the peak inside the
/// window. A threshold in that band would land in the window; 1e-6
/// cannot. The criterion is kept as frozen rather than tuned.
#[test]
fn seismic_first_arrival_window() {
    let ex = example3_spec(Some(15.0)).unwrap();
    let grid = ex.spec.grid().unwrap();
    let detected = detect_first_arrival(&ex.spec, &grid, ex.tau, 0.3, EX3_INTERFACE, 1e-6)
        .unwrap()
        .expect("no arrival detected at all");
    let lo = EX3_FIRST_ARRIVAL - 0.02;
    let hi = EX3_FIRST_ARRIVAL + 0.02;
    assert!(
        detected >= lo && detected <= hi,
        "ACCEPTANCE seismic-first-arrival: FAIL (detected {detected:.4} s outside [{lo:.4}, {hi:.4}]; \
         the 1e-6 threshold rides the numerical precursor -- see test doc comment)"
    );
    pass(
        "seismic-first-arrival",
        &format!("detected {detected:.4} s within [{lo:.4}, {hi:.4}]"),
    );
}
