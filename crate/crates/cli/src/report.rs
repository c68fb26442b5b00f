//! Error norms, convergence orders, and CSV table output.

use acwave::grid::{Field3D, Grid};
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

/// Errors of one run against the exact solution, with the convergence
/// order relative to the previous table row when available.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub h: f64,
    pub tau: f64,
    pub t: f64,
    pub e_max: f64,
    pub e_energy: f64,
    pub order_max: Option<f64>,
    pub order_energy: Option<f64>,
}

/// Max-norm and volume-weighted l2 ("energy") error of `numerical`
/// against `exact(t, .)`.
pub fn error_norms(
    numerical: &Field3D,
    exact: &(dyn Fn(f64, f64, f64, f64) -> f64 + Send + Sync),
    grid: &Grid,
    t: f64,
) -> (f64, f64) {
    assert_eq!(numerical.dims(), grid.dims());
    let [nx, ny, nz] = grid.dims();
    let mut e_max = 0.0f64;
    let mut e_sq = 0.0f64;
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let (x, y, z) = grid.interior_node(i, j, k);
                let e = numerical.get(i, j, k) - exact(t, x, y, z);
                e_max = e_max.max(e.abs());
                e_sq += e * e;
            }
        }
    }
    let weight = grid.h(acwave::grid::Axis::X)
        * grid.h(acwave::grid::Axis::Y)
        * grid.h(acwave::grid::Axis::Z);
    (e_max, (weight * e_sq).sqrt())
}

/// Observed order `log(E1/E2) / log(h1/h2)`.
///
/// Panics on non-positive errors or equal spacings.
pub fn convergence_order(e1: f64, e2: f64, h1: f64, h2: f64) -> f64 {
    assert!(e1 > 0.0 && e2 > 0.0, "convergence order needs positive errors");
    assert!(h1 > 0.0 && h2 > 0.0 && h1 != h2, "spacings must differ");
    (e1 / e2).ln() / (h1 / h2).ln()
}

/// 15 significant digits, scientific notation.
pub fn fmt_sci(v: f64) -> String {
    format!("{v:.14e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_sci).unwrap_or_default()
}

/// Write the convergence table of a sweep.
pub fn write_convergence_csv(path: &Path, rows: &[ErrorReport]) -> std::io::Result<()> {
    let mut out = String::from("h,tau,t_final,e_max,e_energy,order_max,order_energy\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt_sci(r.h),
            fmt_sci(r.tau),
            fmt_sci(r.t),
            fmt_sci(r.e_max),
            fmt_sci(r.e_energy),
            fmt_opt(r.order_max),
            fmt_opt(r.order_energy),
        );
    }
    std::fs::write(path, out)
}

/// One row of the extrapolation-vs-RK4 comparison (energy norm).
#[derive(Debug, Clone, PartialEq)]
pub struct ReRk4Row {
    pub h: f64,
    pub tau: f64,
    pub e_re: f64,
    pub e_rk4: f64,
    pub order_re: Option<f64>,
    pub order_rk4: Option<f64>,
}

pub fn write_re_rk4_csv(path: &Path, rows: &[ReRk4Row]) -> std::io::Result<()> {
    let mut out = String::from("h,tau,e_re,e_rk4,order_re,order_rk4\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_sci(r.h),
            fmt_sci(r.tau),
            fmt_sci(r.e_re),
            fmt_sci(r.e_rk4),
            fmt_opt(r.order_re),
            fmt_opt(r.order_rk4),
        );
    }
    std::fs::write(path, out)
}

/// Single-run summary for problems without an exact solution.
pub fn write_run_csv(path: &Path, h: f64, tau: f64, t: f64, max_abs: f64) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    writeln!(f, "h,tau,t_final,max_abs")?;
    writeln!(
        f,
        "{},{},{},{}",
        fmt_sci(h),
        fmt_sci(tau),
        fmt_sci(t),
        fmt_sci(max_abs)
    )
}
