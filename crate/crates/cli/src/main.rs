//! Command-line front end.
//!
//! Subcommands: `run <config>`, `convergence <example>`, `stability`,
//! `spectrum`. Exit codes: 0 success, 2 config error, 3 CFL abort,
//! 4 instability abort.

use acwave_cli::config::{parse_spacing, RunConfig};
use acwave_cli::runner::{self, HarnessError};
use acwave::grid::{Domain, Grid, VelocityModel};
use acwave::stability::{cfl_check, r_of_n};
use acwave::tridiag::{toeplitz_spectrum, SchemeCoefficients};
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "acwave", about = "Compact fourth-order 3D acoustic wave solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a run described by a TOML config file.
    Run { config: PathBuf },
    /// Convergence sweep over grid spacings for a built-in problem.
    Convergence {
        /// example1 (leapfrog, tau = h^2) or example2 (RE and RK4, tau = h/10)
        example: String,
        /// Comma-separated spacings, floats or fractions like 1/15.
        #[arg(long, value_delimiter = ',', required = true)]
        h_list: Vec<String>,
        #[arg(long, default_value_t = 1.0)]
        t_final: f64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Evaluate the CFL gate for given parameters.
    Stability {
        /// Interior nodes per axis.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        h: f64,
        /// Maximum velocity of the medium.
        #[arg(long)]
        vmax: f64,
        /// Optional directory for stability.txt.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form spectra of the scheme matrices of order n.
    Spectrum {
        #[arg(long)]
        n: usize,
        /// Optional output file (defaults to stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Run { config } => {
            let cfg = RunConfig::load(&config).map_err(HarnessError::Config)?;
            let summary = runner::run(&cfg)?;
            println!(
                "completed {} steps to t = {:.6}; max |u| = {:.6e}; artifacts in {}",
                summary.steps,
                summary.t_final,
                summary.max_abs,
                summary.outdir.display()
            );
            Ok(())
        }
        Command::Convergence {
            example,
            h_list,
            t_final,
            out,
        } => {
            let hs = h_list
                .iter()
                .map(|s| parse_spacing(s))
                .collect::<Result<Vec<f64>, String>>()
                .map_err(HarnessError::Config)?;
            match example.as_str() {
                "example1" => {
                    let rows = runner::convergence_example1(&hs, t_final, &out)?;
                    println!("h,tau,e_max,e_energy,order_max,order_energy");
                    for r in &rows {
                        println!(
                            "{:.6},{:.6},{:.6e},{:.6e},{},{}",
                            r.h,
                            r.tau,
                            r.e_max,
                            r.e_energy,
                            r.order_max.map(|o| format!("{o:.4}")).unwrap_or_default(),
                            r.order_energy.map(|o| format!("{o:.4}")).unwrap_or_default(),
                        );
                    }
                }
                "example2" => {
                    let rows = runner::convergence_example2(&hs, t_final, &out)?;
                    println!("h,tau,e_re,e_rk4,order_re,order_rk4");
                    for r in &rows {
                        println!(
                            "{:.6},{:.6},{:.6e},{:.6e},{},{}",
                            r.h,
                            r.tau,
                            r.e_re,
                            r.e_rk4,
                            r.order_re.map(|o| format!("{o:.4}")).unwrap_or_default(),
                            r.order_rk4.map(|o| format!("{o:.4}")).unwrap_or_default(),
                        );
                    }
                }
                other => {
                    return Err(HarnessError::Config(format!(
                        "convergence supports example1 or example2, got {other}"
                    )))
                }
            }
            println!("table written to {}", out.join("table.csv").display());
            Ok(())
        }
        Command::Stability { n, tau, h, vmax, out } => {
            if n < 1 || !(tau > 0.0) || !(h > 0.0) || !(vmax > 0.0) {
                return Err(HarnessError::Config(
                    "stability requires n >= 1 and positive tau, h, vmax".into(),
                ));
            }
            let side = h * (n as f64 + 1.0);
            let domain = Domain::new((0.0, side), (0.0, side), (0.0, side))?;
            let grid = Grid::new(domain, n, n, n)?;
            let velocity = VelocityModel::constant(&grid, vmax)?;
            let report = cfl_check(&velocity, tau, &grid);
            println!("{report}");
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir)?;
                std::fs::write(dir.join("stability.txt"), format!("{report}\n"))?;
            }
            Ok(())
        }
        Command::Spectrum { n, out } => {
            if n < 1 {
                return Err(HarnessError::Config("spectrum requires n >= 1".into()));
            }
            let c = SchemeCoefficients::default();
            let eig_a = toeplitz_spectrum(&c.matrix_a(n));
            let eig_b = toeplitz_spectrum(&c.matrix_b(n));
            let mut text = String::from("l,eigen_a,eigen_b\n");
            for (l, (a, b)) in eig_a.iter().zip(&eig_b).enumerate() {
                text.push_str(&format!("{},{:.15e},{:.15e}\n", l + 1, a, b));
            }
            text.push_str(&format!("# r_n = {:.15e}\n", r_of_n(n)));
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(())
        }
    }
}
