//! Run configuration: a TOML document with strict key checking.
//!
//! ```toml
//! problem = "example3"        # example1 | example2 | example3 | custom
//! h = 15.0                    # or n = [79, 79, 89]
//! tau = 0.0015
//! t_final = 0.375
//! integrator = "leapfrog"     # leapfrog | leapfrog-re | rk4
//! outdir = "out/run1"
//! cfl = "abort"               # abort | warn
//! snapshot_every = 50         # steps; 0 disables snapshots
//! slices = [{ axis = "y", index = 40 }]
//!
//! [custom]                    # only for problem = "custom"
//! domain = { x = [0.0, 1200.0], y = [0.0, 1200.0], z = [0.0, 1350.0] }
//! velocity = { kind = "layered", z_interface = 879.75, upper = 1200.0, lower = 2500.0 }
//! source = { kind = "ricker", f_p = 10.0, delay = 0.05, location = [600.0, 600.0, 600.0] }
//! ```
//!
//! Custom problems are declarative: constant or layered velocity, a
//! Ricker point source or none, zero initial data and zero Dirichlet
//! walls. The manufactured-solution problems are built in.

use acwave::grid::Axis;
use acwave::time::CflPolicy;
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    Example1,
    Example2,
    Example3,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    Leapfrog,
    LeapfrogRe,
    Rk4,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainCfg {
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub z: [f64; 2],
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum VelocityCfg {
    #[serde(rename = "constant")]
    Constant { value: f64 },
    #[serde(rename = "layered")]
    Layered {
        z_interface: f64,
        upper: f64,
        lower: f64,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum SourceCfg {
    #[serde(rename = "none")]
    None,
    #[serde(rename = "ricker")]
    Ricker {
        f_p: f64,
        delay: f64,
        location: [f64; 3],
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomProblemCfg {
    pub domain: DomainCfg,
    pub velocity: VelocityCfg,
    pub source: SourceCfg,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceCfg {
    pub axis: String,
    pub index: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    problem: String,
    custom: Option<CustomProblemCfg>,
    h: Option<f64>,
    n: Option<[usize; 3]>,
    tau: f64,
    t_final: Option<f64>,
    #[serde(default = "default_integrator")]
    integrator: String,
    outdir: PathBuf,
    #[serde(default = "default_cfl")]
    cfl: String,
    #[serde(default)]
    snapshot_every: usize,
    #[serde(default)]
    slices: Vec<SliceCfg>,
}

fn default_integrator() -> String {
    "leapfrog".into()
}

fn default_cfl() -> String {
    "abort".into()
}

/// Validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub problem: ProblemKind,
    pub custom: Option<CustomProblemCfg>,
    pub h: Option<f64>,
    pub n: Option<[usize; 3]>,
    pub tau: f64,
    pub t_final: Option<f64>,
    pub integrator: Integrator,
    pub outdir: PathBuf,
    pub cfl_policy: CflPolicy,
    pub snapshot_every: usize,
    pub slices: Vec<(Axis, usize)>,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, String> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| e.to_string())?;
        raw.validate()
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Self::from_toml_str(&text)
    }
}

impl RawConfig {
    fn validate(self) -> Result<RunConfig, String> {
        let problem = match self.problem.as_str() {
            "example1" => ProblemKind::Example1,
            "example2" => ProblemKind::Example2,
            "example3" => ProblemKind::Example3,
            "custom" => ProblemKind::Custom,
            other => return Err(format!("unknown problem selector: {other}")),
        };
        if problem == ProblemKind::Custom && self.custom.is_none() {
            return Err("problem = \"custom\" requires a [custom] section".into());
        }
        if problem != ProblemKind::Custom && self.custom.is_some() {
            return Err("[custom] section is only valid with problem = \"custom\"".into());
        }
        match (self.h, self.n) {
            (Some(h), None) => {
                if !(h > 0.0 && h.is_finite()) {
                    return Err(format!("h must be positive, got {h}"));
                }
            }
            (None, Some(n)) => {
                if n.iter().any(|&c| c < 1) {
                    return Err("all interior counts in n must be >= 1".into());
                }
            }
            (None, None) => return Err("one of h or n is required".into()),
            (Some(_), Some(_)) => return Err("h and n are mutually exclusive".into()),
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(format!("tau must be positive, got {}", self.tau));
        }
        if let Some(t) = self.t_final {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(format!("t_final must be non-negative, got {t}"));
            }
        }
        let integrator = match self.integrator.as_str() {
            "leapfrog" => Integrator::Leapfrog,
            "leapfrog-re" => Integrator::LeapfrogRe,
            "rk4" => Integrator::Rk4,
            other => return Err(format!("unknown integrator: {other}")),
        };
        let cfl_policy = match self.cfl.as_str() {
            "abort" => CflPolicy::Abort,
            "warn" => CflPolicy::Warn,
            other => return Err(format!("unknown cfl policy: {other}")),
        };
        if let Some(c) = &self.custom {
            match c.velocity {
                VelocityCfg::Constant { value } => {
                    if value <= 0.0 {
                        return Err("constant velocity must be positive".into());
                    }
                }
                VelocityCfg::Layered { upper, lower, .. } => {
                    if upper <= 0.0 || lower <= 0.0 {
                        return Err("layer speeds must be positive".into());
                    }
                }
            }
            if let SourceCfg::Ricker { f_p, .. } = c.source {
                if f_p <= 0.0 {
                    return Err("ricker dominant frequency must be positive".into());
                }
            }
        }
        let mut slices = Vec::new();
        for s in &self.slices {
            let axis = match s.axis.as_str() {
                "x" => Axis::X,
                "y" => Axis::Y,
                "z" => Axis::Z,
                other => return Err(format!("unknown slice axis: {other}")),
            };
            slices.push((axis, s.index));
        }
        Ok(RunConfig {
            problem,
            custom: self.custom,
            h: self.h,
            n: self.n,
            tau: self.tau,
            t_final: self.t_final,
            integrator,
            outdir: self.outdir,
            cfl_policy,
            snapshot_every: self.snapshot_every,
            slices,
        })
    }
}

/// Parse a spacing given either as a float or as a fraction `a/b`.
pub fn parse_spacing(text: &str) -> Result<f64, String> {
    let t = text.trim();
    if let Some((num, den)) = t.split_once('/') {
        let n: f64 = num.trim().parse().map_err(|_| format!("bad fraction: {t}"))?;
        let d: f64 = den.trim().parse().map_err(|_| format!("bad fraction: {t}"))?;
        if d == 0.0 {
            return Err(format!("zero denominator: {t}"));
        }
        return Ok(n / d);
    }
    t.parse().map_err(|_| format!("bad spacing: {t}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = r#"
problem = "example1"
h = 0.1
tau = 0.01
t_final = 1.0
outdir = "out"
"#;

    #[test]
    fn parses_minimal_config() {
        let cfg = RunConfig::from_toml_str(GOOD).unwrap();
        assert_eq!(cfg.problem, ProblemKind::Example1);
        assert_eq!(cfg.integrator, Integrator::Leapfrog);
        assert_eq!(cfg.cfl_policy, CflPolicy::Abort);
        assert_eq!(cfg.h, Some(0.1));
    }

    #[test]
    fn rejects_unknown_keys() {
        let bad = format!("{GOOD}\nbogus_key = 1\n");
        assert!(RunConfig::from_toml_str(&bad).is_err());
    }

    #[test]
    fn rejects_bad_values() {
        assert!(RunConfig::from_toml_str(
            "problem = \"example9\"\nh = 0.1\ntau = 0.01\noutdir = \"o\""
        )
        .is_err());
        assert!(RunConfig::from_toml_str(
            "problem = \"example1\"\nh = -0.1\ntau = 0.01\noutdir = \"o\""
        )
        .is_err());
        assert!(RunConfig::from_toml_str(
            "problem = \"example1\"\nh = 0.1\ntau = 0.0\noutdir = \"o\""
        )
        .is_err());
        assert!(RunConfig::from_toml_str(
            "problem = \"example1\"\ntau = 0.01\noutdir = \"o\""
        )
        .is_err());
        assert!(RunConfig::from_toml_str(
            "problem = \"custom\"\nh = 0.1\ntau = 0.01\noutdir = \"o\""
        )
        .is_err());
    }

    #[test]
    fn parses_custom_problem() {
        let text = r#"
problem = "custom"
h = 15.0
tau = 0.0015
t_final = 0.3
outdir = "out"
slices = [{ axis = "y", index = 40 }]
snapshot_every = 50

[custom]
domain = { x = [0.0, 1200.0], y = [0.0, 1200.0], z = [0.0, 1350.0] }
velocity = { kind = "layered", z_interface = 879.75, upper = 1200.0, lower = 2500.0 }
source = { kind = "ricker", f_p = 10.0, delay = 0.05, location = [600.0, 600.0, 600.0] }
"#;
        let cfg = RunConfig::from_toml_str(text).unwrap();
        assert_eq!(cfg.problem, ProblemKind::Custom);
        assert_eq!(cfg.slices, vec![(Axis::Y, 40)]);
        assert!(matches!(
            cfg.custom.as_ref().unwrap().velocity,
            VelocityCfg::Layered { .. }
        ));
    }

    #[test]
    fn spacing_fractions() {
        assert_eq!(parse_spacing("0.1").unwrap(), 0.1);
        assert_eq!(parse_spacing("1/15").unwrap(), 1.0 / 15.0);
        assert!(parse_spacing("x").is_err());
        assert!(parse_spacing("1/0").is_err());
    }
}
