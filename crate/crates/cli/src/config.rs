use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use widths_core::sweepout::MIN_SAMPLES;
use widths_core::{tol, QuadratureGrid};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSize {
    pub n_theta: usize,
    pub n_rho: usize,
}

/// Contents of a `--config` file. Every field is optional; flags win.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: Option<u32>,
    /// Known keys: `geometric`, `margin`.
    pub tolerances: BTreeMap<String, f64>,
    pub grid: Option<GridSize>,
    pub samples: Option<usize>,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::no_input(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::data(format!("config {}: {e}", path.display())))
    }
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub seed: u32,
    pub geometric_tol: f64,
    pub margin: f64,
    pub grid: QuadratureGrid,
    pub samples: usize,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

pub struct Flags {
    pub seed: Option<u32>,
    pub tol: Vec<String>,
    pub grid: Option<String>,
    pub samples: Option<usize>,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

fn parse_grid(s: &str) -> Result<GridSize, CliError> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| CliError::usage(format!("grid must look like 256x512, got {s:?}")))?;
    let n = |t: &str| t.trim().parse::<usize>().map_err(|_| CliError::usage(format!("bad grid size {t:?}")));
    Ok(GridSize { n_theta: n(a)?, n_rho: n(b)? })
}

fn parse_tol(s: &str) -> Result<(String, f64), CliError> {
    let (key, value) = match s.split_once('=') {
        Some((k, v)) => (k.trim().to_string(), v),
        None => ("geometric".to_string(), s),
    };
    let v = value.trim().parse::<f64>().map_err(|_| CliError::usage(format!("bad tolerance {s:?}")))?;
    Ok((key, v))
}

impl Settings {
    pub fn resolve(flags: Flags, config: Option<RunConfig>) -> Result<Self, CliError> {
        let cfg = config.unwrap_or_default();
        let mut tolerances = cfg.tolerances.clone();
        for t in &flags.tol {
            let (k, v) = parse_tol(t)?;
            tolerances.insert(k, v);
        }
        let mut geometric_tol = tol::DEFAULT_GEOMETRIC;
        let mut margin = 1e-6;
        for (k, v) in tolerances {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::usage(format!("tolerance {k} must be positive, got {v}")));
            }
            match k.as_str() {
                "geometric" => geometric_tol = v,
                "margin" => margin = v,
                _ => return Err(CliError::usage(format!("unknown tolerance {k:?} (known: geometric, margin)"))),
            }
        }
        let grid_size = match flags.grid.as_deref() {
            Some(s) => parse_grid(s)?,
            None => cfg.grid.unwrap_or(GridSize { n_theta: 256, n_rho: 512 }),
        };
        let grid = QuadratureGrid::new(grid_size.n_theta, grid_size.n_rho).map_err(CliError::from_core_usage)?;
        let samples = flags.samples.or(cfg.samples).unwrap_or(4096);
        if samples < MIN_SAMPLES {
            return Err(CliError::usage(format!("sampling budget {samples} is below the minimum {MIN_SAMPLES}")));
        }
        Ok(Self {
            seed: flags.seed.or(cfg.seed).unwrap_or(0),
            geometric_tol,
            margin,
            grid,
            samples,
            out: flags.out.or(cfg.out),
            svg: flags.svg.or(cfg.svg),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags() -> Flags {
        Flags { seed: None, tol: Vec::new(), grid: None, samples: None, out: None, svg: None }
    }

    #[test]
    fn flags_override_config() {
        let cfg = RunConfig { seed: Some(3), samples: Some(2000), ..RunConfig::default() };
        let s = Settings::resolve(Flags { seed: Some(9), ..flags() }, Some(cfg)).unwrap();
        assert_eq!((s.seed, s.samples), (9, 2000));
    }

    #[test]
    fn tolerance_and_grid_syntax() {
        let s = Settings::resolve(
            Flags { tol: vec!["1e-9".into(), "margin=1e-5".into()], grid: Some("64x128".into()), ..flags() },
            None,
        )
        .unwrap();
        assert_eq!((s.geometric_tol, s.margin), (1e-9, 1e-5));
        assert_eq!((s.grid.n_theta, s.grid.n_rho), (64, 128));
        assert!(Settings::resolve(Flags { tol: vec!["speed=1".into()], ..flags() }, None).is_err());
        assert!(Settings::resolve(Flags { grid: Some("4x4".into()), ..flags() }, None).is_err());
        assert!(Settings::resolve(Flags { samples: Some(10), ..flags() }, None).is_err());
    }

    #[test]
    fn config_rejects_unknown_fields() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"seed": 1, "colour": "red"}"#).is_err());
        let c: RunConfig = serde_json::from_str(r#"{"grid": {"n_theta": 32, "n_rho": 64}}"#).unwrap();
        assert_eq!(c.grid, Some(GridSize { n_theta: 32, n_rho: 64 }));
    }
}
