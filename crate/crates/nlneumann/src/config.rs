//! Run configuration: defaults, JSON file, then command-line overrides.

use std::path::{Path, PathBuf};

use nlneumann_core::manufactured::{CaseName, ManufacturedCase};
use nlneumann_core::quadrature::QuadratureConfig;
use serde::{Deserialize, Serialize};

use crate::harness::RunOptions;
use crate::Error;

pub const RATIO_RANGE: (f64, f64) = (2.0, 8.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureSettings {
    pub gauss_order: usize,
    pub rel_tol: f64,
    pub contour_gauss_order: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        let q = QuadratureConfig::default();
        Self { gauss_order: q.gauss_order, rel_tol: q.rel_tol, contour_gauss_order: q.contour_gauss_order }
    }
}

impl From<QuadratureSettings> for QuadratureConfig {
    fn from(q: QuadratureSettings) -> Self {
        QuadratureConfig { gauss_order: q.gauss_order, rel_tol: q.rel_tol, contour_gauss_order: q.contour_gauss_order }
    }
}

/// A fully resolved convergence run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub case: CaseName,
    pub ratio: f64,
    /// Grid spacings, coarse to fine.
    pub h_levels: Vec<f64>,
    pub solver_tol: f64,
    pub quadrature: QuadratureSettings,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            case: CaseName::T1Square,
            ratio: 4.0,
            h_levels: vec![0.125, 0.0625, 0.03125, 0.015625],
            solver_tol: crate::solver::DEFAULT_TOL,
            quadrature: QuadratureSettings::default(),
            output_dir: PathBuf::from("out"),
        }
    }
}

/// Config file contents; absent fields keep the lower-precedence value.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub case: Option<String>,
    pub ratio: Option<f64>,
    pub h_levels: Option<Vec<f64>>,
    pub solver_tol: Option<f64>,
    pub quadrature: Option<QuadratureSettings>,
    pub output_dir: Option<PathBuf>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, Error> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::Config(format!("field `{path}`: {}", e.into_inner()))
        })
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            e => e,
        })
    }
}

/// Command-line overrides.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub case: Option<String>,
    pub ratio: Option<f64>,
    pub h_levels: Option<Vec<f64>>,
    pub solver_tol: Option<f64>,
    pub output_dir: Option<PathBuf>,
}

impl RunConfig {
    /// Defaults, then `file`, then `flags`.
    pub fn resolve(file: Option<ConfigFile>, flags: Overrides) -> Result<Self, Error> {
        let mut cfg = RunConfig::default();
        let file = file.unwrap_or_default();
        let case = flags.case.or(file.case);
        if let Some(c) = case {
            cfg.case = c.parse().map_err(|e| Error::Config(format!("field `case`: {e}")))?;
        }
        if let Some(r) = flags.ratio.or(file.ratio) {
            cfg.ratio = r;
        }
        match flags.h_levels.or(file.h_levels) {
            Some(h) => cfg.h_levels = h,
            None => {
                // Default levels whose horizon would reach the boundary's reach are dropped.
                let reach = ManufacturedCase::new(cfg.case).domain().reach();
                cfg.h_levels.retain(|&h| cfg.ratio * h < reach);
            }
        }
        if let Some(t) = flags.solver_tol.or(file.solver_tol) {
            cfg.solver_tol = t;
        }
        if let Some(q) = file.quadrature {
            cfg.quadrature = q;
        }
        if let Some(o) = flags.output_dir.or(file.output_dir) {
            cfg.output_dir = o;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), Error> {
        let (lo, hi) = RATIO_RANGE;
        if !(self.ratio > lo && self.ratio <= hi) {
            return Err(Error::Config(format!("field `ratio`: {} is outside ({lo}, {hi}]", self.ratio)));
        }
        if self.h_levels.is_empty() {
            return Err(Error::Config("field `h_levels`: empty".into()));
        }
        for &h in &self.h_levels {
            if dyadic_exponent(h).is_none() {
                return Err(Error::Config(format!("field `h_levels`: {h} is not of the form 2^-k")));
            }
        }
        if self.h_levels.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Config("field `h_levels`: spacings must decrease".into()));
        }
        if !(self.solver_tol > 0.0 && self.solver_tol < 1.0) {
            return Err(Error::Config(format!("field `solver_tol`: {} is outside (0, 1)", self.solver_tol)));
        }
        QuadratureConfig::from(self.quadrature)
            .validate()
            .map_err(|e| Error::Config(format!("field `quadrature`: {e}")))
    }

    pub fn run_options(&self) -> RunOptions {
        let mut opts = RunOptions { solver_tol: self.solver_tol, ..RunOptions::default() };
        opts.assembly.quadrature = self.quadrature.into();
        opts
    }
}

/// `k` with `h = 2^-k`, for `k` in `0..=20`.
pub fn dyadic_exponent(h: f64) -> Option<u32> {
    (0..=20).find(|&k| h == 0.5f64.powi(k as i32))
}

/// Parses `0.125`, `1/8` or `2^-3`.
pub fn parse_spacing(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let value = if let Some(e) = s.strip_prefix("2^") {
        e.parse::<i32>().map(|k| 2f64.powi(k)).map_err(|e| e.to_string())?
    } else if let Some((a, b)) = s.split_once('/') {
        let a: f64 = a.trim().parse().map_err(|e| format!("{e}"))?;
        let b: f64 = b.trim().parse().map_err(|e| format!("{e}"))?;
        a / b
    } else {
        s.parse().map_err(|e| format!("{e}"))?
    };
    dyadic_exponent(value).map(|_| value).ok_or_else(|| format!("{s} is not of the form 2^-k"))
}
