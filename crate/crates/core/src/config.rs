//! Experiment configuration.
//!
//! Config files are line based: `key = value`, `#` starts a comment, blank
//! lines are ignored. Unknown keys are an error. Command-line flags are
//! applied afterwards through [`ExperimentConfig::set`].

use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fluid::{CellShape, FitCoefficients, FluidCdf, FluidModel, DEFAULT_CURVE_POINTS};
use crate::placement::{hexagonal_density, region_for_expected_count, TorusRegion};
use crate::sinr::{LayoutSource, MonteCarloSpec, PropagationModel};

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub half_isd: f64,
    pub expected_stations: f64,
    pub etas: Vec<f64>,
    pub runs: usize,
    pub users: usize,
    pub seed: u64,
    pub exclusion: f64,
    pub density_scale: f64,
    pub noise_w: f64,
    pub tx_power_w: f64,
    pub path_gain_k: f64,
    /// Rings of the hexagonal reference layout.
    pub rings: u32,
    /// Exponents of `etas` inside `[fit_eta_min, fit_eta_max]` enter the linear fit.
    pub fit_eta_min: f64,
    pub fit_eta_max: f64,
    /// Correction used for the fitted-fluid curves.
    pub correction: FitCoefficients,
    pub outage_thresholds_db: Vec<f64>,
    pub cell_shape: CellShape,
    pub curve_points: usize,
    pub cdf_rows: usize,
    pub correlation_points: usize,
    pub export_samples: bool,
    pub export_layouts: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            half_isd: 1.0,
            expected_stations: 50.0,
            etas: default_etas(),
            runs: 100,
            users: 2000,
            seed: 1,
            exclusion: 0.01,
            density_scale: 1.0,
            noise_w: 0.0,
            tx_power_w: 1.0,
            path_gain_k: 1.0,
            rings: 4,
            fit_eta_min: 2.6,
            fit_eta_max: 3.8,
            correction: FitCoefficients::CANONICAL,
            outage_thresholds_db: vec![-5.0, 0.0, 5.0, 10.0],
            cell_shape: CellShape::Hexagon,
            curve_points: DEFAULT_CURVE_POINTS,
            cdf_rows: 1000,
            correlation_points: crate::stats::DEFAULT_CORRELATION_POINTS,
            export_samples: false,
            export_layouts: 0,
        }
    }
}

/// `2.2, 2.4, …, 4.2`.
pub fn default_etas() -> Vec<f64> {
    (0..11).map(|i| (22 + 2 * i) as f64 / 10.0).collect()
}

/// Parses `a,b,c` or `start:stop:step` (inclusive).
pub fn parse_f64_list(value: &str) -> Result<Vec<f64>> {
    let value = value.trim();
    if value.is_empty() {
        return Ok(Vec::new());
    }
    if let Some((start, rest)) = value.split_once(':') {
        let (stop, step) = rest
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("range `{value}` must be start:stop:step")))?;
        let (start, stop, step) = (parse_f64(start)?, parse_f64(stop)?, parse_f64(step)?);
        if !(step > 0.0) || stop < start {
            return Err(Error::Config(format!("bad range `{value}`")));
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        return Ok((0..=n).map(|i| round10(start + i as f64 * step)).collect());
    }
    value.split(',').map(parse_f64).collect()
}

fn round10(x: f64) -> f64 {
    format!("{x:.10}").parse().unwrap_or(x)
}

fn parse_f64(s: &str) -> Result<f64> {
    let s = s.trim();
    let v: f64 = s
        .parse()
        .map_err(|_| Error::Config(format!("`{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(Error::Config(format!("`{s}` is not finite")));
    }
    Ok(v)
}

fn parse_int<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Config(format!("`{}` is not a non-negative integer", s.trim())))
}

fn parse_bool(s: &str) -> Result<bool> {
    match s.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(Error::Config(format!("`{other}` is not a boolean"))),
    }
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Formats an exponent for file names: `3.0`, `2.8`, `2.65`.
pub fn eta_label(eta: f64) -> String {
    if eta.fract() == 0.0 {
        format!("{eta:.1}")
    } else {
        eta.to_string()
    }
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Defaults overridden by the `key = value` lines of `text`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut config = ExperimentConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            config
                .set(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(config)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "half_isd" => self.half_isd = parse_f64(value)?,
            "expected_stations" => self.expected_stations = parse_f64(value)?,
            "eta" | "eta_list" => self.etas = parse_f64_list(value)?,
            "runs" => self.runs = parse_int(value)?,
            "users" => self.users = parse_int(value)?,
            "seed" => self.seed = parse_int(value)?,
            "exclusion" => self.exclusion = parse_f64(value)?,
            "density_scale" => self.density_scale = parse_f64(value)?,
            "noise_w" => self.noise_w = parse_f64(value)?,
            "tx_power_w" => self.tx_power_w = parse_f64(value)?,
            "path_gain_k" => self.path_gain_k = parse_f64(value)?,
            "rings" => self.rings = parse_int(value)?,
            "fit_eta_min" => self.fit_eta_min = parse_f64(value)?,
            "fit_eta_max" => self.fit_eta_max = parse_f64(value)?,
            "correction_a" => self.correction.a = parse_f64(value)?,
            "correction_b" => self.correction.b = parse_f64(value)?,
            "outage_thresholds_db" => self.outage_thresholds_db = parse_f64_list(value)?,
            "cell_shape" => {
                self.cell_shape = CellShape::parse(value)
                    .ok_or_else(|| Error::Config(format!("unknown cell shape `{value}`")))?
            }
            "curve_points" => self.curve_points = parse_int(value)?,
            "cdf_rows" => self.cdf_rows = parse_int(value)?,
            "correlation_points" => self.correlation_points = parse_int(value)?,
            "export_samples" => self.export_samples = parse_bool(value)?,
            "export_layouts" => self.export_layouts = parse_int(value)?,
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.etas.is_empty() {
            return bad("at least one path-loss exponent is required".into());
        }
        if let Some(eta) = self.etas.iter().find(|&&e| !(e > 2.0)) {
            return bad(format!("every path-loss exponent must exceed 2, got {eta}"));
        }
        if self.runs == 0 || self.users == 0 {
            return bad("runs and users must be at least 1".into());
        }
        if !(self.density_scale > 0.0) {
            return bad(format!(
                "density_scale must be positive, got {}",
                self.density_scale
            ));
        }
        if !(self.half_isd > 0.0) {
            return bad(format!("half_isd must be positive, got {}", self.half_isd));
        }
        if !(self.expected_stations > 0.0) {
            return bad(format!(
                "expected_stations must be positive, got {}",
                self.expected_stations
            ));
        }
        if !(self.exclusion > 0.0 && self.exclusion < 1.0) {
            return bad(format!(
                "exclusion must lie in (0, 1), got {}",
                self.exclusion
            ));
        }
        if self.rings == 0 {
            return bad("rings must be at least 1".into());
        }
        if self.curve_points < 2 || self.cdf_rows < 2 || self.correlation_points < 2 {
            return bad("curve_points, cdf_rows and correlation_points must be at least 2".into());
        }
        PropagationModel::new(
            self.path_gain_k,
            self.etas[0],
            self.tx_power_w,
            self.noise_w,
        )?;
        Ok(())
    }

    /// Stable `key = value` rendering of every field; input of the digest.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        line("half_isd", self.half_isd.to_string());
        line("expected_stations", self.expected_stations.to_string());
        line("eta", join(&self.etas));
        line("runs", self.runs.to_string());
        line("users", self.users.to_string());
        line("seed", self.seed.to_string());
        line("exclusion", self.exclusion.to_string());
        line("density_scale", self.density_scale.to_string());
        line("noise_w", self.noise_w.to_string());
        line("tx_power_w", self.tx_power_w.to_string());
        line("path_gain_k", self.path_gain_k.to_string());
        line("rings", self.rings.to_string());
        line("fit_eta_min", self.fit_eta_min.to_string());
        line("fit_eta_max", self.fit_eta_max.to_string());
        line("correction_a", self.correction.a.to_string());
        line("correction_b", self.correction.b.to_string());
        line("outage_thresholds_db", join(&self.outage_thresholds_db));
        line("cell_shape", self.cell_shape.as_str().to_string());
        line("curve_points", self.curve_points.to_string());
        line("cdf_rows", self.cdf_rows.to_string());
        line("correlation_points", self.correlation_points.to_string());
        line("export_samples", self.export_samples.to_string());
        line("export_layouts", self.export_layouts.to_string());
        s
    }

    /// First 16 hex digits of the SHA-256 of [`canonical`](Self::canonical).
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.canonical().as_bytes());
        hex::encode(&hash[..8])
    }

    /// Half inter-site distance after density scaling (`R_c / √scale`).
    pub fn effective_half_isd(&self) -> f64 {
        self.half_isd / self.density_scale.sqrt()
    }

    /// Station density after scaling.
    pub fn density(&self) -> f64 {
        hexagonal_density(self.effective_half_isd())
    }

    /// Square torus holding `expected_stations` on average at [`density`](Self::density).
    pub fn region(&self) -> Result<TorusRegion> {
        region_for_expected_count(self.effective_half_isd(), self.expected_stations)
    }

    /// Exponents of the configured list that enter the linear fit.
    pub fn fit_etas(&self) -> Vec<f64> {
        self.etas
            .iter()
            .copied()
            .filter(|&e| e >= self.fit_eta_min - 1e-9 && e <= self.fit_eta_max + 1e-9)
            .collect()
    }

    fn propagation(&self) -> Result<PropagationModel> {
        PropagationModel::new(
            self.path_gain_k,
            self.etas[0],
            self.tx_power_w,
            self.noise_w,
        )
    }

    pub fn poisson_spec(&self) -> Result<MonteCarloSpec> {
        Ok(MonteCarloSpec {
            source: LayoutSource::Poisson {
                region: self.region()?,
                density: self.density(),
            },
            users: self.users,
            runs: self.runs,
            seed: self.seed,
            exclusion: self.exclusion,
            propagation: self.propagation()?,
            config_digest: self.digest(),
        })
    }

    pub fn hexagonal_spec(&self) -> Result<MonteCarloSpec> {
        Ok(MonteCarloSpec {
            source: LayoutSource::Hexagonal {
                half_isd: self.effective_half_isd(),
                rings: self.rings,
                random_offset: true,
            },
            users: self.users,
            runs: self.runs,
            seed: self.seed,
            exclusion: self.exclusion,
            propagation: self.propagation()?,
            config_digest: self.digest(),
        })
    }

    pub fn fluid_model(&self, eta: f64) -> Result<FluidModel> {
        FluidModel::new(self.effective_half_isd(), self.density(), eta)
    }

    pub fn fluid_cdf(&self, eta: f64) -> Result<FluidCdf> {
        FluidCdf::new(self.fluid_model(eta)?, self.exclusion, self.cell_shape)
    }
}
