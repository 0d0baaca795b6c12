//! End-to-end experiments: Monte Carlo, fluid curves, shift fit and the
//! files written by the `generate`, `cdf`, `fit` and `report` commands.
//!
//! Every file starts with a `# config_digest=...` line. File names:
//! `layout_<k>.csv`, `cdf_<model>_eta<η>.csv`, `fluid_curve_eta<η>.csv`,
//! `samples_<model>_eta<η>.csv`, `compare_eta<η>.csv`, `fit.csv`,
//! `correlation.csv`, `outage.csv`, `throughput.csv`, `report.txt`.

use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use log::info;

use crate::config::{eta_label, ExperimentConfig};
use crate::error::{Error, Result};
use crate::fluid::{average_cell_throughput_in, cell_edge_throughput, FitCoefficients, FluidCdf};
use crate::placement::{generate_hexagonal, generate_poisson, NetworkLayout};
use crate::rng;
use crate::sinr::{run_monte_carlo, SinrSampleSet};
use crate::stats::{
    cdf_curve_correlation, default_p_grid, empirical_cdf, fit_linear, mean_horizontal_shift,
    write_cdf_csv, CdfCurve, EmpiricalCdf, ShiftFit, Shifted,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Poisson,
    Hexagonal,
    Fluid,
}

impl ModelKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "poisson" => Some(ModelKind::Poisson),
            "hex" | "hexagonal" => Some(ModelKind::Hexagonal),
            "fluid" => Some(ModelKind::Fluid),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Poisson => "poisson",
            ModelKind::Hexagonal => "hex",
            ModelKind::Fluid => "fluid",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Levels at which the quantile gaps between curves are measured.
fn gap_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| lo + i as f64 * step).collect()
}

/// Poisson, fluid and (optionally) hexagonal SINR distributions for one exponent.
#[derive(Debug, Clone)]
pub struct EtaAnalysis {
    pub eta: f64,
    pub poisson: EmpiricalCdf,
    pub fluid: FluidCdf,
    pub hexagonal: Option<EmpiricalCdf>,
    pub correction: FitCoefficients,
    /// Mean of `log₂(1 + γ)` over the Poisson samples.
    pub poisson_mean_efficiency: f64,
}

impl EtaAnalysis {
    pub fn fitted_fluid(&self) -> Shifted<&FluidCdf> {
        Shifted::corrected(&self.fluid, &self.correction, self.eta)
    }

    /// Mean horizontal shift of the fluid curve over the Poisson curve.
    pub fn mean_shift_db(&self) -> Result<f64> {
        mean_horizontal_shift(&self.fluid, &self.poisson, &default_p_grid())
    }

    /// `Q_fluid(p) − Q_poisson(p)`.
    pub fn raw_gap_db(&self, p: f64) -> Result<f64> {
        Ok(self.fluid.quantile(p)? - self.poisson.quantile(p)?)
    }

    /// `Q_fitted(p) − Q_poisson(p)`.
    pub fn fitted_gap_db(&self, p: f64) -> Result<f64> {
        Ok(self.fitted_fluid().quantile(p)? - self.poisson.quantile(p)?)
    }

    /// Mean absolute fitted-vs-Poisson quantile gap over `p ∈ [0.05, 0.95]`.
    pub fn fitted_mean_abs_gap_db(&self) -> Result<f64> {
        let grid = gap_grid(0.05, 0.95, 0.01);
        let mut total = 0.0;
        for &p in &grid {
            total += self.fitted_gap_db(p)?.abs();
        }
        Ok(total / grid.len() as f64)
    }

    /// Smallest raw fluid-minus-Poisson gap over `p ∈ [0.1, 0.9]`.
    pub fn min_raw_gap_db(&self) -> Result<f64> {
        gap_grid(0.1, 0.9, 0.01)
            .into_iter()
            .map(|p| self.raw_gap_db(p))
            .try_fold(f64::INFINITY, |m, g| Ok(m.min(g?)))
    }

    /// Correlation between the fitted-fluid and Poisson CDF curves.
    pub fn zeta(&self, points: usize) -> Result<f64> {
        cdf_curve_correlation(&self.fitted_fluid(), &self.poisson, points)
    }

    /// Fluid median minus hexagonal median.
    pub fn hexagonal_median_gap_db(&self) -> Result<Option<f64>> {
        match &self.hexagonal {
            Some(h) => Ok(Some(self.fluid.quantile(0.5)? - h.quantile(0.5)?)),
            None => Ok(None),
        }
    }
}

/// All per-exponent analyses of one configuration.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub config: ExperimentConfig,
    pub digest: String,
    pub etas: Vec<EtaAnalysis>,
}

impl Analysis {
    /// Runs the Poisson (and optionally hexagonal) Monte Carlo for `etas`.
    pub fn run(config: &ExperimentConfig, etas: &[f64], with_hexagonal: bool) -> Result<Self> {
        config.validate()?;
        let digest = config.digest();
        info!(
            "poisson monte carlo: {} runs x {} users, {} exponents",
            config.runs,
            config.users,
            etas.len()
        );
        let poisson = run_monte_carlo(&config.poisson_spec()?, etas)?;
        let hexagonal = if with_hexagonal {
            info!("hexagonal monte carlo: {} rings", config.rings);
            Some(run_monte_carlo(&config.hexagonal_spec()?, etas)?)
        } else {
            None
        };
        let mut out = Vec::with_capacity(etas.len());
        for (i, (&eta, samples)) in etas.iter().zip(&poisson).enumerate() {
            let mean_se = samples
                .samples
                .iter()
                .map(|g| (1.0 + g).log2())
                .sum::<f64>()
                / samples.len() as f64;
            out.push(EtaAnalysis {
                eta,
                poisson: empirical_cdf(samples)?,
                fluid: config.fluid_cdf(eta)?,
                hexagonal: match &hexagonal {
                    Some(h) => Some(empirical_cdf(&h[i])?),
                    None => None,
                },
                correction: config.correction,
                poisson_mean_efficiency: mean_se,
            });
        }
        Ok(Analysis {
            config: config.clone(),
            digest,
            etas: out,
        })
    }

    pub fn get(&self, eta: f64) -> Option<&EtaAnalysis> {
        self.etas.iter().find(|a| (a.eta - eta).abs() < 1e-9)
    }

    /// Linear fit of the mean shifts of every analysed exponent inside the fit range.
    pub fn fit(&self) -> Result<ShiftFit> {
        let (lo, hi) = (
            self.config.fit_eta_min - 1e-9,
            self.config.fit_eta_max + 1e-9,
        );
        let mut etas = Vec::new();
        let mut shifts = Vec::new();
        for a in self.etas.iter().filter(|a| a.eta >= lo && a.eta <= hi) {
            etas.push(a.eta);
            shifts.push(a.mean_shift_db()?);
        }
        fit_linear(&etas, &shifts)
    }
}

fn digest_header(config: &ExperimentConfig) -> Vec<(&'static str, String)> {
    vec![("config_digest", config.digest())]
}

fn create(dir: &Path, name: &str) -> Result<(PathBuf, BufWriter<File>)> {
    let path = dir.join(name);
    let file = File::create(&path)?;
    Ok((path, BufWriter::new(file)))
}

fn write_with_digest<W: Write>(
    w: &mut W,
    config: &ExperimentConfig,
    extra: &[(&str, String)],
) -> Result<()> {
    writeln!(w, "# config_digest={}", config.digest())?;
    for (k, v) in extra {
        writeln!(w, "# {k}={v}")?;
    }
    Ok(())
}

/// Layout of Monte Carlo run `run` (1-based) for the given model.
pub fn layout_for(config: &ExperimentConfig, model: ModelKind, run: u64) -> Result<NetworkLayout> {
    config.validate()?;
    match model {
        ModelKind::Poisson => generate_poisson(
            config.region()?,
            config.density(),
            rng::sub_seed(config.seed, run),
        ),
        ModelKind::Hexagonal => {
            generate_hexagonal(config.effective_half_isd(), config.rings, config.seed)
        }
        ModelKind::Fluid => Err(Error::Config(
            "the fluid model has no station layout".into(),
        )),
    }
}

/// Writes the layout of run 1 as CSV to `w`.
pub fn cmd_generate<W: Write>(
    config: &ExperimentConfig,
    model: ModelKind,
    w: &mut W,
) -> Result<NetworkLayout> {
    let layout = layout_for(config, model, 1)?;
    info!(
        "{} layout: {} stations (expected {:.1}), {} redraw(s)",
        model,
        layout.len(),
        config.density() * layout.region.area(),
        layout.redraws
    );
    layout.write_csv(w, &digest_header(config))?;
    Ok(layout)
}

/// Writes per-exponent CDF files for one model into `dir`.
pub fn cmd_cdf(config: &ExperimentConfig, model: ModelKind, dir: &Path) -> Result<Vec<PathBuf>> {
    config.validate()?;
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    match model {
        ModelKind::Fluid => {
            for &eta in &config.etas {
                written.extend(write_fluid_files(config, &config.fluid_cdf(eta)?, dir)?);
            }
        }
        ModelKind::Poisson | ModelKind::Hexagonal => {
            let spec = if model == ModelKind::Poisson {
                config.poisson_spec()?
            } else {
                config.hexagonal_spec()?
            };
            for set in run_monte_carlo(&spec, &config.etas)? {
                written.extend(write_sample_files(config, model, &set, dir)?);
            }
            written.extend(write_layouts(config, model, dir)?);
        }
    }
    Ok(written)
}

fn write_fluid_files(
    config: &ExperimentConfig,
    fluid: &FluidCdf,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    let eta = fluid.model().eta();
    let label = eta_label(eta);
    let meta = vec![
        ("config_digest", config.digest()),
        ("model", "fluid".to_string()),
        ("eta", eta.to_string()),
        ("cell", fluid.shape().as_str().to_string()),
    ];
    let (cdf_path, mut w) = create(dir, &format!("cdf_fluid_eta{label}.csv"))?;
    write_cdf_csv(&mut w, &fluid.curve_points(config.curve_points), &meta)?;
    w.flush()?;
    let (curve_path, mut w) = create(dir, &format!("fluid_curve_eta{label}.csv"))?;
    fluid.write_curve_csv(&mut w, config.curve_points, &digest_header(config))?;
    w.flush()?;
    Ok(vec![cdf_path, curve_path])
}

fn write_sample_files(
    config: &ExperimentConfig,
    model: ModelKind,
    set: &SinrSampleSet,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    let label = eta_label(set.eta);
    let meta = vec![
        ("config_digest", config.digest()),
        ("model", model.to_string()),
        ("eta", set.eta.to_string()),
        ("seed", config.seed.to_string()),
        ("runs", set.runs.to_string()),
        ("users", set.users_per_run.to_string()),
    ];
    let cdf = empirical_cdf(set)?;
    let (path, mut w) = create(dir, &format!("cdf_{model}_eta{label}.csv"))?;
    write_cdf_csv(&mut w, &cdf.curve_points(config.cdf_rows), &meta)?;
    w.flush()?;
    let mut written = vec![path];
    if config.export_samples {
        let (path, mut w) = create(dir, &format!("samples_{model}_eta{label}.csv"))?;
        set.write_csv(&mut w, &[])?;
        w.flush()?;
        written.push(path);
    }
    Ok(written)
}

fn write_layouts(config: &ExperimentConfig, model: ModelKind, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for k in 1..=config.export_layouts.min(config.runs) as u64 {
        let layout = layout_for(config, model, k)?;
        let (path, mut w) = create(dir, &format!("layout_{k}.csv"))?;
        layout.write_csv(&mut w, &digest_header(config))?;
        w.flush()?;
        written.push(path);
    }
    Ok(written)
}

/// Poisson Monte Carlo over the fit range, shift estimation and linear fit.
/// Writes `fit.csv` and one `compare_eta<η>.csv` per fitted exponent.
pub fn cmd_fit(config: &ExperimentConfig, dir: &Path) -> Result<ShiftFit> {
    config.validate()?;
    let etas = config.fit_etas();
    if etas.len() < 2 {
        return Err(Error::Config(format!(
            "the fit needs at least two exponents in [{}, {}], got {}",
            config.fit_eta_min,
            config.fit_eta_max,
            etas.len()
        )));
    }
    let analysis = Analysis::run(config, &etas, false)?;
    let fit = analysis.fit()?;
    fs::create_dir_all(dir)?;
    write_fit(config, &fit, dir)?;
    for a in &analysis.etas {
        write_comparison(config, a, &fit, dir)?;
    }
    info!(
        "fit: a = {:.4}, b = {:.4}, rms = {:.4} dB",
        fit.coefficients.a, fit.coefficients.b, fit.rms_residual_db
    );
    Ok(fit)
}

fn write_fit(config: &ExperimentConfig, fit: &ShiftFit, dir: &Path) -> Result<PathBuf> {
    let (path, mut w) = create(dir, "fit.csv")?;
    fit.write_csv(&mut w, &digest_header(config))?;
    w.flush()?;
    Ok(path)
}

fn write_comparison(
    config: &ExperimentConfig,
    a: &EtaAnalysis,
    fit: &ShiftFit,
    dir: &Path,
) -> Result<PathBuf> {
    let (path, mut w) = create(dir, &format!("compare_eta{}.csv", eta_label(a.eta)))?;
    write_with_digest(
        &mut w,
        config,
        &[
            ("eta", a.eta.to_string()),
            ("fitted_a", fit.coefficients.a.to_string()),
            ("fitted_b", fit.coefficients.b.to_string()),
            ("correction_a", a.correction.a.to_string()),
            ("correction_b", a.correction.b.to_string()),
        ],
    )?;
    writeln!(
        w,
        "p,poisson_db,fluid_db,fitted_fluid_db,corrected_fluid_db"
    )?;
    let own = Shifted::corrected(&a.fluid, &fit.coefficients, a.eta);
    let corrected = a.fitted_fluid();
    for p in gap_grid(0.01, 0.99, 0.01) {
        writeln!(
            w,
            "{},{},{},{},{}",
            p,
            a.poisson.quantile(p)?,
            a.fluid.quantile(p)?,
            own.quantile(p)?,
            corrected.quantile(p)?
        )?;
    }
    w.flush()?;
    Ok(path)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationRow {
    pub eta: f64,
    pub zeta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutageRow {
    pub eta: f64,
    pub threshold_db: f64,
    pub poisson: f64,
    pub fluid: f64,
    pub fitted_fluid: f64,
    pub hexagonal: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThroughputRow {
    pub eta: f64,
    pub cell_edge: f64,
    pub cell_average: f64,
    pub poisson_average: f64,
}

/// Everything `report` computes, alongside the files it writes.
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub config_digest: String,
    pub analysis: Analysis,
    pub fit: ShiftFit,
    pub correlation: Vec<CorrelationRow>,
    pub outage: Vec<OutageRow>,
    pub throughput: Vec<ThroughputRow>,
    pub files: Vec<PathBuf>,
}

/// Runs all three models for every configured exponent and writes the full
/// report directory.
pub fn cmd_report(config: &ExperimentConfig, dir: &Path) -> Result<ExperimentReport> {
    config.validate()?;
    if config.fit_etas().len() < 2 {
        return Err(Error::Config(
            "the report fit needs at least two exponents inside the fit range".into(),
        ));
    }
    let analysis = Analysis::run(config, &config.etas, true)?;
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    let fit = analysis.fit()?;
    files.push(write_fit(config, &fit, dir)?);

    let mut correlation = Vec::new();
    let mut outage = Vec::new();
    let mut throughput = Vec::new();
    for a in &analysis.etas {
        let label = eta_label(a.eta);
        files.extend(write_fluid_files(config, &a.fluid, dir)?);
        for (name, cdf) in [("poisson", Some(&a.poisson)), ("hex", a.hexagonal.as_ref())] {
            let Some(cdf) = cdf else { continue };
            let (path, mut w) = create(dir, &format!("cdf_{name}_eta{label}.csv"))?;
            write_cdf_csv(
                &mut w,
                &cdf.curve_points(config.cdf_rows),
                &[
                    ("config_digest", config.digest()),
                    ("model", name.to_string()),
                    ("eta", a.eta.to_string()),
                ],
            )?;
            w.flush()?;
            files.push(path);
        }
        let fitted: Vec<(f64, f64)> = a
            .fluid
            .curve_points(config.curve_points)
            .into_iter()
            .map(|(x, p)| (x - a.correction.shift_db(a.eta), p))
            .collect();
        let (path, mut w) = create(dir, &format!("cdf_fitted_eta{label}.csv"))?;
        write_cdf_csv(
            &mut w,
            &fitted,
            &[
                ("config_digest", config.digest()),
                ("model", "fitted_fluid".to_string()),
                ("eta", a.eta.to_string()),
            ],
        )?;
        w.flush()?;
        files.push(path);
        if a.eta >= config.fit_eta_min - 1e-9 && a.eta <= config.fit_eta_max + 1e-9 {
            files.push(write_comparison(config, a, &fit, dir)?);
        }

        correlation.push(CorrelationRow {
            eta: a.eta,
            zeta: a.zeta(config.correlation_points)?,
        });
        for &t in &config.outage_thresholds_db {
            outage.push(OutageRow {
                eta: a.eta,
                threshold_db: t,
                poisson: a.poisson.cdf(t),
                fluid: a.fluid.cdf(t),
                fitted_fluid: a.fitted_fluid().cdf(t),
                hexagonal: a.hexagonal.as_ref().map_or(f64::NAN, |h| h.cdf(t)),
            });
        }
        let m = a.fluid.model();
        throughput.push(ThroughputRow {
            eta: a.eta,
            cell_edge: cell_edge_throughput(m),
            cell_average: average_cell_throughput_in(m, config.exclusion, config.cell_shape)?,
            poisson_average: a.poisson_mean_efficiency,
        });
    }

    let (path, mut w) = create(dir, "correlation.csv")?;
    write_with_digest(&mut w, config, &[])?;
    writeln!(w, "eta,zeta")?;
    for r in &correlation {
        writeln!(w, "{},{}", r.eta, r.zeta)?;
    }
    w.flush()?;
    files.push(path);

    let (path, mut w) = create(dir, "outage.csv")?;
    write_with_digest(&mut w, config, &[])?;
    writeln!(w, "eta,threshold_db,poisson,fluid,fitted_fluid,hex")?;
    for r in &outage {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.eta, r.threshold_db, r.poisson, r.fluid, r.fitted_fluid, r.hexagonal
        )?;
    }
    w.flush()?;
    files.push(path);

    let (path, mut w) = create(dir, "throughput.csv")?;
    write_with_digest(
        &mut w,
        config,
        &[("cell", config.cell_shape.as_str().to_string())],
    )?;
    writeln!(
        w,
        "eta,cell_edge_bps_hz,cell_average_bps_hz,poisson_average_bps_hz"
    )?;
    for r in &throughput {
        writeln!(
            w,
            "{},{},{},{}",
            r.eta, r.cell_edge, r.cell_average, r.poisson_average
        )?;
    }
    w.flush()?;
    files.push(path);

    files.extend(write_layouts(config, ModelKind::Poisson, dir)?);

    let (path, mut w) = create(dir, "report.txt")?;
    write_summary(&mut w, config, &analysis, &fit, &correlation)?;
    w.flush()?;
    files.push(path);

    Ok(ExperimentReport {
        config_digest: config.digest(),
        analysis,
        fit,
        correlation,
        outage,
        throughput,
        files,
    })
}

fn write_summary<W: Write>(
    w: &mut W,
    config: &ExperimentConfig,
    analysis: &Analysis,
    fit: &ShiftFit,
    correlation: &[CorrelationRow],
) -> Result<()> {
    write_with_digest(w, config, &[])?;
    writeln!(w, "Fluid vs Poisson SINR comparison")?;
    writeln!(w)?;
    writeln!(
        w,
        "stations (expected): {}   runs: {}   users: {}   seed: {}",
        config.expected_stations, config.runs, config.users, config.seed
    )?;
    writeln!(
        w,
        "density scale: {}   fluid cell: {}   exclusion: {}",
        config.density_scale,
        config.cell_shape.as_str(),
        config.exclusion
    )?;
    writeln!(w)?;
    writeln!(
        w,
        "linear fit over eta in [{}, {}]: a = {:.4}, b = {:.4}, rms residual = {:.4} dB",
        config.fit_eta_min,
        config.fit_eta_max,
        fit.coefficients.a,
        fit.coefficients.b,
        fit.rms_residual_db
    )?;
    writeln!(
        w,
        "correction applied to fitted curves: a = {}, b = {}",
        config.correction.a, config.correction.b
    )?;
    writeln!(w)?;
    writeln!(
        w,
        "{:>5}  {:>10}  {:>10}  {:>10}  {:>10}  {:>10}  {:>9}",
        "eta", "shift_dB", "aeta+b", "median_gap", "fitted_gap", "hex_gap", "zeta"
    )?;
    for (a, c) in analysis.etas.iter().zip(correlation) {
        let hex = a
            .hexagonal_median_gap_db()?
            .map_or_else(|| "-".to_string(), |g| format!("{g:.3}"));
        writeln!(
            w,
            "{:>5}  {:>10.3}  {:>10.3}  {:>10.3}  {:>10.3}  {:>10}  {:>9.5}",
            eta_label(a.eta),
            a.mean_shift_db()?,
            config.correction.shift_db(a.eta),
            a.raw_gap_db(0.5)?,
            a.fitted_mean_abs_gap_db()?,
            hex,
            c.zeta
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        ExperimentConfig {
            runs: 3,
            users: 100,
            etas: vec![2.8, 3.0, 3.6],
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn model_kind_parsing() {
        assert_eq!(ModelKind::parse("hex"), Some(ModelKind::Hexagonal));
        assert_eq!(ModelKind::parse("poisson"), Some(ModelKind::Poisson));
        assert_eq!(ModelKind::parse("fluid"), Some(ModelKind::Fluid));
        assert_eq!(ModelKind::parse("voronoi"), None);
    }

    #[test]
    fn generate_rejects_fluid() {
        let mut sink = Vec::new();
        let err = cmd_generate(&small(), ModelKind::Fluid, &mut sink).unwrap_err();
        assert!(err.is_config_error());
    }

    #[test]
    fn hex_generate_row_count() {
        let mut c = small();
        c.rings = 2;
        let mut buf = Vec::new();
        cmd_generate(&c, ModelKind::Hexagonal, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 20);
    }

    #[test]
    fn fit_needs_two_exponents() {
        let mut c = small();
        c.etas = vec![3.0];
        let dir = tempfile::tempdir().unwrap();
        assert!(cmd_fit(&c, dir.path()).unwrap_err().is_config_error());
    }

    #[test]
    fn fluid_cdf_files() {
        let mut c = small();
        c.etas = vec![3.0];
        let dir = tempfile::tempdir().unwrap();
        let files = cmd_cdf(&c, ModelKind::Fluid, dir.path()).unwrap();
        assert_eq!(files.len(), 2);
        let text = fs::read_to_string(dir.path().join("cdf_fluid_eta3.0.csv")).unwrap();
        let rows: Vec<&str> = text
            .lines()
            .filter(|l| !l.starts_with('#'))
            .skip(1)
            .collect();
        assert_eq!(rows.len(), 512);
        let probs: Vec<f64> = rows
            .iter()
            .map(|r| r.split(',').nth(1).unwrap().parse().unwrap())
            .collect();
        assert!(probs.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn analysis_metrics_are_finite() {
        let a = Analysis::run(&small(), &[2.8, 3.6], true).unwrap();
        let fit = a.fit().unwrap();
        assert!(fit.coefficients.a.is_finite() && fit.coefficients.b.is_finite());
        for e in &a.etas {
            assert!(e.mean_shift_db().unwrap().is_finite());
            assert!(e.zeta(200).unwrap() <= 1.0);
            assert!(e.hexagonal_median_gap_db().unwrap().is_some());
        }
    }
}
