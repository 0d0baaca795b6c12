use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fluidsinr::experiment::{cmd_cdf, cmd_fit, cmd_generate, cmd_report, ModelKind};
use fluidsinr::{Error, ExperimentConfig};
use log::{error, info};

const EXIT_CONFIG: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(
    name = "fluidsinr",
    version,
    about = "Fluid vs Poisson cellular SINR experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a base-station layout as CSV (stdout unless --out is given)
    Generate(Shared),
    /// Write per-exponent SINR CDF files for one model
    Cdf(Shared),
    /// Fit the fluid-to-Poisson shift as a line in the path-loss exponent
    Fit(Shared),
    /// Run every model and write the full report directory
    Report(Shared),
}

#[derive(Args, Debug, Default)]
struct Shared {
    /// Config file with `key = value` lines; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<String>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Path-loss exponents: `2.6,2.8` or `2.2:4.2:0.2`
    #[arg(long)]
    eta: Option<String>,
    #[arg(long)]
    runs: Option<String>,
    #[arg(long)]
    users: Option<String>,
    /// poisson | hex | fluid
    #[arg(long, default_value = "poisson")]
    model: String,
    #[arg(long = "density-scale")]
    density_scale: Option<String>,
    #[arg(long)]
    rings: Option<String>,
    /// Also write raw per-user samples
    #[arg(long)]
    samples: bool,
}

impl Shared {
    fn config(&self) -> Result<ExperimentConfig, Error> {
        let mut config = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        let overrides = [
            ("seed", &self.seed),
            ("eta", &self.eta),
            ("runs", &self.runs),
            ("users", &self.users),
            ("density_scale", &self.density_scale),
            ("rings", &self.rings),
        ];
        for (key, value) in overrides {
            if let Some(v) = value {
                config.set(key, v)?;
            }
        }
        if self.samples {
            config.export_samples = true;
        }
        config.validate()?;
        Ok(config)
    }

    fn model(&self) -> Result<ModelKind, Error> {
        ModelKind::parse(&self.model)
            .ok_or_else(|| Error::Config(format!("unknown model `{}`", self.model)))
    }

    fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }
}

fn generate(args: &Shared) -> Result<(), Error> {
    let config = args.config()?;
    let model = args.model()?;
    match &args.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let path = dir.join("layout_1.csv");
            let mut w = BufWriter::new(File::create(&path)?);
            cmd_generate(&config, model, &mut w)?;
            w.flush()?;
            info!("wrote {}", path.display());
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            cmd_generate(&config, model, &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn log_files(dir: &Path, n: usize) {
    info!("wrote {n} file(s) to {}", dir.display());
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Generate(args) => generate(&args),
        Command::Cdf(args) => {
            let config = args.config()?;
            let dir = args.out_dir();
            let files = cmd_cdf(&config, args.model()?, &dir)?;
            log_files(&dir, files.len());
            Ok(())
        }
        Command::Fit(args) => {
            let config = args.config()?;
            let dir = args.out_dir();
            let fit = cmd_fit(&config, &dir)?;
            println!(
                "a={} b={} rms={}",
                fit.coefficients.a, fit.coefficients.b, fit.rms_residual_db
            );
            Ok(())
        }
        Command::Report(args) => {
            let config = args.config()?;
            let dir = args.out_dir();
            let report = cmd_report(&config, &dir)?;
            log_files(&dir, report.files.len());
            println!("{}", dir.join("report.txt").display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            error!("{e}");
            if e.is_config_error() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::from(EXIT_RUNTIME)
            }
        }
    }
}
