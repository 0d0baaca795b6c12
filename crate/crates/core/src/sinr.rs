//! Downlink SINR against a station layout and the Monte Carlo driver.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::placement::{
    generate_hexagonal, generate_poisson, LayoutModel, NetworkLayout, Point, TorusRegion,
};
use crate::rng;

/// Power-law propagation: received power `P·K·r^(-η)` per subcarrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationModel {
    path_gain_constant: f64,
    path_loss_exponent: f64,
    tx_power: f64,
    thermal_noise: f64,
}

impl PropagationModel {
    pub fn new(
        path_gain_constant: f64,
        path_loss_exponent: f64,
        tx_power: f64,
        thermal_noise: f64,
    ) -> Result<Self> {
        // interference sums over a finite torus are finite for any positive
        // exponent; η > 2 is enforced where the fluid model needs it
        if !(path_loss_exponent > 0.0 && path_loss_exponent.is_finite()) {
            return Err(Error::Config(format!(
                "path-loss exponent must be positive, got {path_loss_exponent}"
            )));
        }
        if !(path_gain_constant > 0.0 && path_gain_constant.is_finite()) {
            return Err(Error::Config(format!(
                "K must be positive, got {path_gain_constant}"
            )));
        }
        if !(tx_power > 0.0 && tx_power.is_finite()) {
            return Err(Error::Config(format!("P must be positive, got {tx_power}")));
        }
        if !(thermal_noise >= 0.0 && thermal_noise.is_finite()) {
            return Err(Error::Config(format!(
                "thermal noise must be >= 0, got {thermal_noise}"
            )));
        }
        Ok(PropagationModel {
            path_gain_constant,
            path_loss_exponent,
            tx_power,
            thermal_noise,
        })
    }

    /// Interference-limited model with `K = P = 1` and no thermal noise.
    pub fn interference_limited(path_loss_exponent: f64) -> Result<Self> {
        Self::new(1.0, path_loss_exponent, 1.0, 0.0)
    }

    pub fn path_gain_constant(&self) -> f64 {
        self.path_gain_constant
    }

    pub fn path_loss_exponent(&self) -> f64 {
        self.path_loss_exponent
    }

    pub fn tx_power(&self) -> f64 {
        self.tx_power
    }

    pub fn thermal_noise(&self) -> f64 {
        self.thermal_noise
    }

    pub fn with_exponent(&self, path_loss_exponent: f64) -> Result<Self> {
        Self::new(
            self.path_gain_constant,
            path_loss_exponent,
            self.tx_power,
            self.thermal_noise,
        )
    }

    /// Received power from a station at squared distance `dist_sq`.
    fn received_power_sq(&self, dist_sq: f64) -> f64 {
        self.tx_power
            * self.path_gain_constant
            * (-0.5 * self.path_loss_exponent * dist_sq.ln()).exp()
    }
}

/// `K · distance^(-η)`.
pub fn path_gain(model: &PropagationModel, distance: f64) -> Result<f64> {
    if !(distance > 0.0) {
        return Err(Error::NonPositiveDistance(distance));
    }
    Ok(model.path_gain_constant * distance.powf(-model.path_loss_exponent))
}

/// Index of the closest station (maximum path gain); ties go to the lowest index.
pub fn best_server(layout: &NetworkLayout, u: Point) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, &s) in layout.stations.iter().enumerate() {
        let d = layout.region.distance_sq(u, s);
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    best
}

/// Linear SINR of a user at `u` served by its best server, with every other
/// station of the layout interfering.
pub fn sinr(layout: &NetworkLayout, model: &PropagationModel, u: Point) -> Result<f64> {
    if layout.is_empty() {
        return Err(Error::InsufficientStations("layout has no station".into()));
    }
    let server = best_server(layout, u);
    let dist_sq: Vec<f64> = layout
        .stations
        .iter()
        .map(|&s| layout.region.distance_sq(u, s))
        .collect();
    sinr_from_distances(model, server, &dist_sq)
}

fn sinr_from_distances(model: &PropagationModel, server: usize, dist_sq: &[f64]) -> Result<f64> {
    if model.thermal_noise == 0.0 && dist_sq.len() < 2 {
        return Err(Error::NoInterference);
    }
    let d = dist_sq[server];
    if !(d > 0.0) {
        return Err(Error::NonPositiveDistance(d.sqrt()));
    }
    let signal = model.received_power_sq(d);
    let interference: f64 = dist_sq
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != server)
        .map(|(_, &dj)| model.received_power_sq(dj))
        .sum();
    Ok(signal / (interference + model.thermal_noise))
}

/// Moves `u` radially away from `server` so it sits at least `radius` from it.
/// A user exactly on the station is pushed along +x.
pub fn clamp_to_exclusion(region: &TorusRegion, server: Point, u: Point, radius: f64) -> Point {
    let (dx, dy) = region.displacement(server, u);
    let d = (dx * dx + dy * dy).sqrt();
    if d >= radius {
        return u;
    }
    let (ux, uy) = if d > 0.0 {
        (dx / d, dy / d)
    } else {
        (1.0, 0.0)
    };
    region.wrap(Point::new(server.x + ux * radius, server.y + uy * radius))
}

/// Fixed set of users, drawn once per experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct UserSet {
    pub points: Vec<Point>,
    pub seed: u64,
    pub exclusion_radius: f64,
}

impl UserSet {
    pub fn draw(region: &TorusRegion, count: usize, seed: u64, exclusion_radius: f64) -> Self {
        let mut g = rng::stream_rng(seed, rng::USER_STREAM);
        let points = (0..count).map(|_| region.sample_uniform(&mut g)).collect();
        UserSet {
            points,
            seed,
            exclusion_radius,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Pooled linear SINR samples for one path-loss exponent. Samples are stored
/// run-major: sample `i` belongs to run `i / users_per_run`.
#[derive(Debug, Clone, PartialEq)]
pub struct SinrSampleSet {
    pub samples: Vec<f64>,
    pub eta: f64,
    pub runs: usize,
    pub users_per_run: usize,
    pub layout_model: LayoutModel,
    pub seed: u64,
    pub config_digest: String,
}

impl SinrSampleSet {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn db_values(&self) -> Vec<f64> {
        self.samples.iter().map(|&g| to_db(g)).collect()
    }

    /// Writes `run,ue_id,sinr_linear,sinr_db` rows.
    pub fn write_csv<W: Write>(&self, w: &mut W, extra: &[(&str, String)]) -> Result<()> {
        writeln!(w, "# config_digest={}", self.config_digest)?;
        writeln!(w, "# model={}", self.layout_model)?;
        writeln!(w, "# eta={}", self.eta)?;
        writeln!(w, "# seed={}", self.seed)?;
        writeln!(w, "# runs={}", self.runs)?;
        for (k, v) in extra {
            writeln!(w, "# {k}={v}")?;
        }
        writeln!(w, "run,ue_id,sinr_linear,sinr_db")?;
        for (i, &g) in self.samples.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{}",
                i / self.users_per_run,
                i % self.users_per_run,
                g,
                to_db(g)
            )?;
        }
        Ok(())
    }
}

pub fn to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// How each Monte Carlo run obtains its layout.
#[derive(Debug, Clone, PartialEq)]
pub enum LayoutSource {
    /// Fresh Poisson layout per run, seeded from the run's sub-seed.
    Poisson { region: TorusRegion, density: f64 },
    /// The hexagonal lattice. With `random_offset`, run `k` translates the
    /// lattice by a uniform vector drawn from its sub-seed, which is the same
    /// as drawing fresh user positions relative to the grid.
    Hexagonal {
        half_isd: f64,
        rings: u32,
        random_offset: bool,
    },
}

impl LayoutSource {
    pub fn model(&self) -> LayoutModel {
        match self {
            LayoutSource::Poisson { .. } => LayoutModel::Poisson,
            LayoutSource::Hexagonal { .. } => LayoutModel::Hexagonal,
        }
    }

    /// Half inter-site distance the exclusion radius is measured against.
    pub fn half_isd(&self) -> f64 {
        match self {
            LayoutSource::Poisson { density, .. } => {
                crate::placement::half_isd_for_density(*density)
            }
            LayoutSource::Hexagonal { half_isd, .. } => *half_isd,
        }
    }

    pub fn region(&self) -> Result<TorusRegion> {
        match self {
            LayoutSource::Poisson { region, .. } => Ok(*region),
            LayoutSource::Hexagonal {
                half_isd, rings, ..
            } => Ok(generate_hexagonal(*half_isd, *rings, 0)?.region),
        }
    }

    fn layout_for_run(&self, seed: u64, run: u64) -> Result<NetworkLayout> {
        let run_seed = rng::sub_seed(seed, run);
        match self {
            LayoutSource::Poisson { region, density } => {
                generate_poisson(*region, *density, run_seed)
            }
            LayoutSource::Hexagonal {
                half_isd,
                rings,
                random_offset,
            } => {
                let base = generate_hexagonal(*half_isd, *rings, run_seed)?;
                if !random_offset {
                    return Ok(base);
                }
                let mut g = rng::seeded_rng(run_seed);
                let shift = base.region.sample_uniform(&mut g);
                Ok(base.translated(shift.x, shift.y))
            }
        }
    }
}

/// Everything a Monte Carlo experiment needs apart from the exponent list.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloSpec {
    pub source: LayoutSource,
    pub users: usize,
    pub runs: usize,
    pub seed: u64,
    /// Exclusion radius as a fraction of the half inter-site distance.
    pub exclusion: f64,
    pub propagation: PropagationModel,
    pub config_digest: String,
}

/// Runs the experiment once and returns one pooled sample set per entry of
/// `etas`, in the same order. Every exponent sees the same layouts and users.
///
/// Runs are evaluated in parallel and merged by run index, so the result does
/// not depend on scheduling.
pub fn run_monte_carlo(spec: &MonteCarloSpec, etas: &[f64]) -> Result<Vec<SinrSampleSet>> {
    if spec.runs == 0 || spec.users == 0 {
        return Err(Error::Config("runs and users must be at least 1".into()));
    }
    if etas.is_empty() {
        return Err(Error::Config("no path-loss exponent requested".into()));
    }
    if !(spec.exclusion > 0.0 && spec.exclusion < 1.0) {
        return Err(Error::Config(format!(
            "exclusion must lie in (0, 1), got {}",
            spec.exclusion
        )));
    }
    let models = etas
        .iter()
        .map(|&eta| spec.propagation.with_exponent(eta))
        .collect::<Result<Vec<_>>>()?;
    let region = spec.source.region()?;
    let radius = spec.exclusion * spec.source.half_isd();
    let users = UserSet::draw(&region, spec.users, spec.seed, radius);

    let per_run: Vec<Vec<Vec<f64>>> = (1..=spec.runs as u64)
        .into_par_iter()
        .map(|run| {
            let layout = spec.source.layout_for_run(spec.seed, run)?;
            if layout.len() < 2 {
                return Err(Error::InsufficientStations(format!(
                    "run {run} produced {} station(s)",
                    layout.len()
                )));
            }
            evaluate_users(&layout, &users, &models)
        })
        .collect::<Result<_>>()?;

    Ok(models
        .iter()
        .enumerate()
        .map(|(m, model)| SinrSampleSet {
            samples: per_run.iter().flat_map(|r| r[m].iter().copied()).collect(),
            eta: model.path_loss_exponent,
            runs: spec.runs,
            users_per_run: spec.users,
            layout_model: spec.source.model(),
            seed: spec.seed,
            config_digest: spec.config_digest.clone(),
        })
        .collect())
}

/// SINR of every user for every model, indexed `[model][user]`.
fn evaluate_users(
    layout: &NetworkLayout,
    users: &UserSet,
    models: &[PropagationModel],
) -> Result<Vec<Vec<f64>>> {
    let mut out = vec![Vec::with_capacity(users.len()); models.len()];
    let mut dist_sq = vec![0.0; layout.len()];
    for &u0 in &users.points {
        let server = best_server(layout, u0);
        let u = clamp_to_exclusion(
            &layout.region,
            layout.stations[server],
            u0,
            users.exclusion_radius,
        );
        for (d, &s) in dist_sq.iter_mut().zip(&layout.stations) {
            *d = layout.region.distance_sq(u, s);
        }
        for (m, model) in models.iter().enumerate() {
            out[m].push(sinr_from_distances(model, server, &dist_sq)?);
        }
    }
    Ok(out)
}
