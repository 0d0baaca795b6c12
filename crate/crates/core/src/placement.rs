//! Base-station layouts on a periodic (toroidal) region.
//!
//! A [`TorusRegion`] is the fundamental cell of a 2D lattice with period
//! vectors `(width, 0)` and `(shear, height)`. With `shear = 0` it is the
//! usual rectangular torus; the hexagonal generator uses a 60° rhombus so
//! that a hexagon-shaped patch of stations wraps onto itself exactly.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng;

/// Station density of a hexagonal network with half inter-site distance `half_isd`.
pub fn hexagonal_density(half_isd: f64) -> f64 {
    3f64.sqrt() / (6.0 * half_isd * half_isd)
}

/// Inverse of [`hexagonal_density`].
pub fn half_isd_for_density(density: f64) -> f64 {
    (3f64.sqrt() / (6.0 * density)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusRegion {
    width: f64,
    height: f64,
    shear: f64,
}

impl TorusRegion {
    pub fn new(width: f64, height: f64) -> Result<Self> {
        Self::sheared(width, height, 0.0)
    }

    pub fn square(side: f64) -> Result<Self> {
        Self::new(side, side)
    }

    /// Region with period vectors `(width, 0)` and `(shear, height)`.
    ///
    /// Non-zero shear must give a reduced basis (`|shear| <= width / 2` and
    /// `shear² + height² >= width²`) so that the nine nearest periodic images
    /// always contain the closest one.
    pub fn sheared(width: f64, height: f64, shear: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite() && height > 0.0 && height.is_finite()) {
            return Err(Error::Config(format!(
                "torus region needs positive finite sides, got {width} x {height}"
            )));
        }
        if shear != 0.0 {
            let tol = 1e-9 * width * width;
            if !(shear.abs() <= 0.5 * width * (1.0 + 1e-12)
                && shear * shear + height * height >= width * width - tol)
            {
                return Err(Error::Config(format!(
                    "shear {shear} does not give a reduced period basis for {width} x {height}"
                )));
            }
        }
        Ok(TorusRegion {
            width,
            height,
            shear,
        })
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn shear(&self) -> f64 {
        self.shear
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    /// Maps `p` into `[0, width) × [0, height)`.
    pub fn wrap(&self, p: Point) -> Point {
        let n = (p.y / self.height).floor();
        let mut y = p.y - n * self.height;
        let mut x = p.x - n * self.shear;
        x -= (x / self.width).floor() * self.width;
        // floor of a value just below a multiple can land exactly on the bound
        if x >= self.width {
            x -= self.width;
        }
        if y >= self.height {
            y -= self.height;
        }
        Point::new(x.max(0.0), y.max(0.0))
    }

    /// Shortest periodic displacement vector from `p` to `q`.
    pub fn displacement(&self, p: Point, q: Point) -> (f64, f64) {
        let mut dy = q.y - p.y;
        let mut dx = q.x - p.x;
        let n = (dy / self.height).round();
        dy -= n * self.height;
        dx -= n * self.shear;
        dx -= (dx / self.width).round() * self.width;
        if self.shear == 0.0 {
            return (dx, dy);
        }
        let mut best = (dx, dy);
        let mut best_sq = dx * dx + dy * dy;
        for j in -1..=1 {
            for i in -1..=1 {
                let cx = dx + i as f64 * self.width + j as f64 * self.shear;
                let cy = dy + j as f64 * self.height;
                let d = cx * cx + cy * cy;
                if d < best_sq {
                    best_sq = d;
                    best = (cx, cy);
                }
            }
        }
        best
    }

    pub fn distance_sq(&self, p: Point, q: Point) -> f64 {
        let (dx, dy) = self.displacement(p, q);
        dx * dx + dy * dy
    }

    pub fn distance(&self, p: Point, q: Point) -> f64 {
        self.distance_sq(p, q).sqrt()
    }

    pub fn translate(&self, p: Point, dx: f64, dy: f64) -> Point {
        self.wrap(Point::new(p.x + dx, p.y + dy))
    }

    /// Uniform point over the fundamental cell.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        let u: f64 = rng.random();
        let v: f64 = rng.random();
        self.wrap(Point::new(u * self.width + v * self.shear, v * self.height))
    }
}

/// Minimum-image distance on the torus.
pub fn torus_distance(region: &TorusRegion, p: Point, q: Point) -> f64 {
    region.distance(p, q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LayoutModel {
    Hexagonal,
    Poisson,
}

impl LayoutModel {
    pub fn as_str(&self) -> &'static str {
        match self {
            LayoutModel::Hexagonal => "hex",
            LayoutModel::Poisson => "poisson",
        }
    }
}

impl fmt::Display for LayoutModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkLayout {
    pub region: TorusRegion,
    pub stations: Vec<Point>,
    pub model: LayoutModel,
    /// Stations per unit area.
    pub density: f64,
    pub seed: u64,
    /// Expected half inter-site distance.
    pub half_isd: f64,
    /// Number of zero-station Poisson draws that were discarded.
    pub redraws: u32,
}

impl NetworkLayout {
    pub fn len(&self) -> usize {
        self.stations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stations.is_empty()
    }

    /// Same layout with every station moved by `(dx, dy)` modulo the region.
    pub fn translated(&self, dx: f64, dy: f64) -> NetworkLayout {
        NetworkLayout {
            stations: self
                .stations
                .iter()
                .map(|&p| self.region.translate(p, dx, dy))
                .collect(),
            ..self.clone()
        }
    }

    /// Writes `bs_id,x,y` rows preceded by `#` metadata lines.
    pub fn write_csv<W: Write>(&self, w: &mut W, extra: &[(&str, String)]) -> Result<()> {
        for (k, v) in extra {
            writeln!(w, "# {k}={v}")?;
        }
        writeln!(w, "# model={}", self.model)?;
        writeln!(w, "# seed={}", self.seed)?;
        writeln!(w, "# density={}", self.density)?;
        writeln!(w, "# width={}", self.region.width)?;
        writeln!(w, "# height={}", self.region.height)?;
        if self.region.shear != 0.0 {
            writeln!(w, "# shear={}", self.region.shear)?;
        }
        writeln!(w, "bs_id,x,y")?;
        for (i, p) in self.stations.iter().enumerate() {
            writeln!(w, "{},{},{}", i, p.x, p.y)?;
        }
        Ok(())
    }
}

/// Triangular lattice of `1 + 3·rings·(rings + 1)` stations with spacing
/// `2·half_isd`, laid out as a hexagonal patch that tiles its rhombic torus.
///
/// Station 0 is the patch center; the others follow ring by ring.
pub fn generate_hexagonal(half_isd: f64, rings: u32, seed: u64) -> Result<NetworkLayout> {
    if rings == 0 {
        return Err(Error::InsufficientStations(
            "a hexagonal layout needs at least one ring of interferers".into(),
        ));
    }
    if !(half_isd > 0.0 && half_isd.is_finite()) {
        return Err(Error::Config(format!(
            "half_isd must be positive, got {half_isd}"
        )));
    }
    let k = rings as i64;
    let sqrt3 = 3f64.sqrt();
    // axial (q, r) -> cartesian with neighbour spacing 2·half_isd
    let to_xy = |q: i64, r: i64| (half_isd * (2 * q + r) as f64, half_isd * sqrt3 * r as f64);
    // super-lattice vector (2k+1, -k) is rotated onto the x axis; its partner
    // (k, k+1) then lands at +60°
    let (tx, ty) = to_xy(2 * k + 1, -k);
    let period = (tx * tx + ty * ty).sqrt();
    let (sin, cos) = (-ty.atan2(tx)).sin_cos();
    let region = TorusRegion::sheared(period, period * sqrt3 / 2.0, period / 2.0)?;
    let center = Point::new(0.75 * period, period * sqrt3 / 4.0);

    let mut axial = vec![(0i64, 0i64)];
    const DIRS: [(i64, i64); 6] = [(1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1)];
    // each ring starts at ring·DIRS[4] and walks its six sides
    for ring in 1..=k {
        let (mut q, mut r) = (DIRS[4].0 * ring, DIRS[4].1 * ring);
        for dir in DIRS {
            for _ in 0..ring {
                axial.push((q, r));
                q += dir.0;
                r += dir.1;
            }
        }
    }
    let stations = axial
        .into_iter()
        .map(|(q, r)| {
            let (x, y) = to_xy(q, r);
            let (rx, ry) = (x * cos - y * sin, x * sin + y * cos);
            region.wrap(Point::new(center.x + rx, center.y + ry))
        })
        .collect();
    Ok(NetworkLayout {
        region,
        stations,
        model: LayoutModel::Hexagonal,
        density: hexagonal_density(half_isd),
        seed,
        half_isd,
        redraws: 0,
    })
}

/// Above this mean a single `exp(-mean)` underflows, so the variate is built
/// as a sum of independent chunks.
const POISSON_CHUNK: f64 = 500.0;

/// Poisson variate by sequential search of the CDF.
pub fn sample_poisson<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    let mut remaining = mean;
    let mut total = 0;
    while remaining > 0.0 {
        let lambda = remaining.min(POISSON_CHUNK);
        remaining -= lambda;
        total += poisson_inversion(rng, lambda);
    }
    total
}

fn poisson_inversion<R: Rng + ?Sized>(rng: &mut R, lambda: f64) -> u64 {
    let u: f64 = rng.random();
    let mut k = 0u64;
    let mut p = (-lambda).exp();
    let mut cdf = p;
    while u > cdf {
        k += 1;
        p *= lambda / k as f64;
        cdf += p;
        if p == 0.0 && k as f64 > lambda {
            break;
        }
    }
    k
}

/// Homogeneous Poisson layout: `N ~ Poisson(density · area)` stations placed
/// i.i.d. uniformly. A draw with `N = 0` is discarded and redrawn from seed
/// `seed + 1`, `seed + 2`, ...; the number of redraws is recorded.
pub fn generate_poisson(region: TorusRegion, density: f64, seed: u64) -> Result<NetworkLayout> {
    if !(density > 0.0 && density.is_finite()) {
        return Err(Error::Config(format!(
            "density must be positive, got {density}"
        )));
    }
    let mean = density * region.area();
    let mut redraws = 0u32;
    loop {
        let mut rng = rng::seeded_rng(seed.wrapping_add(redraws as u64));
        let n = sample_poisson(&mut rng, mean);
        if n == 0 {
            redraws += 1;
            if redraws > 10_000 {
                return Err(Error::InsufficientStations(format!(
                    "no station drawn after {redraws} attempts (mean {mean})"
                )));
            }
            continue;
        }
        let stations = (0..n).map(|_| region.sample_uniform(&mut rng)).collect();
        return Ok(NetworkLayout {
            region,
            stations,
            model: LayoutModel::Poisson,
            density,
            seed,
            half_isd: half_isd_for_density(density),
            redraws,
        });
    }
}

/// Square torus holding `expected_count` stations on average at the hexagonal
/// density of `half_isd`.
pub fn region_for_expected_count(half_isd: f64, expected_count: f64) -> Result<TorusRegion> {
    if !(expected_count > 0.0 && expected_count.is_finite()) {
        return Err(Error::Config(format!(
            "expected station count must be positive, got {expected_count}"
        )));
    }
    if !(half_isd > 0.0 && half_isd.is_finite()) {
        return Err(Error::Config(format!(
            "half_isd must be positive, got {half_isd}"
        )));
    }
    TorusRegion::square((expected_count / hexagonal_density(half_isd)).sqrt())
}

/// Area of a disk of radius `radius`.
pub(crate) fn disk_area(radius: f64) -> f64 {
    PI * radius * radius
}
