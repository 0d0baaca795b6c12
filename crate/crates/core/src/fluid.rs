//! Closed-form fluid-model quantities.
//!
//! The fluid model replaces the interfering stations by a continuum of
//! density `ρ` starting at distance `2·R_c` from the serving station. The
//! SINR then depends only on the serving distance `r`:
//!
//! ```text
//! γ(r) = (η − 2) / (2π ρ) · r^(−η) · (2 R_c − r)^(η − 2)
//! ```
//!
//! With `ρ = √3 / (6 R_c²)` and `x = r / R_c` the length scale drops out
//! entirely, which is why the Poisson correction does not depend on density.

use std::f64::consts::PI;
use std::io::Write;

use crate::error::{Error, Result};
use crate::numeric::{bisect, integrate, BISECTION_MAX_ITER, BISECTION_REL_TOL};
use crate::placement::{disk_area, hexagonal_density};
use crate::sinr::to_db;
use crate::stats::CdfCurve;

/// Relative tolerance of the cell-average quadrature.
pub const QUADRATURE_REL_TOL: f64 = 1e-9;

/// Default number of points of exported fluid curves.
pub const DEFAULT_CURVE_POINTS: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidModel {
    half_isd: f64,
    density: f64,
    eta: f64,
}

impl FluidModel {
    pub fn new(half_isd: f64, density: f64, eta: f64) -> Result<Self> {
        if !(eta > 2.0 && eta.is_finite()) {
            return Err(Error::domain(format!("fluid model needs η > 2, got {eta}")));
        }
        if !(half_isd > 0.0 && half_isd.is_finite()) {
            return Err(Error::domain(format!(
                "R_c must be positive, got {half_isd}"
            )));
        }
        if !(density > 0.0 && density.is_finite()) {
            return Err(Error::domain(format!(
                "density must be positive, got {density}"
            )));
        }
        Ok(FluidModel {
            half_isd,
            density,
            eta,
        })
    }

    /// Model whose density is the hexagonal one, `√3 / (6 R_c²)`.
    pub fn from_half_isd(half_isd: f64, eta: f64) -> Result<Self> {
        Self::new(half_isd, hexagonal_density(half_isd), eta)
    }

    pub fn half_isd(&self) -> f64 {
        self.half_isd
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// True when the density is the hexagonal density of `R_c`.
    pub fn is_consistent(&self) -> bool {
        let h = hexagonal_density(self.half_isd);
        ((self.density - h) / h).abs() <= 1e-12
    }

    fn sinr_unchecked(&self, r: f64) -> f64 {
        let eta = self.eta;
        (eta - 2.0) / (2.0 * PI * self.density)
            * r.powf(-eta)
            * (2.0 * self.half_isd - r).powf(eta - 2.0)
    }
}

/// Fluid SINR at distance `r` from the serving station, `0 < r < 2 R_c`.
pub fn fluid_sinr(m: &FluidModel, r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 2.0 * m.half_isd) {
        return Err(Error::domain(format!(
            "fluid SINR defined on (0, {}), got r = {r}",
            2.0 * m.half_isd
        )));
    }
    Ok(m.sinr_unchecked(r))
}

/// Density-free fluid SINR at relative distance `x = r / R_c`.
pub fn normalized_sinr(eta: f64, x: f64) -> Result<f64> {
    if !(eta > 2.0 && eta.is_finite()) {
        return Err(Error::domain(format!(
            "normalized SINR needs η > 2, got {eta}"
        )));
    }
    if !(x > 0.0 && x < 2.0) {
        return Err(Error::domain(format!(
            "relative distance must lie in (0, 2), got {x}"
        )));
    }
    Ok(6.0 / 3f64.sqrt() * (eta - 2.0) / (2.0 * PI) * x.powf(-eta) * (2.0 - x).powf(eta - 2.0))
}

/// Coefficients of the dB correction `a·η + b` subtracted from the fluid SINR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitCoefficients {
    pub a: f64,
    pub b: f64,
}

impl FitCoefficients {
    /// The published correction, `3η − 6` dB.
    pub const CANONICAL: FitCoefficients = FitCoefficients { a: 3.0, b: -6.0 };

    pub const ZERO: FitCoefficients = FitCoefficients { a: 0.0, b: 0.0 };

    pub fn shift_db(&self, eta: f64) -> f64 {
        self.a * eta + self.b
    }
}

/// Fluid SINR in dB with the Poisson correction applied.
pub fn fitted_sinr_db(m: &FluidModel, r: f64, fit: &FitCoefficients) -> Result<f64> {
    Ok(to_db(fluid_sinr(m, r)?) - fit.shift_db(m.eta))
}

/// Shape of the serving cell over which users are spread uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CellShape {
    /// Disk of radius `R_c`.
    Disk,
    /// Regular hexagon with inradius `R_c`, the Voronoi cell of a station in
    /// the hexagonal network (area `1 / ρ`).
    #[default]
    Hexagon,
}

impl CellShape {
    pub fn as_str(&self) -> &'static str {
        match self {
            CellShape::Disk => "disk",
            CellShape::Hexagon => "hexagon",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "disk" => Some(CellShape::Disk),
            "hexagon" | "hex" => Some(CellShape::Hexagon),
            _ => None,
        }
    }

    /// Largest serving distance inside the cell.
    pub fn outer_radius(&self, half_isd: f64) -> f64 {
        match self {
            CellShape::Disk => half_isd,
            CellShape::Hexagon => 2.0 * half_isd / 3f64.sqrt(),
        }
    }

    pub fn area(&self, half_isd: f64) -> f64 {
        match self {
            CellShape::Disk => disk_area(half_isd),
            CellShape::Hexagon => 2.0 * 3f64.sqrt() * half_isd * half_isd,
        }
    }

    /// Area of the part of the cell within distance `s` of its center.
    pub fn area_within(&self, half_isd: f64, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        if s <= half_isd {
            return disk_area(s);
        }
        match self {
            CellShape::Disk => disk_area(half_isd),
            CellShape::Hexagon => {
                if s >= self.outer_radius(half_isd) {
                    return self.area(half_isd);
                }
                // six circular segments stick out past the flat sides
                let segment =
                    s * s * (half_isd / s).acos() - half_isd * (s * s - half_isd * half_isd).sqrt();
                disk_area(s) - 6.0 * segment
            }
        }
    }

    /// Length of the circle of radius `s` lying inside the cell; the radial
    /// density of a uniform point is this divided by the cell area.
    pub fn arc_length_within(&self, half_isd: f64, s: f64) -> f64 {
        if s <= 0.0 || s >= self.outer_radius(half_isd) {
            return 0.0;
        }
        if s <= half_isd {
            return 2.0 * PI * s;
        }
        match self {
            CellShape::Disk => 0.0,
            CellShape::Hexagon => 2.0 * PI * s - 12.0 * s * (half_isd / s).acos(),
        }
    }
}

/// Distribution of the serving distance of a user uniform on the cell minus
/// the exclusion disk of radius `ε·R_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct RadialLaw {
    half_isd: f64,
    inner: f64,
    outer: f64,
    shape: CellShape,
}

impl RadialLaw {
    fn new(half_isd: f64, exclusion: f64, shape: CellShape) -> Result<Self> {
        if !(exclusion > 0.0 && exclusion < 1.0) {
            return Err(Error::domain(format!(
                "exclusion must lie in (0, 1), got {exclusion}"
            )));
        }
        Ok(RadialLaw {
            half_isd,
            inner: exclusion * half_isd,
            outer: shape.outer_radius(half_isd),
            shape,
        })
    }

    fn inner_area(&self) -> f64 {
        disk_area(self.inner)
    }

    fn usable_area(&self) -> f64 {
        self.shape.area(self.half_isd) - self.inner_area()
    }

    fn cdf(&self, s: f64) -> f64 {
        let a = self.shape.area_within(self.half_isd, s.max(self.inner)) - self.inner_area();
        (a / self.usable_area()).clamp(0.0, 1.0)
    }

    fn density(&self, s: f64) -> f64 {
        if s < self.inner {
            return 0.0;
        }
        self.shape.arc_length_within(self.half_isd, s) / self.usable_area()
    }

    fn quantile(&self, q: f64) -> Result<f64> {
        let target = self.inner_area() + q.clamp(0.0, 1.0) * self.usable_area();
        if target <= disk_area(self.half_isd) {
            return Ok((target / PI).sqrt().clamp(self.inner, self.outer));
        }
        // only the hexagon gets here
        bisect(
            |s| self.shape.area_within(self.half_isd, s) - target,
            self.half_isd,
            self.outer,
            BISECTION_REL_TOL,
            BISECTION_MAX_ITER,
        )
    }

    /// Expectation of `f(r)`.
    fn average<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let weighted = |s: f64| f(s) * self.density(s);
        let mut total = integrate(weighted, self.inner, self.half_isd, QUADRATURE_REL_TOL);
        if self.outer > self.half_isd {
            total += integrate(weighted, self.half_isd, self.outer, QUADRATURE_REL_TOL);
        }
        total
    }
}

/// Analytic SINR distribution of the fluid model over one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidCdf {
    model: FluidModel,
    exclusion: f64,
    shape: CellShape,
    law: RadialLaw,
}

impl FluidCdf {
    pub fn new(model: FluidModel, exclusion: f64, shape: CellShape) -> Result<Self> {
        let law = RadialLaw::new(model.half_isd, exclusion, shape)?;
        Ok(FluidCdf {
            model,
            exclusion,
            shape,
            law,
        })
    }

    pub fn model(&self) -> &FluidModel {
        &self.model
    }

    pub fn exclusion(&self) -> f64 {
        self.exclusion
    }

    pub fn shape(&self) -> CellShape {
        self.shape
    }

    /// Serving-distance range `[ε·R_c, outer radius]`.
    pub fn radius_range(&self) -> (f64, f64) {
        (self.law.inner, self.law.outer)
    }

    /// Distance at which the fluid SINR equals `gamma_db`, clamped to the
    /// radius range.
    pub fn radius_for_sinr_db(&self, gamma_db: f64) -> Result<f64> {
        let (lo, hi) = self.radius_range();
        let target = gamma_db * std::f64::consts::LN_10 / 10.0;
        let h = |r: f64| self.model.sinr_unchecked(r).ln() - target;
        if h(lo) <= 0.0 {
            return Ok(lo);
        }
        if h(hi) >= 0.0 {
            return Ok(hi);
        }
        bisect(h, lo, hi, BISECTION_REL_TOL, BISECTION_MAX_ITER)
    }

    /// Probability that a user has fluid SINR at most `gamma_db`.
    pub fn probability(&self, gamma_db: f64) -> Result<f64> {
        if gamma_db.is_nan() {
            return Err(Error::domain("SINR threshold is NaN"));
        }
        let (lo, hi) = self.radius_range();
        if gamma_db >= to_db(self.model.sinr_unchecked(lo)) {
            return Ok(1.0);
        }
        if gamma_db < to_db(self.model.sinr_unchecked(hi)) {
            return Ok(0.0);
        }
        let r = self.radius_for_sinr_db(gamma_db)?;
        Ok(1.0 - self.law.cdf(r))
    }

    /// `(sinr_db, probability)` pairs on a geometric radius grid, sorted by SINR.
    pub fn curve_points(&self, points: usize) -> Vec<(f64, f64)> {
        let mut rows: Vec<(f64, f64)> = self
            .radius_grid(points)
            .into_iter()
            .map(|r| (to_db(self.model.sinr_unchecked(r)), 1.0 - self.law.cdf(r)))
            .collect();
        rows.reverse();
        rows
    }

    fn radius_grid(&self, points: usize) -> Vec<f64> {
        let (lo, hi) = self.radius_range();
        let n = points.max(2);
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo * (hi / lo).powf(i as f64 / (n - 1) as f64)
                }
            })
            .collect()
    }

    /// Writes `r_over_Rc,sinr_db,cdf,spectral_efficiency` on a geometric grid in `r`.
    pub fn write_curve_csv<W: Write>(
        &self,
        w: &mut W,
        points: usize,
        extra: &[(&str, String)],
    ) -> Result<()> {
        for (k, v) in extra {
            writeln!(w, "# {k}={v}")?;
        }
        writeln!(w, "# model=fluid")?;
        writeln!(w, "# eta={}", self.model.eta)?;
        writeln!(w, "# cell={}", self.shape.as_str())?;
        writeln!(w, "# exclusion={}", self.exclusion)?;
        writeln!(w, "r_over_Rc,sinr_db,cdf,spectral_efficiency")?;
        for r in self.radius_grid(points) {
            let g = self.model.sinr_unchecked(r);
            writeln!(
                w,
                "{},{},{},{}",
                r / self.model.half_isd,
                to_db(g),
                1.0 - self.law.cdf(r),
                (1.0 + g).log2()
            )?;
        }
        Ok(())
    }
}

impl CdfCurve for FluidCdf {
    fn cdf(&self, x_db: f64) -> f64 {
        self.probability(x_db).unwrap_or(f64::NAN)
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!(
                "quantile level must lie in (0, 1), got {p}"
            )));
        }
        // γ decreases with r, so the p-quantile of γ sits at the (1 − p)-quantile of r
        let r = self.law.quantile(1.0 - p)?;
        Ok(to_db(self.model.sinr_unchecked(r)))
    }
}

/// Fluid SINR CDF over the disk cell of radius `R_c`.
pub fn fluid_cdf(m: &FluidModel, gamma_db: f64, exclusion: f64) -> Result<f64> {
    FluidCdf::new(*m, exclusion, CellShape::Disk)?.probability(gamma_db)
}

/// Shannon spectral efficiency `log₂(1 + γ)` in bit/s/Hz.
pub fn spectral_efficiency(gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(Error::domain(format!(
            "SINR must be non-negative, got {gamma}"
        )));
    }
    Ok((1.0 + gamma).log2())
}

pub fn cell_edge_throughput(m: &FluidModel) -> f64 {
    (1.0 + m.sinr_unchecked(m.half_isd)).log2()
}

/// Mean of `f(r)` over users uniform on the cell outside the exclusion disk.
pub fn cell_average<F: Fn(f64) -> f64>(
    m: &FluidModel,
    exclusion: f64,
    shape: CellShape,
    f: F,
) -> Result<f64> {
    Ok(RadialLaw::new(m.half_isd, exclusion, shape)?.average(f))
}

/// Cell-average spectral efficiency over the disk cell.
pub fn average_cell_throughput(m: &FluidModel, exclusion: f64) -> Result<f64> {
    average_cell_throughput_in(m, exclusion, CellShape::Disk)
}

pub fn average_cell_throughput_in(m: &FluidModel, exclusion: f64, shape: CellShape) -> Result<f64> {
    cell_average(m, exclusion, shape, |r| (1.0 + m.sinr_unchecked(r)).log2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit(eta: f64) -> FluidModel {
        FluidModel::from_half_isd(1.0, eta).unwrap()
    }

    #[test]
    fn fluid_sinr_examples() {
        let g = fluid_sinr(&unit(4.0), 1.0).unwrap();
        assert_relative_eq!(g, 6.0 / (3f64.sqrt() * PI), max_relative = 1e-14);
        assert_relative_eq!(g, 1.102658, epsilon = 1e-6);
        let g3 = fluid_sinr(&unit(3.0), 0.5).unwrap();
        assert_relative_eq!(
            g3,
            6.0 / 3f64.sqrt() / (2.0 * PI) * 8.0 * 1.5,
            max_relative = 1e-14
        );
        assert_relative_eq!(g3, 6.61595, epsilon = 1e-5);
        for r in [0.0, -1.0, 2.0, 2.5] {
            assert!(fluid_sinr(&unit(3.0), r).is_err());
        }
    }

    #[test]
    fn normalized_sinr_examples() {
        let g4 = normalized_sinr(4.0, 1.0).unwrap();
        assert_relative_eq!(g4, 1.102658, epsilon = 1e-6);
        assert_relative_eq!(to_db(g4), 0.42441, epsilon = 1e-5);
        let g3 = normalized_sinr(3.0, 1.0).unwrap();
        assert_relative_eq!(g3, 3.0 / (3f64.sqrt() * PI), max_relative = 1e-14);
        assert_relative_eq!(g3, 0.551329, epsilon = 1e-6);
        assert_relative_eq!(g3, 0.5 * g4, max_relative = 1e-14);
        assert!(normalized_sinr(2.0001, 0.7).unwrap() < 1e-3);
        assert!(normalized_sinr(3.0, 0.0).is_err());
        assert!(normalized_sinr(3.0, 2.0).is_err());
        assert!(normalized_sinr(2.0, 1.0).is_err());
    }

    #[test]
    fn fitted_sinr_examples() {
        let m = unit(2.8);
        let base = to_db(fluid_sinr(&m, 0.6).unwrap());
        let shifted = fitted_sinr_db(&m, 0.6, &FitCoefficients::CANONICAL).unwrap();
        assert_relative_eq!(base - shifted, 2.4, epsilon = 1e-12);
        let m = unit(3.6);
        let base = to_db(fluid_sinr(&m, 0.6).unwrap());
        assert_relative_eq!(
            base - fitted_sinr_db(&m, 0.6, &FitCoefficients::CANONICAL).unwrap(),
            4.8,
            epsilon = 1e-12
        );
        assert_eq!(
            fitted_sinr_db(&m, 0.6, &FitCoefficients::ZERO).unwrap(),
            base
        );
    }

    #[test]
    fn model_validation() {
        assert!(FluidModel::new(1.0, 1.0, 2.0).is_err());
        assert!(FluidModel::new(0.0, 1.0, 3.0).is_err());
        assert!(FluidModel::new(1.0, 0.0, 3.0).is_err());
        assert!(unit(3.0).is_consistent());
        assert!(!FluidModel::new(1.0, 1.0, 3.0).unwrap().is_consistent());
    }

    #[test]
    fn disk_cdf_saturates_at_the_cell_extremes() {
        let m = unit(3.5);
        let edge = to_db(fluid_sinr(&m, 1.0).unwrap());
        let center = to_db(fluid_sinr(&m, 0.01).unwrap());
        // nobody is below the cell-edge SINR, everybody is below the clamp SINR
        assert_eq!(fluid_cdf(&m, edge - 1e-9, 0.01).unwrap(), 0.0);
        assert!(fluid_cdf(&m, edge, 0.01).unwrap() < 1e-9);
        assert_eq!(fluid_cdf(&m, center, 0.01).unwrap(), 1.0);
        assert_eq!(fluid_cdf(&m, center + 50.0, 0.01).unwrap(), 1.0);
        assert!(fluid_cdf(&m, 0.0, 0.0).is_err());
        assert!(fluid_cdf(&m, 0.0, 1.0).is_err());
    }

    #[test]
    fn disk_cdf_matches_closed_form() {
        let m = unit(3.0);
        let eps: f64 = 0.01;
        for r in [0.05, 0.3, 0.5, 0.77, 0.99] {
            let g = to_db(fluid_sinr(&m, r).unwrap());
            let expected = (1.0 - r * r) / (1.0 - eps * eps);
            assert_relative_eq!(fluid_cdf(&m, g, eps).unwrap(), expected, epsilon = 1e-10);
        }
    }

    #[test]
    fn hexagon_geometry() {
        let h = CellShape::Hexagon;
        assert_relative_eq!(h.area_within(1.0, 0.5), PI * 0.25, max_relative = 1e-15);
        assert_relative_eq!(
            h.area_within(1.0, 2.0 / 3f64.sqrt()),
            2.0 * 3f64.sqrt(),
            max_relative = 1e-12
        );
        assert_relative_eq!(h.area_within(1.0, 5.0), h.area(1.0));
        // area derivative equals the arc length
        for s in [0.4, 1.02, 1.1, 1.15] {
            let d = 1e-6;
            let num = (h.area_within(1.0, s + d) - h.area_within(1.0, s - d)) / (2.0 * d);
            assert_relative_eq!(num, h.arc_length_within(1.0, s), max_relative = 1e-6);
        }
        // hexagon cell area equals one over the hexagonal density
        assert_relative_eq!(
            h.area(1.0),
            1.0 / hexagonal_density(1.0),
            max_relative = 1e-14
        );
    }

    #[test]
    fn hexagon_area_matches_point_in_polygon_count() {
        use rand::Rng;
        let mut g = crate::rng::seeded_rng(17);
        let r_out = 2.0 / 3f64.sqrt();
        let normals: Vec<(f64, f64)> = (0..3)
            .map(|k| ((k as f64 * PI / 3.0).cos(), (k as f64 * PI / 3.0).sin()))
            .collect();
        let s = 1.08;
        let (mut inside, mut within) = (0usize, 0usize);
        for _ in 0..400_000 {
            let x = (g.random::<f64>() * 2.0 - 1.0) * r_out;
            let y = (g.random::<f64>() * 2.0 - 1.0) * r_out;
            if normals
                .iter()
                .all(|&(nx, ny)| (x * nx + y * ny).abs() <= 1.0)
            {
                inside += 1;
                if x * x + y * y <= s * s {
                    within += 1;
                }
            }
        }
        let frac = within as f64 / inside as f64;
        let exact = CellShape::Hexagon.area_within(1.0, s) / CellShape::Hexagon.area(1.0);
        assert!((frac - exact).abs() < 3e-3, "{frac} vs {exact}");
    }

    #[test]
    fn quantile_and_probability_agree() {
        for shape in [CellShape::Disk, CellShape::Hexagon] {
            let c = FluidCdf::new(unit(3.2), 0.01, shape).unwrap();
            for p in [0.01, 0.1, 0.37, 0.5, 0.9, 0.99] {
                let q = c.quantile(p).unwrap();
                assert_relative_eq!(c.cdf(q), p, epsilon = 1e-9);
            }
            assert!(c.quantile(0.0).is_err());
            assert!(c.quantile(1.0).is_err());
        }
    }

    #[test]
    fn spectral_efficiency_examples() {
        assert_eq!(spectral_efficiency(1.0).unwrap(), 1.0);
        assert_eq!(spectral_efficiency(0.0).unwrap(), 0.0);
        assert_relative_eq!(spectral_efficiency(3.2).unwrap(), 2.070389, epsilon = 1e-6);
        assert!(spectral_efficiency(-0.1).is_err());
    }

    #[test]
    fn throughput_examples() {
        let edge = cell_edge_throughput(&unit(4.0));
        assert_relative_eq!(
            edge,
            (1.0 + 6.0 / (3f64.sqrt() * PI)).log2(),
            max_relative = 1e-14
        );
        assert_relative_eq!(edge, 1.0723, epsilon = 1e-4);
        assert!(cell_edge_throughput(&unit(2.0 + 1e-9)) < 1e-8);
        let scaled = FluidModel::from_half_isd(37.0, 4.0).unwrap();
        assert_relative_eq!(cell_edge_throughput(&scaled), edge, max_relative = 1e-12);

        for shape in [CellShape::Disk, CellShape::Hexagon] {
            let ones = cell_average(&unit(3.5), 0.01, shape, |_| 1.0).unwrap();
            assert_relative_eq!(ones, 1.0, max_relative = 1e-9);
        }
        for eta in [2.4, 3.0, 3.5, 4.2] {
            let m = unit(eta);
            assert!(average_cell_throughput(&m, 0.01).unwrap() >= cell_edge_throughput(&m));
        }
    }

    #[test]
    fn curve_export_has_requested_rows() {
        let c = FluidCdf::new(unit(3.0), 0.01, CellShape::Disk).unwrap();
        let mut buf = Vec::new();
        c.write_curve_csv(&mut buf, 512, &[]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(rows[0], "r_over_Rc,sinr_db,cdf,spectral_efficiency");
        assert_eq!(rows.len(), 513);
        let pts = c.curve_points(512);
        assert_eq!(pts.len(), 512);
        assert!(pts.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1));
        assert_relative_eq!(pts[0].1, 0.0, epsilon = 1e-12);
        assert_relative_eq!(pts[511].1, 1.0, epsilon = 1e-12);
    }
}
