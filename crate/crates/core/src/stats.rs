//! Empirical CDFs, horizontal shifts between CDF curves, the linear
//! shift-vs-exponent fit and Pearson correlation of CDF curves.

use std::io::Write;

use crate::error::{Error, Result};
use crate::fluid::FitCoefficients;
use crate::sinr::SinrSampleSet;

/// Anything with a CDF and a quantile function on a dB axis.
pub trait CdfCurve {
    /// `P(X <= x_db)`.
    fn cdf(&self, x_db: f64) -> f64;
    /// Quantile at level `p ∈ (0, 1)`.
    fn quantile(&self, p: f64) -> Result<f64>;
}

impl<C: CdfCurve + ?Sized> CdfCurve for &C {
    fn cdf(&self, x_db: f64) -> f64 {
        (**self).cdf(x_db)
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        (**self).quantile(p)
    }
}

fn check_level(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "quantile level must lie in (0, 1), got {p}"
        )))
    }
}

/// Step-function CDF of a sample, abscissa in dB.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted_values_db: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn from_db(mut values_db: Vec<f64>) -> Result<Self> {
        if values_db.is_empty() {
            return Err(Error::EmptySample);
        }
        if values_db.iter().any(|v| v.is_nan()) {
            return Err(Error::domain("sample contains NaN"));
        }
        values_db.sort_by(f64::total_cmp);
        Ok(EmpiricalCdf {
            sorted_values_db: values_db,
        })
    }

    pub fn sorted_values_db(&self) -> &[f64] {
        &self.sorted_values_db
    }

    pub fn len(&self) -> usize {
        self.sorted_values_db.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted_values_db.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.sorted_values_db[0]
    }

    pub fn max(&self) -> f64 {
        self.sorted_values_db[self.len() - 1]
    }

    /// `(sinr_db, probability)` at the order statistics, decimated to at most
    /// `max_rows` evenly spaced ranks (the last order statistic is always kept).
    pub fn curve_points(&self, max_rows: usize) -> Vec<(f64, f64)> {
        let n = self.len();
        let rows = max_rows.clamp(1, n);
        let mut out = Vec::with_capacity(rows);
        for k in 1..=rows {
            // rank in 1..=n
            let rank = (k * n).div_ceil(rows);
            out.push((self.sorted_values_db[rank - 1], rank as f64 / n as f64));
        }
        out
    }
}

impl CdfCurve for EmpiricalCdf {
    fn cdf(&self, x_db: f64) -> f64 {
        let count = self.sorted_values_db.partition_point(|&v| v <= x_db);
        count as f64 / self.len() as f64
    }

    /// Linear interpolation between order statistics at position `p·(n − 1)`.
    fn quantile(&self, p: f64) -> Result<f64> {
        check_level(p)?;
        let v = &self.sorted_values_db;
        let pos = p * (v.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = (lo + 1).min(v.len() - 1);
        let frac = pos - lo as f64;
        Ok(v[lo] + frac * (v[hi] - v[lo]))
    }
}

/// Empirical CDF of a sample set's dB values.
pub fn empirical_cdf(samples: &SinrSampleSet) -> Result<EmpiricalCdf> {
    EmpiricalCdf::from_db(samples.db_values())
}

/// A CDF translated to the right by `offset_db`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shifted<C> {
    pub inner: C,
    pub offset_db: f64,
}

impl<C> Shifted<C> {
    pub fn new(inner: C, offset_db: f64) -> Self {
        Shifted { inner, offset_db }
    }

    /// The curve with the Poisson correction `−(a·η + b)` dB applied.
    pub fn corrected(inner: C, fit: &FitCoefficients, eta: f64) -> Self {
        Shifted::new(inner, -fit.shift_db(eta))
    }
}

impl<C: CdfCurve> CdfCurve for Shifted<C> {
    fn cdf(&self, x_db: f64) -> f64 {
        self.inner.cdf(x_db - self.offset_db)
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        Ok(self.inner.quantile(p)? + self.offset_db)
    }
}

pub fn quantile<C: CdfCurve + ?Sized>(cdf: &C, p: f64) -> Result<f64> {
    cdf.quantile(p)
}

/// Fraction of users whose SINR does not exceed `threshold_db`.
pub fn outage_probability<C: CdfCurve + ?Sized>(cdf: &C, threshold_db: f64) -> f64 {
    cdf.cdf(threshold_db)
}

/// Probability levels `0.02, 0.04, …, 0.98`.
pub fn default_p_grid() -> Vec<f64> {
    (1..=49).map(|i| i as f64 / 50.0).collect()
}

/// Mean over `p_grid` of `Q_reference(p) − Q_target(p)`.
///
/// Positive when the reference curve sits to the right of the target.
pub fn mean_horizontal_shift<R, T>(reference: &R, target: &T, p_grid: &[f64]) -> Result<f64>
where
    R: CdfCurve + ?Sized,
    T: CdfCurve + ?Sized,
{
    if p_grid.is_empty() {
        return Err(Error::domain("empty probability grid"));
    }
    let mut total = 0.0;
    for &p in p_grid {
        total += reference.quantile(p)? - target.quantile(p)?;
    }
    Ok(total / p_grid.len() as f64)
}

/// Per-exponent mean shifts and the least-squares line through them.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftFit {
    pub etas: Vec<f64>,
    pub shifts_db: Vec<f64>,
    pub coefficients: FitCoefficients,
    pub rms_residual_db: f64,
}

impl ShiftFit {
    pub fn predicted_db(&self, eta: f64) -> f64 {
        self.coefficients.shift_db(eta)
    }

    pub fn residuals_db(&self) -> Vec<f64> {
        self.etas
            .iter()
            .zip(&self.shifts_db)
            .map(|(&e, &s)| s - self.predicted_db(e))
            .collect()
    }

    /// Writes `eta,mean_shift_db,predicted_shift_db,residual_db` plus a
    /// `# a=..., b=..., rms=...` footer.
    pub fn write_csv<W: Write>(&self, w: &mut W, extra: &[(&str, String)]) -> Result<()> {
        for (k, v) in extra {
            writeln!(w, "# {k}={v}")?;
        }
        writeln!(w, "eta,mean_shift_db,predicted_shift_db,residual_db")?;
        for ((&eta, &shift), res) in self
            .etas
            .iter()
            .zip(&self.shifts_db)
            .zip(self.residuals_db())
        {
            writeln!(w, "{},{},{},{}", eta, shift, self.predicted_db(eta), res)?;
        }
        writeln!(
            w,
            "# a={}, b={}, rms={}",
            self.coefficients.a, self.coefficients.b, self.rms_residual_db
        )?;
        Ok(())
    }
}

/// Ordinary least squares `shift = a·η + b`.
pub fn fit_linear(etas: &[f64], shifts: &[f64]) -> Result<ShiftFit> {
    if etas.len() != shifts.len() {
        return Err(Error::domain(format!(
            "{} exponents but {} shifts",
            etas.len(),
            shifts.len()
        )));
    }
    if etas.len() < 2 {
        return Err(Error::DegenerateFit);
    }
    let mut pairs: Vec<(f64, f64)> = etas.iter().copied().zip(shifts.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = pairs.len() as f64;
    let mean_x = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pairs.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx <= 0.0 || pairs.first().map(|p| p.0) == pairs.last().map(|p| p.0) {
        return Err(Error::DegenerateFit);
    }
    let sxy: f64 = pairs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let a = sxy / sxx;
    let b = mean_y - a * mean_x;
    let rss: f64 = pairs.iter().map(|p| (p.1 - (a * p.0 + b)).powi(2)).sum();
    Ok(ShiftFit {
        etas: pairs.iter().map(|p| p.0).collect(),
        shifts_db: pairs.iter().map(|p| p.1).collect(),
        coefficients: FitCoefficients { a, b },
        rms_residual_db: (rss / n).sqrt(),
    })
}

/// Pearson correlation coefficient of two equally long samples.
pub fn correlation_coefficient(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::domain(format!(
            "correlation needs two samples of equal length >= 2, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

pub const DEFAULT_CORRELATION_POINTS: usize = 200;

/// Correlation of two CDF curves sampled on a shared uniform dB grid that
/// spans the union of their 1st–99th percentile ranges.
pub fn cdf_curve_correlation<A, B>(first: &A, second: &B, points: usize) -> Result<f64>
where
    A: CdfCurve + ?Sized,
    B: CdfCurve + ?Sized,
{
    let lo = first.quantile(0.01)?.min(second.quantile(0.01)?);
    let hi = first.quantile(0.99)?.max(second.quantile(0.99)?);
    let n = points.max(2);
    let grid: Vec<f64> = (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect();
    let xs: Vec<f64> = grid.iter().map(|&x| first.cdf(x)).collect();
    let ys: Vec<f64> = grid.iter().map(|&x| second.cdf(x)).collect();
    correlation_coefficient(&xs, &ys)
}

/// Writes `sinr_db,probability` rows.
pub fn write_cdf_csv<W: Write>(
    w: &mut W,
    points: &[(f64, f64)],
    extra: &[(&str, String)],
) -> Result<()> {
    for (k, v) in extra {
        writeln!(w, "# {k}={v}")?;
    }
    writeln!(w, "sinr_db,probability")?;
    for (x, p) in points {
        writeln!(w, "{x},{p}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn ecdf(v: &[f64]) -> EmpiricalCdf {
        EmpiricalCdf::from_db(v.to_vec()).unwrap()
    }

    #[test]
    fn empirical_cdf_examples() {
        let point = ecdf(&[0.0; 10]);
        assert_eq!(point.cdf(-0.1), 0.0);
        assert_eq!(point.cdf(0.0), 1.0);
        let c = ecdf(&[3.0, 1.0, 2.0]);
        assert_relative_eq!(c.cdf(2.0), 2.0 / 3.0);
        assert_eq!(c.cdf(c.max()), 1.0);
        assert_eq!(c.cdf(f64::INFINITY), 1.0);
        assert_eq!(c.cdf(f64::NEG_INFINITY), 0.0);
        assert!(matches!(
            EmpiricalCdf::from_db(vec![]),
            Err(Error::EmptySample)
        ));
        assert!(EmpiricalCdf::from_db(vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn quantile_examples() {
        assert_relative_eq!(ecdf(&[0.0, 10.0]).quantile(0.5).unwrap(), 5.0);
        let idx: Vec<f64> = (0..100).map(f64::from).collect();
        assert_relative_eq!(ecdf(&idx).quantile(0.05).unwrap(), 4.95, epsilon = 1e-12);
        for p in [0.0, 1.0, -0.2, 1.5] {
            assert!(ecdf(&idx).quantile(p).is_err());
        }
        // round trip at sample points
        let c = ecdf(&[1.0, 4.0, 9.0, 16.0, 25.0]);
        for &x in c.sorted_values_db()[1..4].iter() {
            let p = c.cdf(x);
            let q = c.quantile(p).unwrap();
            assert!(q >= x - 1e-12 && c.cdf(q) == p, "{x} -> {p} -> {q}");
        }
    }

    #[test]
    fn outage_examples() {
        let v: Vec<f64> = (1..=100).map(f64::from).collect();
        let c = ecdf(&v);
        assert_eq!(outage_probability(&c, 0.5), 0.0);
        assert_eq!(outage_probability(&c, 101.0), 1.0);
        assert_relative_eq!(outage_probability(&c, 5.0), 0.05);
    }

    #[test]
    fn shift_examples() {
        let c = ecdf(&[0.3, 1.7, 2.2, 5.0, 8.1, 9.9]);
        let grid = default_p_grid();
        assert_eq!(grid.len(), 49);
        assert_relative_eq!(grid[0], 0.02);
        assert_relative_eq!(grid[48], 0.98);
        assert_eq!(mean_horizontal_shift(&c, &c, &grid).unwrap(), 0.0);
        let moved = Shifted::new(c.clone(), 2.5);
        assert_relative_eq!(
            mean_horizontal_shift(&c, &moved, &grid).unwrap(),
            -2.5,
            epsilon = 1e-12
        );
        assert!(mean_horizontal_shift(&c, &c, &[]).is_err());
        assert!(mean_horizontal_shift(&c, &c, &[1.0]).is_err());
    }

    #[test]
    fn fit_examples() {
        let f = fit_linear(&[2.8, 3.6], &[2.4, 4.8]).unwrap();
        assert_relative_eq!(f.coefficients.a, 3.0, epsilon = 1e-12);
        assert_relative_eq!(f.coefficients.b, -6.0, epsilon = 1e-12);
        assert!(f.rms_residual_db < 1e-12);
        let c = fit_linear(&[2.0, 3.0, 4.0], &[1.5, 1.5, 1.5]).unwrap();
        assert_relative_eq!(c.coefficients.a, 0.0, epsilon = 1e-15);
        assert_relative_eq!(c.coefficients.b, 1.5, epsilon = 1e-12);
        assert!(matches!(
            fit_linear(&[3.0, 3.0], &[1.0, 2.0]),
            Err(Error::DegenerateFit)
        ));
        assert!(matches!(
            fit_linear(&[3.0], &[1.0]),
            Err(Error::DegenerateFit)
        ));
        assert!(fit_linear(&[3.0, 4.0], &[1.0]).is_err());
        // unsorted input comes back sorted by exponent
        let u = fit_linear(&[3.6, 2.8], &[4.8, 2.4]).unwrap();
        assert_eq!(u.etas, vec![2.8, 3.6]);
    }

    #[test]
    fn fit_report_footer() {
        let f = fit_linear(&[2.8, 3.6], &[2.4, 4.8]).unwrap();
        let mut buf = Vec::new();
        f.write_csv(&mut buf, &[]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("eta,mean_shift_db,predicted_shift_db,residual_db\n"));
        assert!(text.trim_end().lines().last().unwrap().starts_with("# a="));
    }

    #[test]
    fn correlation_examples() {
        let xs = [1.0, 2.0, 3.0];
        assert_relative_eq!(correlation_coefficient(&xs, &xs).unwrap(), 1.0);
        assert_relative_eq!(
            correlation_coefficient(&xs, &[-1.0, -2.0, -3.0]).unwrap(),
            -1.0
        );
        // hand evaluation: Sxy = 3, Sxx = 2, Syy = 14/3
        let expected = 3.0 / (2f64.sqrt() * (14.0f64 / 3.0).sqrt());
        let z = correlation_coefficient(&xs, &[1.0, 2.0, 4.0]).unwrap();
        assert_relative_eq!(z, expected, max_relative = 1e-14);
        assert_relative_eq!(z, 0.98198, epsilon = 1e-5);
        assert!(matches!(
            correlation_coefficient(&xs, &[2.0; 3]),
            Err(Error::ZeroVariance)
        ));
        assert!(correlation_coefficient(&xs, &[1.0]).is_err());
    }

    #[test]
    fn identical_curves_correlate_perfectly() {
        let c = ecdf(
            &(0..500)
                .map(|i| (i as f64 * 0.37).sin() * 10.0)
                .collect::<Vec<_>>(),
        );
        assert_relative_eq!(
            cdf_curve_correlation(&c, &c, 200).unwrap(),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn curve_points_are_decimated_and_end_at_one() {
        let c = ecdf(&(0..10_000).map(f64::from).collect::<Vec<_>>());
        let pts = c.curve_points(1000);
        assert_eq!(pts.len(), 1000);
        assert_eq!(pts.last().unwrap().1, 1.0);
        assert!(pts.windows(2).all(|w| w[0].0 <= w[1].0 && w[0].1 < w[1].1));
        assert_eq!(ecdf(&[1.0, 2.0]).curve_points(1000).len(), 2);
    }

    proptest! {
        #[test]
        fn shift_estimator_is_exact_for_translations(
            values in prop::collection::vec(-40.0f64..40.0, 2..200),
            c in -20.0f64..20.0,
        ) {
            let f = EmpiricalCdf::from_db(values.clone()).unwrap();
            let moved = EmpiricalCdf::from_db(values.iter().map(|v| v + c).collect()).unwrap();
            let s = mean_horizontal_shift(&f, &moved, &default_p_grid()).unwrap();
            prop_assert!((s + c).abs() < 1e-9);
        }

        #[test]
        fn collinear_points_fit_exactly(
            a in -10.0f64..10.0,
            b in -10.0f64..10.0,
            n in 2usize..12,
        ) {
            let etas: Vec<f64> = (0..n).map(|i| 2.2 + 0.2 * i as f64).collect();
            let shifts: Vec<f64> = etas.iter().map(|e| a * e + b).collect();
            let f = fit_linear(&etas, &shifts).unwrap();
            prop_assert!((f.coefficients.a - a).abs() < 1e-9);
            prop_assert!((f.coefficients.b - b).abs() < 1e-8);
            prop_assert!(f.rms_residual_db < 1e-9);
        }

        #[test]
        fn correlation_is_affine_invariant(
            pairs in prop::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 3..60),
            alpha in 0.01f64..100.0,
            beta in -1e3f64..1e3,
        ) {
            let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            let Ok(z) = correlation_coefficient(&xs, &ys) else { return Ok(()); };
            let mapped: Vec<f64> = ys.iter().map(|y| alpha * y + beta).collect();
            let z2 = correlation_coefficient(&xs, &mapped).unwrap();
            prop_assert!((z - z2).abs() < 1e-12, "{} vs {}", z, z2);
            prop_assert!((-1.0..=1.0).contains(&z));
        }

        #[test]
        fn quantiles_are_monotone(
            values in prop::collection::vec(-50.0f64..50.0, 2..300),
            p1 in 0.001f64..0.999,
            p2 in 0.001f64..0.999,
        ) {
            let f = EmpiricalCdf::from_db(values).unwrap();
            let (lo, hi) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
            prop_assert!(f.quantile(lo).unwrap() <= f.quantile(hi).unwrap());
        }
    }
}
