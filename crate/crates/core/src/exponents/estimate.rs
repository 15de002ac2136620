use std::io::{self, Write};

use serde::Serialize;

use super::{ExponentError, GrowthSeries, SeriesKind};

/// Observations with `N(R) ≥ 2` a series needs before it is fitted.
pub const MIN_OBSERVATIONS: u64 = 10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentEstimate {
    pub kind: SeriesKind,
    pub depth: usize,
    /// Growth rate of `N(R)` per unit of `R`.
    pub slope: f64,
    /// Range `[R_lo, R_hi]` of the fit.
    pub window: (f64, f64),
    /// Weighted RMS residual of `log N` in the window.
    pub residual: f64,
    /// Observations in the window.
    pub observations: u64,
    /// Slope at this depth minus slope at the previous one, when both fit.
    pub depth_pair_gap: Option<f64>,
}

impl ExponentEstimate {
    pub fn write_json_line(&self, mut out: impl Write) -> io::Result<()> {
        #[derive(Serialize)]
        struct Record {
            record: &'static str,
            kind: SeriesKind,
            depth: usize,
            slope: f64,
            window: (f64, f64),
            residual: f64,
            observations: u64,
            depth_gap: Option<f64>,
        }
        let rec = Record {
            record: "estimate",
            kind: self.kind,
            depth: self.depth,
            slope: self.slope,
            window: self.window,
            residual: self.residual,
            observations: self.observations,
            depth_gap: self.depth_pair_gap,
        };
        serde_json::to_writer(&mut out, &rec)?;
        out.write_all(b"\n")
    }
}

struct Fit {
    slope: f64,
    window: (f64, f64),
    residual: f64,
    observations: u64,
}

/// Least squares of `log N(R)` on `R` over `[R_max/2, R_max]` (clipped to
/// the observed range), each observed value weighted by the number of
/// observations at it.
fn fit(s: &GrowthSeries) -> Result<Fit, ExponentError> {
    let counted: u64 = s.points().iter().zip(s.multiplicities()).filter(|((_, n), _)| *n >= 2).map(|(_, (_, m))| m).sum();
    if counted < MIN_OBSERVATIONS {
        return Err(ExponentError::InsufficientData { what: "observations with count at least 2", found: counted, needed: MIN_OBSERVATIONS });
    }
    let r_hi = s.r_max().expect("nonempty series");
    let r_lo = (r_hi / 2.0).max(s.points()[0].0);
    let rows: Vec<(f64, f64, f64)> = s
        .points()
        .iter()
        .zip(s.multiplicities())
        .filter(|((r, n), (_, m))| *r >= r_lo && *n >= 1 && *m >= 1)
        .map(|(&(r, n), (_, m))| (r, (n as f64).ln(), m as f64))
        .collect();
    if rows.len() < 2 {
        return Err(ExponentError::InsufficientData { what: "distinct values in the window", found: rows.len() as u64, needed: 2 });
    }
    let w: f64 = rows.iter().map(|r| r.2).sum();
    let xm = rows.iter().map(|r| r.2 * r.0).sum::<f64>() / w;
    let ym = rows.iter().map(|r| r.2 * r.1).sum::<f64>() / w;
    let sxy: f64 = rows.iter().map(|r| r.2 * (r.0 - xm) * (r.1 - ym)).sum();
    let sxx: f64 = rows.iter().map(|r| r.2 * (r.0 - xm) * (r.0 - xm)).sum();
    let slope = (sxy / sxx).max(0.0);
    let sse: f64 = rows.iter().map(|r| r.2 * (r.1 - ym - slope * (r.0 - xm)).powi(2)).sum();
    Ok(Fit { slope, window: (r_lo, r_hi), residual: (sse / w).sqrt(), observations: w as u64 })
}

fn assemble(s: &GrowthSeries, f: Fit, previous: Option<Fit>) -> ExponentEstimate {
    ExponentEstimate {
        kind: s.kind(),
        depth: s.depth(),
        slope: f.slope,
        window: f.window,
        residual: f.residual,
        observations: f.observations,
        depth_pair_gap: previous.map(|g| f.slope - g.slope),
    }
}

/// Exponential growth rate of a series.
///
/// ```
/// use geocurrents::exponents::{estimate_exponent, GrowthSeries, SeriesKind};
///
/// let ln2 = 2f64.ln();
/// let points: Vec<_> = (0..24).map(|k| (k as f64 * ln2, 1u64 << k)).collect();
/// let s = GrowthSeries::from_points(SeriesKind::Length, 1, &points).unwrap();
/// assert!((estimate_exponent(&s).unwrap().slope - 1.0).abs() < 1e-12);
/// ```
pub fn estimate_exponent(s: &GrowthSeries) -> Result<ExponentEstimate, ExponentError> {
    let f = fit(s)?;
    let previous = (s.depth() > 1).then(|| fit(&s.restricted(s.depth() - 1)).ok()).flatten();
    Ok(assemble(s, f, previous))
}

/// [`estimate_exponent`] on the part of the series that has settled in
/// depth to within the fraction `tau` (see [`GrowthSeries::stable_radius`]).
pub fn estimate_trusted(s: &GrowthSeries, tau: f64) -> Result<ExponentEstimate, ExponentError> {
    let trusted = s.trusted(tau);
    let f = fit(&trusted)?;
    let previous = (s.depth() > 1).then(|| fit(&s.restricted(s.depth() - 1).trusted(tau)).ok()).flatten();
    Ok(assemble(&trusted, f, previous))
}
