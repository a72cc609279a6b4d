//! Quantifying the abstractiveness–factuality tradeoff: abstractiveness-
//! adjusted factuality (mu-scores), least-squares trend lines with the
//! factuality-at-50%-abstractiveness readout, and column correlations.
//!
//! Percentages in `[0, 100]` are the canonical unit throughout this module.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TradeoffError {
    #[error("{name} must lie in [0, 100], got {value}")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("phi must be positive, got {0}")]
    InvalidPhi(f64),
    #[error("trend fitting needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("degenerate input: {0}")]
    DegenerateVariance(&'static str),
    #[error("column lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
}

/// One (abstractiveness, factuality) observation, both as percentages.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffPoint {
    pub label: String,
    pub abstractiveness: f64,
    pub factuality: f64,
}

impl TradeoffPoint {
    pub fn new(
        label: impl Into<String>,
        abstractiveness: f64,
        factuality: f64,
    ) -> Result<Self, TradeoffError> {
        check_percentage("abstractiveness", abstractiveness)?;
        check_percentage("factuality", factuality)?;
        Ok(Self {
            label: label.into(),
            abstractiveness,
            factuality,
        })
    }
}

/// Ordinary least squares fit of factuality on abstractiveness.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendFit {
    pub slope: f64,
    pub intercept: f64,
    pub n_points: usize,
    pub r_squared: f64,
}

impl TrendFit {
    /// Predicted factuality at abstractiveness `a`.
    pub fn predict(&self, a: f64) -> f64 {
        self.intercept + self.slope * a
    }

    /// Factuality predicted at 50% abstractiveness.
    pub fn f_at_50(&self) -> f64 {
        self.predict(50.0)
    }
}

fn check_percentage(name: &'static str, value: f64) -> Result<(), TradeoffError> {
    if !value.is_finite() || !(0.0..=100.0).contains(&value) {
        return Err(TradeoffError::OutOfRange { name, value });
    }
    Ok(())
}

/// Weighted average `(phi * factuality + abstractiveness) / (phi + 1)`.
///
/// The default weight `phi = 2` makes a one-point factuality loss cost as
/// much as a two-point abstractiveness gain.
pub fn mu_score(factuality: f64, abstractiveness: f64, phi: f64) -> Result<f64, TradeoffError> {
    check_percentage("factuality", factuality)?;
    check_percentage("abstractiveness", abstractiveness)?;
    if !phi.is_finite() || phi <= 0.0 {
        return Err(TradeoffError::InvalidPhi(phi));
    }
    Ok((phi * factuality + abstractiveness) / (phi + 1.0))
}

/// Fit factuality = intercept + slope * abstractiveness by unweighted
/// ordinary least squares.
pub fn fit_trend(points: &[TradeoffPoint]) -> Result<TrendFit, TradeoffError> {
    if points.len() < 2 {
        return Err(TradeoffError::TooFewPoints(points.len()));
    }
    let n = points.len() as f64;
    let mean_a = points.iter().map(|p| p.abstractiveness).sum::<f64>() / n;
    let mean_f = points.iter().map(|p| p.factuality).sum::<f64>() / n;
    let sxx: f64 = points
        .iter()
        .map(|p| (p.abstractiveness - mean_a).powi(2))
        .sum();
    if sxx == 0.0 {
        return Err(TradeoffError::DegenerateVariance(
            "all abstractiveness values are equal",
        ));
    }
    let sxy: f64 = points
        .iter()
        .map(|p| (p.abstractiveness - mean_a) * (p.factuality - mean_f))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_f - slope * mean_a;

    let ss_res: f64 = points
        .iter()
        .map(|p| (p.factuality - (intercept + slope * p.abstractiveness)).powi(2))
        .sum();
    let ss_tot: f64 = points.iter().map(|p| (p.factuality - mean_f).powi(2)).sum();
    // All-equal factuality is fit exactly by the horizontal line.
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };

    Ok(TrendFit {
        slope,
        intercept,
        n_points: points.len(),
        r_squared,
    })
}

/// Predicted value of an existing fit at abstractiveness `a`; `f_at(fit, 50)`
/// is the F@50 readout.
pub fn f_at(fit: &TrendFit, a: f64) -> f64 {
    fit.predict(a)
}

/// Sample Pearson correlation of two equal-length columns.
pub fn pearson_r(a: &[f64], b: &[f64]) -> Result<f64, TradeoffError> {
    if a.len() != b.len() {
        return Err(TradeoffError::LengthMismatch(a.len(), b.len()));
    }
    if a.len() < 2 {
        return Err(TradeoffError::TooFewPoints(a.len()));
    }
    let n = a.len() as f64;
    let mean_a = a.iter().sum::<f64>() / n;
    let mean_b = b.iter().sum::<f64>() / n;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    let mut sab = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        saa += (x - mean_a).powi(2);
        sbb += (y - mean_b).powi(2);
        sab += (x - mean_a) * (y - mean_b);
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(TradeoffError::DegenerateVariance(
            "a column has zero variance",
        ));
    }
    Ok(sab / (saa * sbb).sqrt())
}
