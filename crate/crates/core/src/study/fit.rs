//! Least-squares fits of convergence data.

use super::StudyRow;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitKind {
    /// `log e = r log h + c`, reporting the rate `r`.
    Algebraic,
    /// `log e = -b sqrt(N) + c`, reporting the slope `b`.
    Exponential,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitResult {
    pub kind: FitKind,
    /// Rate `r` or decay slope `b`.
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares line through `(x, y)`; returns `(slope, intercept, R²)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64)> {
    let n = x.len();
    if n != y.len() {
        return Err(Error::Fit("mismatched sample lengths".into()));
    }
    if n < 2 {
        return Err(Error::Fit(format!("{n} points, need at least 2")));
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    let r2 = if syy == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok((slope, intercept, r2))
}

pub fn fit(rows: &[StudyRow], kind: FitKind) -> Result<FitResult> {
    if let Some(r) = rows.iter().find(|r| r.error <= 0.0 || !r.error.is_finite()) {
        return Err(Error::Fit(format!(
            "non-positive error {} at level {}",
            r.error, r.level
        )));
    }
    let y: Vec<f64> = rows.iter().map(|r| r.error.ln()).collect();
    let x: Vec<f64> = match kind {
        FitKind::Algebraic => rows.iter().map(|r| r.h.ln()).collect(),
        FitKind::Exponential => rows.iter().map(|r| (r.n_dofs as f64).sqrt()).collect(),
    };
    let (slope, intercept, r_squared) = linear_fit(&x, &y)?;
    Ok(FitResult {
        kind,
        slope: if kind == FitKind::Exponential {
            -slope
        } else {
            slope
        },
        intercept,
        r_squared,
    })
}
