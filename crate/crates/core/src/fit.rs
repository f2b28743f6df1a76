//! Least-squares line fits and sample grids.

use serde::Serialize;

use crate::error::{invalid, Result};

/// Straight-line fit `y ≈ intercept + slope·x` with the largest absolute
/// deviation as residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
}

impl LineFit {
    pub fn eval(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

pub fn least_squares(x: &[f64], y: &[f64]) -> Result<LineFit> {
    if x.len() != y.len() || x.len() < 2 {
        return invalid("line fit needs at least two samples of matching length");
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return invalid("line fit needs distinct abscissae");
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).abs())
        .fold(0.0, f64::max);
    Ok(LineFit { slope, intercept, residual })
}

/// Fit of `log y` against `log x`; the residual is in natural-log units.
pub fn log_log_fit(x: &[f64], y: &[f64]) -> Result<LineFit> {
    if x.iter().chain(y).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return invalid("log-log fit needs positive finite samples");
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    least_squares(&lx, &ly)
}

/// `n` points spaced geometrically from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            let mut g: Vec<f64> = (0..n)
                .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
                .collect();
            g[0] = lo;
            g[n - 1] = hi;
            g
        }
    }
}

/// `n` points spaced uniformly from `lo` to `hi` inclusive.
pub fn lin_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Power-law rate `values ≈ C ε^rate` with the largest absolute
/// log-deviation as residual. Needs at least three positive samples.
pub fn rate_fit(eps_values: &[f64], values: &[f64]) -> Result<(f64, f64)> {
    if eps_values.len() < 3 || eps_values.len() != values.len() {
        return invalid("rate fit needs at least three samples of matching length");
    }
    let fit = log_log_fit(eps_values, values)?;
    Ok((fit.slope, fit.residual))
}

/// One measured norm across an ε sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateRow {
    pub norm_id: String,
    pub p: f64,
    pub q: f64,
    pub s: f64,
    pub values: Vec<f64>,
    pub rate: f64,
    pub residual: f64,
}

impl RateRow {
    /// Values strictly decrease along the (decreasing) ε list.
    pub fn strictly_decreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] < w[0])
    }

    pub fn non_increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0])
    }
}

/// Measured norms and their fitted rates over a decreasing ε list.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateTable {
    pub eps_values: Vec<f64>,
    pub rows: Vec<RateRow>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    norm_id: &'a str,
    p: f64,
    q: f64,
    s: f64,
    eps: f64,
    value: f64,
    fitted_rate: f64,
    residual: f64,
}

impl RateTable {
    pub fn new(eps_values: Vec<f64>) -> Result<Self> {
        if eps_values.len() < 3 {
            return invalid("a rate table needs at least three eps values");
        }
        if eps_values.iter().any(|e| !(*e > 0.0)) || eps_values.windows(2).any(|w| w[1] >= w[0]) {
            return invalid("eps values must be positive and strictly decreasing");
        }
        Ok(Self { eps_values, rows: Vec::new() })
    }

    /// Fits and appends a row; `p`, `q`, `s` label the time exponent, space
    /// exponent and smoothness of the norm.
    pub fn push(&mut self, norm_id: &str, p: f64, q: f64, s: f64, values: Vec<f64>) -> Result<&RateRow> {
        let (rate, residual) = rate_fit(&self.eps_values, &values)?;
        self.rows.push(RateRow {
            norm_id: norm_id.to_string(),
            p,
            q,
            s,
            values,
            rate,
            residual,
        });
        Ok(self.rows.last().expect("just pushed"))
    }

    pub fn get(&self, norm_id: &str) -> Option<&RateRow> {
        self.rows.iter().find(|r| r.norm_id == norm_id)
    }

    pub fn write_csv(&self, path: &std::path::Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        for row in &self.rows {
            for (eps, value) in self.eps_values.iter().zip(&row.values) {
                w.serialize(CsvRow {
                    norm_id: &row.norm_id,
                    p: row.p,
                    q: row.q,
                    s: row.s,
                    eps: *eps,
                    value: *value,
                    fitted_rate: row.rate,
                    residual: row.residual,
                })?;
            }
        }
        w.flush()?;
        Ok(())
    }
}
