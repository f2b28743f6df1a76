//! Strichartz ratio probes across an ε sweep.
//!
//! Homogeneous: `‖e^{itH_ε}f‖_{L^p_t B^0_{q,2}} / (ε^α ‖f‖_{B^α_{2,2}})`.
//! Inhomogeneous: `‖∫_{s<t} e^{i(t−s)H_ε}F(s)ds‖_{L^p_t B^0_{q,2}} /
//! (ε^α ‖F‖_{L^{p₁'}_t B^α_{q₁',2}})`.

use serde::Serialize;

use crate::dispersion::admissible::{admissible_dual, is_admissible, AdmissiblePair};
use crate::dispersion::propagator::{duhamel, propagate};
use crate::dispersion::symbol::DispersionParams;
use crate::error::{invalid, Result};
use crate::fit::log_log_fit;
use crate::spectral::field::ScalarField;
use crate::spectral::norms::{besov_norm, time_norm};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrichartzRow {
    pub eps: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrichartzReport {
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
    pub rows: Vec<StrichartzRow>,
    pub max_ratio: f64,
    /// Log-log slope of the ratio against ε; nonnegative means the ratio
    /// does not grow as ε decreases.
    pub trend: f64,
    pub non_increasing: bool,
}

fn check_pair(pair: &AdmissiblePair<f64>, dim: usize) -> Result<()> {
    if !is_admissible(&pair.p, &pair.q, pair.d) {
        return invalid("Strichartz probe needs an admissible pair");
    }
    if pair.d as usize != dim {
        return invalid(format!("pair dimension {} does not match grid dimension {dim}", pair.d));
    }
    Ok(())
}

fn report(pair: &AdmissiblePair<f64>, alpha: f64, rows: Vec<StrichartzRow>) -> Result<StrichartzReport> {
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let trend = if rows.len() >= 2 {
        let eps: Vec<f64> = rows.iter().map(|r| r.eps).collect();
        let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
        log_log_fit(&eps, &ratios)?.slope
    } else {
        0.0
    };
    Ok(StrichartzReport {
        p: pair.p.to_f64(),
        q: pair.q.to_f64(),
        alpha,
        rows,
        max_ratio,
        trend,
        non_increasing: trend >= -0.05,
    })
}

fn lhs_norm(traj: &[ScalarField<f64>], times: &[f64], pair: &AdmissiblePair<f64>) -> Result<f64> {
    let q = pair.q.to_f64();
    let vals = traj.iter().map(|u| besov_norm(u, 0.0, q, 2.0)).collect::<Result<Vec<_>>>()?;
    time_norm(times, &vals, pair.p.to_f64())
}

pub fn strichartz_probe(
    f: &ScalarField<f64>,
    kappa: f64,
    eps_values: &[f64],
    pair: &AdmissiblePair<f64>,
    alpha: f64,
    times: &[f64],
) -> Result<StrichartzReport> {
    check_pair(pair, f.grid().dim())?;
    let rhs = besov_norm(f, alpha, 2.0, 2.0)?;
    let mut rows = Vec::with_capacity(eps_values.len());
    for &eps in eps_values {
        let params = DispersionParams::new(eps, kappa)?;
        let traj: Vec<_> = times.iter().map(|&t| propagate(f, t, &params)).collect();
        let lhs = lhs_norm(&traj, times, pair)?;
        rows.push(StrichartzRow { eps, lhs, rhs, ratio: lhs / (eps.powf(alpha) * rhs) });
    }
    report(pair, alpha, rows)
}

/// `source[n]` is `F(times[n])`; the retarded integral starts at `times[0]`.
pub fn strichartz_probe_inhomogeneous(
    source: &[ScalarField<f64>],
    kappa: f64,
    eps_values: &[f64],
    pair: &AdmissiblePair<f64>,
    source_pair: &AdmissiblePair<f64>,
    alpha: f64,
    times: &[f64],
) -> Result<StrichartzReport> {
    let Some(first) = source.first() else {
        return invalid("inhomogeneous probe needs source samples");
    };
    check_pair(pair, first.grid().dim())?;
    check_pair(source_pair, first.grid().dim())?;
    let (p1d, q1d) = admissible_dual(source_pair);
    let snorms = source.iter().map(|f| besov_norm(f, alpha, q1d.to_f64(), 2.0)).collect::<Result<Vec<_>>>()?;
    let rhs = time_norm(times, &snorms, p1d.to_f64())?;
    let zero = ScalarField::zeros(first.grid());
    let mut rows = Vec::with_capacity(eps_values.len());
    for &eps in eps_values {
        let params = DispersionParams::new(eps, kappa)?;
        let traj = duhamel(&zero, times, source, &params)?;
        let lhs = lhs_norm(&traj, times, pair)?;
        rows.push(StrichartzRow { eps, lhs, rhs, ratio: lhs / (eps.powf(alpha) * rhs) });
    }
    report(pair, alpha, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::lin_space;
    use crate::scalar::Exponent;
    use crate::spectral::grid::SpectralGrid;

    #[test]
    fn energy_pair_is_unitarity() {
        let g = SpectralGrid::<f64>::new(&[32, 32], &[20.0, 20.0]).unwrap();
        let f = ScalarField::from_fn(&g, |x| (-((x[0] - 10.0).powi(2) + (x[1] - 10.0).powi(2)) / 4.0).exp());
        let pair = AdmissiblePair::new(Exponent::Infinite, Exponent::Finite(2.0), 2).unwrap();
        let rep = strichartz_probe(&f, 1.0, &[1.0, 0.5, 0.25], &pair, 0.0, &lin_space(0.0, 1.0, 5)).unwrap();
        let b0 = besov_norm(&f, 0.0, 2.0, 2.0).unwrap();
        for row in &rep.rows {
            assert!((row.lhs - b0).abs() < 1e-10 * b0);
        }
        assert!((rep.max_ratio - rep.rows[0].ratio).abs() < 1e-10);
        assert!(rep.trend.abs() < 1e-8);
    }

    #[test]
    fn rejects_mismatched_pair() {
        let g = SpectralGrid::<f64>::new(&[8], &[1.0]).unwrap();
        let f = ScalarField::constant(&g, 1.0);
        let pair = AdmissiblePair::new(Exponent::Finite(2.0), Exponent::Finite(6.0), 3).unwrap();
        assert!(strichartz_probe(&f, 1.0, &[1.0], &pair, 0.0, &[0.0, 1.0]).is_err());
    }
}
