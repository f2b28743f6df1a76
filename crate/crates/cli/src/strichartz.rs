use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use qnslab::dispersion::{strichartz_probe, strichartz_probe_inhomogeneous, AdmissiblePair, StrichartzReport};
use qnslab::fit::lin_space;
use qnslab::spectral::io::write_xy;
use qnslab::{Exponent, Field, Grid};

use crate::common::{require, CliError, Context, Summary};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StrichartzConfig {
    pub dim: usize,
    pub points: usize,
    pub length: f64,
    pub kappa: f64,
    pub eps_values: Vec<f64>,
    /// Space exponents; the time exponent follows from admissibility.
    pub q_values: Vec<f64>,
    pub alpha: f64,
    pub t_end: f64,
    pub n_times: usize,
    /// Number of Gaussian bumps in the random datum.
    pub bumps: usize,
    pub width: f64,
    pub inhomogeneous: bool,
}

impl Default for StrichartzConfig {
    fn default() -> Self {
        Self {
            dim: 3,
            points: 32,
            length: 32.0,
            kappa: 1.0,
            eps_values: vec![1.0, 0.5, 0.25, 0.125],
            q_values: vec![2.0, 3.0, 6.0],
            alpha: 0.1,
            t_end: 1.0,
            n_times: 21,
            bumps: 3,
            width: 2.0,
            inhomogeneous: true,
        }
    }
}

/// Time exponent `p` with `2/p + d/q = d/2`.
fn time_exponent(q: f64, d: usize) -> Exponent<f64> {
    let inv = d as f64 / 4.0 - d as f64 / (2.0 * q);
    if inv.abs() < 1e-14 {
        Exponent::Infinite
    } else {
        Exponent::Finite(1.0 / inv)
    }
}

fn random_datum(grid: &Grid, cfg: &StrichartzConfig, seed: u64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = cfg.dim;
    let bumps: Vec<(f64, Vec<f64>)> = (0..cfg.bumps)
        .map(|_| {
            let amp = rng.gen_range(0.5..1.5);
            let centre = (0..d).map(|_| cfg.length * rng.gen_range(0.3..0.7)).collect();
            (amp, centre)
        })
        .collect();
    let two_w2 = 2.0 * cfg.width * cfg.width;
    Field::from_fn(grid, |x| {
        bumps
            .iter()
            .map(|(a, c)| {
                let r2: f64 = (0..d).map(|i| (x[i] - c[i]).powi(2)).sum();
                a * (-r2 / two_w2).exp()
            })
            .sum()
    })
}

fn label(rep: &StrichartzReport) -> String {
    if rep.p.is_infinite() {
        format!("inf_{}", rep.q)
    } else {
        format!("{:.3}_{}", rep.p, rep.q)
    }
}

pub fn run(ctx: &Context) -> Result<Summary, CliError> {
    let cfg: StrichartzConfig = ctx.load()?;
    require((1..=3).contains(&cfg.dim), "dim", "must be 1, 2 or 3")?;
    require(cfg.points >= 8, "points", "must be at least 8")?;
    require(cfg.alpha >= 0.0, "alpha", "must be nonnegative")?;
    require(cfg.n_times >= 2 && cfg.t_end > 0.0, "t_end", "needs a positive horizon and at least two samples")?;
    require(cfg.eps_values.len() >= 2, "eps_values", "needs at least two values")?;
    let mut summary = Summary::new("strichartz", vec![], ctx, &cfg)?;
    let grid = Grid::cube(cfg.dim, cfg.points, cfg.length)?;
    let f = random_datum(&grid, &cfg, ctx.seed);
    let times = lin_space(0.0, cfg.t_end, cfg.n_times);
    let d = cfg.dim as u32;
    let mut reports = Vec::new();
    for &q in &cfg.q_values {
        let pair = AdmissiblePair::new(time_exponent(q, cfg.dim), Exponent::Finite(q), d)
            .map_err(|e| CliError::Config(format!("`q_values`: {e}")))?;
        let rep = strichartz_probe(&f, cfg.kappa, &cfg.eps_values, &pair, cfg.alpha, &times)?;
        reports.push(("homogeneous", rep));
        if cfg.inhomogeneous {
            let energy = AdmissiblePair::new(Exponent::Infinite, Exponent::Finite(2.0), d)?;
            let source: Vec<Field> = times.iter().map(|&t| f.scale((2.0 * t).cos())).collect();
            let rep = strichartz_probe_inhomogeneous(&source, cfg.kappa, &cfg.eps_values, &pair, &energy, cfg.alpha, &times)?;
            reports.push(("inhomogeneous", rep));
        }
    }
    for (kind, rep) in &reports {
        let tag = format!("{kind}_{}", label(rep));
        if *kind == "homogeneous" && rep.q == 2.0 {
            // the energy pair gains nothing in ε: the left side is ‖f‖ at every ε
            let lhs: Vec<f64> = rep.rows.iter().map(|r| r.lhs).collect();
            let (lo, hi) = lhs.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
            summary.check(
                &format!("energy_pair_unitarity_{tag}"),
                hi - lo <= 1e-10 * hi,
                format!("left side spread {:.3e} over ε", (hi - lo) / hi),
            );
        } else {
            summary.check(
                &format!("ratio_bounded_{tag}"),
                rep.max_ratio.is_finite() && rep.non_increasing,
                format!("max ratio {:.4}, trend {:+.4}", rep.max_ratio, rep.trend),
            );
        }
        let plot = ctx.path(&format!("ratio_{tag}.dat"));
        write_xy(
            &plot,
            &rep.rows.iter().map(|r| r.eps).collect::<Vec<_>>(),
            &rep.rows.iter().map(|r| r.ratio).collect::<Vec<_>>(),
        )?;
        summary.artifact(&plot);
    }
    let path = ctx.path("strichartz.csv");
    let mut w = csv::Writer::from_path(&path).map_err(|e| CliError::Other(e.to_string()))?;
    w.write_record(["kind", "p", "q", "alpha", "eps", "lhs", "rhs", "ratio"]).map_err(|e| CliError::Other(e.to_string()))?;
    for (kind, rep) in &reports {
        for r in &rep.rows {
            w.write_record([
                kind.to_string(),
                rep.p.to_string(),
                rep.q.to_string(),
                rep.alpha.to_string(),
                r.eps.to_string(),
                r.lhs.to_string(),
                r.rhs.to_string(),
                r.ratio.to_string(),
            ])
            .map_err(|e| CliError::Other(e.to_string()))?;
        }
    }
    w.flush()?;
    summary.artifact(&path);
    let results: Vec<_> = reports.iter().map(|(k, r)| serde_json::json!({ "kind": k, "report": r })).collect();
    summary.result("reports", results)?;
    Ok(summary)
}
