use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use qnslab::limit::study::{NORM_DENSITY, NORM_LAMBDA, NORM_QM};
use qnslab::limit::{alpha_exponent, beta_exponent, convergence_study, taylor_green_error, DataKind, StudyConfig, StudyReport};
use qnslab::qns::DtPolicy;
use qnslab::spectral::io::write_xy;
use qnslab::Grid;

use crate::common::{CliError, Context, Summary};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TaylorGreenConfig {
    pub points: usize,
    pub length: f64,
    pub k: f64,
    pub nu: f64,
    pub t_end: f64,
    pub dt: f64,
    pub tolerance: f64,
}

impl Default for TaylorGreenConfig {
    fn default() -> Self {
        Self {
            points: 32,
            length: std::f64::consts::TAU,
            k: 1.0,
            nu: 0.1,
            t_end: 5.0,
            dt: 0.05,
            tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LimitConfig {
    pub study: StudyConfig,
    /// Also run the well-prepared sweep for the contrast checks.
    pub paired: bool,
    pub taylor_green: TaylorGreenConfig,
    /// Relative tolerance on the density rate against `β(γ)`.
    pub rate_tolerance: f64,
}

impl Default for LimitConfig {
    fn default() -> Self {
        Self {
            study: StudyConfig::default(),
            paired: true,
            taylor_green: TaylorGreenConfig::default(),
            rate_tolerance: 0.2,
        }
    }
}

type Q = Ratio<i64>;

/// Closest rational to `x` with denominator at most 1000.
fn to_ratio(x: f64) -> Q {
    let den = 1000i64;
    Q::new((x * den as f64).round() as i64, den)
}

fn exponent_table(summary: &mut Summary) -> Result<(), CliError> {
    let two = Q::from_integer(2);
    let g15 = Q::new(3, 2);
    let rows = [
        (two, beta_exponent(&two)?, alpha_exponent(&two, &two)?, Q::from_integer(1), Q::from_integer(1)),
        (g15, beta_exponent(&g15)?, alpha_exponent(&two, &g15)?, Q::new(4, 9), Q::new(8, 9)),
    ];
    let ok = rows.iter().all(|(_, b, a, eb, ea)| b == eb && a == ea);
    let text: Vec<String> = rows.iter().map(|(g, b, a, _, _)| format!("gamma {g}: beta {b}, alpha(2) {a}")).collect();
    summary.check("exponent_table", ok, text.join("; "));
    summary.result(
        "exponents",
        rows.iter()
            .map(|(g, b, a, _, _)| serde_json::json!({ "gamma": g.to_string(), "beta": b.to_string(), "alpha_2": a.to_string() }))
            .collect::<Vec<_>>(),
    )?;
    Ok(())
}

fn write_report(ctx: &Context, summary: &mut Summary, rep: &StudyReport, suffix: &str) -> Result<(), CliError> {
    let table = ctx.path(&format!("rate_table{suffix}.csv"));
    rep.table.write_csv(&table)?;
    summary.artifact(&table);
    for m in &rep.members {
        let p = ctx.path(&format!("lambda_gap{suffix}_eps{}.dat", m.eps));
        write_xy(&p, &rep.times, &m.lambda_gap)?;
        summary.artifact(&p);
    }
    if let Some(row) = rep.table.get(NORM_DENSITY) {
        let p = ctx.path(&format!("density_rate{suffix}.dat"));
        write_xy(&p, &rep.table.eps_values, &row.values)?;
        summary.artifact(&p);
    }
    Ok(())
}

pub fn run(ctx: &Context) -> Result<Summary, CliError> {
    let cfg: LimitConfig = ctx.load()?;
    cfg.study.validate().map_err(|e| CliError::Config(format!("study: {e}")))?;
    let mut summary = Summary::new("limit", vec![8, 9, 10], ctx, &cfg)?;
    exponent_table(&mut summary)?;

    let tg = &cfg.taylor_green;
    let grid = Grid::cube(2, tg.points, tg.length)?;
    let tg_err = taylor_green_error(&grid, tg.k, tg.nu, tg.t_end, DtPolicy::Fixed(tg.dt))?;
    summary.check("taylor_green", tg_err <= tg.tolerance, format!("max deviation {tg_err:.3e}"));
    summary.result("taylor_green_error", tg_err)?;

    let ill = convergence_study(&cfg.study)?;
    if let Some(msg) = &ill.aborted {
        return Err(CliError::Abort {
            message: msg.clone(),
            snapshot: None,
        });
    }
    let beta = beta_exponent(&to_ratio(cfg.study.gamma))?;
    let beta = *beta.numer() as f64 / *beta.denom() as f64;
    let rate = ill.table.get(NORM_DENSITY).map_or(f64::NAN, |r| r.rate);
    summary.check(
        "density_rate",
        (rate - beta).abs() <= cfg.rate_tolerance * beta,
        format!("rate {rate:.4} vs beta {beta:.4}"),
    );
    let qm = ill.table.get(NORM_QM);
    summary.check(
        "qm_decreasing",
        qm.is_some_and(|r| r.strictly_decreasing() && r.rate > 0.0),
        qm.map_or("missing".into(), |r| format!("values {:?}, rate {:+.4}", r.values, r.rate)),
    );
    let lam = ill.table.get(NORM_LAMBDA);
    summary.check(
        "lambda_gap_decreasing",
        lam.is_some_and(|r| r.strictly_decreasing()),
        lam.map_or("missing".into(), |r| format!("values {:?}", r.values)),
    );
    summary.result("rate_a", rate)?;
    summary.result("beta", beta)?;
    write_report(ctx, &mut summary, &ill, "")?;
    summary.result("study", &ill)?;

    if cfg.paired && cfg.study.kind == DataKind::IllPrepared {
        let well_cfg = StudyConfig {
            kind: DataKind::WellPrepared,
            ..cfg.study.clone()
        };
        let well = convergence_study(&well_cfg)?;
        if let Some(msg) = &well.aborted {
            return Err(CliError::Abort {
                message: msg.clone(),
                snapshot: None,
            });
        }
        let (w, i) = (well.table.get(NORM_LAMBDA), ill.table.get(NORM_LAMBDA));
        let ok = matches!((w, i), (Some(w), Some(i)) if w.values.iter().zip(&i.values).all(|(a, b)| a <= b));
        summary.check(
            "well_below_ill_lambda_gap",
            ok,
            format!("well {:?} vs ill {:?}", w.map(|r| &r.values), i.map(|r| &r.values)),
        );
        let l = &well.leray;
        summary.check(
            "leray_well_prepared",
            l.max_residual <= 1e-6 * l.energy0,
            format!("residual {:.3e} vs E0 {:.3e}", l.max_residual, l.energy0),
        );
        write_report(ctx, &mut summary, &well, "_well_prepared")?;
        summary.result("study_well_prepared", &well)?;
    }
    Ok(summary)
}
