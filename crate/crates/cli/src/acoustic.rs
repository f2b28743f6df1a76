use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use qnslab::acoustic::{
    acoustic_sweep, desymmetrize, duhamel_solve, linearization_order, symmetrize, symmetrized_source, AcousticState, AcousticStudyConfig,
    SymmetrizedState,
};
use qnslab::dispersion::{omega, propagate};
use qnslab::limit::DataKind;
use qnslab::qns::FluidParams;
use qnslab::spectral::io::write_xy;
use qnslab::spectral::{gradient, helmholtz_q};
use qnslab::{Field, Grid, VecField};

use crate::common::{require, CliError, Context, Summary};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlgebraConfig {
    pub points: usize,
    pub eps: f64,
    pub nu: f64,
    pub kappa: f64,
    pub random_times: usize,
}

impl Default for AlgebraConfig {
    fn default() -> Self {
        Self {
            points: 32,
            eps: 0.25,
            nu: 0.5,
            kappa: 0.4,
            random_times: 1000,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AcousticConfig {
    pub algebra: AlgebraConfig,
    pub study: AcousticStudyConfig,
    /// Also run the well-prepared sweep and compare norm by norm.
    pub paired: bool,
}

impl Default for AcousticConfig {
    fn default() -> Self {
        Self {
            algebra: AlgebraConfig::default(),
            study: AcousticStudyConfig::default(),
            paired: true,
        }
    }
}

/// Real field with a handful of random low modes and zero mean.
fn random_field(grid: &Grid, rng: &mut ChaCha8Rng) -> Field {
    let modes: Vec<(f64, f64, f64, f64)> = (0..6)
        .map(|_| {
            (
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-5i32..=5) as f64,
                rng.gen_range(-5i32..=5) as f64,
                rng.gen_range(0.0..std::f64::consts::TAU),
            )
        })
        .collect();
    let f = Field::from_fn(grid, |x| modes.iter().map(|(a, k1, k2, p)| a * (k1 * x[0] + k2 * x[1] + p).cos()).sum());
    let mean = f.mean().re;
    f.map_real(|v| v - mean)
}

fn algebra_checks(cfg: &AlgebraConfig, seed: u64, summary: &mut Summary) -> Result<(), CliError> {
    let grid = Grid::cube(2, cfg.points, std::f64::consts::TAU)?;
    let params = FluidParams::new(cfg.eps, cfg.nu, cfg.kappa, 2.0).map_err(|e| CliError::Config(format!("algebra: {e}")))?;
    let disp = params.dispersion();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_field(&grid, &mut rng);
    let n0 = f.l2_norm();

    let mut unitarity: f64 = 0.0;
    let mut group: f64 = 0.0;
    for n in 0..cfg.random_times {
        let (t1, t2) = (rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0));
        let a = propagate(&f, t1, &disp);
        unitarity = unitarity.max((a.l2_norm() - n0).abs() / n0);
        if n < 50 {
            let two = propagate(&a, t2, &disp);
            group = group.max(two.max_distance(&propagate(&f, t1 + t2, &disp)));
        }
    }
    summary.check("unitarity", unitarity <= 1e-12, format!("max relative L2 change {unitarity:.3e}"));
    summary.check("group_law", group <= 1e-11, format!("max deviation {group:.3e}"));

    let sigma = random_field(&grid, &mut rng);
    let m = gradient(&random_field(&grid, &mut rng)).add(&VecField::new(vec![random_field(&grid, &mut rng), random_field(&grid, &mut rng)])?)?;
    let ac = AcousticState::new(sigma.clone(), m.clone(), 0.0)?;
    let back = desymmetrize(&symmetrize(&ac, &params)?, &params)?;
    let round = back.sigma.max_distance(&sigma).max(back.m.max_distance(&helmholtz_q(&m)?));
    summary.check("symmetrize_round_trip", round <= 1e-10, format!("max deviation {round:.3e}"));

    let amps = [1e-2, 5e-3, 2.5e-3, 1.25e-3];
    let order = linearization_order(&sigma, &m, &amps, &params)?;
    summary.check("linearization_order", order >= 1.9, format!("order {order:.3}"));

    // constant single-mode source against the closed form
    let k = 3.0;
    let src = gradient(&Field::from_fn(&grid, |x| (k * x[0]).cos()));
    let ft = symmetrized_source(&src);
    let zero = SymmetrizedState::new(Field::zeros(&grid), Field::zeros(&grid), 0.0)?;
    let times: Vec<f64> = (0..=20).map(|n| 0.05 * n as f64).collect();
    let traj = duhamel_solve(&zero, &times, &vec![src; times.len()], &params)?;
    let w = omega(k, &disp);
    let t = times[times.len() - 1];
    let last = &traj[traj.len() - 1];
    let err = last
        .sigma_tilde
        .max_distance(&ft.scale(((w * t).cos() - 1.0) / w))
        .max(last.m_tilde.max_distance(&ft.scale((w * t).sin() / w)));
    summary.check("duhamel_closed_form", err <= 1e-8, format!("max deviation {err:.3e}"));

    summary.result(
        "algebra",
        serde_json::json!({
            "unitarity": unitarity,
            "group_law": group,
            "round_trip": round,
            "linearization_order": order,
            "duhamel_error": err,
        }),
    )?;
    Ok(())
}

pub fn run(ctx: &Context) -> Result<Summary, CliError> {
    let cfg: AcousticConfig = ctx.load()?;
    require(cfg.algebra.points >= 8, "algebra.points", "must be at least 8")?;
    cfg.study.validate().map_err(|e| CliError::Config(format!("study: {e}")))?;
    let mut summary = Summary::new("acoustic", vec![5], ctx, &cfg)?;
    algebra_checks(&cfg.algebra, ctx.seed, &mut summary)?;

    let ill = acoustic_sweep(&cfg.study)?;
    for v in &ill.decay.verdicts {
        summary.check(
            &format!("decreasing_{}", v.norm_id),
            v.decreasing,
            format!("rate {:+.4}", v.rate),
        );
    }
    let qm_rate = ill.decay.table.get(qnslab::acoustic::study::NORM_QM_BESOV).map_or(f64::NAN, |r| r.rate);
    summary.check("qm_rate_positive", qm_rate > 0.0, format!("rate {qm_rate:+.4}"));
    let table = ctx.path("rate_table.csv");
    ill.decay.table.write_csv(&table)?;
    summary.artifact(&table);
    for track in &ill.tracks {
        let p = ctx.path(&format!("qm_besov_eps{}.dat", track.eps));
        write_xy(&p, &track.times, &track.qm_besov)?;
        summary.artifact(&p);
    }
    summary.result("decay", &ill.decay)?;

    if cfg.paired && cfg.study.kind == DataKind::IllPrepared {
        let well_cfg = AcousticStudyConfig {
            kind: DataKind::WellPrepared,
            ..cfg.study.clone()
        };
        let well = acoustic_sweep(&well_cfg)?;
        for row in &ill.decay.table.rows {
            let Some(w) = well.decay.table.get(&row.norm_id) else { continue };
            let ok = w.values.iter().zip(&row.values).all(|(a, b)| a <= b);
            summary.check(&format!("well_below_ill_{}", row.norm_id), ok, format!("well {:?} vs ill {:?}", w.values, row.values));
        }
        let table = ctx.path("rate_table_well_prepared.csv");
        well.decay.table.write_csv(&table)?;
        summary.artifact(&table);
        summary.result("decay_well_prepared", &well.decay)?;
    }
    Ok(summary)
}
