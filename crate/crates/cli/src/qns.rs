use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use qnslab::limit::{make_data, DataKind, DataProfile};
use qnslab::qns::{bohm_forms, qns_solve, total_energy, DtPolicy, FluidParams, FluidState, QnsRun, SolveOptions};
use qnslab::spectral::io::write_xy;
use qnslab::{Field, Grid};

use crate::common::{require, CliError, Context, Summary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialData {
    Equilibrium,
    IllPrepared,
    WellPrepared,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QnsConfig {
    pub dim: usize,
    pub points: usize,
    pub length: f64,
    pub eps: f64,
    pub nu: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub delta_reg: f64,
    pub data: InitialData,
    pub amplitude: f64,
    pub width: f64,
    pub t_end: f64,
    /// Fixed step; the adaptive rule is used when absent.
    pub dt: Option<f64>,
    pub dt_max: f64,
    /// Repeat the run at `dt/2` and require both slacks to halve.
    pub halving_check: bool,
    /// Relative tolerance on `E + D` and `B` monotonicity.
    pub slack_tol: f64,
    /// Random band-limited densities per dimension for the Bohm check.
    pub bohm_samples: usize,
}

impl Default for QnsConfig {
    fn default() -> Self {
        Self {
            dim: 2,
            points: 256,
            length: 40.0,
            eps: 0.1,
            nu: 0.05,
            kappa: 0.03,
            gamma: 2.0,
            delta_reg: 0.0,
            data: InitialData::IllPrepared,
            amplitude: 0.5,
            width: 1.0,
            t_end: 1.0,
            dt: Some(0.01),
            dt_max: 0.01,
            halving_check: true,
            slack_tol: 1e-3,
            bohm_samples: 3,
        }
    }
}

fn initial_state(cfg: &QnsConfig, params: &FluidParams<f64>, grid: &Grid) -> Result<FluidState<f64>, CliError> {
    let kind = match cfg.data {
        InitialData::Equilibrium => return Ok(FluidState::equilibrium(grid)),
        InitialData::IllPrepared => DataKind::IllPrepared,
        InitialData::WellPrepared => DataKind::WellPrepared,
    };
    Ok(make_data(kind, cfg.amplitude, params, grid, &DataProfile { width: cfg.width })?.state)
}

fn solve(cfg: &QnsConfig, ctx: &Context, state: &FluidState<f64>, params: &FluidParams<f64>, policy: DtPolicy<f64>) -> Result<QnsRun<f64>, CliError> {
    let mut opts = SolveOptions::new(cfg.t_end).with_policy(policy);
    opts.snapshot_dir = Some(ctx.out.clone());
    Ok(qns_solve(state, params, &opts, None)?)
}

/// Positive density `1 + Σ a_k cos(k·x + φ_k)` over a few low modes, scaled
/// so that its minimum is at least `0.4`.
fn band_limited_density(grid: &Grid, rng: &mut ChaCha8Rng) -> Field {
    let d = grid.dim();
    let modes: Vec<(f64, [f64; 3], f64)> = (0..5)
        .map(|_| {
            let mut k = [0.0; 3];
            for v in k.iter_mut().take(d) {
                *v = rng.gen_range(-3i32..=3) as f64 * std::f64::consts::TAU / grid.lengths()[0];
            }
            (rng.gen_range(-1.0..1.0), k, rng.gen_range(0.0..std::f64::consts::TAU))
        })
        .collect();
    let wave = Field::from_fn(grid, |x| modes.iter().map(|(a, k, p)| a * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2] + p).cos()).sum());
    let amp = wave.max_abs().max(1e-12);
    wave.map_real(|v| 1.0 + 0.6 * v / amp)
}

pub fn run(ctx: &Context) -> Result<Summary, CliError> {
    let cfg: QnsConfig = ctx.load()?;
    require((1..=3).contains(&cfg.dim), "dim", "must be 1, 2 or 3")?;
    require(cfg.points >= 8, "points", "must be at least 8")?;
    require(cfg.t_end > 0.0, "t_end", "must be positive")?;
    require(cfg.dt.map_or(true, |dt| dt > 0.0), "dt", "must be positive")?;
    let params = FluidParams::new(cfg.eps, cfg.nu, cfg.kappa, cfg.gamma)
        .and_then(|p| p.with_regularization(cfg.delta_reg))
        .map_err(|e| CliError::Config(format!("fluid parameters: {e}")))?;
    let grid = Grid::cube(cfg.dim, cfg.points, cfg.length)?;
    let mut summary = Summary::new("qns", vec![6, 7], ctx, &cfg)?;

    let state = initial_state(&cfg, &params, &grid)?;
    let policy = cfg.dt.map_or(
        DtPolicy::Adaptive {
            c_adv: 0.4,
            c_visc: 0.1,
            c_q: 0.4,
            dt_max: cfg.dt_max,
        },
        DtPolicy::Fixed,
    );
    let run = solve(&cfg, ctx, &state, &params, policy)?;
    summary.check("mass_conservation", run.mass_drift <= 1e-10, format!("relative drift {:.3e}", run.mass_drift));
    summary.check("energy_inequality", run.energy_slack <= cfg.slack_tol, format!("slack {:.3e}", run.energy_slack));
    summary.check("bd_entropy_inequality", run.bd_slack <= cfg.slack_tol, format!("slack {:.3e}", run.bd_slack));
    summary.check("dissipation_lower_bound", run.lower_bound_ok(), format!("margin {:.3e}", run.lower_bound_margin));

    let series = ctx.path("series.csv");
    run.write_series_csv(&series)?;
    summary.artifact(&series);
    let t: Vec<f64> = run.series.iter().map(|r| r.t).collect();
    for (name, ys) in [
        ("energy_plus_dissipation.dat", run.series.iter().map(|r| r.energy + r.dissipation).collect::<Vec<_>>()),
        ("bd_entropy.dat", run.series.iter().map(|r| r.bd).collect()),
        ("mass.dat", run.series.iter().map(|r| r.mass).collect()),
    ] {
        let p = ctx.path(name);
        write_xy(&p, &t, &ys)?;
        summary.artifact(&p);
    }
    summary.result("energy0", total_energy(&state, &params).total)?;
    summary.result(
        "run",
        serde_json::json!({
            "steps": run.steps,
            "energy_slack": run.energy_slack,
            "bd_slack": run.bd_slack,
            "mass_drift": run.mass_drift,
            "lower_bound_margin": run.lower_bound_margin,
            "final_energy": run.final_energy.total,
            "final_dissipation": run.final_energy.dissipation_accumulated,
        }),
    )?;

    if let (true, Some(dt)) = (cfg.halving_check, cfg.dt) {
        let fine = solve(&cfg, ctx, &state, &params, DtPolicy::Fixed(dt / 2.0))?;
        let shrinks = |coarse: f64, fine: f64| fine <= coarse / 2.0;
        summary.check(
            "energy_slack_halving",
            shrinks(run.energy_slack, fine.energy_slack),
            format!("{:.3e} -> {:.3e}", run.energy_slack, fine.energy_slack),
        );
        summary.check(
            "bd_slack_halving",
            shrinks(run.bd_slack, fine.bd_slack),
            format!("{:.3e} -> {:.3e}", run.bd_slack, fine.bd_slack),
        );
        summary.result("fine_energy_slack", fine.energy_slack)?;
        summary.result("fine_bd_slack", fine.bd_slack)?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut gaps = Vec::new();
    for (d, n) in [(1usize, 256usize), (2, 128)] {
        let g = Grid::cube(d, n, std::f64::consts::TAU)?;
        for _ in 0..cfg.bohm_samples {
            let rho = band_limited_density(&g, &mut rng);
            gaps.push(bohm_forms(&rho, 1.0, 1e-6)?.max_relative_gap());
        }
    }
    let worst = gaps.iter().cloned().fold(0.0, f64::max);
    summary.check("bohm_forms_agree", worst <= 1e-7, format!("max relative gap {worst:.3e}"));
    summary.result("bohm_gaps", gaps)?;
    Ok(summary)
}
