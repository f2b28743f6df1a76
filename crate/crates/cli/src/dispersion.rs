use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use qnslab::dispersion::decay::{write_decay_csv, write_decay_plot};
use qnslab::dispersion::oscillatory::OscillatoryOracle;
use qnslab::dispersion::{epsilon_gain, h_bound_check, hessian_det, measure_decay, rescaled_oscillatory_integral, DecayBackend, DispersionParams};
use qnslab::fit::log_space;
use qnslab::spectral::io::write_xy;

use crate::common::{require, CliError, Context, Summary};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecayRun {
    pub backend: DecayBackend,
    pub radius: f64,
    pub eps: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub n_times: usize,
    pub refine: bool,
}

impl Default for DecayRun {
    fn default() -> Self {
        Self {
            backend: DecayBackend::Radial3 { points: 16384, length: 1024.0 },
            radius: 1.0,
            eps: 1.0,
            t_min: 5.0,
            t_max: 50.0,
            n_times: 9,
            refine: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GainConfig {
    pub backend: DecayBackend,
    pub radius: f64,
    pub eps_values: Vec<f64>,
    pub t_min: f64,
    pub t_max: f64,
    pub n_times: usize,
}

impl Default for GainConfig {
    fn default() -> Self {
        Self {
            backend: DecayBackend::Radial3 {
                points: 1 << 21,
                length: 3.4e6,
            },
            radius: 0.1,
            eps_values: vec![1.0, 0.5, 0.25, 0.125],
            t_min: 2e4,
            t_max: 2e5,
            n_times: 9,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HBoundConfig {
    pub dims: Vec<usize>,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub points: usize,
}

impl Default for HBoundConfig {
    fn default() -> Self {
        Self {
            dims: vec![2, 3],
            lambda_min: 1e-4,
            lambda_max: 1e4,
            points: 801,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScalingConfig {
    pub tuples: usize,
    pub dims: Vec<usize>,
    pub tolerance: f64,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        Self {
            tuples: 20,
            dims: vec![2, 3],
            tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DispersionConfig {
    pub kappa: f64,
    pub decay: Vec<DecayRun>,
    pub gain: GainConfig,
    pub h_bound: HBoundConfig,
    pub scaling: ScalingConfig,
}

impl Default for DispersionConfig {
    fn default() -> Self {
        Self {
            kappa: 1.0,
            decay: vec![
                DecayRun::default(),
                DecayRun {
                    backend: DecayBackend::Lattice {
                        dim: 2,
                        points: 2048,
                        length: 640.0,
                    },
                    ..DecayRun::default()
                },
            ],
            gain: GainConfig::default(),
            h_bound: HBoundConfig::default(),
            scaling: ScalingConfig::default(),
        }
    }
}

/// `δ` expected from the ε-gain, with the accepted window.
fn gain_window(d: usize) -> (f64, f64) {
    let target = (d as f64 - 2.0) / 2.0;
    let half = 0.25 * target.max(0.5);
    (target - half, target + half)
}

pub fn run(ctx: &Context) -> Result<Summary, CliError> {
    let cfg: DispersionConfig = ctx.load()?;
    require(cfg.kappa > 0.0, "kappa", "must be positive")?;
    require(cfg.gain.eps_values.len() >= 2, "gain.eps_values", "needs at least two values")?;
    require(cfg.h_bound.dims.iter().all(|d| (2..=3).contains(d)), "h_bound.dims", "entries must be 2 or 3")?;
    require(cfg.scaling.dims.iter().all(|d| (1..=3).contains(d)), "scaling.dims", "entries must be 1, 2 or 3")?;
    let mut summary = Summary::new("dispersion", vec![1, 2, 3, 4], ctx, &cfg)?;

    let mut fits = Vec::new();
    for run in &cfg.decay {
        let params = DispersionParams::new(run.eps, cfg.kappa)?;
        let times = log_space(run.t_min, run.t_max, run.n_times);
        let fit = measure_decay(run.radius, &params, &times, run.backend, run.refine)?;
        let d = fit.dim;
        let target = -(d as f64) / 2.0;
        summary.check(
            &format!("decay_slope_d{d}"),
            (fit.slope - target).abs() <= 0.1 * target.abs(),
            format!("slope {:.4} vs {target}", fit.slope),
        );
        let plot = ctx.path(&format!("decay_d{d}.dat"));
        write_decay_plot(&plot, &fit)?;
        summary.artifact(&plot);
        fits.push(fit);
    }
    let csv = ctx.path("decay.csv");
    write_decay_csv(&csv, &fits)?;
    summary.artifact(&csv);
    summary.result("decay", &fits)?;

    let g = &cfg.gain;
    let times = log_space(g.t_min, g.t_max, g.n_times);
    let gain_fits = g
        .eps_values
        .iter()
        .map(|&eps| {
            let params = DispersionParams::new(eps, cfg.kappa)?;
            measure_decay(g.radius, &params, &times, g.backend, false)
        })
        .collect::<qnslab::Result<Vec<_>>>()?;
    let line = epsilon_gain(&gain_fits)?;
    let (lo, hi) = gain_window(g.backend.dim());
    summary.check("epsilon_gain", line.slope >= lo && line.slope <= hi, format!("delta {:.4} in [{lo}, {hi}]", line.slope));
    let plot = ctx.path("gain.dat");
    write_xy(
        &plot,
        &gain_fits.iter().map(|f| f.eps).collect::<Vec<_>>(),
        &gain_fits.iter().map(|f| f.pinned_prefactor).collect::<Vec<_>>(),
    )?;
    summary.artifact(&plot);
    summary.result("gain_delta", line.slope)?;
    summary.result("gain_fits", &gain_fits)?;

    let hb = &cfg.h_bound;
    let lambdas = log_space(hb.lambda_min, hb.lambda_max, hb.points);
    let mut reports = Vec::new();
    for &d in &hb.dims {
        let rep = h_bound_check(&lambdas, cfg.kappa, d)?;
        if d == 2 {
            // envelope of h^{-1/2} for d = 2 scales with 1/κ
            let (lo, hi) = (0.5 / cfg.kappa - 1e-3, 3f64.powf(-0.5) / cfg.kappa + 1e-3);
            summary.check(
                "h_bound_d2",
                rep.min_h_inv_sqrt >= lo && rep.max_h_inv_sqrt <= hi,
                format!("h^-1/2 in [{:.6}, {:.6}]", rep.min_h_inv_sqrt, rep.max_h_inv_sqrt),
            );
        } else {
            summary.check(
                "h_bound_d3",
                rep.finite && rep.stable,
                format!("ratio {:.4}, refinement change {:.2e}", rep.max_ratio, rep.relative_change),
            );
        }
        let unscaled = DispersionParams::unscaled(cfg.kappa)?;
        let values = lambdas
            .iter()
            .map(|&l| hessian_det(l, &unscaled, d).map(|h| h.powf(-0.5)))
            .collect::<qnslab::Result<Vec<_>>>()?;
        let plot = ctx.path(&format!("h_bound_d{d}.dat"));
        write_xy(&plot, &lambdas, &values)?;
        summary.artifact(&plot);
        reports.push(rep);
    }
    summary.result("h_bound", &reports)?;

    let rows = scaling_rows(&cfg, ctx.seed)?;
    let worst = rows.iter().map(|r| r.abs_diff).fold(0.0, f64::max);
    summary.check(
        "scaling_identity",
        worst <= cfg.scaling.tolerance,
        format!("max |direct − rescaled| = {worst:.3e}"),
    );
    let path = ctx.path("scaling.csv");
    let mut w = csv::Writer::from_path(&path).map_err(|e| CliError::Other(e.to_string()))?;
    for r in &rows {
        w.serialize(r).map_err(|e| CliError::Other(e.to_string()))?;
    }
    w.flush()?;
    summary.artifact(&path);
    summary.result("scaling_max_abs_diff", worst)?;
    Ok(summary)
}

#[derive(Debug, Serialize)]
struct ScalingRow {
    d: usize,
    t: f64,
    x_norm: f64,
    radius: f64,
    eps: f64,
    direct_re: f64,
    direct_im: f64,
    abs_diff: f64,
}

fn scaling_rows(cfg: &DispersionConfig, seed: u64) -> Result<Vec<ScalingRow>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let oracle = OscillatoryOracle { tol: 1e-10 };
    let mut rows = Vec::new();
    for n in 0..cfg.scaling.tuples {
        let d = cfg.scaling.dims[n % cfg.scaling.dims.len()];
        let t = rng.gen_range(0.1..5.0);
        let radius = rng.gen_range(0.5..2.0);
        let eps = rng.gen_range(0.25..1.0);
        let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let params = DispersionParams::new(eps, cfg.kappa)?;
        let direct = oracle.eval(t, &x, radius, &params, d)?;
        let scaled = rescaled_oscillatory_integral(&oracle, t, &x, radius, &params, d)?;
        rows.push(ScalingRow {
            d,
            t,
            x_norm: x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            radius,
            eps,
            direct_re: direct.re,
            direct_im: direct.im,
            abs_diff: (direct - scaled).norm(),
        });
    }
    Ok(rows)
}
