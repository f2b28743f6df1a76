//! ε-sweep convergence study against the incompressible reference.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fit::RateTable;
use crate::qns::{qns_solve, DtPolicy, FluidParams, QnsRun, Sample, SolveOptions};
use crate::spectral::{helmholtz_p, helmholtz_q, time_norm, SpectralGrid, VectorField};

use super::data::{make_data, DataKind, DataProfile};
use super::ns::{leray_for_trajectory, ns_solve, LerayReport, NSState, NsTrajectory};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StudyConfig {
    pub dim: usize,
    pub points: usize,
    pub length: f64,
    pub gamma: f64,
    pub nu: f64,
    pub kappa: f64,
    pub delta_reg: f64,
    pub eps_values: Vec<f64>,
    pub kind: DataKind,
    pub amplitude: f64,
    pub width: f64,
    pub t_end: f64,
    pub sample_dt: f64,
    pub dt_max: f64,
    /// Space exponent of the `Qm` norm, in `(2, 9/4)`.
    pub q: f64,
    /// Side of the comparison window as a fraction of the box.
    pub window: f64,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            dim: 2,
            points: 256,
            length: 40.0,
            gamma: 2.0,
            nu: 0.05,
            kappa: 0.03,
            delta_reg: 0.0,
            eps_values: vec![0.4, 0.2, 0.1, 0.05],
            kind: DataKind::IllPrepared,
            amplitude: 0.5,
            width: 1.0,
            t_end: 1.0,
            sample_dt: 0.02,
            dt_max: 0.01,
            q: 2.2,
            window: 0.5,
        }
    }
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.dim) || self.points < 8 {
            return invalid("dim must be 1..=3 and points at least 8");
        }
        if self.eps_values.len() < 3 {
            return invalid("a study needs at least three eps values");
        }
        if self.eps_values.windows(2).any(|w| w[1] >= w[0]) {
            return invalid("eps_values must be strictly decreasing");
        }
        if !(self.q > 2.0 && self.q < 2.25) {
            return invalid(format!("q = {} outside (2, 9/4)", self.q));
        }
        if !(self.window > 0.0 && self.window <= 1.0) {
            return invalid("window must lie in (0, 1]");
        }
        if !(self.t_end > 0.0 && self.sample_dt > 0.0 && self.dt_max > 0.0) {
            return invalid("t_end, sample_dt and dt_max must be positive");
        }
        let n = self.t_end / self.sample_dt;
        if (n - n.round()).abs() > 1e-9 {
            return invalid("t_end must be a multiple of sample_dt");
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<SpectralGrid<f64>> {
        SpectralGrid::cube(self.dim, self.points, self.length)
    }

    pub fn params(&self, eps: f64) -> Result<FluidParams<f64>> {
        FluidParams::new(eps, self.nu, self.kappa, self.gamma)?.with_regularization(self.delta_reg)
    }
}

/// Per-ε diagnostics of one member run.
#[derive(Debug, Clone, Serialize)]
pub struct MemberSummary {
    pub eps: f64,
    pub energy0: f64,
    pub steps: usize,
    pub mass_drift: f64,
    pub energy_slack: f64,
    pub bd_slack: f64,
    pub lower_bound_margin: f64,
    /// `‖ρ − 1‖_{L²}` at every sample.
    pub density_deviation: Vec<f64>,
    /// `‖Qm‖_{L^q}` at every sample.
    pub qm_lq: Vec<f64>,
    /// `‖√ρu − u‖_{L²(K)}` at every sample.
    pub lambda_gap: Vec<f64>,
    /// `‖Pm − u‖_{L²(K)}` at every sample.
    pub pm_gap: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StudyReport {
    pub config: StudyConfig,
    pub times: Vec<f64>,
    pub table: RateTable,
    pub members: Vec<MemberSummary>,
    pub leray: LerayReport,
    pub reference_divergence: f64,
    /// Set when a member run aborted; the table then holds only the members
    /// that finished.
    pub aborted: Option<String>,
}

pub const NORM_DENSITY: &str = "rho_minus_one_sup_l2";
pub const NORM_QM: &str = "qm_l2t_lq";
pub const NORM_LAMBDA: &str = "lambda_minus_u_l2t_l2k";
pub const NORM_PM: &str = "pm_minus_u_l2t_l2k";

/// Indicator of the centred window of side `fraction · L` per axis.
pub fn window_mask(grid: &SpectralGrid<f64>, fraction: f64) -> Vec<bool> {
    let d = grid.dim();
    (0..grid.len())
        .map(|n| {
            let x = grid.position(n);
            (0..d).all(|a| {
                let l = grid.lengths()[a];
                (x[a] - l / 2.0).abs() <= fraction * l / 2.0 + 1e-12 * l
            })
        })
        .collect()
}

/// `‖v‖_{L²(K)}` for the window given by `mask`.
pub fn windowed_l2(v: &VectorField<f64>, mask: &[bool]) -> f64 {
    let vol = v.grid().cell_volume();
    let mut acc = 0.0;
    for c in v.components() {
        for (z, keep) in c.values().iter().zip(mask) {
            if *keep {
                acc += z.re * z.re;
            }
        }
    }
    (acc * vol).sqrt()
}

/// `‖v‖_{L^q}` of the pointwise Euclidean modulus.
pub fn vector_lq(v: &VectorField<f64>, q: f64) -> f64 {
    v.magnitude().lq_norm(q)
}

struct MemberOutcome {
    summary: MemberSummary,
    run: QnsRun<f64>,
}

fn run_member(cfg: &StudyConfig, eps: f64, grid: &SpectralGrid<f64>, reference: &NsTrajectory<f64>, mask: &[bool]) -> Result<MemberOutcome> {
    let params = cfg.params(eps)?;
    let data = make_data(cfg.kind, cfg.amplitude, &params, grid, &DataProfile { width: cfg.width })?;
    let mut dev = Vec::new();
    let mut qm = Vec::new();
    let mut lam = Vec::new();
    let mut pm = Vec::new();
    let mut index = 0usize;
    let mut obs = |s: &Sample<'_, f64>| -> Result<()> {
        let u = reference
            .states
            .get(index)
            .ok_or_else(|| Error::InvalidInput("reference trajectory shorter than the member run".into()))?;
        if (reference.times[index] - s.time).abs() > 1e-9 {
            return invalid("member and reference sample times differ");
        }
        index += 1;
        dev.push(s.rho.map_real(|r| r - 1.0).l2_norm());
        qm.push(vector_lq(&helmholtz_q(s.m)?, cfg.q));
        let state = s.fluid_state(params.rho_floor);
        lam.push(windowed_l2(&state.lambda.sub(u)?, mask));
        pm.push(windowed_l2(&helmholtz_p(s.m)?.sub(u)?, mask));
        Ok(())
    };
    let opts = SolveOptions::new(cfg.t_end)
        .with_policy(DtPolicy::Adaptive {
            c_adv: 0.4,
            c_visc: 0.1,
            c_q: 0.4,
            dt_max: cfg.dt_max,
        })
        .with_sample_dt(cfg.sample_dt);
    let run = qns_solve(&data.state, &params, &opts, Some(&mut obs))?;
    Ok(MemberOutcome {
        summary: MemberSummary {
            eps,
            energy0: data.energy.total,
            steps: run.steps,
            mass_drift: run.mass_drift,
            energy_slack: run.energy_slack,
            bd_slack: run.bd_slack,
            lower_bound_margin: run.lower_bound_margin,
            density_deviation: dev,
            qm_lq: qm,
            lambda_gap: lam,
            pm_gap: pm,
        },
        run,
    })
}

/// Incompressible reference from `P u₀`, sampled like the member runs.
pub fn reference_run(cfg: &StudyConfig) -> Result<NsTrajectory<f64>> {
    let grid = cfg.grid()?;
    let params = cfg.params(cfg.eps_values[0])?;
    let data = make_data(cfg.kind, cfg.amplitude, &params, &grid, &DataProfile { width: cfg.width })?;
    let init = NSState::new(data.limit_velocity, cfg.nu)?;
    let policy = DtPolicy::Adaptive {
        c_adv: 0.4,
        c_visc: 0.1,
        c_q: 0.4,
        dt_max: cfg.dt_max,
    };
    ns_solve(&init, cfg.t_end, policy, cfg.sample_dt)
}

pub fn convergence_study(cfg: &StudyConfig) -> Result<StudyReport> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let reference = reference_run(cfg)?;
    let leray = leray_for_trajectory(&reference)?;
    let mask = window_mask(&grid, cfg.window);
    let outcomes: Vec<(f64, Result<MemberOutcome>)> = cfg
        .eps_values
        .par_iter()
        .map(|&eps| (eps, run_member(cfg, eps, &grid, &reference, &mask)))
        .collect();
    let mut members = Vec::new();
    let mut aborted = None;
    for (eps, o) in outcomes {
        match o {
            Ok(m) => {
                drop(m.run);
                members.push(m.summary);
            }
            Err(e) => {
                if aborted.is_none() {
                    aborted = Some(format!("eps = {eps}: {e}"));
                }
            }
        }
    }
    let times = reference.times.clone();
    let eps_done: Vec<f64> = members.iter().map(|m| m.eps).collect();
    let table = if eps_done.len() >= 3 {
        let mut table = RateTable::new(eps_done)?;
        let col = |f: &dyn Fn(&MemberSummary) -> Result<f64>| members.iter().map(f).collect::<Result<Vec<f64>>>();
        table.push(NORM_DENSITY, f64::INFINITY, 2.0, 0.0, col(&|m| time_norm(&times, &m.density_deviation, f64::INFINITY))?)?;
        table.push(NORM_QM, 2.0, cfg.q, 0.0, col(&|m| time_norm(&times, &m.qm_lq, 2.0))?)?;
        table.push(NORM_LAMBDA, 2.0, 2.0, 0.0, col(&|m| time_norm(&times, &m.lambda_gap, 2.0))?)?;
        table.push(NORM_PM, 2.0, 2.0, 0.0, col(&|m| time_norm(&times, &m.pm_gap, 2.0))?)?;
        table
    } else {
        RateTable {
            eps_values: eps_done,
            rows: Vec::new(),
        }
    };
    Ok(StudyReport {
        config: cfg.clone(),
        times,
        table,
        members,
        leray,
        reference_divergence: reference.max_divergence_ratio,
        aborted,
    })
}
