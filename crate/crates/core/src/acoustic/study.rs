//! ε-sweeps of acoustic norms on computed fluid trajectories.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::fit::RateTable;
use crate::limit::data::{make_data, DataKind, DataProfile};
use crate::qns::{qns_solve, DtPolicy, FluidParams, Sample, SolveOptions};
use crate::spectral::{besov_norm, helmholtz_q, time_norm, SpectralGrid, VectorField};

use super::state::AcousticState;

pub const NORM_DENSITY: &str = "rho_minus_one_sup_l2";
pub const NORM_QM_BESOV: &str = "qm_l2t_besov";
pub const NORM_SIGMA: &str = "sigma_l2t_lq";

/// Norms measured along each member trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayNorms {
    /// Integrability of the `Qm` Besov norm, in `(2, 9/4)`.
    pub q: f64,
    /// Smoothness of the `Qm` Besov norm.
    pub delta: f64,
    /// Space exponent of the `σ` norm, used when `γ = 2`.
    pub sigma_q: f64,
}

impl DecayNorms {
    /// `δ = (1/2)(1/2 − 1/q)` and `σ` measured in `L⁴`.
    pub fn new(q: f64) -> Self {
        Self {
            q,
            delta: 0.5 * (0.5 - 1.0 / q),
            sigma_q: 4.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q > 2.0 && self.q < 2.25) {
            return invalid(format!("q = {} outside (2, 9/4)", self.q));
        }
        if !(self.delta.is_finite() && self.sigma_q >= 1.0) {
            return invalid("delta must be finite and sigma_q at least 1");
        }
        Ok(())
    }

    /// `(‖ρ − 1‖_{L²}, ‖Qm‖_{B^δ_{q,2}}, ‖σ‖_{L^{σq}})` of one state. The
    /// vector Besov norm is the `ℓ²` sum over components.
    pub fn measure(&self, ac: &AcousticState<f64>, eps: f64) -> Result<[f64; 3]> {
        let qm = helmholtz_q(&ac.m)?;
        let besov = qm
            .components()
            .iter()
            .map(|c| besov_norm(c, self.delta, self.q, 2.0).map(|v| v * v))
            .sum::<Result<f64>>()?
            .sqrt();
        Ok([eps * ac.sigma.l2_norm(), besov, ac.sigma.lq_norm(self.sigma_q)])
    }
}

impl Default for DecayNorms {
    fn default() -> Self {
        Self::new(2.2)
    }
}

/// Sampled norms of one ε member.
#[derive(Debug, Clone, Serialize)]
pub struct AcousticTrack {
    pub eps: f64,
    pub times: Vec<f64>,
    pub density_deviation: Vec<f64>,
    pub qm_besov: Vec<f64>,
    pub sigma_lq: Vec<f64>,
}

impl AcousticTrack {
    pub fn new(eps: f64) -> Self {
        Self {
            eps,
            times: Vec::new(),
            density_deviation: Vec::new(),
            qm_besov: Vec::new(),
            sigma_lq: Vec::new(),
        }
    }

    pub fn record(&mut self, ac: &AcousticState<f64>, norms: &DecayNorms) -> Result<()> {
        let [dev, qm, sig] = norms.measure(ac, self.eps)?;
        self.times.push(ac.time);
        self.density_deviation.push(dev);
        self.qm_besov.push(qm);
        self.sigma_lq.push(sig);
        Ok(())
    }
}

/// Monotonicity and rate of one row of the table.
#[derive(Debug, Clone, Serialize)]
pub struct DecayVerdict {
    pub norm_id: String,
    pub decreasing: bool,
    pub rate: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AcousticDecayReport {
    pub norms: DecayNorms,
    pub table: RateTable,
    pub verdicts: Vec<DecayVerdict>,
    /// Every norm strictly decreasing in ε and the `Qm` rate positive.
    pub passed: bool,
}

/// Fits rates of the time norms of each track: `C_tL²` for the density,
/// `L²_tB^δ_{q,2}` for `Qm` and, for `γ = 2`, `L²_tL^{σq}` for `σ`.
pub fn acoustic_decay_study(tracks: &[AcousticTrack], norms: &DecayNorms, gamma: f64) -> Result<AcousticDecayReport> {
    norms.validate()?;
    if tracks.len() < 3 {
        return invalid("a decay study needs at least three eps values");
    }
    let times = &tracks[0].times;
    if tracks.iter().any(|t| t.times.len() != times.len() || t.times.iter().zip(times).any(|(a, b)| (a - b).abs() > 1e-9)) {
        return invalid("tracks must share one time grid");
    }
    let mut table = RateTable::new(tracks.iter().map(|t| t.eps).collect())?;
    let col = |f: &dyn Fn(&AcousticTrack) -> &Vec<f64>, p: f64| tracks.iter().map(|t| time_norm(times, f(t), p)).collect::<Result<Vec<f64>>>();
    table.push(NORM_DENSITY, f64::INFINITY, 2.0, 0.0, col(&|t| &t.density_deviation, f64::INFINITY)?)?;
    table.push(NORM_QM_BESOV, 2.0, norms.q, norms.delta, col(&|t| &t.qm_besov, 2.0)?)?;
    if gamma == 2.0 {
        table.push(NORM_SIGMA, 2.0, norms.sigma_q, 0.0, col(&|t| &t.sigma_lq, 2.0)?)?;
    }
    let verdicts: Vec<DecayVerdict> = table
        .rows
        .iter()
        .map(|r| DecayVerdict {
            norm_id: r.norm_id.clone(),
            decreasing: r.strictly_decreasing(),
            rate: r.rate,
        })
        .collect();
    let qm_rate = verdicts.iter().find(|v| v.norm_id == NORM_QM_BESOV).map_or(f64::NAN, |v| v.rate);
    let passed = verdicts.iter().all(|v| v.decreasing) && qm_rate > 0.0;
    Ok(AcousticDecayReport {
        norms: *norms,
        table,
        verdicts,
        passed,
    })
}

/// Sweep settings; the fluid part mirrors the convergence study.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AcousticStudyConfig {
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
    pub norms: DecayNorms,
}

impl Default for AcousticStudyConfig {
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
            norms: DecayNorms::default(),
        }
    }
}

impl AcousticStudyConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.dim) || self.points < 8 {
            return invalid("dim must be 1..=3 and points at least 8");
        }
        if self.eps_values.len() < 3 {
            return invalid("a decay study needs at least three eps values");
        }
        if !(self.t_end > 0.0 && self.sample_dt > 0.0 && self.dt_max > 0.0) {
            return invalid("t_end, sample_dt and dt_max must be positive");
        }
        let n = self.t_end / self.sample_dt;
        if (n - n.round()).abs() > 1e-9 {
            return invalid("t_end must be a multiple of sample_dt");
        }
        self.norms.validate()
    }

    pub fn grid(&self) -> Result<SpectralGrid<f64>> {
        SpectralGrid::cube(self.dim, self.points, self.length)
    }

    pub fn params(&self, eps: f64) -> Result<FluidParams<f64>> {
        FluidParams::new(eps, self.nu, self.kappa, self.gamma)?.with_regularization(self.delta_reg)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AcousticStudyReport {
    pub config: AcousticStudyConfig,
    pub tracks: Vec<AcousticTrack>,
    pub decay: AcousticDecayReport,
}

fn run_track(cfg: &AcousticStudyConfig, eps: f64, grid: &SpectralGrid<f64>) -> Result<AcousticTrack> {
    let params = cfg.params(eps)?;
    let data = make_data(cfg.kind, cfg.amplitude, &params, grid, &DataProfile { width: cfg.width })?;
    let mut track = AcousticTrack::new(eps);
    let mut obs = |s: &Sample<'_, f64>| -> Result<()> {
        let ac = AcousticState::new(s.rho.map_real(|r| (r - 1.0) / eps), VectorField::clone(s.m), s.time)?;
        track.record(&ac, &cfg.norms)
    };
    let opts = SolveOptions::new(cfg.t_end)
        .with_policy(DtPolicy::Adaptive {
            c_adv: 0.4,
            c_visc: 0.1,
            c_q: 0.4,
            dt_max: cfg.dt_max,
        })
        .with_sample_dt(cfg.sample_dt);
    qns_solve(&data.state, &params, &opts, Some(&mut obs))?;
    Ok(track)
}

/// Runs one QNS member per ε (in parallel) and fits the acoustic norms.
pub fn acoustic_sweep(cfg: &AcousticStudyConfig) -> Result<AcousticStudyReport> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let tracks = cfg
        .eps_values
        .par_iter()
        .map(|&eps| run_track(cfg, eps, &grid))
        .collect::<Result<Vec<_>>>()?;
    let decay = acoustic_decay_study(&tracks, &cfg.norms, cfg.gamma)?;
    Ok(AcousticStudyReport {
        config: cfg.clone(),
        tracks,
        decay,
    })
}
