//! Strang-split time integration: exact acoustic half step, RK4 step of the
//! remainder with the density held fixed, exact acoustic half step.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;
use crate::spectral::io::write_snapshot;
use crate::spectral::{ScalarField, VectorField};

use super::energy::{bd_entropy, total_energy, EnergyReport};
use super::ops::{all_finite, integrate};
use super::params::FluidParams;
use super::rhs::Frozen;
use super::split::acoustic_flow;
use super::state::FluidState;
use super::viscous::dissipation;

/// Step size rule. `Adaptive` takes
/// `min(c_adv h/max|u|, c_visc h²/ν, c_q h²/κ, dt_max)`; `Fixed` is checked
/// against the same limit with the default constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DtPolicy<T> {
    Fixed(T),
    Adaptive { c_adv: T, c_visc: T, c_q: T, dt_max: T },
}

impl<T: Real> Default for DtPolicy<T> {
    fn default() -> Self {
        DtPolicy::Adaptive {
            c_adv: T::lit(0.4),
            c_visc: T::lit(0.1),
            c_q: T::lit(0.4),
            dt_max: T::lit(0.01),
        }
    }
}

impl<T: Real> DtPolicy<T> {
    fn constants(&self) -> (T, T, T) {
        match *self {
            DtPolicy::Adaptive { c_adv, c_visc, c_q, .. } => (c_adv, c_visc, c_q),
            DtPolicy::Fixed(_) => (T::lit(0.4), T::lit(0.1), T::lit(0.4)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Checkpoint {
    pub dir: PathBuf,
    pub every: usize,
}

#[derive(Debug, Clone)]
pub struct SolveOptions<T> {
    pub t_end: T,
    pub policy: DtPolicy<T>,
    /// Observer cadence; steps are shortened so that every multiple of it is
    /// hit exactly. Defaults to `t_end`.
    pub sample_dt: Option<T>,
    /// BD weight `c`; defaults to `μ/2`.
    pub entropy_weight: Option<T>,
    /// Abort once `E + D` exceeds `E(0)` by this relative amount.
    pub energy_abort_tol: T,
    pub checkpoint: Option<Checkpoint>,
    /// Where to drop the state on abort.
    pub snapshot_dir: Option<PathBuf>,
}

impl<T: Real> SolveOptions<T> {
    pub fn new(t_end: T) -> Self {
        Self {
            t_end,
            policy: DtPolicy::default(),
            sample_dt: None,
            entropy_weight: None,
            energy_abort_tol: T::lit(1e-2),
            checkpoint: None,
            snapshot_dir: None,
        }
    }

    pub fn with_policy(mut self, policy: DtPolicy<T>) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_sample_dt(mut self, dt: T) -> Self {
        self.sample_dt = Some(dt);
        self
    }
}

/// Conservative state handed to observers at sample times.
pub struct Sample<'a, T: Real> {
    pub time: T,
    pub rho: &'a ScalarField<T>,
    pub m: &'a VectorField<T>,
}

impl<T: Real> Sample<'_, T> {
    pub fn fluid_state(&self, floor: T) -> FluidState<T> {
        FluidState::from_conservative(self.rho, self.m, floor, self.time)
    }
}

pub type Observer<'a, T> = &'a mut dyn FnMut(&Sample<'_, T>) -> Result<()>;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SeriesRow {
    pub t: f64,
    pub energy: f64,
    pub kinetic: f64,
    pub internal: f64,
    pub quantum: f64,
    pub dissipation: f64,
    pub bd: f64,
    pub mass: f64,
    pub min_sqrt_rho: f64,
}

#[derive(Debug, Clone)]
pub struct QnsRun<T: Real> {
    pub series: Vec<SeriesRow>,
    pub final_state: FluidState<T>,
    pub final_energy: EnergyReport<T>,
    pub steps: usize,
    /// Largest rise of `E + D` between two step times, relative to `E(0)`.
    pub energy_slack: f64,
    /// Largest rise of `B` between two step times, relative to `E(0)`.
    pub bd_slack: f64,
    /// `max |M(t) − M(0)| / M(0)`.
    pub mass_drift: f64,
    /// Smallest `weighted − plain` dissipation seen over all steps.
    pub lower_bound_margin: f64,
}

impl<T: Real> QnsRun<T> {
    pub fn lower_bound_ok(&self) -> bool {
        self.lower_bound_margin >= -1e-10
    }

    pub fn write_series_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        for row in &self.series {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

struct Diagnostics<T: Real> {
    energy: EnergyReport<T>,
    bd: T,
    rate: T,
    margin: T,
    mass: T,
    min_sqrt_rho: T,
}

fn diagnose<T: Real>(rho: &ScalarField<T>, m: &VectorField<T>, params: &FluidParams<T>, c: T, t: T) -> Result<Diagnostics<T>> {
    let state = FluidState::from_conservative(rho, m, params.rho_floor, t);
    let diss = dissipation(&state, params);
    Ok(Diagnostics {
        energy: total_energy(&state, params),
        bd: bd_entropy(&state, params, c)?,
        rate: diss.rate,
        margin: diss.weighted - diss.plain,
        mass: integrate(rho),
        min_sqrt_rho: state.min_sqrt_rho(),
    })
}

fn stability_limit<T: Real>(rho: &ScalarField<T>, m: &VectorField<T>, params: &FluidParams<T>, policy: &DtPolicy<T>) -> T {
    let (c_adv, c_visc, c_q) = policy.constants();
    let h = rho.grid().min_spacing();
    let floor_sq = params.rho_floor * params.rho_floor;
    let mut umax = T::zero();
    for n in 0..rho.grid().len() {
        let r = rho.values()[n].re;
        if r >= floor_sq {
            let sq = m
                .components()
                .iter()
                .fold(T::zero(), |a, c| a + c.values()[n].re * c.values()[n].re);
            umax = umax.max(sq.sqrt() / r);
        }
    }
    let mut limit = (c_visc * h * h / params.nu).min(c_q * h * h / params.kappa);
    if umax > T::zero() {
        limit = limit.min(c_adv * h / umax);
    }
    limit
}

fn abort<T: Real>(
    dir: &Option<PathBuf>,
    rho: &ScalarField<T>,
    m: &VectorField<T>,
    t: T,
    reason: String,
) -> Error {
    let snapshot = dir.as_ref().and_then(|d| {
        let path = d.join(format!("abort_t{:.6}.bin", t.as_f64()));
        let mut fields = vec![rho];
        fields.extend(m.components().iter());
        write_snapshot(&path, &fields, t.as_f64()).ok().map(|_| path)
    });
    Error::NumericalAbort {
        time: t.as_f64(),
        reason,
        snapshot,
    }
}

fn row<T: Real>(t: T, d: &Diagnostics<T>, acc: T) -> SeriesRow {
    SeriesRow {
        t: t.as_f64(),
        energy: d.energy.total.as_f64(),
        kinetic: d.energy.kinetic.as_f64(),
        internal: d.energy.internal.as_f64(),
        quantum: d.energy.quantum.as_f64(),
        dissipation: acc.as_f64(),
        bd: d.bd.as_f64(),
        mass: d.mass.as_f64(),
        min_sqrt_rho: d.min_sqrt_rho.as_f64(),
    }
}

/// One Strang step of size `dt`.
pub(crate) fn strang_step<T: Real>(
    rho: &ScalarField<T>,
    m: &VectorField<T>,
    dt: T,
    params: &FluidParams<T>,
) -> (ScalarField<T>, VectorField<T>) {
    let half = dt / T::lit(2.0);
    let (rho, m) = acoustic_flow(rho, m, half, params);
    let frozen = Frozen::new(&rho, params);
    let f = |x: &VectorField<T>| frozen.force(x, params.nu);
    let k1 = f(&m);
    let k2 = f(&m.lincomb(T::one(), &k1, half).expect("same grid"));
    let k3 = f(&m.lincomb(T::one(), &k2, half).expect("same grid"));
    let k4 = f(&m.lincomb(T::one(), &k3, dt).expect("same grid"));
    let sixth = dt / T::lit(6.0);
    let mut inc = k1.add(&k4).expect("same grid");
    inc = inc.lincomb(T::one(), &k2.add(&k3).expect("same grid"), T::lit(2.0)).expect("same grid");
    let m = m.lincomb(T::one(), &inc, sixth).expect("same grid");
    acoustic_flow(&rho, &m, half, params)
}

pub fn qns_solve<T: Real>(
    initial: &FluidState<T>,
    params: &FluidParams<T>,
    opts: &SolveOptions<T>,
    mut observer: Option<Observer<'_, T>>,
) -> Result<QnsRun<T>> {
    params.validate()?;
    if !(opts.t_end >= T::zero()) {
        return invalid("t_end must be nonnegative");
    }
    let sample_dt = opts.sample_dt.unwrap_or(opts.t_end);
    if opts.t_end > T::zero() && !(sample_dt > T::zero()) {
        return invalid("sample_dt must be positive");
    }
    if let DtPolicy::Fixed(dt) = opts.policy {
        if !(dt > T::zero()) {
            return invalid("fixed dt must be positive");
        }
    }
    let c = opts.entropy_weight.unwrap_or_else(|| params.default_c());
    let snap = &opts.snapshot_dir;

    let mut rho = initial.density();
    let mut m = initial.momentum();
    let mut t = initial.time;
    let t_end = initial.time + opts.t_end;
    let d0 = diagnose(&rho, &m, params, c, t)?;
    let e0 = d0.energy.total;
    let mass0 = d0.mass;
    let scale = if e0 > T::zero() { e0.as_f64() } else { 1.0 };
    let mut acc = T::zero();
    let mut prev_rate = d0.rate;
    let mut series = vec![row(t, &d0, acc)];
    let mut min_x = e0.as_f64();
    let mut min_b = d0.bd.as_f64();
    let mut energy_slack = 0.0f64;
    let mut bd_slack = 0.0f64;
    let mut mass_drift = 0.0f64;
    let mut margin = d0.margin.as_f64();
    let mut last = d0;
    let mut steps = 0usize;

    if let Some(obs) = observer.as_mut() {
        obs(&Sample { time: t, rho: &rho, m: &m })?;
    }
    let mut sample_index = 1usize;
    while t < t_end {
        let target = (initial.time + sample_dt * T::lit(sample_index as f64)).min(t_end);
        let limit = stability_limit(&rho, &m, params, &opts.policy);
        let candidate = match opts.policy {
            DtPolicy::Fixed(dt) => {
                if dt > limit {
                    return Err(Error::Cfl {
                        dt: dt.as_f64(),
                        limit: limit.as_f64(),
                    });
                }
                dt
            }
            DtPolicy::Adaptive { dt_max, .. } => limit.min(dt_max),
        };
        let remaining = target - t;
        let n = (remaining / candidate - T::lit(1e-9)).ceil().max(T::one());
        let dt = remaining / n;

        let (r1, m1) = strang_step(&rho, &m, dt, params);
        rho = r1;
        m = m1;
        t = if n == T::one() { target } else { t + dt };
        steps += 1;

        if !all_finite(&rho) || !m.components().iter().all(all_finite) {
            return Err(abort(snap, &rho, &m, t, "non-finite state".into()));
        }
        let diag = diagnose(&rho, &m, params, c, t)?;
        if params.delta_reg == T::zero() && diag.min_sqrt_rho < params.rho_floor {
            return Err(abort(snap, &rho, &m, t, format!("vacuum collapse: min sqrt(rho) = {}", diag.min_sqrt_rho)));
        }
        acc += dt * (prev_rate + diag.rate) / T::lit(2.0);
        prev_rate = diag.rate;
        let x = (diag.energy.total + acc).as_f64();
        if x - e0.as_f64() > opts.energy_abort_tol.as_f64() * scale + 1e-12 {
            return Err(abort(snap, &rho, &m, t, format!("energy rose from {e0} to {x}")));
        }
        energy_slack = energy_slack.max((x - min_x) / scale);
        min_x = min_x.min(x);
        let b = diag.bd.as_f64();
        bd_slack = bd_slack.max((b - min_b) / scale);
        min_b = min_b.min(b);
        mass_drift = mass_drift.max(((diag.mass - mass0) / mass0).as_f64().abs());
        margin = margin.min(diag.margin.as_f64());
        series.push(row(t, &diag, acc));
        last = diag;

        if let Some(cp) = &opts.checkpoint {
            if cp.every > 0 && steps % cp.every == 0 {
                let path = cp.dir.join(format!("step_{steps:06}.bin"));
                let mut fields = vec![&rho];
                fields.extend(m.components().iter());
                write_snapshot(&path, &fields, t.as_f64())?;
            }
        }
        if t >= target {
            if let Some(obs) = observer.as_mut() {
                obs(&Sample { time: t, rho: &rho, m: &m })?;
            }
            sample_index += 1;
        }
    }

    let mut final_energy = last.energy;
    final_energy.dissipation_accumulated = acc;
    Ok(QnsRun {
        series,
        final_state: FluidState::from_conservative(&rho, &m, params.rho_floor, t),
        final_energy,
        steps,
        energy_slack,
        bd_slack,
        mass_drift,
        lower_bound_margin: margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::SpectralGrid;
    use std::f64::consts::TAU;

    fn smooth_state(g: &SpectralGrid<f64>, eps: f64) -> FluidState<f64> {
        let l = g.lengths()[0];
        let k = TAU / l;
        let rho = ScalarField::from_fn(g, |x| 1.0 + eps * 0.3 * (k * x[0]).sin() * (k * x[1]).cos());
        let u = VectorField::from_fn(g, |x| [0.3 * (k * x[1]).sin(), 0.2 * (k * x[0]).cos() + 0.1 * (k * x[1]).sin(), 0.0]);
        FluidState::from_density_velocity(&rho, &u, 0.0).unwrap()
    }

    #[test]
    fn equilibrium_stays_put() {
        let g = SpectralGrid::<f64>::new(&[8, 8], &[1.0, 1.0]).unwrap();
        let p = FluidParams::new(0.1, 0.5, 0.2, 2.0).unwrap();
        let opts = SolveOptions::new(1.0).with_policy(DtPolicy::Fixed(1e-3));
        let run = qns_solve(&FluidState::equilibrium(&g), &p, &opts, None).unwrap();
        assert_eq!(run.steps, 1000);
        assert!(run.final_state.sqrt_rho.max_distance(&ScalarField::constant(&g, 1.0)) < 1e-12);
        assert!(run.final_state.lambda.components().iter().all(|c| c.max_abs() < 1e-12));
    }

    #[test]
    fn short_run_bookkeeping() {
        let g = SpectralGrid::<f64>::new(&[32, 32], &[TAU, TAU]).unwrap();
        let p = FluidParams::new(0.1, 0.1, 0.05, 2.0).unwrap();
        let s = smooth_state(&g, p.eps);
        let mut count = 0;
        let mut obs = |_: &Sample<'_, f64>| {
            count += 1;
            Ok(())
        };
        let opts = SolveOptions::new(0.2).with_sample_dt(0.05);
        let run = qns_solve(&s, &p, &opts, Some(&mut obs)).unwrap();
        assert_eq!(count, 5);
        assert!(run.mass_drift < 1e-12);
        assert!(run.energy_slack < 1e-3);
        assert!(run.lower_bound_ok());
        assert!((run.series.last().unwrap().t - 0.2).abs() < 1e-15);
    }

    #[test]
    fn fixed_step_cfl_violation() {
        let g = SpectralGrid::<f64>::new(&[32, 32], &[1.0, 1.0]).unwrap();
        let p = FluidParams::new(0.1, 0.5, 0.1, 2.0).unwrap();
        let opts = SolveOptions::new(0.1).with_policy(DtPolicy::Fixed(0.05));
        assert!(matches!(qns_solve(&smooth_state(&g, 0.1), &p, &opts, None), Err(Error::Cfl { .. })));
    }

    #[test]
    fn second_order_in_time() {
        let g = SpectralGrid::<f64>::new(&[32, 32], &[TAU, TAU]).unwrap();
        let p = FluidParams::new(0.1, 0.1, 0.05, 2.0).unwrap();
        let s = smooth_state(&g, p.eps);
        let run = |dt: f64| {
            let opts = SolveOptions::new(0.4).with_policy(DtPolicy::Fixed(dt));
            qns_solve(&s, &p, &opts, None).unwrap().final_state
        };
        let (a, b, c) = (run(0.02), run(0.01), run(0.005));
        let e1 = a.lambda.sub(&b.lambda).unwrap().l2_norm();
        let e2 = b.lambda.sub(&c.lambda).unwrap().l2_norm();
        let ratio = e1 / e2;
        assert!((ratio - 4.0).abs() <= 1.2, "ratio {ratio}");
    }
}
