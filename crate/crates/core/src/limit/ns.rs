//! Incompressible Navier–Stokes reference solver: pseudospectral, Leray
//! projection of the dealiased nonlinearity, viscous integrating factor and
//! classical RK4 (Lawson form).

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::qns::DtPolicy;
use crate::scalar::Real;
use crate::spectral::{apply_multiplier_vec, helmholtz_p, Multiplier, Spectrum, VectorField};

/// Divergence-free velocity with its viscosity.
#[derive(Debug, Clone)]
pub struct NSState<T: Real> {
    pub u: VectorField<T>,
    pub time: T,
    pub nu: T,
}

/// `‖∇v‖²_{L²}` from the spectrum.
pub fn gradient_sq_norm<T: Real>(v: &VectorField<T>) -> T {
    let grid = v.grid().clone();
    let k2 = grid.wavenumber_norms_sq();
    let n = T::lit(grid.len() as f64);
    let w = grid.volume() / (n * n);
    v.components().iter().fold(T::zero(), |acc, c| {
        let s = c.spectrum();
        acc + s.coeffs().iter().zip(&k2).fold(T::zero(), |a, (z, k)| a + *k * z.norm_sqr()) * w
    })
}

fn h1_norm<T: Real>(v: &VectorField<T>) -> T {
    (v.l2_norm().powi(2) + gradient_sq_norm(v)).sqrt()
}

fn div_l2<T: Real>(v: &VectorField<T>) -> T {
    crate::spectral::divergence(v).l2_norm()
}

impl<T: Real> NSState<T> {
    /// Rejects fields with `‖div u‖ > 1e-10 ‖u‖_{H¹}`.
    pub fn new(u: VectorField<T>, nu: T) -> Result<Self> {
        if !(nu >= T::zero()) {
            return invalid("viscosity must be nonnegative");
        }
        let d = div_l2(&u);
        let floor = T::lit(1e-14) * u.grid().volume().sqrt();
        if d > T::lit(1e-10) * h1_norm(&u) + floor {
            return invalid(format!("initial velocity is not divergence-free (|div u| = {d})"));
        }
        Ok(Self {
            u,
            time: T::zero(),
            nu,
        })
    }

    /// Leray-projects `u` first.
    pub fn projected(u: &VectorField<T>, nu: T) -> Result<Self> {
        Self::new(helmholtz_p(u)?, nu)
    }

    pub fn kinetic_energy(&self) -> T {
        T::lit(0.5) * self.u.l2_norm().powi(2)
    }

    pub fn divergence_ratio(&self) -> T {
        let h1 = h1_norm(&self.u);
        if h1 == T::zero() {
            T::zero()
        } else {
            div_l2(&self.u) / h1
        }
    }
}

/// Samples of an incompressible run on a uniform time grid.
#[derive(Debug, Clone)]
pub struct NsTrajectory<T: Real> {
    pub nu: T,
    pub times: Vec<T>,
    pub states: Vec<VectorField<T>>,
    /// Largest `‖div u‖/‖u‖_{H¹}` over the steps.
    pub max_divergence_ratio: T,
    pub steps: usize,
}

/// `−P div(u ⊗ u)` with 2/3-rule truncation of the products.
fn nonlinear<T: Real>(u: &VectorField<T>) -> VectorField<T> {
    let grid = u.grid().clone();
    let d = grid.dim();
    let mask = grid.dealias_mask();
    let mut acc: Vec<Vec<Complex<T>>> = vec![vec![Complex::new(T::zero(), T::zero()); grid.len()]; d];
    for i in 0..d {
        for j in i..d {
            let mut s = u.component(i).mul(u.component(j)).expect("same grid").spectrum();
            s.coeffs_mut()
                .iter_mut()
                .zip(&mask)
                .filter(|(_, keep)| !**keep)
                .for_each(|(c, _)| *c = Complex::new(T::zero(), T::zero()));
            let c = s.coeffs();
            grid.for_each_mode(|n, xi| {
                acc[i][n] -= Complex::new(T::zero(), xi[j]) * c[n];
                if i != j {
                    acc[j][n] -= Complex::new(T::zero(), xi[i]) * c[n];
                }
            });
        }
    }
    grid.for_each_mode(|n, xi| {
        let k2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        if k2 == T::zero() {
            return;
        }
        let dot = (0..d).fold(Complex::new(T::zero(), T::zero()), |a, ax| a + acc[ax][n] * xi[ax]);
        for ax in 0..d {
            acc[ax][n] -= dot * (xi[ax] / k2);
        }
    });
    let comps = acc
        .into_iter()
        .map(|c| Spectrum::new(&grid, c, true).expect("same grid").to_field())
        .collect();
    VectorField::new(comps).expect("one component per axis")
}

fn heat<T: Real>(v: &VectorField<T>, nu: T, tau: T) -> VectorField<T> {
    let m = Multiplier::radial(move |k: T| (-nu * k * k * tau).exp());
    apply_multiplier_vec(v, &m).expect("finite")
}

fn lawson_rk4<T: Real>(u: &VectorField<T>, nu: T, h: T) -> VectorField<T> {
    let half = h / T::lit(2.0);
    let a = nonlinear(u);
    let u_half = heat(u, nu, half);
    let b = nonlinear(&heat(&u.lincomb(T::one(), &a, half).expect("same grid"), nu, half));
    let c = nonlinear(&u_half.lincomb(T::one(), &b, half).expect("same grid"));
    let d = nonlinear(&heat(u, nu, h).lincomb(T::one(), &heat(&c, nu, half), h).expect("same grid"));
    let mid = heat(&b.add(&c).expect("same grid"), nu, half).scale(T::lit(2.0));
    let sum = heat(&a, nu, h).add(&mid).expect("same grid").add(&d).expect("same grid");
    heat(u, nu, h).lincomb(T::one(), &sum, h / T::lit(6.0)).expect("same grid")
}

fn max_speed<T: Real>(u: &VectorField<T>) -> T {
    u.magnitude().max_real()
}

/// Integrates to `initial.time + t_end`, sampling every `sample_dt`.
/// `DtPolicy::Adaptive` uses only `c_adv` and `dt_max`; viscosity is exact.
pub fn ns_solve<T: Real>(initial: &NSState<T>, t_end: T, policy: DtPolicy<T>, sample_dt: T) -> Result<NsTrajectory<T>> {
    if !(t_end >= T::zero()) || !(sample_dt > T::zero()) {
        return invalid("t_end must be nonnegative and sample_dt positive");
    }
    let h = initial.u.grid().min_spacing();
    let (c_adv, dt_max, fixed) = match policy {
        DtPolicy::Fixed(dt) => (T::lit(0.4), dt, true),
        DtPolicy::Adaptive { c_adv, dt_max, .. } => (c_adv, dt_max, false),
    };
    let mut u = initial.u.clone();
    let mut t = initial.time;
    let stop = initial.time + t_end;
    let mut times = vec![t];
    let mut states = vec![u.clone()];
    let mut max_div = initial.divergence_ratio();
    let mut steps = 0;
    let mut index = 1usize;
    while t < stop {
        let target = (initial.time + sample_dt * T::lit(index as f64)).min(stop);
        let speed = max_speed(&u);
        let limit = if speed > T::zero() { c_adv * h / speed } else { T::infinity() };
        let candidate = if fixed {
            if dt_max > limit {
                return Err(Error::Cfl {
                    dt: dt_max.as_f64(),
                    limit: limit.as_f64(),
                });
            }
            dt_max
        } else {
            limit.min(dt_max)
        };
        let remaining = target - t;
        let n = (remaining / candidate - T::lit(1e-9)).ceil().max(T::one());
        let dt = remaining / n;
        u = lawson_rk4(&u, initial.nu, dt);
        t = if n == T::one() { target } else { t + dt };
        steps += 1;
        if u.components().iter().any(|c| c.values().iter().any(|v| !v.re.is_finite())) {
            return Err(Error::NumericalAbort {
                time: t.as_f64(),
                reason: "non-finite velocity".into(),
                snapshot: None,
            });
        }
        let st = NSState { u: u.clone(), time: t, nu: initial.nu };
        max_div = max_div.max(st.divergence_ratio());
        if t >= target {
            times.push(t);
            states.push(u.clone());
            index += 1;
        }
    }
    Ok(NsTrajectory {
        nu: initial.nu,
        times,
        states,
        max_divergence_ratio: max_div,
        steps,
    })
}

/// Closed-form 2D Taylor–Green vortex with wavenumber `k` per axis.
pub fn taylor_green<T: Real>(grid: &crate::spectral::SpectralGrid<T>, k: T, nu: T, t: T) -> VectorField<T> {
    let decay = (-T::lit(2.0) * nu * k * k * t).exp();
    VectorField::from_fn(grid, |x| {
        [
            (k * x[0]).sin() * (k * x[1]).cos() * decay,
            -(k * x[0]).cos() * (k * x[1]).sin() * decay,
            T::zero(),
        ]
    })
}

/// Worst pointwise gap between `ns_solve` and the Taylor–Green closed form
/// over `[0, t_end]`.
pub fn taylor_green_error<T: Real>(grid: &crate::spectral::SpectralGrid<T>, k: T, nu: T, t_end: T, policy: DtPolicy<T>) -> Result<T> {
    let u0 = taylor_green(grid, k, nu, T::zero());
    let traj = ns_solve(&NSState::new(u0, nu)?, t_end, policy, t_end / T::lit(8.0))?;
    let mut worst = T::zero();
    for (t, u) in traj.times.iter().zip(&traj.states) {
        worst = worst.max(u.max_distance(&taylor_green(grid, k, nu, *t)));
    }
    Ok(worst)
}

/// Residual of the Leray energy inequality along a sampled trajectory.
#[derive(Debug, Clone, serde::Serialize)]
pub struct LerayReport {
    pub energy0: f64,
    /// `½‖u(t)‖² + ν∫₀ᵗ‖∇u‖² − ½‖u₀‖²` at every sample.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    /// Set when the residual exceeds `1e-6 · E(0)`.
    pub violated: bool,
}

/// Cumulative composite Simpson integral on a uniform grid; odd interval
/// counts close with the 3/8 rule, a single interval with the trapezoid.
fn cumulative_simpson(h: f64, f: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; f.len()];
    for n in 1..f.len() {
        out[n] = if n == 1 {
            0.5 * h * (f[0] + f[1])
        } else if n % 2 == 0 {
            (0..n / 2)
                .map(|i| h / 3.0 * (f[2 * i] + 4.0 * f[2 * i + 1] + f[2 * i + 2]))
                .sum()
        } else {
            let head: f64 = (0..(n - 3) / 2)
                .map(|i| h / 3.0 * (f[2 * i] + 4.0 * f[2 * i + 1] + f[2 * i + 2]))
                .sum();
            let j = n - 3;
            head + 3.0 * h / 8.0 * (f[j] + 3.0 * f[j + 1] + 3.0 * f[j + 2] + f[j + 3])
        };
    }
    out
}

pub fn leray_energy_check<T: Real>(times: &[T], states: &[VectorField<T>], nu: T) -> Result<LerayReport> {
    if times.len() != states.len() || times.is_empty() {
        return invalid("times and states must be non-empty and of equal length");
    }
    let ts: Vec<f64> = times.iter().map(|t| t.as_f64()).collect();
    let h = if ts.len() > 1 { ts[1] - ts[0] } else { 0.0 };
    if ts.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs().max(1e-300)) {
        return invalid("leray check needs a uniform time grid");
    }
    let kinetic: Vec<f64> = states.iter().map(|u| 0.5 * u.l2_norm().as_f64().powi(2)).collect();
    let rate: Vec<f64> = states.iter().map(|u| nu.as_f64() * gradient_sq_norm(u).as_f64()).collect();
    let diss = cumulative_simpson(h, &rate);
    let e0 = kinetic[0];
    let residuals: Vec<f64> = kinetic.iter().zip(&diss).map(|(k, d)| k + d - e0).collect();
    let max_residual = residuals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(LerayReport {
        energy0: e0,
        violated: max_residual > 1e-6 * e0,
        max_residual,
        residuals,
    })
}

/// Leray residual of an `ns_solve` run.
pub fn leray_for_trajectory<T: Real>(traj: &NsTrajectory<T>) -> Result<LerayReport> {
    leray_energy_check(&traj.times, &traj.states, traj.nu)
}
