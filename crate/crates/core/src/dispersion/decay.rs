//! Sup-norm decay of a shell-localized wave packet under `e^{itH_ε}`.
//!
//! The datum has Fourier transform proportional to `β(|ξ|/R)` and unit
//! `L¹` norm. Two backends evolve it:
//!
//! * [`DecayBackend::Lattice`]: the full periodic lattice in `d` dimensions;
//! * [`DecayBackend::Radial3`]: the exact radial reduction in three
//!   dimensions. For radial `u`, `y·u(y)` is odd and `e^{itH_ε}` acts on it
//!   as the one-dimensional multiplier `e^{itω(|k|)}`, so the 3D evolution
//!   is a 1D FFT problem on a much longer line.
//!
//! Either way the packet must stay inside the half period: the run is
//! refused once `v_max·t + extent > L/2`, with `v_max` the largest group
//! velocity on the shell and `extent` the radius outside which the datum
//! is below `1e-6` of its peak.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dispersion::propagator::propagate_spectrum;
use crate::dispersion::symbol::DispersionParams;
use crate::error::{invalid, Error, Result};
use crate::fit::{log_log_fit, LineFit};
use crate::spectral::field::Spectrum;
use crate::spectral::grid::SpectralGrid;
use crate::spectral::io::write_xy;
use crate::spectral::littlewood_paley::dyadic_bump;

const EXTENT_THRESHOLD: f64 = 1e-6;
const SUPPORT_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayBackend {
    Lattice { dim: usize, points: usize, length: f64 },
    Radial3 { points: usize, length: f64 },
}

impl DecayBackend {
    pub fn dim(&self) -> usize {
        match *self {
            DecayBackend::Lattice { dim, .. } => dim,
            DecayBackend::Radial3 { .. } => 3,
        }
    }

    fn refined(&self) -> Self {
        match *self {
            DecayBackend::Lattice { dim, points, length } => DecayBackend::Lattice { dim, points: 2 * points, length },
            DecayBackend::Radial3 { points, length } => DecayBackend::Radial3 { points: 2 * points, length },
        }
    }
}

/// A unit-`L¹` shell datum ready to be evolved.
pub struct ShellPacket {
    backend: DecayBackend,
    params: DispersionParams<f64>,
    radius: f64,
    grid: SpectralGrid<f64>,
    spectrum: Spectrum<f64>,
    l1_norm: f64,
    extent: f64,
    v_max: f64,
}

impl ShellPacket {
    pub fn new(radius: f64, params: &DispersionParams<f64>, backend: DecayBackend) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return invalid(format!("shell radius must be positive, got {radius}"));
        }
        let (grid, radial) = match backend {
            DecayBackend::Lattice { dim, points, length } => (SpectralGrid::cube(dim, points, length)?, false),
            DecayBackend::Radial3 { points, length } => (SpectralGrid::new(&[points], &[length])?, true),
        };
        let nyq = (0..grid.dim()).map(|a| grid.nyquist(a)).fold(f64::INFINITY, f64::min);
        if 2.0 * radius >= nyq {
            return invalid(format!("grid Nyquist wavenumber {nyq} does not resolve the shell 2R = {}", 2.0 * radius));
        }
        let scale = grid.len() as f64 / grid.volume();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.len()];
        grid.for_each_mode(|i, xi| {
            let k = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
            let b = dyadic_bump(k / radius) * scale;
            coeffs[i] = if radial {
                Complex64::new(0.0, -xi[0] * b / (2.0 * std::f64::consts::PI))
            } else {
                Complex64::new(b, 0.0)
            };
        });
        let mut spectrum = Spectrum::new(&grid, coeffs, true)?;
        let datum = spectrum.to_field().real_values();
        let (l1_norm, extent) = if radial {
            let h = grid.spacing(0);
            let half = grid.len() / 2;
            let l1 = 4.0 * std::f64::consts::PI * (1..=half).map(|j| j as f64 * h * datum[j].abs() * h).sum::<f64>();
            let f: Vec<f64> = (1..=half).map(|j| (datum[j] / (j as f64 * h)).abs()).collect();
            let peak = f.iter().cloned().fold(0.0, f64::max);
            let last = f.iter().rposition(|v| *v >= EXTENT_THRESHOLD * peak).unwrap_or(0);
            (l1, (last + 1) as f64 * h)
        } else {
            let l1 = datum.iter().map(|v| v.abs()).sum::<f64>() * grid.cell_volume();
            let peak = datum.iter().cloned().fold(0.0, |a: f64, v| a.max(v.abs()));
            let mut ext: f64 = 0.0;
            for (i, v) in datum.iter().enumerate() {
                if v.abs() >= EXTENT_THRESHOLD * peak {
                    ext = ext.max(periodic_radius(&grid, i));
                }
            }
            (l1, ext)
        };
        for c in spectrum.coeffs_mut() {
            *c /= l1_norm;
        }
        let prof = params.profile();
        let v_max = (0..=4000)
            .map(|i| radius * (0.5 + 1.5 * i as f64 / 4000.0))
            .filter(|&r| dyadic_bump(r / radius) >= SUPPORT_THRESHOLD)
            .map(|r| prof.dphi(r))
            .fold(0.0, f64::max);
        Ok(Self { backend, params: *params, radius, grid, spectrum, l1_norm, extent, v_max })
    }

    pub fn backend(&self) -> DecayBackend {
        self.backend
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `L¹` norm of the datum before normalization.
    pub fn raw_l1_norm(&self) -> f64 {
        self.l1_norm
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn max_group_velocity(&self) -> f64 {
        self.v_max
    }

    /// Last time at which the packet is guaranteed to stay inside `L/2`.
    pub fn safe_until(&self) -> f64 {
        let half = 0.5 * self.grid.lengths()[0];
        ((half - self.extent) / self.v_max).max(0.0)
    }

    /// Radial profile `u(t, y)` on `y_j = j·h`, `0 ≤ j ≤ N/2`
    /// (radial backend only).
    pub fn radial_profile(&self, t: f64) -> Result<(Vec<f64>, Vec<Complex64>)> {
        if !matches!(self.backend, DecayBackend::Radial3 { .. }) {
            return invalid("radial_profile needs the radial backend");
        }
        let mut s = self.spectrum.clone();
        propagate_spectrum(&mut s, t, &self.params);
        let n = self.grid.len();
        let h = self.grid.spacing(0);
        let k = self.grid.wavenumbers(0);
        let origin = s.coeffs().iter().zip(k).map(|(c, &kk)| c * Complex64::new(0.0, kk)).sum::<Complex64>() / n as f64;
        let g = s.to_field();
        let mut ys = Vec::with_capacity(n / 2 + 1);
        let mut us = Vec::with_capacity(n / 2 + 1);
        ys.push(0.0);
        us.push(origin);
        for j in 1..=n / 2 {
            let y = j as f64 * h;
            ys.push(y);
            us.push(g.values()[j] / y);
        }
        Ok((ys, us))
    }

    /// `max |e^{itH_ε} f|` over the grid.
    pub fn sup_at(&self, t: f64) -> Result<f64> {
        match self.backend {
            DecayBackend::Radial3 { .. } => {
                let (_, us) = self.radial_profile(t)?;
                Ok(us.iter().map(|c| c.norm()).fold(0.0, f64::max))
            }
            DecayBackend::Lattice { .. } => {
                let mut s = self.spectrum.clone();
                propagate_spectrum(&mut s, t, &self.params);
                Ok(s.to_field().max_abs())
            }
        }
    }
}

fn periodic_radius(grid: &SpectralGrid<f64>, flat: usize) -> f64 {
    let idx = grid.unflatten(flat);
    let mut r2 = 0.0;
    for a in 0..grid.dim() {
        let n = grid.points()[a];
        let i = idx[a].min(n - idx[a]);
        let x = i as f64 * grid.spacing(a);
        r2 += x * x;
    }
    r2.sqrt()
}

/// Measured decay `t ↦ sup|e^{itH_ε} f|` and its log-log fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFit {
    pub dim: usize,
    pub eps: f64,
    pub kappa: f64,
    pub radius: f64,
    pub times: Vec<f64>,
    pub sup_values: Vec<f64>,
    pub slope: f64,
    pub prefactor: f64,
    /// Largest deviation of `log sup` from the fitted line.
    pub residual: f64,
    /// Prefactor with the slope pinned to `−d/2`.
    pub pinned_prefactor: f64,
    pub safe_until: f64,
    /// Largest relative change of the sup values when `N` is doubled.
    pub refinement_change: Option<f64>,
}

fn sup_series(packet: &ShellPacket, times: &[f64]) -> Result<Vec<f64>> {
    let safe = packet.safe_until();
    if let Some(&t) = times.iter().find(|&&t| t.abs() > safe) {
        return Err(Error::UnderResolved { first_unsafe_time: t });
    }
    times.iter().map(|&t| packet.sup_at(t)).collect()
}

/// Evolves the unit shell datum and fits `sup ≈ prefactor·t^{slope}`.
pub fn measure_decay(
    radius: f64,
    params: &DispersionParams<f64>,
    times: &[f64],
    backend: DecayBackend,
    refine: bool,
) -> Result<DecayFit> {
    if times.len() < 2 || times.windows(2).any(|w| !(w[1] > w[0])) || !(times[0] > 0.0) {
        return invalid("decay times must be positive and strictly increasing");
    }
    if times[times.len() - 1] < 10.0 * times[0] * (1.0 - 1e-12) {
        return invalid("decay times must span at least one decade");
    }
    let packet = ShellPacket::new(radius, params, backend)?;
    let sups = sup_series(&packet, times)?;
    let refinement_change = if refine {
        let fine = ShellPacket::new(radius, params, backend.refined())?;
        let fine_sups = sup_series(&fine, times)?;
        Some(sups.iter().zip(&fine_sups).map(|(a, b)| (a - b).abs() / b).fold(0.0, f64::max))
    } else {
        None
    };
    let d = backend.dim();
    let fit = log_log_fit(times, &sups)?;
    let half_d = d as f64 / 2.0;
    let pinned = times.iter().zip(&sups).map(|(t, s)| s.ln() + half_d * t.ln()).sum::<f64>() / times.len() as f64;
    Ok(DecayFit {
        dim: d,
        eps: params.eps,
        kappa: params.kappa,
        radius,
        times: times.to_vec(),
        sup_values: sups,
        slope: fit.slope,
        prefactor: fit.intercept.exp(),
        residual: fit.residual,
        pinned_prefactor: pinned.exp(),
        safe_until: packet.safe_until(),
        refinement_change,
    })
}

/// Fits `pinned_prefactor ∝ ε^δ` across runs; `slope` is `δ`.
pub fn epsilon_gain(fits: &[DecayFit]) -> Result<LineFit> {
    if fits.len() < 2 {
        return invalid("epsilon gain needs at least two runs");
    }
    let eps: Vec<f64> = fits.iter().map(|f| f.eps).collect();
    let pre: Vec<f64> = fits.iter().map(|f| f.pinned_prefactor).collect();
    log_log_fit(&eps, &pre)
}

#[derive(Serialize)]
struct DecayRow {
    d: usize,
    eps: f64,
    kappa: f64,
    #[serde(rename = "R")]
    radius: f64,
    t_min: f64,
    t_max: f64,
    slope: f64,
    prefactor: f64,
    residual: f64,
}

pub fn write_decay_csv(path: &Path, fits: &[DecayFit]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for f in fits {
        w.serialize(DecayRow {
            d: f.dim,
            eps: f.eps,
            kappa: f.kappa,
            radius: f.radius,
            t_min: f.times[0],
            t_max: f.times[f.times.len() - 1],
            slope: f.slope,
            prefactor: f.prefactor,
            residual: f.residual,
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Two-column `(t, sup)` plot data.
pub fn write_decay_plot(path: &Path, fit: &DecayFit) -> Result<()> {
    write_xy(path, &fit.times, &fit.sup_values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::oscillatory::oscillatory_integral_oracle;
    use crate::fit::log_space;

    #[test]
    fn radial_datum_matches_direct_integral() {
        let p = DispersionParams::new(1.0, 1.0).unwrap();
        let packet = ShellPacket::new(1.0, &p, DecayBackend::Radial3 { points: 4096, length: 400.0 }).unwrap();
        let norm = (2.0 * std::f64::consts::PI).powi(3) * packet.raw_l1_norm();
        for &t in &[0.0, 3.0] {
            let (ys, us) = packet.radial_profile(t).unwrap();
            for j in [0usize, 7, 40, 100] {
                let direct = oscillatory_integral_oracle(t, &[ys[j], 0.0, 0.0], 1.0, &p, 3).unwrap() / norm;
                assert!((us[j] - direct).norm() < 1e-9, "t={t} y={} {} vs {}", ys[j], us[j], direct);
            }
        }
    }

    #[test]
    fn lattice_and_radial_agree() {
        // The normalizing L¹ norm depends on how much of the slowly decaying
        // tail fits in the box, so compare the un-normalized evolutions.
        let p = DispersionParams::new(1.0, 1.0).unwrap();
        let rad = ShellPacket::new(1.0, &p, DecayBackend::Radial3 { points: 8192, length: 160.0 }).unwrap();
        let lat = ShellPacket::new(1.0, &p, DecayBackend::Lattice { dim: 3, points: 128, length: 160.0 }).unwrap();
        for &t in &[1.0, 2.0, 4.0] {
            let a = rad.sup_at(t).unwrap() * rad.raw_l1_norm();
            let b = lat.sup_at(t).unwrap() * lat.raw_l1_norm();
            assert!((a / b - 1.0).abs() < 1e-5, "t={t}: {a} vs {b}");
        }
    }

    #[test]
    fn refuses_unsafe_window() {
        let p = DispersionParams::new(1.0, 1.0).unwrap();
        let r = measure_decay(1.0, &p, &log_space(1.0, 100.0, 5), DecayBackend::Radial3 { points: 1024, length: 100.0 }, false);
        assert!(matches!(r, Err(Error::UnderResolved { .. })));
        let short = measure_decay(1.0, &p, &[1.0, 2.0], DecayBackend::Radial3 { points: 1024, length: 100.0 }, false);
        assert!(short.is_err());
    }

    #[test]
    fn coarse_three_dimensional_slope() {
        let p = DispersionParams::new(1.0, 1.0).unwrap();
        let fit = measure_decay(
            1.0,
            &p,
            &log_space(5.0, 50.0, 9),
            DecayBackend::Radial3 { points: 8192, length: 600.0 },
            true,
        )
        .unwrap();
        assert!((fit.slope + 1.5).abs() < 0.15, "{fit:?}");
        assert!(fit.refinement_change.unwrap() < 0.01);
    }
}
