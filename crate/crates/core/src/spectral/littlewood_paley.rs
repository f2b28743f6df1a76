//! Smooth dyadic decomposition of the frequency lattice.
//!
//! The profile is fixed so that norms are reproducible:
//!
//! * `s(t) = exp(-1/t)` for `t > 0`, zero otherwise;
//! * `step(t) = s(t) / (s(t) + s(1 - t))`, a C^∞ ramp from 0 on `t ≤ 0`
//!   to 1 on `t ≥ 1`;
//! * low-pass `ψ(r) = step(2 - r)`: equal to 1 on `r ≤ 1`, 0 on `r ≥ 2`;
//! * dyadic bump `β(r) = ψ(r) - ψ(2r)`, supported in `(1/2, 2)` with
//!   `β(1) = 1`.
//!
//! Shell `j ≥ 1` is the multiplier `β(|ξ|/2^j)`, the low block is `ψ(|ξ|)`,
//! and `ψ(|ξ|) + Σ_{j=1}^{J} β(|ξ|/2^j) = ψ(|ξ|/2^J)`, which is the identity
//! once `2^J` exceeds the largest lattice wavenumber.

use crate::error::Result;
use crate::scalar::Real;
use crate::spectral::field::{ScalarField, Spectrum};
use crate::spectral::multiplier::Multiplier;

fn ramp_seed<T: Real>(t: T) -> T {
    if t > T::zero() {
        (-t.recip()).exp()
    } else {
        T::zero()
    }
}

/// C^∞ step from 0 (t ≤ 0) to 1 (t ≥ 1).
pub fn smooth_step<T: Real>(t: T) -> T {
    let a = ramp_seed(t);
    let b = ramp_seed(T::one() - t);
    if a + b == T::zero() {
        return T::zero();
    }
    a / (a + b)
}

/// Low-pass profile `ψ`.
pub fn lowpass_profile<T: Real>(r: T) -> T {
    smooth_step(T::lit(2.0) - r)
}

/// Dyadic bump `β(r) = ψ(r) - ψ(2r)`.
pub fn dyadic_bump<T: Real>(r: T) -> T {
    lowpass_profile(r) - lowpass_profile(r + r)
}

/// Dyadic annulus `[2^{j-1}, 2^{j+1}]` in `|ξ|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrequencyShell {
    pub index: i32,
}

impl FrequencyShell {
    pub fn new(index: i32) -> Self {
        Self { index }
    }

    /// Center `2^j`.
    pub fn center<T: Real>(&self) -> T {
        T::lit(2f64.powi(self.index))
    }

    pub fn band<T: Real>(&self) -> (T, T) {
        (T::lit(2f64.powi(self.index - 1)), T::lit(2f64.powi(self.index + 1)))
    }

    /// The shell multiplier `β(|ξ|/2^j)`.
    pub fn multiplier<'a, T: Real>(&self) -> Multiplier<'a, T> {
        let c: T = self.center();
        Multiplier::radial(move |k: T| dyadic_bump(k / c))
    }
}

/// Output of [`lp_project`]; `empty` is set when no lattice mode falls inside
/// the open band, in which case `field` is zero.
#[derive(Debug, Clone)]
pub struct ShellProjection<T: Real> {
    pub field: ScalarField<T>,
    pub empty: bool,
}

pub fn shell_is_empty<T: Real>(grid: &crate::spectral::grid::SpectralGrid<T>, shell: FrequencyShell) -> bool {
    let (lo, hi) = shell.band::<T>();
    let mut empty = true;
    grid.for_each_mode(|_, xi| {
        let k = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
        if k > lo && k < hi {
            empty = false;
        }
    });
    empty
}

/// Littlewood–Paley block `P_j f`.
pub fn lp_project<T: Real>(f: &ScalarField<T>, shell: FrequencyShell) -> Result<ShellProjection<T>> {
    if shell_is_empty(f.grid(), shell) {
        return Ok(ShellProjection {
            field: ScalarField::zeros(f.grid()),
            empty: true,
        });
    }
    let mut s = f.spectrum();
    shell.multiplier().apply_to_spectrum(&mut s)?;
    Ok(ShellProjection {
        field: s.to_field(),
        empty: false,
    })
}

/// Smooth low-pass `ψ(|ξ|/cutoff) f`; `cutoff = 1` is the low block of the
/// decomposition.
pub fn lp_lowpass<T: Real>(f: &ScalarField<T>, cutoff: T) -> Result<ScalarField<T>> {
    let mut s = f.spectrum();
    Multiplier::radial(move |k: T| lowpass_profile(k / cutoff)).apply_to_spectrum(&mut s)?;
    Ok(s.to_field())
}

/// Highest shell index whose band meets the lattice.
pub fn max_shell<T: Real>(grid: &crate::spectral::grid::SpectralGrid<T>) -> i32 {
    let kmax = grid.max_wavenumber().as_f64();
    // band starts at 2^{j-1}
    let mut j = 1;
    while 2f64.powi(j) < kmax {
        j += 1;
    }
    j
}

/// Low block followed by every shell `j = 1..=max_shell`, each as a
/// spectrum. Summing them reproduces the input.
pub fn lp_blocks<T: Real>(f: &ScalarField<T>) -> Vec<Spectrum<T>> {
    let base = f.spectrum();
    lp_blocks_from_spectrum(&base)
}

pub fn lp_blocks_from_spectrum<T: Real>(base: &Spectrum<T>) -> Vec<Spectrum<T>> {
    let grid = base.grid().clone();
    let top = max_shell(&grid);
    let mut out = Vec::with_capacity(top as usize + 1);
    let mut low = base.clone();
    Multiplier::radial(|k: T| lowpass_profile(k))
        .apply_to_spectrum(&mut low)
        .expect("finite");
    out.push(low);
    for j in 1..=top {
        let mut s = base.clone();
        FrequencyShell::new(j)
            .multiplier()
            .apply_to_spectrum(&mut s)
            .expect("finite");
        out.push(s);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::SpectralGrid;
    use std::f64::consts::TAU;

    #[test]
    fn profile_values() {
        assert_eq!(lowpass_profile(0.5f64), 1.0);
        assert_eq!(lowpass_profile(2.5f64), 0.0);
        assert_eq!(dyadic_bump(1.0f64), 1.0);
        assert_eq!(dyadic_bump(0.5f64), 0.0);
        assert_eq!(dyadic_bump(2.0f64), 0.0);
        assert!((smooth_step(0.5f64) - 0.5).abs() < 1e-15);
        for i in 1..200 {
            let r = 0.01 * i as f64 + 0.3;
            let sum: f64 = lowpass_profile(r) + (1..8).map(|j| dyadic_bump(r / 2f64.powi(j))).sum::<f64>();
            assert!((sum - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn band_ratio() {
        let (lo, hi) = FrequencyShell::new(3).band::<f64>();
        assert_eq!(hi / lo, 4.0);
    }

    #[test]
    fn center_mode_passes_and_outside_mode_vanishes() {
        // |ξ| = 4 = 2^2 exactly
        let g = SpectralGrid::<f64>::new(&[64], &[TAU]).unwrap();
        let f = ScalarField::from_fn(&g, |x| (4.0 * x[0]).cos());
        let p = lp_project(&f, FrequencyShell::new(2)).unwrap();
        assert!(!p.empty);
        assert!(p.field.max_distance(&f) < 1e-13);
        let q = lp_project(&f, FrequencyShell::new(4)).unwrap();
        assert!(q.field.max_abs() < 1e-13);
    }

    #[test]
    fn empty_shell_is_flagged() {
        let g = SpectralGrid::<f64>::new(&[16], &[TAU]).unwrap();
        let f = ScalarField::from_fn(&g, |x| x[0].sin());
        let p = lp_project(&f, FrequencyShell::new(10)).unwrap();
        assert!(p.empty);
        assert_eq!(p.field.max_abs(), 0.0);
    }
}
