//! Exact linear evolution and Duhamel solves of the symmetrized system.
//!
//! The rotation `σ̃' = −ωm̃`, `m̃' = ωσ̃` is diagonal in `w = σ̃ + i m̃`,
//! which satisfies `w' = iωw`. A source `F` in the momentum equation enters
//! as `F̃ = (−Δ)^{−1/2} div F` in the `m̃` equation, so the forced problem
//! is `w' = iωw + iF̃`.

use num_complex::Complex;

use crate::dispersion::propagate;
use crate::dispersion::propagator::duhamel_step;
use crate::error::{invalid, Error, Result};
use crate::qns::FluidParams;
use crate::scalar::Real;
use crate::spectral::{ScalarField, Spectrum, VectorField};

use super::state::{AcousticState, SymmetrizedState};

/// `(σ̃, m̃)` advanced by `t`; `t` may be negative.
pub fn linear_evolve<T: Real>(sym: &SymmetrizedState<T>, t: T, params: &FluidParams<T>) -> SymmetrizedState<T> {
    let w = propagate(&sym.packed(), t, &params.dispersion());
    SymmetrizedState::unpack(&w, sym.time + t)
}

/// Linear acoustic flow of a full `(σ, m)`: only `σ` and `Qm` move, the
/// solenoidal part and the mean of `m` are carried along unchanged.
pub fn evolve_acoustic<T: Real>(ac: &AcousticState<T>, t: T, params: &FluidParams<T>) -> Result<AcousticState<T>> {
    let sym = super::state::symmetrize(ac, params)?;
    let q_old = super::state::desymmetrize(&sym, params)?;
    let q_new = super::state::desymmetrize(&linear_evolve(&sym, t, params), params)?;
    let m = ac.m.sub(&q_old.m)?.add(&q_new.m)?;
    AcousticState::new(q_new.sigma, m, ac.time + t)
}

/// `i(−Δ)^{−1/2} div F` as a spectrum; zero and Nyquist modes dropped.
fn forcing_spectrum<T: Real>(f: &VectorField<T>) -> Spectrum<T> {
    let grid = f.grid().clone();
    let d = grid.dim();
    let spectra: Vec<Spectrum<T>> = f.components().iter().map(|c| c.spectrum()).collect();
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = vec![zero; grid.len()];
    grid.for_each_mode(|n, xi| {
        if n == 0 || grid.is_nyquist_mode(n) {
            return;
        }
        let k = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
        let mu = (0..d).fold(zero, |acc, a| acc + spectra[a].coeffs()[n] * (xi[a] / k));
        // i · (i ξ̂·F̂) = −ξ̂·F̂
        out[n] = -mu;
    });
    Spectrum::new(&grid, out, false).expect("same grid")
}

/// Mild solution of the forced symmetrized system, sampled at `times`.
///
/// `source[n]` is the momentum source at `times[n]`, interpolated linearly
/// in between; `times[0]` must be the initial time.
pub fn duhamel_solve<T: Real>(
    initial: &SymmetrizedState<T>,
    times: &[T],
    source: &[VectorField<T>],
    params: &FluidParams<T>,
) -> Result<Vec<SymmetrizedState<T>>> {
    if times.is_empty() || times.len() != source.len() {
        return invalid("source samples must match the time grid");
    }
    let scale = T::one().max(times[times.len() - 1].abs());
    if (times[0] - initial.time).abs() > T::lit(1e-12) * scale {
        return invalid("time grid must start at the initial time");
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return invalid("time grid must be strictly increasing");
    }
    if source.iter().any(|f| f.grid() != initial.grid()) {
        return Err(Error::GridMismatch);
    }
    let disp = params.dispersion();
    let mut w = initial.packed().spectrum();
    let mut out = Vec::with_capacity(times.len());
    out.push(initial.clone());
    let mut prev = forcing_spectrum(&source[0]);
    for n in 1..times.len() {
        let next = forcing_spectrum(&source[n]);
        duhamel_step(&mut w, &prev, &next, times[n] - times[n - 1], T::one(), &disp)?;
        out.push(SymmetrizedState::unpack(&w.to_field(), times[n]));
        prev = next;
    }
    Ok(out)
}

/// `F̃ = (−Δ)^{−1/2} div F` as a real field.
pub fn symmetrized_source<T: Real>(f: &VectorField<T>) -> ScalarField<T> {
    let mut s = forcing_spectrum(f);
    s.coeffs_mut().iter_mut().for_each(|c| *c = Complex::new(c.im, -c.re));
    s.set_real(true);
    s.to_field()
}
