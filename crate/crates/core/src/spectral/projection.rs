//! Helmholtz–Leray projections onto gradient and divergence-free fields.

use num_complex::Complex;

use crate::error::{invalid, Result};
use crate::scalar::Real;
use crate::spectral::field::{Spectrum, VectorField};

/// `Q = ∇Δ^{-1}div`, the matrix multiplier `ξξᵀ/|ξ|²` with the zero mode
/// sent to zero.
pub fn helmholtz_q<T: Real>(v: &VectorField<T>) -> Result<VectorField<T>> {
    let grid = v.grid().clone();
    if grid.dim() < 2 {
        return invalid("Helmholtz projection needs a grid of dimension at least 2");
    }
    let spectra: Vec<Spectrum<T>> = v.components().iter().map(|c| c.spectrum()).collect();
    let dim = grid.dim();
    let real = spectra.iter().all(|s| s.is_real());
    let nyquist: Vec<T> = (0..dim).map(|a| grid.wavenumbers(a)[grid.points()[a] / 2]).collect();
    let mut out: Vec<Vec<Complex<T>>> = vec![vec![Complex::new(T::zero(), T::zero()); grid.len()]; dim];
    grid.for_each_mode(|i, mut xi| {
        if real {
            // a real derivative loses the Nyquist wavenumber; match it so
            // that div P = 0 holds exactly on the lattice
            for a in 0..dim {
                if xi[a] == nyquist[a] {
                    xi[a] = T::zero();
                }
            }
        }
        let k2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        if k2 == T::zero() {
            return;
        }
        let mut dot = Complex::new(T::zero(), T::zero());
        for (a, s) in spectra.iter().enumerate() {
            dot += s.coeffs()[i] * xi[a];
        }
        let dot = dot / k2;
        for (a, o) in out.iter_mut().enumerate() {
            o[i] = dot * xi[a];
        }
    });
    let comps = out
        .into_iter()
        .zip(&spectra)
        .map(|(c, s)| Spectrum::new(&grid, c, s.is_real()).map(|sp| sp.to_field()))
        .collect::<Result<Vec<_>>>()?;
    VectorField::new(comps)
}

/// `P = I - Q`, the projector onto divergence-free fields.
pub fn helmholtz_p<T: Real>(v: &VectorField<T>) -> Result<VectorField<T>> {
    let q = helmholtz_q(v)?;
    v.sub(&q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::field::ScalarField;
    use crate::spectral::grid::SpectralGrid;
    use crate::spectral::multiplier::{divergence, gradient, partial};
    use std::f64::consts::TAU;

    fn grid() -> SpectralGrid<f64> {
        SpectralGrid::new(&[32, 32], &[TAU, 2.0 * TAU]).unwrap()
    }

    #[test]
    fn q_fixes_gradients() {
        let g = grid();
        let pot = ScalarField::from_fn(&g, |x| (x[0]).sin() * (x[1] * 0.5).cos() + (2.0 * x[0] + x[1]).cos());
        let v = gradient(&pot);
        let q = helmholtz_q(&v).unwrap();
        let p = helmholtz_p(&v).unwrap();
        assert!(q.max_distance(&v) < 1e-10);
        assert!(p.max_distance(&VectorField::zeros(&g)) < 1e-10);
    }

    #[test]
    fn p_fixes_solenoidal_fields() {
        let g = grid();
        let psi = ScalarField::from_fn(&g, |x| (x[0] + x[1]).sin() + (3.0 * x[0]).cos() * (0.5 * x[1]).sin());
        let v = VectorField::new(vec![partial(&psi, 1).scale(-1.0), partial(&psi, 0)]).unwrap();
        let p = helmholtz_p(&v).unwrap();
        assert!(p.max_distance(&v) < 1e-10);
        assert!(divergence(&p).max_abs() < 1e-10);
    }

    #[test]
    fn needs_two_dimensions() {
        let g = SpectralGrid::<f64>::new(&[8], &[1.0]).unwrap();
        assert!(helmholtz_q(&VectorField::zeros(&g)).is_err());
    }

    #[test]
    fn solenoidal_on_unresolved_fields() {
        // a narrow bump carries energy all the way to the Nyquist modes
        let g = SpectralGrid::new(&[16, 16], &[20.0, 20.0]).unwrap();
        let bump = |x: [f64; 3]| (-((x[0] - 10.0).powi(2) + (x[1] - 9.0).powi(2)) / 0.3).exp();
        let v = VectorField::new(vec![ScalarField::from_fn(&g, bump), ScalarField::from_fn(&g, |x| x[0].sin() * bump(x))]).unwrap();
        let p = helmholtz_p(&v).unwrap();
        assert!(divergence(&p).max_abs() < 1e-13, "{}", divergence(&p).max_abs());
        assert!(helmholtz_p(&p).unwrap().max_distance(&p) < 1e-13);
    }
}
