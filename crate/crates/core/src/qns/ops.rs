//! Pointwise and flux helpers shared by the solver and the diagnostics.

use num_complex::Complex;

use crate::scalar::Real;
use crate::spectral::{ScalarField, SpectralGrid, Spectrum, VectorField};

pub(crate) fn zip_real<T: Real>(a: &ScalarField<T>, b: &ScalarField<T>, f: impl Fn(T, T) -> T) -> ScalarField<T> {
    let vals = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| f(x.re, y.re))
        .collect();
    ScalarField::from_real(a.grid(), vals).expect("same grid")
}

/// Riemann sum `Σ f · cell volume` of a real field.
pub(crate) fn integrate<T: Real>(f: &ScalarField<T>) -> T {
    let s = f.values().iter().fold(T::zero(), |acc, v| acc + v.re);
    s * f.grid().cell_volume()
}

pub(crate) fn all_finite<T: Real>(f: &ScalarField<T>) -> bool {
    f.values().iter().all(|v| v.re.is_finite() && v.im.is_finite())
}

/// `(D v)_{ij} = (∂_j v_i + ∂_i v_j)/2` from a Jacobian.
pub(crate) fn symmetric_part<T: Real>(jac: &[Vec<ScalarField<T>>]) -> Vec<Vec<ScalarField<T>>> {
    let d = jac.len();
    let half = T::lit(0.5);
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| jac[i][j].lincomb(half, &jac[j][i], half).expect("same grid"))
                .collect()
        })
        .collect()
}

/// Trace of a square tensor field.
pub(crate) fn trace<T: Real>(tensor: &[Vec<ScalarField<T>>]) -> ScalarField<T> {
    let mut acc = tensor[0][0].clone();
    for (i, row) in tensor.iter().enumerate().skip(1) {
        acc = acc.add(&row[i]).expect("same grid");
    }
    acc.into_real()
}

/// `Σ_{ij} A_ij B_ij` pointwise.
pub(crate) fn contract<T: Real>(a: &[Vec<ScalarField<T>>], b: &[Vec<ScalarField<T>>]) -> ScalarField<T> {
    let grid = a[0][0].grid().clone();
    let mut acc = vec![T::zero(); grid.len()];
    for (ra, rb) in a.iter().zip(b) {
        for (x, y) in ra.iter().zip(rb) {
            for ((s, p), q) in acc.iter_mut().zip(x.values()).zip(y.values()) {
                *s += p.re * q.re;
            }
        }
    }
    ScalarField::from_real(&grid, acc).expect("same grid")
}

/// Row divergence `N_i = Σ_j ∂_j Φ_ij` of a symmetric tensor field, with
/// optional 2/3-rule truncation of every flux component.
pub(crate) fn symmetric_flux_divergence<T: Real>(flux: &[Vec<ScalarField<T>>], dealias: bool) -> VectorField<T> {
    let d = flux.len();
    let grid: SpectralGrid<T> = flux[0][0].grid().clone();
    let mask = dealias.then(|| grid.dealias_mask());
    let mut spectra: Vec<Vec<Option<Spectrum<T>>>> = vec![vec![None; d]; d];
    for i in 0..d {
        for j in i..d {
            let mut s = flux[i][j].spectrum();
            if let Some(mask) = &mask {
                s.coeffs_mut()
                    .iter_mut()
                    .zip(mask)
                    .filter(|(_, keep)| !**keep)
                    .for_each(|(c, _)| *c = Complex::new(T::zero(), T::zero()));
            }
            spectra[i][j] = Some(s);
        }
    }
    let comps = (0..d)
        .map(|i| {
            let mut out = vec![Complex::new(T::zero(), T::zero()); grid.len()];
            for j in 0..d {
                let s = if i <= j { &spectra[i][j] } else { &spectra[j][i] };
                let coeffs = s.as_ref().expect("filled").coeffs();
                grid.for_each_mode(|m, xi| {
                    out[m] += Complex::new(T::zero(), xi[j]) * coeffs[m];
                });
            }
            Spectrum::new(&grid, out, true).expect("same grid").to_field()
        })
        .collect();
    VectorField::new(comps).expect("one component per axis")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::divergence;
    use std::f64::consts::TAU;

    #[test]
    fn flux_divergence_matches_row_divergence() {
        let g = SpectralGrid::<f64>::new(&[16, 16], &[1.0, 1.0]).unwrap();
        let a = ScalarField::from_fn(&g, |x| (TAU * x[0]).sin());
        let b = ScalarField::from_fn(&g, |x| (TAU * x[1]).cos() * (TAU * x[0]).cos());
        let c = ScalarField::from_fn(&g, |x| (2.0 * TAU * x[1]).sin());
        let flux = vec![vec![a.clone(), b.clone()], vec![b.clone(), c.clone()]];
        let out = symmetric_flux_divergence(&flux, false);
        let row0 = divergence(&VectorField::new(vec![a, b.clone()]).unwrap());
        let row1 = divergence(&VectorField::new(vec![b, c]).unwrap());
        assert!(out.component(0).max_distance(&row0) < 1e-12);
        assert!(out.component(1).max_distance(&row1) < 1e-12);
    }

    #[test]
    fn riemann_sum_of_constant() {
        let g = SpectralGrid::<f64>::new(&[8, 4], &[2.0, 3.0]).unwrap();
        assert!((integrate(&ScalarField::constant(&g, 0.5)) - 3.0).abs() < 1e-14);
    }
}
