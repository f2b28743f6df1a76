//! Exact flow of the linear acoustic operator on `(ρ, m)`.
//!
//! Per mode with `k = |ξ| > 0`, only the longitudinal momentum
//! `μ = ξ̂·m̂` couples to `σ̂`. In the variables `σ̃ = √(1 + ε²κ²k²) σ̂` and
//! `m̃ = iμ` the flow is the rotation `σ̃' = −ω m̃`, `m̃' = ω σ̃` with the
//! Bogoliubov frequency `ω(k)`. Nyquist modes are removed.

use num_complex::Complex;

use crate::dispersion::omega;
use crate::scalar::Real;
use crate::spectral::{ScalarField, Spectrum, VectorField};

use super::params::FluidParams;

pub(crate) fn acoustic_flow<T: Real>(
    rho: &ScalarField<T>,
    m: &VectorField<T>,
    dt: T,
    params: &FluidParams<T>,
) -> (ScalarField<T>, VectorField<T>) {
    let eps = params.eps;
    let disp = params.dispersion();
    let a = eps * params.kappa;
    let grid = rho.grid().clone();
    let d = grid.dim();
    let mut sig = rho.map_real(|r| (r - T::one()) / eps).spectrum();
    let mut ms: Vec<Spectrum<T>> = m.components().iter().map(|c| c.spectrum()).collect();
    let i = Complex::new(T::zero(), T::one());
    let zero = Complex::new(T::zero(), T::zero());
    {
        let sc = sig.coeffs_mut();
        let mut mc: Vec<&mut [Complex<T>]> = ms.iter_mut().map(|s| s.coeffs_mut()).collect();
        grid.for_each_mode(|n, xi| {
            if n == 0 {
                return;
            }
            if grid.is_nyquist_mode(n) {
                sc[n] = zero;
                mc.iter_mut().for_each(|c| c[n] = zero);
                return;
            }
            let k = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
            let unit: Vec<T> = (0..d).map(|ax| xi[ax] / k).collect();
            let mu = (0..d).fold(zero, |acc, ax| acc + mc[ax][n] * unit[ax]);
            let s = (T::one() + a * a * k * k).sqrt();
            let (sn, cs) = (omega(k, &disp) * dt).sin_cos();
            let st = sc[n] * s;
            let mt = i * mu;
            let st_new = st * cs - mt * sn;
            let mt_new = st * sn + mt * cs;
            sc[n] = st_new / s;
            let dmu = -i * mt_new - mu;
            for ax in 0..d {
                mc[ax][n] += dmu * unit[ax];
            }
        });
    }
    let rho_new = sig.to_field().map_real(|s| T::one() + eps * s);
    let m_new = VectorField::new(ms.iter().map(|s| s.to_field()).collect()).expect("one component per axis");
    (rho_new, m_new)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qns::rhs::acoustic_operator;
    use crate::spectral::SpectralGrid;
    use std::f64::consts::TAU;

    fn setup() -> (FluidParams<f64>, ScalarField<f64>, VectorField<f64>) {
        let g = SpectralGrid::<f64>::new(&[32, 32], &[2.0, 2.0]).unwrap();
        let p = FluidParams::new(0.2, 0.5, 0.3, 2.0).unwrap();
        let rho = ScalarField::from_fn(&g, |x| 1.0 + 0.01 * (TAU * x[0] / 2.0).sin() * (TAU * x[1]).cos());
        let m = VectorField::from_fn(&g, |x| [0.02 * (TAU * x[0] / 2.0).cos() + 0.01 * (TAU * x[1]).sin(), 0.01 * (TAU * x[1]).sin(), 0.0]);
        (p, rho, m)
    }

    #[test]
    fn group_law_and_mass() {
        let (p, rho, m) = setup();
        let (r1, m1) = acoustic_flow(&rho, &m, 0.3, &p);
        let (r2, m2) = acoustic_flow(&r1, &m1, 0.45, &p);
        let (r3, m3) = acoustic_flow(&rho, &m, 0.75, &p);
        assert!(r2.max_distance(&r3) < 1e-14);
        assert!(m2.max_distance(&m3) < 1e-13);
        assert!((r3.mean().re - rho.mean().re).abs() < 1e-15);
    }

    #[test]
    fn derivative_matches_operator() {
        let (p, rho, m) = setup();
        let h = 1e-5;
        let (rp, mp) = acoustic_flow(&rho, &m, h, &p);
        let (rm, mm) = acoustic_flow(&rho, &m, -h, &p);
        let sigma = rho.map_real(|r| (r - 1.0) / p.eps);
        let (ds, dm) = acoustic_operator(&sigma, &m, &p).unwrap();
        let fd_s = rp.sub(&rm).unwrap().scale(1.0 / (2.0 * h * p.eps));
        let fd_m = mp.sub(&mm).unwrap().scale(1.0 / (2.0 * h));
        assert!(fd_s.max_distance(&ds) < 1e-6 * ds.max_abs());
        assert!(fd_m.max_distance(&dm) < 1e-6 * dm.max_abs());
    }

    #[test]
    fn solenoidal_momentum_is_untouched() {
        let (p, rho, _) = setup();
        let g = rho.grid().clone();
        let m = VectorField::from_fn(&g, |x| [(TAU * x[1] / 2.0).sin(), 0.0, 0.0]);
        let flat = ScalarField::constant(&g, 1.0);
        let (r, m1) = acoustic_flow(&flat, &m, 0.7, &p);
        assert!(m1.max_distance(&m) < 1e-14);
        assert!(r.max_distance(&flat) < 1e-15);
    }
}
