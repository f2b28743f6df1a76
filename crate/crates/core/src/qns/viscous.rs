//! Viscous stress: the tensor `T` with `√ρ T = ∇(ρu) − 2∇√ρ ⊗ Λ`, the
//! regularized weights `(h_δ, g_δ)` and the dissipation they generate.

use crate::scalar::Real;
use crate::spectral::multiplier::jacobian;
use crate::spectral::{gradient, ScalarField};

use super::ops::{contract, integrate, symmetric_part, trace, zip_real};
use super::params::FluidParams;
use super::state::FluidState;

/// `(h_δ(ρ), g_δ(ρ))` with `h_δ = ρ + δρ^{7/8} + δρ^γ` and `g_δ = ρh_δ' − h_δ`.
pub fn regularized_viscosity<T: Real>(rho: T, gamma: T, delta: T) -> (T, T) {
    if rho <= T::zero() {
        return (T::zero(), T::zero());
    }
    let p78 = rho.powf(T::lit(0.875));
    let pg = rho.powf(gamma);
    let h = rho + delta * (p78 + pg);
    // ρh' − h collapses to δ((7/8 − 1)ρ^{7/8} + (γ − 1)ρ^γ)
    let g = delta * (T::lit(-0.125) * p78 + (gamma - T::one()) * pg);
    (h, g)
}

/// `T` and its symmetric part `S`, both as `d×d` component grids with
/// `T[i][j] = √ρ ∂_j u_i`.
#[derive(Debug, Clone)]
pub struct ViscousTensor<T: Real> {
    pub t: Vec<Vec<ScalarField<T>>>,
    pub s: Vec<Vec<ScalarField<T>>>,
    /// Fraction of nodes with `√ρ < rho_floor`, where `T` is set to zero.
    pub excluded_fraction: T,
    /// Set when more than 10% of the box is excluded.
    pub warning: bool,
}

pub fn viscous_tensor<T: Real>(state: &FluidState<T>, params: &FluidParams<T>) -> ViscousTensor<T> {
    let floor = params.rho_floor;
    let sr = &state.sqrt_rho;
    let grad_sr = gradient(sr);
    let jm = jacobian(&state.momentum());
    let d = state.dim();
    let t: Vec<Vec<ScalarField<T>>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let cross = state.lambda.component(i).mul(grad_sr.component(j)).expect("same grid");
                    let num = jm[i][j].lincomb(T::one(), &cross, T::lit(-2.0)).expect("same grid");
                    zip_real(&num, sr, |n, s| if s >= floor { n / s } else { T::zero() })
                })
                .collect()
        })
        .collect();
    let s = symmetric_part(&t);
    let excluded = sr.values().iter().filter(|v| v.re < floor).count();
    let excluded_fraction = T::lit(excluded as f64 / sr.grid().len() as f64);
    ViscousTensor {
        t,
        s,
        excluded_fraction,
        warning: excluded_fraction > T::lit(0.1),
    }
}

/// Integrated dissipation of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissipationReport<T> {
    /// `∫ h_δ|Du|² + g_δ (div u)²`.
    pub weighted: T,
    /// `∫ ρ|Du|²`.
    pub plain: T,
    /// `2ν · weighted`, the instantaneous energy loss.
    pub rate: T,
}

impl<T: Real> DissipationReport<T> {
    /// The regularized dissipation dominates the plain one up to `slack`.
    pub fn lower_bound_holds(&self, slack: T) -> bool {
        self.weighted >= self.plain - slack
    }
}

pub fn dissipation<T: Real>(state: &FluidState<T>, params: &FluidParams<T>) -> DissipationReport<T> {
    let u = state.velocity(params.rho_floor);
    let du = symmetric_part(&jacobian(&u));
    let du_sq = contract(&du, &du);
    let div = trace(&du);
    let rho = state.density();
    let (gamma, delta) = (params.gamma, params.delta_reg);
    let plain = integrate(&zip_real(&rho, &du_sq, |r, q| r * q));
    let weighted = if delta == T::zero() {
        plain
    } else {
        let vals: Vec<T> = rho
            .values()
            .iter()
            .zip(du_sq.values())
            .zip(div.values())
            .map(|((r, q), dv)| {
                let (h, g) = regularized_viscosity(r.re, gamma, delta);
                h * q.re + g * dv.re * dv.re
            })
            .collect();
        integrate(&ScalarField::from_real(rho.grid(), vals).expect("same grid"))
    };
    DissipationReport {
        weighted,
        plain,
        rate: T::lit(2.0) * params.nu * weighted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{SpectralGrid, VectorField};
    use std::f64::consts::TAU;

    fn params() -> FluidParams<f64> {
        FluidParams::new(0.1, 0.5, 0.2, 2.0).unwrap()
    }

    #[test]
    fn weights_at_special_points() {
        assert_eq!(regularized_viscosity(3.0, 2.0, 0.0), (3.0, 0.0));
        assert_eq!(regularized_viscosity(0.0, 2.0, 0.1), (0.0, 0.0));
        let (h, g) = regularized_viscosity(1.0f64, 2.0, 0.1);
        assert!((h - 1.2).abs() < 1e-15);
        // h' = 1 + δ(7/8 + 2) at ρ = 1
        assert!((g - (1.0 + 0.1 * 2.875 - 1.2)).abs() < 1e-15);
    }

    #[test]
    fn weights_match_finite_difference() {
        for &(r, gam, d) in &[(0.3f64, 1.4f64, 0.05f64), (2.0, 2.5, 0.1), (1e-3, 1.1, 1e-3)] {
            let hs = 1e-6 * r;
            let hp = (regularized_viscosity(r + hs, gam, d).0 - regularized_viscosity(r - hs, gam, d).0) / (2.0 * hs);
            let (h, g) = regularized_viscosity(r, gam, d);
            assert!((g - (r * hp - h)).abs() < 1e-8 * h.max(1.0));
        }
    }

    #[test]
    fn tensor_identities() {
        let g = SpectralGrid::<f64>::new(&[32, 32], &[1.0, 1.0]).unwrap();
        let u = VectorField::from_fn(&g, |x| [(TAU * x[1]).sin(), (TAU * x[0]).cos(), 0.0]);
        let grad_u = jacobian(&u);
        let rho4 = ScalarField::constant(&g, 4.0);
        let s = FluidState::from_density_velocity(&rho4, &u, 0.0).unwrap();
        let vt = viscous_tensor(&s, &params());
        for i in 0..2 {
            for j in 0..2 {
                assert!(vt.t[i][j].max_distance(&grad_u[i][j].scale(2.0)) < 1e-11);
            }
        }
        assert_eq!(vt.excluded_fraction, 0.0);

        let rho = ScalarField::from_fn(&g, |x| 1.0 + 0.3 * (TAU * x[0]).sin() * (TAU * x[1]).cos());
        let s = FluidState::from_density_velocity(&rho, &u, 0.0).unwrap();
        let vt = viscous_tensor(&s, &params());
        let du = symmetric_part(&grad_u);
        let mut diff = 0.0;
        let mut norm = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let want = du[i][j].mul(&s.sqrt_rho).unwrap();
                diff += vt.s[i][j].sub(&want).unwrap().l2_norm().powi(2);
                norm += want.l2_norm().powi(2);
            }
        }
        assert!(diff.sqrt() <= 1e-8 * norm.sqrt());
    }

    #[test]
    fn excluded_volume_flag() {
        let g = SpectralGrid::<f64>::new(&[16], &[1.0]).unwrap();
        let rho = ScalarField::from_fn(&g, |x| if x[0] < 0.25 { 0.0 } else { 1.0 });
        let s = FluidState::from_density_velocity(&rho, &VectorField::zeros(&g), 0.0).unwrap();
        let vt = viscous_tensor(&s, &params());
        assert!(vt.warning);
        assert!((vt.excluded_fraction - 0.25).abs() < 1e-15);
    }

    #[test]
    fn regularized_dissipation_dominates() {
        let g = SpectralGrid::<f64>::new(&[32, 32], &[1.0, 1.0]).unwrap();
        let rho = ScalarField::from_fn(&g, |x| 0.05 + 0.9 * (TAU * x[0]).sin().powi(2));
        let u = VectorField::from_fn(&g, |x| [(TAU * x[0]).sin(), (TAU * x[1]).sin(), 0.0]);
        let s = FluidState::from_density_velocity(&rho, &u, 0.0).unwrap();
        for delta in [0.0, 1e-3, 0.05, 0.1] {
            let p = params().with_regularization(delta).unwrap();
            let rep = dissipation(&s, &p);
            assert!(rep.lower_bound_holds(1e-10), "delta = {delta}");
        }
    }
}
