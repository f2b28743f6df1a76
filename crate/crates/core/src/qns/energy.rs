use serde::Serialize;

use crate::error::{invalid, Result};
use crate::scalar::Real;
use crate::spectral::{gradient, ScalarField};

use super::ops::integrate;
use super::params::FluidParams;
use super::state::FluidState;

/// `π_ε(ρ) = (ρ^γ − 1 − γ(ρ − 1)) / (ε²γ(γ − 1))`.
pub fn internal_energy_density<T: Real>(rho: T, gamma: T, eps: T) -> T {
    let num = rho.powf(gamma) - T::one() - gamma * (rho - T::one());
    num / (eps * eps * gamma * (gamma - T::one()))
}

/// `π_ε(ρ)` on every node.
pub fn internal_energy_field<T: Real>(rho: &ScalarField<T>, params: &FluidParams<T>) -> ScalarField<T> {
    let (g, e) = (params.gamma, params.eps);
    rho.map_real(|r| internal_energy_density(r.max(T::zero()), g, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyReport<T> {
    pub kinetic: T,
    pub quantum: T,
    pub internal: T,
    pub total: T,
    pub dissipation_accumulated: T,
}

fn half_sq_sum<T: Real>(fields: &[ScalarField<T>]) -> T {
    let sum = fields
        .iter()
        .map(|f| f.values().iter().fold(T::zero(), |a, v| a + v.re * v.re))
        .fold(T::zero(), |a, b| a + b);
    T::lit(0.5) * sum * fields[0].grid().cell_volume()
}

/// `∫ |∇√ρ|²`.
pub fn sqrt_rho_gradient_sq<T: Real>(state: &FluidState<T>) -> T {
    T::lit(2.0) * half_sq_sum(gradient(&state.sqrt_rho).components())
}

/// `E = ∫ ½|Λ|² + 2κ²|∇√ρ|² + π_ε(ρ)`; the accumulated dissipation is left
/// at zero for the caller to fill in.
pub fn total_energy<T: Real>(state: &FluidState<T>, params: &FluidParams<T>) -> EnergyReport<T> {
    let kinetic = half_sq_sum(state.lambda.components());
    let quantum = T::lit(2.0) * params.kappa * params.kappa * sqrt_rho_gradient_sq(state);
    let internal = integrate(&internal_energy_field(&state.density(), params));
    EnergyReport {
        kinetic,
        quantum,
        internal,
        total: kinetic + quantum + internal,
        dissipation_accumulated: T::zero(),
    }
}

/// `B = ∫ ½|Λ + 2c∇√ρ|² + π_ε(ρ) + κ̃²|∇√ρ|²` for `c ∈ (0, μ)`.
pub fn bd_entropy<T: Real>(state: &FluidState<T>, params: &FluidParams<T>, c: T) -> Result<T> {
    if !(c > T::zero() && c < params.mu()) {
        return invalid(format!("entropy weight c = {c} outside (0, {})", params.mu()));
    }
    let grad = gradient(&state.sqrt_rho);
    let shifted: Vec<ScalarField<T>> = state
        .lambda
        .components()
        .iter()
        .zip(grad.components())
        .map(|(l, g)| l.lincomb(T::one(), g, T::lit(2.0) * c))
        .collect::<Result<_>>()?;
    let drift = half_sq_sum(&shifted);
    let internal = integrate(&internal_energy_field(&state.density(), params));
    let capillary = params.kappa_tilde_sq(c) * T::lit(2.0) * half_sq_sum(grad.components());
    Ok(drift + internal + capillary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{SpectralGrid, VectorField};
    use std::f64::consts::TAU;

    #[test]
    fn internal_energy_values() {
        assert_eq!(internal_energy_density(1.0, 1.7, 0.3), 0.0);
        assert!((internal_energy_density(2.0f64, 2.0, 1.0) - 0.5).abs() < 1e-15);
        assert!((internal_energy_density(0.0f64, 2.0, 1.0) - 0.5).abs() < 1e-15);
        // convexity along a chord
        for &g in &[1.2, 2.0, 2.9] {
            let (a, b) = (0.2, 3.0);
            let mid = internal_energy_density(0.5 * (a + b), g, 0.5);
            assert!(mid <= 0.5 * (internal_energy_density(a, g, 0.5) + internal_energy_density(b, g, 0.5)));
        }
    }

    #[test]
    fn kinetic_only_state() {
        let g = SpectralGrid::<f64>::new(&[16, 16], &[2.0, 2.0]).unwrap();
        let p = FluidParams::new(0.1, 0.5, 0.2, 2.0).unwrap();
        let u = VectorField::from_fn(&g, |x| [(TAU * x[1] / 2.0).sin(), 0.0, 0.0]);
        let s = FluidState::from_density_velocity(&ScalarField::constant(&g, 1.0), &u, 0.0).unwrap();
        let a2 = u.l2_norm().powi(2);
        let e = total_energy(&s, &p);
        assert!((e.total - 0.5 * a2).abs() < 1e-13);
        assert_eq!(total_energy(&FluidState::equilibrium(&g), &p).total, 0.0);
        assert_eq!(bd_entropy(&FluidState::equilibrium(&g), &p, p.default_c()).unwrap(), 0.0);
    }

    #[test]
    fn entropy_weight_range() {
        let g = SpectralGrid::<f64>::new(&[8], &[1.0]).unwrap();
        let p = FluidParams::new(0.1, 1.0, 0.8, 2.0).unwrap();
        let s = FluidState::equilibrium(&g);
        assert!(bd_entropy(&s, &p, 0.0).is_err());
        assert!(bd_entropy(&s, &p, 0.41).is_err());
        assert!(bd_entropy(&s, &p, 0.39).is_ok());
    }

    #[test]
    fn entropy_small_c_limit() {
        let g = SpectralGrid::<f64>::new(&[64], &[1.0]).unwrap();
        let p = FluidParams::new(0.5, 1.0, 0.8, 2.0).unwrap();
        let rho = ScalarField::from_fn(&g, |x| 1.0 + 0.2 * (TAU * x[0]).cos());
        let u = VectorField::from_fn(&g, |x| [(TAU * x[0]).sin(), 0.0, 0.0]);
        let s = FluidState::from_density_velocity(&rho, &u, 0.0).unwrap();
        let e = total_energy(&s, &p);
        let limit = e.kinetic + e.internal + 0.5 * e.quantum;
        let b = bd_entropy(&s, &p, 1e-8).unwrap();
        assert!((b - limit).abs() < 1e-7);
    }
}
