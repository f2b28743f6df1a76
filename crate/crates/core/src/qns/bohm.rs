//! Three algebraically equivalent forms of the quantum (Bohm) force, each
//! scaled by `κ²`:
//!
//! * (A) `2ρ∇(Δ√ρ/√ρ)`;
//! * (B) `div(ρ∇²log ρ)`;
//! * (C) `∇Δρ − 4 div(∇√ρ ⊗ ∇√ρ)`, the conservative form used by the solver.

use crate::error::{invalid, Result};
use crate::scalar::Real;
use crate::spectral::multiplier::jacobian;
use crate::spectral::{gradient, laplacian, ScalarField, VectorField};

use super::ops::{symmetric_flux_divergence, zip_real};

#[derive(Debug, Clone)]
pub struct BohmForms<T: Real> {
    pub a: VectorField<T>,
    pub b: VectorField<T>,
    pub c: VectorField<T>,
}

impl<T: Real> BohmForms<T> {
    /// Largest pairwise L² distance relative to the L² size of form (C).
    pub fn max_relative_gap(&self) -> T {
        let scale = self.c.l2_norm().max(T::min_positive_value());
        let d = |x: &VectorField<T>, y: &VectorField<T>| x.sub(y).expect("same grid").l2_norm();
        d(&self.a, &self.b).max(d(&self.a, &self.c)).max(d(&self.b, &self.c)) / scale
    }
}

pub fn bohm_forms<T: Real>(rho: &ScalarField<T>, kappa: T, floor: T) -> Result<BohmForms<T>> {
    let min = rho.min_real();
    if !(min >= floor) {
        return invalid(format!("density minimum {min} below the floor {floor}"));
    }
    let k2 = kappa * kappa;
    let sr = rho.map_real(|r| r.sqrt());

    let quotient = zip_real(&laplacian(&sr), &sr, |l, s| l / s);
    let two_rho = rho.scale(T::lit(2.0));
    let a = gradient(&quotient).mul_scalar(&two_rho)?.scale(k2);

    let hess = jacobian(&gradient(&rho.map_real(|r| r.ln())));
    let weighted: Vec<Vec<ScalarField<T>>> = hess
        .iter()
        .map(|row| row.iter().map(|h| h.mul(rho).expect("same grid")).collect())
        .collect();
    let b = symmetric_flux_divergence(&weighted, false).scale(k2);

    let grad_sr = gradient(&sr);
    let d = rho.grid().dim();
    let outer: Vec<Vec<ScalarField<T>>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| grad_sr.component(i).mul(grad_sr.component(j)).expect("same grid"))
                .collect()
        })
        .collect();
    let c = gradient(&laplacian(rho))
        .lincomb(T::one(), &symmetric_flux_divergence(&outer, false), T::lit(-4.0))?
        .scale(k2);
    Ok(BohmForms { a, b, c })
}
