//! Consistency of the nonlinear right-hand side with the acoustic system.
//!
//! For data `ρ = 1 + εaσ₀`, `m = a m₀` the QNS right-hand side equals the
//! linear acoustic operator plus the linear viscous term
//! `2ν div D(a m₀)` up to `O(a²)`.

use crate::error::{invalid, Result};
use crate::fit::log_log_fit;
use crate::qns::{acoustic_operator, qns_rhs, FluidParams, FluidState};
use crate::spectral::multiplier::jacobian;
use crate::spectral::{ScalarField, VectorField};

/// `L²` norm of `rhs(ρ, m) − linear(σ, m)` at amplitude `a`.
pub fn linearization_defect(sigma0: &ScalarField<f64>, m0: &VectorField<f64>, amplitude: f64, params: &FluidParams<f64>) -> Result<f64> {
    if params.delta_reg != 0.0 {
        return invalid("linearization check expects the unregularized viscosity");
    }
    let eps = params.eps;
    let sigma = sigma0.scale(amplitude);
    let m = m0.scale(amplitude);
    let rho = sigma.map_real(|s| 1.0 + eps * s);
    let state = FluidState::from_conservative(&rho, &m, params.rho_floor, 0.0);
    let rhs = qns_rhs(&state, params)?;
    let (dsigma, dm) = acoustic_operator(&sigma, &m, params)?;
    let jac = jacobian(&m);
    let d = m.dim();
    let visc = VectorField::new(
        (0..d)
            .map(|i| {
                (0..d).fold(ScalarField::zeros(m.grid()), |acc, j| {
                    let dj = crate::spectral::partial(&jac[i][j].add(&jac[j][i]).expect("same grid"), j);
                    acc.add(&dj).expect("same grid")
                })
            })
            .collect(),
    )?
    .scale(params.nu);
    let lin_m = dm.add(&visc)?;
    let r_rho = rhs.drho.sub(&dsigma.scale(eps))?.l2_norm();
    let r_m = rhs.dm.sub(&lin_m)?.l2_norm();
    Ok((r_rho * r_rho + r_m * r_m).sqrt())
}

/// Log-log slope of the defect against the amplitude.
pub fn linearization_order(sigma0: &ScalarField<f64>, m0: &VectorField<f64>, amplitudes: &[f64], params: &FluidParams<f64>) -> Result<f64> {
    if amplitudes.len() < 2 {
        return invalid("need at least two amplitudes");
    }
    let defects = amplitudes
        .iter()
        .map(|&a| linearization_defect(sigma0, m0, a, params))
        .collect::<Result<Vec<_>>>()?;
    Ok(log_log_fit(amplitudes, &defects)?.slope)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::SpectralGrid;
    use std::f64::consts::TAU;

    #[test]
    fn defect_is_quadratic() {
        let g = SpectralGrid::<f64>::new(&[32, 32], &[TAU, TAU]).unwrap();
        let p = FluidParams::new(0.3, 0.5, 0.2, 2.0).unwrap();
        let sigma = ScalarField::from_fn(&g, |x| x[0].sin() * (2.0 * x[1]).cos());
        let m = VectorField::from_fn(&g, |x| [(x[1]).cos() + 0.5 * (x[0] + x[1]).sin(), (2.0 * x[0]).sin(), 0.0]);
        let order = linearization_order(&sigma, &m, &[1e-2, 5e-3, 2.5e-3, 1.25e-3], &p).unwrap();
        assert!(order > 1.9, "order {order}");
    }
}
