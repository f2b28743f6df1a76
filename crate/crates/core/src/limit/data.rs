//! Initial data families for the ε-sweeps.
//!
//! Both families are built from one smooth bump
//! `g(x) = exp(−|x − c|²/(2w²))` centred in the box:
//!
//! * ill-prepared: `ρ₀ = 1 + εa(g − ⟨g⟩)`, `u₀ = a(∇^⊥(wg) − ∇(wg))`, so the
//!   density fluctuation is `O(ε)` and both Helmholtz parts of `u₀` are
//!   `O(1)`. The gradient part points away from the density excess, which
//!   makes the acoustic pulse leave the centre without first refocusing;
//! * well-prepared: `ρ₀ = 1 + ε²a(g − ⟨g⟩)` and `u₀ = a∇^⊥(wg)`, the
//!   solenoidal part alone.
//!
//! `∇^⊥ψ = (∂₂ψ, −∂₁ψ, 0)` and is taken spectrally, so `P u₀` is exactly
//! the solenoidal part on the grid. In 1D there is no solenoidal part.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::qns::{internal_energy_field, total_energy, EnergyReport, FluidParams, FluidState};
use crate::scalar::Real;
use crate::spectral::{gradient, helmholtz_p, partial, ScalarField, SpectralGrid, VectorField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataKind {
    WellPrepared,
    IllPrepared,
}

/// Bump profile shared by every member of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DataProfile {
    pub width: f64,
}

impl Default for DataProfile {
    fn default() -> Self {
        Self { width: 1.0 }
    }
}

/// Initial state with the quantities the sweep bounds are stated in.
#[derive(Debug, Clone)]
pub struct GeneratedData<T: Real> {
    pub state: FluidState<T>,
    /// `P u₀`, the datum of the incompressible limit.
    pub limit_velocity: VectorField<T>,
    pub energy: EnergyReport<T>,
    /// `‖ρ₀ − 1‖_{L²}`.
    pub density_deviation: T,
    /// `‖∇√ρ₀‖_{L²}`.
    pub grad_sqrt_rho: T,
    /// `‖π_ε(ρ₀)‖_{L¹}`.
    pub internal_l1: T,
}

fn bump<T: Real>(grid: &SpectralGrid<T>, width: T) -> ScalarField<T> {
    let d = grid.dim();
    let centre: Vec<T> = (0..d).map(|a| grid.lengths()[a] / T::lit(2.0)).collect();
    let two_w2 = T::lit(2.0) * width * width;
    ScalarField::from_fn(grid, |x| {
        let r2 = (0..d).fold(T::zero(), |acc, a| acc + (x[a] - centre[a]) * (x[a] - centre[a]));
        (-r2 / two_w2).exp()
    })
}

fn perp_gradient<T: Real>(psi: &ScalarField<T>) -> VectorField<T> {
    let grid = psi.grid();
    let d = grid.dim();
    if d == 1 {
        return VectorField::zeros(grid);
    }
    let mut comps = vec![partial(psi, 1), partial(psi, 0).scale(-T::one())];
    if d == 3 {
        comps.push(ScalarField::zeros(grid));
    }
    VectorField::new(comps).expect("one component per axis")
}

pub fn make_data<T: Real>(
    kind: DataKind,
    amplitude: T,
    params: &FluidParams<T>,
    grid: &SpectralGrid<T>,
    profile: &DataProfile,
) -> Result<GeneratedData<T>> {
    let width = T::lit(profile.width);
    if !(width > T::zero()) {
        return invalid("profile width must be positive");
    }
    let eps = params.eps;
    let g = bump(grid, width);
    let mean = g.mean().re;
    let shape = g.map_real(|v| v - mean);
    let psi = g.scale(width * amplitude);
    let solenoidal = perp_gradient(&psi);
    let (scale, u) = match kind {
        DataKind::IllPrepared => (eps * amplitude, solenoidal.add(&gradient(&psi).scale(-T::one()))?),
        DataKind::WellPrepared => (eps * eps * amplitude, solenoidal.clone()),
    };
    let rho = shape.map_real(|v| T::one() + scale * v);
    if !(rho.min_real() > T::zero()) {
        return invalid(format!("density minimum {} is not positive", rho.min_real()));
    }
    let state = FluidState::from_density_velocity(&rho, &u, T::zero())?;
    let limit_velocity = helmholtz_p(&u)?;
    let vol = grid.cell_volume();
    let internal_l1 = internal_energy_field(&rho, params)
        .values()
        .iter()
        .fold(T::zero(), |a, v| a + v.re.abs())
        * vol;
    Ok(GeneratedData {
        energy: total_energy(&state, params),
        density_deviation: rho.map_real(|r| r - T::one()).l2_norm(),
        grad_sqrt_rho: gradient(&state.sqrt_rho).l2_norm(),
        internal_l1,
        limit_velocity,
        state,
    })
}
