use crate::error::{invalid, Result};
use crate::scalar::Real;
use crate::spectral::{ScalarField, SpectralGrid, VectorField};

use super::ops::{integrate, zip_real};

/// Fluid state in the variables `(√ρ, Λ = √ρ u)`.
#[derive(Debug, Clone)]
pub struct FluidState<T: Real> {
    pub sqrt_rho: ScalarField<T>,
    pub lambda: VectorField<T>,
    pub time: T,
}

impl<T: Real> FluidState<T> {
    pub fn new(sqrt_rho: ScalarField<T>, lambda: VectorField<T>, time: T) -> Result<Self> {
        if sqrt_rho.grid() != lambda.grid() {
            return invalid("sqrt_rho and lambda live on different grids");
        }
        if sqrt_rho.values().iter().any(|v| !(v.re >= T::zero())) {
            return invalid("sqrt_rho must be nonnegative");
        }
        Ok(Self {
            sqrt_rho: sqrt_rho.into_real(),
            lambda,
            time,
        })
    }

    /// `ρ ≡ 1`, `u ≡ 0`.
    pub fn equilibrium(grid: &SpectralGrid<T>) -> Self {
        Self {
            sqrt_rho: ScalarField::constant(grid, T::one()),
            lambda: VectorField::zeros(grid),
            time: T::zero(),
        }
    }

    /// Builds the state from density and velocity samples.
    pub fn from_density_velocity(rho: &ScalarField<T>, u: &VectorField<T>, time: T) -> Result<Self> {
        if rho.values().iter().any(|v| !(v.re >= T::zero())) {
            return invalid("density must be nonnegative");
        }
        let sqrt_rho = rho.map_real(|r| r.sqrt());
        let lambda = u.mul_scalar(&sqrt_rho)?;
        Self::new(sqrt_rho, lambda, time)
    }

    /// Builds the state from the conservative variables `(ρ, m)`. Negative
    /// density is clipped to vacuum and `Λ` vanishes where `√ρ < floor`.
    pub fn from_conservative(rho: &ScalarField<T>, m: &VectorField<T>, floor: T, time: T) -> Self {
        let sqrt_rho = rho.map_real(|r| r.max(T::zero()).sqrt());
        let comps = m
            .components()
            .iter()
            .map(|c| zip_real(c, &sqrt_rho, |mi, s| if s >= floor { mi / s } else { T::zero() }))
            .collect();
        Self {
            sqrt_rho,
            lambda: VectorField::new(comps).expect("same grid"),
            time,
        }
    }

    pub fn grid(&self) -> &SpectralGrid<T> {
        self.sqrt_rho.grid()
    }

    pub fn dim(&self) -> usize {
        self.grid().dim()
    }

    /// `ρ = (√ρ)²`.
    pub fn density(&self) -> ScalarField<T> {
        self.sqrt_rho.map_real(|s| s * s)
    }

    /// `m = √ρ Λ`.
    pub fn momentum(&self) -> VectorField<T> {
        self.lambda.mul_scalar(&self.sqrt_rho).expect("same grid")
    }

    /// `u = Λ/√ρ` where `√ρ ≥ floor`, zero elsewhere.
    pub fn velocity(&self, floor: T) -> VectorField<T> {
        let comps = self
            .lambda
            .components()
            .iter()
            .map(|c| zip_real(c, &self.sqrt_rho, |l, s| if s >= floor { l / s } else { T::zero() }))
            .collect();
        VectorField::new(comps).expect("same grid")
    }

    pub fn mass(&self) -> T {
        integrate(&self.density())
    }

    pub fn min_sqrt_rho(&self) -> T {
        self.sqrt_rho.min_real()
    }
}
