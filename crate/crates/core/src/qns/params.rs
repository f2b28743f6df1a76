use serde::{Deserialize, Serialize};

use crate::dispersion::DispersionParams;
use crate::error::{invalid, Result};
use crate::scalar::Real;

/// Physical and numerical parameters of the scaled system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluidParams<T> {
    pub eps: T,
    pub nu: T,
    pub kappa: T,
    pub gamma: T,
    /// Strength of the vacuum regularization of the viscosity.
    pub delta_reg: T,
    /// `u` is reconstructed only where `√ρ ≥ rho_floor`.
    pub rho_floor: T,
}

impl<T: Real> FluidParams<T> {
    pub fn new(eps: T, nu: T, kappa: T, gamma: T) -> Result<Self> {
        let p = Self {
            eps,
            nu,
            kappa,
            gamma,
            delta_reg: T::zero(),
            rho_floor: T::lit(1e-6),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_regularization(mut self, delta: T) -> Result<Self> {
        self.delta_reg = delta;
        self.validate()?;
        Ok(self)
    }

    pub fn with_floor(mut self, floor: T) -> Result<Self> {
        self.rho_floor = floor;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: T| v.is_finite() && v > T::zero();
        if !ok(self.eps) || !ok(self.nu) || !ok(self.kappa) || !ok(self.rho_floor) {
            return invalid("eps, nu, kappa and rho_floor must be positive and finite");
        }
        if self.nu <= self.kappa {
            return invalid(format!("need nu > kappa, got nu = {}, kappa = {}", self.nu, self.kappa));
        }
        if !(self.gamma > T::one() && self.gamma < T::lit(3.0)) {
            return invalid(format!("gamma = {} outside (1, 3)", self.gamma));
        }
        if !(self.delta_reg >= T::zero()) || !self.delta_reg.is_finite() {
            return invalid("delta_reg must be nonnegative");
        }
        Ok(())
    }

    /// `μ = ν − √(ν² − κ²)`, the upper end of the admissible entropy weights.
    pub fn mu(&self) -> T {
        self.nu - (self.nu * self.nu - self.kappa * self.kappa).sqrt()
    }

    /// `κ̃² = κ² − 2νc + c²`.
    pub fn kappa_tilde_sq(&self, c: T) -> T {
        self.kappa * self.kappa - T::lit(2.0) * self.nu * c + c * c
    }

    /// Midpoint of `(0, μ)`, the default entropy weight.
    pub fn default_c(&self) -> T {
        self.mu() / T::lit(2.0)
    }

    /// Bogoliubov parameters of the linearized system.
    pub fn dispersion(&self) -> DispersionParams<T> {
        DispersionParams {
            eps: self.eps,
            kappa: self.kappa,
        }
    }
}
