//! Acoustic variables of a fluid state and their symmetrized form.
//!
//! With `σ = (ρ − 1)/ε` and `m = ρu` the momentum equation reads
//! `∂_t m + (1/ε)∇(1 − ε²κ²Δ)σ = F`, where `F` collects everything that is
//! not linear acoustics. The symmetrized variables
//! `σ̃ = (1 − ε²κ²Δ)^{1/2}σ`, `m̃ = (−Δ)^{−1/2} div m` turn the linear part
//! into the rotation `σ̃' = −ωm̃`, `m̃' = ωσ̃` per mode.
//!
//! Nyquist modes have no well-defined real derivative and are dropped by
//! [`symmetrize`], matching the solver's acoustic step.

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::qns::ops::{symmetric_flux_divergence, zip_real};
use crate::qns::{internal_energy_field, viscous_tensor, FluidParams, FluidState};
use crate::scalar::Real;
use crate::spectral::{gradient, ScalarField, Spectrum, SpectralGrid, VectorField};

/// `(σ_ε, m_ε)` on a common grid.
#[derive(Debug, Clone)]
pub struct AcousticState<T: Real> {
    pub sigma: ScalarField<T>,
    pub m: VectorField<T>,
    pub time: T,
}

/// `(σ̃, m̃)`; both are real scalar fields.
#[derive(Debug, Clone)]
pub struct SymmetrizedState<T: Real> {
    pub sigma_tilde: ScalarField<T>,
    pub m_tilde: ScalarField<T>,
    pub time: T,
}

impl<T: Real> AcousticState<T> {
    pub fn new(sigma: ScalarField<T>, m: VectorField<T>, time: T) -> Result<Self> {
        if sigma.grid() != m.grid() {
            return Err(Error::GridMismatch);
        }
        Ok(Self { sigma, m, time })
    }

    pub fn grid(&self) -> &SpectralGrid<T> {
        self.sigma.grid()
    }

    /// `ρ − 1 = εσ`.
    pub fn density_deviation(&self, eps: T) -> ScalarField<T> {
        self.sigma.scale(eps)
    }
}

impl<T: Real> SymmetrizedState<T> {
    pub fn new(sigma_tilde: ScalarField<T>, m_tilde: ScalarField<T>, time: T) -> Result<Self> {
        if sigma_tilde.grid() != m_tilde.grid() {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            sigma_tilde,
            m_tilde,
            time,
        })
    }

    pub fn grid(&self) -> &SpectralGrid<T> {
        self.sigma_tilde.grid()
    }

    /// `‖σ̃‖² + ‖m̃‖²`, conserved by the linear flow.
    pub fn energy(&self) -> T {
        self.sigma_tilde.l2_norm().powi(2) + self.m_tilde.l2_norm().powi(2)
    }

    /// `w = σ̃ + i m̃`, which evolves by `e^{itH_ε}`.
    pub(crate) fn packed(&self) -> ScalarField<T> {
        let values = self
            .sigma_tilde
            .values()
            .iter()
            .zip(self.m_tilde.values())
            .map(|(s, m)| Complex::new(s.re, m.re))
            .collect();
        ScalarField::from_complex(self.grid(), values).expect("same grid")
    }

    pub(crate) fn unpack(w: &ScalarField<T>, time: T) -> Self {
        let grid = w.grid();
        let re = w.values().iter().map(|z| z.re).collect();
        let im = w.values().iter().map(|z| z.im).collect();
        Self {
            sigma_tilde: ScalarField::from_real(grid, re).expect("same grid"),
            m_tilde: ScalarField::from_real(grid, im).expect("same grid"),
            time,
        }
    }
}

pub fn extract_acoustic<T: Real>(fluid: &FluidState<T>, params: &FluidParams<T>) -> AcousticState<T> {
    let eps = params.eps;
    AcousticState {
        sigma: fluid.density().map_real(|r| (r - T::one()) / eps),
        m: fluid.momentum(),
        time: fluid.time,
    }
}

/// `F_ε = div(−Λ⊗Λ − 4κ²∇√ρ⊗∇√ρ + 2ν√ρS − (γ−1)π_ε I)`, without
/// dealiasing. `S` is the symmetric part of the viscous tensor, so
/// `√ρS = ρDu` away from vacuum.
pub fn source_f<T: Real>(fluid: &FluidState<T>, params: &FluidParams<T>) -> VectorField<T> {
    let d = fluid.dim();
    let rho = fluid.density();
    let grad = gradient(&fluid.sqrt_rho);
    let pi = internal_energy_field(&rho, params).scale(params.gamma - T::one());
    let vt = viscous_tensor(fluid, params);
    let two_nu = T::lit(2.0) * params.nu;
    let k4 = T::lit(4.0) * params.kappa * params.kappa;
    let lam = &fluid.lambda;
    let flux: Vec<Vec<ScalarField<T>>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let conv = lam.component(i).mul(lam.component(j)).expect("same grid");
                    let cap = grad.component(i).mul(grad.component(j)).expect("same grid");
                    let visc = zip_real(&fluid.sqrt_rho, &vt.s[i][j], |s, v| two_nu * s * v);
                    let mut f = visc
                        .lincomb(T::one(), &conv, -T::one())
                        .and_then(|f| f.lincomb(T::one(), &cap, -k4))
                        .expect("same grid");
                    if i == j {
                        f = f.sub(&pi).expect("same grid");
                    }
                    f
                })
                .collect()
        })
        .collect();
    symmetric_flux_divergence(&flux, false)
}

fn mean_zero_check<T: Real>(name: &str, f: &ScalarField<T>) -> Result<()> {
    let mean = f.mean().norm();
    // means at the roundoff level are accepted even for fields that vanish
    let tol = (T::lit(1e-9) * f.max_abs()).max(T::lit(64.0) * T::epsilon());
    if mean > tol {
        return invalid(format!("{name} has mean {mean}; symmetrization needs mean-zero data"));
    }
    Ok(())
}

/// `(1 − ε²κ²Δ)^{1/2}` factor at `|ξ| = k`.
fn shape<T: Real>(k: T, params: &FluidParams<T>) -> T {
    let a = params.eps * params.kappa;
    (T::one() + a * a * k * k).sqrt()
}

pub fn symmetrize<T: Real>(ac: &AcousticState<T>, params: &FluidParams<T>) -> Result<SymmetrizedState<T>> {
    mean_zero_check("sigma", &ac.sigma)?;
    for c in ac.m.components() {
        mean_zero_check("momentum", c)?;
    }
    let grid = ac.grid().clone();
    let d = grid.dim();
    let mut s = ac.sigma.spectrum();
    let ms: Vec<Spectrum<T>> = ac.m.components().iter().map(|c| c.spectrum()).collect();
    let zero = Complex::new(T::zero(), T::zero());
    let i = Complex::new(T::zero(), T::one());
    let mut mt = vec![zero; grid.len()];
    {
        let sc = s.coeffs_mut();
        grid.for_each_mode(|n, xi| {
            if n == 0 || grid.is_nyquist_mode(n) {
                sc[n] = zero;
                return;
            }
            let k = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
            sc[n] = sc[n] * shape(k, params);
            let mu = (0..d).fold(zero, |acc, a| acc + ms[a].coeffs()[n] * (xi[a] / k));
            mt[n] = i * mu;
        });
    }
    let mt = Spectrum::new(&grid, mt, true)?;
    SymmetrizedState::new(s.to_field(), mt.to_field(), ac.time)
}

/// Inverse of [`symmetrize`] on its range: returns `(σ, Qm)`.
pub fn desymmetrize<T: Real>(sym: &SymmetrizedState<T>, params: &FluidParams<T>) -> Result<AcousticState<T>> {
    let grid = sym.grid().clone();
    let d = grid.dim();
    let mut s = sym.sigma_tilde.spectrum();
    let mt = sym.m_tilde.spectrum();
    let zero = Complex::new(T::zero(), T::zero());
    let i = Complex::new(T::zero(), T::one());
    let mut comps = vec![vec![zero; grid.len()]; d];
    {
        let sc = s.coeffs_mut();
        grid.for_each_mode(|n, xi| {
            if n == 0 || grid.is_nyquist_mode(n) {
                sc[n] = zero;
                return;
            }
            let k = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
            sc[n] = sc[n] / shape(k, params);
            let mu = -i * mt.coeffs()[n];
            for (a, c) in comps.iter_mut().enumerate() {
                c[n] = mu * (xi[a] / k);
            }
        });
    }
    let m = comps
        .into_iter()
        .map(|c| Spectrum::new(&grid, c, true).map(|sp| sp.to_field()))
        .collect::<Result<Vec<_>>>()?;
    AcousticState::new(s.to_field(), VectorField::new(m)?, sym.time)
}
