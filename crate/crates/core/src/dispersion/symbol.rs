//! The Bogoliubov symbol and its radial phase profile.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::scalar::Real;

/// Scaled Mach number `ε` and capillarity `κ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DispersionParams<T> {
    pub eps: T,
    pub kappa: T,
}

impl<T: Real> DispersionParams<T> {
    pub fn new(eps: T, kappa: T) -> Result<Self> {
        if !(eps > T::zero() && eps.is_finite()) {
            return invalid(format!("eps must be positive and finite, got {eps}"));
        }
        if !(kappa > T::zero() && kappa.is_finite()) {
            return invalid(format!("kappa must be positive and finite, got {kappa}"));
        }
        Ok(Self { eps, kappa })
    }

    /// The unscaled profile `r√(1+κ²r²)`, i.e. `ε = 1`.
    pub fn unscaled(kappa: T) -> Result<Self> {
        Self::new(T::one(), kappa)
    }

    /// `εκ`.
    pub fn a(&self) -> T {
        self.eps * self.kappa
    }

    pub fn profile(&self) -> PhaseProfile<T> {
        PhaseProfile { params: *self }
    }
}

/// `ω(|ξ|) = (1/ε)√(|ξ|² + ε²κ²|ξ|⁴)`.
pub fn omega<T: Real>(xi_norm: T, params: &DispersionParams<T>) -> T {
    params.profile().phi(xi_norm)
}

/// `φ_ε(r) = (r/ε)√(1 + (εκ r)²)` with its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseProfile<T> {
    pub params: DispersionParams<T>,
}

impl<T: Real> PhaseProfile<T> {
    pub fn phi(&self, r: T) -> T {
        let ar = self.params.a() * r;
        r / self.params.eps * (T::one() + ar * ar).sqrt()
    }

    pub fn dphi(&self, r: T) -> T {
        let a2r2 = (self.params.a() * r).powi(2);
        (T::one() + a2r2 + a2r2) / (self.params.eps * (T::one() + a2r2).sqrt())
    }

    pub fn d2phi(&self, r: T) -> T {
        let a = self.params.a();
        let a2r2 = (a * r).powi(2);
        let q = T::one() + a2r2;
        a * a * r * (T::lit(3.0) + a2r2 + a2r2) / (self.params.eps * q * q.sqrt())
    }

    pub fn eval(&self, r: T) -> (T, T, T) {
        (self.phi(r), self.dphi(r), self.d2phi(r))
    }
}

/// `h(r) = (φ'(r)/r)^{d-1} φ''(r)`, the Hessian determinant of `φ(|x|)`.
pub fn hessian_det<T: Real>(r: T, params: &DispersionParams<T>, d: usize) -> Result<T> {
    if !(r > T::zero()) || !r.is_finite() {
        return invalid(format!("hessian_det needs r > 0, got {r}"));
    }
    if !(1..=3).contains(&d) {
        return invalid(format!("dimension must be 1, 2 or 3, got {d}"));
    }
    let p = params.profile();
    Ok((p.dphi(r) / r).powi(d as i32 - 1) * p.d2phi(r))
}

/// `κ^{-d/2} (κλ/√(1+(κλ)²))^{(d-2)/2}`.
pub fn h_bound_envelope(lambda: f64, kappa: f64, d: usize) -> f64 {
    let kl = kappa * lambda;
    kappa.powf(-(d as f64) / 2.0) * (kl / (1.0 + kl * kl).sqrt()).powf((d as f64 - 2.0) / 2.0)
}

/// Empirical constant in the bound `h(λ)^{-1/2} ≤ C·envelope(λ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HBoundReport {
    pub dim: usize,
    pub kappa: f64,
    /// `max h^{-1/2}/envelope` over the grid.
    pub max_ratio: f64,
    /// `λ` attaining `max_ratio`.
    pub witness: f64,
    /// Same maximum on the grid with midpoints inserted.
    pub refined_max_ratio: f64,
    pub relative_change: f64,
    pub finite: bool,
    pub stable: bool,
    pub min_h_inv_sqrt: f64,
    pub max_h_inv_sqrt: f64,
}

fn ratio_scan(grid: &[f64], kappa: f64, d: usize) -> Result<(f64, f64, f64, f64)> {
    let params = DispersionParams::unscaled(kappa)?;
    let mut best = (f64::NEG_INFINITY, f64::NAN);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &lambda in grid {
        let hs = hessian_det(lambda, &params, d)?.powf(-0.5);
        lo = lo.min(hs);
        hi = hi.max(hs);
        let ratio = hs / h_bound_envelope(lambda, kappa, d);
        if ratio > best.0 || best.1.is_nan() {
            best = (ratio, lambda);
        }
    }
    Ok((best.0, best.1, lo, hi))
}

/// Scans `h(λ)^{-1/2}` against its envelope, then repeats on the grid
/// refined by geometric midpoints; `stable` means the maximum moved by
/// less than 5%.
pub fn h_bound_check(lambda_grid: &[f64], kappa: f64, d: usize) -> Result<HBoundReport> {
    if lambda_grid.is_empty() {
        return invalid("h_bound_check needs a non-empty grid");
    }
    if d < 2 {
        return invalid("h_bound_check needs d >= 2");
    }
    let (max_ratio, witness, min_h, max_h) = ratio_scan(lambda_grid, kappa, d)?;
    let mut refined = Vec::with_capacity(2 * lambda_grid.len());
    for w in lambda_grid.windows(2) {
        refined.push(w[0]);
        refined.push((w[0] * w[1]).sqrt());
    }
    refined.push(lambda_grid[lambda_grid.len() - 1]);
    let (refined_max_ratio, ..) = ratio_scan(&refined, kappa, d)?;
    let relative_change = (refined_max_ratio - max_ratio).abs() / max_ratio.abs();
    Ok(HBoundReport {
        dim: d,
        kappa,
        max_ratio,
        witness,
        refined_max_ratio,
        relative_change,
        finite: max_ratio.is_finite() && refined_max_ratio.is_finite(),
        stable: relative_change < 0.05,
        min_h_inv_sqrt: min_h,
        max_h_inv_sqrt: max_h,
    })
}
