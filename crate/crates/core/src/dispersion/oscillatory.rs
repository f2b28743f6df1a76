//! Direct quadrature of the frequency-localized oscillatory integral
//!
//! `I(t, x, R) = ∫ e^{ix·ξ + itφ_ε(|ξ|)} β(|ξ|/R) dξ`
//!
//! reduced to a radial integral over `[R/2, 2R]` against the exact angular
//! kernel: `2cos(r|x|)` for d = 1, `2π J₀(r|x|) r` for d = 2 and
//! `4π sinc(r|x|) r²` for d = 3.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dispersion::quadrature::Adaptive;
use crate::dispersion::symbol::DispersionParams;
use crate::error::{invalid, Result};
use crate::spectral::littlewood_paley::dyadic_bump;

/// Angular kernel of the radial reduction in dimension `d`.
pub fn radial_kernel(d: usize, r: f64, x_norm: f64) -> f64 {
    let z = r * x_norm;
    match d {
        1 => 2.0 * z.cos(),
        2 => 2.0 * PI * libm::j0(z) * r,
        _ => {
            let sinc = if z.abs() < 1e-4 { 1.0 - z * z / 6.0 } else { z.sin() / z };
            4.0 * PI * sinc * r * r
        }
    }
}

/// Oscillatory-integral evaluator with an absolute tolerance.
#[derive(Debug, Clone, Copy)]
pub struct OscillatoryOracle {
    pub tol: f64,
}

impl Default for OscillatoryOracle {
    fn default() -> Self {
        Self { tol: 1e-9 }
    }
}

impl OscillatoryOracle {
    pub fn eval(&self, t: f64, x: &[f64], radius: f64, params: &DispersionParams<f64>, d: usize) -> Result<Complex64> {
        if !(1..=3).contains(&d) || x.len() != d {
            return invalid(format!("need d in 1..=3 and a point of length d, got d={d}, |x|={}", x.len()));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return invalid(format!("shell radius must be positive, got {radius}"));
        }
        let xn = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let prof = params.profile();
        let (a, b) = (0.5 * radius, 2.0 * radius);
        let phase_span = t.abs() * (prof.phi(b) - prof.phi(a)) + xn * (b - a);
        let panels = 8 + (phase_span / PI).ceil() as usize;
        let integrand = |r: f64| {
            let w = dyadic_bump(r / radius) * radial_kernel(d, r, xn);
            Complex64::from_polar(w, t * prof.phi(r))
        };
        let q = Adaptive { tol: self.tol, ..Default::default() };
        Ok(q.integrate(integrand, a, b, panels)?.0)
    }
}

/// `I_{φ_ε}(t, x, R)` to absolute tolerance `1e-9`.
pub fn oscillatory_integral_oracle(
    t: f64,
    x: &[f64],
    radius: f64,
    params: &DispersionParams<f64>,
    d: usize,
) -> Result<Complex64> {
    OscillatoryOracle::default().eval(t, x, radius, params, d)
}

/// Right-hand side of the rescaling identity:
/// `ε^{-d} I_φ(t/ε², x/ε, εR)` with the unscaled profile `φ(r) = r√(1+κ²r²)`.
pub fn rescaled_oscillatory_integral(
    oracle: &OscillatoryOracle,
    t: f64,
    x: &[f64],
    radius: f64,
    params: &DispersionParams<f64>,
    d: usize,
) -> Result<Complex64> {
    let eps = params.eps;
    let unscaled = DispersionParams::unscaled(params.kappa)?;
    let xs: Vec<f64> = x.iter().map(|v| v / eps).collect();
    Ok(oracle.eval(t / (eps * eps), &xs, eps * radius, &unscaled, d)? * eps.powi(-(d as i32)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_dilation_at_origin() {
        let p = DispersionParams::new(0.5, 1.0).unwrap();
        for d in 1..=3 {
            let x = vec![0.0; d];
            let i1 = oscillatory_integral_oracle(0.0, &x, 1.0, &p, d).unwrap();
            let i4 = oscillatory_integral_oracle(0.0, &x, 4.0, &p, d).unwrap();
            assert!(i1.im.abs() < 1e-12);
            assert!((i4.re - 4f64.powi(d as i32) * i1.re).abs() < 1e-8, "d={d}");
        }
    }

    #[test]
    fn one_dimensional_volume() {
        // ∫β(|ξ|)dξ over ℝ: ψ(r) − ψ(2r) integrates to 2∫ψ − ∫ψ = ∫₀^∞ψ = 3/2.
        let p = DispersionParams::new(1.0, 1.0).unwrap();
        let v = oscillatory_integral_oracle(0.0, &[0.0], 1.0, &p, 1).unwrap();
        assert!((v.re - 1.5).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_input() {
        let p = DispersionParams::new(1.0, 1.0).unwrap();
        assert!(oscillatory_integral_oracle(1.0, &[0.0, 0.0], 1.0, &p, 3).is_err());
        assert!(oscillatory_integral_oracle(1.0, &[0.0], -1.0, &p, 1).is_err());
    }

    #[test]
    fn kernel_small_argument() {
        assert!((radial_kernel(3, 2.0, 0.0) - 16.0 * PI).abs() < 1e-12);
        assert!((radial_kernel(2, 2.0, 0.0) - 4.0 * PI).abs() < 1e-12);
    }
}
