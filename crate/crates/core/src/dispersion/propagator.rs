//! The unitary group `e^{itH_ε}`, the regularizing multiplier `U_ε^α` and
//! an exponential-integrator Duhamel step.

use num_complex::Complex;

use crate::dispersion::symbol::{omega, DispersionParams};
use crate::error::{invalid, Result};
use crate::scalar::Real;
use crate::spectral::field::{ScalarField, Spectrum};
use crate::spectral::multiplier::{apply_multiplier, Multiplier};

/// Multiplies a spectrum by `e^{itω(|ξ|)}` in place.
pub fn propagate_spectrum<T: Real>(spec: &mut Spectrum<T>, t: T, params: &DispersionParams<T>) {
    let grid = spec.grid().clone();
    let coeffs = spec.coeffs_mut();
    grid.for_each_mode(|i, xi| {
        let k = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
        coeffs[i] = coeffs[i] * Complex::from_polar(T::one(), t * omega(k, params));
    });
    spec.set_real(false);
}

/// `e^{itH_ε} f`.
pub fn propagate<T: Real>(f: &ScalarField<T>, t: T, params: &DispersionParams<T>) -> ScalarField<T> {
    let mut s = f.spectrum();
    propagate_spectrum(&mut s, t, params);
    s.to_field()
}

/// `m(r) = εκr/√(1+(εκr)²)` evaluated at `r = |ξ|`.
pub fn u_eps_symbol<T: Real>(xi_norm: T, params: &DispersionParams<T>) -> T {
    let ar = params.a() * xi_norm;
    ar / (T::one() + ar * ar).sqrt()
}

/// `U_ε^α f`, the multiplier `m(ε|ξ|)^α`.
pub fn u_eps_power<T: Real>(f: &ScalarField<T>, alpha: T, params: &DispersionParams<T>) -> Result<ScalarField<T>> {
    if !(alpha >= T::zero()) {
        return invalid(format!("alpha must be nonnegative, got {alpha}"));
    }
    let p = *params;
    let m = Multiplier::radial(move |k: T| u_eps_symbol(k, &p).powf(alpha));
    apply_multiplier(f, &m)
}

/// `φ₁(z) = (e^z − 1)/z` and `φ₂(z) = (e^z − 1 − z)/z²`.
pub fn phi_functions<T: Real>(z: Complex<T>) -> (Complex<T>, Complex<T>) {
    if z.norm() < T::lit(0.25) {
        // Taylor series; 16 terms reach roundoff for |z| < 1/4.
        let mut term = Complex::new(T::one(), T::zero());
        let mut p1 = Complex::new(T::zero(), T::zero());
        let mut p2 = Complex::new(T::zero(), T::zero());
        let mut fact = T::one();
        for k in 0..18 {
            let kf = T::lit(k as f64);
            fact = fact * (kf + T::one());
            p1 = p1 + term / fact;
            p2 = p2 + term / (fact * (kf + T::lit(2.0)));
            term = term * z;
        }
        (p1, p2)
    } else {
        let e = z.exp();
        let one = Complex::new(T::one(), T::zero());
        ((e - one) / z, (e - one - z) / (z * z))
    }
}

/// One step of `∂_t u = i·sign·ω(|ξ|)·u + F(t)` over `[t_n, t_n + h]`, in
/// spectral space, with `F` linear between `f0` and `f1`. Exact for
/// sources that are affine in time.
pub fn duhamel_step<T: Real>(
    u: &mut Spectrum<T>,
    f0: &Spectrum<T>,
    f1: &Spectrum<T>,
    h: T,
    sign: T,
    params: &DispersionParams<T>,
) -> Result<()> {
    if u.grid() != f0.grid() || u.grid() != f1.grid() {
        return Err(crate::error::Error::GridMismatch);
    }
    let grid = u.grid().clone();
    let (a, b) = (f0.coeffs(), f1.coeffs());
    let c = u.coeffs_mut();
    grid.for_each_mode(|i, xi| {
        let k = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
        let z = Complex::new(T::zero(), sign * omega(k, params) * h);
        let (p1, p2) = phi_functions(z);
        c[i] = z.exp() * c[i] + (a[i] * (p1 - p2) + b[i] * p2) * h;
    });
    u.set_real(false);
    Ok(())
}

/// Mild solution of `∂_t u = iH_ε u + F`, `u(t_0) = u0`, sampled at the
/// source's time grid.
pub fn duhamel<T: Real>(
    u0: &ScalarField<T>,
    times: &[T],
    source: &[ScalarField<T>],
    params: &DispersionParams<T>,
) -> Result<Vec<ScalarField<T>>> {
    if times.len() != source.len() || times.is_empty() {
        return invalid("source samples must match the time grid");
    }
    let mut u = u0.spectrum();
    let mut out = vec![u.to_field()];
    let mut prev = source[0].spectrum();
    for n in 1..times.len() {
        let next = source[n].spectrum();
        duhamel_step(&mut u, &prev, &next, times[n] - times[n - 1], T::one(), params)?;
        out.push(u.to_field());
        prev = next;
    }
    Ok(out)
}
