//! Fourier multipliers and the differential operators built from them.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::field::{ScalarField, Spectrum, VectorField};

type SymbolFn<'a, T> = Box<dyn Fn([T; 3]) -> Complex<T> + Send + Sync + 'a>;

/// A Fourier multiplier `ξ ↦ m(ξ)` together with its zero-mode rule.
///
/// A symbol that is not finite at `ξ = 0` must declare the value to use
/// there; a non-finite value on any other lattice mode is rejected.
pub struct Multiplier<'a, T: Real> {
    symbol: SymbolFn<'a, T>,
    zero_mode: Option<Complex<T>>,
    hermitian: bool,
}

impl<'a, T: Real> Multiplier<'a, T> {
    /// General complex symbol. Real inputs produce complex outputs unless
    /// [`Multiplier::hermitian`] is declared.
    pub fn new(symbol: impl Fn([T; 3]) -> Complex<T> + Send + Sync + 'a) -> Self {
        Self {
            symbol: Box::new(symbol),
            zero_mode: None,
            hermitian: false,
        }
    }

    /// Real radial symbol `m(|ξ|)`; maps real fields to real fields.
    pub fn radial(symbol: impl Fn(T) -> T + Send + Sync + 'a) -> Self {
        Self::new(move |xi: [T; 3]| Complex::new(symbol(norm3(xi)), T::zero())).hermitian()
    }

    /// Complex radial symbol `m(|ξ|)`.
    pub fn radial_complex(symbol: impl Fn(T) -> Complex<T> + Send + Sync + 'a) -> Self {
        Self::new(move |xi: [T; 3]| symbol(norm3(xi)))
    }

    /// Declares `m(-ξ) = conj(m(ξ))`, so real fields stay real.
    pub fn hermitian(mut self) -> Self {
        self.hermitian = true;
        self
    }

    /// Value used at `ξ = 0` instead of evaluating the symbol.
    pub fn with_zero_mode(mut self, value: Complex<T>) -> Self {
        self.zero_mode = Some(value);
        self
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn eval(&self, xi: [T; 3]) -> Complex<T> {
        (self.symbol)(xi)
    }

    /// Multiplies a spectrum in place.
    pub fn apply_to_spectrum(&self, spectrum: &mut Spectrum<T>) -> Result<()> {
        let grid = spectrum.grid().clone();
        let mut failure = None;
        let coeffs = spectrum.coeffs_mut();
        grid.for_each_mode(|i, xi| {
            if failure.is_some() {
                return;
            }
            let m = if i == 0 {
                match self.zero_mode {
                    Some(z) => z,
                    None => {
                        let m = self.eval(xi);
                        if !is_finite(m) {
                            failure = Some(Error::UndeclaredZeroMode);
                            return;
                        }
                        m
                    }
                }
            } else {
                let m = self.eval(xi);
                if !is_finite(m) {
                    failure = Some(Error::NonFiniteSymbol {
                        index: grid.unflatten(i)[..grid.dim()].to_vec(),
                    });
                    return;
                }
                m
            };
            coeffs[i] = coeffs[i] * m;
        });
        if let Some(e) = failure {
            return Err(e);
        }
        let real = spectrum.is_real() && self.hermitian;
        spectrum.set_real(real);
        Ok(())
    }
}

fn is_finite<T: Real>(c: Complex<T>) -> bool {
    c.re.is_finite() && c.im.is_finite()
}

#[inline]
pub(crate) fn norm3<T: Real>(xi: [T; 3]) -> T {
    (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt()
}

/// Output spectrum equals `m(ξ)` times the input spectrum.
pub fn apply_multiplier<T: Real>(f: &ScalarField<T>, m: &Multiplier<'_, T>) -> Result<ScalarField<T>> {
    let mut s = f.spectrum();
    m.apply_to_spectrum(&mut s)?;
    Ok(s.to_field())
}

/// Applies the same scalar multiplier to every component.
pub fn apply_multiplier_vec<T: Real>(v: &VectorField<T>, m: &Multiplier<'_, T>) -> Result<VectorField<T>> {
    let comps = v
        .components()
        .iter()
        .map(|c| apply_multiplier(c, m))
        .collect::<Result<Vec<_>>>()?;
    VectorField::new(comps)
}

/// `∂f/∂x_axis`.
pub fn partial<T: Real>(f: &ScalarField<T>, axis: usize) -> ScalarField<T> {
    let m = Multiplier::new(move |xi: [T; 3]| Complex::new(T::zero(), xi[axis])).hermitian();
    apply_multiplier(f, &m).expect("derivative symbols are finite")
}

pub fn gradient<T: Real>(f: &ScalarField<T>) -> VectorField<T> {
    let s = f.spectrum();
    let comps = (0..f.grid().dim())
        .map(|a| {
            let mut sa = s.clone();
            Multiplier::new(move |xi: [T; 3]| Complex::new(T::zero(), xi[a]))
                .hermitian()
                .apply_to_spectrum(&mut sa)
                .expect("finite");
            sa.to_field()
        })
        .collect();
    VectorField::new(comps).expect("one component per axis")
}

pub fn divergence<T: Real>(v: &VectorField<T>) -> ScalarField<T> {
    let grid = v.grid().clone();
    let mut acc: Option<Spectrum<T>> = None;
    for (a, c) in v.components().iter().enumerate() {
        let mut s = c.spectrum();
        Multiplier::new(move |xi: [T; 3]| Complex::new(T::zero(), xi[a]))
            .hermitian()
            .apply_to_spectrum(&mut s)
            .expect("finite");
        acc = Some(match acc {
            None => s,
            Some(mut prev) => {
                let real = prev.is_real() && s.is_real();
                prev.coeffs_mut()
                    .iter_mut()
                    .zip(s.coeffs())
                    .for_each(|(p, q)| *p += *q);
                prev.set_real(real);
                prev
            }
        });
    }
    acc.map(|s| s.to_field()).unwrap_or_else(|| ScalarField::zeros(&grid))
}

pub fn laplacian<T: Real>(f: &ScalarField<T>) -> ScalarField<T> {
    let m = Multiplier::radial(|k: T| -k * k);
    apply_multiplier(f, &m).expect("finite")
}

/// Gradient tensor `G[i][j] = ∂_j v_i`.
pub fn jacobian<T: Real>(v: &VectorField<T>) -> Vec<Vec<ScalarField<T>>> {
    v.components()
        .iter()
        .map(|c| gradient(c).into_components())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::SpectralGrid;
    use std::f64::consts::TAU;

    #[test]
    fn identity_symbol() {
        let g = SpectralGrid::<f64>::new(&[32], &[3.0]).unwrap();
        let f = ScalarField::from_fn(&g, |x| (TAU * x[0] / 3.0).sin() + 0.3);
        let out = apply_multiplier(&f, &Multiplier::radial(|_| 1.0)).unwrap();
        assert!(out.max_distance(&f) < 1e-14);
        assert!(out.is_real());
    }

    #[test]
    fn laplacian_eigenfunction() {
        let l = 5.0;
        let g = SpectralGrid::<f64>::new(&[64], &[l]).unwrap();
        let f = ScalarField::from_fn(&g, |x| (TAU * x[0] / l).sin());
        let out = apply_multiplier(&f, &Multiplier::radial(|k| k * k)).unwrap();
        let expect = f.scale((TAU / l).powi(2));
        assert!(out.max_distance(&expect) < 1e-12);
    }

    #[test]
    fn derivative_composition() {
        let g = SpectralGrid::<f64>::new(&[32, 16], &[2.0, 1.0]).unwrap();
        let f = ScalarField::from_fn(&g, |x| (TAU * x[0]).cos() * (TAU * x[1]).sin() + (TAU * x[0] / 2.0).sin());
        let twice = partial(&partial(&f, 0), 0);
        let once = apply_multiplier(&f, &Multiplier::new(|xi: [f64; 3]| Complex::new(-xi[0] * xi[0], 0.0)).hermitian()).unwrap();
        let scale = once.max_abs();
        assert!(twice.max_distance(&once) <= 1e-12 * scale);
    }

    #[test]
    fn zero_mode_rules() {
        let g = SpectralGrid::<f64>::new(&[16], &[1.0]).unwrap();
        let f = ScalarField::from_fn(&g, |x| (TAU * x[0]).sin());
        let inv = Multiplier::radial(|k: f64| 1.0 / k);
        assert!(matches!(apply_multiplier(&f, &inv), Err(Error::UndeclaredZeroMode)));
        let inv = Multiplier::radial(|k: f64| 1.0 / k).with_zero_mode(Complex::new(0.0, 0.0));
        assert!(apply_multiplier(&f, &inv).is_ok());
        let bad = Multiplier::radial(|k: f64| if k > 20.0 { f64::NAN } else { 1.0 });
        assert!(matches!(apply_multiplier(&f, &bad), Err(Error::NonFiniteSymbol { .. })));
    }
}
