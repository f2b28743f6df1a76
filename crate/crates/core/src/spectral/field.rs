use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::grid::SpectralGrid;

/// Samples of a scalar function at the grid nodes.
///
/// Values are stored as complex numbers; `real` flags fields whose imaginary
/// part is identically zero (and whose spectra are conjugate-symmetric).
#[derive(Clone, Debug)]
pub struct ScalarField<T: Real> {
    grid: SpectralGrid<T>,
    values: Vec<Complex<T>>,
    real: bool,
}

/// Forward transform of a [`ScalarField`]: `F_k = Σ_x f(x) e^{-iξ·x}`.
#[derive(Clone, Debug)]
pub struct Spectrum<T: Real> {
    grid: SpectralGrid<T>,
    coeffs: Vec<Complex<T>>,
    real: bool,
}

impl<T: Real> ScalarField<T> {
    pub fn zeros(grid: &SpectralGrid<T>) -> Self {
        Self::constant(grid, T::zero())
    }

    pub fn constant(grid: &SpectralGrid<T>, value: T) -> Self {
        Self {
            grid: grid.clone(),
            values: vec![Complex::new(value, T::zero()); grid.len()],
            real: true,
        }
    }

    pub fn from_real(grid: &SpectralGrid<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid: grid.clone(),
            values: values.into_iter().map(|v| Complex::new(v, T::zero())).collect(),
            real: true,
        })
    }

    pub fn from_complex(grid: &SpectralGrid<T>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid: grid.clone(),
            values,
            real: false,
        })
    }

    /// Samples `f` at every node.
    pub fn from_fn(grid: &SpectralGrid<T>, f: impl Fn([T; 3]) -> T) -> Self {
        let values = (0..grid.len())
            .map(|i| Complex::new(f(grid.position(i)), T::zero()))
            .collect();
        Self {
            grid: grid.clone(),
            values,
            real: true,
        }
    }

    pub fn grid(&self) -> &SpectralGrid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.values
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    /// Real parts of the samples.
    pub fn real_values(&self) -> Vec<T> {
        self.values.iter().map(|c| c.re).collect()
    }

    /// Drops any imaginary part and flags the field real.
    pub fn into_real(mut self) -> Self {
        self.values.iter_mut().for_each(|c| c.im = T::zero());
        self.real = true;
        self
    }

    pub fn spectrum(&self) -> Spectrum<T> {
        let mut coeffs = self.values.clone();
        self.grid.forward(&mut coeffs);
        Spectrum {
            grid: self.grid.clone(),
            coeffs,
            real: self.real,
        }
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
            real: false,
        }
    }

    /// Pointwise map of a real field.
    pub fn map_real(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .map(|v| Complex::new(f(v.re), T::zero()))
                .collect(),
            real: true,
        }
    }

    fn check_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    /// `a·self + b·other`.
    pub fn lincomb(&self, a: T, other: &Self, b: T) -> Result<Self> {
        self.check_grid(other)?;
        Ok(Self {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&x, &y)| x * a + y * b)
                .collect(),
            real: self.real && other.real,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.lincomb(T::one(), other, T::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.lincomb(T::one(), other, -T::one())
    }

    pub fn scale(&self, a: T) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&x| x * a).collect(),
            real: self.real,
        }
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_grid(other)?;
        Ok(Self {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(&x, &y)| x * y).collect(),
            real: self.real && other.real,
        })
    }

    /// `∫ f dx` by the (spectrally accurate) rectangle rule.
    pub fn integral(&self) -> Complex<T> {
        let sum = self
            .values
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &v| acc + v);
        sum * self.grid.cell_volume()
    }

    pub fn mean(&self) -> Complex<T> {
        self.integral() / self.grid.volume()
    }

    pub fn l2_norm(&self) -> T {
        let s = self.values.iter().fold(T::zero(), |acc, v| acc + v.norm_sqr());
        (s * self.grid.cell_volume()).sqrt()
    }

    /// `‖f‖_{L^q}` for `q ≥ 1`; `q = ∞` gives the grid maximum.
    pub fn lq_norm(&self, q: T) -> T {
        if q.is_infinite() {
            return self.max_abs();
        }
        let s = self.values.iter().fold(T::zero(), |acc, v| acc + v.norm().powf(q));
        (s * self.grid.cell_volume()).powf(T::one() / q)
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, v| acc.max(v.norm()))
    }

    pub fn min_real(&self) -> T {
        self.values.iter().fold(T::infinity(), |acc, v| acc.min(v.re))
    }

    pub fn max_real(&self) -> T {
        self.values.iter().fold(T::neg_infinity(), |acc, v| acc.max(v.re))
    }

    /// Max-norm distance between two fields.
    pub fn max_distance(&self, other: &Self) -> T {
        self.values
            .iter()
            .zip(&other.values)
            .fold(T::zero(), |acc, (a, b)| acc.max((a - b).norm()))
    }
}

impl<T: Real> Spectrum<T> {
    pub fn new(grid: &SpectralGrid<T>, coeffs: Vec<Complex<T>>, real: bool) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid: grid.clone(),
            coeffs,
            real,
        })
    }

    pub fn grid(&self) -> &SpectralGrid<T> {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.coeffs
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn set_real(&mut self, real: bool) {
        self.real = real;
    }

    /// Inverse transform. Real-flagged spectra produce real fields.
    pub fn to_field(&self) -> ScalarField<T> {
        let mut values = self.coeffs.clone();
        self.grid.inverse(&mut values);
        if self.real {
            values.iter_mut().for_each(|c| c.im = T::zero());
        }
        ScalarField {
            grid: self.grid.clone(),
            values,
            real: self.real,
        }
    }

    /// Plancherel: `∫|f|² = (V/N²) Σ |F_k|²`.
    pub fn l2_norm(&self) -> T {
        let n = T::lit(self.grid.len() as f64);
        let s = self.coeffs.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr());
        (s * self.grid.volume() / (n * n)).sqrt()
    }

    /// Largest violation of `F_{-k} = conj(F_k)`, relative to the largest
    /// coefficient. Nyquist modes are skipped.
    pub fn conjugate_symmetry_defect(&self) -> T {
        let scale = self.coeffs.iter().fold(T::zero(), |a, c| a.max(c.norm()));
        if scale == T::zero() {
            return T::zero();
        }
        let mut worst = T::zero();
        for i in 0..self.coeffs.len() {
            if let Some(j) = self.grid.conjugate_mode(i) {
                worst = worst.max((self.coeffs[j] - self.coeffs[i].conj()).norm());
            }
        }
        worst / scale
    }
}

/// A field with one component per grid axis.
#[derive(Clone, Debug)]
pub struct VectorField<T: Real> {
    components: Vec<ScalarField<T>>,
}

impl<T: Real> VectorField<T> {
    pub fn new(components: Vec<ScalarField<T>>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::InvalidInput("vector field needs components".into()));
        };
        if components.len() != first.grid().dim() {
            return Err(Error::InvalidInput(format!(
                "{} components on a {}-dimensional grid",
                components.len(),
                first.grid().dim()
            )));
        }
        if components.iter().any(|c| c.grid() != first.grid()) {
            return Err(Error::GridMismatch);
        }
        Ok(Self { components })
    }

    pub fn zeros(grid: &SpectralGrid<T>) -> Self {
        Self {
            components: (0..grid.dim()).map(|_| ScalarField::zeros(grid)).collect(),
        }
    }

    pub fn from_fn(grid: &SpectralGrid<T>, f: impl Fn([T; 3]) -> [T; 3]) -> Self {
        let samples: Vec<[T; 3]> = (0..grid.len()).map(|i| f(grid.position(i))).collect();
        let components = (0..grid.dim())
            .map(|a| {
                ScalarField::from_real(grid, samples.iter().map(|s| s[a]).collect())
                    .expect("sizes match")
            })
            .collect();
        Self { components }
    }

    pub fn grid(&self) -> &SpectralGrid<T> {
        self.components[0].grid()
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[ScalarField<T>] {
        &self.components
    }

    pub fn component(&self, axis: usize) -> &ScalarField<T> {
        &self.components[axis]
    }

    pub fn into_components(self) -> Vec<ScalarField<T>> {
        self.components
    }

    pub fn map_components(&self, f: impl Fn(&ScalarField<T>) -> ScalarField<T>) -> Self {
        Self {
            components: self.components.iter().map(f).collect(),
        }
    }

    pub fn lincomb(&self, a: T, other: &Self, b: T) -> Result<Self> {
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(x, y)| x.lincomb(a, y, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { components })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.lincomb(T::one(), other, T::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.lincomb(T::one(), other, -T::one())
    }

    pub fn scale(&self, a: T) -> Self {
        self.map_components(|c| c.scale(a))
    }

    /// Multiplies every component by a scalar field.
    pub fn mul_scalar(&self, s: &ScalarField<T>) -> Result<Self> {
        let components = self
            .components
            .iter()
            .map(|c| c.mul(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { components })
    }

    /// Pointwise Euclidean modulus `|v(x)|`.
    pub fn magnitude(&self) -> ScalarField<T> {
        let grid = self.grid();
        let vals = (0..grid.len())
            .map(|i| {
                self.components
                    .iter()
                    .fold(T::zero(), |acc, c| acc + c.values()[i].norm_sqr())
                    .sqrt()
            })
            .collect();
        ScalarField::from_real(grid, vals).expect("sizes match")
    }

    pub fn l2_norm(&self) -> T {
        self.components
            .iter()
            .fold(T::zero(), |acc, c| acc + c.l2_norm().powi(2))
            .sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.components.iter().fold(T::zero(), |acc, c| acc.max(c.max_abs()))
    }

    pub fn max_distance(&self, other: &Self) -> T {
        self.components
            .iter()
            .zip(&other.components)
            .fold(T::zero(), |acc, (a, b)| acc.max(a.max_distance(b)))
    }
}
