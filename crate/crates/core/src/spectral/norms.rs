//! Sobolev, Besov and mixed space-time norms.

use crate::error::{invalid, Result};
use crate::scalar::Real;
use crate::spectral::field::ScalarField;
use crate::spectral::littlewood_paley::lp_blocks;

/// `‖f‖_{H^s}` via the weights `(1+|ξ|²)^{s/2}` and Plancherel.
pub fn sobolev_norm<T: Real>(f: &ScalarField<T>, s: T) -> T {
    let spec = f.spectrum();
    let grid = f.grid();
    let n = T::lit(grid.len() as f64);
    let mut acc = T::zero();
    grid.for_each_mode(|i, xi| {
        let k2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        acc = acc + (T::one() + k2).powf(s) * spec.coeffs()[i].norm_sqr();
    });
    (acc * grid.volume() / (n * n)).sqrt()
}

fn check_exponent<T: Real>(name: &str, p: T) -> Result<()> {
    if p.is_nan() || p < T::one() {
        return invalid(format!("{name} must lie in [1, ∞], got {p}"));
    }
    Ok(())
}

/// Non-homogeneous `‖f‖_{B^s_{q,r}} = ‖(2^{js}‖P_j f‖_{L^q})_j‖_{ℓ^r}`, with the
/// low block counted as `j = 0`. Infinite `q` or `r` are passed as
/// `T::infinity()`.
pub fn besov_norm<T: Real>(f: &ScalarField<T>, s: T, q: T, r: T) -> Result<T> {
    check_exponent("q", q)?;
    check_exponent("r", r)?;
    let terms: Vec<T> = lp_blocks(f)
        .into_iter()
        .enumerate()
        .map(|(j, block)| T::lit(2f64.powi(j as i32)).powf(s) * block.to_field().lq_norm(q))
        .collect();
    Ok(lr_sum(&terms, r))
}

fn lr_sum<T: Real>(terms: &[T], r: T) -> T {
    if r.is_infinite() {
        return terms.iter().fold(T::zero(), |a, &b| a.max(b));
    }
    terms
        .iter()
        .fold(T::zero(), |a, &b| a + b.powf(r))
        .powf(r.recip())
}

/// Spatial norm used inside a mixed norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpatialNorm<T> {
    Lebesgue { q: T },
    Sobolev { s: T },
    Besov { s: T, q: T, r: T },
}

impl<T: Real> SpatialNorm<T> {
    pub fn eval(&self, f: &ScalarField<T>) -> Result<T> {
        match *self {
            SpatialNorm::Lebesgue { q } => {
                check_exponent("q", q)?;
                Ok(f.lq_norm(q))
            }
            SpatialNorm::Sobolev { s } => Ok(sobolev_norm(f, s)),
            SpatialNorm::Besov { s, q, r } => besov_norm(f, s, q, r),
        }
    }
}

/// `‖g‖_{L^p(0,T)}` of samples on a uniform time grid, by the trapezoidal
/// rule applied to `|g|^p` (maximum for `p = ∞`).
pub fn time_norm<T: Real>(times: &[T], values: &[T], p: T) -> Result<T> {
    check_exponent("p", p)?;
    if times.len() != values.len() || times.is_empty() {
        return invalid("time samples and values must be non-empty and of equal length");
    }
    if p.is_infinite() {
        return Ok(values.iter().fold(T::zero(), |a, &b| a.max(b.abs())));
    }
    if times.len() == 1 {
        return Ok(T::zero());
    }
    check_uniform(times)?;
    let mut acc = T::zero();
    for w in 0..times.len() - 1 {
        let dt = times[w + 1] - times[w];
        acc = acc + dt * (values[w].abs().powf(p) + values[w + 1].abs().powf(p)) / T::lit(2.0);
    }
    Ok(acc.powf(p.recip()))
}

fn check_uniform<T: Real>(times: &[T]) -> Result<()> {
    let dt = times[1] - times[0];
    if !(dt > T::zero()) {
        return invalid("time grid must be strictly increasing");
    }
    let tol = T::lit(1e-9) * dt.max(times[times.len() - 1].abs() * T::epsilon() * T::lit(1e6));
    for w in times.windows(2) {
        if ((w[1] - w[0]) - dt).abs() > tol {
            return invalid("time grid must be uniform");
        }
    }
    Ok(())
}

/// `‖f‖_{L^p_t X}` of a sampled trajectory.
pub fn mixed_norm<T: Real>(times: &[T], fields: &[ScalarField<T>], p: T, spatial: &SpatialNorm<T>) -> Result<T> {
    let values = fields.iter().map(|f| spatial.eval(f)).collect::<Result<Vec<_>>>()?;
    time_norm(times, &values, p)
}
