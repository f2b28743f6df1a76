use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{invalid, Result};
use crate::scalar::Real;

/// Periodic box discretization with its wavenumber lattice and FFT plans.
///
/// Nodes sit at `x_i = i·L/N`, `i = 0..N`, on every axis. The flat layout is
/// row-major with the last axis contiguous. Cloning is cheap: plans and
/// wavenumber tables are shared read-only.
#[derive(Clone)]
pub struct SpectralGrid<T: Real> {
    inner: Arc<GridInner<T>>,
}

struct GridInner<T: Real> {
    points: Vec<usize>,
    lengths: Vec<T>,
    shape: [usize; 3],
    wavenumbers: [Vec<T>; 3],
    forward: Vec<Arc<dyn Fft<T>>>,
    inverse: Vec<Arc<dyn Fft<T>>>,
}

/// Number of lines transformed together when an axis is strided.
const LINE_BATCH: usize = 16;

impl<T: Real> SpectralGrid<T> {
    pub fn new(points: &[usize], lengths: &[T]) -> Result<Self> {
        let dim = points.len();
        if !(1..=3).contains(&dim) {
            return invalid(format!("grid dimension must be 1, 2 or 3, got {dim}"));
        }
        if lengths.len() != dim {
            return invalid("one box length per axis is required");
        }
        if let Some(n) = points.iter().find(|&&n| n == 0 || n % 2 != 0) {
            return invalid(format!("points per axis must be even and positive, got {n}"));
        }
        if lengths.iter().any(|&l| !(l > T::zero()) || !l.is_finite()) {
            return invalid("box lengths must be positive and finite");
        }

        let mut shape = [1usize; 3];
        shape[..dim].copy_from_slice(points);
        let mut planner = FftPlanner::new();
        let mut forward = Vec::with_capacity(dim);
        let mut inverse = Vec::with_capacity(dim);
        let mut wavenumbers: [Vec<T>; 3] = [vec![T::zero()], vec![T::zero()], vec![T::zero()]];
        for axis in 0..dim {
            let n = points[axis];
            forward.push(planner.plan_fft_forward(n));
            inverse.push(planner.plan_fft_inverse(n));
            let base = T::TAU() / lengths[axis];
            wavenumbers[axis] = (0..n)
                .map(|i| base * T::lit(signed_index(i, n) as f64))
                .collect();
        }
        Ok(Self {
            inner: Arc::new(GridInner {
                points: points.to_vec(),
                lengths: lengths.to_vec(),
                shape,
                wavenumbers,
                forward,
                inverse,
            }),
        })
    }

    /// Same number of points and length on every axis.
    pub fn cube(dim: usize, points: usize, length: T) -> Result<Self> {
        Self::new(&vec![points; dim], &vec![length; dim])
    }

    pub fn dim(&self) -> usize {
        self.inner.points.len()
    }

    pub fn points(&self) -> &[usize] {
        &self.inner.points
    }

    pub fn lengths(&self) -> &[T] {
        &self.inner.lengths
    }

    /// Axis sizes padded with ones up to three axes.
    pub fn shape(&self) -> [usize; 3] {
        self.inner.shape
    }

    /// Total number of nodes.
    pub fn len(&self) -> usize {
        self.inner.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn volume(&self) -> T {
        self.inner.lengths.iter().fold(T::one(), |acc, &l| acc * l)
    }

    pub fn cell_volume(&self) -> T {
        self.volume() / T::lit(self.len() as f64)
    }

    pub fn spacing(&self, axis: usize) -> T {
        self.inner.lengths[axis] / T::lit(self.inner.points[axis] as f64)
    }

    /// Smallest grid spacing over all axes.
    pub fn min_spacing(&self) -> T {
        (0..self.dim())
            .map(|a| self.spacing(a))
            .fold(T::infinity(), T::min)
    }

    /// Angular wavenumbers `ξ = 2πk/L` along `axis`, in FFT order.
    pub fn wavenumbers(&self, axis: usize) -> &[T] {
        &self.inner.wavenumbers[axis]
    }

    /// Largest `|ξ_i|` representable along `axis` (the Nyquist wavenumber).
    pub fn nyquist(&self, axis: usize) -> T {
        T::PI() * T::lit(self.inner.points[axis] as f64) / self.inner.lengths[axis]
    }

    /// Largest `|ξ|` on the lattice.
    pub fn max_wavenumber(&self) -> T {
        (0..self.dim())
            .map(|a| self.nyquist(a).powi(2))
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    /// Node coordinate along `axis`.
    pub fn coordinate(&self, axis: usize, index: usize) -> T {
        self.spacing(axis) * T::lit(index as f64)
    }

    /// Position of the node with the given flat index.
    pub fn position(&self, flat: usize) -> [T; 3] {
        let [_, n1, n2] = self.inner.shape;
        let idx = [flat / (n1 * n2), (flat / n2) % n1, flat % n2];
        let mut x = [T::zero(); 3];
        for axis in 0..self.dim() {
            x[axis] = self.coordinate(axis, idx[axis]);
        }
        x
    }

    /// Multi-index of a flat index.
    pub fn unflatten(&self, flat: usize) -> [usize; 3] {
        let [_, n1, n2] = self.inner.shape;
        [flat / (n1 * n2), (flat / n2) % n1, flat % n2]
    }

    /// Whether any coordinate of the mode sits on the Nyquist index, where
    /// `-k` aliases to `k`.
    pub fn is_nyquist_mode(&self, flat: usize) -> bool {
        let idx = self.unflatten(flat);
        (0..self.dim()).any(|a| idx[a] == self.inner.points[a] / 2)
    }

    /// Flat index of the mode `-k`, or `None` on Nyquist modes.
    pub fn conjugate_mode(&self, flat: usize) -> Option<usize> {
        if self.is_nyquist_mode(flat) {
            return None;
        }
        let idx = self.unflatten(flat);
        let [_, n1, n2] = self.inner.shape;
        let mut out = [0usize; 3];
        for a in 0..3 {
            let n = self.inner.shape[a];
            out[a] = (n - idx[a]) % n;
        }
        Some((out[0] * n1 + out[1]) * n2 + out[2])
    }

    /// Calls `f(flat, ξ)` for every lattice mode in flat order.
    pub fn for_each_mode(&self, mut f: impl FnMut(usize, [T; 3])) {
        let [n0, n1, n2] = self.inner.shape;
        let [k0, k1, k2] = &self.inner.wavenumbers;
        let mut flat = 0;
        for &a in k0.iter().take(n0) {
            for &b in k1.iter().take(n1) {
                for &c in k2.iter().take(n2) {
                    f(flat, [a, b, c]);
                    flat += 1;
                }
            }
        }
    }

    /// `|ξ|²` for every mode in flat order.
    pub fn wavenumber_norms_sq(&self) -> Vec<T> {
        let mut out = vec![T::zero(); self.len()];
        self.for_each_mode(|i, xi| out[i] = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
        out
    }

    /// 2/3-rule dealiasing mask: true where every `|k_i| < N_i/3`.
    pub fn dealias_mask(&self) -> Vec<bool> {
        let mut out = vec![false; self.len()];
        let dim = self.dim();
        let pts = self.inner.points.clone();
        for (flat, slot) in out.iter_mut().enumerate() {
            let idx = self.unflatten(flat);
            *slot = (0..dim).all(|a| 3 * signed_index(idx[a], pts[a]).unsigned_abs() < pts[a] as u64);
        }
        out
    }

    /// Unnormalized forward transform in place: `F_k = Σ_x f(x) e^{-iξ·x}`.
    pub fn forward(&self, data: &mut [Complex<T>]) {
        self.transform(data, true);
    }

    /// Normalized inverse transform in place.
    pub fn inverse(&self, data: &mut [Complex<T>]) {
        self.transform(data, false);
        let scale = T::one() / T::lit(self.len() as f64);
        data.iter_mut().for_each(|c| *c = *c * scale);
    }

    fn transform(&self, data: &mut [Complex<T>], forward: bool) {
        assert_eq!(data.len(), self.len(), "buffer length does not match grid");
        let shape = self.inner.shape;
        for axis in 0..self.dim() {
            let plan = if forward {
                &self.inner.forward[axis]
            } else {
                &self.inner.inverse[axis]
            };
            let n = shape[axis];
            let outer: usize = shape[..axis].iter().product();
            let inner: usize = shape[axis + 1..].iter().product();
            let mut scratch = vec![Complex::new(T::zero(), T::zero()); plan.get_inplace_scratch_len()];
            if inner == 1 {
                plan.process_with_scratch(data, &mut scratch);
                continue;
            }
            let mut lines = vec![Complex::new(T::zero(), T::zero()); n * LINE_BATCH];
            for o in 0..outer {
                let base = o * n * inner;
                let mut start = 0;
                while start < inner {
                    let batch = LINE_BATCH.min(inner - start);
                    for j in 0..n {
                        let row = base + j * inner + start;
                        for b in 0..batch {
                            lines[b * n + j] = data[row + b];
                        }
                    }
                    plan.process_with_scratch(&mut lines[..batch * n], &mut scratch);
                    for j in 0..n {
                        let row = base + j * inner + start;
                        for b in 0..batch {
                            data[row + b] = lines[b * n + j];
                        }
                    }
                    start += batch;
                }
            }
        }
    }
}

/// FFT index to signed wavenumber index in `[-N/2, N/2)`.
pub fn signed_index(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

impl<T: Real> PartialEq for SpectralGrid<T> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.points == other.inner.points && self.inner.lengths == other.inner.lengths)
    }
}

impl<T: Real> fmt::Debug for SpectralGrid<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("points", &self.inner.points)
            .field("lengths", &self.inner.lengths)
            .finish()
    }
}
