//! Scalar abstractions shared by every module.
//!
//! Field and operator code is written against [`Real`], which covers `f32`
//! and `f64`. Exponent arithmetic (admissible pairs, the convergence-rate
//! exponent tables) is written against [`Exact`], which additionally covers
//! `Ratio<i64>` so that table values can be checked without rounding.

use std::fmt::{Debug, Display};

use num_rational::Ratio;
use num_traits::{Float, FloatConst, FromPrimitive, Num, NumAssign, ToPrimitive};
use rustfft::FftNum;

/// Floating point scalar usable on a spectral grid.
pub trait Real:
    Float + FloatConst + NumAssign + FromPrimitive + ToPrimitive + FftNum + Default + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }

    /// Unit roundoff of the type.
    fn unit_roundoff() -> Self {
        Self::epsilon()
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + NumAssign
        + FromPrimitive
        + ToPrimitive
        + FftNum
        + Default
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Shorthand for `T::lit(x)`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::lit(x)
}

/// Scalar with field arithmetic and a notion of equality that is exact for
/// rationals and roundoff-tolerant for floats.
pub trait Exact: Num + Clone + PartialOrd + Debug {
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Equality up to the representation error of the type.
    fn same(&self, other: &Self) -> bool;

    fn to_f64_lossy(&self) -> f64;
}

macro_rules! impl_exact_float {
    ($t:ty) => {
        impl Exact for $t {
            fn from_ratio(num: i64, den: i64) -> Self {
                num as $t / den as $t
            }
            fn same(&self, other: &Self) -> bool {
                let scale = self.abs().max(other.abs()).max(1.0);
                (self - other).abs() <= 16.0 * <$t>::EPSILON * scale
            }
            fn to_f64_lossy(&self) -> f64 {
                *self as f64
            }
        }
    };
}

impl_exact_float!(f32);
impl_exact_float!(f64);

impl Exact for Ratio<i64> {
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }
    fn same(&self, other: &Self) -> bool {
        self == other
    }
    fn to_f64_lossy(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

/// Extended exponent in `[1, ∞]`.
#[derive(Debug, Clone, PartialEq)]
pub enum Exponent<S> {
    Finite(S),
    Infinite,
}

impl<S: Exact> Exponent<S> {
    pub fn finite(value: S) -> Self {
        Exponent::Finite(value)
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn reciprocal(&self) -> S {
        match self {
            Exponent::Finite(p) => S::one() / p.clone(),
            Exponent::Infinite => S::zero(),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    /// Hölder conjugate `p' = p/(p-1)`; `1 ↔ ∞`.
    pub fn conjugate(&self) -> Self {
        match self {
            Exponent::Infinite => Exponent::Finite(S::one()),
            Exponent::Finite(p) if p.same(&S::one()) => Exponent::Infinite,
            Exponent::Finite(p) => Exponent::Finite(p.clone() / (p.clone() - S::one())),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Exponent::Finite(p) => p.to_f64_lossy(),
            Exponent::Infinite => f64::INFINITY,
        }
    }
}

impl Exponent<f64> {
    /// Builds an exponent from a float, mapping `f64::INFINITY` to `Infinite`.
    pub fn from_f64(p: f64) -> Self {
        if p.is_infinite() {
            Exponent::Infinite
        } else {
            Exponent::Finite(p)
        }
    }
}

impl<S: Display> Display for Exponent<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinite => write!(f, "inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugates() {
        let p = Exponent::finite(Ratio::new(4i64, 1));
        assert_eq!(p.conjugate(), Exponent::Finite(Ratio::new(4, 3)));
        assert_eq!(Exponent::<f64>::Infinite.conjugate(), Exponent::Finite(1.0));
        assert_eq!(Exponent::Finite(1.0f64).conjugate(), Exponent::Infinite);
    }

    #[test]
    fn lit_roundtrip() {
        assert_eq!(lit::<f32>(0.5), 0.5f32);
        assert_eq!(f64::lit(3.25).as_f64(), 3.25);
    }
}
