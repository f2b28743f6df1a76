//! Adaptive Gauss–Kronrod (7/15) quadrature for complex integrands.

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Single G7/K15 panel: (Kronrod value, |Kronrod − Gauss|).
pub fn gk15(f: &impl Fn(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kron += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    (kron * h, ((kron - gauss) * h).norm())
}

/// Adaptive bisection until the summed error estimate is below `tol`.
#[derive(Debug, Clone, Copy)]
pub struct Adaptive {
    pub tol: f64,
    pub max_panels: usize,
}

impl Default for Adaptive {
    fn default() -> Self {
        Self { tol: 1e-10, max_panels: 200_000 }
    }
}

impl Adaptive {
    /// Integrates over `[a, b]` starting from `initial` equal panels.
    pub fn integrate(&self, f: impl Fn(f64) -> Complex64, a: f64, b: f64, initial: usize) -> Result<(Complex64, f64)> {
        let n = initial.max(1);
        let w = (b - a) / n as f64;
        let mut panels: Vec<(f64, f64, Complex64, f64)> = (0..n)
            .map(|i| {
                let (lo, hi) = (a + w * i as f64, if i + 1 == n { b } else { a + w * (i + 1) as f64 });
                let (v, e) = gk15(&f, lo, hi);
                (lo, hi, v, e)
            })
            .collect();
        loop {
            let err: f64 = panels.iter().map(|p| p.3).sum();
            if err <= self.tol {
                let val = panels.iter().map(|p| p.2).sum();
                return Ok((val, err));
            }
            if panels.len() >= self.max_panels {
                return Err(Error::Quadrature { achieved: err, requested: self.tol });
            }
            // Split every panel whose error exceeds its fair share.
            let share = self.tol / panels.len() as f64;
            let mut next = Vec::with_capacity(2 * panels.len());
            let mut split_any = false;
            for p in panels {
                if p.3 > share && p.1 - p.0 > 1e-14 * (b - a).abs() {
                    split_any = true;
                    let m = 0.5 * (p.0 + p.1);
                    let (v1, e1) = gk15(&f, p.0, m);
                    let (v2, e2) = gk15(&f, m, p.1);
                    next.push((p.0, m, v1, e1));
                    next.push((m, p.1, v2, e2));
                } else {
                    next.push(p);
                }
            }
            panels = next;
            if !split_any {
                let err: f64 = panels.iter().map(|p| p.3).sum();
                return Err(Error::Quadrature { achieved: err, requested: self.tol });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let (v, _) = gk15(&|x: f64| Complex64::new(x.powi(20), 0.0), -1.0, 1.0);
        assert!((v.re - 2.0 / 21.0).abs() < 1e-15);
        let (v, e) = gk15(&|x: f64| Complex64::new(x.powi(12), 0.0), -1.0, 1.0);
        assert!((v.re - 2.0 / 13.0).abs() < 1e-15);
        assert!(e < 1e-14);
    }

    #[test]
    fn oscillatory_integral() {
        let q = Adaptive { tol: 1e-12, ..Default::default() };
        let w = 200.0;
        let (v, _) = q.integrate(|x: f64| Complex64::new(0.0, w * x).exp(), 0.0, 3.0, 4).unwrap();
        let exact = (Complex64::new(0.0, 3.0 * w).exp() - 1.0) / Complex64::new(0.0, w);
        assert!((v - exact).norm() < 1e-12);
    }

    #[test]
    fn reports_failure() {
        let q = Adaptive { tol: 1e-30, max_panels: 8 };
        let r = q.integrate(|x: f64| Complex64::new(x.sqrt(), 0.0), 0.0, 1.0, 1);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
