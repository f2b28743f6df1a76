use proptest::prelude::*;
use std::f64::consts::TAU;

use qnslab::spectral::{apply_multiplier, divergence, helmholtz_p, helmholtz_q, sobolev_norm, Multiplier};
use qnslab::{Field, Grid, VecField};

/// Real field built from a few random Fourier modes.
fn modal_field(grid: &Grid, modes: &[(f64, i32, i32, f64)]) -> Field {
    Field::from_fn(grid, |x| modes.iter().map(|&(a, k1, k2, p)| a * (k1 as f64 * x[0] + k2 as f64 * x[1] + p).cos()).sum())
}

fn modes() -> impl Strategy<Value = Vec<(f64, i32, i32, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -7i32..=7, -7i32..=7, 0.0..TAU), 1..6)
}

fn grid() -> Grid {
    Grid::cube(2, 32, TAU).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn transform_round_trip(vals in prop::collection::vec(-10.0..10.0f64, 16 * 8)) {
        let g = Grid::new(&[16, 8], &[3.0, 1.5]).unwrap();
        let f = Field::from_real(&g, vals.clone()).unwrap();
        let back = f.spectrum().to_field();
        let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        prop_assert!(back.max_distance(&f) <= 1e-12 * scale);
    }

    #[test]
    fn helmholtz_projections_are_complementary(a in modes(), b in modes()) {
        let g = grid();
        let v = VecField::new(vec![modal_field(&g, &a), modal_field(&g, &b)]).unwrap();
        let p = helmholtz_p(&v).unwrap();
        let q = helmholtz_q(&v).unwrap();
        let tol = 1e-12 * v.max_abs().max(1.0);
        prop_assert!(p.add(&q).unwrap().max_distance(&v) <= tol);
        prop_assert!(helmholtz_p(&p).unwrap().max_distance(&p) <= tol);
        prop_assert!(helmholtz_q(&q).unwrap().max_distance(&q) <= tol);
        prop_assert!(helmholtz_q(&p).unwrap().max_abs() <= tol);
        prop_assert!(helmholtz_p(&q).unwrap().max_abs() <= tol);
        let div_scale = divergence(&v).max_abs().max(v.max_abs());
        prop_assert!(divergence(&p).max_abs() <= 1e-10 * div_scale.max(1.0));
    }

    #[test]
    fn sobolev_zero_is_l2(a in modes()) {
        let f = modal_field(&grid(), &a);
        let l2 = f.l2_norm();
        prop_assert!((sobolev_norm(&f, 0.0) - l2).abs() <= 1e-12 * l2.max(1.0));
    }

    #[test]
    fn multiplier_is_linear(a in modes(), b in modes(), alpha in -3.0..3.0f64, beta in -3.0..3.0f64, s in 0.0..2.0f64) {
        let g = grid();
        let (f, h) = (modal_field(&g, &a), modal_field(&g, &b));
        let m = Multiplier::radial(move |k: f64| (1.0 + k * k).powf(s / 2.0));
        let lhs = apply_multiplier(&f.lincomb(alpha, &h, beta).unwrap(), &m).unwrap();
        let rhs = apply_multiplier(&f, &m).unwrap().lincomb(alpha, &apply_multiplier(&h, &m).unwrap(), beta).unwrap();
        prop_assert!(lhs.max_distance(&rhs) <= 1e-12 * lhs.max_abs().max(1.0));
    }
}

#[test]
fn three_dimensional_round_trip() {
    let g = Grid::cube(3, 32, TAU).unwrap();
    let f = Field::from_fn(&g, |x| (x[0].sin() * x[1].cos() + x[2]).sin() + 0.1 * x[2]);
    assert!(f.spectrum().to_field().max_distance(&f) <= 1e-12 * f.max_abs());
}
