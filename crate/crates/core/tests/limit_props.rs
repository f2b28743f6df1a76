use num_rational::Ratio;
use proptest::prelude::*;
use std::f64::consts::TAU;

use qnslab::limit::{alpha_exponent, beta_exponent, convergence_study, ns_solve, taylor_green, taylor_green_error, DataKind, NSState, StudyConfig};
use qnslab::qns::DtPolicy;
use qnslab::spectral::{divergence, helmholtz_p};
use qnslab::{Grid, VecField};

type Q = Ratio<i64>;

proptest! {
    #[test]
    fn exponent_branches_match_their_formulas(gn in 1001i64..2999, pn in 2000i64..=6000) {
        let gamma = Q::new(gn, 1000);
        let p = Q::new(pn, 1000);
        let (two, six) = (Q::from_integer(2), Q::from_integer(6));
        let beta = beta_exponent(&gamma).unwrap();
        let alpha = alpha_exponent(&p, &gamma).unwrap();
        if gamma < two {
            prop_assert_eq!(beta, two / (six - gamma));
            prop_assert_eq!(alpha, two * (six - p) / (p * (six - gamma)));
        } else {
            prop_assert_eq!(beta, Q::from_integer(1));
            prop_assert_eq!(alpha, (six - p) / (two * p));
        }
        // the lower-branch α at p = 2 is 4/(6 − γ), i.e. 2β
        if gamma < two {
            prop_assert_eq!(alpha_exponent(&two, &gamma).unwrap(), two * beta);
        }
    }
}

#[test]
fn exponent_table() {
    let two = Q::from_integer(2);
    let g = Q::new(3, 2);
    assert_eq!(beta_exponent(&two).unwrap(), Q::from_integer(1));
    assert_eq!(alpha_exponent(&two, &two).unwrap(), Q::from_integer(1));
    assert_eq!(beta_exponent(&g).unwrap(), Q::new(4, 9));
    assert_eq!(alpha_exponent(&two, &g).unwrap(), Q::new(8, 9));
}

#[test]
fn taylor_green_reference() {
    let g = Grid::cube(2, 32, TAU).unwrap();
    let err = taylor_green_error(&g, 1.0, 0.1, 5.0, DtPolicy::Fixed(0.05)).unwrap();
    assert!(err <= 1e-8, "{err}");
    // the closed form itself is divergence-free
    let u = taylor_green(&g, 2.0, 0.1, 0.3);
    assert!(divergence(&u).max_abs() < 1e-12);
}

#[test]
fn ns_solve_keeps_velocity_solenoidal() {
    let g = Grid::cube(2, 32, TAU).unwrap();
    let raw = VecField::new(vec![
        qnslab::Field::from_fn(&g, |x| (x[1] + 0.3).sin() + 0.4 * (2.0 * x[0] + x[1]).cos()),
        qnslab::Field::from_fn(&g, |x| (x[0] - 0.2).cos() + 0.2 * (x[0] - 3.0 * x[1]).sin()),
    ])
    .unwrap();
    let u0 = helmholtz_p(&raw).unwrap();
    let traj = ns_solve(&NSState::new(u0, 0.05).unwrap(), 1.0, DtPolicy::Fixed(0.01), 0.1).unwrap();
    assert!(traj.max_divergence_ratio <= 1e-10, "{}", traj.max_divergence_ratio);
    for u in &traj.states {
        assert!(divergence(u).l2_norm() <= 1e-10 * u.l2_norm().max(1.0));
    }
}

fn small_study(kind: DataKind) -> StudyConfig {
    StudyConfig {
        points: 64,
        length: 20.0,
        eps_values: vec![0.4, 0.2, 0.1],
        kind,
        t_end: 0.2,
        sample_dt: 0.02,
        ..StudyConfig::default()
    }
}

#[test]
fn study_is_deterministic() {
    let cfg = small_study(DataKind::IllPrepared);
    let a = convergence_study(&cfg).unwrap();
    let b = convergence_study(&cfg).unwrap();
    assert!(a.aborted.is_none());
    assert_eq!(a.table, b.table);
    for (x, y) in a.table.rows.iter().zip(&b.table.rows) {
        for (u, v) in x.values.iter().zip(&y.values) {
            assert_eq!(u.to_bits(), v.to_bits());
        }
    }
}

#[test]
fn small_study_acoustic_norms_do_not_grow() {
    let rep = convergence_study(&small_study(DataKind::IllPrepared)).unwrap();
    for id in [qnslab::limit::study::NORM_DENSITY, qnslab::limit::study::NORM_QM] {
        let row = rep.table.get(id).unwrap();
        assert!(row.non_increasing(), "{id}: {:?}", row.values);
    }
    assert!(rep.leray.max_residual <= 1e-6 * rep.leray.energy0);
}
