//! End-to-end acceptance run: one PASS/FAIL line per criterion, exit status
//! nonzero when any criterion fails.

use std::f64::consts::TAU;
use std::time::Instant;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qnslab::acoustic::{desymmetrize, linearization_order, symmetrize, AcousticState};
use qnslab::dispersion::{
    epsilon_gain, h_bound_check, measure_decay, propagate, rescaled_oscillatory_integral, DecayBackend, DispersionParams, OscillatoryOracle,
};
use qnslab::fit::log_space;
use qnslab::limit::study::{NORM_DENSITY, NORM_LAMBDA, NORM_QM};
use qnslab::limit::{alpha_exponent, beta_exponent, convergence_study, make_data, taylor_green_error, DataKind, DataProfile, StudyConfig, StudyReport};
use qnslab::qns::{bohm_forms, qns_solve, DtPolicy, FluidParams, SolveOptions};
use qnslab::spectral::{gradient, helmholtz_q};
use qnslab::{Field, Grid, Result, VecField};

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Result<Verdict> {
    Ok(Verdict { passed, detail: detail.into() })
}

fn decay_exponent() -> Result<Verdict> {
    let params = DispersionParams::new(1.0, 1.0)?;
    let times = log_space(5.0, 50.0, 9);
    let mut ok = true;
    let mut parts = Vec::new();
    for backend in [
        DecayBackend::Radial3 { points: 16384, length: 1024.0 },
        DecayBackend::Lattice { dim: 2, points: 2048, length: 640.0 },
    ] {
        let fit = measure_decay(1.0, &params, &times, backend, false)?;
        let target = -(fit.dim as f64) / 2.0;
        ok &= (fit.slope - target).abs() <= 0.1 * target.abs();
        parts.push(format!("d={} slope {:.4} (target {target})", fit.dim, fit.slope));
    }
    verdict(ok, parts.join(", "))
}

fn epsilon_gain_exponent() -> Result<Verdict> {
    let times = log_space(2e4, 2e5, 9);
    let backend = DecayBackend::Radial3 {
        points: 1 << 21,
        length: 3.4e6,
    };
    let fits = [1.0, 0.5, 0.25, 0.125]
        .iter()
        .map(|&eps| measure_decay(0.1, &DispersionParams::new(eps, 1.0)?, &times, backend, false))
        .collect::<Result<Vec<_>>>()?;
    let delta = epsilon_gain(&fits)?.slope;
    verdict((0.375..=0.625).contains(&delta), format!("delta {delta:.4}, eps*kappa*R <= 0.1"))
}

fn scaling_identity() -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let oracle = OscillatoryOracle { tol: 1e-10 };
    let mut worst: f64 = 0.0;
    for n in 0..20 {
        let d = 2 + n % 2;
        let t = rng.gen_range(0.1..5.0);
        let radius = rng.gen_range(0.5..2.0);
        let params = DispersionParams::new(rng.gen_range(0.25..1.0), 1.0)?;
        let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let direct = oracle.eval(t, &x, radius, &params, d)?;
        let scaled = rescaled_oscillatory_integral(&oracle, t, &x, radius, &params, d)?;
        worst = worst.max((direct - scaled).norm());
    }
    verdict(worst <= 1e-8, format!("20 tuples, max abs gap {worst:.3e}"))
}

fn h_envelope() -> Result<Verdict> {
    let lambdas = log_space(1e-4, 1e4, 801);
    let d2 = h_bound_check(&lambdas, 1.0, 2)?;
    let d3 = h_bound_check(&lambdas, 1.0, 3)?;
    let lo = 0.5 - 1e-3;
    let hi = 3f64.powf(-0.5) + 1e-3;
    let ok2 = d2.min_h_inv_sqrt >= lo && d2.max_h_inv_sqrt <= hi;
    verdict(
        ok2 && d3.finite && d3.stable,
        format!(
            "d=2 h^-1/2 in [{:.6}, {:.6}]; d=3 ratio {:.4}, refinement change {:.2e}",
            d2.min_h_inv_sqrt, d2.max_h_inv_sqrt, d3.max_ratio, d3.relative_change
        ),
    )
}

fn random_modes(grid: &Grid, rng: &mut ChaCha8Rng, kmax: i32) -> Field {
    let modes: Vec<(f64, f64, f64, f64)> = (0..6)
        .map(|_| {
            (
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-kmax..=kmax) as f64,
                rng.gen_range(-kmax..=kmax) as f64,
                rng.gen_range(0.0..TAU),
            )
        })
        .collect();
    let f = Field::from_fn(grid, |x| modes.iter().map(|(a, k1, k2, p)| a * (k1 * x[0] + k2 * x[1] + p).cos()).sum());
    let mean = f.mean().re;
    f.map_real(|v| v - mean)
}

fn propagator_algebra() -> Result<Verdict> {
    let grid = Grid::cube(2, 32, TAU)?;
    let params = FluidParams::new(0.25, 0.5, 0.4, 2.0)?;
    let disp = params.dispersion();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let f = random_modes(&grid, &mut rng, 5);
    let n0 = f.l2_norm();
    let (mut unitarity, mut group): (f64, f64) = (0.0, 0.0);
    for n in 0..1000 {
        let (t1, t2) = (rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0));
        let a = propagate(&f, t1, &disp);
        unitarity = unitarity.max((a.l2_norm() - n0).abs() / n0);
        if n < 50 {
            group = group.max(propagate(&a, t2, &disp).max_distance(&propagate(&f, t1 + t2, &disp)));
        }
    }
    let sigma = random_modes(&grid, &mut rng, 5);
    let m = gradient(&random_modes(&grid, &mut rng, 5)).add(&VecField::new(vec![random_modes(&grid, &mut rng, 5), random_modes(&grid, &mut rng, 5)])?)?;
    let back = desymmetrize(&symmetrize(&AcousticState::new(sigma.clone(), m.clone(), 0.0)?, &params)?, &params)?;
    let round = back.sigma.max_distance(&sigma).max(back.m.max_distance(&helmholtz_q(&m)?));
    let order = linearization_order(&sigma, &m, &[1e-2, 5e-3, 2.5e-3, 1.25e-3], &params)?;
    verdict(
        unitarity <= 1e-12 && group <= 1e-11 && round <= 1e-10 && order >= 1.9,
        format!("unitarity {unitarity:.2e}, group {group:.2e}, round trip {round:.2e}, linearization order {order:.3}"),
    )
}

fn qns_bookkeeping() -> Result<Verdict> {
    let grid = Grid::cube(2, 256, 40.0)?;
    let params = FluidParams::new(0.1, 0.05, 0.03, 2.0)?;
    let data = make_data(DataKind::IllPrepared, 0.5, &params, &grid, &DataProfile::default())?;
    let run = |dt: f64| qns_solve(&data.state, &params, &SolveOptions::new(1.0).with_policy(DtPolicy::Fixed(dt)), None);
    let (coarse, fine) = (run(0.01)?, run(0.005)?);
    let ok = coarse.mass_drift <= 1e-10
        && fine.mass_drift <= 1e-10
        && coarse.energy_slack <= 1e-3
        && coarse.bd_slack <= 1e-3
        && fine.energy_slack <= coarse.energy_slack / 2.0
        && fine.bd_slack <= coarse.bd_slack / 2.0
        && coarse.lower_bound_ok()
        && fine.lower_bound_ok();
    verdict(
        ok,
        format!(
            "mass {:.1e}, energy slack {:.2e} -> {:.2e}, BD slack {:.2e} -> {:.2e}, lower bound margin {:.1e}",
            coarse.mass_drift.max(fine.mass_drift),
            coarse.energy_slack,
            fine.energy_slack,
            coarse.bd_slack,
            fine.bd_slack,
            coarse.lower_bound_margin.min(fine.lower_bound_margin)
        ),
    )
}

fn bohm_equivalence() -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for (d, n) in [(1usize, 256usize), (2, 128)] {
        let g = Grid::cube(d, n, TAU)?;
        for _ in 0..5 {
            let modes: Vec<(f64, [f64; 2], f64)> = (0..5)
                .map(|_| {
                    let k2 = if d == 2 { rng.gen_range(-3i32..=3) as f64 } else { 0.0 };
                    (rng.gen_range(-1.0..1.0), [rng.gen_range(-3i32..=3) as f64, k2], rng.gen_range(0.0..TAU))
                })
                .collect();
            let wave = Field::from_fn(&g, |x| modes.iter().map(|(a, k, p)| a * (k[0] * x[0] + k[1] * x[1] + p).cos()).sum());
            let top = wave.max_abs().max(1e-12);
            let rho = wave.map_real(|v| 1.0 + 0.5 * v / top);
            worst = worst.max(bohm_forms(&rho, 1.0, 1e-6)?.max_relative_gap());
        }
    }
    verdict(worst <= 1e-7, format!("max relative gap {worst:.2e}"))
}

fn taylor_green_ok() -> Result<(bool, f64)> {
    let grid = Grid::cube(2, 32, TAU)?;
    let err = taylor_green_error(&grid, 1.0, 0.1, 5.0, DtPolicy::Fixed(0.05))?;
    Ok((err <= 1e-8, err))
}

fn low_mach(ill: &StudyReport, tg: (bool, f64)) -> Result<Verdict> {
    let beta = beta_exponent(&2.0)?;
    let rate = ill.table.get(NORM_DENSITY).map_or(f64::NAN, |r| r.rate);
    let qm = ill.table.get(NORM_QM);
    let lam = ill.table.get(NORM_LAMBDA);
    let qm_ok = qm.is_some_and(|r| r.strictly_decreasing() && r.rate > 0.0);
    let lam_ok = lam.is_some_and(|r| r.strictly_decreasing());
    verdict(
        ill.aborted.is_none() && tg.0 && (rate - beta).abs() <= 0.2 * beta && qm_ok && lam_ok,
        format!(
            "Taylor-Green {:.1e}; rate(a) {rate:.4} vs beta {beta}; Qm {:?} rate {:+.4}; lambda gap {:?}",
            tg.1,
            qm.map(|r| r.values.clone()).unwrap_or_default(),
            qm.map_or(f64::NAN, |r| r.rate),
            lam.map(|r| r.values.clone()).unwrap_or_default()
        ),
    )
}

fn contrast(ill: &StudyReport, well: &StudyReport) -> Result<Verdict> {
    let (w, i) = (well.table.get(NORM_LAMBDA), ill.table.get(NORM_LAMBDA));
    let below = matches!((w, i), (Some(w), Some(i)) if w.values.iter().zip(&i.values).all(|(a, b)| a <= b));
    let l = &well.leray;
    verdict(
        well.aborted.is_none() && below && l.max_residual <= 1e-6 * l.energy0,
        format!(
            "well {:?} vs ill {:?}; Leray residual {:.2e} vs E0 {:.3}",
            w.map(|r| r.values.clone()).unwrap_or_default(),
            i.map(|r| r.values.clone()).unwrap_or_default(),
            l.max_residual,
            l.energy0
        ),
    )
}

fn exponent_calculators() -> Result<Verdict> {
    type Q = Ratio<i64>;
    let two = Q::from_integer(2);
    let g = Q::new(3, 2);
    let rows = [
        (beta_exponent(&two)?, Q::from_integer(1)),
        (alpha_exponent(&two, &two)?, Q::from_integer(1)),
        (beta_exponent(&g)?, Q::new(4, 9)),
        (alpha_exponent(&two, &g)?, Q::new(8, 9)),
    ];
    let ok = rows.iter().all(|(a, b)| a == b);
    let text: Vec<String> = rows.iter().map(|(a, _)| a.to_string()).collect();
    verdict(ok, format!("beta(2), alpha(2;2), beta(3/2), alpha(2;3/2) = {}", text.join(", ")))
}

fn report(id: u32, name: &str, start: Instant, v: Result<Verdict>, failures: &mut u32) {
    let secs = start.elapsed().as_secs_f64();
    match v {
        Ok(v) => {
            if !v.passed {
                *failures += 1;
            }
            println!("criterion {id:>2} {} {name} ({secs:.1} s): {}", if v.passed { "PASS" } else { "FAIL" }, v.detail);
        }
        Err(e) => {
            *failures += 1;
            println!("criterion {id:>2} FAIL {name} ({secs:.1} s): error: {e}");
        }
    }
}

fn main() {
    let mut failures = 0;
    let cases: [(u32, &str, fn() -> Result<Verdict>); 7] = [
        (1, "dispersive decay exponent", decay_exponent),
        (2, "epsilon gain", epsilon_gain_exponent),
        (3, "scaling identity", scaling_identity),
        (4, "h-function envelope", h_envelope),
        (5, "propagator algebra", propagator_algebra),
        (6, "QNS bookkeeping", qns_bookkeeping),
        (7, "Bohm-form equivalence", bohm_equivalence),
    ];
    for (id, name, f) in cases {
        let start = Instant::now();
        report(id, name, start, f(), &mut failures);
    }

    let start = Instant::now();
    let ill_cfg = StudyConfig::default();
    let tg = taylor_green_ok();
    let ill = convergence_study(&ill_cfg);
    let c8 = match (&ill, tg) {
        (Ok(ill), Ok(tg)) => low_mach(ill, tg),
        (Err(e), _) => verdict(false, format!("error: {e}")),
        (_, Err(e)) => verdict(false, format!("error: {e}")),
    };
    report(8, "low-Mach convergence", start, c8, &mut failures);

    let start = Instant::now();
    let well = convergence_study(&StudyConfig {
        kind: DataKind::WellPrepared,
        ..ill_cfg
    });
    let c9 = match (&ill, &well) {
        (Ok(ill), Ok(well)) => contrast(ill, well),
        (Err(e), _) | (_, Err(e)) => verdict(false, format!("error: {e}")),
    };
    report(9, "well- vs ill-prepared contrast", start, c9, &mut failures);

    let start = Instant::now();
    report(10, "exponent calculators", start, exponent_calculators(), &mut failures);

    println!("acceptance: {} of 10 criteria passed", 10 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
