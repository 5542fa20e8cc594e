mod common;

use approx::assert_relative_eq;
use common::*;
use dicke_core::analysis::first_revival;
use dicke_core::dynamics::initial_coefficients;
use dicke_core::*;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn initial_states() {
    let p2 = ModelParams::new(1.0, 0.05, vec![0.95, 1.05]).unwrap();
    let s = make_initial(&InitialCondition::single_spin(1), &p2).unwrap();
    assert_eq!(s.to_components(), vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
    let s = make_initial(&InitialCondition::bell(1, 2, BellSign::Minus), &p2).unwrap();
    assert_eq!(
        s.to_components(),
        vec![c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)]
    );
    let p3 = ModelParams::new(1.0, 0.05, vec![0.9, 1.0, 1.1]).unwrap();
    let s = make_initial(&InitialCondition::SinglePhoton, &p3).unwrap();
    assert_eq!(s.photon, c(1.0, 0.0));
    assert!(s.spins.iter().all(|a| *a == c(0.0, 0.0)));
}

#[test]
fn bad_indices() {
    let p = band(4);
    assert!(matches!(
        make_initial(&InitialCondition::single_spin(5), &p),
        Err(Error::IndexOutOfRange { index: 5, spins: 4 })
    ));
    assert!(matches!(
        make_initial(&InitialCondition::single_spin(0), &p),
        Err(Error::IndexOutOfRange { .. })
    ));
    assert_eq!(
        make_initial(&InitialCondition::bell(2, 2, BellSign::Plus), &p).unwrap_err(),
        Error::CoincidentBellSpins(2)
    );
    let sol = solution(&p);
    assert!(spin_amplitude(SpinIndex(9), &InitialCondition::SinglePhoton, &sol, &[0.0]).is_err());
}

#[test]
fn resonant_pair_coefficients() {
    let p = ModelParams::new(1.0, 0.05, vec![1.0]).unwrap();
    let sol = solution(&p);
    let photon = expand(&make_initial(&InitialCondition::SinglePhoton, &p).unwrap(), &sol).unwrap();
    for coeff in photon {
        assert_relative_eq!(coeff.re, FRAC_1_SQRT_2, max_relative = 1e-12);
    }
    let spin = expand(&make_initial(&InitialCondition::single_spin(1), &p).unwrap(), &sol).unwrap();
    assert_relative_eq!(spin[0].re, -FRAC_1_SQRT_2, max_relative = 1e-12);
    assert_relative_eq!(spin[1].re, FRAC_1_SQRT_2, max_relative = 1e-12);
}

#[test]
fn closed_form_coefficients_match_projection() {
    let p = band(20);
    let sol = solution(&p);
    for cond in [
        InitialCondition::SingleSpin(p.most_resonant_spin()),
        InitialCondition::SinglePhoton,
        InitialCondition::bell(4, 9, BellSign::Plus),
        InitialCondition::bell(9, 4, BellSign::Minus),
    ] {
        let projected = expand(&make_initial(&cond, &p).unwrap(), &sol).unwrap();
        let closed = initial_coefficients(&cond, &sol).unwrap();
        for (a, b) in projected.iter().zip(&closed) {
            assert!((a - b).norm() < 1e-13);
        }
        let total: f64 = closed.iter().map(|c| c.norm_sqr()).sum();
        assert!((total - 1.0).abs() <= 1e-10);
    }
}

#[test]
fn pinned_resonant_spin_is_complete() {
    let eps = build_epsilons(&DisorderSpec::equally_spaced(1.0, 0.1).pinned(true), 20).unwrap();
    let p = ModelParams::new(1.0, 0.05, eps).unwrap();
    let sol = solution(&p);
    let a = p.most_resonant_spin();
    assert_eq!(p.epsilon(a).unwrap(), 1.0);
    let coeffs = initial_coefficients(&InitialCondition::SingleSpin(a), &sol).unwrap();
    let total: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    assert!((total - 1.0).abs() <= 1e-10);
}

#[test]
fn evolution_at_zero_is_identity() {
    let p = band(20);
    let sol = solution(&p);
    let psi = make_initial(&InitialCondition::bell(3, 11, BellSign::Minus), &p).unwrap();
    let coeffs = expand(&psi, &sol).unwrap();
    assert!(evolve(&coeffs, &sol, 0.0).max_abs_diff(&psi) < 1e-14);
}

#[test]
fn rabi_pair() {
    let p = ModelParams::new(1.0, 0.05, vec![1.0]).unwrap();
    let sol = solution(&p);
    let cond = InitialCondition::single_spin(1);
    let coeffs = initial_coefficients(&cond, &sol).unwrap();
    let times = uniform_times(200.0, 101);
    let survival = survival_amplitude(&cond, &sol, &times).unwrap();
    let photon = photon_amplitude(&cond, &sol, &times).unwrap();
    for (k, &t) in times.iter().enumerate() {
        let psi = evolve(&coeffs, &sol, t);
        let expected = Complex64::from_polar(1.0, -t) * (0.05 * t).cos();
        assert!((psi.spins[0] - expected).norm() < 1e-12);
        assert!((survival.values[k].norm() - (0.05 * t).cos().abs()).abs() < 1e-12);
        assert!((photon.values[k].norm() - (0.05 * t).sin().abs()).abs() < 1e-12);
    }
    let zero = survival_amplitude(&cond, &sol, &[PI / (2.0 * 0.05)]).unwrap();
    assert!(zero.values[0].norm() < 1e-12);
}

#[test]
fn bethe_evolution_matches_oracle() {
    let p = band(20);
    let sol = solution(&p);
    let eig = oracle(&p);
    for cond in [
        InitialCondition::SingleSpin(p.most_resonant_spin()),
        InitialCondition::SinglePhoton,
        InitialCondition::bell(10, 11, BellSign::Minus),
    ] {
        let psi = make_initial(&cond, &p).unwrap();
        let coeffs = expand(&psi, &sol).unwrap();
        for &t in &long_grid(&p, 40) {
            let exact = evolve(&coeffs, &sol, t);
            let reference = propagate(&eig, &psi, t).unwrap();
            assert!(exact.max_abs_diff(&reference) <= 1e-9);
            assert!((exact.norm_sq() - 1.0).abs() <= 1e-10);
        }
    }
}

#[test]
fn starting_values() {
    let p = band(20);
    let sol = solution(&p);
    let a = p.most_resonant_spin();
    let spin = InitialCondition::SingleSpin(a);
    assert!((survival_amplitude(&spin, &sol, &[0.0]).unwrap().values[0] - c(1.0, 0.0)).norm() < 1e-12);
    assert!((spin_amplitude(a, &spin, &sol, &[0.0]).unwrap().values[0] - c(1.0, 0.0)).norm() < 1e-12);
    let photon = InitialCondition::SinglePhoton;
    assert!((photon_amplitude(&photon, &sol, &[0.0]).unwrap().values[0] - c(1.0, 0.0)).norm() < 1e-12);
    for m in 1..=20 {
        assert!(spin_amplitude(SpinIndex(m), &photon, &sol, &[0.0]).unwrap().values[0].norm() < 1e-12);
    }
}

#[test]
fn resonant_spin_revives_near_half_period() {
    let p = band(20);
    let sol = solution(&p);
    let times = long_grid(&p, 2000);
    let trace = survival_amplitude(&InitialCondition::SingleSpin(p.most_resonant_spin()), &sol, &times).unwrap();
    let nominal = 2.0 * PI / spacing(&p);
    let peak = first_revival(&times, &trace.magnitudes(), nominal).unwrap();
    assert!(peak.height >= 0.7);
    assert!((peak.time / nominal - 1.0).abs() < 0.05);
    let quarter = times.iter().position(|&t| t >= 0.5 * nominal).unwrap();
    assert!(trace.values[quarter].norm() < 0.3);
}

#[test]
fn resonant_spin_barely_emits() {
    let p = band(20);
    let sol = solution(&p);
    let times = uniform_times(4.0 * PI / spacing(&p), 2000);
    let a = p.most_resonant_spin();
    let photon = photon_amplitude(&InitialCondition::SingleSpin(a), &sol, &times).unwrap();
    assert!(photon.max_abs() < 0.5);
    let spin = spin_amplitude(a, &InitialCondition::SinglePhoton, &sol, &times).unwrap();
    assert!(spin.max_abs() <= 0.3);
}

#[test]
fn survival_is_hermitian_in_time() {
    let p = Params::from_disorder(1.0, 0.05, &DisorderSpec::uniform(1.0, 0.1, 17), 15).unwrap();
    let sol = solution(&p);
    let times: Vec<f64> = (0..50).map(|k| k as f64 * 13.7).collect();
    let back: Vec<f64> = times.iter().map(|t| -t).collect();
    for cond in [InitialCondition::single_spin(6), InitialCondition::SinglePhoton] {
        let fwd = survival_amplitude(&cond, &sol, &times).unwrap();
        let rev = survival_amplitude(&cond, &sol, &back).unwrap();
        for (a, b) in fwd.values.iter().zip(&rev.values) {
            assert!((a - b.conj()).norm() < 1e-12);
        }
    }
}

#[test]
fn negative_time_is_unitary() {
    let p = band(12);
    let sol = solution(&p);
    let coeffs = initial_coefficients(&InitialCondition::bell(1, 12, BellSign::Plus), &sol).unwrap();
    for t in [-5000.0, -3.0, 3.0, 5000.0] {
        assert!((evolve(&coeffs, &sol, t).norm_sq() - 1.0).abs() <= 1e-10);
    }
}

#[test]
fn bell_swap() {
    let p = band(20);
    let sol = solution(&p);
    let times = long_grid(&p, 200);
    let plus = initial_coefficients(&InitialCondition::bell(7, 12, BellSign::Plus), &sol).unwrap();
    let plus_swapped = initial_coefficients(&InitialCondition::bell(12, 7, BellSign::Plus), &sol).unwrap();
    let minus = initial_coefficients(&InitialCondition::bell(7, 12, BellSign::Minus), &sol).unwrap();
    let minus_swapped = initial_coefficients(&InitialCondition::bell(12, 7, BellSign::Minus), &sol).unwrap();
    for alpha in 0..21 {
        assert!((plus[alpha] - plus_swapped[alpha]).norm() < 1e-15);
        assert!((minus[alpha] + minus_swapped[alpha]).norm() < 1e-15);
    }
    for sign in [BellSign::Plus, BellSign::Minus] {
        let a = survival_amplitude(&InitialCondition::bell(7, 12, sign), &sol, &times).unwrap();
        let b = survival_amplitude(&InitialCondition::bell(12, 7, sign), &sol, &times).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).norm() < 1e-13);
        }
    }
}

#[test]
fn observables_by_name() {
    assert_eq!("survival".parse::<Observable>().unwrap(), Observable::Survival);
    assert_eq!("spin:3".parse::<Observable>().unwrap(), Observable::Spin(SpinIndex(3)));
    assert!("spin:x".parse::<Observable>().is_err());
    assert!("entropy".parse::<Observable>().is_err());
    let p = band(6);
    let sol = solution(&p);
    let times = [0.0, 1.0];
    let cond = InitialCondition::bell(2, 4, BellSign::Plus);
    let fid = observe(Observable::Fidelity, &cond, &sol, &times).unwrap();
    let surv = observe(Observable::Survival, &cond, &sol, &times).unwrap();
    assert_eq!(fid.label, "fidelity");
    assert_eq!(fid.values, surv.values);
    assert_eq!(observe(Observable::Spin(SpinIndex(4)), &cond, &sol, &times).unwrap().label, "spin:4");
}

#[test]
fn grid_includes_endpoints() {
    let t = uniform_times(10.0, 5);
    assert_eq!(t, vec![0.0, 2.5, 5.0, 7.5, 10.0]);
}
