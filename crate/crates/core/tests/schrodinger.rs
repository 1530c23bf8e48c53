use rug::{Float, Rational};
use trapnorm::bigreal::{log10_abs, parse_decimal, prec_bits, to_decimal};
use trapnorm::normalizer::plan_state;
use trapnorm::schrodinger::{
    evaluate_wavefunction, matching_residual_log10, refine_double_well_ground, refine_eigenvalue,
    Solver,
};
use trapnorm::wkb::{spatial_tail, wkb_energy};
use trapnorm::{PotentialSpec, StateParity};

const QUARTIC_E0: &str = "1.0603620904841828996470460166926635";
const QUARTIC_E1: &str = "3.7996730298013941687830941885125689";

/// Double-precision shooting: RK4 from the origin, bisection on the sign at `x_f`.
fn shooting_oracle(n: i32, parity_odd: bool, lo: f64, hi: f64, x_f: f64) -> f64 {
    let shoot = |e: f64| {
        let steps = 40_000;
        let h = x_f / steps as f64;
        let (mut y, mut v) = if parity_odd { (0.0, 1.0) } else { (1.0, 0.0) };
        let acc = |x: f64, y: f64| (x.powi(2 * n) - e) * y;
        for i in 0..steps {
            let x = i as f64 * h;
            let k1 = (v, acc(x, y));
            let k2 = (v + 0.5 * h * k1.1, acc(x + 0.5 * h, y + 0.5 * h * k1.0));
            let k3 = (v + 0.5 * h * k2.1, acc(x + 0.5 * h, y + 0.5 * h * k2.0));
            let k4 = (v + h * k3.1, acc(x + h, y + h * k3.0));
            y += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
            v += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        }
        y
    };
    let (mut a, mut b) = (lo, hi);
    let sa = shoot(a).signum();
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        if shoot(m).signum() == sa {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn monomial(n: u32) -> PotentialSpec {
    PotentialSpec::Monomial { n }
}

#[test]
fn quartic_levels_match_oracles() {
    let e0 = shooting_oracle(2, false, 0.9, 1.2, 5.0);
    let e1 = shooting_oracle(2, true, 3.5, 4.0, 5.5);
    let r0 = refine_eigenvalue(&monomial(2), 0, 40).unwrap();
    let r1 = refine_eigenvalue(&monomial(2), 1, 40).unwrap();
    assert!((r0.energy.to_f64() - e0).abs() < 1e-9);
    assert!((r1.energy.to_f64() - e1).abs() < 1e-9);
    for (got, oracle) in [(&r0.energy, QUARTIC_E0), (&r1.energy, QUARTIC_E1)] {
        let oracle = parse_decimal(oracle, 40).unwrap();
        assert_eq!(to_decimal(got, 33), to_decimal(&oracle, 33));
    }
}

#[test]
fn quartic_ground_state_self_consistent_at_higher_precision() {
    let a = refine_eigenvalue(&monomial(2), 0, 60).unwrap();
    let b = refine_eigenvalue(&monomial(2), 0, 90).unwrap();
    assert_eq!(to_decimal(&a.energy, 58), to_decimal(&b.energy, 58));
}

#[test]
fn node_counts_match_state_index() {
    for n in 1..=3u32 {
        for state in [0u32, 1, 2, 5] {
            let eig = refine_eigenvalue(&monomial(n), state, 20).unwrap();
            assert_eq!(eig.nodes, state as usize, "n={n} N={state}");
            if n == 1 {
                assert!((eig.energy.to_f64() - f64::from(2 * state + 1)).abs() < 1e-15);
            }
        }
    }
}

#[test]
fn highly_excited_level_near_semiclassical_estimate() {
    let eig = refine_eigenvalue(&monomial(2), 100, 20).unwrap();
    let wkb = wkb_energy(2, 100).unwrap();
    assert!((eig.energy.to_f64() / wkb - 1.0).abs() < 1e-3);
    assert_eq!(eig.nodes, 100);
}

#[test]
fn quartic_tail_follows_semiclassical_decay() {
    // psi(6)^2 ≈ e^{-2 * 216 / 3} up to the dropped algebraic prefactor
    // (x^4 - E)^{-1/2}, worth -0.78 digits here; the energy must resolve that many digits
    let digits = 80;
    let e = refine_eigenvalue(&monomial(2), 0, digits).unwrap().energy;
    let (psi, _) = evaluate_wavefunction(&monomial(2), &e, StateParity::Even, 6.0, digits).unwrap();
    let squared = 2.0 * log10_abs(&psi);
    let expect = spatial_tail(2, e.to_f64(), 0.0, 6.0).unwrap();
    assert!((squared - expect).abs() < 2.0, "{squared} vs {expect}");
    let prefactor = -0.5 * (1296.0 - e.to_f64()).log10();
    assert!((squared - expect - prefactor).abs() < 1.0);
}

#[test]
fn eigenvalue_sensitivity_grows_with_perturbation() {
    let digits = 60;
    let spec = monomial(2);
    let e0 = parse_decimal(QUARTIC_E0, digits).unwrap();
    let x_f = spec.matching_point(0, 45.0).unwrap();
    let at = |d: u32| {
        let delta = Float::with_val(prec_bits(digits), Float::i_pow_u(10, d)).recip();
        let e = Float::with_val(prec_bits(digits), &e0 + &delta);
        let (psi, _) = evaluate_wavefunction(&spec, &e, StateParity::Even, x_f, digits).unwrap();
        log10_abs(&psi)
    };
    let logs: Vec<f64> = [10u32, 20, 30].iter().map(|&d| at(d)).collect();
    assert!(
        logs[0] - logs[1] >= 9.0 && logs[1] - logs[2] >= 9.0,
        "{logs:?}"
    );
}

#[test]
fn converged_eigenfunction_decays_at_plan_window() {
    let p = 50;
    let spec = monomial(2);
    let plan = plan_state(&spec, 0, p).unwrap();
    let eig = refine_eigenvalue(&spec, 0, p + 25).unwrap();
    let ratio = matching_residual_log10(&spec, &eig, plan.x_max, p + 25).unwrap();
    assert!(2.0 * ratio < -f64::from(p - 5), "{ratio}");
}

#[test]
fn bisection_exit_brackets_sign_change() {
    let s = Rational::from((1, 10));
    let digits = 30;
    let eig = refine_double_well_ground(&s, digits).unwrap();
    let spec = PotentialSpec::DoubleWell { s };
    let bits = prec_bits(digits + 20);
    let delta = Float::with_val(bits, Float::i_pow_u(10, digits - 1)).recip() * eig.energy.clone();
    let lo = Float::with_val(bits, &eig.energy - &delta);
    let hi = Float::with_val(bits, &eig.energy + &delta);
    let sign = |e: &Float| {
        Solver::new(&spec, e, StateParity::Even, digits + 20)
            .unwrap()
            .sweep(eig.matching_point)
            .unwrap()
            .end()
            .1
            .is_sign_positive()
    };
    assert_ne!(sign(&lo), sign(&hi));
}

#[test]
fn double_well_ground_states() {
    // finite-difference oracles
    let small = refine_double_well_ground(&Rational::from((1, 100)), 20).unwrap();
    assert!((small.energy.to_f64() - 0.019_949_7).abs() < 1e-6);
    assert!((small.energy.to_f64() / 0.02 - 1.0).abs() < 0.15);
    assert_eq!(small.nodes, 0);
    let unit = refine_double_well_ground(&Rational::from(1), 20).unwrap();
    assert!((unit.energy.to_f64() - 1.137_786).abs() < 1e-5);
    assert!(unit.energy > 1);
}
