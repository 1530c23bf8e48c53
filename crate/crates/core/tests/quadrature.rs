use proptest::prelude::*;
use rug::Float;
use trapnorm::bigreal::{log10_abs, pi, prec_bits, to_decimal};
use trapnorm::models::{
    interval_exact, interval_integrand, model_integrand, plan_gaussian, IntervalModel, ModelKind,
};
use trapnorm::quadrature::{
    apply_basic_rule, em_corrected_trapezoid, extended_simpson, extended_trapezoid,
    infinite_trapezoid, BasicRule, EndpointStencil, Integrand,
};
use trapnorm::QuadPlan;

const BITS: u32 = 256;

fn fl(v: f64) -> Float {
    Float::with_val(BITS, v)
}

fn exp_integrand() -> Integrand {
    Integrand::new(|x| Float::with_val(x.prec(), x.exp_ref()))
}

fn abs_err(v: &Float, exact: &Float) -> f64 {
    log10_abs(&Float::with_val(v.prec(), v - exact))
}

#[test]
fn boole_is_not_exact_for_degree_six() {
    let f = Integrand::new(|x| {
        use rug::ops::Pow;
        Float::with_val(x.prec(), x.pow(6u32))
    });
    let v = apply_basic_rule(BasicRule::Boole, &f, &fl(0.0), &fl(1.0)).unwrap();
    let seventh = Float::with_val(BITS, 1) / 7u32;
    assert!(abs_err(&v, &seventh) > -5.0);
}

#[test]
fn tanh_kink_trapezoid_converges() {
    let f = interval_integrand(IntervalModel::TanhKink);
    let v = extended_trapezoid(&f, &fl(0.0), &fl(1.0), 512)
        .unwrap()
        .value;
    assert!(abs_err(&v, &fl(1.0)) < -12.0);
}

#[test]
fn simpson_error_tracks_trapezoid_at_double_step() {
    let model = IntervalModel::Polynomial { n: 12 };
    let f = interval_integrand(model);
    let exact = Float::with_val(BITS, interval_exact(model));
    let s = extended_simpson(&f, &fl(0.0), &fl(1.0), 64).unwrap().value;
    let t2 = extended_trapezoid(&f, &fl(0.0), &fl(1.0), 32)
        .unwrap()
        .value;
    let ratio = 10f64.powf(abs_err(&s, &exact) - abs_err(&t2, &exact));
    assert!((1.0 / 6.0..=2.0 / 3.0).contains(&ratio), "{ratio}");
}

#[test]
fn simpson_leading_endpoint_coefficient() {
    // S(h) - I ≈ c Δ3 with Δ3 = (f'''(1) - f'''(0)) h^4 = (e - 1) h^4; expected c = 1/180
    let f = exp_integrand();
    let e1 = Float::with_val(BITS, fl(1.0).exp() - 1u32);
    for m in [32usize, 64] {
        let s = extended_simpson(&f, &fl(0.0), &fl(1.0), m).unwrap().value;
        let h4 = (1.0 / m as f64).powi(4);
        let c = Float::with_val(BITS, &s - &e1).to_f64() / (e1.to_f64() * h4);
        assert!((c * 180.0 - 1.0).abs() < 0.05, "m={m} c={c}");
    }
}

#[test]
fn euler_maclaurin_first_correction_gains_two_digits() {
    let f = exp_integrand();
    let exact = Float::with_val(BITS, fl(1.0).exp() - 1u32);
    let t = extended_trapezoid(&f, &fl(0.0), &fl(1.0), 16)
        .unwrap()
        .value;
    let c = em_corrected_trapezoid(&f, &fl(0.0), &fl(1.0), 16, 1, EndpointStencil::OneSided)
        .unwrap()
        .value;
    assert!(abs_err(&t, &exact) - abs_err(&c, &exact) >= 2.0);
}

#[test]
fn euler_maclaurin_second_correction_near_fifth_order() {
    // the one-sided stencil leaves an h^5 defect, so the fitted order sits just below 5
    let f = exp_integrand();
    let exact = Float::with_val(BITS, fl(1.0).exp() - 1u32);
    let pts: Vec<(f64, f64)> = [16usize, 32, 64, 128]
        .iter()
        .map(|&m| {
            let v = em_corrected_trapezoid(&f, &fl(0.0), &fl(1.0), m, 2, EndpointStencil::OneSided)
                .unwrap()
                .value;
            ((m as f64).log10(), abs_err(&v, &exact))
        })
        .collect();
    let order = -slope(&pts);
    assert!((order - 5.0).abs() < 0.1, "{order}");
}

#[test]
fn central_stencil_refused_on_interval_only_integrand() {
    let f = interval_integrand(IntervalModel::TanhKink);
    assert!(
        em_corrected_trapezoid(&f, &fl(0.0), &fl(1.0), 8, 1, EndpointStencil::Central).is_err()
    );
}

#[test]
fn poisson_error_law() {
    let f = model_integrand(ModelKind::Gaussian).unwrap();
    let root_pi = Float::with_val(BITS, pi(80).sqrt());
    for h in [0.7, 0.8, 1.0, 1.2] {
        let m = (12.0 / h) as usize;
        let plan = QuadPlan {
            h,
            x_min: 0.0,
            x_max: m as f64 * h,
            m,
            target_digits: 10,
            est_error_log10: f64::NAN,
        };
        let v = infinite_trapezoid(&f, &plan, BITS, 1).unwrap().value;
        let defect = Float::with_val(BITS, &v - &root_pi).to_f64();
        let law =
            (4.0 * std::f64::consts::PI).sqrt() * (-std::f64::consts::PI.powi(2) / (h * h)).exp();
        assert!((defect / law - 1.0).abs() < 0.1, "h={h}");
    }
}

#[test]
fn gaussian_plan_end_to_end() {
    let f = model_integrand(ModelKind::Gaussian).unwrap();
    let plan = plan_gaussian(50).unwrap();
    let bits = prec_bits(50 + plan.guard_digits());
    let v = infinite_trapezoid(&f, &plan, bits, 1).unwrap().value;
    let root_pi = Float::with_val(bits, pi(80).sqrt());
    assert!(abs_err(&v, &root_pi) < -48.0);
}

#[test]
fn over_refinement_costs_at_most_a_digit() {
    let f = model_integrand(ModelKind::Gaussian).unwrap();
    let root_pi = Float::with_val(prec_bits(120), pi(120).sqrt());
    let plan = plan_gaussian(50).unwrap();
    let fine = QuadPlan {
        h: plan.h / 2.0,
        m: 2 * plan.m + 1,
        ..plan.clone()
    };
    let coarse = infinite_trapezoid(&f, &plan, prec_bits(100), 1)
        .unwrap()
        .value;
    let refined = infinite_trapezoid(&f, &fine, prec_bits(100), 1)
        .unwrap()
        .value;
    assert!(abs_err(&refined, &root_pi) <= abs_err(&coarse, &root_pi) + 1.0);
}

fn slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn cubic(c: [i32; 4]) -> Integrand {
    Integrand::new(move |x| {
        let mut acc = Float::new(x.prec());
        for &k in c.iter().rev() {
            acc *= x;
            acc += k;
        }
        let e = Float::with_val(x.prec(), x.exp_ref());
        acc * e
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn richardson_identity(half in 1usize..40, a in -8i32..8, w in 1u32..6, c in prop::array::uniform4(-5i32..5)) {
        let m = 2 * half;
        let f = cubic(c);
        let lo = Float::with_val(BITS, a) / 4u32;
        let hi = Float::with_val(BITS, &lo + w);
        let s = extended_simpson(&f, &lo, &hi, m).unwrap().value;
        let t = extended_trapezoid(&f, &lo, &hi, m).unwrap().value;
        let t2 = extended_trapezoid(&f, &lo, &hi, half).unwrap().value;
        let rich = (Float::with_val(BITS, &t * 4u32) - t2) / 3u32;
        let diff = Float::with_val(BITS, &s - &rich);
        prop_assert!(log10_abs(&diff) - log10_abs(&s) < -(f64::from(BITS) * std::f64::consts::LOG10_2 - 3.0));
    }

    #[test]
    fn translation_covariance(m in 2usize..50, shift in -16i32..16) {
        let c = Float::with_val(BITS, shift) / 8u32;
        let f = Integrand::new(|x| {
            let q = Float::with_val(x.prec(), x.square_ref());
            (-q).exp()
        });
        let g = {
            let c = c.clone();
            Integrand::new(move |x| {
                let y = Float::with_val(x.prec(), x - &c);
                let q = y.square();
                (-q).exp()
            })
        };
        let (a, b) = (fl(-0.5), fl(1.25));
        let ac = Float::with_val(BITS, &a + &c);
        let bc = Float::with_val(BITS, &b + &c);
        let base = extended_trapezoid(&f, &a, &b, m).unwrap().value;
        let moved = extended_trapezoid(&g, &ac, &bc, m).unwrap().value;
        prop_assert_eq!(to_decimal(&base, 60), to_decimal(&moved, 60));
    }

    #[test]
    fn thread_count_invariance(m in 1usize..80, threads in 2usize..9) {
        let f = model_integrand(ModelKind::Power { n: 2 }).unwrap();
        let plan = QuadPlan { h: 0.1, x_min: 0.0, x_max: m as f64 * 0.1, m, target_digits: 10, est_error_log10: -10.0 };
        let one = infinite_trapezoid(&f, &plan, BITS, 1).unwrap().value;
        let many = infinite_trapezoid(&f, &plan, BITS, threads).unwrap().value;
        prop_assert_eq!(one, many);
    }
}
