//! Model integrands `e^{-x^2}`, `e^{-x^{2n}}` and `e^{-(x^2-a^2)^2}`, their
//! reference values, and saddle-point step-size planners.
//!
//! Each planner balances the Poisson (finite step) error, read off from the
//! dominant saddle point of the Fourier transform at `p = 2π/h`, against the
//! truncation error of summing only up to `x_max`.

use std::f64::consts::{LN_10, PI};

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use statrs::function::gamma::gamma;

use crate::bigreal::{gamma_quarter, pi, prec_bits};
use crate::error::{Error, Result};
use crate::plan::QuadPlan;
use crate::quadrature::Integrand;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModelKind {
    Gaussian,
    /// `e^{-x^{2n}}`, `n >= 1`.
    Power {
        n: u32,
    },
    /// `e^{-(x^2 - a^2)^2}`, humps at `x = ±a`.
    DoubleHump {
        a: f64,
    },
}

impl ModelKind {
    pub fn validate(self) -> Result<Self> {
        match self {
            ModelKind::Power { n: 0 } => Err(Error::OutOfRange {
                what: "power exponent n",
                value: "0".into(),
                range: "n >= 1",
            }),
            ModelKind::DoubleHump { a } if !(a > 0.0) || !a.is_finite() => {
                Err(Error::non_positive("hump position a", a))
            }
            k => Ok(k),
        }
    }
}

pub fn model_integrand(kind: ModelKind) -> Result<Integrand> {
    let f = match kind.validate()? {
        ModelKind::Gaussian => {
            Integrand::even(|x| (-Float::with_val(x.prec(), x.square_ref())).exp())
        }
        ModelKind::Power { n } => Integrand::even(move |x| {
            let p = Float::with_val(x.prec(), x.pow(2 * n));
            (-p).exp()
        }),
        ModelKind::DoubleHump { a } => Integrand::even(move |x| {
            let mut q = Float::with_val(x.prec(), x.square_ref());
            q -= Float::with_val(x.prec(), a).square();
            (-q.square()).exp()
        }),
    };
    Ok(f)
}

/// Reference value of a model integral over the real line.
#[derive(Clone, Debug)]
pub enum ClosedForm {
    /// Full-precision value.
    Exact(Float),
    /// No full-precision closed form; a double-precision oracle (about 13 digits).
    Unavailable { oracle: f64 },
}

impl ClosedForm {
    pub fn approx(&self) -> f64 {
        match self {
            ClosedForm::Exact(v) => v.to_f64(),
            ClosedForm::Unavailable { oracle } => *oracle,
        }
    }
}

pub fn closed_form(kind: ModelKind, digits: u32) -> Result<ClosedForm> {
    let digits = digits.max(1);
    let bits = prec_bits(digits);
    Ok(match kind.validate()? {
        ModelKind::Gaussian | ModelKind::Power { n: 1 } => ClosedForm::Exact(pi(digits).sqrt()),
        ModelKind::Power { n: 2 } => {
            ClosedForm::Exact(Float::with_val(bits, gamma_quarter(digits) / 2u32))
        }
        ModelKind::Power { n } => {
            let nf = f64::from(n);
            ClosedForm::Unavailable {
                oracle: gamma(1.0 / (2.0 * nf)) / nf,
            }
        }
        ModelKind::DoubleHump { a } => ClosedForm::Unavailable {
            oracle: double_hump_bessel(a),
        },
    })
}

/// `a e^{-a^4/2} [K_{1/4}(a^4/2)/sqrt 2 + π I_{1/4}(a^4/2)]` in double precision.
pub fn double_hump_bessel(a: f64) -> f64 {
    let z = a.powi(4) / 2.0;
    let nu = 0.25;
    let i_plus = scaled_bessel_i(nu, z);
    let i_minus = scaled_bessel_i(-nu, z);
    let k = PI / 2.0 * (i_minus - i_plus) / (nu * PI).sin();
    a * (k / 2f64.sqrt() + PI * i_plus)
}

/// `e^{-z} I_nu(z)` from the ascending series.
fn scaled_bessel_i(nu: f64, z: f64) -> f64 {
    let q = z * z / 4.0;
    let mut term = (nu * (z / 2.0).ln() - z).exp() / gamma(nu + 1.0);
    let mut sum = term;
    for k in 1..10_000 {
        let k = f64::from(k);
        term *= q / (k * (k + nu));
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn check_digits(digits: u32) -> Result<()> {
    if digits < 5 {
        return Err(Error::OutOfRange {
            what: "target digits P",
            value: digits.to_string(),
            range: "P >= 5",
        });
    }
    Ok(())
}

/// `M + 1 = ceil(P ln10 / π)`, `h = sqrt(π/(M+1))`, `x_max = (M+1) h`.
pub fn plan_gaussian(digits: u32) -> Result<QuadPlan> {
    check_digits(digits)?;
    let steps = (f64::from(digits) * LN_10 / PI).ceil() as usize;
    let mut plan = plan_gaussian_steps(steps - 1);
    plan.target_digits = digits;
    Ok(plan)
}

/// Gaussian plan for a fixed number of steps `m`.
pub fn plan_gaussian_steps(m: usize) -> QuadPlan {
    let mp1 = (m + 1) as f64;
    let h = (PI / mp1).sqrt();
    let est = -PI * mp1 / LN_10;
    QuadPlan {
        h,
        x_min: 0.0,
        x_max: mp1 * h,
        m,
        target_digits: (-est).floor() as u32,
        est_error_log10: est,
    }
}

/// Saddle-point constants for `e^{-x^{2n}}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerConstants {
    /// Finite-step error is `exp(-a_n h^{-2n/(2n-1)})`.
    pub a_n: f64,
    /// Balanced step `h = b_n (M+1)^{-(1 - 1/2n)}`.
    pub b_n: f64,
    /// Balanced error `exp(-c_n (M+1))`.
    pub c_n: f64,
}

pub fn power_constants(n: u32) -> PowerConstants {
    let nf = f64::from(n);
    let g = (2.0 * nf - 1.0) * (PI / (4.0 * nf - 2.0)).sin();
    let a_n = g * (PI / nf).powf(2.0 * nf / (2.0 * nf - 1.0));
    let b_n = (PI / nf).powf(1.0 / (2.0 * nf)) * g.powf((2.0 * nf - 1.0) / (4.0 * nf * nf));
    let c_n = PI / nf * g.powf(1.0 - 1.0 / (2.0 * nf));
    PowerConstants { a_n, b_n, c_n }
}

pub fn plan_power(n: u32, digits: u32) -> Result<QuadPlan> {
    ModelKind::Power { n }.validate()?;
    check_digits(digits)?;
    let c = power_constants(n);
    let steps = (f64::from(digits) * LN_10 / c.c_n).ceil() as usize;
    let mut plan = plan_power_steps(n, steps - 1)?;
    plan.target_digits = digits;
    Ok(plan)
}

pub fn plan_power_steps(n: u32, m: usize) -> Result<QuadPlan> {
    ModelKind::Power { n }.validate()?;
    let c = power_constants(n);
    let nf = f64::from(n);
    let mp1 = (m + 1) as f64;
    let h = c.b_n * mp1.powf(-(1.0 - 1.0 / (2.0 * nf)));
    let est = -c.c_n * mp1 / LN_10;
    Ok(QuadPlan {
        h,
        x_min: 0.0,
        x_max: mp1 * h,
        m,
        target_digits: (-est).floor() as u32,
        est_error_log10: est,
    })
}

/// Geometry of a double-hump plan for a target error `e^{-budget}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DoubleHumpGeometry {
    pub eta: f64,
    pub h: f64,
    /// `(4/3) a^4 sinh^2(eta) cosh(2 eta)`; equals the budget by construction.
    pub hump_s: f64,
    pub x_min: f64,
    pub x_max: f64,
}

/// Solves `(4/3) a^4 sinh^2(eta) cosh(2 eta) = budget` and derives the window.
///
/// With `t = sinh^2 eta` the condition is the quadratic `(4/3) a^4 t (1 + 2t) = budget`.
/// The window is where `(x^2 - a^2)^2 <= hump_s`, i.e. `x^2 = a^2 ± sqrt(hump_s)`.
pub fn double_hump_geometry(a: f64, budget: f64) -> DoubleHumpGeometry {
    let q = 3.0 * budget / (4.0 * a.powi(4));
    let t = (-1.0 + (1.0 + 8.0 * q).sqrt()) / 4.0;
    let sinh_eta = t.sqrt();
    let eta = sinh_eta.asinh();
    let sinh_3eta = 3.0 * sinh_eta + 4.0 * sinh_eta.powi(3);
    let h = 27f64.sqrt() * PI / (4.0 * a.powi(3) * sinh_3eta);
    let hump_s = 4.0 / 3.0 * a.powi(4) * t * (1.0 + 2.0 * t);
    let root_s = hump_s.sqrt();
    let x_max = (a * a + root_s).sqrt();
    let x_min = if root_s >= a * a {
        0.0
    } else {
        (a * a - root_s).sqrt()
    };
    DoubleHumpGeometry {
        eta,
        h,
        hump_s,
        x_min,
        x_max,
    }
}

pub fn plan_double_hump(a: f64, digits: u32) -> Result<QuadPlan> {
    ModelKind::DoubleHump { a }.validate()?;
    check_digits(digits)?;
    let budget = f64::from(digits) * LN_10;
    let g = double_hump_geometry(a, budget);
    let m = ((g.x_max - g.x_min) / g.h).ceil() as usize;
    Ok(QuadPlan {
        h: g.h,
        x_min: g.x_min,
        x_max: g.x_max,
        m,
        target_digits: digits,
        est_error_log10: -budget / LN_10,
    })
}

/// Double-hump plan using exactly `m` steps: the error budget is solved so
/// that the window spans `m h`.
pub fn plan_double_hump_steps(a: f64, m: usize) -> Result<QuadPlan> {
    ModelKind::DoubleHump { a }.validate()?;
    if m == 0 {
        return Err(Error::InvalidStepCount {
            m,
            reason: "double-hump plan needs M >= 1",
        });
    }
    let steps = |budget: f64| {
        let g = double_hump_geometry(a, budget);
        (g.x_max - g.x_min) / g.h
    };
    let target = m as f64;
    let (mut lo, mut hi) = (1e-6, 1.0);
    while steps(hi) < target {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::NoRoot("double-hump step budget".into()));
        }
    }
    if steps(lo) > target {
        return Err(Error::NoRoot(format!("M = {m} too small for a = {a}")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if steps(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    let budget = 0.5 * (lo + hi);
    let g = double_hump_geometry(a, budget);
    let est = -budget / LN_10;
    Ok(QuadPlan {
        h: g.h,
        x_min: g.x_min,
        x_max: g.x_max,
        m,
        target_digits: (-est).floor().max(0.0) as u32,
        est_error_log10: est,
    })
}

/// Planner for any model kind.
pub fn plan_model(kind: ModelKind, digits: u32) -> Result<QuadPlan> {
    match kind.validate()? {
        ModelKind::Gaussian => plan_gaussian(digits),
        ModelKind::Power { n } => plan_power(n, digits),
        ModelKind::DoubleHump { a } => plan_double_hump(a, digits),
    }
}

/// Fixed-step planner for any model kind.
pub fn plan_model_steps(kind: ModelKind, m: usize) -> Result<QuadPlan> {
    match kind.validate()? {
        ModelKind::Gaussian => Ok(plan_gaussian_steps(m)),
        ModelKind::Power { n } => plan_power_steps(n, m),
        ModelKind::DoubleHump { a } => plan_double_hump_steps(a, m),
    }
}

/// Integrands on `[0, 1]` with very smooth endpoint behaviour.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntervalModel {
    /// `I_n = ∫_0^1 (1 - x^2)^n dx`.
    Polynomial { n: u32 },
    /// `J = ∫_0^1 [1 - tanh((2x-1) / (1 - (2x-1)^2))] dx`; every derivative
    /// vanishes at both ends.
    TanhKink,
}

pub fn interval_integrand(model: IntervalModel) -> Integrand {
    match model {
        IntervalModel::Polynomial { n } => Integrand::new(move |x| {
            let mut q = Float::with_val(x.prec(), x.square_ref());
            q = 1 - q;
            q.pow(n)
        }),
        IntervalModel::TanhKink => Integrand::new(|x| {
            let prec = x.prec();
            let u = Float::with_val(prec, x * 2u32) - 1u32;
            let gap = 1 - Float::with_val(prec, u.square_ref());
            if gap <= 0 {
                return Float::with_val(prec, if u < 0 { 2 } else { 0 });
            }
            let t = Float::with_val(prec, u / gap).tanh();
            1 - t
        })
        .with_smooth_endpoints(),
    }
    .interval_only()
}

/// Exact value: `I_n = 2^{2n} (n!)^2 / (2n+1)!`, `J = 1`.
pub fn interval_exact(model: IntervalModel) -> Rational {
    match model {
        IntervalModel::Polynomial { n } => {
            let f = Integer::from(Integer::factorial(n));
            let num = (Integer::from(1) << (2 * n)) * Integer::from(&f * &f);
            Rational::from((num, Integer::from(Integer::factorial(2 * n + 1))))
        }
        IntervalModel::TanhKink => Rational::from(1),
    }
}
