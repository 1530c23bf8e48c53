//! Newton-Cotes rules, composite trapezoid and Simpson sums, Euler-Maclaurin
//! endpoint corrections, and the trapezoidal sum over the whole real line.
//!
//! All sums are reduced sequentially in ascending sample index at the working
//! precision of the inputs. Sample evaluation for the infinite-range sum may
//! be spread over worker threads; the reduction order never changes, so the
//! result is bit-identical for any thread count.

use std::fmt;
use std::sync::Arc;

use rug::{Float, Rational};

use crate::bigreal::bernoulli_ratio;
use crate::error::{Error, Result};
use crate::plan::QuadPlan;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    None,
}

type EvalFn = dyn Fn(&Float) -> Float + Send + Sync;

/// A pure real function evaluated at the precision of its argument.
#[derive(Clone)]
pub struct Integrand {
    eval: Arc<EvalFn>,
    pub parity: Parity,
    /// All derivatives vanish at the endpoints of the natural interval, so
    /// Euler-Maclaurin endpoint corrections are zero.
    pub smooth_endpoints: bool,
    /// Whether the function may be sampled outside the integration interval.
    pub defined_outside: bool,
}

impl Integrand {
    pub fn new(f: impl Fn(&Float) -> Float + Send + Sync + 'static) -> Self {
        Integrand {
            eval: Arc::new(f),
            parity: Parity::None,
            smooth_endpoints: false,
            defined_outside: true,
        }
    }

    pub fn even(f: impl Fn(&Float) -> Float + Send + Sync + 'static) -> Self {
        Integrand {
            parity: Parity::Even,
            ..Integrand::new(f)
        }
    }

    pub fn with_smooth_endpoints(mut self) -> Self {
        self.smooth_endpoints = true;
        self
    }

    pub fn interval_only(mut self) -> Self {
        self.defined_outside = false;
        self
    }

    pub fn eval(&self, x: &Float) -> Float {
        (self.eval)(x)
    }
}

impl fmt::Debug for Integrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Integrand")
            .field("parity", &self.parity)
            .field("smooth_endpoints", &self.smooth_endpoints)
            .field("defined_outside", &self.defined_outside)
            .finish_non_exhaustive()
    }
}

#[derive(Clone, Debug)]
pub struct QuadResult {
    pub value: Float,
    /// Steps taken; the rule used `m + 1` abscissae (per half-line for infinite sums).
    pub m: usize,
    pub h: Float,
    /// Predicted log10 of the absolute error, `NaN` when the rule makes no prediction.
    pub est_error_log10: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasicRule {
    Trapezoid,
    Simpson,
    Simpson38,
    Boole,
}

impl BasicRule {
    fn steps(self) -> u32 {
        match self {
            BasicRule::Trapezoid => 1,
            BasicRule::Simpson => 2,
            BasicRule::Simpson38 => 3,
            BasicRule::Boole => 4,
        }
    }

    /// (weights, overall factor) with the rule equal to `factor * h * sum w_m f_m`.
    fn weights(self) -> (&'static [u32], Rational) {
        match self {
            BasicRule::Trapezoid => (&[1, 1], Rational::from((1, 2))),
            BasicRule::Simpson => (&[1, 4, 1], Rational::from((1, 3))),
            BasicRule::Simpson38 => (&[1, 3, 3, 1], Rational::from((3, 8))),
            BasicRule::Boole => (&[7, 32, 12, 32, 7], Rational::from((2, 45))),
        }
    }
}

fn working_prec(a: &Float, b: &Float) -> u32 {
    a.prec().max(b.prec())
}

fn abscissa(a: &Float, h: &Float, m: usize, prec: u32) -> Float {
    let mut x = Float::with_val(prec, h * m as u64);
    x += a;
    x
}

/// Single-panel Newton-Cotes rule on `[a, b]`.
pub fn apply_basic_rule(rule: BasicRule, f: &Integrand, a: &Float, b: &Float) -> Result<Float> {
    if b <= a {
        return Err(Error::MalformedPlan("basic rule needs a < b".into()));
    }
    let prec = working_prec(a, b);
    let steps = rule.steps();
    let h = Float::with_val(prec, b - a) / steps;
    let (weights, factor) = rule.weights();
    let mut acc = Float::new(prec);
    for (m, &w) in weights.iter().enumerate() {
        let x = abscissa(a, &h, m, prec);
        acc += f.eval(&x) * w;
    }
    Ok(acc * h * factor)
}

fn check_steps(m: usize, min: usize, reason: &'static str) -> Result<()> {
    if m < min {
        return Err(Error::InvalidStepCount { m, reason });
    }
    Ok(())
}

/// Composite trapezoid `[f_0/2 + f_1 + ... + f_{M-1} + f_M/2] h`, `h = (b - a)/M`.
pub fn extended_trapezoid(f: &Integrand, a: &Float, b: &Float, m: usize) -> Result<QuadResult> {
    check_steps(m, 1, "trapezoid needs M >= 1")?;
    let prec = working_prec(a, b);
    let h = Float::with_val(prec, b - a) / m as u64;
    let mut sum = f.eval(a) / 2u32;
    for k in 1..m {
        sum += f.eval(&abscissa(a, &h, k, prec));
    }
    sum += f.eval(b) / 2u32;
    let value = Float::with_val(prec, &sum * &h);
    Ok(QuadResult {
        value,
        m,
        h,
        est_error_log10: f64::NAN,
    })
}

/// Composite Simpson sum with weights 1, 4, 2, ..., 2, 4, 1 times `h/3`.
pub fn extended_simpson(f: &Integrand, a: &Float, b: &Float, m: usize) -> Result<QuadResult> {
    check_steps(m, 2, "Simpson needs M >= 2")?;
    if !m.is_multiple_of(2) {
        return Err(Error::InvalidStepCount {
            m,
            reason: "Simpson needs an even M",
        });
    }
    let prec = working_prec(a, b);
    let h = Float::with_val(prec, b - a) / m as u64;
    let mut sum = f.eval(a);
    for k in 1..m {
        let w = if k % 2 == 1 { 4u32 } else { 2u32 };
        sum += f.eval(&abscissa(a, &h, k, prec)) * w;
    }
    sum += f.eval(b);
    let value = Float::with_val(prec, &sum * &h) / 3u32;
    Ok(QuadResult {
        value,
        m,
        h,
        est_error_log10: f64::NAN,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stencil {
    Central,
    Forward,
    Backward,
}

/// Three-point estimate of `f'(x)` with sample spacing `delta`.
///
/// The central stencil requires `delta < h/2`. One-sided stencils carry an
/// `(1/3) f''' delta^2` error which the Euler-Maclaurin correction exploits.
pub fn endpoint_derivative(
    f: &Integrand,
    x: &Float,
    h: &Float,
    stencil: Stencil,
    delta: &Float,
) -> Result<Float> {
    if !(delta.is_sign_positive() && !delta.is_zero()) {
        return Err(Error::non_positive("stencil spacing delta", delta.to_f64()));
    }
    let prec = x.prec().max(delta.prec());
    let at = |k: i32| {
        let mut p = Float::with_val(prec, delta * k);
        p += x;
        f.eval(&p)
    };
    let two_delta = Float::with_val(prec, delta * 2u32);
    let value = match stencil {
        Stencil::Central => {
            if Float::with_val(prec, delta * 2u32) >= *h {
                return Err(Error::OutOfRange {
                    what: "central stencil spacing delta",
                    value: delta.to_f64().to_string(),
                    range: "(0, h/2)",
                });
            }
            (at(1) - at(-1)) / two_delta
        }
        Stencil::Forward => {
            let num =
                Float::with_val(prec, at(0) * 3u32) - Float::with_val(prec, at(1) * 4u32) + at(2);
            -(num / two_delta)
        }
        Stencil::Backward => {
            let num =
                Float::with_val(prec, at(0) * 3u32) - Float::with_val(prec, at(-1) * 4u32) + at(-2);
            num / two_delta
        }
    };
    Ok(value)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndpointStencil {
    /// Central differences with `delta = h/4`; samples outside `[a, b]`.
    Central,
    /// Forward difference at `a`, backward at `b`.
    OneSided,
}

/// Trapezoid sum with the `Delta^(1)` Euler-Maclaurin term removed.
///
/// `k_max = 1` subtracts `Delta^(1)/12` using derivatives estimated with
/// spacing `delta = h/4`. `k_max = 2` additionally removes `Delta^(3)`:
/// with one-sided stencils at `delta = h/sqrt(20)` the stencil error
/// `(1/3) f''' delta^2` feeds exactly `-Delta^(3)/720` into the estimated
/// first-derivative term, cancelling the third-order term of the expansion.
pub fn em_corrected_trapezoid(
    f: &Integrand,
    a: &Float,
    b: &Float,
    m: usize,
    k_max: u8,
    stencil: EndpointStencil,
) -> Result<QuadResult> {
    check_steps(m, 4, "endpoint-corrected trapezoid needs M >= 4")?;
    let prec = working_prec(a, b);
    let base = extended_trapezoid(f, a, b, m)?;
    let h = base.h.clone();
    let delta = match (k_max, stencil) {
        (1, _) => Float::with_val(prec, &h / 4u32),
        (2, EndpointStencil::OneSided) => {
            Float::with_val(prec, &h / Float::with_val(prec, 20).sqrt())
        }
        (2, EndpointStencil::Central) => {
            return Err(Error::OutOfRange {
                what: "stencil for k_max = 2",
                value: "central".into(),
                range: "one-sided only",
            })
        }
        _ => {
            return Err(Error::OutOfRange {
                what: "Euler-Maclaurin order k_max",
                value: k_max.to_string(),
                range: "{1, 2}",
            })
        }
    };
    let (lo, hi) = match stencil {
        EndpointStencil::Central => {
            if !f.defined_outside {
                return Err(Error::StencilOutsideDomain {
                    x: a.to_f64().to_string(),
                });
            }
            (Stencil::Central, Stencil::Central)
        }
        EndpointStencil::OneSided => (Stencil::Forward, Stencil::Backward),
    };
    let da = endpoint_derivative(f, a, &h, lo, &delta)?;
    let db = endpoint_derivative(f, b, &h, hi, &delta)?;
    let delta1 = Float::with_val(prec, db - da) * Float::with_val(prec, h.square_ref());
    let coeff = bernoulli_ratio(1)?;
    let correction = Float::with_val(prec, &delta1 * &coeff);
    let value = base.value - &correction;
    Ok(QuadResult {
        value,
        m,
        h,
        est_error_log10: f64::NAN,
    })
}

/// Evaluates `eval(0..count)` on up to `threads` workers, each owning one
/// contiguous block of indices, and returns the values in index order.
pub fn sample_concurrently<T, F>(count: usize, threads: usize, eval: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let threads = threads.clamp(1, count.max(1));
    if threads == 1 {
        return (0..count).map(eval).collect();
    }
    let block = count.div_ceil(threads);
    let eval = &eval;
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let start = (t * block).min(count);
                let end = ((t + 1) * block).min(count);
                scope.spawn(move || (start..end).map(eval).collect::<Vec<T>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("sampling worker panicked"))
            .collect()
    })
}

/// Trapezoidal sum over the real line following `plan`, at `prec` bits.
///
/// With `x_min = 0` this is `h f(0) + h sum_{m=1}^{M} [f(mh) + f(-mh)]`
/// (`2h f(mh)` for even integrands); with `x_min > 0` every sample
/// `+-(x_min + mh)` gets full weight `h`.
pub fn infinite_trapezoid(
    f: &Integrand,
    plan: &QuadPlan,
    prec: u32,
    threads: usize,
) -> Result<QuadResult> {
    plan.validate()?;
    let h = Float::with_val(prec, plan.h);
    let x_min = Float::with_val(prec, plan.x_min);
    let shifted = plan.x_min > 0.0;
    let mirror = f.parity != Parity::Even;
    let samples = sample_concurrently(plan.m + 1, threads, |m| {
        let x = abscissa(&x_min, &h, m, prec);
        let pos = f.eval(&x);
        let neg = if mirror && (shifted || m > 0) {
            Some(f.eval(&Float::with_val(prec, -&x)))
        } else {
            None
        };
        (pos, neg)
    });
    let mut sum = Float::new(prec);
    for (m, (pos, neg)) in samples.into_iter().enumerate() {
        match neg {
            Some(neg) => {
                sum += pos;
                sum += neg;
            }
            None if !shifted && m == 0 => sum += pos,
            None => sum += Float::with_val(prec, pos * 2u32),
        }
    }
    let value = Float::with_val(prec, &sum * &h);
    Ok(QuadResult {
        value,
        m: plan.m,
        h,
        est_error_log10: plan.est_error_log10,
    })
}
