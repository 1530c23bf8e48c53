use anyhow::{bail, Result};
use rug::Float;
use trapnorm::bigreal::{log10_abs, prec_bits};
use trapnorm::models::{
    closed_form, interval_exact, interval_integrand, model_integrand, plan_model_steps, ClosedForm,
    IntervalModel, ModelKind,
};
use trapnorm::quadrature::{
    em_corrected_trapezoid, extended_simpson, extended_trapezoid, infinite_trapezoid,
    EndpointStencil,
};
use trapnorm::QuadPlan;

use crate::target::Rule;

/// Digits of relative agreement, `-log10 |a - b| / |b|`.
pub fn agreement(a: &Float, b: &Float) -> f64 {
    let bits = a.prec().max(b.prec());
    let mut d = Float::with_val(bits, a - b);
    d /= b;
    -log10_abs(&d)
}

pub fn line_sum(kind: ModelKind, plan: &QuadPlan, digits: u32, threads: usize) -> Result<Float> {
    let f = model_integrand(kind)?;
    Ok(infinite_trapezoid(&f, plan, prec_bits(digits), threads)?.value)
}

pub struct Reference {
    pub value: Float,
    pub source: &'static str,
    /// Double-precision oracle when no exact value exists.
    pub oracle: Option<f64>,
}

/// Exact value when available, otherwise the sum with doubled `M` at twice the digits.
pub fn line_reference(
    kind: ModelKind,
    plan: &QuadPlan,
    digits: u32,
    threads: usize,
) -> Result<Reference> {
    match closed_form(kind, digits + 10)? {
        ClosedForm::Exact(value) => Ok(Reference {
            value,
            source: "closed form",
            oracle: None,
        }),
        ClosedForm::Unavailable { oracle } => {
            let wide = plan_model_steps(kind, 2 * plan.m + 1)?;
            let ref_digits = 2 * digits + 20 + wide.guard_digits();
            Ok(Reference {
                value: line_sum(kind, &wide, ref_digits, threads)?,
                source: "doubled-M sum",
                oracle: Some(oracle),
            })
        }
    }
}

pub fn interval_sum(model: IntervalModel, rule: Rule, m: usize, bits: u32) -> Result<Float> {
    let f = interval_integrand(model);
    let (a, b) = (Float::with_val(bits, 0), Float::with_val(bits, 1));
    let r = match rule {
        Rule::Trap => extended_trapezoid(&f, &a, &b, m)?,
        Rule::Simpson => extended_simpson(&f, &a, &b, m)?,
        Rule::Em1 => em_corrected_trapezoid(&f, &a, &b, m, 1, EndpointStencil::OneSided)?,
        Rule::Em2 => em_corrected_trapezoid(&f, &a, &b, m, 2, EndpointStencil::OneSided)?,
    };
    Ok(r.value)
}

pub fn interval_value(model: IntervalModel, bits: u32) -> Float {
    Float::with_val(bits, interval_exact(model))
}

/// Samples used by a rule on `M` steps.
pub fn interval_evaluations(rule: Rule, m: usize) -> usize {
    match rule {
        Rule::Trap | Rule::Simpson => m + 1,
        Rule::Em1 | Rule::Em2 => m + 5,
    }
}

pub fn require_trapezoid(rule: Rule) -> Result<()> {
    if rule != Rule::Trap {
        bail!("rule {rule} applies only to finite-interval models (In:<n>, Jinf)");
    }
    Ok(())
}
