//! Normalization integrals `∫ psi^2` of eigenfunctions: plan, refine the
//! eigenvalue, sample `psi^2` on the trapezoidal grid, sum.
//!
//! Precision actually obtained is measured against an independent reference
//! run with at least twice the samples and 50 more digits everywhere.

use std::sync::Arc;
use std::time::Instant;

use rug::Float;

use crate::bigreal::{log10_abs, prec_bits};
use crate::cache::EigenCache;
use crate::error::{Error, Result};
use crate::plan::QuadPlan;
use crate::quadrature::{infinite_trapezoid, Integrand};
use crate::schrodinger::{PotentialSpec, RefineOptions, Solver, StateParity};
use crate::wkb::{plan_double_well, plan_monomial_state, TailModel};

/// Default cap on `M + 1`.
pub const DEFAULT_MAX_EVALUATIONS: usize = 1_000_000;
/// Extra digits of the reference run.
pub const REFERENCE_EXTRA_DIGITS: u32 = 50;

#[derive(Clone, Debug)]
pub struct NormalizeOptions {
    pub threads: usize,
    pub max_evaluations: usize,
    /// Measure obtained precision with a reference run.
    pub reference: bool,
    /// Multiplies every sample of `psi` before squaring.
    pub psi_scale: Option<i64>,
    pub refine: RefineOptions,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions {
            threads: 1,
            max_evaluations: DEFAULT_MAX_EVALUATIONS,
            reference: true,
            psi_scale: None,
            refine: RefineOptions::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Timings {
    pub refine_ms: u64,
    pub integrate_ms: u64,
    pub reference_ms: u64,
}

#[derive(Clone, Debug)]
pub struct NormalizationResult {
    pub potential: PotentialSpec,
    pub state: u32,
    pub digits: u32,
    pub energy: Float,
    pub eigen_digits: u32,
    /// `∫ psi^2` with `psi(0) = 1` (even) or `psi'(0) = 1` (odd).
    pub integral: Float,
    pub norm_const: Float,
    pub plan: QuadPlan,
    pub p_est: f64,
    pub p_obt: Option<f64>,
    pub evaluations: usize,
    /// Nodes of the sampled eigenfunction on the real line.
    pub nodes: usize,
    pub cache_hit: bool,
    pub wall_time_ms: u64,
    pub timings: Timings,
}

/// Trapezoidal plan for `∫ psi_state^2` at `digits` digits.
pub fn plan_state(spec: &PotentialSpec, state: u32, digits: u32) -> Result<QuadPlan> {
    spec.validate()?;
    match spec {
        PotentialSpec::Monomial { n } => plan_monomial_state(*n, state, digits),
        PotentialSpec::DoubleWell { s } => {
            if state != 0 {
                return Err(Error::UnsupportedState(format!(
                    "{} supports only the ground state, got state {state}",
                    spec.id()
                )));
            }
            plan_double_well(s.to_f64(), digits)
        }
    }
}

/// Digits to which the eigenvalue is refined: `P + amplitude digits + guard`.
///
/// The amplitude is `2 ln C / ln10` for `x^{2n}` (taken at `x_max` for the
/// harmonic case) and `log10(1/s^2)` for the double well.
pub fn eigen_digits(spec: &PotentialSpec, state: u32, plan: &QuadPlan) -> Result<u32> {
    let shift = match spec {
        PotentialSpec::Monomial { n } => {
            TailModel::for_state(*n, state)?.amplitude_digits(plan.x_max)
        }
        PotentialSpec::DoubleWell { s } => -2.0 * s.to_f64().log10(),
    };
    Ok(plan.target_digits + shift.max(0.0).ceil() as u32 + plan.guard_digits())
}

/// `-log10(|result - reference| / |reference|)`, capped at `digits + 45`.
pub fn obtained_precision(result: &Float, reference: &Float, digits: u32) -> Result<f64> {
    if reference.is_zero() {
        return Err(Error::NonPositive {
            what: "reference integral",
            value: "0".into(),
        });
    }
    let cap = f64::from(digits + REFERENCE_EXTRA_DIGITS - 5);
    let bits = reference.prec().max(result.prec());
    let mut diff = Float::with_val(bits, result - reference);
    diff /= reference;
    Ok((-log10_abs(&diff)).min(cap))
}

pub fn normalize(
    spec: &PotentialSpec,
    state: u32,
    digits: u32,
    options: &NormalizeOptions,
    cache: &EigenCache,
) -> Result<NormalizationResult> {
    let start = Instant::now();
    let plan = plan_state(spec, state, digits)?;
    check_budget(&plan, options)?;
    let eigen_digits = eigen_digits(spec, state, &plan)?;

    let t = Instant::now();
    let (energy, cache_hit) = cache.energy(spec, state, eigen_digits, &options.refine)?;
    let refine_ms = elapsed_ms(t);

    let t = Instant::now();
    let run = integrate_state(spec, state, &energy, &plan, eigen_digits, options)?;
    let integrate_ms = elapsed_ms(t);

    let t = Instant::now();
    let p_obt = if options.reference {
        let reference = reference_run(spec, state, digits, &plan, options, cache)?;
        Some(obtained_precision(&run.integral, &reference, digits)?)
    } else {
        None
    };
    let reference_ms = elapsed_ms(t);

    let bits = run.integral.prec();
    let norm_const = Float::with_val(bits, run.integral.sqrt_ref()).recip();
    Ok(NormalizationResult {
        potential: spec.clone(),
        state,
        digits,
        energy,
        eigen_digits,
        integral: run.integral,
        norm_const,
        p_est: plan.estimated_digits(),
        evaluations: plan.evaluations(),
        plan,
        p_obt,
        nodes: run.nodes,
        cache_hit,
        wall_time_ms: elapsed_ms(start),
        timings: Timings {
            refine_ms,
            integrate_ms,
            reference_ms,
        },
    })
}

fn check_budget(plan: &QuadPlan, options: &NormalizeOptions) -> Result<()> {
    if plan.evaluations() > options.max_evaluations {
        return Err(Error::BudgetExceeded {
            evaluations: plan.evaluations(),
            limit: options.max_evaluations,
        });
    }
    Ok(())
}

fn elapsed_ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

struct StateIntegral {
    integral: Float,
    nodes: usize,
}

/// One sequential sweep to the last abscissa stores the breakpoints; every
/// sample then takes a single Taylor step from the breakpoint below it, so
/// the samples are independent and thread-count invariant.
fn integrate_state(
    spec: &PotentialSpec,
    state: u32,
    energy: &Float,
    plan: &QuadPlan,
    work_digits: u32,
    options: &NormalizeOptions,
) -> Result<StateIntegral> {
    let parity = StateParity::of_state(state);
    let solver = Arc::new(
        Solver::new(spec, energy, parity, work_digits)?.with_step_cap(options.refine.step_cap),
    );
    let x_end = plan.x_min + (plan.m as f64 + 0.5) * plan.h;
    let sweep = Arc::new(solver.sweep(x_end)?);
    let nodes = 2 * sweep.nodes + usize::from(parity == StateParity::Odd);
    let scale = options.psi_scale;
    let f = {
        let (solver, sweep) = (Arc::clone(&solver), Arc::clone(&sweep));
        Integrand::even(move |x| match solver.state_at(&sweep, x) {
            Ok((mut psi, _)) => {
                if let Some(c) = scale {
                    psi *= c;
                }
                psi.square()
            }
            Err(_) => Float::with_val(x.prec(), f64::NAN),
        })
    };
    let result = infinite_trapezoid(&f, plan, prec_bits(work_digits), options.threads)?;
    if result.value.is_nan() {
        return Err(Error::NotConverged {
            what: "eigenfunction sample",
            iterations: 0,
        });
    }
    Ok(StateIntegral {
        integral: result.value,
        nodes,
    })
}

/// Plan with step `min(h/2, h at P+50)` over the `P+50` window, at 50 more digits.
pub fn reference_plan(
    spec: &PotentialSpec,
    state: u32,
    digits: u32,
    plan: &QuadPlan,
) -> Result<QuadPlan> {
    let wide = plan_state(spec, state, digits + REFERENCE_EXTRA_DIGITS)?;
    let h = (plan.h / 2.0).min(wide.h);
    let m = ((wide.x_max - wide.x_min) / h).ceil() as usize;
    Ok(QuadPlan { h, m, ..wide })
}

fn reference_run(
    spec: &PotentialSpec,
    state: u32,
    digits: u32,
    plan: &QuadPlan,
    options: &NormalizeOptions,
    cache: &EigenCache,
) -> Result<Float> {
    let ref_plan = reference_plan(spec, state, digits, plan)?;
    check_budget(&ref_plan, options)?;
    let ref_digits = eigen_digits(spec, state, plan)? + REFERENCE_EXTRA_DIGITS;
    let (energy, _) = cache.energy(spec, state, ref_digits, &options.refine)?;
    Ok(integrate_state(spec, state, &energy, &ref_plan, ref_digits, options)?.integral)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigreal::{pi, to_decimal};

    fn quick() -> NormalizeOptions {
        NormalizeOptions {
            reference: false,
            ..NormalizeOptions::default()
        }
    }

    #[test]
    fn harmonic_ground_state_norm() {
        let spec = PotentialSpec::Monomial { n: 1 };
        let r = normalize(
            &spec,
            0,
            50,
            &NormalizeOptions::default(),
            &EigenCache::in_memory(),
        )
        .unwrap();
        let root_pi = Float::with_val(r.integral.prec(), pi(80).sqrt());
        let got = obtained_precision(&r.integral, &root_pi, 50).unwrap();
        assert!(got >= 48.0, "{got}");
        assert!(r.p_obt.unwrap() >= 48.0);
        let quarter = Float::with_val(r.integral.prec(), pi(80).sqrt().sqrt()).recip();
        assert!(obtained_precision(&r.norm_const, &quarter, 50).unwrap() >= 48.0);
        assert_eq!(r.nodes, 0);
        assert_eq!(r.evaluations, r.plan.m + 1);
    }

    #[test]
    fn harmonic_first_excited_norm() {
        // psi = x e^{-x^2/2}: ∫ psi^2 = sqrt(π)/2
        let spec = PotentialSpec::Monomial { n: 1 };
        let r = normalize(&spec, 1, 30, &quick(), &EigenCache::in_memory()).unwrap();
        let exact = Float::with_val(r.integral.prec(), pi(60).sqrt() / 2u32);
        assert!(obtained_precision(&r.integral, &exact, 30).unwrap() >= 28.0);
        assert_eq!(r.nodes, 1);
    }

    #[test]
    fn scaling_contract() {
        let spec = PotentialSpec::Monomial { n: 2 };
        let cache = EigenCache::in_memory();
        let a = normalize(&spec, 0, 20, &quick(), &cache).unwrap();
        let scaled = NormalizeOptions {
            psi_scale: Some(2),
            ..quick()
        };
        let b = normalize(&spec, 0, 20, &scaled, &cache).unwrap();
        assert!(b.cache_hit);
        assert_eq!(
            b.integral,
            Float::with_val(a.integral.prec(), &a.integral * 4u32)
        );
        let half = Float::with_val(a.norm_const.prec(), &a.norm_const / 2u32);
        assert_eq!(to_decimal(&b.norm_const, 20), to_decimal(&half, 20));
    }

    #[test]
    fn obtained_precision_definition() {
        let bits = prec_bits(120);
        let r = Float::with_val(bits, 1);
        assert_eq!(obtained_precision(&r, &r, 60).unwrap(), 105.0);
        let tiny = Float::with_val(bits, Float::i_pow_u(10, 50)).recip();
        let off = Float::with_val(bits, &r + &tiny);
        assert!((obtained_precision(&off, &r, 60).unwrap() - 50.0).abs() < 1e-9);
        assert!(obtained_precision(&r, &Float::new(bits), 60).is_err());
    }

    #[test]
    fn budget_guard_and_unsupported_states() {
        let spec = PotentialSpec::Monomial { n: 2 };
        let tight = NormalizeOptions {
            max_evaluations: 10,
            ..quick()
        };
        assert!(matches!(
            normalize(&spec, 0, 50, &tight, &EigenCache::in_memory()),
            Err(Error::BudgetExceeded { .. })
        ));
        let dw = PotentialSpec::parse("doublewell:1/10").unwrap();
        assert!(matches!(
            plan_state(&dw, 2, 30),
            Err(Error::UnsupportedState(_))
        ));
    }

    #[test]
    fn reference_plan_doubles_resolution() {
        let spec = PotentialSpec::Monomial { n: 2 };
        let plan = plan_state(&spec, 0, 50).unwrap();
        let r = reference_plan(&spec, 0, 50, &plan).unwrap();
        assert!(r.h <= plan.h / 2.0);
        assert!(r.x_max > plan.x_max);
        assert!(r.evaluations() >= 2 * plan.m);
    }
}
