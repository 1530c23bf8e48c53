use std::path::Path;
use std::time::Instant;

use anyhow::Result;
use trapnorm::bigreal::{log10_abs, to_decimal};
use trapnorm::models::{plan_model_steps, IntervalModel, ModelKind};
use trapnorm::normalizer::{normalize, NormalizeOptions};
use trapnorm::{EigenCache, PotentialSpec};

use crate::compute::{
    agreement, interval_evaluations, interval_sum, interval_value, line_reference, line_sum,
};
use crate::report::{error_from_digits, write_rows, BenchRow};
use crate::target::{Rule, Target};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    /// Trapezoid versus Simpson on [0, 1], h-sweep.
    Fig1,
    /// Predicted and obtained precision of the model sums, M-sweep.
    Fig2,
    /// Wall time of the eigenfunction normalizations, P-sweep.
    Fig3,
    /// Obtained versus predicted precision of the normalizations, P-sweep.
    Fig4,
}

impl Suite {
    fn id(self) -> &'static str {
        match self {
            Suite::Fig1 => "fig1",
            Suite::Fig2 => "fig2",
            Suite::Fig3 => "fig3",
            Suite::Fig4 => "fig4",
        }
    }
}

const FIG1_STEPS: [usize; 8] = [2, 4, 8, 16, 32, 64, 128, 256];
const FIG1_BITS: u32 = 1024;
const FIG2_STEPS: [usize; 6] = [5, 10, 20, 40, 60, 80];
const STATE_DIGITS: [u32; 4] = [25, 50, 75, 100];

pub fn run(suite: Suite, out: &Path, threads: usize) -> Result<()> {
    // fail on an unwritable path before any work
    write_rows(out, &[])?;
    let rows = match suite {
        Suite::Fig1 => fig1()?,
        Suite::Fig2 => fig2(threads)?,
        Suite::Fig3 => states(suite, threads, false)?,
        Suite::Fig4 => states(suite, threads, true)?,
    };
    write_rows(out, &rows)?;
    println!("wrote {} rows to {}", rows.len(), out.display());
    Ok(())
}

fn fig1() -> Result<Vec<BenchRow>> {
    let models = [
        IntervalModel::Polynomial { n: 1 },
        IntervalModel::Polynomial { n: 4 },
        IntervalModel::Polynomial { n: 12 },
        IntervalModel::TanhKink,
    ];
    let mut rows = Vec::new();
    for model in models {
        let exact = interval_value(model, FIG1_BITS);
        for rule in [Rule::Trap, Rule::Simpson] {
            for m in FIG1_STEPS {
                let start = Instant::now();
                let value = interval_sum(model, rule, m, FIG1_BITS)?;
                let mut err = value.clone() - &exact;
                err /= &exact;
                rows.push(BenchRow {
                    suite: Suite::Fig1.id().into(),
                    case: format!("{}:{rule}", Target::Interval(model)),
                    parameter: format!("h={}", 1.0 / m as f64),
                    value: to_decimal(&value, 60),
                    predicted_log10_error: None,
                    measured_log10_error: Some(log10_abs(&err)),
                    evaluations: interval_evaluations(rule, m),
                    wall_time_ms: start.elapsed().as_millis() as u64,
                });
            }
        }
    }
    Ok(rows)
}

fn fig2(threads: usize) -> Result<Vec<BenchRow>> {
    let models = [
        ModelKind::Gaussian,
        ModelKind::Power { n: 2 },
        ModelKind::DoubleHump { a: 1.0 },
    ];
    let mut rows = Vec::new();
    for kind in models {
        for m in FIG2_STEPS {
            let start = Instant::now();
            let plan = plan_model_steps(kind, m)?;
            let digits = plan.target_digits + 20 + plan.guard_digits();
            let value = line_sum(kind, &plan, digits, threads)?;
            let reference = line_reference(kind, &plan, digits, threads)?;
            rows.push(BenchRow {
                suite: Suite::Fig2.id().into(),
                case: Target::Line(kind).to_string(),
                parameter: format!("M={m}"),
                value: to_decimal(&value, plan.target_digits + 10),
                predicted_log10_error: Some(plan.est_error_log10),
                measured_log10_error: Some(error_from_digits(agreement(&value, &reference.value))),
                evaluations: plan.evaluations(),
                wall_time_ms: start.elapsed().as_millis() as u64,
            });
        }
    }
    Ok(rows)
}

fn states(suite: Suite, threads: usize, reference: bool) -> Result<Vec<BenchRow>> {
    let cases = [
        ("E0", PotentialSpec::Monomial { n: 2 }, 0),
        ("E100", PotentialSpec::Monomial { n: 2 }, 100),
        ("EWW", PotentialSpec::parse("doublewell:1/100")?, 0),
    ];
    let options = NormalizeOptions {
        threads: threads.max(1),
        reference,
        ..NormalizeOptions::default()
    };
    let mut rows = Vec::new();
    for (name, spec, state) in cases {
        // a fresh cache per case keeps the timings free of earlier refinements
        let cache = EigenCache::in_memory();
        for p in STATE_DIGITS {
            let r = normalize(&spec, state, p, &options, &cache)?;
            rows.push(BenchRow {
                suite: suite.id().into(),
                case: format!("{name} {} N={state}", spec.id()),
                parameter: format!("P={p}"),
                value: to_decimal(&r.norm_const, p),
                predicted_log10_error: Some(r.plan.est_error_log10),
                measured_log10_error: r.p_obt.map(error_from_digits),
                evaluations: r.evaluations,
                wall_time_ms: r.wall_time_ms,
            });
        }
    }
    Ok(rows)
}
