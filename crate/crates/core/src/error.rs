use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: String },

    #[error("{what} = {value} is outside the supported range {range}")]
    OutOfRange {
        what: &'static str,
        value: String,
        range: &'static str,
    },

    #[error("invalid step count M = {m}: {reason}")]
    InvalidStepCount { m: usize, reason: &'static str },

    #[error("stencil at x = {x} would sample outside the integration domain")]
    StencilOutsideDomain { x: String },

    #[error("malformed quadrature plan: {0}")]
    MalformedPlan(String),

    #[error("closed-form WKB prefactor is singular for n = {n}; use the explicit-energy form")]
    SingularPrefactor { n: u32 },

    #[error("h too coarse for this E: (p/2)^2 = {half_p_sq} does not exceed E = {energy}")]
    StepTooCoarse { half_p_sq: f64, energy: f64 },

    #[error("x_max below turning point: x = {x} but turning point is {turning_point}")]
    BelowTurningPoint { x: f64, turning_point: f64 },

    #[error("root solve failed: {0}")]
    NoRoot(String),

    #[error("eigenvalue too far off: log10|psi| reached {log10_psi:.1} at x = {x}")]
    EigenvalueTooFarOff { log10_psi: f64, x: f64 },

    #[error(
        "eigenvalue bracket [{lo}, {hi}] inconsistent for state {state}: \
         positive zero counts {lo_count} and {hi_count}, need <= {target} and > {target}"
    )]
    BracketFailure {
        state: u32,
        lo: f64,
        hi: f64,
        lo_count: usize,
        hi_count: usize,
        target: usize,
    },

    #[error("no convergence after {iterations} iterations: {what}")]
    NotConverged {
        what: &'static str,
        iterations: usize,
    },

    #[error("unsupported state: {0}")]
    UnsupportedState(String),

    #[error("evaluation budget exceeded: plan needs {evaluations} evaluations, limit is {limit}")]
    BudgetExceeded { evaluations: usize, limit: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn non_positive(what: &'static str, value: impl ToString) -> Self {
        Error::NonPositive {
            what,
            value: value.to_string(),
        }
    }
}
