//! Eigenfunctions and eigenvalues of `-psi'' + x^{2n} psi = E psi` and
//! `-s^2 psi'' + (x^2 - 1)^2 psi = eps psi`.
//!
//! Both are written as `psi'' = W(x) psi` with a polynomial `W` and integrated
//! from `x = 0` by Taylor series. With scaled coefficients `T_k = a_k D^k`
//! for a step `D` the recurrence reads
//! `(k+1)(k+2) T_{k+2} = sum_j u_j T_{k-j}`, `u_j = w_j D^{j+2}`, where `w_j`
//! are the coefficients of `W` re-expanded about the current point.
//!
//! Steps satisfy `D sqrt(max|W|) <= 2.5 < π`, so by Sturm comparison a step
//! contains at most one zero of `psi` and sign changes between breakpoints
//! count the nodes exactly.

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::bigreal::{log10_abs, prec_bits};
use crate::error::{Error, Result};
use crate::wkb::{double_well_window, wkb_energy, TailModel};

/// `D sqrt(B + 1)` for a step `D` over which `|W| <= B`.
const STEP_SCALE: f64 = 2.5;
/// Default upper limit on a single step.
pub const DEFAULT_STEP_CAP: f64 = 0.5;
/// Default overflow guard on `log10 |psi|`.
pub const DEFAULT_OVERFLOW_LOG10: f64 = 1e6;
const MAX_ORDER: usize = 1 << 16;
/// Working digits above the resolved bracket width in staged bisection.
const STAGE_MARGIN: u32 = 30;
/// Extra decay digits demanded at the matching point.
const MATCH_MARGIN: u32 = 10;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PotentialSpec {
    /// `V = x^{2n}`.
    Monomial { n: u32 },
    /// `(x^2 - 1)^2` with `s^2` on the kinetic term; `s` is kept exact.
    DoubleWell { s: Rational },
}

impl PotentialSpec {
    pub fn validate(&self) -> Result<&Self> {
        match self {
            PotentialSpec::Monomial { n: 0 } => Err(Error::OutOfRange {
                what: "potential exponent n",
                value: "0".into(),
                range: "n >= 1",
            }),
            PotentialSpec::DoubleWell { s } if *s <= 0 || *s > 1 => Err(Error::OutOfRange {
                what: "double-well parameter s",
                value: s.to_string(),
                range: "0 < s <= 1",
            }),
            _ => Ok(self),
        }
    }

    /// Canonical problem string, e.g. `x2n:2` or `doublewell:1/100`.
    pub fn id(&self) -> String {
        match self {
            PotentialSpec::Monomial { n } => format!("x2n:{n}"),
            PotentialSpec::DoubleWell { s } => format!("doublewell:{}/{}", s.numer(), s.denom()),
        }
    }

    /// Parses `x2n:<n>` or `doublewell:<p/q or decimal>`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || {
            Error::Parse(format!(
                "unknown potential {text:?}; expected x2n:<n> or doublewell:<s>"
            ))
        };
        let (kind, arg) = text.trim().split_once(':').ok_or_else(bad)?;
        let spec = match kind {
            "x2n" => PotentialSpec::Monomial {
                n: arg.parse().map_err(|_| bad())?,
            },
            "doublewell" => PotentialSpec::DoubleWell {
                s: parse_rational(arg)?,
            },
            _ => return Err(bad()),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn s_f64(&self) -> Option<f64> {
        match self {
            PotentialSpec::DoubleWell { s } => Some(s.to_f64()),
            _ => None,
        }
    }

    /// Coefficients of `W(x) = sum c_i x^i` at energy `energy`.
    fn coefficients(&self, energy: &Float, bits: u32) -> Vec<Float> {
        match self {
            PotentialSpec::Monomial { n } => {
                let mut c = vec![Float::new(bits); 2 * *n as usize + 1];
                c[0] = Float::with_val(bits, -energy);
                c[2 * *n as usize] = Float::with_val(bits, 1);
                c
            }
            PotentialSpec::DoubleWell { s } => {
                let inv = Float::with_val(bits, s.clone().recip().square());
                let mut c0 = Float::with_val(bits, 1 - Float::with_val(bits, energy));
                c0 *= &inv;
                vec![
                    c0,
                    Float::new(bits),
                    Float::with_val(bits, &inv * -2i32),
                    Float::new(bits),
                    inv,
                ]
            }
        }
    }

    /// `max |W|` over `[a, b]`, `0 <= a <= b`.
    fn bound(&self, energy: f64, a: f64, b: f64) -> f64 {
        match self {
            PotentialSpec::Monomial { n } => b.powi(2 * *n as i32).max(energy.abs()),
            PotentialSpec::DoubleWell { s } => {
                let s = s.to_f64();
                let v = |x: f64| (x * x - 1.0).powi(2);
                (v(a).max(v(b)) + energy.abs()) / (s * s)
            }
        }
    }

    /// Semiclassical seed for eigenvalue `state`.
    pub fn seed_energy(&self, state: u32) -> Result<f64> {
        match self {
            PotentialSpec::Monomial { n } => wkb_energy(*n, state),
            PotentialSpec::DoubleWell { s } => {
                if state != 0 {
                    return Err(unsupported(self, state));
                }
                Ok(2.0 * s.to_f64())
            }
        }
    }

    /// Point beyond which `psi^2` has decayed by `10^{-digits}` relative to its peak.
    pub fn matching_point(&self, state: u32, digits: f64) -> Result<f64> {
        match self {
            PotentialSpec::Monomial { n } => TailModel::for_state(*n, state)?.solve_extent(digits),
            PotentialSpec::DoubleWell { s } => Ok(double_well_window(s.to_f64(), digits).1),
        }
    }
}

fn unsupported(spec: &PotentialSpec, state: u32) -> Error {
    Error::UnsupportedState(format!(
        "{} has no state {state} here (ground state only)",
        spec.id()
    ))
}

/// Exact rational from `p/q`, an integer, or a plain decimal.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let err = || Error::Parse(format!("not an exact number: {text:?}"));
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let scaled: rug::Integer = format!("{int}{frac}").parse().map_err(|_| err())?;
        let denom = rug::Integer::from(10).pow(frac.len() as u32);
        return Ok(Rational::from((scaled, denom)));
    }
    Rational::from_str_radix(text, 10).map_err(|_| err())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StateParity {
    Even,
    Odd,
}

impl StateParity {
    pub fn of_state(state: u32) -> Self {
        if state.is_multiple_of(2) {
            StateParity::Even
        } else {
            StateParity::Odd
        }
    }
}

/// Taylor-series integrator for one potential at one energy.
#[derive(Clone, Debug)]
pub struct Solver {
    spec: PotentialSpec,
    parity: StateParity,
    bits: u32,
    coeffs: Vec<Float>,
    energy: f64,
    step_cap: f64,
    overflow_log10: f64,
}

impl Solver {
    /// Integrator carrying `digits` decimal digits.
    pub fn new(
        spec: &PotentialSpec,
        energy: &Float,
        parity: StateParity,
        digits: u32,
    ) -> Result<Self> {
        spec.validate()?;
        let bits = prec_bits(digits).max(128) + 16;
        Ok(Solver {
            spec: spec.clone(),
            parity,
            bits,
            coeffs: spec.coefficients(energy, bits),
            energy: energy.to_f64(),
            step_cap: DEFAULT_STEP_CAP,
            overflow_log10: DEFAULT_OVERFLOW_LOG10,
        })
    }

    pub fn with_step_cap(mut self, cap: f64) -> Self {
        self.step_cap = cap;
        self
    }

    pub fn with_overflow_log10(mut self, limit: f64) -> Self {
        self.overflow_log10 = limit;
        self
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    fn initial(&self) -> (Float, Float) {
        let (a, b) = match self.parity {
            StateParity::Even => (1, 0),
            StateParity::Odd => (0, 1),
        };
        (Float::with_val(self.bits, a), Float::with_val(self.bits, b))
    }

    fn step_length(&self, x: f64) -> f64 {
        let b = self.spec.bound(self.energy, x, x + self.step_cap);
        (STEP_SCALE / (b + 1.0).sqrt()).min(self.step_cap)
    }

    /// Advances `(psi, psi')` from `x0` by `delta`.
    pub fn step(
        &self,
        x0: f64,
        psi: &Float,
        dpsi: &Float,
        delta: &Float,
    ) -> Result<(Float, Float)> {
        let bits = self.bits;
        if delta.is_zero() {
            return Ok((Float::with_val(bits, psi), Float::with_val(bits, dpsi)));
        }
        let w = taylor_shift(&self.coeffs, &Float::with_val(bits, x0));
        let deg = w.len() - 1;
        let mut power = Float::with_val(bits, delta.square_ref());
        let mut u = Vec::with_capacity(deg + 1);
        for wj in &w {
            u.push(Float::with_val(bits, wj * &power));
            power *= delta;
        }
        let mut t = Vec::with_capacity(256);
        t.push(Float::with_val(bits, psi));
        t.push(Float::with_val(bits, dpsi * delta));
        let mut value = Float::with_val(bits, &t[0] + &t[1]);
        let mut slope = t[1].clone();
        let mut peak = t
            .iter()
            .filter_map(Float::get_exp)
            .max()
            .unwrap_or(i32::MIN / 2);
        let mut quiet = 0;
        let mut k = 0;
        loop {
            let mut acc = Float::new(bits);
            for j in 0..=deg.min(k) {
                if !u[j].is_zero() && !t[k - j].is_zero() {
                    acc += Float::with_val(bits, &u[j] * &t[k - j]);
                }
            }
            acc /= (k + 1) as u32;
            acc /= (k + 2) as u32;
            match acc.get_exp() {
                Some(e) if e >= peak - bits as i32 - 8 => {
                    peak = peak.max(e);
                    quiet = 0;
                }
                _ => quiet += 1,
            }
            value += &acc;
            slope += Float::with_val(bits, &acc * (k + 2) as u32);
            t.push(acc);
            k += 1;
            if quiet >= deg + 2 {
                break;
            }
            if k > MAX_ORDER {
                return Err(Error::NotConverged {
                    what: "Taylor series step",
                    iterations: k,
                });
            }
        }
        slope /= delta;
        Ok((value, slope))
    }

    /// Integrates from 0 to `x_end`, storing every breakpoint and counting
    /// sign changes of `psi` on `(0, x_end]`.
    pub fn sweep(&self, x_end: f64) -> Result<Sweep> {
        let (psi0, dpsi0) = self.initial();
        let mut sign = psi0.cmp0().filter(|o| o.is_ne()).or(dpsi0.cmp0());
        let mut sweep = Sweep {
            breakpoints: vec![0.0],
            psi: vec![psi0],
            dpsi: vec![dpsi0],
            nodes: 0,
        };
        let mut x = 0.0;
        while x < x_end {
            let next = (x + self.step_length(x)).min(x_end);
            let delta = Float::with_val(self.bits, Float::with_val(self.bits, next) - x);
            let last = sweep.psi.len() - 1;
            let (psi, dpsi) = self.step(x, &sweep.psi[last], &sweep.dpsi[last], &delta)?;
            let size = log10_abs(&psi);
            if size > self.overflow_log10 {
                return Err(Error::EigenvalueTooFarOff {
                    log10_psi: size,
                    x: next,
                });
            }
            if let Some(o) = psi.cmp0().filter(|o| o.is_ne()) {
                if sign.is_some_and(|s| s != o) {
                    sweep.nodes += 1;
                }
                sign = Some(o);
            }
            sweep.breakpoints.push(next);
            sweep.psi.push(psi);
            sweep.dpsi.push(dpsi);
            x = next;
        }
        Ok(sweep)
    }

    /// `(psi, psi')` at `x` from the nearest breakpoint at or below it.
    pub fn state_at(&self, sweep: &Sweep, x: &Float) -> Result<(Float, Float)> {
        let i = sweep.breakpoints.partition_point(|b| *x >= *b);
        if i == 0 || *x > *sweep.breakpoints.last().expect("sweep starts at 0") {
            return Err(Error::OutOfRange {
                what: "evaluation point",
                value: x.to_f64().to_string(),
                range: "inside the swept interval",
            });
        }
        let b = sweep.breakpoints[i - 1];
        let delta = Float::with_val(self.bits, x - b);
        self.step(b, &sweep.psi[i - 1], &sweep.dpsi[i - 1], &delta)
    }
}

/// Re-expands `sum c_i x^i` about `x0`.
fn taylor_shift(c: &[Float], x0: &Float) -> Vec<Float> {
    let mut a = c.to_vec();
    let d = a.len() - 1;
    if x0.is_zero() {
        return a;
    }
    for i in 0..d {
        for j in (i..d).rev() {
            let carry = Float::with_val(a[j].prec(), &a[j + 1] * x0);
            a[j] += carry;
        }
    }
    a
}

/// Stored breakpoint states of one integration.
#[derive(Clone, Debug)]
pub struct Sweep {
    pub breakpoints: Vec<f64>,
    psi: Vec<Float>,
    dpsi: Vec<Float>,
    /// Sign changes of `psi` on `(0, x_end]`.
    pub nodes: usize,
}

impl Sweep {
    pub fn end(&self) -> (f64, &Float, &Float) {
        let i = self.breakpoints.len() - 1;
        (self.breakpoints[i], &self.psi[i], &self.dpsi[i])
    }

    /// `max |psi|` over the breakpoints.
    pub fn max_abs_log10(&self) -> f64 {
        self.psi
            .iter()
            .map(log10_abs)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Un-normalized `(psi, psi')` at `x_target`, starting from `(1, 0)` (even)
/// or `(0, 1)` (odd) at the origin.
pub fn evaluate_wavefunction(
    spec: &PotentialSpec,
    energy: &Float,
    parity: StateParity,
    x_target: f64,
    digits: u32,
) -> Result<(Float, Float)> {
    if !(x_target >= 0.0) {
        return Err(Error::OutOfRange {
            what: "x_target",
            value: x_target.to_string(),
            range: "x >= 0",
        });
    }
    let sweep = Solver::new(spec, energy, parity, digits)?.sweep(x_target)?;
    let (_, psi, dpsi) = sweep.end();
    Ok((psi.clone(), dpsi.clone()))
}

#[derive(Clone, Debug)]
pub struct EigenState {
    pub potential: PotentialSpec,
    pub state: u32,
    pub parity: StateParity,
    pub energy: Float,
    /// Relative bracket width reached: `10^{-digits}`.
    pub digits: u32,
    /// Nodes on the real line, counted from the sweep just below the eigenvalue.
    pub nodes: usize,
    pub matching_point: f64,
    pub iterations: usize,
}

#[derive(Clone, Debug)]
pub struct RefineOptions {
    /// Run early bisection steps at reduced precision.
    pub staged: bool,
    pub step_cap: f64,
    pub max_expansions: u32,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions {
            staged: true,
            step_cap: DEFAULT_STEP_CAP,
            max_expansions: 8,
        }
    }
}

/// Eigenvalue number `state` to a relative bracket width below `10^{-digits}`.
pub fn refine_eigenvalue(spec: &PotentialSpec, state: u32, digits: u32) -> Result<EigenState> {
    refine_eigenvalue_with(spec, state, digits, &RefineOptions::default())
}

/// Lowest even eigenvalue of the double well.
pub fn refine_double_well_ground(s: &Rational, digits: u32) -> Result<EigenState> {
    refine_eigenvalue(&PotentialSpec::DoubleWell { s: s.clone() }, 0, digits)
}

/// Bisection on "more than `j` zeros on `(0, x_f]`", which holds exactly when
/// `E` lies above the eigenvalue with `j` positive zeros of that parity.
pub fn refine_eigenvalue_with(
    spec: &PotentialSpec,
    state: u32,
    digits: u32,
    options: &RefineOptions,
) -> Result<EigenState> {
    spec.validate()?;
    if digits < 10 {
        return Err(Error::OutOfRange {
            what: "eigenvalue digits",
            value: digits.to_string(),
            range: ">= 10",
        });
    }
    let seed = spec.seed_energy(state)?;
    let parity = StateParity::of_state(state);
    let target = (state / 2) as usize;
    let x_f = spec.matching_point(state, f64::from(digits + MATCH_MARGIN))?;
    let full = digits + MATCH_MARGIN + 5;
    let bits = prec_bits(full) + 16;
    let count = |energy: &Float, work: u32| -> Result<usize> {
        Ok(Solver::new(spec, energy, parity, work)?
            .with_step_cap(options.step_cap)
            .sweep(x_f)?
            .nodes)
    };

    let (lo_factor, hi_factor) = match spec {
        PotentialSpec::Monomial { .. } => (0.5, 2.0),
        PotentialSpec::DoubleWell { .. } => (0.1, 4.0),
    };
    let mut lo = Float::with_val(bits, seed * lo_factor);
    let mut hi = Float::with_val(bits, seed * hi_factor);
    let coarse = 30.min(full);
    let mut lo_count = count(&lo, coarse)?;
    let mut hi_count = count(&hi, coarse)?;
    for _ in 0..options.max_expansions {
        if lo_count <= target && hi_count > target {
            break;
        }
        if lo_count > target {
            lo /= 2u32;
            lo_count = count(&lo, coarse)?;
        }
        if hi_count <= target {
            hi *= 2u32;
            hi_count = count(&hi, coarse)?;
        }
    }
    if lo_count > target || hi_count <= target {
        return Err(Error::BracketFailure {
            state,
            lo: lo.to_f64(),
            hi: hi.to_f64(),
            lo_count,
            hi_count,
            target,
        });
    }

    let tolerance = Float::with_val(bits, Float::i_pow_u(10, digits)).recip();
    let limit = (f64::from(full) * 3.33) as usize + 200;
    let mut iterations = 0;
    loop {
        let width = Float::with_val(bits, &hi - &lo);
        if width <= Float::with_val(bits, &tolerance * &lo) {
            break;
        }
        if iterations >= limit {
            return Err(Error::NotConverged {
                what: "eigenvalue bisection",
                iterations,
            });
        }
        let mid = Float::with_val(bits, &lo + &hi) / 2u32;
        let work = if options.staged {
            let resolved = (-(log10_abs(&width) - log10_abs(&mid))).max(0.0).ceil() as u32;
            (resolved + STAGE_MARGIN).min(full)
        } else {
            full
        };
        if count(&mid, work)? > target {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    let energy = Float::with_val(bits, &lo + &hi) / 2u32;
    let below = count(&lo, full)?;
    let nodes = 2 * below + usize::from(parity == StateParity::Odd);
    Ok(EigenState {
        potential: spec.clone(),
        state,
        parity,
        energy,
        digits,
        nodes,
        matching_point: x_f,
        iterations,
    })
}

/// `log10` of the ratio between `|psi(x_f)|` and the largest `|psi|` before it.
pub fn matching_residual_log10(
    spec: &PotentialSpec,
    eigen: &EigenState,
    x_f: f64,
    digits: u32,
) -> Result<f64> {
    let sweep = Solver::new(spec, &eigen.energy, eigen.parity, digits)?.sweep(x_f)?;
    let (_, psi, _) = sweep.end();
    Ok(log10_abs(psi) - sweep.max_abs_log10())
}

/// `log10 |psi(x_f; E)|`.
pub fn tail_log10(
    spec: &PotentialSpec,
    energy: &Float,
    parity: StateParity,
    x_f: f64,
    digits: u32,
) -> Result<f64> {
    let (psi, _) = evaluate_wavefunction(spec, energy, parity, x_f, digits)?;
    Ok(log10_abs(&psi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigreal::to_decimal;

    fn rel_err(a: &Float, b: &Float) -> Float {
        let d = Float::with_val(a.prec(), a - b);
        d / b
    }

    fn monomial(n: u32) -> PotentialSpec {
        PotentialSpec::Monomial { n }
    }

    #[test]
    fn ids_and_parsing() {
        assert_eq!(monomial(2).id(), "x2n:2");
        let dw = PotentialSpec::parse("doublewell:1/100").unwrap();
        assert_eq!(dw.id(), "doublewell:1/100");
        assert_eq!(PotentialSpec::parse("doublewell:0.01").unwrap(), dw);
        assert_eq!(
            PotentialSpec::parse("doublewell:2/200").unwrap().id(),
            "doublewell:1/100"
        );
        assert_eq!(PotentialSpec::parse("x2n:3").unwrap(), monomial(3));
        assert!(PotentialSpec::parse("x2n:0").is_err());
        assert!(PotentialSpec::parse("doublewell:3/2").is_err());
        assert!(PotentialSpec::parse("doublewell:-1/2").is_err());
        assert!(PotentialSpec::parse("cosh:1").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn taylor_shift_matches_expansion() {
        let bits = 100;
        let c: Vec<Float> = [1, -2, 0, 3]
            .iter()
            .map(|&v| Float::with_val(bits, v))
            .collect();
        let w = taylor_shift(&c, &Float::with_val(bits, 2));
        // 1 - 2(x+2) + 3(x+2)^3 = 21 + 34 t + 18 t^2 + 3 t^3
        let expect = [21, 34, 18, 3];
        for (a, b) in w.iter().zip(expect) {
            assert_eq!(*a, b);
        }
    }

    #[test]
    fn initial_conditions_exact() {
        let e = Float::with_val(128, 1.5);
        let (p, d) = evaluate_wavefunction(&monomial(2), &e, StateParity::Even, 0.0, 30).unwrap();
        assert_eq!((p, d), (Float::with_val(10, 1), Float::with_val(10, 0)));
        let (p, d) = evaluate_wavefunction(&monomial(2), &e, StateParity::Odd, 0.0, 30).unwrap();
        assert_eq!((p, d), (Float::with_val(10, 0), Float::with_val(10, 1)));
    }

    #[test]
    fn harmonic_ground_state_closed_form() {
        let digits = 60;
        let e = Float::with_val(prec_bits(digits), 1);
        let (p, d) =
            evaluate_wavefunction(&monomial(1), &e, StateParity::Even, 1.0, digits).unwrap();
        let exact = Float::with_val(prec_bits(digits), -0.5f64).exp();
        let err = Float::with_val(prec_bits(digits), &p - &exact);
        assert!(log10_abs(&err) < -58.0);
        let derr = Float::with_val(prec_bits(digits), &d + &exact);
        assert!(log10_abs(&derr) < -58.0);
        assert!(to_decimal(&p, 5).starts_with("0.60653"));
    }

    #[test]
    fn harmonic_odd_state_closed_form() {
        // psi = x e^{-x^2/2} at E = 3
        let digits = 50;
        let bits = prec_bits(digits);
        let e = Float::with_val(bits, 3);
        let (p, _) =
            evaluate_wavefunction(&monomial(1), &e, StateParity::Odd, 2.5, digits).unwrap();
        let exact = Float::with_val(bits, -3.125f64).exp() * 2.5f64;
        let err = rel_err(&p, &exact);
        assert!(log10_abs(&err) < -48.0);
    }

    #[test]
    fn step_cap_halving_is_consistent() {
        let digits = 40;
        let bits = prec_bits(digits);
        let e = Float::with_val(bits, 1.06036209048418289964704601669);
        let spec = monomial(2);
        let a = Solver::new(&spec, &e, StateParity::Even, digits)
            .unwrap()
            .sweep(3.0)
            .unwrap();
        let b = Solver::new(&spec, &e, StateParity::Even, digits)
            .unwrap()
            .with_step_cap(0.25)
            .sweep(3.0)
            .unwrap();
        assert!(b.breakpoints.len() > a.breakpoints.len());
        let (pa, pb) = (a.end().1, b.end().1);
        let rel = rel_err(pa, pb);
        assert!(log10_abs(&rel) < -f64::from(digits - 2));
    }

    #[test]
    fn state_at_matches_direct_sweep() {
        let digits = 40;
        let bits = prec_bits(digits);
        let e = Float::with_val(bits, 7.5);
        let solver = Solver::new(&monomial(2), &e, StateParity::Even, digits).unwrap();
        let sweep = solver.sweep(2.0).unwrap();
        let x = Float::with_val(bits, 1.2345);
        let (p, _) = solver.state_at(&sweep, &x).unwrap();
        let (q, _) =
            evaluate_wavefunction(&monomial(2), &e, StateParity::Even, 1.2345, digits).unwrap();
        let rel = rel_err(&p, &q);
        assert!(log10_abs(&rel) < -f64::from(digits - 2));
        assert!(solver
            .state_at(&sweep, &Float::with_val(bits, 2.5))
            .is_err());
    }

    #[test]
    fn overflow_guard_trips() {
        let e = Float::with_val(128, 0.1);
        let r = Solver::new(&monomial(2), &e, StateParity::Even, 20)
            .unwrap()
            .with_overflow_log10(50.0)
            .sweep(10.0);
        assert!(matches!(r, Err(Error::EigenvalueTooFarOff { .. })));
    }

    #[test]
    fn harmonic_eigenvalues_exact() {
        for state in [0u32, 1, 4] {
            let eig = refine_eigenvalue(&monomial(1), state, 30).unwrap();
            let exact = Float::with_val(eig.energy.prec(), 2 * state + 1);
            let rel = rel_err(&eig.energy, &exact);
            assert!(log10_abs(&rel) < -29.0, "state {state}");
            assert_eq!(eig.nodes, state as usize);
        }
    }

    #[test]
    fn quartic_ground_state_digits() {
        let eig = refine_eigenvalue(&monomial(2), 0, 40).unwrap();
        assert_eq!(
            to_decimal(&eig.energy, 34),
            "1.060362090484182899647046016692664"
        );
        assert_eq!(eig.nodes, 0);
    }

    #[test]
    fn staged_and_full_bisection_agree() {
        let spec = monomial(2);
        let staged = refine_eigenvalue(&spec, 2, 25).unwrap();
        let full = refine_eigenvalue_with(
            &spec,
            2,
            25,
            &RefineOptions {
                staged: false,
                ..RefineOptions::default()
            },
        )
        .unwrap();
        assert_eq!(to_decimal(&staged.energy, 23), to_decimal(&full.energy, 23));
        assert_eq!(to_decimal(&full.energy, 20), "7.4556979379867383922");
    }

    #[test]
    fn rejects_bad_requests() {
        assert!(refine_eigenvalue(&monomial(2), 0, 5).is_err());
        let dw = PotentialSpec::DoubleWell {
            s: Rational::from((1, 10)),
        };
        assert!(matches!(
            refine_eigenvalue(&dw, 1, 20),
            Err(Error::UnsupportedState(_))
        ));
        assert!(
            evaluate_wavefunction(&dw, &Float::with_val(64, 0.1), StateParity::Even, -1.0, 20)
                .is_err()
        );
    }
}
