//! Semiclassical estimates for eigenstates of `-psi'' + (x^{2n} - E) psi = 0`
//! and of the double well `-s^2 psi'' + (x^2 - 1)^2 psi = eps psi`, and the
//! planners that turn them into trapezoidal step sizes and windows.
//!
//! Tail estimates are returned as `log10` of the bound. Algebraic prefactors
//! are dropped; planners compensate with [`PLAN_SLACK_DIGITS`].

use std::f64::consts::{FRAC_PI_2, LN_10, PI};

use num_complex::Complex64;
use statrs::function::beta::beta;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::plan::QuadPlan;

/// Extra digits added to the target before solving for a plan.
pub const PLAN_SLACK_DIGITS: u32 = 2;

fn check_exponent(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "potential exponent n",
            value: "0".into(),
            range: "n >= 1",
        });
    }
    Ok(())
}

/// `∫_{-1}^{1} sqrt(1 - u^{2n}) du = B(1/2n, 3/2) / n`.
pub fn quantization_integral(n: u32) -> f64 {
    let nf = f64::from(n);
    let x = 1.0 / (2.0 * nf);
    gamma(x) * gamma(1.5) / (nf * gamma(x + 1.5))
}

/// WKB estimate of eigenvalue number `state` of `x^{2n}`.
pub fn wkb_energy(n: u32, state: u32) -> Result<f64> {
    check_exponent(n)?;
    let nf = f64::from(n);
    let base = PI * (f64::from(state) + 0.5) / quantization_integral(n);
    Ok(base.powf(2.0 * nf / (nf + 1.0)))
}

/// Natural log of the tail amplitude `C = exp{(π/2) tan(π/2n) (N + 1/2)}`.
///
/// Singular for `n = 1`: the harmonic tail carries a power of `x` rather
/// than a constant factor (see [`TailModel`]).
pub fn wkb_prefactor(n: u32, state: u32) -> Result<f64> {
    check_exponent(n)?;
    if n == 1 {
        return Err(Error::SingularPrefactor { n });
    }
    let nf = f64::from(n);
    Ok(FRAC_PI_2 * (PI / (2.0 * nf)).tan() * (f64::from(state) + 0.5))
}

/// `ln C = B(1/2, (n-1)/2n) E^{(n+1)/2n} / (2(n+1))` for an explicit energy.
pub fn wkb_prefactor_beta(n: u32, energy: f64) -> Result<f64> {
    check_exponent(n)?;
    if n == 1 {
        return Err(Error::SingularPrefactor { n });
    }
    let nf = f64::from(n);
    let b = beta(0.5, (nf - 1.0) / (2.0 * nf));
    Ok(b * energy.powf((nf + 1.0) / (2.0 * nf)) / (2.0 * (nf + 1.0)))
}

/// `log10` bound on `|FT[psi^2](p)|`:
/// `[2 ln C - (n/(n+1)) sin(π/2n) p ((p/2)^2 - E)^{1/2n}] / ln 10`.
pub fn fourier_tail(n: u32, energy: f64, c_log: f64, p: f64) -> Result<f64> {
    check_exponent(n)?;
    let gap = (p / 2.0).powi(2) - energy;
    if !(gap > 0.0) {
        return Err(Error::StepTooCoarse {
            half_p_sq: (p / 2.0).powi(2),
            energy,
        });
    }
    let nf = f64::from(n);
    let decay = nf / (nf + 1.0) * (PI / (2.0 * nf)).sin() * p * gap.powf(1.0 / (2.0 * nf));
    Ok((2.0 * c_log - decay) / LN_10)
}

/// `log10` bound on `psi(x)^2`: `[2 ln C - (2/(n+1)) x sqrt(x^{2n} - E)] / ln 10`.
pub fn spatial_tail(n: u32, energy: f64, c_log: f64, x: f64) -> Result<f64> {
    check_exponent(n)?;
    let gap = x.powi(2 * n as i32) - energy;
    if !(gap >= 0.0) {
        return Err(Error::BelowTurningPoint {
            x,
            turning_point: energy.powf(1.0 / (2.0 * f64::from(n))),
        });
    }
    let nf = f64::from(n);
    Ok((2.0 * c_log - 2.0 / (nf + 1.0) * x * gap.sqrt()) / LN_10)
}

/// Tail bounds for one eigenstate of `x^{2n}`.
///
/// For `n >= 2` the amplitude is the constant `C`. For `n = 1` the WKB
/// exponent is integrated exactly, which turns `2 ln C` into
/// `E ln((q + sqrt(q^2 - E)) / sqrt E)` at the argument `q` (`x`, or `p/2`
/// for the Fourier bound).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailModel {
    pub n: u32,
    pub energy: f64,
    /// `ln C`, `None` for the harmonic case.
    pub c_log: Option<f64>,
}

impl TailModel {
    pub fn for_state(n: u32, state: u32) -> Result<Self> {
        let energy = wkb_energy(n, state)?;
        let c_log = if n == 1 {
            None
        } else {
            Some(wkb_prefactor(n, state)?)
        };
        Ok(TailModel { n, energy, c_log })
    }

    fn two_c_log(&self, q: f64) -> f64 {
        match self.c_log {
            Some(c) => 2.0 * c,
            None => {
                let e = self.energy;
                let gap = (q * q - e).max(0.0);
                e * ((q + gap.sqrt()) / e.sqrt()).ln()
            }
        }
    }

    /// Amplitude digits `2 ln C / ln 10`, evaluated at `q` in the harmonic case.
    pub fn amplitude_digits(&self, q: f64) -> f64 {
        self.two_c_log(q) / LN_10
    }

    pub fn fourier_log10(&self, p: f64) -> Result<f64> {
        fourier_tail(self.n, self.energy, 0.5 * self.two_c_log(p / 2.0), p)
    }

    pub fn spatial_log10(&self, x: f64) -> Result<f64> {
        spatial_tail(self.n, self.energy, 0.5 * self.two_c_log(x), x)
    }

    pub fn turning_point(&self) -> f64 {
        self.energy.powf(1.0 / (2.0 * f64::from(self.n)))
    }

    /// Smallest `p` with Fourier bound `10^{-digits}`.
    pub fn solve_momentum(&self, digits: f64) -> Result<f64> {
        let lo = 2.0 * self.energy.sqrt();
        solve_decreasing(|p| self.fourier_log10(p), lo, -digits, "Fourier tail")
    }

    /// Smallest `x` beyond the turning point with `psi^2` bound `10^{-digits}`.
    pub fn solve_extent(&self, digits: f64) -> Result<f64> {
        let lo = self.turning_point();
        solve_decreasing(|x| self.spatial_log10(x), lo, -digits, "spatial tail")
    }
}

/// Root of a decreasing function on `(lo, inf)` by bisection to 1e-12 relative.
fn solve_decreasing(
    f: impl Fn(f64) -> Result<f64>,
    lo: f64,
    target: f64,
    what: &str,
) -> Result<f64> {
    let eval = |x: f64| -> Result<f64> {
        match f(x) {
            Ok(v) => Ok(v),
            // boundary of the domain: no decay yet
            Err(Error::StepTooCoarse { .. } | Error::BelowTurningPoint { .. }) => Ok(f64::INFINITY),
            Err(e) => Err(e),
        }
    };
    let mut a = lo;
    let mut b = (2.0 * lo).max(1.0);
    while eval(b)? > target {
        a = b;
        b *= 2.0;
        if b > 1e15 {
            return Err(Error::NoRoot(format!("{what} never reaches 10^{target}")));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if eval(mid)? > target {
            a = mid;
        } else {
            b = mid;
        }
        if b - a <= 1e-12 * b {
            break;
        }
    }
    Ok(b)
}

/// Step size and window for `∫ psi_N^2` over the real line to `digits` digits.
///
/// `h = 2π/p` where the Fourier bound reaches `10^{-(P+slack)}`, `x_max` where the
/// spatial bound does; `M = ceil(x_max/h)`, never below the oscillation
/// count `E^{(n+1)/2n} / π`.
pub fn plan_monomial_state(n: u32, state: u32, digits: u32) -> Result<QuadPlan> {
    check_exponent(n)?;
    check_plan_digits(digits)?;
    let tail = TailModel::for_state(n, state)?;
    let budget = f64::from(digits + PLAN_SLACK_DIGITS);
    let p = tail.solve_momentum(budget)?;
    let h = 2.0 * PI / p;
    let x_max = tail.solve_extent(budget)?;
    let mut m = (x_max / h).ceil() as usize;
    let floor = oscillation_floor(n, tail.energy);
    if ((m + 1) as f64) <= floor {
        m = floor.floor() as usize;
    }
    let est = tail
        .fourier_log10(p)?
        .max(tail.spatial_log10(m as f64 * h)?);
    Ok(QuadPlan {
        h,
        x_min: 0.0,
        x_max,
        m,
        target_digits: digits,
        est_error_log10: est,
    })
}

/// Lower bound on `M + 1`: `E^{(n+1)/2n} / π`.
pub fn oscillation_floor(n: u32, energy: f64) -> f64 {
    let nf = f64::from(n);
    energy.powf((nf + 1.0) / (2.0 * nf)) / PI
}

/// Quartic ground state with `E ≈ 0`:
/// `M + 1 = ceil(3 ln10 P / (2^{4/3} π))`, `h = 2^{1/9} π^{1/3} (M+1)^{-2/3}`.
pub fn plan_quartic_ground_asymptotic(digits: u32) -> Result<QuadPlan> {
    check_plan_digits(digits)?;
    let rate = 2f64.powf(4.0 / 3.0) * PI / 3.0;
    let mp1 = (f64::from(digits) * LN_10 / rate).ceil();
    let h = 2f64.powf(1.0 / 9.0) * PI.cbrt() * mp1.powf(-2.0 / 3.0);
    Ok(QuadPlan {
        h,
        x_min: 0.0,
        x_max: mp1 * h,
        m: mp1 as usize - 1,
        target_digits: digits,
        est_error_log10: -rate * mp1 / LN_10,
    })
}

fn check_plan_digits(digits: u32) -> Result<()> {
    if digits < 10 {
        return Err(Error::OutOfRange {
            what: "target digits P",
            value: digits.to_string(),
            range: "P >= 10",
        });
    }
    Ok(())
}

fn check_well(s: f64) -> Result<()> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::non_positive("double-well parameter s", s));
    }
    Ok(())
}

/// `Re φ(x_s, p)` with `φ = (4/3s) [(1 + i p s/2)^{3/2} - 1]`.
pub fn double_well_exponent(s: f64, p: f64) -> f64 {
    let z = Complex64::new(1.0, p * s / 2.0).powf(1.5) - 1.0;
    4.0 / (3.0 * s) * z.re
}

/// `log10` of `psi(x)^2` relative to its peak: `-2 (x-1)^2 (x+2) / (3 s ln10)`.
pub fn double_well_tail(s: f64, x: f64) -> f64 {
    -2.0 * well_cubic(x) / (3.0 * s * LN_10)
}

fn well_cubic(x: f64) -> f64 {
    (x - 1.0).powi(2) * (x + 2.0)
}

/// Window `[x_min, x_max]` outside of which `psi^2 < 10^{-digits}`:
/// roots of `(x-1)^2 (x+2) = (3/2) ln10 s digits`.
pub fn double_well_window(s: f64, digits: f64) -> (f64, f64) {
    let threshold = 1.5 * LN_10 * s * digits;
    let root = |mut a: f64, mut b: f64, increasing: bool| {
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if (well_cubic(mid) < threshold) == increasing {
                a = mid;
            } else {
                b = mid;
            }
        }
        0.5 * (a + b)
    };
    let mut hi = 2.0;
    while well_cubic(hi) < threshold {
        hi *= 2.0;
    }
    let x_max = root(1.0, hi, true);
    let x_min = if threshold >= well_cubic(0.0) {
        0.0
    } else {
        root(0.0, 1.0, false)
    };
    (x_min, x_max)
}

pub fn plan_double_well(s: f64, digits: u32) -> Result<QuadPlan> {
    check_well(s)?;
    check_plan_digits(digits)?;
    let budget = f64::from(digits + PLAN_SLACK_DIGITS);
    let target = -budget * LN_10;
    // the large-p form (ps)^{3/2} / 3s = budget ln10 seeds the bracket
    let guess = (3.0 * s * budget * LN_10).powf(2.0 / 3.0) / s;
    let (mut a, mut b) = (0.0, guess);
    while double_well_exponent(s, b) > target {
        a = b;
        b *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if double_well_exponent(s, mid) > target {
            a = mid;
        } else {
            b = mid;
        }
        if b - a <= 1e-12 * b {
            break;
        }
    }
    let h = 2.0 * PI / b;
    let (x_min, x_max) = double_well_window(s, budget);
    let m = ((x_max - x_min) / h).ceil() as usize;
    let est = (double_well_exponent(s, b) / LN_10).max(double_well_tail(s, x_min + m as f64 * h));
    Ok(QuadPlan {
        h,
        x_min,
        x_max,
        m,
        target_digits: digits,
        est_error_log10: est,
    })
}

/// Large-`P` step: `2π (3 ln10)^{-2/3} s^{1/3} P^{-2/3} ≈ 1.73 s^{1/3} P^{-2/3}`.
pub fn double_well_h_asymptotic(s: f64, digits: f64) -> f64 {
    2.0 * PI / (3.0 * LN_10).powf(2.0 / 3.0) * s.cbrt() * digits.powf(-2.0 / 3.0)
}

/// Large-`P` extent: `((3/2) ln10)^{1/3} s^{1/3} P^{1/3} ≈ 1.51 s^{1/3} P^{1/3}`.
pub fn double_well_x_max_asymptotic(s: f64, digits: f64) -> f64 {
    (1.5 * LN_10 * s * digits).cbrt()
}
