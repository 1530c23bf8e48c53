use crate::bigreal::guard_digits;
use crate::error::{Error, Result};

/// Step size and summation window for a trapezoidal sum over the real line.
///
/// Samples sit at `x_min + m h` for `m = 0..=m` (mirrored to the negative
/// axis). Planning runs in double precision; `h` and the window are exact
/// binary values, so converting them to any working precision is lossless.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadPlan {
    pub h: f64,
    pub x_min: f64,
    pub x_max: f64,
    /// Number of steps; the sum uses `m + 1` distinct sample abscissae.
    pub m: usize,
    pub target_digits: u32,
    pub est_error_log10: f64,
}

impl QuadPlan {
    /// Plan covering `[x_min, x_max]` with `m = floor((x_max - x_min) / h)`.
    pub fn from_window(
        h: f64,
        x_min: f64,
        x_max: f64,
        target_digits: u32,
        est_error_log10: f64,
    ) -> Result<Self> {
        let plan = QuadPlan {
            h,
            x_min,
            x_max,
            m: 0,
            target_digits,
            est_error_log10,
        };
        plan.validate()?;
        let m = ((x_max - x_min) / h).floor() as usize;
        Ok(QuadPlan { m, ..plan })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0) || !self.h.is_finite() {
            return Err(Error::MalformedPlan(format!(
                "step h = {} must be positive",
                self.h
            )));
        }
        if !(self.x_min >= 0.0) || !self.x_max.is_finite() {
            return Err(Error::MalformedPlan(format!(
                "window start x_min = {} must be non-negative",
                self.x_min
            )));
        }
        if self.x_max < self.x_min {
            return Err(Error::MalformedPlan(format!(
                "x_max = {} lies below x_min = {}",
                self.x_max, self.x_min
            )));
        }
        Ok(())
    }

    pub fn evaluations(&self) -> usize {
        self.m + 1
    }

    pub fn guard_digits(&self) -> u32 {
        guard_digits(self.m)
    }

    /// Predicted number of correct decimal digits.
    pub fn estimated_digits(&self) -> f64 {
        -self.est_error_log10
    }
}
