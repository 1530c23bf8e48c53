//! Arbitrary-precision reals and the constants the rest of the crate needs.
//!
//! Numbers are [`rug::Float`] values (MPFR underneath). A value "at P digits"
//! is a `Float` whose binary precision is [`prec_bits`]`(P)`; every operation
//! on such inputs produces a result at the same precision, which is how the
//! working precision propagates through a computation. Elementary functions
//! (`exp`, `ln`, `sinh`, ...) are MPFR's correctly rounded implementations.
//!
//! π and Γ(1/4) are computed here with quadratically convergent AGM schemes
//! and cached: the highest precision computed so far is kept and rounded
//! down on request.

use std::sync::{OnceLock, RwLock};

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Binary precision carrying `digits` decimal digits, plus a few spare bits.
pub fn prec_bits(digits: u32) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32 + 8
}

/// Decimal digits represented by a binary precision (rounded down).
pub fn prec_digits(bits: u32) -> u32 {
    (f64::from(bits.saturating_sub(8)) * std::f64::consts::LOG10_2).floor() as u32
}

/// Extra working digits for a sum of `m + 1` samples: `20 + ceil(log10(m + 1))`.
pub fn guard_digits(m: usize) -> u32 {
    20 + ((m as f64) + 1.0).log10().ceil() as u32
}

/// `log10 |x|` in double precision; `-inf` for zero.
pub fn log10_abs(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (mant, exp) = x.to_f64_exp();
    mant.abs().log10() + f64::from(exp) * std::f64::consts::LOG10_2
}

/// π to `digits` decimal digits (Gauss-Legendre / Brent-Salamin AGM).
pub fn pi(digits: u32) -> Float {
    static CACHE: RwLock<Option<Float>> = RwLock::new(None);
    cached(&CACHE, prec_bits(digits), pi_gauss_legendre)
}

/// Γ(1/4) to `digits` decimal digits, from Γ(1/4)² = (2π)^{3/2} / agm(1, √2).
pub fn gamma_quarter(digits: u32) -> Float {
    static CACHE: RwLock<Option<Float>> = RwLock::new(None);
    cached(&CACHE, prec_bits(digits), gamma_quarter_agm)
}

fn cached(cell: &RwLock<Option<Float>>, bits: u32, compute: fn(u32) -> Float) -> Float {
    if let Some(v) = cell.read().expect("constant cache poisoned").as_ref() {
        if v.prec() >= bits {
            return Float::with_val(bits, v);
        }
    }
    let fresh = compute(bits);
    let mut slot = cell.write().expect("constant cache poisoned");
    if slot.as_ref().is_none_or(|v| v.prec() < bits) {
        *slot = Some(fresh.clone());
    }
    fresh
}

fn pi_gauss_legendre(bits: u32) -> Float {
    let work = bits + 64;
    let mut a = Float::with_val(work, 1);
    let mut b = Float::with_val(work, 0.5).sqrt();
    let mut t = Float::with_val(work, 0.25);
    let mut p = Float::with_val(work, 1);
    loop {
        let next_a = Float::with_val(work, &a + &b) / 2u32;
        let gap = Float::with_val(work, &a - &next_a);
        let converged = gap.is_zero() || gap.get_exp().unwrap_or(i32::MIN) < -(work as i32);
        b *= &a;
        b.sqrt_mut();
        t -= gap.square() * &p;
        p *= 2u32;
        a = next_a;
        if converged {
            break;
        }
    }
    let num = Float::with_val(work, &a + &b).square();
    Float::with_val(bits, num / (t * 4u32))
}

fn gamma_quarter_agm(bits: u32) -> Float {
    let work = bits + 64;
    let one = Float::with_val(work, 1);
    let root2 = Float::with_val(work, 2).sqrt();
    let m = agm(&one, &root2).expect("agm(1, sqrt 2) has positive arguments");
    let two_pi = Float::with_val(work, pi_gauss_legendre(work) * 2u32);
    let num = two_pi.pow(Float::with_val(work, 1.5));
    Float::with_val(bits, (num / m).sqrt())
}

/// Arithmetic-geometric mean of two positive reals, at the larger of their precisions.
pub fn agm(a: &Float, b: &Float) -> Result<Float> {
    if !(a.is_sign_positive() && !a.is_zero()) || !a.is_finite() {
        return Err(Error::non_positive("agm argument a", a.to_f64()));
    }
    if !(b.is_sign_positive() && !b.is_zero()) || !b.is_finite() {
        return Err(Error::non_positive("agm argument b", b.to_f64()));
    }
    let bits = a.prec().max(b.prec());
    let work = bits + 16;
    let mut x = Float::with_val(work, a);
    let mut y = Float::with_val(work, b);
    // Converges quadratically once x and y agree to a few bits.
    for _ in 0..(64 + 2 * work.ilog2() as usize + 64) {
        let gap = Float::with_val(work, &x - &y);
        if gap.is_zero() || gap.get_exp().unwrap() < x.get_exp().unwrap() - bits as i32 - 8 {
            return Ok(Float::with_val(bits, x));
        }
        let next_x = Float::with_val(work, &x + &y) / 2u32;
        y *= &x;
        y.sqrt_mut();
        x = next_x;
    }
    Err(Error::NotConverged {
        what: "arithmetic-geometric mean",
        iterations: 64 + 2 * work.ilog2() as usize + 64,
    })
}

/// Largest `k` accepted by [`bernoulli_ratio`].
pub const MAX_BERNOULLI_INDEX: u32 = 32;

/// Exact Euler-Maclaurin coefficient `B_{2k} / (2k)!` for `1 <= k <= 32`.
pub fn bernoulli_ratio(k: u32) -> Result<Rational> {
    if !(1..=MAX_BERNOULLI_INDEX).contains(&k) {
        return Err(Error::OutOfRange {
            what: "Bernoulli index k",
            value: k.to_string(),
            range: "1..=32",
        });
    }
    let table = bernoulli_table();
    let factorial = Integer::from(Integer::factorial(2 * k));
    Ok(Rational::from(&table[2 * k as usize] / factorial))
}

fn bernoulli_table() -> &'static [Rational] {
    static TABLE: OnceLock<Vec<Rational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let len = 2 * MAX_BERNOULLI_INDEX as usize + 1;
        let mut b: Vec<Rational> = Vec::with_capacity(len);
        b.push(Rational::from(1));
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        for m in 1..len {
            let mut acc = Rational::new();
            for (j, bj) in b.iter().enumerate() {
                let c = Integer::from(Integer::binomial_u(m as u32 + 1, j as u32));
                acc += Rational::from(bj * c);
            }
            b.push(-acc / Rational::from(m as u32 + 1));
        }
        b
    })
}

/// Decimal rendering with exactly `digits` significant digits.
///
/// Fixed-point (`-0.000123`, `3.14159`) for moderate exponents, otherwise
/// `d.ddd` followed by `e` and a signed exponent. Parsing the output back
/// with [`parse_decimal`] at the same digit count reproduces the string.
pub fn to_decimal(x: &Float, digits: u32) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x.is_sign_negative() { "-inf" } else { "inf" }.into();
    }
    let digits = digits.max(1) as usize;
    if x.is_zero() {
        return format!("0.{}", "0".repeat(digits - 1));
    }
    let (neg, mantissa, exp) = x.to_sign_string_exp(10, Some(digits));
    // value = 0.mantissa * 10^exp
    let exp = exp.expect("finite nonzero value has an exponent");
    let sign = if neg { "-" } else { "" };
    if exp >= 1 && (exp as usize) < digits {
        let (int, frac) = mantissa.split_at(exp as usize);
        format!("{sign}{int}.{frac}")
    } else if (-4..=0).contains(&exp) {
        format!("{sign}0.{}{mantissa}", "0".repeat((-exp) as usize))
    } else {
        let (lead, rest) = mantissa.split_at(1);
        format!("{sign}{lead}.{rest}e{}", exp - 1)
    }
}

/// Parses a decimal string (as produced by [`to_decimal`]) at `digits` digits.
pub fn parse_decimal(s: &str, digits: u32) -> Result<Float> {
    let parsed = Float::parse(s.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
    Ok(Float::with_val(prec_bits(digits), parsed))
}
