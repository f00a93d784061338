//! Exact rational arithmetic helpers and log-domain (base 2) accumulation.
//!
//! All logs and exponents are base 2. Rational mode is the oracle mode;
//! log-domain floats are used for Monte Carlo paths and for enumeration
//! beyond the exact cap.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Result, UnivdecError};

pub type Rat = BigRational;

/// Relative tolerance used when float-mode values are compared for ties.
pub const FLOAT_TIE_REL_TOL: f64 = 1.0 / (1u64 << 35) as f64;

/// Relative tolerance budget for float-mode summation order differences.
pub const FLOAT_SUM_REL_TOL: f64 = 1.0 / (1u64 << 35) as f64;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parse an exact probability/score: either "p/q" or a decimal string
/// such as "0.25" or "-1.5e-2".
pub fn parse_exact(s: &str) -> Result<Rat> {
    let s = s.trim();
    let err = || UnivdecError::NumberParse {
        value: s.to_string(),
    };
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| err())?;
        let d: BigInt = den.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rat::new(n, d));
    }
    // decimal, optionally with exponent
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if frac_part.chars().any(|c| !c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!(
        "{}{}",
        if int_part.is_empty() { "0" } else { int_part },
        frac_part
    );
    let n: BigInt = digits.parse().map_err(|_| err())?;
    let scale = frac_part.len() as i32 - exp;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rat::new(n, ten.pow(scale as u32))
    } else {
        Rat::from_integer(n * ten.pow((-scale) as u32))
    };
    Ok(value)
}

/// Format a rational as "p/q" (or "p" when the denominator is 1).
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back through log2 for values outside f64 range
        let l = log2_rat(r.numer().magnitude()) - log2_rat(r.denom().magnitude());
        let m = l.exp2();
        if r.is_negative() {
            -m
        } else {
            m
        }
    })
}

fn log2_rat(u: &BigUint) -> f64 {
    let bits = u.bits();
    if bits <= 52 {
        return u.to_f64().unwrap().log2();
    }
    let shifted = u >> (bits - 52);
    shifted.to_f64().unwrap().log2() + (bits - 52) as f64
}

/// log2 of a positive rational, exact up to f64 rounding even when the
/// value itself underflows or overflows f64.
pub fn log2_of_rat(r: &Rat) -> f64 {
    assert!(r.is_positive(), "log2 of non-positive rational");
    log2_rat(r.numer().magnitude()) - log2_rat(r.denom().magnitude())
}

/// Integer power of a rational.
pub fn rat_pow(base: &Rat, exp: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// 2^k as an exact rational for any integer k.
pub fn exp2_rat(k: i64) -> Rat {
    let one = BigInt::one();
    if k >= 0 {
        Rat::from_integer(one << (k as usize))
    } else {
        Rat::new(one.clone(), one << ((-k) as usize))
    }
}

/// ln of a positive rational via log2.
pub fn ln_of_rat(r: &Rat) -> f64 {
    log2_of_rat(r) * std::f64::consts::LN_2
}

/// Stable log2-domain sum: given log2 of nonnegative terms, return
/// log2 of their sum. NEG_INFINITY encodes a zero term.
pub fn log2_sum(terms: &[f64]) -> f64 {
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let s: f64 = terms.iter().map(|&t| (t - m).exp2()).sum();
    m + s.log2()
}

/// Tie test for float-mode metric comparison: values within
/// `FLOAT_TIE_REL_TOL` relative are declared equal.
pub fn float_tied(a: f64, b: f64) -> bool {
    if a == b {
        return true;
    }
    let scale = a.abs().max(b.abs());
    (a - b).abs() <= FLOAT_TIE_REL_TOL * scale
}

/// Sign of a BigInt as BigInt sign helper used in tests.
pub fn is_nonneg(r: &Rat) -> bool {
    r.numer().sign() != Sign::Minus
}
