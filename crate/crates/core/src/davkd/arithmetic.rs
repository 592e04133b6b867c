//! Asymptotic parameters of the isoperimetric argument, evaluated at finite
//! `n`. Every quantity that can overflow is kept as a natural logarithm.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_A: f64 = 30.0;

/// Smallest `b` for which `(b/f²)^{b/f²}` dominates the tail sum for every
/// `f`: with `M = 240·200²/f²` terms of size at most `(6aM)^M`, taking
/// `b/f² = 6aM` suffices.
pub fn default_b(a: f64) -> f64 {
    6.0 * a * 240.0 * 200.0 * 200.0
}

#[derive(Clone, Copy, Debug, PartialEq, Error)]
#[error("n must be at least 16, got {0}")]
pub struct DomainError(pub f64);

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArithmeticParams {
    pub n: f64,
    /// `ln ln n / (ln n)^{1/3}`.
    pub f: f64,
    /// `1/2 − f/3`.
    pub density: f64,
    /// `n^{−3/2−f}`.
    pub p: f64,
    /// `200/f`.
    pub k: f64,
    pub window_lo: f64,
    pub window_hi: f64,
    pub a: f64,
    pub b: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    /// Number of summands, `⌊240 K²⌋`.
    pub terms: u64,
    /// `ln Σ_{m ≤ 240K²} (6am)^m n^{−f/2}`.
    pub ln_sum: f64,
    /// `ln[(b/f²)^{b/f²} n^{−f/2}]`.
    pub ln_majorant: f64,
}

impl TailBound {
    pub fn majorant_holds(&self) -> bool {
        self.ln_majorant >= self.ln_sum
    }
}

pub fn f_of_n(n: f64) -> f64 {
    let ln = libm::log(n);
    libm::log(ln) / libm::cbrt(ln)
}

pub fn params(n: f64, a: f64, b: f64) -> Result<ArithmeticParams, DomainError> {
    if !(n >= 16.0) {
        return Err(DomainError(n));
    }
    let f = f_of_n(n);
    let k = 200.0 / f;
    Ok(ArithmeticParams {
        n,
        f,
        density: 0.5 - f / 3.0,
        p: libm::pow(n, -1.5 - f),
        k,
        window_lo: k * k / 2.0,
        window_hi: 240.0 * k * k,
        a,
        b,
    })
}

pub fn tail_bound(ap: &ArithmeticParams) -> TailBound {
    let terms = libm::floor(ap.window_hi) as u64;
    let ln_n = libm::log(ap.n);
    let shift = ap.f / 2.0 * ln_n;
    let term = |m: u64| m as f64 * libm::log(6.0 * ap.a * m as f64);
    // log-sum-exp against the largest summand
    let peak = (1..=terms.min(2))
        .chain(core::iter::once(terms))
        .map(term)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut acc = 0.0;
    for m in 1..=terms {
        acc += libm::exp(term(m) - peak);
    }
    let ln_sum = peak + libm::log(acc) - shift;
    let x = ap.b / (ap.f * ap.f);
    TailBound {
        terms,
        ln_sum,
        ln_majorant: x * libm::log(x) - shift,
    }
}

pub fn evaluate_arithmetic(n: f64, a: f64, b: f64) -> Result<(ArithmeticParams, TailBound), DomainError> {
    let ap = params(n, a, b)?;
    let tb = tail_bound(&ap);
    Ok((ap, tb))
}
