//! Interval estimates and tests used by the experiments.

use alloc::vec::Vec;

use crate::rng::{Purpose, Stream};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = z * libm::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

/// First `x` at which the nondecreasing piecewise-linear curve through
/// `(xs, ys)` reaches `level`. `None` if it never does.
pub fn crossing(xs: &[f64], ys: &[f64], level: f64) -> Option<f64> {
    assert_eq!(xs.len(), ys.len());
    let j = ys.iter().position(|&y| y >= level)?;
    if j == 0 {
        return Some(xs[0]);
    }
    let (x0, x1, y0, y1) = (xs[j - 1], xs[j], ys[j - 1], ys[j]);
    Some(x0 + (x1 - x0) * (level - y0) / (y1 - y0))
}

fn ln_choose(n: u64, k: u64) -> f64 {
    libm::lgamma(n as f64 + 1.0) - libm::lgamma(k as f64 + 1.0) - libm::lgamma((n - k) as f64 + 1.0)
}

/// Exact two-sided McNemar p-value for `b` and `c` discordant pairs.
pub fn mcnemar_exact(b: u64, c: u64) -> f64 {
    let n = b + c;
    if n == 0 {
        return 1.0;
    }
    let k = b.min(c);
    let ln_half = -(n as f64) * core::f64::consts::LN_2;
    let tail: f64 = (0..=k).map(|i| libm::exp(ln_choose(n, i) + ln_half)).sum();
    (2.0 * tail).min(1.0)
}

/// Mean and normal 95% interval of paired differences of two binary
/// indicators, from the discordant counts: `gained` pairs where only the
/// second indicator is set, `lost` where only the first is.
pub fn paired_gap(gained: u64, lost: u64, pairs: u64) -> (f64, (f64, f64)) {
    if pairs == 0 {
        return (0.0, (0.0, 0.0));
    }
    let n = pairs as f64;
    let mean = (gained as f64 - lost as f64) / n;
    let second = (gained + lost) as f64 / n;
    let var = ((second - mean * mean) / n).max(0.0);
    let half = Z95 * libm::sqrt(var);
    (mean, (mean - half, mean + half))
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let i = libm::floor(pos) as usize;
    let frac = pos - i as f64;
    let next = sorted.get(i + 1).copied().unwrap_or(sorted[i]);
    Some(sorted[i] + frac * (next - sorted[i]))
}

/// Indices of bootstrap replicate `replicate` over `len` items.
pub fn bootstrap_sample(seed: u64, replicate: u64, len: usize) -> Vec<usize> {
    let mut s = Stream::new(seed, Purpose::Bootstrap, replicate);
    (0..len).map(|_| s.below(len as u64) as usize).collect()
}

pub fn mean_sd(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.clone().count();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = xs.clone().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss: f64 = xs.map(|x| (x - mean) * (x - mean)).sum();
    (mean, libm::sqrt(ss / (n - 1) as f64))
}
