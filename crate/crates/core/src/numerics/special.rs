//! Log-space combinatorics, the error function and a few stable helpers.

use num_complex::Complex64;

use crate::error::{domain, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Stirling remainder `ln n! - [(n + 1/2) ln n - n + ln √(2π)]` for n ≥ 16.
fn stirling_tail(n: f64) -> f64 {
    let r = 1.0 / n;
    let r2 = r * r;
    r * (1.0 / 12.0 - r2 * (1.0 / 360.0 - r2 * (1.0 / 1260.0 - r2 * (1.0 / 1680.0 - r2 / 1188.0))))
}

/// `ln C(N, n)`.
///
/// Small `min(n, N - n)` uses the exact product; otherwise the Stirling form
/// is rearranged so that only well-conditioned terms remain
/// (`k ln(N/k)` and `-(N-k) ln(1 - k/N)`).
pub fn log_binomial(total: u64, n: u64) -> Result<f64> {
    if n > total {
        return domain(format!("log_binomial: n = {n} exceeds N = {total}"));
    }
    let k = n.min(total - n);
    if k == 0 {
        return Ok(0.0);
    }
    let big = total as f64;
    if k < 16 {
        let base = (total - k) as f64;
        let mut acc = 0.0;
        for i in 1..=k {
            acc += ((base + i as f64) / i as f64).ln();
        }
        return Ok(acc);
    }
    let small = k as f64;
    let rest = big - small;
    let value = small * (big / small).ln() - rest * (-small / big).ln_1p()
        + 0.5 * (big / (small * rest)).ln()
        - HALF_LN_2PI
        + stirling_tail(big)
        - stirling_tail(small)
        - stirling_tail(rest);
    Ok(value)
}

/// Error function, accurate to a few ulp.
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// `(e^w - 1) / w`, continuous through `w = 0`.
pub fn expm1_over(w: Complex64) -> Complex64 {
    if w.norm() < 1e-4 {
        // Four terms leave an error below 1e-20 at |w| = 1e-4.
        Complex64::new(1.0, 0.0) + w * (0.5 + w * (1.0 / 6.0 + w / 24.0))
    } else {
        (w.exp() - 1.0) / w
    }
}

/// `x ln(x/m) + m - x`, accurate when `x` is close to `m`.
fn deviance(x: f64, m: f64) -> f64 {
    if (x - m).abs() < 0.1 * (x + m) {
        let v = (x - m) / (x + m);
        let mut sum = (x - m) * v;
        let mut ej = 2.0 * x * v;
        let v2 = v * v;
        for j in 1..1000 {
            ej *= v2;
            let next = sum + ej / (2 * j + 1) as f64;
            if next == sum {
                return sum;
            }
            sum = next;
        }
        return sum;
    }
    x * (x / m).ln() + m - x
}

/// `ln[C(N, k) p^k q^(N-k)]` in saddle-point form, which avoids the
/// cancellation between `ln C` and the power terms near the mode.
fn log_binomial_pmf(total: u64, k: u64, p: f64, q: f64) -> f64 {
    let (big, small) = (total as f64, k as f64);
    let rest = big - small;
    if k.min(total - k) < 16 {
        // Take the logarithm of whichever of p, q is small directly.
        let (lp, lq) = if p <= 0.5 { (p.ln(), (-p).ln_1p()) } else { ((-q).ln_1p(), q.ln()) };
        return log_binomial(total, k).expect("k within range") + small * lp + rest * lq;
    }
    stirling_tail(big) - stirling_tail(small) - stirling_tail(rest) - deviance(small, big * p) - deviance(rest, big * q)
        + 0.5 * (big / (small * rest)).ln()
        - HALF_LN_2PI
}

/// `ln(e^a + e^b)` without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let hi = a.max(b);
    hi + (-(a - b).abs()).exp().ln_1p()
}

/// Binomial probabilities `C(N, n) p^n (1-p)^(N-n)` for `n` in `lo..=hi`,
/// computed from the mode outwards by ratio recurrence.
pub fn binomial_pmf_window(total: u64, p: f64, lo: u64, hi: u64) -> Vec<f64> {
    let hi = hi.min(total);
    if lo > hi {
        return Vec::new();
    }
    if p <= 0.0 {
        return (lo..=hi).map(|n| if n == 0 { 1.0 } else { 0.0 }).collect();
    }
    if p >= 1.0 {
        return (lo..=hi).map(|n| if n == total { 1.0 } else { 0.0 }).collect();
    }
    let q = 1.0 - p;
    let mode = (((total + 1) as f64 * p).floor() as u64).clamp(lo, hi);
    let log_mode = log_binomial_pmf(total, mode, p, q);
    let mut out = vec![0.0; (hi - lo + 1) as usize];
    let idx = |n: u64| (n - lo) as usize;
    out[idx(mode)] = log_mode.exp();
    let odds = p / q;
    for n in mode..hi {
        out[idx(n + 1)] = out[idx(n)] * (total - n) as f64 / (n + 1) as f64 * odds;
    }
    for n in (lo..mode).rev() {
        out[idx(n)] = out[idx(n + 1)] * (n + 1) as f64 / ((total - n) as f64 * odds);
    }
    out
}
