//! The two-well bosonic hourglass.
//!
//! `N` non-interacting bosons start in the left well and hop with matrix
//! element `ω`. The number `n` found in the right well is read as the
//! elapsed time `t_n = ω⁻¹√(n/N)` with resolution `Δt = ω⁻¹N^{-1/2}`.
//! `Δt` is used exactly as it appears in the Gaussian amplitude
//! `exp[-(t_n - t)²/Δt²]`; it is not a standard deviation.

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::numerics::special::{binomial_pmf_window, log_binomial};

/// Regime thresholds used for the validity flags.
pub const SMALL_ANGLE_LIMIT: f64 = 0.3;
pub const MIN_MEAN_COUNT: f64 = 25.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClockParams {
    bosons: u64,
    hopping: f64,
}

/// Whether the Gaussian clock approximation can be trusted at some time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Regime {
    /// `ωt < 0.3`: the one-boson Rabi period is long compared with `t`.
    pub small_angle: bool,
    /// `n̄(t) > 25`.
    pub well_populated: bool,
}

impl Regime {
    /// Flags for results that involve no clock approximation.
    pub const EXACT: Regime = Regime { small_angle: true, well_populated: true };

    pub fn is_valid(&self) -> bool {
        self.small_angle && self.well_populated
    }
}

/// A value computed under an approximation, with the regime it was computed in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Approximate<T> {
    pub value: T,
    pub regime: Regime,
}

impl ClockParams {
    pub fn new(bosons: u64, hopping: f64) -> Result<Self> {
        if bosons < 1 {
            return domain("clock needs at least one boson");
        }
        if !(hopping > 0.0 && hopping.is_finite()) {
            return domain(format!("hopping must be positive, got {hopping}"));
        }
        Ok(Self { bosons, hopping })
    }

    pub fn bosons(&self) -> u64 {
        self.bosons
    }

    pub fn hopping(&self) -> f64 {
        self.hopping
    }

    /// `Δt = ω⁻¹ N^{-1/2}`.
    pub fn resolution(&self) -> f64 {
        1.0 / (self.hopping * (self.bosons as f64).sqrt())
    }

    /// `t_n = ω⁻¹ √(n/N)`, no range check.
    pub fn reading_time(&self, n: u64) -> f64 {
        (n as f64 / self.bosons as f64).sqrt() / self.hopping
    }

    /// One-boson transfer probability `p(t) = sin²(ωt)`.
    pub fn transfer_probability(&self, t: f64) -> f64 {
        (self.hopping * t).sin().powi(2)
    }

    /// `n̄(t) = N sin²(ωt)`.
    pub fn mean_count(&self, t: f64) -> f64 {
        self.bosons as f64 * self.transfer_probability(t)
    }

    pub fn regime(&self, t: f64) -> Regime {
        Regime {
            small_angle: self.hopping * t < SMALL_ANGLE_LIMIT,
            well_populated: self.mean_count(t) > MIN_MEAN_COUNT,
        }
    }

    fn check_count(&self, n: u64) -> Result<()> {
        if n > self.bosons {
            return domain(format!("n = {n} exceeds N = {}", self.bosons));
        }
        Ok(())
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return domain(format!("time must be finite and non-negative, got {t}"));
    }
    Ok(())
}

/// `(-i)^n`
pub(crate) fn minus_i_pow(n: u64) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// Exact amplitude to find `n` bosons on the right at time `t`,
/// `√C(N,n) (-i sin ωt)^n (cos ωt)^{N-n}`, evaluated in log space.
/// For `ωt ≤ π/2` this is `(-i)^n √(C(N,n) pⁿ (1-p)^{N-n})`.
pub fn binomial_amplitude(clock: &ClockParams, n: u64, t: f64) -> Result<Complex64> {
    clock.check_count(n)?;
    check_time(t)?;
    let (s, c) = (clock.hopping * t).sin_cos();
    let rest = clock.bosons - n;
    let mut log_mod = 0.5 * log_binomial(clock.bosons, n)?;
    let mut sign = 1.0;
    if n > 0 {
        log_mod += n as f64 * s.abs().ln();
        if s < 0.0 && n % 2 == 1 {
            sign = -sign;
        }
    }
    if rest > 0 {
        log_mod += rest as f64 * c.abs().ln();
        if c < 0.0 && rest % 2 == 1 {
            sign = -sign;
        }
    }
    Ok(minus_i_pow(n) * (sign * log_mod.exp()))
}

pub fn binomial_probability(clock: &ClockParams, n: u64, t: f64) -> Result<f64> {
    binomial_amplitude(clock, n, t).map(|a| a.norm_sqr())
}

/// Full probability profile `P(n ← 0, t)` for `n = 0..=N`.
pub fn binomial_profile(clock: &ClockParams, t: f64) -> Result<Vec<f64>> {
    check_time(t)?;
    Ok(binomial_pmf_window(clock.bosons, clock.transfer_probability(t), 0, clock.bosons))
}

/// Peak-regime amplitude `(-i)^n (2πn)^{-1/4} exp[-(t_n - t)²/Δt²]`.
///
/// Evaluated across `n` at fixed `t` it is also the localisation of the
/// clock state around `n̄ = Nω²t²`; its norm over `n` is one only
/// asymptotically and is deliberately not renormalised.
pub fn gaussian_amplitude(clock: &ClockParams, n: u64, t: f64) -> Result<Approximate<Complex64>> {
    if n == 0 {
        return domain("Gaussian clock amplitude is undefined for n = 0");
    }
    check_time(t)?;
    let offset = (clock.reading_time(n) - t) / clock.resolution();
    let modulus = (std::f64::consts::TAU * n as f64).powf(-0.25) * (-offset * offset).exp();
    Ok(Approximate { value: minus_i_pow(n) * modulus, regime: clock.regime(t) })
}

/// `|gaussian_amplitude|²`.
pub fn gaussian_probability(clock: &ClockParams, n: u64, t: f64) -> Result<f64> {
    gaussian_amplitude(clock, n, t).map(|a| a.value.norm_sqr())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadingEstimate {
    /// `t_n`
    pub time: f64,
    /// `Δt`
    pub resolution: f64,
    /// `Δt / t_n = 1/√n`
    pub relative_error: f64,
}

pub fn reading_estimate(clock: &ClockParams, n: u64) -> Result<ReadingEstimate> {
    if n == 0 {
        return domain("no bosons on the right: elapsed time cannot be estimated");
    }
    clock.check_count(n)?;
    Ok(ReadingEstimate {
        time: clock.reading_time(n),
        resolution: clock.resolution(),
        relative_error: 1.0 / (n as f64).sqrt(),
    })
}

/// The count whose reading time is closest to `t`.
pub fn count_for_time(clock: &ClockParams, t: f64) -> u64 {
    let n = (clock.bosons as f64 * (clock.hopping * t).powi(2)).round();
    (n.max(0.0) as u64).min(clock.bosons)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateOverlap {
    /// `⟨Φ(τ')|Φ(τ)⟩ = [cos ω(τ - τ')]^N` for the product state.
    pub exact: Complex64,
    /// Leading large-N form `exp[-(τ - τ')²/(2Δt²)]`.
    pub gaussian: f64,
}

pub fn clock_state_overlap(clock: &ClockParams, tau: f64, tau_prime: f64) -> StateOverlap {
    let delta = tau - tau_prime;
    let c = (clock.hopping * delta).cos();
    let n = clock.bosons;
    let exact = if c == 0.0 {
        0.0
    } else {
        let sign = if c < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
        sign * (n as f64 * c.abs().ln()).exp()
    };
    let x = delta / clock.resolution();
    StateOverlap { exact: Complex64::new(exact, 0.0), gaussian: (-0.5 * x * x).exp() }
}

/// A Gaussian von Neumann pointer reading the number of bosons in one-particle
/// state `|1⟩` of the product state `(α|1⟩ + β|2⟩)^{⊗N}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointerSetup {
    bosons: u64,
    alpha: Complex64,
    width: f64,
}

impl PointerSetup {
    pub fn new(bosons: u64, alpha: Complex64, width: f64) -> Result<Self> {
        if bosons < 1 {
            return domain("pointer setup needs at least one boson");
        }
        if !(alpha.norm() <= 1.0) {
            return domain(format!("|alpha| must not exceed one, got {}", alpha.norm()));
        }
        if !(width > 0.0 && width.is_finite()) {
            return domain(format!("pointer width must be positive, got {width}"));
        }
        Ok(Self { bosons, alpha, width })
    }

    pub fn bosons(&self) -> u64 {
        self.bosons
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn occupation(&self) -> f64 {
        self.alpha.norm_sqr().min(1.0)
    }

    /// `n̄₁ = |α|² N`
    pub fn mean(&self) -> f64 {
        self.occupation() * self.bosons as f64
    }

    /// `σ = √(N|α|²(1 - |α|²))`
    pub fn spread(&self) -> f64 {
        let p = self.occupation();
        (self.bosons as f64 * p * (1.0 - p)).sqrt()
    }

    /// Relative reading error `Δf / n̄₁`.
    pub fn relative_error(&self) -> f64 {
        self.width / self.mean()
    }

    /// Range of counts carrying all but ~1e-30 of the binomial weight.
    fn support(&self) -> (u64, u64) {
        let reach = 14.0 * self.spread() + 12.0;
        let lo = (self.mean() - reach).floor().max(0.0) as u64;
        let hi = ((self.mean() + reach).ceil() as u64).min(self.bosons);
        (lo, hi)
    }

    /// `|B_n|²` over [`Self::support`].
    fn weights(&self) -> (u64, Vec<f64>) {
        let (lo, hi) = self.support();
        (lo, binomial_pmf_window(self.bosons, self.occupation(), lo, hi))
    }
}

/// Normalised squared pointer profile `G²(x)` with `G = C exp(-x²/Δf²)`
/// and `∫G² = 1`.
fn pointer_profile_sq(width: f64, x: f64) -> f64 {
    (2.0 / std::f64::consts::PI).sqrt() / width * (-2.0 * x * x / (width * width)).exp()
}

/// Distribution of pointer readings `w(f) = Σ_n |B_n|² G²(f - n)`.
pub fn pointer_reading_density(setup: &PointerSetup, f: f64) -> f64 {
    let (lo, weights) = setup.weights();
    weights
        .iter()
        .enumerate()
        .map(|(i, &w)| w * pointer_profile_sq(setup.width, f - (lo + i as u64) as f64))
        .sum()
}

/// Large-N form `w(f) ∝ exp[-2(f - n̄₁)²/(Δf² + 4σ²)]`, normalised.
pub fn pointer_reading_density_gaussian(setup: &PointerSetup, f: f64) -> f64 {
    let s2 = setup.width * setup.width + 4.0 * setup.spread().powi(2);
    let x = f - setup.mean();
    (2.0 / (std::f64::consts::PI * s2)).sqrt() * (-2.0 * x * x / s2).exp()
}

/// `F = ⟨Φ|ρ̂|Φ⟩` for the post-measurement boson state,
/// `Σ_{n,n'} |B_n|²|B_n'|² exp[-(n - n')²/(2Δf²)]`.
///
/// The double sum runs in a fixed order over lags so the result is
/// reproducible bit for bit.
pub fn measurement_fidelity(setup: &PointerSetup) -> f64 {
    let (_, w) = setup.weights();
    let len = w.len();
    let inv = 1.0 / (2.0 * setup.width * setup.width);
    let mut total: f64 = w.iter().map(|x| x * x).sum();
    for lag in 1..len {
        let kernel = (-(lag as f64).powi(2) * inv).exp();
        if kernel == 0.0 {
            break;
        }
        let corr: f64 = w[..len - lag].iter().zip(&w[lag..]).map(|(a, b)| a * b).sum();
        total += 2.0 * kernel * corr;
    }
    total.min(1.0)
}
