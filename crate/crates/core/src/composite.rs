//! The clock coupled to the decaying atom.
//!
//! A *running* clock is coupled to the excited-state projector and stops
//! when the photon is emitted; a *waiting* clock is coupled to the
//! complement and starts at emission. Photon-branch amplitudes are given per
//! unit `Ω`; probabilities and densities substitute `ρΩ² = Γ/2π` so they are
//! observables.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::clock::{binomial_amplitude, clock_state_overlap, gaussian_amplitude, minus_i_pow, Approximate, ClockParams, Regime};
use crate::error::{domain, Result};
use crate::markovian::{conditional_amplitude, FinalState, MarkovianAtom};
use crate::numerics::special::binomial_pmf_window;
use crate::numerics::{integrate_complex, integrate_real, kronrod_rule, QuadratureSpec};

/// Half-width of the `τ` window around `t_n`, in units of `Δt`.
const WINDOW_WIDTHS: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeOutcome {
    pub final_state: FinalState,
    /// Bosons in the right well.
    pub count: u64,
}

impl CompositeOutcome {
    pub fn excited(count: u64) -> Self {
        Self { final_state: FinalState::Excited, count }
    }

    pub fn photon(energy: f64, count: u64) -> Self {
        Self { final_state: FinalState::Photon(energy), count }
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return domain(format!("time must be finite and non-negative, got {t}"));
    }
    Ok(())
}

fn check_count(clock: &ClockParams, n: u64) -> Result<()> {
    if n > clock.bosons() {
        return domain(format!("n = {n} exceeds N = {}", clock.bosons()));
    }
    Ok(())
}

fn tau_window(clock: &ClockParams, n: u64, t: f64) -> (f64, f64) {
    let centre = clock.reading_time(n);
    let reach = WINDOW_WIDTHS * clock.resolution();
    ((centre - reach).max(0.0), (centre + reach).min(t))
}

/// Panels resolve the detuning phase; the absolute floor is set against
/// the natural size `scale` of the integral so vanishing tails terminate.
fn oscillatory_spec(frequency: f64, scale: f64) -> QuadratureSpec {
    QuadratureSpec::oscillatory(frequency.abs().max(1e-300)).with_tolerances(1e-10, 1e-13 * scale)
}

/// Amplitude to end in `outcome` at time `t` with the clock running while
/// the atom is excited.
///
/// The no-decay branch is exact: survival amplitude times the binomial clock
/// amplitude at `t`. The photon branch integrates the Gaussian clock
/// amplitude against [`conditional_amplitude`] over `τ` near `t_n`, and is
/// per unit `Ω`.
pub fn running_amplitude(
    atom: &MarkovianAtom,
    clock: &ClockParams,
    outcome: CompositeOutcome,
    t: f64,
) -> Result<Approximate<Complex64>> {
    check_time(t)?;
    check_count(clock, outcome.count)?;
    let n = outcome.count;
    match outcome.final_state {
        FinalState::Excited => Ok(Approximate {
            value: atom.survival_amplitude(t) * binomial_amplitude(clock, n, t)?,
            regime: Regime::EXACT,
        }),
        FinalState::Photon(energy) => {
            let regime = clock.regime(clock.reading_time(n).min(t));
            let (a, b) = tau_window(clock, n, t);
            if n == 0 {
                return domain("Gaussian clock amplitude is undefined for n = 0");
            }
            if a >= b {
                return Ok(Approximate { value: Complex64::new(0.0, 0.0), regime });
            }
            let integrand = |tau: f64| {
                let clock_part = gaussian_amplitude(clock, n, tau).map(|g| g.value).unwrap_or_default();
                let atom_part = conditional_amplitude(atom, FinalState::Photon(energy), t, tau)
                    .map(|c| c.density)
                    .unwrap_or_default();
                clock_part * atom_part
            };
            let scale = clock.resolution() * (TAU * n as f64).powf(-0.25);
            let spec = oscillatory_spec(energy - atom.excited_energy(), scale);
            let value = integrate_complex(integrand, a, b, &spec)?.value;
            Ok(Approximate { value, regime })
        }
    }
}

/// `ρΩ²|running_amplitude|²` for the photon branch: joint density in photon
/// energy and probability in `n`.
pub fn running_photon_density(
    atom: &MarkovianAtom,
    clock: &ClockParams,
    photon_energy: f64,
    n: u64,
    t: f64,
) -> Result<Approximate<f64>> {
    let amp = running_amplitude(atom, clock, CompositeOutcome::photon(photon_energy, n), t)?;
    Ok(Approximate { value: atom.coupling_density() * amp.value.norm_sqr(), regime: amp.regime })
}

/// Closed-form joint density of photon energy `E_r` and reading `n`,
/// `ρΩ² πΔt² (2πn)^{-1/2} e^{-Γτ_n} e^{-(E_r - E_e)²Δt²/2}`.
/// Zero when `n = 0` or `τ_n` lies outside `(0, t)`.
pub fn prob_energy_and_reading(atom: &MarkovianAtom, clock: &ClockParams, photon_energy: f64, n: u64, t: f64) -> f64 {
    let tau = clock.reading_time(n);
    if n == 0 || n > clock.bosons() || !(tau < t) {
        return 0.0;
    }
    let dt = clock.resolution();
    let detuning = photon_energy - atom.excited_energy();
    atom.coupling_density() * PI * dt * dt / (TAU * n as f64).sqrt()
        * (-atom.width() * tau).exp()
        * (-0.5 * detuning * detuning * dt * dt).exp()
}

/// Closed-form reading probability `Γ e^{-Γτ_n} / (2ω√(nN))`, zero outside
/// `0 < τ_n < t`.
pub fn reading_probability_closed_form(atom: &MarkovianAtom, clock: &ClockParams, n: u64, t: f64) -> f64 {
    let tau = clock.reading_time(n);
    if n == 0 || n > clock.bosons() || !(tau < t) {
        return 0.0;
    }
    let gamma = atom.width();
    gamma * (-gamma * tau).exp() / (2.0 * clock.hopping() * ((n * clock.bosons()) as f64).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadingEntry {
    pub count: u64,
    /// `τ_n`
    pub reading_time: f64,
    /// Photon emitted and `n` bosons found, with the exact binomial clock.
    pub probability: f64,
    /// The large-`N` closed form, zero for `n = 0` and `τ_n ≥ t`.
    pub closed_form: f64,
}

/// Reading distribution of the running clock at horizon `t`, over photon
/// histories only.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadingTable {
    pub horizon: f64,
    pub entries: Vec<ReadingEntry>,
}

impl ReadingTable {
    /// Total decayed mass with the exact clock.
    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.probability).sum()
    }

    pub fn closed_form_total(&self) -> f64 {
        self.entries.iter().map(|e| e.closed_form).sum()
    }
}

/// Range of counts holding all but ~1e-30 of `Binomial(N, p)`.
fn binomial_support(total: u64, p: f64) -> (u64, u64) {
    let mean = total as f64 * p;
    let reach = 14.0 * (mean * (1.0 - p)).max(0.0).sqrt() + 12.0;
    let lo = (mean - reach).floor().max(0.0) as u64;
    let hi = ((mean + reach).ceil() as u64).min(total);
    (lo, hi)
}

/// Reading distribution at horizon `t`.
///
/// Integrating the photon branch over all photon energies leaves
/// `P(n) = Γ ∫₀ᵗ |A_clock(n, τ)|² e^{-Γτ} dτ`, which is evaluated on a
/// composite Kronrod grid with panels of `Δt/4`. Summing over `n` gives
/// `1 - e^{-Γt}` whatever the clock: the clock does not change the decay.
pub fn reading_distribution(atom: &MarkovianAtom, clock: &ClockParams, t: f64) -> Result<ReadingTable> {
    if !(t > 0.0 && t.is_finite()) {
        return domain(format!("horizon must be positive, got {t}"));
    }
    let total = clock.bosons();
    let gamma = atom.width();
    let panel = (0.25 * clock.resolution()).min(t / 8.0);
    let panels = (t / panel).ceil() as usize;
    let step = t / panels as f64;
    let mut exact = vec![0.0; total as usize + 1];
    for k in 0..panels {
        let a = k as f64 * step;
        for (tau, w) in kronrod_rule(a, a + step) {
            let p = clock.transfer_probability(tau);
            let (lo, hi) = binomial_support(total, p);
            let weight = w * gamma * (-gamma * tau).exp();
            for (i, prob) in binomial_pmf_window(total, p, lo, hi).into_iter().enumerate() {
                exact[lo as usize + i] += weight * prob;
            }
        }
    }
    let entries = exact
        .into_iter()
        .enumerate()
        .map(|(n, probability)| {
            let n = n as u64;
            ReadingEntry {
                count: n,
                reading_time: clock.reading_time(n),
                probability,
                closed_form: reading_probability_closed_form(atom, clock, n, t),
            }
        })
        .collect();
    Ok(ReadingTable { horizon: t, entries })
}

/// Long-time clock-broadened photon spectrum
/// `(Δt/√(2π)) exp[-(E_r - E_e)²Δt²/2]`, normalised over `E_r`.
pub fn clocked_spectrum(atom: &MarkovianAtom, clock: &ClockParams, photon_energy: f64) -> f64 {
    let dt = clock.resolution();
    let x = (photon_energy - atom.excited_energy()) * dt;
    dt / TAU.sqrt() * (-0.5 * x * x).exp()
}

/// Photon energy density at horizon `t` with the exact product-state clock.
///
/// Summing the photon branch over `n` replaces the clock by the overlap
/// `cos^N ω(τ - τ')`, which reduces the double time integral to
/// `(2ρΩ²/Γ) ∫₀ᵗ cos^N(ωu) cos(ku) (e^{-Γu/2} - e^{-Γ(t - u/2)}) du`
/// with `k = E_r - E_e`. Its mass is `1 - e^{-Γt}`.
pub fn clocked_spectrum_exact(atom: &MarkovianAtom, clock: &ClockParams, photon_energy: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    let gamma = atom.width();
    let k = photon_energy - atom.excited_energy();
    let integrand = |u: f64| {
        let overlap = clock_state_overlap(clock, u, 0.0).exact.re;
        overlap * (k * u).cos() * ((-0.5 * gamma * u).exp() - (-gamma * (t - 0.5 * u)).exp())
    };
    let spec = oscillatory_spec(k, clock.resolution());
    let split = (16.0 * clock.resolution()).min(t);
    let mut value = integrate_real(integrand, 0.0, split, &spec)?;
    if split < t {
        value += integrate_real(integrand, split, t, &spec)?;
    }
    Ok(2.0 * atom.coupling_density() / gamma * value)
}

/// Least-squares Gaussian width from `(offset, density)` samples, fitting
/// `ln y = a - x²/(2σ²)` and returning `σ`. Samples with non-positive
/// density are skipped.
pub fn fit_gaussian_width(samples: &[(f64, f64)]) -> Result<f64> {
    let pts: Vec<(f64, f64)> = samples.iter().filter(|s| s.1 > 0.0).map(|&(x, y)| (x * x, y.ln())).collect();
    if pts.len() < 3 {
        return domain("need at least three positive samples to fit a width");
    }
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    if !(slope < 0.0) {
        return domain("samples do not fall off like a Gaussian");
    }
    Ok((-0.5 / slope).sqrt())
}

/// Amplitude to end in `outcome` at `t` with the clock started at emission.
///
/// The no-decay branch is exact and vanishes unless `n = 0`. The photon
/// branch is `(-i)^{n+1}(2πn)^{-1/4} ∫₀ᵗ exp[-(t_n - τ)²/Δt²]
/// e^{-iE_rτ - i(E_e - iΓ/2)(t - τ)} dτ` per unit `Ω`, where `τ` is the time
/// since emission.
pub fn waiting_amplitude(
    atom: &MarkovianAtom,
    clock: &ClockParams,
    outcome: CompositeOutcome,
    t: f64,
) -> Result<Approximate<Complex64>> {
    check_time(t)?;
    check_count(clock, outcome.count)?;
    let n = outcome.count;
    match outcome.final_state {
        FinalState::Excited => {
            let value = if n == 0 { atom.survival_amplitude(t) } else { Complex64::new(0.0, 0.0) };
            Ok(Approximate { value, regime: Regime::EXACT })
        }
        FinalState::Photon(energy) => {
            if n == 0 {
                return domain("Gaussian clock amplitude is undefined for n = 0");
            }
            let regime = clock.regime(clock.reading_time(n).min(t));
            let (a, b) = tau_window(clock, n, t);
            if a >= b {
                return Ok(Approximate { value: Complex64::new(0.0, 0.0), regime });
            }
            let t_n = clock.reading_time(n);
            let dt = clock.resolution();
            let z = atom.complex_energy();
            let integrand = |tau: f64| {
                let x = (t_n - tau) / dt;
                let phase = Complex64::new(0.0, -energy * tau) - Complex64::i() * z * (t - tau);
                phase.exp() * (-x * x).exp()
            };
            let spec = oscillatory_spec(energy - atom.excited_energy(), dt);
            let integral = integrate_complex(integrand, a, b, &spec)?.value;
            let prefactor = minus_i_pow(n + 1) * (TAU * n as f64).powf(-0.25);
            Ok(Approximate { value: prefactor * integral, regime })
        }
    }
}

/// `ρΩ²|waiting_amplitude|²` for the photon branch.
pub fn waiting_photon_density(
    atom: &MarkovianAtom,
    clock: &ClockParams,
    photon_energy: f64,
    n: u64,
    t: f64,
) -> Result<Approximate<f64>> {
    let amp = waiting_amplitude(atom, clock, CompositeOutcome::photon(photon_energy, n), t)?;
    Ok(Approximate { value: atom.coupling_density() * amp.value.norm_sqr(), regime: amp.regime })
}

/// Waiting-clock reading probability summed over photon energies,
/// `Γ(2πn)^{-1/2} ∫₀ᵗ exp[-2(t_n - τ)²/Δt²] e^{-Γ(t - τ)} dτ`.
pub fn waiting_reading_probability(atom: &MarkovianAtom, clock: &ClockParams, n: u64, t: f64) -> Result<Approximate<f64>> {
    check_time(t)?;
    check_count(clock, n)?;
    if n == 0 {
        return domain("Gaussian clock amplitude is undefined for n = 0");
    }
    let regime = clock.regime(clock.reading_time(n).min(t));
    let (a, b) = tau_window(clock, n, t);
    if a >= b {
        return Ok(Approximate { value: 0.0, regime });
    }
    let gamma = atom.width();
    let t_n = clock.reading_time(n);
    let dt = clock.resolution();
    let integrand = |tau: f64| {
        let x = (t_n - tau) / dt;
        (-2.0 * x * x - gamma * (t - tau)).exp()
    };
    let spec = QuadratureSpec::default().with_tolerances(1e-10, 1e-13 * dt);
    let value = gamma / (TAU * n as f64).sqrt() * integrate_real(integrand, a, b, &spec)?;
    Ok(Approximate { value, regime })
}
