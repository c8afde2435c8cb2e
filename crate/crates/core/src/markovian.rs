//! Closed-form amplitudes and photon spectra of the wide-band (Markovian)
//! decay model.
//!
//! Amplitudes that create a photon carry one factor of the vanishing
//! coupling Ω; they are returned per unit Ω. Densities over photon energy
//! have the finite product ρΩ² = Γ/2π substituted and are normalised so that
//! the steady-state spectrum integrates to one.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::numerics::special::expm1_over;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkovianAtom {
    excited_energy: f64,
    width: f64,
}

impl MarkovianAtom {
    pub fn new(excited_energy: f64, width: f64) -> Result<Self> {
        if !excited_energy.is_finite() {
            return domain("excited energy must be finite");
        }
        if !(width > 0.0 && width.is_finite()) {
            return domain(format!("decay width must be positive, got {width}"));
        }
        Ok(Self { excited_energy, width })
    }

    pub fn excited_energy(&self) -> f64 {
        self.excited_energy
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// The flat reservoir product ρΩ² = Γ/2π.
    pub fn coupling_density(&self) -> f64 {
        self.width / TAU
    }

    /// `E_e - iΓ/2`.
    pub fn complex_energy(&self) -> Complex64 {
        Complex64::new(self.excited_energy, -0.5 * self.width)
    }

    /// `⟨e|exp(-iHt)|e⟩ = exp(-iE_e t - Γt/2)`.
    pub fn survival_amplitude(&self, t: f64) -> Complex64 {
        (-Complex64::i() * self.complex_energy() * t).exp()
    }

    pub fn survival_probability(&self, t: f64) -> f64 {
        (-self.width * t).exp()
    }
}

/// The four transition amplitudes of the wide-band model at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProcessAmplitudes {
    /// `⟨e|U|e⟩`
    pub excited_to_excited: Complex64,
    /// `⟨E_r|U|e⟩` per unit Ω.
    pub excited_to_photon: Complex64,
    /// `⟨e|U|E_r⟩`, identically zero: the photon is never reabsorbed.
    pub photon_to_excited: Complex64,
    /// `⟨E_r|U|E_r⟩`
    pub photon_to_photon: Complex64,
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return domain(format!("time must be finite and non-negative, got {t}"));
    }
    Ok(())
}

/// Emission amplitude per unit Ω,
/// `-i e^{-iE_r t} ∫₀ᵗ exp[i(E_r - E_e + iΓ/2)s] ds`, evaluated without
/// cancellation when the exponent is small.
fn emission_amplitude(atom: &MarkovianAtom, photon_energy: f64, t: f64) -> Complex64 {
    let z = Complex64::new(photon_energy - atom.excited_energy, 0.5 * atom.width);
    let outgoing = Complex64::from_polar(1.0, -photon_energy * t);
    -Complex64::i() * outgoing * t * expm1_over(Complex64::i() * z * t)
}

pub fn process_amplitudes(atom: &MarkovianAtom, photon_energy: f64, t: f64) -> Result<ProcessAmplitudes> {
    check_time(t)?;
    Ok(ProcessAmplitudes {
        excited_to_excited: atom.survival_amplitude(t),
        excited_to_photon: emission_amplitude(atom, photon_energy, t),
        photon_to_excited: Complex64::new(0.0, 0.0),
        photon_to_photon: Complex64::from_polar(1.0, -photon_energy * t),
    })
}

/// Steady-state photon energy density `(Γ/2π) / ((E_r - E_e)² + Γ²/4)`.
pub fn lorentzian_spectrum(atom: &MarkovianAtom, photon_energy: f64) -> f64 {
    let d = photon_energy - atom.excited_energy;
    atom.coupling_density() / (d * d + 0.25 * atom.width * atom.width)
}

/// Photon energy density found in a single measurement at time `t`.
/// Not monotone in `t` away from resonance; tends to
/// [`lorentzian_spectrum`] as `Γt → ∞`.
pub fn transient_spectrum(atom: &MarkovianAtom, photon_energy: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(atom.coupling_density() * emission_amplitude(atom, photon_energy, t).norm_sqr())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FinalState {
    Excited,
    Photon(f64),
}

/// Amplitude to reach a final state after spending exactly `τ` in the
/// excited state. The regular part is a density in `τ`; histories that
/// never leave the excited state contribute a point mass at `τ = t`, which
/// is carried separately and never discretised.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalAmplitude {
    /// Regular density at the requested `τ` (per unit Ω for photons).
    pub density: Complex64,
    /// Weight of `δ(τ - t)`.
    pub end_weight: Complex64,
}

/// `τ` outside `[0, t]` gives a zero density; this is not an error.
pub fn conditional_amplitude(
    atom: &MarkovianAtom,
    final_state: FinalState,
    t: f64,
    tau: f64,
) -> Result<ConditionalAmplitude> {
    check_time(t)?;
    let zero = Complex64::new(0.0, 0.0);
    match final_state {
        FinalState::Excited => Ok(ConditionalAmplitude { density: zero, end_weight: atom.survival_amplitude(t) }),
        FinalState::Photon(energy) => {
            if !(0.0..=t).contains(&tau) {
                return Ok(ConditionalAmplitude { density: zero, end_weight: zero });
            }
            let after = Complex64::from_polar(1.0, -energy * (t - tau));
            let before = atom.survival_amplitude(tau);
            Ok(ConditionalAmplitude { density: -Complex64::i() * after * before, end_weight: zero })
        }
    }
}
