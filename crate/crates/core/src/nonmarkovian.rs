//! First-order decay into a finite band, with and without a clock.
//!
//! The reservoir occupies `[E_min, E_max]` with coupling product
//! `ρ(E)Ω²(E)`. Flat bands have closed forms in terms of `erf`; other
//! profiles are integrated numerically.

use std::fmt;
use std::f64::consts::{SQRT_2, TAU};
use std::sync::Arc;

use num_complex::Complex64;

use crate::clock::{count_for_time, ClockParams};
use crate::error::{domain, Error, Result};
use crate::numerics::{erf, integrate_real, QuadratureSpec};

/// First-order results are trusted while `Γ_Δt t` stays below this.
pub const FIRST_ORDER_LIMIT: f64 = 0.1;

#[derive(Clone)]
enum Shape {
    Flat(f64),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

#[derive(Clone)]
pub struct BandProfile {
    e_min: f64,
    e_max: f64,
    excited_energy: f64,
    shape: Shape,
}

impl fmt::Debug for BandProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shape = match &self.shape {
            Shape::Flat(v) => format!("Flat({v})"),
            Shape::Custom(_) => "Custom".to_string(),
        };
        f.debug_struct("BandProfile")
            .field("e_min", &self.e_min)
            .field("e_max", &self.e_max)
            .field("excited_energy", &self.excited_energy)
            .field("shape", &shape)
            .finish()
    }
}

fn check_edges(e_min: f64, e_max: f64, excited_energy: f64) -> Result<()> {
    if !(e_min.is_finite() && e_max.is_finite() && excited_energy.is_finite()) {
        return domain("band edges and excited energy must be finite");
    }
    if !(e_min < e_max) {
        return domain(format!("band needs E_min < E_max, got [{e_min}, {e_max}]"));
    }
    Ok(())
}

impl BandProfile {
    /// Flat band with constant `ρΩ²`.
    pub fn flat(e_min: f64, e_max: f64, excited_energy: f64, coupling_density: f64) -> Result<Self> {
        check_edges(e_min, e_max, excited_energy)?;
        if !(coupling_density > 0.0 && coupling_density.is_finite()) {
            return domain(format!("coupling density must be positive, got {coupling_density}"));
        }
        Ok(Self { e_min, e_max, excited_energy, shape: Shape::Flat(coupling_density) })
    }

    /// Flat band `[0, ΔE_r]` with the excited level placed by
    /// `ξ = 2(E_e - E_min)/ΔE_r`.
    pub fn from_xi(xi: f64, band_width: f64, coupling_density: f64) -> Result<Self> {
        if !(band_width > 0.0 && band_width.is_finite()) {
            return domain(format!("band width must be positive, got {band_width}"));
        }
        Self::flat(0.0, band_width, 0.5 * xi * band_width, coupling_density)
    }

    /// Arbitrary non-negative profile; values outside the band are ignored.
    pub fn custom<F>(e_min: f64, e_max: f64, excited_energy: f64, product: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        check_edges(e_min, e_max, excited_energy)?;
        Ok(Self { e_min, e_max, excited_energy, shape: Shape::Custom(Arc::new(product)) })
    }

    pub fn e_min(&self) -> f64 {
        self.e_min
    }

    pub fn e_max(&self) -> f64 {
        self.e_max
    }

    pub fn excited_energy(&self) -> f64 {
        self.excited_energy
    }

    /// `ΔE_r = E_max - E_min`
    pub fn band_width(&self) -> f64 {
        self.e_max - self.e_min
    }

    /// `ξ = 2(E_e - E_min)/ΔE_r`; the level lies inside the band for `0 < ξ < 2`.
    pub fn xi(&self) -> f64 {
        2.0 * (self.excited_energy - self.e_min) / self.band_width()
    }

    pub fn contains(&self, energy: f64) -> bool {
        (self.e_min..=self.e_max).contains(&energy)
    }

    pub fn is_flat(&self) -> bool {
        matches!(self.shape, Shape::Flat(_))
    }

    /// `ρ(E)Ω²(E)`, zero outside the band.
    pub fn product(&self, energy: f64) -> f64 {
        if !self.contains(energy) {
            return 0.0;
        }
        match &self.shape {
            Shape::Flat(v) => *v,
            Shape::Custom(f) => f(energy).max(0.0),
        }
    }

    /// Reference golden-rule rate `2πρΩ²`. For a flat band this is the
    /// band's constant, also when `E_e` lies outside it; custom profiles use
    /// the product at the band point nearest to `E_e`.
    pub fn fermi_rate(&self) -> f64 {
        match &self.shape {
            Shape::Flat(v) => TAU * v,
            Shape::Custom(_) => TAU * self.product(self.excited_energy.clamp(self.e_min, self.e_max)),
        }
    }

    fn quadrature_spec(&self) -> QuadratureSpec {
        QuadratureSpec::default().with_tolerances(1e-12, 1e-300)
    }

    /// `∫ρΩ² dE` over the band.
    pub fn total_coupling(&self) -> Result<f64> {
        match &self.shape {
            Shape::Flat(v) => Ok(v * self.band_width()),
            Shape::Custom(_) => integrate_real(|e| self.product(e), self.e_min, self.e_max, &self.quadrature_spec()),
        }
    }
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if !(value > 0.0 && value.is_finite()) {
        return domain(format!("{name} must be positive, got {value}"));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandAmplitude {
    pub value: Complex64,
    pub out_of_band: bool,
}

/// First-order amplitude to emit into `E_r` after exactly `τ` in the
/// excited state, `-i√(ρΩ²(E_r)) e^{-iE_r(t-τ)} e^{-iE_eτ}`.
///
/// Normalised so that `|amplitude|²` is a density in `E_r`. Zero for `τ`
/// outside `[0, t]`; zero with `out_of_band` set when `E_r` is outside the band.
pub fn first_order_conditional_amplitude(band: &BandProfile, photon_energy: f64, t: f64, tau: f64) -> Result<BandAmplitude> {
    if !(t >= 0.0 && t.is_finite()) {
        return domain(format!("time must be finite and non-negative, got {t}"));
    }
    let zero = Complex64::new(0.0, 0.0);
    if !band.contains(photon_energy) {
        return Ok(BandAmplitude { value: zero, out_of_band: true });
    }
    if !(0.0..=t).contains(&tau) {
        return Ok(BandAmplitude { value: zero, out_of_band: false });
    }
    let phase = -photon_energy * (t - tau) - band.excited_energy * tau;
    let value = -Complex64::i() * Complex64::from_polar(band.product(photon_energy).sqrt(), phase);
    Ok(BandAmplitude { value, out_of_band: false })
}

/// Joint probability density of photon energy `E_r` and clock reading `n`,
/// `πρΩ²(E_r)Δt²(2πn)^{-1/2} exp[-(E_r - E_e)²Δt²/2]`.
pub fn clocked_probability(band: &BandProfile, resolution: f64, photon_energy: f64, n: u64) -> Result<f64> {
    check_positive("clock resolution", resolution)?;
    if n == 0 {
        return domain("clocked probability needs n >= 1");
    }
    let x = (photon_energy - band.excited_energy) * resolution;
    Ok(std::f64::consts::PI * band.product(photon_energy) * resolution * resolution / (TAU * n as f64).sqrt()
        * (-0.5 * x * x).exp())
}

/// `Γ_Δt = √(2π)Δt ∫ρΩ²(E) exp[-(E - E_e)²Δt²/2] dE`.
pub fn clocked_decay_rate(band: &BandProfile, resolution: f64) -> Result<f64> {
    check_positive("clock resolution", resolution)?;
    match band.shape {
        Shape::Flat(_) => {
            let s = resolution / SQRT_2;
            let upper = erf((band.e_max - band.excited_energy) * s);
            let lower = erf((band.excited_energy - band.e_min) * s);
            Ok(band.fermi_rate() * 0.5 * (upper + lower))
        }
        Shape::Custom(_) => clocked_decay_rate_quadrature(band, resolution),
    }
}

/// [`clocked_decay_rate`] by direct quadrature for any profile.
pub fn clocked_decay_rate_quadrature(band: &BandProfile, resolution: f64) -> Result<f64> {
    check_positive("clock resolution", resolution)?;
    let e0 = band.excited_energy;
    let weight = |e: f64| {
        let x = (e - e0) * resolution;
        band.product(e) * (-0.5 * x * x).exp()
    };
    let spec = band.quadrature_spec();
    // Split at the Gaussian centre when it lies inside the band.
    let integral = if band.contains(e0) && e0 > band.e_min && e0 < band.e_max {
        integrate_real(weight, band.e_min, e0, &spec)? + integrate_real(weight, e0, band.e_max, &spec)?
    } else {
        integrate_real(weight, band.e_min, band.e_max, &spec)?
    };
    Ok(TAU.sqrt() * resolution * integral)
}

/// `(Δt, Γ_Δt/Γ_Fermi)` over `grid`.
pub fn rate_ratio_curve(band: &BandProfile, grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    let reference = band.fermi_rate();
    if !(reference > 0.0) {
        return domain("profile vanishes at the reference energy");
    }
    grid.iter().map(|&dt| Ok((dt, clocked_decay_rate(band, dt)? / reference))).collect()
}

/// Rate under projective checks every `δt`: `δt ∫ρΩ² dE`.
pub fn projective_zeno_rate(band: &BandProfile, interval: f64) -> Result<f64> {
    check_positive("check interval", interval)?;
    Ok(interval * band.total_coupling()?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZenoTimes {
    /// `τ_z = (ρΩ²ΔE_r)^{-1/2}`
    pub zeno: f64,
    /// `τ_J = Γ_Fermi τ_z² = 2π/ΔE_r`
    pub jump: f64,
}

/// Closed forms for flat bands only.
pub fn zeno_and_jump_time(band: &BandProfile) -> Result<ZenoTimes> {
    match band.shape {
        Shape::Flat(v) => {
            let zeno = 1.0 / (v * band.band_width()).sqrt();
            Ok(ZenoTimes { zeno, jump: TAU / band.band_width() })
        }
        Shape::Custom(_) => Err(Error::UnsupportedProfile(
            "Zeno and jump times have closed forms only for flat bands".into(),
        )),
    }
}

/// A first-order quantity with its validity flag `Γ_Δt t ≤ 0.1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrder<T> {
    pub value: T,
    pub valid: bool,
}

/// Photon energy density accumulated by time `t` with a clock of
/// resolution `Δt`, `√(2π)ρΩ²(E_r)Δt exp[-(E_r - E_e)²Δt²/2] t`.
pub fn clocked_spectrum_nonmarkovian(band: &BandProfile, resolution: f64, photon_energy: f64, t: f64) -> Result<FirstOrder<f64>> {
    check_positive("clock resolution", resolution)?;
    if !(t >= 0.0 && t.is_finite()) {
        return domain(format!("time must be finite and non-negative, got {t}"));
    }
    let rate = clocked_decay_rate(band, resolution)?;
    let x = (photon_energy - band.excited_energy) * resolution;
    let value = TAU.sqrt() * band.product(photon_energy) * resolution * (-0.5 * x * x).exp() * t;
    Ok(FirstOrder { value, valid: rate * t <= FIRST_ORDER_LIMIT })
}

/// Decay probability at `t` summed reading by reading,
/// `Σ_{n=1}^{n_max} ∫dE_r clocked_probability`, with `n_max` the count
/// read at `t`. Each energy integral is `Γ_Δt Δt/(2√n)`; the sum
/// approaches `Γ_Δt t` as `n_max` grows, with relative error close to
/// `ζ(1/2)/(2√n_max)`.
pub fn decay_probability_summed(band: &BandProfile, clock: &ClockParams, t: f64) -> Result<FirstOrder<f64>> {
    if !(t >= 0.0 && t.is_finite()) {
        return domain(format!("time must be finite and non-negative, got {t}"));
    }
    let dt = clock.resolution();
    let rate = clocked_decay_rate(band, dt)?;
    let n_max = count_for_time(clock, t);
    // Smallest terms first.
    let sum: f64 = (1..=n_max).rev().map(|n| 1.0 / (n as f64).sqrt()).sum();
    Ok(FirstOrder { value: rate * 0.5 * dt * sum, valid: rate * t <= FIRST_ORDER_LIMIT })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markovian::{conditional_amplitude, FinalState, MarkovianAtom};
    use std::f64::consts::PI;

    fn flat_density() -> f64 {
        1.0 / TAU
    }

    #[test]
    fn band_validation() {
        assert!(BandProfile::flat(1.0, 1.0, 0.5, 1.0).is_err());
        assert!(BandProfile::flat(0.0, 1.0, 0.5, 0.0).is_err());
        assert!(BandProfile::from_xi(1.0, -2.0, 1.0).is_err());
        let band = BandProfile::from_xi(-0.5, 10.0, flat_density()).unwrap();
        assert!((band.excited_energy() + 2.5).abs() < 1e-15);
        assert!((band.xi() + 0.5).abs() < 1e-15);
        assert!(clocked_decay_rate(&band, 0.0).is_err());
    }

    #[test]
    fn conditional_amplitude_cases() {
        let band = BandProfile::flat(-5.0, 5.0, 0.7, 0.2).unwrap();
        for tau in [0.0, 0.4, 1.3] {
            let a = first_order_conditional_amplitude(&band, 1.1, 1.3, tau).unwrap();
            assert!((a.value.norm() - 0.2f64.sqrt()).abs() < 1e-15);
        }
        let end = first_order_conditional_amplitude(&band, 1.1, 1.3, 1.3).unwrap();
        let expected = -Complex64::i() * 0.2f64.sqrt() * Complex64::from_polar(1.0, -0.7 * 1.3);
        assert!((end.value - expected).norm() < 1e-15);
        let outside = first_order_conditional_amplitude(&band, 6.0, 1.3, 0.5).unwrap();
        assert!(outside.out_of_band && outside.value == Complex64::new(0.0, 0.0));
        let late = first_order_conditional_amplitude(&band, 1.0, 1.3, 1.5).unwrap();
        assert_eq!(late.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn reduces_to_markovian_without_width() {
        let band = BandProfile::flat(-50.0, 50.0, 0.3, 0.4).unwrap();
        let atom = MarkovianAtom::new(0.3, 1e-13).unwrap();
        for (e, tau) in [(0.1, 0.2), (-3.0, 1.0), (7.5, 1.9)] {
            let ours = first_order_conditional_amplitude(&band, e, 2.0, tau).unwrap().value;
            let theirs = conditional_amplitude(&atom, FinalState::Photon(e), 2.0, tau).unwrap().density * 0.4f64.sqrt();
            assert!((ours - theirs).norm() < 1e-12);
        }
    }

    #[test]
    fn clocked_probability_shape() {
        let band = BandProfile::flat(-5.0, 5.0, 0.0, flat_density()).unwrap();
        let dt = 0.2;
        let p1 = clocked_probability(&band, dt, 0.0, 100).unwrap();
        assert!((p1 - PI * flat_density() * dt * dt / (TAU * 100.0).sqrt()).abs() < 1e-16);
        let p4 = clocked_probability(&band, dt, 0.0, 400).unwrap();
        assert!((p4 / p1 - 0.5).abs() < 1e-15);
        assert!(clocked_probability(&band, dt, 0.0, 0).is_err());
    }

    #[test]
    fn wide_band_limit_is_golden_rule() {
        let band = BandProfile::from_xi(1.0, 1000.0, flat_density()).unwrap();
        let rate = clocked_decay_rate(&band, 1.0).unwrap();
        assert!((rate - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zeno_slope_example() {
        let band = BandProfile::from_xi(1.0, 10.0, flat_density()).unwrap();
        let ratio = clocked_decay_rate(&band, 0.01).unwrap() / band.fermi_rate();
        assert!((ratio - 0.0399).abs() < 1e-4);
        assert!((ratio / (10.0 * 0.01 / TAU.sqrt()) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn closed_form_matches_quadrature() {
        for &(xi, dt) in &[(1.0, 0.3), (-0.5, 0.7), (2.5, 0.05), (0.2, 4.0)] {
            let band = BandProfile::from_xi(xi, 10.0, flat_density()).unwrap();
            let a = clocked_decay_rate(&band, dt).unwrap();
            let b = clocked_decay_rate_quadrature(&band, dt).unwrap();
            assert!((a / b - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn custom_profile_uses_quadrature() {
        let band = BandProfile::custom(0.0, 4.0, 2.0, |e| 0.1 * e).unwrap();
        assert!(!band.is_flat());
        assert!((band.total_coupling().unwrap() - 0.8).abs() < 1e-12);
        // Wide clock: the Gaussian weight is almost flat.
        let rate = clocked_decay_rate(&band, 1e-4).unwrap();
        assert!((rate - TAU.sqrt() * 1e-4 * 0.8).abs() < 1e-9);
        assert!(matches!(zeno_and_jump_time(&band), Err(Error::UnsupportedProfile(_))));
    }

    #[test]
    fn projective_rate_example() {
        let band = BandProfile::from_xi(1.0, 10.0, flat_density()).unwrap();
        let r = projective_zeno_rate(&band, 0.01).unwrap();
        assert!((r - 10.0 / TAU * 0.01).abs() < 1e-15);
        // Small-Δt clocked slope over projective slope is 1/√(2π) × 2π.
        let clocked = clocked_decay_rate(&band, 1e-4).unwrap() / 1e-4;
        let projective = projective_zeno_rate(&band, 1.0).unwrap();
        assert!((clocked / projective - TAU.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn zeno_and_jump() {
        let band = BandProfile::from_xi(1.0, 10.0, 0.37).unwrap();
        let z = zeno_and_jump_time(&band).unwrap();
        assert!((z.jump - TAU / 10.0).abs() < 1e-15);
        assert!((z.zeno - (0.37f64 * 10.0).powf(-0.5)).abs() < 1e-15);
        assert!((band.fermi_rate() * z.zeno * z.zeno - z.jump).abs() < 1e-14);
    }

    #[test]
    fn spectrum_mass_is_rate_times_time() {
        let band = BandProfile::from_xi(0.6, 10.0, flat_density()).unwrap();
        let (dt, t) = (0.4, 0.05);
        let spec = QuadratureSpec::default().with_tolerances(1e-13, 1e-300);
        let mass = integrate_real(
            |e| clocked_spectrum_nonmarkovian(&band, dt, e, t).unwrap().value,
            band.e_min(),
            band.e_max(),
            &spec,
        )
        .unwrap();
        assert!((mass - clocked_decay_rate(&band, dt).unwrap() * t).abs() < 1e-9 * mass.max(1e-3));
        assert!(clocked_spectrum_nonmarkovian(&band, dt, 1.0, t).unwrap().valid);
        assert!(!clocked_spectrum_nonmarkovian(&band, dt, 1.0, 5.0).unwrap().valid);
    }

    #[test]
    fn out_of_band_level_piles_up_at_nearer_edge() {
        let band = BandProfile::from_xi(-0.5, 10.0, flat_density()).unwrap();
        let near = clocked_spectrum_nonmarkovian(&band, 0.5, 0.1, 1.0).unwrap().value;
        let far = clocked_spectrum_nonmarkovian(&band, 0.5, 9.9, 1.0).unwrap().value;
        assert!(near > 1e6 * far);
    }

    #[test]
    fn summed_probability_converges_slowly() {
        let band = BandProfile::from_xi(1.0, 10.0, flat_density()).unwrap();
        let clock = ClockParams::new(4_000_000, 1.0).unwrap();
        let t = 0.5;
        let summed = decay_probability_summed(&band, &clock, t).unwrap();
        let direct = clocked_decay_rate(&band, clock.resolution()).unwrap() * t;
        assert!((summed.value / direct - 1.0).abs() < 1e-3);
        assert!(summed.valid);
        let coarse = ClockParams::new(400, 1.0).unwrap();
        let s = decay_probability_summed(&band, &coarse, t).unwrap().value;
        let d = clocked_decay_rate(&band, coarse.resolution()).unwrap() * t;
        assert!((s / d - 1.0).abs() > 1e-2);
    }
}
