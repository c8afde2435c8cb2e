//! A finite reservoir: one excited level coupled to `M` equally spaced levels.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::nonmarkovian::BandProfile;
use crate::numerics::special::expm1_over;

/// Discretised reservoirs revive after `2π/δE`; results later than this
/// fraction of it are flagged.
pub const RECURRENCE_GUARD: f64 = 0.5;

/// Largest spacing accepted, in units of the golden-rule width.
pub const MAX_SPACING_OVER_WIDTH: f64 = 50.0;

/// Hamiltonian `E_e|e⟩⟨e| + Σ E_k|k⟩⟨k| + Σ Ω_k(|e⟩⟨k| + |k⟩⟨e|)` with its
/// eigendecomposition. Index 0 is `|e⟩`, index `k + 1` is level `k`.
#[derive(Debug, Clone)]
pub struct DiscretizedModel {
    excited_energy: f64,
    energies: Vec<f64>,
    couplings: Vec<f64>,
    spacing: f64,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
}

/// A value with a flag set when it was computed past the recurrence guard.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tracked<T> {
    pub value: T,
    pub beyond_recurrence: bool,
}

impl DiscretizedModel {
    pub fn excited_energy(&self) -> f64 {
        self.excited_energy
    }

    /// `E_k`
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// `Ω_k`
    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    /// `δE`
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn levels(&self) -> usize {
        self.energies.len()
    }

    /// `2π/δE`
    pub fn recurrence_time(&self) -> f64 {
        TAU / self.spacing
    }

    pub fn beyond_recurrence(&self, t: f64) -> bool {
        t > RECURRENCE_GUARD * self.recurrence_time()
    }

    /// `⟨i|exp(-iHt)|j⟩`
    fn propagator_element(&self, i: usize, j: usize, t: f64) -> Complex64 {
        let v = &self.eigenvectors;
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, &e) in self.eigenvalues.iter().enumerate() {
            acc += Complex64::from_polar(v[(i, a)] * v[(j, a)], -e * t);
        }
        acc
    }

    /// `exp(-iHt)|e⟩` in the site basis.
    fn evolve_excited(&self, t: f64) -> Vec<Complex64> {
        let v = &self.eigenvectors;
        let phases: Vec<Complex64> = self
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(a, &e)| Complex64::from_polar(v[(0, a)], -e * t))
            .collect();
        (0..v.nrows())
            .map(|i| phases.iter().enumerate().map(|(a, p)| p * v[(i, a)]).sum())
            .collect()
    }
}

/// Discretises `band` into `M` levels at `E_k = E_min + (k + ½)δE` with
/// `Ω_k = √(ρΩ²(E_k) δE)`, so that `Σ_k Ω_k² → ∫ρΩ²`.
pub fn build_discretized(band: &BandProfile, levels: usize) -> Result<DiscretizedModel> {
    if levels < 11 || levels.is_multiple_of(2) {
        return domain(format!("level count must be odd and at least 11, got {levels}"));
    }
    let spacing = band.band_width() / levels as f64;
    let width = band.fermi_rate();
    if width > 0.0 && spacing > MAX_SPACING_OVER_WIDTH * width {
        return Err(Error::Resolution(format!(
            "level spacing {spacing:e} exceeds {MAX_SPACING_OVER_WIDTH} times the width {width:e}; raise M"
        )));
    }
    let energies: Vec<f64> = (0..levels).map(|k| band.e_min() + (k as f64 + 0.5) * spacing).collect();
    let couplings: Vec<f64> = energies.iter().map(|&e| (band.product(e) * spacing).sqrt()).collect();
    let dim = levels + 1;
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    h[(0, 0)] = band.excited_energy();
    for (k, (&e, &g)) in energies.iter().zip(&couplings).enumerate() {
        h[(k + 1, k + 1)] = e;
        h[(0, k + 1)] = g;
        h[(k + 1, 0)] = g;
    }
    let eig = h.symmetric_eigen();
    Ok(DiscretizedModel {
        excited_energy: band.excited_energy(),
        energies,
        couplings,
        spacing,
        eigenvalues: eig.eigenvalues.iter().copied().collect(),
        eigenvectors: eig.eigenvectors,
    })
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return domain(format!("time must be finite and non-negative, got {t}"));
    }
    Ok(())
}

/// `⟨e|exp(-iHt)|e⟩`
pub fn exact_survival(model: &DiscretizedModel, t: f64) -> Result<Tracked<Complex64>> {
    check_time(t)?;
    Ok(Tracked { value: model.propagator_element(0, 0, t), beyond_recurrence: model.beyond_recurrence(t) })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    pub energies: Vec<f64>,
    /// `|⟨E_k|exp(-iHt)|e⟩|²/δE`
    pub density: Vec<f64>,
    /// `|⟨e|exp(-iHt)|e⟩|²`
    pub survival: f64,
    pub spacing: f64,
    pub beyond_recurrence: bool,
}

impl SpectrumTable {
    /// `Σ density δE`
    pub fn photon_probability(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.spacing
    }
}

pub fn exact_spectrum(model: &DiscretizedModel, t: f64) -> Result<SpectrumTable> {
    check_time(t)?;
    let state = model.evolve_excited(t);
    Ok(SpectrumTable {
        energies: model.energies.clone(),
        density: state[1..].iter().map(|z| z.norm_sqr() / model.spacing).collect(),
        survival: state[0].norm_sqr(),
        spacing: model.spacing,
        beyond_recurrence: model.beyond_recurrence(t),
    })
}

/// Single-jump amplitude `-iΩ_k ∫₀ᵗ e^{-iE_k(t-τ)} e^{-iE_eτ} dτ`.
pub fn dyson_first_order(model: &DiscretizedModel, level: usize, t: f64) -> Result<Complex64> {
    check_time(t)?;
    let (Some(&e), Some(&g)) = (model.energies.get(level), model.couplings.get(level)) else {
        return domain(format!("level {level} out of range"));
    };
    let w = Complex64::new(0.0, (e - model.excited_energy) * t);
    Ok(-Complex64::i() * g * t * Complex64::from_polar(1.0, -e * t) * expm1_over(w))
}

/// Exact `⟨E_k|exp(-iHt)|e⟩`, for comparing with [`dyson_first_order`].
pub fn exact_level_amplitude(model: &DiscretizedModel, level: usize, t: f64) -> Result<Complex64> {
    check_time(t)?;
    if level >= model.levels() {
        return domain(format!("level {level} out of range"));
    }
    Ok(model.propagator_element(level + 1, 0, t))
}
