use std::f64::consts::{FRAC_PI_2, TAU};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use decayclock::clock::{binomial_probability, binomial_profile, ClockParams};
use decayclock::composite::reading_distribution;
use decayclock::markovian::{transient_spectrum, MarkovianAtom};
use decayclock::nonmarkovian::{clocked_decay_rate, clocked_decay_rate_quadrature, BandProfile};
use decayclock::numerics::{integrate_real, log_binomial, operator_norm, unitary_propagator, HermitianMatrix, QuadratureSpec};
use decayclock::oracle::{
    build_discretized, conditional_via_fourier, exact_spectrum, exact_survival, random_pair, ConditionalSpec, Projector,
};
use decayclock::Complex64;
use nalgebra::DMatrix;

fn poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn poly_integral(coeffs: &[f64], a: f64, b: f64) -> f64 {
    let anti: Vec<f64> = std::iter::once(0.0).chain(coeffs.iter().enumerate().map(|(k, c)| c / (k + 1) as f64)).collect();
    poly(&anti, b) - poly(&anti, a)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn quadrature_exact_on_polynomials(
        coeffs in prop::collection::vec(-1.0f64..1.0, 1..16),
        a in -2.0f64..2.0,
        len in 0.01f64..3.0,
    ) {
        let b = a + len;
        let got = integrate_real(|x| poly(&coeffs, x), a, b, &QuadratureSpec::default()).unwrap();
        let exact = poly_integral(&coeffs, a, b);
        let scale: f64 = coeffs.iter().map(|c| c.abs()).sum::<f64>() * 5f64.powi(coeffs.len() as i32) * len;
        prop_assert!((got - exact).abs() <= 1e-13 * scale.max(1.0), "{got} vs {exact}");
    }

    #[test]
    fn propagators_are_unitary(seed in any::<u64>(), dim in 1usize..=16, t in 0.0f64..10.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = HermitianMatrix::random(dim, &mut rng);
        let u = unitary_propagator(&h, t);
        let defect = operator_norm(&(u.adjoint() * &u - DMatrix::<Complex64>::identity(dim, dim)));
        prop_assert!(defect < 1e-12, "defect {defect}");
    }

    #[test]
    fn log_binomial_pascal(total in 2u64..=1000, frac in 0.0f64..1.0) {
        let n = 1 + ((total - 2) as f64 * frac) as u64;
        let lhs = log_binomial(total, n).unwrap();
        let a = log_binomial(total - 1, n - 1).unwrap();
        let b = log_binomial(total - 1, n).unwrap();
        let rhs = a.max(b) + (-(a - b).abs()).exp().ln_1p();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn survival_is_markovian(gamma in 0.01f64..5.0, e in -10.0f64..10.0, t in 0.0f64..5.0, s in 0.0f64..5.0) {
        let atom = MarkovianAtom::new(e, gamma).unwrap();
        let joint = atom.survival_amplitude(t + s);
        let product = atom.survival_amplitude(t) * atom.survival_amplitude(s);
        prop_assert!((joint - product).norm() < 1e-13);
    }

    #[test]
    fn transient_spectrum_is_non_negative(gamma in 0.05f64..3.0, detuning in -20.0f64..20.0, t in 0.0f64..20.0) {
        let atom = MarkovianAtom::new(0.0, gamma).unwrap();
        prop_assert!(transient_spectrum(&atom, detuning, t).unwrap() >= 0.0);
    }

    #[test]
    fn binomial_profile_is_normalised(bosons in 1u64..20_000, angle in 0.0f64..FRAC_PI_2) {
        let clock = ClockParams::new(bosons, 1.0).unwrap();
        let total: f64 = binomial_profile(&clock, angle).unwrap().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12, "{total}");
    }

    #[test]
    fn binomial_mirror_symmetry(bosons in 1u64..2_000, angle in 0.01f64..1.5, frac in 0.0f64..1.0) {
        let clock = ClockParams::new(bosons, 1.0).unwrap();
        let n = (bosons as f64 * frac) as u64;
        let p = binomial_probability(&clock, n, angle).unwrap();
        let q = binomial_probability(&clock, bosons - n, FRAC_PI_2 - angle).unwrap();
        // Log-space evaluation carries an error proportional to the size of the exponent.
        let bound = 1e-13 * (bosons as f64 + p.ln().abs());
        prop_assert!(p == q || (p.ln() - q.ln()).abs() <= bound, "{p} vs {q}");
    }

    #[test]
    fn clocked_rate_bounded_and_monotone_in_band(xi in 0.05f64..1.95, width in 1.0f64..50.0, dt in 0.001f64..5.0) {
        let band = BandProfile::from_xi(xi, width, 1.0 / TAU).unwrap();
        let fermi = band.fermi_rate();
        let r1 = clocked_decay_rate(&band, dt).unwrap() / fermi;
        let r2 = clocked_decay_rate(&band, dt * 1.1).unwrap() / fermi;
        prop_assert!((0.0..=1.0).contains(&r1));
        prop_assert!(r2 >= r1);
        let quad = clocked_decay_rate_quadrature(&band, dt).unwrap() / fermi;
        prop_assert!((quad - r1).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn reading_distribution_is_clock_neutral(gamma in 0.05f64..2.0, t in 0.05f64..1.4, bosons in 200u64..3_000) {
        let atom = MarkovianAtom::new(0.0, gamma).unwrap();
        let clock = ClockParams::new(bosons, 1.0).unwrap();
        let total = reading_distribution(&atom, &clock, t).unwrap().total();
        prop_assert!((total - (1.0 - (-gamma * t).exp())).abs() < 1e-9, "{total}");
    }

    #[test]
    fn conditional_parts_sum_to_propagator(seed in 0u64..1_000, t in 0.2f64..2.0) {
        let (system, _) = random_pair(4, 1, seed);
        let projector = Projector::from_mask(&[true, false, true, false]);
        let spec = ConditionalSpec::new(64.0, 4096).unwrap();
        let u = system.eigen().propagator(t);
        for (i, j) in [(0, 0), (1, 2), (3, 1)] {
            let c = conditional_via_fourier(&system, &projector, i, j, t, &spec).unwrap();
            prop_assert!((c.total - u[(j, i)]).norm() < 1e-8);
        }
    }
}

#[test]
fn survival_deviation_is_set_by_the_band_not_the_spacing() {
    let gamma = 0.1;
    let band = BandProfile::flat(-20.0, 20.0, 0.0, gamma / TAU).unwrap();
    let deviation = |levels: usize| {
        let model = build_discretized(&band, levels).unwrap();
        let horizon = 0.5 * model.recurrence_time();
        (0..=1000)
            .map(|i| {
                let t = horizon.min(30.0) * i as f64 / 1000.0;
                (exact_survival(&model, t).unwrap().value.norm_sqr() - (-gamma * t).exp()).abs()
            })
            .fold(0.0, f64::max)
    };
    let devs: Vec<f64> = [101, 201, 401].iter().map(|&m| deviation(m)).collect();
    for d in &devs {
        assert!(*d < 0.02);
    }
    assert!((devs[0] - devs[2]).abs() < 1e-5 && (devs[1] - devs[2]).abs() < 1e-5, "{devs:?}");
}

#[test]
fn discretised_model_conserves_probability() {
    let band = BandProfile::flat(-20.0, 20.0, 0.0, 0.1 / TAU).unwrap();
    let model = build_discretized(&band, 201).unwrap();
    for t in [0.0, 1.0, 5.0, 12.0] {
        let table = exact_spectrum(&model, t).unwrap();
        assert!((table.survival + table.photon_probability() - 1.0).abs() < 1e-10);
    }
}
