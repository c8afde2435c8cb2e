//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Companion lines are informational.

use std::f64::consts::{PI, SQRT_2, TAU};
use std::time::{Duration, Instant};

use decayclock::clock::{binomial_profile, gaussian_probability, measurement_fidelity, ClockParams, PointerSetup};
use decayclock::composite::{
    clocked_spectrum_exact, fit_gaussian_width, prob_energy_and_reading, reading_distribution, running_photon_density,
};
use decayclock::markovian::{lorentzian_spectrum, transient_spectrum, MarkovianAtom};
use decayclock::nonmarkovian::{
    clocked_decay_rate, clocked_decay_rate_quadrature, rate_ratio_curve, zeno_and_jump_time, BandProfile,
};
use decayclock::numerics::erf;
use decayclock::oracle::{
    build_discretized, composite_identity_check, exact_spectrum, exact_survival, random_pair, ClockCoupling,
    ConditionalSpec, Projector, DEFAULT_SEED,
};
use decayclock::Complex64;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(id: u32, name: &str, limit_s: f64, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= Duration::from_secs_f64(limit_s);
    let pass = out.pass && in_time;
    println!(
        "criterion {id:>2} {}: {name}: {} [{:.2} s of {limit_s} s]",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64()
    );
    pass
}

fn companion(name: &str, pass: bool, detail: String) {
    println!("  companion {}: {name}: {detail}", if pass { "pass" } else { "fail" });
}

fn reservoir(levels: usize) -> decayclock::oracle::DiscretizedModel {
    let gamma = 0.1;
    let band = BandProfile::flat(-20.0, 20.0, 0.0, gamma / TAU).unwrap();
    build_discretized(&band, levels).unwrap()
}

fn max_survival_deviation(levels: usize) -> f64 {
    let model = reservoir(levels);
    (0..=2000)
        .map(|i| {
            let t = 20.0 * i as f64 / 2000.0;
            (exact_survival(&model, t).unwrap().value.norm_sqr() - (-0.1 * t).exp()).abs()
        })
        .fold(0.0, f64::max)
}

fn lineshape_deviation(levels: usize) -> (f64, bool) {
    let model = reservoir(levels);
    let atom = MarkovianAtom::new(0.0, 0.1).unwrap();
    let table = exact_spectrum(&model, 80.0).unwrap();
    let worst = table
        .energies
        .iter()
        .zip(&table.density)
        .filter(|(e, _)| e.abs() <= 0.5)
        .map(|(&e, &d)| (d / lorentzian_spectrum(&atom, e) - 1.0).abs())
        .fold(0.0, f64::max);
    (worst, table.beyond_recurrence)
}

fn c1() -> Outcome {
    let dev = max_survival_deviation(401);
    Outcome { pass: dev < 0.02, detail: format!("max |P_e - e^-Γt| = {dev:.3e} (< 0.02)") }
}

fn c2() -> Outcome {
    let (dev, beyond) = lineshape_deviation(401);
    Outcome {
        pass: dev < 0.05,
        detail: format!("M = 401, max relative deviation = {dev:.3e} (< 0.05), beyond recurrence = {beyond}"),
    }
}

fn c3() -> Outcome {
    let clock = ClockParams::new(100_000, 1.0).unwrap();
    let t = 0.05;
    let exact = binomial_profile(&clock, t).unwrap();
    let (mut sup, mut peak, mut exact_arg, mut gauss_arg, mut gauss_peak) = (0.0f64, 0.0f64, 0, 0, 0.0f64);
    for n in 1..=1000u64 {
        let b = exact[n as usize];
        let g = gaussian_probability(&clock, n, t).unwrap();
        sup = sup.max((b - g).abs());
        if b > peak {
            peak = b;
            exact_arg = n;
        }
        if g > gauss_peak {
            gauss_peak = g;
            gauss_arg = n;
        }
    }
    let rel = sup / peak;
    let pass = rel < 0.03 && exact_arg.abs_diff(250) <= 1 && gauss_arg.abs_diff(250) <= 1;
    Outcome { pass, detail: format!("sup/peak = {rel:.3e} (< 0.03), peaks at n = {exact_arg} and {gauss_arg}") }
}

fn c4() -> Outcome {
    let atom = MarkovianAtom::new(0.0, 0.5).unwrap();
    let clock = ClockParams::new(10_000, 1.0).unwrap();
    let table = reading_distribution(&atom, &clock, 2.0).unwrap();
    let expected = 1.0 - (-1.0f64).exp();
    let dev = (table.total() - expected).abs();
    Outcome { pass: dev < 1e-3, detail: format!("Σ P(τ_n) = {:.9}, |Σ - (1 - e^-Γt)| = {dev:.3e} (< 1e-3)", table.total()) }
}

fn c5() -> Outcome {
    let atom = MarkovianAtom::new(0.0, 1.0).unwrap();
    let t = 1.5;
    let mut pts = Vec::new();
    for bosons in [1_000u64, 10_000, 100_000] {
        let clock = ClockParams::new(bosons, 1.0).unwrap();
        let scale = 1.0 / clock.resolution();
        let samples: Vec<(f64, f64)> = (-10..=10)
            .map(|i| {
                let x = 0.15 * i as f64 * scale;
                (x, clocked_spectrum_exact(&atom, &clock, x, t).unwrap())
            })
            .collect();
        let width = fit_gaussian_width(&samples).unwrap();
        pts.push((clock.resolution().ln(), width.ln()));
    }
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    Outcome { pass: (slope + 1.0).abs() <= 0.05, detail: format!("d ln(width)/d ln(Δt) = {slope:.5} (-1 ± 0.05)") }
}

fn c6() -> Outcome {
    let band = BandProfile::from_xi(1.0, 10.0, 1.0 / TAU).unwrap();
    let fermi = band.fermi_rate();
    let mut worst_closed = 0.0f64;
    let mut worst_quad = 0.0f64;
    for i in 0..=200 {
        let dt = 0.001 + 2.0 * i as f64 / 200.0;
        let closed = clocked_decay_rate(&band, dt).unwrap() / fermi;
        let quad = clocked_decay_rate_quadrature(&band, dt).unwrap() / fermi;
        worst_closed = worst_closed.max((closed - erf(10.0 * dt / (2.0 * SQRT_2))).abs());
        worst_quad = worst_quad.max((quad - closed).abs());
    }
    let dt = 1e-5;
    let slope = clocked_decay_rate(&band, dt).unwrap() / fermi / dt;
    let expected = 10.0 / TAU.sqrt();
    let slope_err = (slope / expected - 1.0).abs();
    Outcome {
        pass: worst_closed < 1e-9 && worst_quad < 1e-9 && slope_err < 1e-3,
        detail: format!(
            "|ratio - erf| = {worst_closed:.2e}, |quadrature - closed| = {worst_quad:.2e} (< 1e-9), slope error = {slope_err:.2e} (< 1e-3)"
        ),
    }
}

fn c7() -> Outcome {
    let band = BandProfile::from_xi(-0.5, 10.0, 1.0 / TAU).unwrap();
    let grid: Vec<f64> = (0..=400).map(|i| 10f64.powf(-4.0 + 6.0 * i as f64 / 400.0)).collect();
    let curve = rate_ratio_curve(&band, &grid).unwrap();
    let (imax, &(dt_max, peak)) =
        curve.iter().enumerate().max_by(|a, b| a.1 .1.total_cmp(&b.1 .1)).unwrap();
    let (first, last) = (curve[0].1, curve[curve.len() - 1].1);
    // Both limits of the out-of-band ratio are zero.
    let interior = imax > 0 && imax + 1 < curve.len();
    let pass = interior && peak > first && peak > last && peak > 0.0;
    Outcome {
        pass,
        detail: format!("peak {peak:.4e} at Δt = {dt_max:.4}, ends {first:.2e} and {last:.2e}, limits 0 and 0"),
    }
}

fn c8() -> Outcome {
    let band = BandProfile::flat(0.0, 10.0, 5.0, 1.0 / TAU).unwrap();
    let jump = zeno_and_jump_time(&band).unwrap().jump;
    let err = (jump - TAU / 10.0).abs();
    Outcome { pass: err <= 1e-12, detail: format!("τ_J = {jump:.15}, error = {err:.1e} (<= 1e-12)") }
}

fn c9() -> Outcome {
    let (system, clock) = random_pair(4, 3, DEFAULT_SEED);
    let projector = Projector::from_mask(&[true, true, false, false]);
    let spec = ConditionalSpec::new(64.0, 4096).unwrap();
    let run = composite_identity_check(&system, &projector, &clock, 1.0, &spec, ClockCoupling::Running).unwrap();
    let wait = composite_identity_check(&system, &projector, &clock, 1.0, &spec, ClockCoupling::Waiting).unwrap();
    Outcome {
        pass: run.residual < 1e-6 && wait.residual < 1e-6,
        detail: format!("seed {DEFAULT_SEED}: running {:.3e}, waiting {:.3e} (< 1e-6)", run.residual, wait.residual),
    }
}

fn c10() -> Outcome {
    let atom = MarkovianAtom::new(0.0, 1.0).unwrap();
    let early = transient_spectrum(&atom, 3.0, PI / 3.0).unwrap();
    let late = transient_spectrum(&atom, 3.0, 2.0 * PI / 3.0).unwrap();
    let ratio = early / late;
    Outcome { pass: early > late && ratio > 5.0, detail: format!("P(π/3)/P(2π/3) = {ratio:.4} (> 5)") }
}

fn c11() -> Outcome {
    let bosons = 10_000u64;
    let mean = 0.5 * bosons as f64;
    let width = mean.powf(0.75);
    let setup = PointerSetup::new(bosons, Complex64::new(0.5f64.sqrt(), 0.0), width).unwrap();
    let fidelity = measurement_fidelity(&setup);
    let rel = setup.relative_error();
    Outcome {
        pass: fidelity > 0.99 && rel < 0.05,
        detail: format!("Δf = {width:.2}, fidelity = {fidelity:.6} (> 0.99), Δf/n̄ = {rel:.4} (< 0.05)"),
    }
}

/// Smallest width with fidelity above 0.99 and largest with relative error
/// below 5%, at |α|² = 1/2.
fn pointer_window(bosons: u64) -> (f64, f64) {
    let alpha = Complex64::new(0.5f64.sqrt(), 0.0);
    let fid = |w: f64| measurement_fidelity(&PointerSetup::new(bosons, alpha, w).unwrap());
    let (mut a, mut b) = (1.0, 0.5 * bosons as f64);
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        if fid(m) > 0.99 {
            b = m;
        } else {
            a = m;
        }
    }
    (b, 0.05 * 0.5 * bosons as f64)
}

fn c12() -> Outcome {
    let atom = MarkovianAtom::new(0.0, 0.1).unwrap();
    let clock = ClockParams::new(10_000, 1.0).unwrap();
    let t = 1.0;
    let mut worst = 0.0f64;
    for n in [25u64, 50, 100, 225, 400, 900] {
        let numeric = running_photon_density(&atom, &clock, 0.0, n, t).unwrap().value;
        let closed = prob_energy_and_reading(&atom, &clock, 0.0, n, t);
        worst = worst.max((numeric / closed - 1.0).abs());
    }
    Outcome { pass: worst < 0.05, detail: format!("n in 25..=900, max relative deviation at E = E_e: {worst:.3e} (< 0.05)") }
}

fn main() {
    println!("decayclock acceptance suite");
    let results = [
        check(1, "exponential decay of the discretised reservoir", 10.0, c1),
        {
            let r = check(2, "Lorentzian lineshape of the discretised reservoir", 10.0, c2);
            let (dev, beyond) = lineshape_deviation(1201);
            companion("same check with M = 1201", dev < 0.05, format!("{dev:.3e}, beyond recurrence = {beyond}"));
            r
        },
        check(3, "binomial vs Gaussian clock profile", 5.0, c3),
        {
            let r = check(4, "clock neutrality of the reading distribution", 5.0, c4);
            let atom = MarkovianAtom::new(0.0, 0.5).unwrap();
            let clock = ClockParams::new(10_000, 1.0).unwrap();
            let closed = reading_distribution(&atom, &clock, 2.0).unwrap().closed_form_total();
            let expected = 1.0 - (-1.0f64).exp();
            companion(
                "large-N closed-form sum at ωt = 2",
                (closed - expected).abs() < 1e-3,
                format!("{closed:.6} vs {expected:.6}"),
            );
            r
        },
        check(5, "clocked spectrum width scales as 1/Δt", 5.0, c5),
        check(6, "Zeno limit of the clocked rate", 2.0, c6),
        check(7, "anti-Zeno interior maximum", 2.0, c7),
        check(8, "jump time", 1.0, c8),
        check(9, "conditional-evolution identity", 60.0, c9),
        check(10, "non-monotone transient spectrum", 1.0, c10),
        {
            let r = check(11, "pointer classicality window", 30.0, c11);
            let (lo, hi) = pointer_window(10_000);
            companion(
                "widths meeting both bounds at N = 1e4",
                lo < hi,
                format!("fidelity > 0.99 needs Δf > {lo:.1}, Δf/n̄ < 0.05 needs Δf < {hi:.1}"),
            );
            r
        },
        check(12, "convolution vs closed form", 10.0, c12),
    ];
    let passed = results.iter().filter(|&&r| r).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
