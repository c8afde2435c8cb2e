//! One function per scenario: resolved parameters in, table out.

use std::f64::consts::TAU;

use crate::clock::{binomial_profile, count_for_time, gaussian_probability, ClockParams, Regime};
use crate::composite::{clocked_spectrum, reading_distribution, waiting_photon_density, waiting_reading_probability};
use crate::markovian::{lorentzian_spectrum, transient_spectrum, MarkovianAtom};
use crate::nonmarkovian::{rate_ratio_curve, BandProfile};
use crate::oracle::{
    build_discretized, composite_identity_check, conditional_via_fourier, exact_spectrum, exact_survival,
    random_pair, ClockCoupling, ConditionalSpec, Projector,
};

use super::config::Params;
use super::output::{Cell, Table};
use super::{CliError, Scenario};

pub fn defaults(scenario: Scenario) -> &'static [(&'static str, &'static str)] {
    match scenario {
        Scenario::Fig2 => &[("N", "100000"), ("omega", "1"), ("omega-t", "0.05"), ("n-min", "auto"), ("n-max", "auto")],
        Scenario::Fig4 => &[("xi", "1"), ("band-width", "10"), ("coupling-density", "auto"), ("dt-grid", "0.001:2:200")],
        Scenario::Fig5 => &[("gamma", "1"), ("detuning", "3"), ("excited-energy", "0"), ("t-grid", "0:8:400")],
        Scenario::Spectrum => &[("gamma", "1"), ("N", "10000"), ("omega", "1"), ("excited-energy", "0"), ("energy-grid", "auto")],
        Scenario::Readings => &[("gamma", "0.5"), ("N", "10000"), ("omega", "1"), ("t", "2")],
        Scenario::Waiting => &[
            ("gamma", "1"),
            ("N", "10000"),
            ("omega", "0.1"),
            ("t", "3"),
            ("excited-energy", "0"),
            ("detuning", "0"),
            ("n-min", "1"),
            ("n-max", "auto"),
        ],
        Scenario::OracleVerify => &[
            ("t", "1"),
            ("system-dim", "4"),
            ("clock-dim", "3"),
            ("lambda-max", "64"),
            ("points", "4096"),
            ("levels", "401"),
            ("band-width", "40"),
            ("gamma", "0.1"),
        ],
    }
}

/// Non-fatal notes for the diagnostic stream.
pub type Warnings = Vec<String>;

fn clock(params: &Params) -> Result<ClockParams, CliError> {
    let n: u64 = params.get("N")?;
    Ok(ClockParams::new(n, params.real("omega", true)?)?)
}

fn regime_warning(warnings: &mut Warnings, what: &str, regime: Regime) {
    if !regime.small_angle {
        warnings.push(format!("{what}: ωt ≥ 0.3, outside the small-angle regime of the Gaussian clock"));
    }
    if !regime.well_populated {
        warnings.push(format!("{what}: n̄ ≤ 25, outside the well-populated regime of the Gaussian clock"));
    }
}

fn count_param(params: &Params, key: &str) -> Result<u64, CliError> {
    params.get(key)
}

pub fn fig2(params: &mut Params, warnings: &mut Warnings) -> Result<Table, CliError> {
    let clock = clock(params)?;
    let angle = params.real("omega-t", true)?;
    let t = angle / clock.hopping();
    let mean = clock.mean_count(t);
    // About six standard deviations either side of the mean.
    let half = (40.0 * mean).sqrt().ceil().max(10.0);
    if params.is_auto("n-min") {
        params.set("n-min", ((mean - half).round().max(1.0) as u64).to_string());
    }
    if params.is_auto("n-max") {
        params.set("n-max", (((mean + half).round() as u64).min(clock.bosons())).to_string());
    }
    let (lo, hi) = (count_param(params, "n-min")?, count_param(params, "n-max")?);
    if lo == 0 || lo > hi || hi > clock.bosons() {
        return Err(CliError::Config(format!("need 1 <= n-min <= n-max <= N, got {lo}..{hi}")));
    }
    regime_warning(warnings, "fig2", clock.regime(t));
    let profile = binomial_profile(&clock, t)?;
    let mut table = Table::new(vec!["n", "binomial_prob", "gaussian_prob"]);
    for n in lo..=hi {
        table.push(vec![
            Cell::Int(n as i64),
            Cell::Real(profile[n as usize]),
            Cell::Real(gaussian_probability(&clock, n, t)?),
        ]);
    }
    Ok(table)
}

pub fn fig4(params: &mut Params, _warnings: &mut Warnings) -> Result<Table, CliError> {
    if params.is_auto("coupling-density") {
        params.set("coupling-density", (1.0 / TAU).to_string());
    }
    let xi = params.real("xi", false)?;
    let band = BandProfile::from_xi(xi, params.real("band-width", true)?, params.real("coupling-density", true)?)?;
    let grid = params.grid("dt-grid")?;
    if grid.iter().any(|&dt| dt <= 0.0) {
        return Err(CliError::Config("`dt-grid` must be positive".into()));
    }
    let mut table = Table::new(vec!["dt", "ratio"]);
    for (dt, ratio) in rate_ratio_curve(&band, &grid)? {
        table.push(vec![Cell::Real(dt), Cell::Real(ratio)]);
    }
    Ok(table)
}

pub fn fig5(params: &mut Params, _warnings: &mut Warnings) -> Result<Table, CliError> {
    let atom = MarkovianAtom::new(params.real("excited-energy", false)?, params.real("gamma", true)?)?;
    let energy = atom.excited_energy() + params.real("detuning", false)?;
    let grid = params.grid("t-grid")?;
    if grid.iter().any(|&t| t < 0.0) {
        return Err(CliError::Config("`t-grid` must be non-negative".into()));
    }
    let mut table = Table::new(vec!["t", "P"]);
    for t in grid {
        table.push(vec![Cell::Real(t), Cell::Real(transient_spectrum(&atom, energy, t)?)]);
    }
    Ok(table)
}

pub fn spectrum(params: &mut Params, _warnings: &mut Warnings) -> Result<Table, CliError> {
    let atom = MarkovianAtom::new(params.real("excited-energy", false)?, params.real("gamma", true)?)?;
    let clock = clock(params)?;
    if params.is_auto("energy-grid") {
        let reach = 4.0 / clock.resolution();
        let e0 = atom.excited_energy();
        params.set("energy-grid", format!("{}:{}:401", e0 - reach, e0 + reach));
    }
    let mut table = Table::new(vec!["E", "lorentzian", "clocked"]);
    for e in params.grid("energy-grid")? {
        table.push(vec![
            Cell::Real(e),
            Cell::Real(lorentzian_spectrum(&atom, e)),
            Cell::Real(clocked_spectrum(&atom, &clock, e)),
        ]);
    }
    Ok(table)
}

pub fn readings(params: &mut Params, warnings: &mut Warnings) -> Result<Table, CliError> {
    let atom = MarkovianAtom::new(0.0, params.real("gamma", true)?)?;
    let clock = clock(params)?;
    let t = params.real("t", true)?;
    regime_warning(warnings, "readings closed form", clock.regime(t));
    let table_in = reading_distribution(&atom, &clock, t)?;
    let mut table = Table::new(vec!["n", "tau_n", "probability", "closed_form"]);
    for e in &table_in.entries {
        table.push(vec![
            Cell::Int(e.count as i64),
            Cell::Real(e.reading_time),
            Cell::Real(e.probability),
            Cell::Real(e.closed_form),
        ]);
    }
    Ok(table)
}

pub fn waiting(params: &mut Params, warnings: &mut Warnings) -> Result<Table, CliError> {
    let atom = MarkovianAtom::new(params.real("excited-energy", false)?, params.real("gamma", true)?)?;
    let clock = clock(params)?;
    let t = params.real("t", true)?;
    if params.is_auto("n-max") {
        params.set("n-max", count_for_time(&clock, t).max(1).to_string());
    }
    let (lo, hi) = (count_param(params, "n-min")?, count_param(params, "n-max")?);
    if lo == 0 || lo > hi || hi > clock.bosons() {
        return Err(CliError::Config(format!("need 1 <= n-min <= n-max <= N, got {lo}..{hi}")));
    }
    regime_warning(warnings, "waiting", clock.regime(t));
    let energy = atom.excited_energy() + params.real("detuning", false)?;
    let mut table = Table::new(vec!["n", "tau_n", "density", "probability"]);
    for n in lo..=hi {
        table.push(vec![
            Cell::Int(n as i64),
            Cell::Real(clock.reading_time(n)),
            Cell::Real(waiting_photon_density(&atom, &clock, energy, n, t)?.value),
            Cell::Real(waiting_reading_probability(&atom, &clock, n, t)?.value),
        ]);
    }
    Ok(table)
}

fn status(value: f64, bound: f64) -> Cell {
    Cell::Text(if value < bound { "pass" } else { "fail" }.to_string())
}

pub fn oracle_verify(params: &mut Params, _warnings: &mut Warnings, seed: u64) -> Result<Table, CliError> {
    let t = params.real("t", true)?;
    let (sd, cd): (usize, usize) = (params.get("system-dim")?, params.get("clock-dim")?);
    if !(2..=8).contains(&sd) || !(1..=8).contains(&cd) {
        return Err(CliError::Config("system-dim must be in 2..=8 and clock-dim in 1..=8".into()));
    }
    let spec = ConditionalSpec::new(params.real("lambda-max", true)?, params.get("points")?)?;
    let (system, clock_h) = random_pair(sd, cd, seed);
    let mask: Vec<bool> = (0..sd).map(|i| i < sd / 2).collect();
    let projector = Projector::from_mask(&mask);
    let mut table = Table::new(vec!["check", "value", "bound", "status"]);
    for (name, coupling) in [("identity_running", ClockCoupling::Running), ("identity_waiting", ClockCoupling::Waiting)] {
        let r = composite_identity_check(&system, &projector, &clock_h, t, &spec, coupling)?;
        table.push(vec![Cell::Text(name.into()), Cell::Real(r.residual), Cell::Real(1e-6), status(r.residual, 1e-6)]);
    }
    let u = system.eigen().propagator(t);
    let mut completeness: f64 = 0.0;
    for i in 0..sd {
        for j in 0..sd {
            let c = conditional_via_fourier(&system, &projector, i, j, t, &spec)?;
            completeness = completeness.max((c.total - u[(j, i)]).norm());
        }
    }
    table.push(vec![Cell::Text("completeness".into()), Cell::Real(completeness), Cell::Real(1e-8), status(completeness, 1e-8)]);

    let gamma = params.real("gamma", true)?;
    let width = params.real("band-width", true)?;
    let band = BandProfile::flat(-0.5 * width, 0.5 * width, 0.0, gamma / TAU)?;
    let model = build_discretized(&band, params.get("levels")?)?;
    let horizon = (20.0f64).min(0.5 * model.recurrence_time());
    let mut deviation: f64 = 0.0;
    for k in 0..=400 {
        let s = horizon * k as f64 / 400.0;
        let p = exact_survival(&model, s)?.value.norm_sqr();
        deviation = deviation.max((p - (-gamma * s).exp()).abs());
    }
    table.push(vec![Cell::Text("survival_deviation".into()), Cell::Real(deviation), Cell::Real(0.02), status(deviation, 0.02)]);
    let spectrum = exact_spectrum(&model, horizon)?;
    let leak = (spectrum.survival + spectrum.photon_probability() - 1.0).abs();
    table.push(vec![Cell::Text("unitarity".into()), Cell::Real(leak), Cell::Real(1e-10), status(leak, 1e-10)]);
    Ok(table)
}
