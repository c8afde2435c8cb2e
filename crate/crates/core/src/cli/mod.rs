//! Command-line front end.
//!
//! Each scenario writes one table. Parameters come from an optional
//! `key = value` file and from flags, which win. Exit codes: 0 success,
//! 2 configuration error, 3 numerical failure, 4 I/O error.

pub mod config;
pub mod output;
mod scenarios;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::error::Error;
use crate::oracle::seed_from_env;
use config::{parse_config, Params};
use output::{render_csv, render_json};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    Fig2,
    Fig4,
    Fig5,
    Spectrum,
    Readings,
    Waiting,
    OracleVerify,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Fig2 => "fig2",
            Scenario::Fig4 => "fig4",
            Scenario::Fig5 => "fig5",
            Scenario::Spectrum => "spectrum",
            Scenario::Readings => "readings",
            Scenario::Waiting => "waiting",
            Scenario::OracleVerify => "oracle-verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "decayclock", version, allow_negative_numbers = true, about = "Tables for timing an atomic decay with a bosonic clock")]
struct Args {
    scenario: Scenario,

    /// `key = value` file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (standard output when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,

    /// Boson count.
    #[arg(long = "N")]
    n: Option<String>,
    /// Hopping matrix element ω.
    #[arg(long)]
    omega: Option<String>,
    /// Clock angle ωt.
    #[arg(long = "omega-t")]
    omega_t: Option<String>,
    #[arg(long = "n-min")]
    n_min: Option<String>,
    #[arg(long = "n-max")]
    n_max: Option<String>,
    /// Band position ξ = 2(E_e - E_min)/ΔE_r.
    #[arg(long)]
    xi: Option<String>,
    #[arg(long = "band-width")]
    band_width: Option<String>,
    /// Constant ρΩ² of a flat band.
    #[arg(long = "coupling-density")]
    coupling_density: Option<String>,
    /// Clock resolutions, start:stop:count.
    #[arg(long = "dt-grid", allow_hyphen_values = true)]
    dt_grid: Option<String>,
    /// Decay width Γ.
    #[arg(long)]
    gamma: Option<String>,
    /// Photon energy minus E_e.
    #[arg(long)]
    detuning: Option<String>,
    #[arg(long = "excited-energy")]
    excited_energy: Option<String>,
    /// Times, start:stop:count.
    #[arg(long = "t-grid", allow_hyphen_values = true)]
    t_grid: Option<String>,
    /// Photon energies, start:stop:count.
    #[arg(long = "energy-grid", allow_hyphen_values = true)]
    energy_grid: Option<String>,
    /// Horizon.
    #[arg(long)]
    t: Option<String>,
    #[arg(long = "system-dim")]
    system_dim: Option<String>,
    #[arg(long = "clock-dim")]
    clock_dim: Option<String>,
    #[arg(long = "lambda-max")]
    lambda_max: Option<String>,
    #[arg(long)]
    points: Option<String>,
    #[arg(long)]
    levels: Option<String>,
}

impl Args {
    fn flag_map(&self) -> BTreeMap<String, String> {
        let pairs = [
            ("N", &self.n),
            ("omega", &self.omega),
            ("omega-t", &self.omega_t),
            ("n-min", &self.n_min),
            ("n-max", &self.n_max),
            ("xi", &self.xi),
            ("band-width", &self.band_width),
            ("coupling-density", &self.coupling_density),
            ("dt-grid", &self.dt_grid),
            ("gamma", &self.gamma),
            ("detuning", &self.detuning),
            ("excited-energy", &self.excited_energy),
            ("t-grid", &self.t_grid),
            ("energy-grid", &self.energy_grid),
            ("t", &self.t),
            ("system-dim", &self.system_dim),
            ("clock-dim", &self.clock_dim),
            ("lambda-max", &self.lambda_max),
            ("points", &self.points),
            ("levels", &self.levels),
        ];
        pairs.into_iter().filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone()))).collect()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::UnsupportedProfile(_) => CliError::Config(e.to_string()),
            Error::Convergence { .. } | Error::Resolution(_) => CliError::Numeric(e.to_string()),
        }
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&args) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("decayclock: {e}");
            e.exit_code()
        }
    }
}

fn execute(args: &Args) -> Result<(), CliError> {
    let mut file = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
            parse_config(&text)?
        }
        None => BTreeMap::new(),
    };
    // Output plumbing may also come from the file.
    let file_output = file.remove("output").map(PathBuf::from);
    let file_format = match file.remove("format").as_deref() {
        None => None,
        Some("csv") => Some(Format::Csv),
        Some("json") => Some(Format::Json),
        Some(other) => return Err(CliError::Config(format!("unknown format `{other}`"))),
    };
    let output = args.output.clone().or(file_output);
    let format = args.format.or(file_format).unwrap_or(Format::Csv);

    let scenario = args.scenario;
    let mut params = Params::resolve(scenario.name(), scenarios::defaults(scenario), &file, &args.flag_map())?;
    let mut warnings = Vec::new();
    let mut extra = Vec::new();
    let table = match scenario {
        Scenario::Fig2 => scenarios::fig2(&mut params, &mut warnings),
        Scenario::Fig4 => scenarios::fig4(&mut params, &mut warnings),
        Scenario::Fig5 => scenarios::fig5(&mut params, &mut warnings),
        Scenario::Spectrum => scenarios::spectrum(&mut params, &mut warnings),
        Scenario::Readings => scenarios::readings(&mut params, &mut warnings),
        Scenario::Waiting => scenarios::waiting(&mut params, &mut warnings),
        Scenario::OracleVerify => {
            let seed = seed_from_env();
            extra.push(("seed", seed.to_string()));
            scenarios::oracle_verify(&mut params, &mut warnings, seed)
        }
    }?;
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let text = match format {
        Format::Csv => render_csv(scenario.name(), &params, &extra, &table),
        Format::Json => render_json(scenario.name(), &params, &extra, &table),
    };
    match output {
        Some(path) => std::fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}
