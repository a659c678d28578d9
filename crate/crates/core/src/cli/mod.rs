//! Command-line front end. Each subcommand resolves a config (defaults, then
//! the `--config` file section, then flags), runs one physics routine and
//! returns a [`Table`].

pub mod config;
pub mod output;

use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cavity::{self, build_spectrum, CavitySpectrum, Geometry, GeometryTag};
use crate::dynamics::{self, DriveProfile, EvolveOptions};
use crate::fock::{self, FockSpace};
use crate::mirror::{self, MirrorTrajectory};
use crate::quadrature::TimeGrid;
use crate::response;
use crate::thermal::ThermalEnsemble;
use crate::units::{NaturalFrequency, Temperature, SPEED_OF_LIGHT};

pub use config::IniFile;
pub use output::{format_g17, Cell, Format, Table};

/// Fundamental frequency of the reference cavity, rad/s.
pub const CAPTION_OMEGA: f64 = 1.46e11;
pub const CAPTION_EPSILON: f64 = 6e-10;
pub const CAPTION_TEMPERATURE_K: f64 = 290.0;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Physics(#[from] crate::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    /// 2 for configuration and input errors, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Physics(e) if e.is_numerical() => 3,
            _ => 2,
        }
    }

    /// Single-line `error[kind]: message` for the diagnostic stream.
    pub fn diagnostic(&self) -> String {
        let kind = match self {
            CliError::Config(_) => "config",
            CliError::Physics(e) if e.is_numerical() => "numerical",
            CliError::Physics(_) => "domain",
            CliError::Io(_) => "io",
        };
        format!("error[{kind}]: {}", self.to_string().replace(['\n', '\r'], " "))
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

const FREQUENCY_HELP: &str = "All frequency inputs are angular, in rad/s. \
--freq-ghz-angular X means X·1e9 rad/s: the reference cavity is quoted as \
\"146 GHz\" for ω = 1.46e11 rad/s, i.e. the GHz there is angular, not cycles \
per second (which would be 2π·1.46e11 rad/s).";

#[derive(Debug, Parser)]
#[command(name = "dcasimir", version, about = "Dynamical Casimir photon creation at finite temperature", after_help = FREQUENCY_HELP)]
pub struct Cli {
    /// INI file with one [section] per subcommand; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cavity eigenfrequencies.
    #[command(after_help = FREQUENCY_HELP)]
    Spectrum(SpectrumArgs),
    /// Mode pairs with Ω_μ ± Ω_ν = 2Ω₁.
    #[command(after_help = FREQUENCY_HELP)]
    Resonance(ResonanceArgs),
    /// Bose occupation, enhancement 1 + 2n and variance per mode.
    #[command(after_help = FREQUENCY_HELP)]
    Thermal(ThermalArgs),
    /// Quadratic-response photon numbers for the harmonic drive.
    #[command(after_help = FREQUENCY_HELP)]
    Response(ResponseArgs),
    /// Rotating-wave photon number n₀ + sinh²(εω𝖳/2)(1 + 2n₀).
    #[command(after_help = FREQUENCY_HELP)]
    Rwa(RwaArgs),
    /// Exact density-matrix evolution in a truncated Fock space.
    #[command(after_help = FREQUENCY_HELP)]
    Evolve(EvolveArgs),
    /// Energy radiated by a moving mirror across temperatures.
    #[command(after_help = FREQUENCY_HELP)]
    Mirror(MirrorArgs),
    /// Photon number against switch-on time, vacuum and thermal.
    #[command(after_help = FREQUENCY_HELP)]
    Fig1(Fig1Args),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::Resonance(_) => "resonance",
            Command::Thermal(_) => "thermal",
            Command::Response(_) => "response",
            Command::Rwa(_) => "rwa",
            Command::Evolve(_) => "evolve",
            Command::Mirror(_) => "mirror",
            Command::Fig1(_) => "fig1",
        }
    }
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    pub output: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    pub output: Option<String>,
    pub format: Format,
}

fn positive(name: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Config(format!("{name} must be positive, got {v}")))
    }
}

fn non_negative(name: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(CliError::Config(format!("{name} must be >= 0, got {v}")))
    }
}

fn parse_geometry(s: &str) -> CliResult<Geometry> {
    s.parse().map_err(|_| CliError::Config(format!("geometry must be 1d or cubic, got {s:?}")))
}

fn temperature(kelvin: f64) -> CliResult<Temperature> {
    Ok(Temperature::from_kelvin(non_negative("temp", kelvin)?)?)
}

/// `points` durations evenly spaced on [0, max]; one point means just `max`.
fn duration_grid(max: f64, points: usize) -> CliResult<Vec<f64>> {
    non_negative("duration", max)?;
    match points {
        0 => Err(CliError::Config("points must be >= 1".into())),
        1 => Ok(vec![max]),
        n => Ok((0..n)
            .map(|i| if i == n - 1 { max } else { max * i as f64 / (n - 1) as f64 })
            .collect()),
    }
}

// ---- single frequency ----------------------------------------------------

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct FrequencyArgs {
    /// Angular frequency, rad/s.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Angular frequency in units of 1e9 rad/s (see the note below).
    #[arg(long, value_name = "X")]
    pub freq_ghz_angular: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FrequencyConfig {
    pub omega: Option<f64>,
    pub freq_ghz_angular: Option<f64>,
}

impl FrequencyConfig {
    /// The configured frequency, or the reference cavity's.
    pub fn resolve(&self) -> CliResult<NaturalFrequency> {
        match (self.omega, self.freq_ghz_angular) {
            (Some(_), Some(_)) => Err(CliError::Config("give either omega or freq_ghz_angular, not both".into())),
            (Some(w), None) => Ok(NaturalFrequency::positive(positive("omega", w)?)?),
            (None, Some(g)) => Ok(NaturalFrequency::from_ghz_angular(positive("freq_ghz_angular", g)?)?),
            (None, None) => Ok(NaturalFrequency::positive(CAPTION_OMEGA)?),
        }
    }
}

// ---- spectrum source -----------------------------------------------------

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct SourceArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub frequency: FrequencyArgs,
    /// Cavity geometry (1d or cubic); needs --length.
    #[arg(long)]
    pub geometry: Option<String>,
    /// Cavity length, m.
    #[arg(long)]
    pub length: Option<f64>,
    /// Largest mode index per direction.
    #[arg(long)]
    pub max_index: Option<u32>,
}

/// A single mode at `omega`, or a cavity given by geometry and length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceConfig {
    #[serde(flatten)]
    pub frequency: FrequencyConfig,
    pub geometry: Option<String>,
    pub length: Option<f64>,
    pub max_index: u32,
}

impl Default for SourceConfig {
    fn default() -> Self {
        Self {
            frequency: FrequencyConfig::default(),
            geometry: None,
            length: None,
            max_index: 3,
        }
    }
}

impl SourceConfig {
    pub fn spectrum(&self) -> CliResult<CavitySpectrum> {
        let explicit = self.frequency.omega.is_some() || self.frequency.freq_ghz_angular.is_some();
        match (&self.geometry, self.length) {
            (Some(g), Some(l)) => {
                if explicit {
                    return Err(CliError::Config("give either a frequency or geometry and length, not both".into()));
                }
                let tag = GeometryTag::new(parse_geometry(g)?, positive("length", l)?)?;
                Ok(build_spectrum(tag, self.max_index)?)
            }
            (None, None) => Ok(CavitySpectrum::single(self.frequency.resolve()?)?),
            _ => Err(CliError::Config("geometry and length must be given together".into())),
        }
    }
}

// ---- drive ---------------------------------------------------------------

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct DriveArgs {
    /// Modulation depth ε.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Target squeezing r = εω𝖳/2 (instead of --epsilon).
    #[arg(long)]
    pub squeeze: Option<f64>,
    /// Switch-on time 𝖳, s.
    #[arg(long)]
    pub duration: Option<f64>,
    /// Switch-on time in drive periods 2π/ω (instead of --duration).
    #[arg(long)]
    pub periods: Option<f64>,
    /// Drive frequency ω in rad/s (the boundary oscillates at 2ω); defaults to the fundamental.
    #[arg(long)]
    pub drive_omega: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DriveConfig {
    pub epsilon: Option<f64>,
    pub squeeze: Option<f64>,
    pub duration: Option<f64>,
    pub periods: Option<f64>,
    pub drive_omega: Option<f64>,
}

impl DriveConfig {
    /// Defaults: `periods` drive periods at squeezing `squeeze`.
    fn profile(&self, fundamental: f64, default_squeeze: f64, default_periods: f64) -> CliResult<DriveProfile> {
        let omega = match self.drive_omega {
            Some(w) => positive("drive_omega", w)?,
            None => fundamental,
        };
        let duration = match (self.duration, self.periods) {
            (Some(_), Some(_)) => return Err(CliError::Config("give either duration or periods, not both".into())),
            (Some(d), None) => non_negative("duration", d)?,
            (None, p) => 2.0 * PI * non_negative("periods", p.unwrap_or(default_periods))? / omega,
        };
        let epsilon = match (self.epsilon, self.squeeze) {
            (Some(_), Some(_)) => return Err(CliError::Config("give either epsilon or squeeze, not both".into())),
            (Some(e), None) => non_negative("epsilon", e)?,
            (None, s) => {
                let r = non_negative("squeeze", s.unwrap_or(default_squeeze))?;
                if duration == 0.0 {
                    0.0
                } else {
                    2.0 * r / (omega * duration)
                }
            }
        };
        Ok(DriveProfile::new(epsilon, omega, duration)?)
    }
}

fn intervals_for(drive: &DriveProfile, steps_per_period: usize, cap: usize) -> CliResult<usize> {
    if steps_per_period < 2 {
        return Err(CliError::Config("steps_per_period must be >= 2".into()));
    }
    let periods = drive.omega * drive.duration / (2.0 * PI);
    let n = (periods * steps_per_period as f64).ceil().max(2.0);
    if n > cap as f64 {
        return Err(CliError::Config(format!(
            "{n:.3e} time steps exceed max_intervals = {cap}; shorten the duration or raise the cap"
        )));
    }
    let n = n as usize;
    Ok(n + n % 2)
}

// ---- spectrum / resonance ------------------------------------------------

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct SpectrumArgs {
    /// 1d or cubic.
    #[arg(long)]
    pub geometry: Option<String>,
    /// Cavity length, m.
    #[arg(long)]
    pub length: Option<f64>,
    #[arg(long)]
    pub max_index: Option<u32>,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumConfig {
    pub geometry: String,
    pub length: f64,
    pub max_index: u32,
    #[serde(flatten)]
    pub out: OutputConfig,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            geometry: "cubic".into(),
            length: 0.01,
            max_index: 3,
            out: OutputConfig::default(),
        }
    }
}

fn geometry_spectrum(geometry: &str, length: f64, max_index: u32) -> CliResult<CavitySpectrum> {
    let tag = GeometryTag::new(parse_geometry(geometry)?, positive("length", length)?)?;
    Ok(build_spectrum(tag, max_index)?)
}

pub fn cmd_spectrum(c: &SpectrumConfig) -> CliResult<Table> {
    let spectrum = geometry_spectrum(&c.geometry, c.length, c.max_index)?;
    let mut t = Table::new(["mode", "frequency_rad_per_s"]);
    for m in spectrum.modes() {
        t.push(vec![m.label.to_string().into(), m.frequency.value().into()]);
    }
    Ok(t)
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct ResonanceArgs {
    #[arg(long)]
    pub geometry: Option<String>,
    #[arg(long)]
    pub length: Option<f64>,
    #[arg(long)]
    pub max_index: Option<u32>,
    /// Match tolerance relative to 2Ω₁.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Report only pairs of distinct modes.
    #[arg(long, value_name = "BOOL")]
    pub velocity_only: Option<bool>,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceConfig {
    pub geometry: String,
    pub length: f64,
    pub max_index: u32,
    pub tolerance: f64,
    pub velocity_only: bool,
    #[serde(flatten)]
    pub out: OutputConfig,
}

impl Default for ResonanceConfig {
    fn default() -> Self {
        Self {
            geometry: "cubic".into(),
            length: 0.01,
            max_index: 10,
            tolerance: 1e-9,
            velocity_only: false,
            out: OutputConfig::default(),
        }
    }
}

pub fn cmd_resonance(c: &ResonanceConfig) -> CliResult<Table> {
    let spectrum = geometry_spectrum(&c.geometry, c.length, c.max_index)?;
    let tol = non_negative("tolerance", c.tolerance)? * 2.0 * spectrum.fundamental().value();
    let pairs = if c.velocity_only {
        cavity::velocity_resonance_pairs(&spectrum, tol)?
    } else {
        cavity::find_resonance_pairs(&spectrum, tol)?
    };
    let mut t = Table::new(["mu", "nu", "sign", "residual_rad_per_s"]);
    for p in pairs {
        t.push(vec![p.mu.to_string().into(), p.nu.to_string().into(), p.sign.to_string().into(), p.residual.into()]);
    }
    Ok(t)
}

// ---- thermal -------------------------------------------------------------

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct ThermalArgs {
    /// Temperature, K.
    #[arg(long)]
    pub temp: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermalConfig {
    pub temp: f64,
    #[serde(flatten)]
    pub source: SourceConfig,
    #[serde(flatten)]
    pub out: OutputConfig,
}

impl Default for ThermalConfig {
    fn default() -> Self {
        Self {
            temp: CAPTION_TEMPERATURE_K,
            source: SourceConfig::default(),
            out: OutputConfig::default(),
        }
    }
}

pub fn cmd_thermal(c: &ThermalConfig) -> CliResult<Table> {
    let ensemble = ThermalEnsemble::new(c.source.spectrum()?, temperature(c.temp)?)?;
    let mut t = Table::new(["mode", "frequency_rad_per_s", "occupation", "enhancement", "variance"]);
    let (enh, var) = (ensemble.enhancements(), ensemble.variances());
    for (i, m) in ensemble.spectrum().modes().iter().enumerate() {
        t.push(vec![
            m.label.to_string().into(),
            m.frequency.value().into(),
            ensemble.occupations()[i].into(),
            enh[i].into(),
            var[i].into(),
        ]);
    }
    Ok(t)
}

// ---- response ------------------------------------------------------------

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct ResponseArgs {
    /// Temperature, K.
    #[arg(long)]
    pub temp: Option<f64>,
    /// Number of lowest modes kept.
    #[arg(long)]
    pub modes: Option<usize>,
    /// Quadrature intervals per drive period.
    #[arg(long)]
    pub steps_per_period: Option<usize>,
    /// Largest accepted quadrature grid.
    #[arg(long)]
    pub max_intervals: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub drive: DriveArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseConfig {
    pub temp: f64,
    pub modes: usize,
    pub steps_per_period: usize,
    pub max_intervals: usize,
    #[serde(flatten)]
    pub source: SourceConfig,
    #[serde(flatten)]
    pub drive: DriveConfig,
    #[serde(flatten)]
    pub out: OutputConfig,
}

impl Default for ResponseConfig {
    fn default() -> Self {
        Self {
            temp: CAPTION_TEMPERATURE_K,
            modes: 1,
            steps_per_period: 64,
            max_intervals: 10_000_000,
            source: SourceConfig::default(),
            drive: DriveConfig::default(),
            out: OutputConfig::default(),
        }
    }
}

pub fn cmd_response(c: &ResponseConfig) -> CliResult<Table> {
    let spectrum = c.source.spectrum()?;
    if c.modes == 0 || c.modes > spectrum.len() {
        return Err(CliError::Config(format!("modes must be in 1..={}, got {}", spectrum.len(), c.modes)));
    }
    let spectrum = spectrum.truncated(c.modes)?;
    let drive = c.drive.profile(spectrum.fundamental().value(), 0.05, 50.0)?;
    let spec = dynamics::standard_drive(&drive, &spectrum, c.modes)?;
    let grid = TimeGrid::over(drive.duration, intervals_for(&drive, c.steps_per_period, c.max_intervals)?)?;
    let p = dynamics::extract_perturbation_matrices(&spec, &grid)?;
    let ensemble = ThermalEnsemble::new(spectrum, temperature(c.temp)?)?;
    let r = response::quadratic_response(&p, &ensemble)?;
    let mut t = Table::new(["mode", "dN_squeeze", "dN_hop", "dN_total"]);
    for (i, m) in ensemble.spectrum().modes().iter().enumerate() {
        t.push(vec![m.label.to_string().into(), r.squeeze[i].into(), r.hop[i].into(), r.total[i].into()]);
    }
    Ok(t)
}

// ---- rwa / fig1 ----------------------------------------------------------

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct RwaArgs {
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Temperature, K.
    #[arg(long)]
    pub temp: Option<f64>,
    /// Switch-on time 𝖳 (the sweep end when points > 1), s.
    #[arg(long)]
    pub duration: Option<f64>,
    /// Number of evenly spaced durations on [0, duration].
    #[arg(long)]
    pub points: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub frequency: FrequencyArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RwaConfig {
    pub epsilon: f64,
    pub temp: f64,
    pub duration: f64,
    pub points: usize,
    #[serde(flatten)]
    pub frequency: FrequencyConfig,
    #[serde(flatten)]
    pub out: OutputConfig,
}

impl Default for RwaConfig {
    fn default() -> Self {
        Self {
            epsilon: CAPTION_EPSILON,
            temp: CAPTION_TEMPERATURE_K,
            duration: 0.05,
            points: 1,
            frequency: FrequencyConfig::default(),
            out: OutputConfig::default(),
        }
    }
}

pub fn cmd_rwa(c: &RwaConfig) -> CliResult<Table> {
    let omega = c.frequency.resolve()?;
    let temp = temperature(c.temp)?;
    let durations = duration_grid(c.duration, c.points)?;
    let rows = durations
        .par_iter()
        .map(|&d| response::rwa_photon_number(c.epsilon, omega, d, temp).map(|r| (d, r)))
        .collect::<crate::Result<Vec<_>>>()?;
    let mut t = Table::new(["T_duration_s", "squeeze", "N_total", "dN", "dN_vacuum", "enhancement"]);
    for (d, r) in rows {
        t.push(vec![d.into(), r.squeeze.into(), r.total.into(), r.created.into(), r.vacuum.into(), r.enhancement.into()]);
    }
    Ok(t)
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct Fig1Args {
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Temperature, K.
    #[arg(long)]
    pub temp: Option<f64>,
    /// Last switch-on time of the sweep, s.
    #[arg(long)]
    pub duration_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub frequency: FrequencyArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig1Config {
    pub epsilon: f64,
    pub temp: f64,
    pub duration_max: f64,
    pub points: usize,
    #[serde(flatten)]
    pub frequency: FrequencyConfig,
    #[serde(flatten)]
    pub out: OutputConfig,
}

impl Default for Fig1Config {
    fn default() -> Self {
        Self {
            epsilon: CAPTION_EPSILON,
            temp: CAPTION_TEMPERATURE_K,
            duration_max: 0.05,
            points: 500,
            frequency: FrequencyConfig::default(),
            out: OutputConfig::default(),
        }
    }
}

/// Columns of the photon-number-versus-duration table.
pub const FIG1_COLUMNS: [&str; 5] = ["T_duration_s", "N_vacuum", "N_thermal", "thermal_floor", "variance_band"];

pub fn cmd_fig1(c: &Fig1Config) -> CliResult<Table> {
    let omega = c.frequency.resolve()?;
    let temp = temperature(c.temp)?;
    let durations = duration_grid(c.duration_max, c.points)?;
    let sigma = crate::thermal::thermal_variance(omega, temp)?;
    let rows = durations
        .par_iter()
        .map(|&d| response::rwa_photon_number(c.epsilon, omega, d, temp).map(|r| (d, r)))
        .collect::<crate::Result<Vec<_>>>()?;
    let mut t = Table::new(FIG1_COLUMNS);
    for (d, r) in rows {
        t.push(vec![d.into(), r.vacuum.into(), r.total.into(), r.initial.into(), (sigma / 2.0).into()]);
    }
    Ok(t)
}

// ---- evolve --------------------------------------------------------------

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct EvolveArgs {
    /// Temperature, K (default 0).
    #[arg(long)]
    pub temp: Option<f64>,
    /// Initial thermal occupation of the fundamental (instead of --temp).
    #[arg(long)]
    pub n0: Option<f64>,
    #[arg(long)]
    pub modes: Option<usize>,
    /// Fock cutoff for every mode; sized from the tail policy when absent.
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Integration steps per drive period.
    #[arg(long)]
    pub steps_per_period: Option<usize>,
    /// Emit a row every this many steps (default: once per drive period).
    #[arg(long)]
    pub record_every: Option<usize>,
    /// Treat a saturated Fock cutoff as an error.
    #[arg(long, value_name = "BOOL")]
    pub strict: Option<bool>,
    #[arg(long)]
    pub max_intervals: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub drive: DriveArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolveConfig {
    pub temp: Option<f64>,
    pub n0: Option<f64>,
    pub modes: usize,
    pub cutoff: Option<usize>,
    pub steps_per_period: usize,
    pub record_every: Option<usize>,
    pub strict: bool,
    pub max_intervals: usize,
    #[serde(flatten)]
    pub source: SourceConfig,
    #[serde(flatten)]
    pub drive: DriveConfig,
    #[serde(flatten)]
    pub out: OutputConfig,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        Self {
            temp: None,
            n0: None,
            modes: 1,
            cutoff: None,
            steps_per_period: 64,
            record_every: None,
            strict: true,
            max_intervals: 1_000_000,
            source: SourceConfig::default(),
            drive: DriveConfig::default(),
            out: OutputConfig::default(),
        }
    }
}

pub fn cmd_evolve(c: &EvolveConfig) -> CliResult<Table> {
    let spectrum = c.source.spectrum()?;
    if c.modes == 0 || c.modes > spectrum.len() {
        return Err(CliError::Config(format!("modes must be in 1..={}, got {}", spectrum.len(), c.modes)));
    }
    let spectrum = spectrum.truncated(c.modes)?;
    let fundamental = spectrum.fundamental();
    let temp = match (c.temp, c.n0) {
        (Some(_), Some(_)) => return Err(CliError::Config("give either temp or n0, not both".into())),
        (Some(k), None) => temperature(k)?,
        (None, Some(n)) => Temperature::for_occupation(fundamental, non_negative("n0", n)?)?,
        (None, None) => Temperature::ZERO,
    };
    let drive = c.drive.profile(fundamental.value(), 0.5, 50.0)?;
    let spec = dynamics::standard_drive(&drive, &spectrum, c.modes)?;
    let ensemble = ThermalEnsemble::new(spectrum.clone(), temp)?;
    let cutoffs: Vec<usize> = match c.cutoff {
        Some(0) => return Err(CliError::Config("cutoff must be >= 1".into())),
        Some(n) => vec![n; c.modes],
        None => ensemble
            .occupations()
            .iter()
            .enumerate()
            .map(|(i, &n)| fock::evolution_cutoff(n, if i == 0 { drive.squeeze_parameter() } else { 0.0 }))
            .collect(),
    };
    let space = FockSpace::new(cutoffs)?;
    let rho0 = fock::thermal_density_matrix(&space, &spectrum, temp)?;
    let grid = TimeGrid::over(drive.duration, intervals_for(&drive, c.steps_per_period, c.max_intervals)?)?;
    let options = EvolveOptions {
        record_every: c.record_every.unwrap_or(c.steps_per_period),
        strict: c.strict,
        ..EvolveOptions::default()
    };
    let result = dynamics::evolve(&spec, &space, &rho0, &grid, &options)?;
    let mut columns = vec!["t".to_string()];
    columns.extend((1..=c.modes).map(|k| format!("N_{k}")));
    columns.extend(["entropy".to_string(), "trace_defect".to_string()]);
    let mut t = Table::new(columns);
    for (i, &time) in result.times.iter().enumerate() {
        let mut row: Vec<Cell> = vec![time.into()];
        row.extend(result.occupations[i].iter().map(|&n| Cell::Num(n)));
        row.push(result.entropy[i].into());
        row.push(result.trace_defect[i].into());
        t.push(row);
    }
    t.warnings = result.warnings;
    Ok(t)
}

// ---- mirror --------------------------------------------------------------

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct MirrorArgs {
    /// Oscillation amplitude, m.
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// Whole periods of a(1 − cos ωt) motion.
    #[arg(long)]
    pub periods: Option<u32>,
    /// Gaussian envelope width, s; selects a e^{−t²/2τ²} sin ωt motion.
    #[arg(long)]
    pub envelope: Option<f64>,
    /// Comma-separated temperatures, K.
    #[arg(long)]
    pub temps: Option<String>,
    /// Logarithmic sweep start, K (with --temp-max and --temp-points).
    #[arg(long)]
    pub temp_min: Option<f64>,
    #[arg(long)]
    pub temp_max: Option<f64>,
    #[arg(long)]
    pub temp_points: Option<usize>,
    #[arg(long)]
    pub samples_per_period: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub frequency: FrequencyArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MirrorConfig {
    pub amplitude: f64,
    pub periods: u32,
    pub envelope: Option<f64>,
    pub temps: String,
    pub temp_min: Option<f64>,
    pub temp_max: Option<f64>,
    pub temp_points: Option<usize>,
    pub samples_per_period: usize,
    #[serde(flatten)]
    pub frequency: FrequencyConfig,
    #[serde(flatten)]
    pub out: OutputConfig,
}

impl Default for MirrorConfig {
    fn default() -> Self {
        Self {
            amplitude: 1e-9,
            periods: 20,
            envelope: None,
            temps: "0,2.9,29,290".into(),
            temp_min: None,
            temp_max: None,
            temp_points: None,
            samples_per_period: mirror::DEFAULT_SAMPLES_PER_PERIOD,
            frequency: FrequencyConfig::default(),
            out: OutputConfig::default(),
        }
    }
}

impl MirrorConfig {
    fn temperatures(&self) -> CliResult<Vec<f64>> {
        match (self.temp_min, self.temp_max, self.temp_points) {
            (None, None, None) => self
                .temps
                .split(',')
                .map(|s| {
                    let s = s.trim();
                    s.parse::<f64>()
                        .map_err(|_| CliError::Config(format!("temps: not a number: {s:?}")))
                        .and_then(|k| non_negative("temps", k))
                })
                .collect(),
            (Some(lo), Some(hi), Some(n)) => {
                let (lo, hi) = (positive("temp_min", lo)?, positive("temp_max", hi)?);
                if n < 2 || hi < lo {
                    return Err(CliError::Config("log sweep needs temp_points >= 2 and temp_max >= temp_min".into()));
                }
                let ratio = (hi / lo).ln();
                Ok((0..n)
                    .map(|i| if i == n - 1 { hi } else { lo * (ratio * i as f64 / (n - 1) as f64).exp() })
                    .collect())
            }
            _ => Err(CliError::Config("temp_min, temp_max and temp_points go together".into())),
        }
    }

    pub fn trajectory(&self) -> CliResult<MirrorTrajectory> {
        let omega = self.frequency.resolve()?.value();
        if !self.amplitude.is_finite() {
            return Err(CliError::Config("amplitude must be finite".into()));
        }
        let amplitude = self.amplitude / SPEED_OF_LIGHT;
        Ok(match self.envelope {
            Some(env) => MirrorTrajectory::GaussianSinusoid {
                amplitude,
                omega,
                envelope: positive("envelope", env)?,
            },
            None => MirrorTrajectory::Sinusoid {
                amplitude,
                omega,
                periods: self.periods,
            },
        })
    }
}

pub fn cmd_mirror(c: &MirrorConfig) -> CliResult<Table> {
    let traj = c.trajectory()?;
    let temps = c.temperatures()?;
    let results = temps
        .par_iter()
        .map(|&k| {
            let temp = Temperature::from_kelvin(k)?;
            mirror::radiated_energy_with(&traj, temp, c.samples_per_period)
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let mut t = Table::new(["T_kelvin", "E_vacuum", "E_thermal", "E_total", "ratio"]);
    for (k, r) in temps.iter().zip(&results) {
        t.push(vec![(*k).into(), r.vacuum.into(), r.thermal.into(), r.total.into(), r.ratio.unwrap_or(f64::NAN).into()]);
    }
    if let Some(r) = results.first() {
        t.warnings = r.warnings.clone();
    }
    Ok(t)
}

// ---- dispatch ------------------------------------------------------------

/// A resolved invocation: the table, the echoed config and the output target.
#[derive(Debug)]
pub struct Outcome {
    pub table: Table,
    pub config: Value,
    pub output: OutputConfig,
}

fn echo<C: Serialize>(command: &str, c: &C) -> Value {
    let mut v = serde_json::to_value(c).expect("config serializes");
    if let Value::Object(m) = &mut v {
        m.insert("command".into(), Value::String(command.into()));
    }
    v
}

macro_rules! dispatch {
    ($name:expr, $file:expr, $args:expr, $cfg:ty, $cmd:path) => {{
        let c: $cfg = config::resolve($name, $file, $args)?;
        let table = $cmd(&c)?;
        Ok(Outcome {
            table,
            config: echo($name, &c),
            output: c.out.clone(),
        })
    }};
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let file = cli.config.as_deref().map(IniFile::read).transpose()?;
    let file = file.as_ref();
    let name = cli.command.name();
    match &cli.command {
        Command::Spectrum(a) => dispatch!(name, file, a, SpectrumConfig, cmd_spectrum),
        Command::Resonance(a) => dispatch!(name, file, a, ResonanceConfig, cmd_resonance),
        Command::Thermal(a) => dispatch!(name, file, a, ThermalConfig, cmd_thermal),
        Command::Response(a) => dispatch!(name, file, a, ResponseConfig, cmd_response),
        Command::Rwa(a) => dispatch!(name, file, a, RwaConfig, cmd_rwa),
        Command::Evolve(a) => dispatch!(name, file, a, EvolveConfig, cmd_evolve),
        Command::Mirror(a) => dispatch!(name, file, a, MirrorConfig, cmd_mirror),
        Command::Fig1(a) => dispatch!(name, file, a, Fig1Config, cmd_fig1),
    }
}

/// Renders and writes the outcome; returns the warnings for the error stream.
pub fn emit(outcome: &Outcome) -> CliResult<Vec<String>> {
    let text = outcome.table.render(outcome.output.format, &outcome.config);
    match &outcome.output.output {
        Some(path) if path != "-" => {
            std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {path}: {e}")))?;
        }
        _ => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(format!("cannot write output: {e}")))?;
        }
    }
    Ok(outcome.table.warnings.clone())
}
