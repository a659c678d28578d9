//! Dynamical Casimir photon creation in cavities and by moving mirrors at
//! finite temperature.
//!
//! All quantities are in natural units (ħ = c = k_B = 1) with frequencies and
//! temperatures on the rad/s scale; [`units`] converts from SI.

#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod cavity;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod mirror;
pub mod quadrature;
pub mod response;
pub mod thermal;
pub mod units;

pub use cavity::{build_spectrum, find_resonance_pairs, CavitySpectrum, Geometry, GeometryTag, Mode, ModeLabel};
pub use dynamics::{evolve, DriveProfile, EvolutionResult, EvolveOptions, InteractionSpec};
pub use error::{Error, Result};
pub use mirror::{radiated_energy, MirrorEnergyResult, MirrorTrajectory};
pub use response::{quadratic_response, rwa_photon_number, PerturbationMatrices, ResponseResult};
pub use thermal::{bose_occupation, enhancement_factor, thermal_variance, ThermalEnsemble};
pub use units::{NaturalFrequency, Temperature};
