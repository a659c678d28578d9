//! C ABI over `dcasimir`.
//!
//! Every function returns a [`DcStatus`]; results go through out-pointers.
//! On failure the thread-local message from [`dc_last_error_message`]
//! describes the error. Handles are opaque and released with the matching
//! `*_free` function. Temperatures are in kelvin, frequencies in rad/s,
//! times in seconds, mirror positions in light-seconds.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use dcasimir::cavity::{self, build_spectrum, CavitySpectrum, Geometry, GeometryTag, ModeLabel};
use dcasimir::dynamics::{self, DriveProfile, EvolutionResult, EvolveOptions};
use dcasimir::fock::{self, FockSpace};
use dcasimir::mirror::{self, MirrorEnergyResult, MirrorTrajectory};
use dcasimir::quadrature::TimeGrid;
use dcasimir::response;
use dcasimir::thermal;
use dcasimir::units::{NaturalFrequency, Temperature};
use dcasimir::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Numerical = 3,
    DimensionCap = 4,
    OutOfRange = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DcGeometry {
    OneDimensional = 0,
    Cubic = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DcRwaResult {
    pub total: f64,
    pub created: f64,
    pub vacuum: f64,
    pub enhancement: f64,
    pub initial: f64,
    pub squeeze: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DcMirrorEnergy {
    pub vacuum: f64,
    pub thermal: f64,
    pub total: f64,
    /// NaN when the vacuum term vanishes.
    pub ratio: f64,
    pub peak_speed: f64,
}

/// Opaque cavity spectrum.
pub struct DcSpectrum(CavitySpectrum);

/// Opaque evolution record.
pub struct DcEvolution(EvolutionResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: DcStatus, msg: impl Into<String>) -> DcStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> DcStatus {
    let status = match &e {
        Error::DimensionCap { .. } => DcStatus::DimensionCap,
        e if e.is_numerical() => DcStatus::Numerical,
        _ => DcStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), DcStatus>) -> DcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DcStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(DcStatus::Panic, "internal panic"),
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, DcStatus>;
}

impl<T> OrStatus<T> for dcasimir::Result<T> {
    fn or_status(self) -> Result<T, DcStatus> {
        self.map_err(from_error)
    }
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), DcStatus> {
    if out.is_null() {
        return Err(fail(DcStatus::NullPointer, "null output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, DcStatus> {
    p.as_ref().ok_or_else(|| fail(DcStatus::NullPointer, "null handle"))
}

fn scalar_inputs(omega: f64, temp_kelvin: f64) -> Result<(NaturalFrequency, Temperature), DcStatus> {
    Ok((
        NaturalFrequency::positive(omega).or_status()?,
        Temperature::from_kelvin(temp_kelvin).or_status()?,
    ))
}

/// Message describing the last failure on this thread, or NULL. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn dc_clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dc_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string"),
    };
    VERSION.as_ptr()
}

/// Temperature in kelvin to its angular-frequency scale k_B T/ħ.
#[no_mangle]
pub unsafe extern "C" fn dc_kelvin_to_angular(kelvin: f64, out: *mut f64) -> DcStatus {
    guard(|| write(out, Temperature::from_kelvin(kelvin).or_status()?.angular()))
}

#[no_mangle]
pub unsafe extern "C" fn dc_bose_occupation(omega: f64, temp_kelvin: f64, out: *mut f64) -> DcStatus {
    guard(|| {
        let (w, t) = scalar_inputs(omega, temp_kelvin)?;
        write(out, thermal::bose_occupation(w, t).or_status()?)
    })
}

/// 1 + 2n = coth(ħω/2k_BT).
#[no_mangle]
pub unsafe extern "C" fn dc_enhancement_factor(omega: f64, temp_kelvin: f64, out: *mut f64) -> DcStatus {
    guard(|| {
        let (w, t) = scalar_inputs(omega, temp_kelvin)?;
        write(out, thermal::enhancement_factor(w, t).or_status()?)
    })
}

/// √(n(n + 1)).
#[no_mangle]
pub unsafe extern "C" fn dc_thermal_variance(omega: f64, temp_kelvin: f64, out: *mut f64) -> DcStatus {
    guard(|| {
        let (w, t) = scalar_inputs(omega, temp_kelvin)?;
        write(out, thermal::thermal_variance(w, t).or_status()?)
    })
}

#[no_mangle]
pub unsafe extern "C" fn dc_rwa_photon_number(
    epsilon: f64,
    omega: f64,
    duration: f64,
    temp_kelvin: f64,
    out: *mut DcRwaResult,
) -> DcStatus {
    guard(|| {
        let (w, t) = scalar_inputs(omega, temp_kelvin)?;
        let r = response::rwa_photon_number(epsilon, w, duration, t).or_status()?;
        write(
            out,
            DcRwaResult {
                total: r.total,
                created: r.created,
                vacuum: r.vacuum,
                enhancement: r.enhancement,
                initial: r.initial,
                squeeze: r.squeeze,
            },
        )
    })
}

fn mirror_result(r: MirrorEnergyResult) -> DcMirrorEnergy {
    DcMirrorEnergy {
        vacuum: r.vacuum,
        thermal: r.thermal,
        total: r.total,
        ratio: r.ratio.unwrap_or(f64::NAN),
        peak_speed: r.peak_speed,
    }
}

/// Mirror moving as a(1 − cos ωt) for `periods` whole periods.
#[no_mangle]
pub unsafe extern "C" fn dc_mirror_sinusoid_energy(
    amplitude: f64,
    omega: f64,
    periods: u32,
    temp_kelvin: f64,
    out: *mut DcMirrorEnergy,
) -> DcStatus {
    guard(|| {
        let traj = MirrorTrajectory::Sinusoid { amplitude, omega, periods };
        let t = Temperature::from_kelvin(temp_kelvin).or_status()?;
        write(out, mirror_result(mirror::radiated_energy(&traj, t).or_status()?))
    })
}

/// Mirror positions sampled at start + i·step, i < len (odd, ≥ 5).
#[no_mangle]
pub unsafe extern "C" fn dc_mirror_sampled_energy(
    start: f64,
    step: f64,
    positions: *const f64,
    len: usize,
    temp_kelvin: f64,
    out: *mut DcMirrorEnergy,
) -> DcStatus {
    guard(|| {
        if positions.is_null() {
            return Err(fail(DcStatus::NullPointer, "null positions"));
        }
        let samples = std::slice::from_raw_parts(positions, len).to_vec();
        let traj = MirrorTrajectory::sampled(start, step, samples).or_status()?;
        let t = Temperature::from_kelvin(temp_kelvin).or_status()?;
        write(out, mirror_result(mirror::radiated_energy(&traj, t).or_status()?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn dc_spectrum_build(
    geometry: DcGeometry,
    length: f64,
    max_index: u32,
    out: *mut *mut DcSpectrum,
) -> DcStatus {
    guard(|| {
        let g = match geometry {
            DcGeometry::OneDimensional => Geometry::OneDimensional,
            DcGeometry::Cubic => Geometry::Cubic,
        };
        let tag = GeometryTag::new(g, length).or_status()?;
        let s = build_spectrum(tag, max_index).or_status()?;
        write(out, Box::into_raw(Box::new(DcSpectrum(s))))
    })
}

/// A spectrum with a single mode at `omega`.
#[no_mangle]
pub unsafe extern "C" fn dc_spectrum_single(omega: f64, out: *mut *mut DcSpectrum) -> DcStatus {
    guard(|| {
        let w = NaturalFrequency::positive(omega).or_status()?;
        let s = CavitySpectrum::single(w).or_status()?;
        write(out, Box::into_raw(Box::new(DcSpectrum(s))))
    })
}

#[no_mangle]
pub unsafe extern "C" fn dc_spectrum_free(spectrum: *mut DcSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

#[no_mangle]
pub unsafe extern "C" fn dc_spectrum_len(spectrum: *const DcSpectrum, out: *mut usize) -> DcStatus {
    guard(|| write(out, borrow(spectrum)?.0.len()))
}

#[no_mangle]
pub unsafe extern "C" fn dc_spectrum_frequency(spectrum: *const DcSpectrum, index: usize, out: *mut f64) -> DcStatus {
    guard(|| {
        let s = &borrow(spectrum)?.0;
        let m = s
            .modes()
            .get(index)
            .ok_or_else(|| fail(DcStatus::OutOfRange, format!("mode {index} of {}", s.len())))?;
        write(out, m.frequency.value())
    })
}

/// Mode indices into `out[0..3]`; one-dimensional modes fill `out[0]` and
/// zero the rest.
#[no_mangle]
pub unsafe extern "C" fn dc_spectrum_indices(spectrum: *const DcSpectrum, index: usize, out: *mut u32) -> DcStatus {
    guard(|| {
        let s = &borrow(spectrum)?.0;
        let m = s
            .modes()
            .get(index)
            .ok_or_else(|| fail(DcStatus::OutOfRange, format!("mode {index} of {}", s.len())))?;
        let triple = match m.label {
            ModeLabel::Index(n) => [n, 0, 0],
            ModeLabel::Triple(t) => t,
        };
        if out.is_null() {
            return Err(fail(DcStatus::NullPointer, "null output pointer"));
        }
        std::ptr::copy_nonoverlapping(triple.as_ptr(), out, 3);
        Ok(())
    })
}

/// Number of resonant pairs |Ω_μ ± Ω_ν| = 2Ω₁ within `relative_tolerance`·2Ω₁.
#[no_mangle]
pub unsafe extern "C" fn dc_resonance_count(
    spectrum: *const DcSpectrum,
    relative_tolerance: f64,
    velocity_only: bool,
    out: *mut usize,
) -> DcStatus {
    guard(|| {
        let s = &borrow(spectrum)?.0;
        let tol = relative_tolerance * 2.0 * s.fundamental().value();
        let pairs = if velocity_only {
            cavity::velocity_resonance_pairs(s, tol)
        } else {
            cavity::find_resonance_pairs(s, tol)
        }
        .or_status()?;
        write(out, pairs.len())
    })
}

/// Exact evolution of the lowest `modes` modes of `spectrum` from a thermal
/// state under ΔΩ²₁ = 2εΩ₁² sin(2ωt) for `duration`, with `intervals` RK4
/// steps. `cutoff` = 0 sizes each mode's Fock cutoff automatically.
#[no_mangle]
pub unsafe extern "C" fn dc_evolve_standard(
    spectrum: *const DcSpectrum,
    modes: usize,
    epsilon: f64,
    drive_omega: f64,
    duration: f64,
    temp_kelvin: f64,
    cutoff: usize,
    intervals: usize,
    strict: bool,
    out: *mut *mut DcEvolution,
) -> DcStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(DcStatus::NullPointer, "null output pointer"));
        }
        let s = borrow(spectrum)?.0.truncated(modes).or_status()?;
        let drive = DriveProfile::new(epsilon, drive_omega, duration).or_status()?;
        let spec = dynamics::standard_drive(&drive, &s, modes).or_status()?;
        let temp = Temperature::from_kelvin(temp_kelvin).or_status()?;
        let ensemble = thermal::ThermalEnsemble::new(s.clone(), temp).or_status()?;
        let cutoffs = if cutoff > 0 {
            vec![cutoff; modes]
        } else {
            ensemble
                .occupations()
                .iter()
                .enumerate()
                .map(|(i, &n)| fock::evolution_cutoff(n, if i == 0 { drive.squeeze_parameter() } else { 0.0 }))
                .collect()
        };
        let space = FockSpace::new(cutoffs).or_status()?;
        let rho0 = fock::thermal_density_matrix(&space, &s, temp).or_status()?;
        let grid = TimeGrid::over(duration, intervals).or_status()?;
        let options = EvolveOptions {
            strict,
            ..EvolveOptions::default()
        };
        let r = dynamics::evolve(&spec, &space, &rho0, &grid, &options).or_status()?;
        write(out, Box::into_raw(Box::new(DcEvolution(r))))
    })
}

#[no_mangle]
pub unsafe extern "C" fn dc_evolution_free(evolution: *mut DcEvolution) {
    if !evolution.is_null() {
        drop(Box::from_raw(evolution));
    }
}

/// Number of recorded samples (steps + 1).
#[no_mangle]
pub unsafe extern "C" fn dc_evolution_samples(evolution: *const DcEvolution, out: *mut usize) -> DcStatus {
    guard(|| write(out, borrow(evolution)?.0.times.len()))
}

fn sample<T: Copy>(v: &[T], i: usize) -> Result<T, DcStatus> {
    v.get(i)
        .copied()
        .ok_or_else(|| fail(DcStatus::OutOfRange, format!("sample {i} of {}", v.len())))
}

#[no_mangle]
pub unsafe extern "C" fn dc_evolution_time(evolution: *const DcEvolution, sample_index: usize, out: *mut f64) -> DcStatus {
    guard(|| write(out, sample(&borrow(evolution)?.0.times, sample_index)?))
}

#[no_mangle]
pub unsafe extern "C" fn dc_evolution_occupation(
    evolution: *const DcEvolution,
    sample_index: usize,
    mode: usize,
    out: *mut f64,
) -> DcStatus {
    guard(|| {
        let r = &borrow(evolution)?.0;
        let row = r
            .occupations
            .get(sample_index)
            .ok_or_else(|| fail(DcStatus::OutOfRange, format!("sample {sample_index} of {}", r.occupations.len())))?;
        write(out, sample(row, mode)?)
    })
}

#[no_mangle]
pub unsafe extern "C" fn dc_evolution_entropy(evolution: *const DcEvolution, sample_index: usize, out: *mut f64) -> DcStatus {
    guard(|| write(out, sample(&borrow(evolution)?.0.entropy, sample_index)?))
}

#[no_mangle]
pub unsafe extern "C" fn dc_evolution_max_trace_defect(evolution: *const DcEvolution, out: *mut f64) -> DcStatus {
    guard(|| write(out, borrow(evolution)?.0.max_trace_defect))
}
