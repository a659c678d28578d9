#![allow(clippy::excessive_precision)]

use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use dcasimir_ffi::*;

fn last_error() -> String {
    let p = dc_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn scalars() {
    let mut e = 0.0;
    assert_eq!(unsafe { dc_enhancement_factor(1.46e11, 290.0, &mut e) }, DcStatus::Ok);
    assert!((e - 520.095138810749871).abs() < 1e-9);
    let mut n = 0.0;
    assert_eq!(unsafe { dc_bose_occupation(1.46e11, 0.0, &mut n) }, DcStatus::Ok);
    assert_eq!(n, 0.0);
    let mut s = 0.0;
    assert_eq!(unsafe { dc_thermal_variance(1.46e11, 290.0, &mut s) }, DcStatus::Ok);
    assert!((s - 260.047088723644999).abs() < 1e-9);
    let mut w = 0.0;
    assert_eq!(unsafe { dc_kelvin_to_angular(1.0, &mut w) }, DcStatus::Ok);
    assert!((w / 1.309203391269890e11 - 1.0).abs() < 1e-14);
}

#[test]
fn errors_set_status_and_message() {
    dc_clear_error();
    assert!(dc_last_error_message().is_null());
    let mut e = 0.0;
    assert_eq!(unsafe { dc_enhancement_factor(-1.0, 290.0, &mut e) }, DcStatus::InvalidArgument);
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { dc_enhancement_factor(1.0, 1.0, ptr::null_mut()) }, DcStatus::NullPointer);
    assert!(last_error().contains("null"));
    assert_eq!(unsafe { dc_spectrum_len(ptr::null(), &mut 0usize) }, DcStatus::NullPointer);
}

#[test]
fn rwa_matches_closed_form() {
    let mut r = DcRwaResult::default();
    // εω𝖳/2 = 1
    assert_eq!(unsafe { dc_rwa_photon_number(1e-3, 2.0, 1000.0, 0.0, &mut r) }, DcStatus::Ok);
    assert!((r.created - 1.3810978455418157).abs() < 1e-13);
    assert_eq!(r.enhancement, 1.0);
}

#[test]
fn mirror_energy() {
    let mut m = DcMirrorEnergy::default();
    let (a, w, periods) = (1e-3, 2.0, 20u32);
    assert_eq!(unsafe { dc_mirror_sinusoid_energy(a, w, periods, 0.0, &mut m) }, DcStatus::Ok);
    let tau = 2.0 * std::f64::consts::PI * periods as f64 / w;
    assert!((m.vacuum / (a * a * w.powi(4) * tau / (24.0 * std::f64::consts::PI)) - 1.0).abs() < 1e-10);
    assert_eq!(m.thermal, 0.0);
    let still = [0.0; 7];
    assert_eq!(unsafe { dc_mirror_sampled_energy(0.0, 0.1, still.as_ptr(), still.len(), 300.0, &mut m) }, DcStatus::Ok);
    assert!(m.ratio.is_nan());
    assert_eq!(
        unsafe { dc_mirror_sampled_energy(0.0, 0.1, still.as_ptr(), 4, 300.0, &mut m) },
        DcStatus::InvalidArgument
    );
}

#[test]
fn spectrum_handle() {
    let mut h: *mut DcSpectrum = ptr::null_mut();
    assert_eq!(unsafe { dc_spectrum_build(DcGeometry::Cubic, 0.01, 3, &mut h) }, DcStatus::Ok);
    let mut len = 0usize;
    assert_eq!(unsafe { dc_spectrum_len(h, &mut len) }, DcStatus::Ok);
    assert_eq!(len, 27);
    let mut w = 0.0;
    assert_eq!(unsafe { dc_spectrum_frequency(h, 0, &mut w) }, DcStatus::Ok);
    assert!((w / 1.631290109167840e11 - 1.0).abs() < 1e-14);
    let mut idx = [9u32; 3];
    assert_eq!(unsafe { dc_spectrum_indices(h, 0, idx.as_mut_ptr()) }, DcStatus::Ok);
    assert_eq!(idx, [1, 1, 1]);
    assert_eq!(unsafe { dc_spectrum_frequency(h, 27, &mut w) }, DcStatus::OutOfRange);
    let mut count = 0usize;
    assert_eq!(unsafe { dc_resonance_count(h, 1e-9, true, &mut count) }, DcStatus::Ok);
    unsafe { dc_spectrum_free(h) };
    unsafe { dc_spectrum_free(ptr::null_mut()) };
}

#[test]
fn evolution_handle() {
    let mut s: *mut DcSpectrum = ptr::null_mut();
    assert_eq!(unsafe { dc_spectrum_single(1.0, &mut s) }, DcStatus::Ok);
    let periods = 10.0;
    let duration = 2.0 * std::f64::consts::PI * periods;
    let r = 0.1;
    let eps = 2.0 * r / duration;
    let mut ev: *mut DcEvolution = ptr::null_mut();
    let status = unsafe { dc_evolve_standard(s, 1, eps, 1.0, duration, 0.0, 0, 640, true, &mut ev) };
    assert_eq!(status, DcStatus::Ok, "{}", last_error());
    let mut samples = 0usize;
    assert_eq!(unsafe { dc_evolution_samples(ev, &mut samples) }, DcStatus::Ok);
    assert_eq!(samples, 641);
    let mut n = 0.0;
    assert_eq!(unsafe { dc_evolution_occupation(ev, samples - 1, 0, &mut n) }, DcStatus::Ok);
    assert!((n / r.sinh().powi(2) - 1.0).abs() < 0.01);
    let mut defect = 1.0;
    assert_eq!(unsafe { dc_evolution_max_trace_defect(ev, &mut defect) }, DcStatus::Ok);
    assert!(defect < 1e-8);
    assert_eq!(unsafe { dc_evolution_occupation(ev, samples - 1, 1, &mut n) }, DcStatus::OutOfRange);
    // Squeezed vacuum fills only even levels: a cutoff of 4 saturates.
    let mut bad: *mut DcEvolution = ptr::null_mut();
    let status = unsafe { dc_evolve_standard(s, 1, 50.0 * eps, 1.0, duration, 0.0, 4, 640, true, &mut bad) };
    assert_eq!(status, DcStatus::Numerical);
    assert!(bad.is_null());
    unsafe {
        dc_evolution_free(ev);
        dc_spectrum_free(s);
    }
}

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include").join("dcasimir.h")
}

#[test]
fn header_declares_the_api() {
    let text = std::fs::read_to_string(header()).expect("build script writes the header");
    let src = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("src").join("lib.rs")).unwrap();
    let exported: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exported.len() >= 20);
    for name in exported {
        assert!(text.contains(&format!("{name}(")), "{name} missing from header");
    }
    for item in ["typedef struct DcSpectrum DcSpectrum;", "DC_STATUS_NUMERICAL = 3", "#ifndef DCASIMIR_H"] {
        assert!(text.contains(item), "{item}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let out = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c"])
        .arg(header())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn c_program_links_and_runs() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    // The static library sits next to this test binary in target/<profile>/deps.
    let deps = std::env::current_exe().unwrap().parent().unwrap().to_path_buf();
    let lib = deps.join("libdcasimir_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let dir = tempfile_dir();
    let exe = dir.join("smoke");
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let out = Command::new(cc)
        .arg("-std=c99")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests").join("c").join("smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert_eq!(run.status.code(), Some(0));
    let created: f64 = String::from_utf8_lossy(&run.stdout).trim().parse().unwrap();
    assert!((created / 1f64.sinh().powi(2) - 1.0).abs() < 1e-14, "{created}");
    let _ = std::fs::remove_dir_all(dir);
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dcasimir-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn which_cc() -> Result<&'static str, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if Command::new(cc).arg("--version").output().is_ok_and(|o| o.status.success()) {
            return Ok(cc);
        }
    }
    Err(())
}
