//! Energy radiated by a single moving mirror in 1+1 dimensions at finite
//! temperature:
//!
//! ```text
//! E = (1/12π) ∫ η̈² dt + (π/3) T² ∫ η̇² dt
//! ```
//!
//! Positions are natural lengths (light-seconds), so velocities are in units
//! of c and T is on the rad/s scale.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{self, TimeGrid};
use crate::units::Temperature;

/// Peak speed (in units of c) above which the result carries a warning.
/// The model assumes non-relativistic motion; the threshold itself is a
/// convention, not derived.
pub const VELOCITY_ADVISORY: f64 = 0.1;
/// Endpoint speed, relative to the peak, above which a trajectory is not at rest.
pub const REST_TOLERANCE: f64 = 1e-9;
/// Half-width of the Gaussian window in envelope widths; e^{−k²/2} < 1e-9.
const GAUSSIAN_HALF_WIDTH: f64 = 8.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MirrorTrajectory {
    /// η(t) = a(1 − cos ωt) on [0, 2πm/ω]: at rest and undisplaced at both ends.
    Sinusoid { amplitude: f64, omega: f64, periods: u32 },
    /// η(t) = a e^{−t²/2τ²} sin ωt on [−8τ, 8τ].
    GaussianSinusoid { amplitude: f64, omega: f64, envelope: f64 },
    /// Positions η_i at t_i = start + i·step.
    Sampled { start: f64, step: f64, positions: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MirrorEnergyResult {
    pub vacuum: f64,
    pub thermal: f64,
    pub total: f64,
    /// thermal / vacuum, absent when the vacuum term vanishes.
    pub ratio: Option<f64>,
    /// True when the terms come from closed forms rather than quadrature.
    pub closed_form: bool,
    pub peak_speed: f64,
    pub warnings: Vec<String>,
}

/// ∫η̈² and ∫η̇² for a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
struct MotionIntegrals {
    acceleration_sq: f64,
    velocity_sq: f64,
    peak_speed: f64,
}

impl MirrorTrajectory {
    /// `positions` sampled uniformly; requires at least 5 points and an odd
    /// count so composite Simpson applies.
    pub fn sampled(start: f64, step: f64, positions: Vec<f64>) -> Result<Self> {
        if !start.is_finite() || !step.is_finite() || step <= 0.0 {
            return Err(Error::domain(format!("sample spacing must be positive, got {step}")));
        }
        if positions.len() < 5 {
            return Err(Error::domain(format!(
                "sampled trajectory needs >= 5 points, got {}",
                positions.len()
            )));
        }
        if positions.len().is_multiple_of(2) {
            return Err(Error::domain("sampled trajectory needs an odd number of points"));
        }
        if positions.iter().any(|p| !p.is_finite()) {
            return Err(Error::domain("non-finite position sample"));
        }
        Ok(MirrorTrajectory::Sampled { start, step, positions })
    }

    /// Builds a sampled trajectory from explicit (t, η) pairs, rejecting
    /// non-uniform spacing.
    pub fn from_samples(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::domain("sampled trajectory needs >= 5 points"));
        }
        let step = (samples[samples.len() - 1].0 - samples[0].0) / (samples.len() - 1) as f64;
        for (i, (t, _)) in samples.iter().enumerate() {
            let want = samples[0].0 + step * i as f64;
            if (t - want).abs() > 1e-9 * step.abs().max(f64::MIN_POSITIVE) {
                return Err(Error::domain(format!("non-uniform sample grid at index {i}")));
            }
        }
        Self::sampled(samples[0].0, step, samples.iter().map(|s| s.1).collect())
    }

    fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if !v.is_finite() || v <= 0.0 {
                Err(Error::domain(format!("{name} must be positive, got {v}")))
            } else {
                Ok(())
            }
        };
        match self {
            MirrorTrajectory::Sinusoid { amplitude, omega, periods } => {
                positive("omega", *omega)?;
                if !amplitude.is_finite() {
                    return Err(Error::domain("amplitude must be finite"));
                }
                if *periods == 0 {
                    return Err(Error::domain("sinusoid needs at least one period"));
                }
                Ok(())
            }
            MirrorTrajectory::GaussianSinusoid { amplitude, omega, envelope } => {
                positive("omega", *omega)?;
                positive("envelope", *envelope)?;
                if !amplitude.is_finite() {
                    return Err(Error::domain("amplitude must be finite"));
                }
                Ok(())
            }
            MirrorTrajectory::Sampled { start, step, positions } => {
                Self::sampled(*start, *step, positions.clone()).map(|_| ())
            }
        }
    }

    /// Characteristic duration of the motion.
    pub fn duration(&self) -> f64 {
        match self {
            MirrorTrajectory::Sinusoid { omega, periods, .. } => 2.0 * PI * *periods as f64 / omega,
            MirrorTrajectory::GaussianSinusoid { envelope, .. } => 2.0 * GAUSSIAN_HALF_WIDTH * envelope,
            MirrorTrajectory::Sampled { step, positions, .. } => step * (positions.len() - 1) as f64,
        }
    }

    /// Closed-form ∫η̈² = a²ω⁴τ/2 and ∫η̇² = a²ω²τ/2 for the sinusoid.
    fn closed_form_integrals(&self) -> Option<MotionIntegrals> {
        match *self {
            MirrorTrajectory::Sinusoid { amplitude, omega, .. } => {
                let tau = self.duration();
                let a2 = amplitude * amplitude;
                Some(MotionIntegrals {
                    acceleration_sq: a2 * omega.powi(4) * tau / 2.0,
                    velocity_sq: a2 * omega * omega * tau / 2.0,
                    peak_speed: amplitude.abs() * omega,
                })
            }
            _ => None,
        }
    }

    fn quadrature_integrals(&self, samples_per_period: usize) -> Result<MotionIntegrals> {
        let mut noise = 0.0;
        let (velocity, acceleration, h) = match self {
            MirrorTrajectory::Sinusoid { amplitude, omega, periods } => {
                let (a, w) = (*amplitude, *omega);
                let grid = TimeGrid::over(self.duration(), even(*periods as usize * samples_per_period))?;
                let times: Vec<f64> = grid.times().collect();
                (
                    sample_on(&times, |t| a * w * (w * t).sin()),
                    sample_on(&times, |t| a * w * w * (w * t).cos()),
                    grid.step(),
                )
            }
            MirrorTrajectory::GaussianSinusoid { amplitude, omega, envelope } => {
                let (a, w, s) = (*amplitude, *omega, *envelope);
                let half = GAUSSIAN_HALF_WIDTH * s;
                let oscillations = (2.0 * half * w / (2.0 * PI)).ceil() as usize;
                // Resolve both the carrier and the envelope.
                let intervals = even((oscillations * samples_per_period).max(16 * samples_per_period));
                let grid = TimeGrid::new(-half, 2.0 * half, intervals)?;
                let times: Vec<f64> = grid.times().collect();
                let g = |t: f64| (-t * t / (2.0 * s * s)).exp();
                let vel = |t: f64| a * g(t) * (w * (w * t).cos() - t / (s * s) * (w * t).sin());
                let acc = |t: f64| {
                    let (sn, cs) = (w * t).sin_cos();
                    let u = t / (s * s);
                    a * g(t) * ((u * u - 1.0 / (s * s) - w * w) * sn - 2.0 * u * w * cs)
                };
                (sample_on(&times, vel), sample_on(&times, acc), grid.step())
            }
            MirrorTrajectory::Sampled { step, positions, .. } => {
                let (v, a) = differentiate(positions, *step);
                let scale = positions.iter().fold(0.0f64, |m, p| m.max(p.abs()));
                noise = 1e3 * f64::EPSILON * scale / step;
                (v, a, *step)
            }
        };
        check_rest(&velocity, noise)?;
        let peak_speed = velocity.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let vsq: Vec<f64> = velocity.iter().map(|v| v * v).collect();
        let asq: Vec<f64> = acceleration.iter().map(|a| a * a).collect();
        Ok(MotionIntegrals {
            acceleration_sq: quadrature::simpson(&asq, h)?,
            velocity_sq: quadrature::simpson(&vsq, h)?,
            peak_speed,
        })
    }
}

fn even(n: usize) -> usize {
    let n = n.max(2);
    n + n % 2
}

fn sample_on(times: &[f64], f: impl Fn(f64) -> f64) -> Vec<f64> {
    times.iter().map(|&t| f(t)).collect()
}

/// `noise` is the roundoff floor of the velocity estimate.
fn check_rest(velocity: &[f64], noise: f64) -> Result<()> {
    let peak = velocity.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let ends = velocity[0].abs().max(velocity[velocity.len() - 1].abs());
    if ends > REST_TOLERANCE * peak && ends > noise {
        return Err(Error::domain(format!(
            "trajectory not at rest at its endpoints (|v| = {ends:.3e}, peak {peak:.3e})"
        )));
    }
    Ok(())
}

/// Fourth-order finite differences: central in the interior, one-sided
/// near the edges.
pub fn differentiate(f: &[f64], h: f64) -> (Vec<f64>, Vec<f64>) {
    let n = f.len();
    assert!(n >= 5, "differentiate needs at least 5 samples");
    let mut d1 = vec![0.0; n];
    let mut d2 = vec![0.0; n];
    for i in 2..n - 2 {
        d1[i] = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12.0 * h);
        d2[i] = (-f[i + 2] + 16.0 * f[i + 1] - 30.0 * f[i] + 16.0 * f[i - 1] - f[i - 2]) / (12.0 * h * h);
    }
    let edge = |g: &dyn Fn(usize) -> f64| -> [f64; 4] {
        let first0 = (-25.0 * g(0) + 48.0 * g(1) - 36.0 * g(2) + 16.0 * g(3) - 3.0 * g(4)) / (12.0 * h);
        let first1 = (-3.0 * g(0) - 10.0 * g(1) + 18.0 * g(2) - 6.0 * g(3) + g(4)) / (12.0 * h);
        let (second0, second1) = if n >= 6 {
            (
                (45.0 * g(0) - 154.0 * g(1) + 214.0 * g(2) - 156.0 * g(3) + 61.0 * g(4) - 10.0 * g(5)) / (12.0 * h * h),
                (10.0 * g(0) - 15.0 * g(1) - 4.0 * g(2) + 14.0 * g(3) - 6.0 * g(4) + g(5)) / (12.0 * h * h),
            )
        } else {
            (
                (35.0 * g(0) - 104.0 * g(1) + 114.0 * g(2) - 56.0 * g(3) + 11.0 * g(4)) / (12.0 * h * h),
                (11.0 * g(0) - 20.0 * g(1) + 6.0 * g(2) + 4.0 * g(3) - g(4)) / (12.0 * h * h),
            )
        };
        [first0, first1, second0, second1]
    };
    let left = edge(&|k| f[k]);
    let right = edge(&|k| f[n - 1 - k]);
    d1[0] = left[0];
    d1[1] = left[1];
    d2[0] = left[2];
    d2[1] = left[3];
    // Mirrored stencils: the first derivative flips sign.
    d1[n - 1] = -right[0];
    d1[n - 2] = -right[1];
    d2[n - 1] = right[2];
    d2[n - 2] = right[3];
    (d1, d2)
}

/// Quadrature resolution for analytic trajectories.
pub const DEFAULT_SAMPLES_PER_PERIOD: usize = 256;

fn assemble(m: MotionIntegrals, temperature: Temperature, closed_form: bool) -> MirrorEnergyResult {
    let vacuum = m.acceleration_sq / (12.0 * PI);
    let thermal = if temperature.is_zero() {
        0.0
    } else {
        let t = temperature.angular();
        PI / 3.0 * t * t * m.velocity_sq
    };
    let mut warnings = Vec::new();
    if m.peak_speed >= VELOCITY_ADVISORY {
        warnings.push(format!(
            "peak mirror speed {:.3}c exceeds the non-relativistic advisory threshold {VELOCITY_ADVISORY}c",
            m.peak_speed
        ));
    }
    MirrorEnergyResult {
        vacuum,
        thermal,
        total: vacuum + thermal,
        ratio: if vacuum > 0.0 { Some(thermal / vacuum) } else { None },
        closed_form,
        peak_speed: m.peak_speed,
        warnings,
    }
}

/// Radiated energy by composite Simpson quadrature of η̇² and η̈².
pub fn radiated_energy(traj: &MirrorTrajectory, temperature: Temperature) -> Result<MirrorEnergyResult> {
    radiated_energy_with(traj, temperature, DEFAULT_SAMPLES_PER_PERIOD)
}

pub fn radiated_energy_with(traj: &MirrorTrajectory, temperature: Temperature, samples_per_period: usize) -> Result<MirrorEnergyResult> {
    traj.validate()?;
    if samples_per_period < 4 {
        return Err(Error::domain("need at least 4 samples per period"));
    }
    Ok(assemble(traj.quadrature_integrals(samples_per_period)?, temperature, false))
}

/// Zero-temperature radiated energy (1/12π)∫η̈².
pub fn vacuum_radiated_energy(traj: &MirrorTrajectory) -> Result<f64> {
    traj.validate()?;
    Ok(traj.quadrature_integrals(DEFAULT_SAMPLES_PER_PERIOD)?.acceleration_sq / (12.0 * PI))
}

/// Closed-form energies where available (the sinusoid).
pub fn closed_form_energy(traj: &MirrorTrajectory, temperature: Temperature) -> Result<Option<MirrorEnergyResult>> {
    traj.validate()?;
    Ok(traj.closed_form_integrals().map(|m| assemble(m, temperature, true)))
}

/// Thermal-to-vacuum energy ratio.
pub fn thermal_to_vacuum_ratio(traj: &MirrorTrajectory, temperature: Temperature) -> Result<f64> {
    radiated_energy(traj, temperature)?
        .ratio
        .ok_or_else(|| Error::domain("vacuum term vanishes; thermal-to-vacuum ratio undefined"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn t(angular: f64) -> Temperature {
        Temperature::from_angular(angular).unwrap()
    }

    #[test]
    fn static_mirror_radiates_nothing() {
        let displaced = MirrorTrajectory::sampled(0.0, 0.1, vec![0.3; 11]).unwrap();
        assert!(radiated_energy(&displaced, t(5.0)).unwrap().total < 1e-25);
        let traj = MirrorTrajectory::sampled(0.0, 0.1, vec![0.0; 11]).unwrap();
        let r = radiated_energy(&traj, t(5.0)).unwrap();
        assert_eq!(r.total, 0.0);
        assert_eq!(r.ratio, None);
        assert!(thermal_to_vacuum_ratio(&traj, t(5.0)).is_err());
    }

    #[test]
    fn sinusoid_matches_closed_form() {
        let (a, w) = (1e-3, 2.0);
        let traj = MirrorTrajectory::Sinusoid { amplitude: a, omega: w, periods: 20 };
        let tau = 2.0 * PI * 20.0 / w;
        let r = radiated_energy(&traj, Temperature::ZERO).unwrap();
        assert_relative_eq!(r.vacuum, a * a * w.powi(4) * tau / (24.0 * PI), max_relative = 1e-10);
        assert_eq!(r.thermal, 0.0);
        let hot = radiated_energy(&traj, t(0.7)).unwrap();
        assert_relative_eq!(hot.ratio.unwrap(), 4.0 * PI * PI * 0.49 / (w * w), max_relative = 1e-10);
        let closed = closed_form_energy(&traj, t(0.7)).unwrap().unwrap();
        assert!(closed.closed_form && !hot.closed_form);
    }

    #[test]
    fn finite_differences_are_fourth_order() {
        let errs: Vec<f64> = [40usize, 80]
            .iter()
            .map(|&n| {
                let h = 2.0 / n as f64;
                let f: Vec<f64> = (0..=n).map(|i| (1.3 * i as f64 * h).sin()).collect();
                let (d1, d2) = differentiate(&f, h);
                (0..=n)
                    .map(|i| {
                        let x = 1.3 * i as f64 * h;
                        (d1[i] - 1.3 * x.cos()).abs().max((d2[i] + 1.69 * x.sin()).abs())
                    })
                    .fold(0.0, f64::max)
            })
            .collect();
        assert!(errs[0] / errs[1] > 12.0, "{errs:?}");
    }

    #[test]
    fn sampled_gaussian_matches_analytic() {
        let (a, w, s) = (1e-2, 3.0, 2.0);
        let analytic = MirrorTrajectory::GaussianSinusoid { amplitude: a, omega: w, envelope: s };
        let half = 8.0 * s;
        let n = 8001;
        let h = 2.0 * half / (n - 1) as f64;
        let positions = (0..n)
            .map(|i| {
                let x = -half + h * i as f64;
                a * (-x * x / (2.0 * s * s)).exp() * (w * x).sin()
            })
            .collect();
        let sampled = MirrorTrajectory::sampled(-half, h, positions).unwrap();
        let ra = radiated_energy(&analytic, t(1.0)).unwrap();
        let rs = radiated_energy(&sampled, t(1.0)).unwrap();
        assert_relative_eq!(rs.vacuum, ra.vacuum, max_relative = 1e-8);
        assert_relative_eq!(rs.thermal, ra.thermal, max_relative = 1e-8);
    }

    #[test]
    fn moving_endpoints_rejected() {
        let positions: Vec<f64> = (0..21).map(|i| 0.01 * i as f64).collect();
        let traj = MirrorTrajectory::sampled(0.0, 0.1, positions).unwrap();
        assert!(matches!(radiated_energy(&traj, Temperature::ZERO), Err(Error::Domain(_))));
    }

    #[test]
    fn sample_validation() {
        assert!(MirrorTrajectory::sampled(0.0, 0.1, vec![0.0; 4]).is_err());
        assert!(MirrorTrajectory::sampled(0.0, 0.1, vec![0.0; 6]).is_err());
        assert!(MirrorTrajectory::sampled(0.0, -0.1, vec![0.0; 7]).is_err());
        let bad: Vec<(f64, f64)> = vec![(0.0, 0.0), (0.1, 0.0), (0.25, 0.0), (0.3, 0.0), (0.4, 0.0)];
        assert!(MirrorTrajectory::from_samples(&bad).is_err());
        let good: Vec<(f64, f64)> = (0..5).map(|i| (0.1 * i as f64, 0.0)).collect();
        assert!(MirrorTrajectory::from_samples(&good).is_ok());
    }

    #[test]
    fn fast_mirror_is_flagged() {
        let traj = MirrorTrajectory::Sinusoid { amplitude: 0.1, omega: 2.0, periods: 1 };
        let r = radiated_energy(&traj, Temperature::ZERO).unwrap();
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn zero_temperature_matches_vacuum_path() {
        let traj = MirrorTrajectory::GaussianSinusoid { amplitude: 1e-3, omega: 1.0, envelope: 3.0 };
        let r = radiated_energy(&traj, Temperature::ZERO).unwrap();
        assert_eq!(r.vacuum.to_bits(), vacuum_radiated_energy(&traj).unwrap().to_bits());
        assert_eq!(r.total.to_bits(), r.vacuum.to_bits());
    }

    fn sampled_gaussian(a: f64, w: f64, s: f64, shift: f64, n: usize) -> MirrorTrajectory {
        let half = 8.0 * s;
        let h = 2.0 * half / (n - 1) as f64;
        let positions = (0..n)
            .map(|i| {
                let x = -half + h * i as f64;
                a * (-x * x / (2.0 * s * s)).exp() * (w * x).sin()
            })
            .collect();
        MirrorTrajectory::sampled(shift - half, h, positions).unwrap()
    }

    #[test]
    fn quadrature_converged_at_default_density() {
        let traj = MirrorTrajectory::GaussianSinusoid { amplitude: 2e-3, omega: 5.0, envelope: 1.5 };
        let coarse = radiated_energy_with(&traj, t(2.0), DEFAULT_SAMPLES_PER_PERIOD).unwrap();
        let fine = radiated_energy_with(&traj, t(2.0), 2 * DEFAULT_SAMPLES_PER_PERIOD).unwrap();
        assert_relative_eq!(coarse.vacuum, fine.vacuum, max_relative = 1e-8);
        assert_relative_eq!(coarse.thermal, fine.thermal, max_relative = 1e-8);
    }

    #[test]
    fn time_translation_invariant() {
        let base = radiated_energy(&sampled_gaussian(1e-2, 3.0, 2.0, 0.0, 8001), t(1.0)).unwrap();
        let moved = radiated_energy(&sampled_gaussian(1e-2, 3.0, 2.0, 123.456, 8001), t(1.0)).unwrap();
        assert_relative_eq!(base.vacuum, moved.vacuum, max_relative = 1e-12);
        assert_relative_eq!(base.thermal, moved.thermal, max_relative = 1e-12);
    }

    proptest::proptest! {
        #[test]
        fn amplitude_scales_quadratically(c in 0.1f64..10.0, temp in 0.0f64..5.0) {
            let one = MirrorTrajectory::GaussianSinusoid { amplitude: 1e-3, omega: 2.0, envelope: 2.0 };
            let scaled = MirrorTrajectory::GaussianSinusoid { amplitude: c * 1e-3, omega: 2.0, envelope: 2.0 };
            let (a, b) = (radiated_energy(&one, t(temp)).unwrap(), radiated_energy(&scaled, t(temp)).unwrap());
            proptest::prop_assert!(((b.vacuum - c * c * a.vacuum) / b.vacuum).abs() < 1e-12);
            if temp > 0.0 {
                proptest::prop_assert!(((b.thermal - c * c * a.thermal) / b.thermal).abs() < 1e-12);
            }
        }

        #[test]
        fn thermal_term_quadratic_in_temperature(temp in 1e-3f64..1e3) {
            let traj = MirrorTrajectory::Sinusoid { amplitude: 1e-3, omega: 2.0, periods: 3 };
            let (a, b) = (radiated_energy(&traj, t(temp)).unwrap(), radiated_energy(&traj, t(2.0 * temp)).unwrap());
            proptest::prop_assert_eq!(a.vacuum.to_bits(), b.vacuum.to_bits());
            proptest::prop_assert!((b.thermal / a.thermal - 4.0).abs() < 1e-12);
        }
    }
}
