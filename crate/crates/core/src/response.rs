//! Analytic photon-creation results: the quadratic response to a general
//! quadratic perturbation and the rotating-wave closed form for a cavity
//! driven at its fundamental.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::thermal::{self, ThermalEnsemble};
use crate::units::{NaturalFrequency, Temperature};

/// Symmetry tolerance for S and Hermiticity tolerance for U.
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

/// ∫dt H_I = ½(S_{μν} a†_μ a†_ν + S*_{μν} a_μ a_ν) + U_{μν} a†_μ a_ν + C.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationMatrices {
    pub s: CMatrix,
    pub u: CMatrix,
    pub c: Complex64,
}

impl PerturbationMatrices {
    pub fn new(s: CMatrix, u: CMatrix, c: Complex64) -> Result<Self> {
        let k = s.nrows();
        for m in [&s, &u] {
            if m.nrows() != k || m.ncols() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    actual: m.ncols().max(m.nrows()),
                });
            }
        }
        let scale = s.iter().chain(u.iter()).fold(1.0f64, |m, z| m.max(z.norm()));
        let s_defect = (&s - s.transpose()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        let u_defect = (&u - u.adjoint()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if s_defect > SYMMETRY_TOLERANCE * scale {
            return Err(Error::tolerance(format!("S not symmetric (defect {s_defect:.3e})")));
        }
        if u_defect > SYMMETRY_TOLERANCE * scale {
            return Err(Error::tolerance(format!("U not Hermitian (defect {u_defect:.3e})")));
        }
        Ok(Self { s, u, c })
    }

    pub fn zero(k: usize) -> Self {
        Self {
            s: CMatrix::zeros(k, k),
            u: CMatrix::zeros(k, k),
            c: Complex64::new(0.0, 0.0),
        }
    }

    /// Pure pair creation on the diagonal.
    pub fn diagonal_squeeze(values: &[Complex64]) -> Self {
        let k = values.len();
        let mut p = Self::zero(k);
        for (i, v) in values.iter().enumerate() {
            p.s[(i, i)] = *v;
        }
        p
    }

    pub fn mode_count(&self) -> usize {
        self.s.nrows()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseResult {
    pub squeeze: Vec<f64>,
    pub hop: Vec<f64>,
    pub total: Vec<f64>,
    pub total_number: f64,
    /// Σ Ω_λ ΔN_λ.
    pub total_energy: f64,
}

/// ΔN_λ = Σ_ρ |S_{λρ}|²(1 + n_ρ + n_λ) + |U_{λρ}|²(n_ρ − n_λ).
pub fn quadratic_response(p: &PerturbationMatrices, ensemble: &ThermalEnsemble) -> Result<ResponseResult> {
    let k = p.mode_count();
    let n = ensemble.occupations();
    if n.len() < k {
        return Err(Error::DimensionMismatch {
            expected: k,
            actual: n.len(),
        });
    }
    let mut squeeze = vec![0.0; k];
    let mut hop = vec![0.0; k];
    for l in 0..k {
        for r in 0..k {
            squeeze[l] += p.s[(l, r)].norm_sqr() * (1.0 + n[r] + n[l]);
            hop[l] += p.u[(l, r)].norm_sqr() * (n[r] - n[l]);
        }
    }
    let total: Vec<f64> = squeeze.iter().zip(&hop).map(|(s, h)| s + h).collect();
    let freqs = ensemble.spectrum().frequencies();
    Ok(ResponseResult {
        total_number: total.iter().sum(),
        total_energy: total.iter().zip(&freqs).map(|(d, w)| d * w).sum(),
        squeeze,
        hop,
        total,
    })
}

/// ΔN_λ(vac) = Σ_ρ |S_{λρ}|², the zero-temperature pair-creation yield.
pub fn vacuum_response(p: &PerturbationMatrices) -> Vec<f64> {
    let k = p.mode_count();
    (0..k)
        .map(|l| {
            let mut acc = 0.0;
            for r in 0..k {
                acc += p.s[(l, r)].norm_sqr();
            }
            acc
        })
        .collect()
}

/// Rotating-wave photon number of the resonantly driven fundamental.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RwaPhotonNumber {
    /// n₀ + ΔN.
    pub total: f64,
    /// sinh²(r)(1 + 2n₀).
    pub created: f64,
    /// sinh²(r).
    pub vacuum: f64,
    /// 1 + 2n₀.
    pub enhancement: f64,
    /// n₀.
    pub initial: f64,
    /// r = εω𝖳/2.
    pub squeeze: f64,
}

/// n₀ + sinh²(εω𝖳/2)·(1 + 2n₀) for a drive at the fundamental ω.
pub fn rwa_photon_number(epsilon: f64, omega: NaturalFrequency, duration: f64, temperature: Temperature) -> Result<RwaPhotonNumber> {
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(Error::domain(format!("epsilon must be >= 0, got {epsilon}")));
    }
    if !duration.is_finite() || duration < 0.0 {
        return Err(Error::domain(format!("duration must be >= 0, got {duration}")));
    }
    let initial = thermal::bose_occupation(omega, temperature)?;
    let enhancement = thermal::enhancement_factor(omega, temperature)?;
    let squeeze = epsilon * omega.value() * duration / 2.0;
    let vacuum = squeeze.sinh().powi(2);
    let created = vacuum * enhancement;
    Ok(RwaPhotonNumber {
        total: initial + created,
        created,
        vacuum,
        enhancement,
        initial,
        squeeze,
    })
}

/// Zero-temperature form: sinh²(εω𝖳/2).
pub fn rwa_vacuum_photon_number(epsilon: f64, omega: NaturalFrequency, duration: f64) -> f64 {
    (epsilon * omega.value() * duration / 2.0).sinh().powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub squeeze: f64,
    pub quadratic: f64,
    pub rwa: f64,
    pub relative_deviation: f64,
    /// 2r².
    pub bound: f64,
}

/// Largest |S₁₁| for which the quadratic and rotating-wave results are compared.
pub const SMALL_SQUEEZE_LIMIT: f64 = 0.1;

/// Compares quadratic response on the fundamental against sinh²(r)(1 + 2n₁).
/// They agree to O(r⁴); a relative gap beyond 2r² is a failure.
pub fn small_r_consistency(p: &PerturbationMatrices, ensemble: &ThermalEnsemble) -> Result<ConsistencyReport> {
    let r = p.s[(0, 0)].norm();
    if r > SMALL_SQUEEZE_LIMIT {
        return Err(Error::domain(format!(
            "|S₁₁| = {r} exceeds the small-squeezing limit {SMALL_SQUEEZE_LIMIT}"
        )));
    }
    let quadratic = quadratic_response(p, ensemble)?.total[0];
    let n1 = ensemble.occupations()[0];
    let rwa = r.sinh().powi(2) * (1.0 + 2.0 * n1);
    let relative_deviation = if rwa == 0.0 { (quadratic - rwa).abs() } else { ((quadratic - rwa) / rwa).abs() };
    let bound = 2.0 * r * r;
    let report = ConsistencyReport {
        squeeze: r,
        quadratic,
        rwa,
        relative_deviation,
        bound,
    };
    if relative_deviation > bound && rwa != 0.0 {
        return Err(Error::tolerance(format!(
            "quadratic response {quadratic:.6e} and rotating-wave {rwa:.6e} differ by {relative_deviation:.3e} > {bound:.3e}"
        )));
    }
    Ok(report)
}
