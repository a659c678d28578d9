//! Time-dependent boundary drives and exact von Neumann evolution.
//!
//! The interaction Hamiltonian of a trembling cavity is
//!
//! ```text
//! H_I(t) = Σ_μ ΔΩ²_μ(t) q_μ(t)² / 2 + Σ_{μν} M_{μν}(t) q_μ(t) p_ν(t)
//! ```
//!
//! with interaction-picture quadratures q_μ(t) = (a e^{−iΩt} + a† e^{iΩt})/√(2Ω).
//! Expanded in normal order it becomes
//! ½ Σ (s_{μν} a†_μ a†_ν + h.c.) + Σ u_{μν} a†_μ a_ν + C, whose time
//! integrals are the pair-creation (S), hopping (U) and phase (C) parts.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cavity::CavitySpectrum;
use crate::error::{Error, Result};
use crate::fock::{self, DensityMatrix, FockSpace, OperatorMatrix};
use crate::linalg::{self, CMatrix};
use crate::quadrature::{self, TimeGrid};
use crate::response::PerturbationMatrices;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Scalar time dependence of a drive coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TimeFunction {
    Zero,
    Constant { value: f64 },
    /// amplitude · sin(frequency · t + phase)
    Harmonic { amplitude: f64, frequency: f64, phase: f64 },
}

impl TimeFunction {
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            TimeFunction::Zero => 0.0,
            TimeFunction::Constant { value } => value,
            TimeFunction::Harmonic {
                amplitude,
                frequency,
                phase,
            } => amplitude * (frequency * t + phase).sin(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match *self {
            TimeFunction::Zero => true,
            TimeFunction::Constant { value } => value == 0.0,
            TimeFunction::Harmonic { amplitude, .. } => amplitude == 0.0,
        }
    }

    pub fn negated(&self) -> Self {
        match *self {
            TimeFunction::Zero => TimeFunction::Zero,
            TimeFunction::Constant { value } => TimeFunction::Constant { value: -value },
            TimeFunction::Harmonic {
                amplitude,
                frequency,
                phase,
            } => TimeFunction::Harmonic {
                amplitude: -amplitude,
                frequency,
                phase,
            },
        }
    }
}

/// Harmonic modulation ε sin(2ωt) of the boundary, switched on for 𝖳.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveProfile {
    pub epsilon: f64,
    /// Half the modulation frequency, rad/s.
    pub omega: f64,
    /// Switch-on time 𝖳, s.
    pub duration: f64,
}

/// Regime indicators for the rotating-wave treatment. Reported, not enforced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeFlags {
    pub small_amplitude: bool,
    pub many_periods: bool,
    /// ε·ω·𝖳, which should be of order one.
    pub epsilon_omega_duration: f64,
}

impl DriveProfile {
    pub fn new(epsilon: f64, omega: f64, duration: f64) -> Result<Self> {
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(Error::domain(format!("epsilon must be >= 0, got {epsilon}")));
        }
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::domain(format!("drive frequency must be positive, got {omega}")));
        }
        if !duration.is_finite() || duration < 0.0 {
            return Err(Error::domain(format!("duration must be >= 0, got {duration}")));
        }
        Ok(Self {
            epsilon,
            omega,
            duration,
        })
    }

    /// Drive at frequency `omega` for `periods` periods of 2π/ω, with the
    /// amplitude chosen so that r = εω𝖳/2 equals `squeeze`.
    pub fn for_squeeze(squeeze: f64, omega: f64, periods: f64) -> Result<Self> {
        let duration = 2.0 * std::f64::consts::PI * periods / omega;
        Self::new(2.0 * squeeze / (omega * duration), omega, duration)
    }

    pub fn regime(&self) -> RegimeFlags {
        RegimeFlags {
            small_amplitude: self.epsilon < 1e-2,
            many_periods: self.omega * self.duration > 10.0,
            epsilon_omega_duration: self.epsilon * self.omega * self.duration,
        }
    }

    /// Rotating-wave squeezing parameter εω𝖳/2.
    pub fn squeeze_parameter(&self) -> f64 {
        self.epsilon * self.omega * self.duration / 2.0
    }
}

/// Mode frequencies plus the time-dependent ΔΩ²_μ and antisymmetric M_{μν},
/// all switched on during [0, duration].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteractionSpec {
    frequencies: Vec<f64>,
    delta_omega_sq: Vec<TimeFunction>,
    coupling: Vec<Vec<TimeFunction>>,
    duration: f64,
}

impl InteractionSpec {
    /// No perturbation on the lowest `modes` modes of `spectrum`.
    pub fn zero(spectrum: &CavitySpectrum, modes: usize, duration: f64) -> Result<Self> {
        let spectrum = spectrum.truncated(modes)?;
        if !duration.is_finite() || duration < 0.0 {
            return Err(Error::domain(format!("duration must be >= 0, got {duration}")));
        }
        Ok(Self {
            frequencies: spectrum.frequencies(),
            delta_omega_sq: vec![TimeFunction::Zero; modes],
            coupling: vec![vec![TimeFunction::Zero; modes]; modes],
            duration,
        })
    }

    pub fn mode_count(&self) -> usize {
        self.frequencies.len()
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn delta_omega_sq(&self, mode: usize) -> TimeFunction {
        self.delta_omega_sq[mode]
    }

    pub fn coupling(&self, mu: usize, nu: usize) -> TimeFunction {
        self.coupling[mu][nu]
    }

    pub fn with_delta_omega_sq(mut self, mode: usize, f: TimeFunction) -> Result<Self> {
        self.check_mode(mode)?;
        self.delta_omega_sq[mode] = f;
        Ok(self)
    }

    /// Sets M_{μν} = f and M_{νμ} = −f.
    pub fn with_coupling(mut self, mu: usize, nu: usize, f: TimeFunction) -> Result<Self> {
        self.check_mode(mu)?;
        self.check_mode(nu)?;
        if mu == nu {
            return Err(Error::domain("velocity coupling is antisymmetric; M_{μμ} must vanish"));
        }
        self.coupling[mu][nu] = f;
        self.coupling[nu][mu] = f.negated();
        Ok(self)
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.mode_count() {
            return Err(Error::domain(format!("mode {mode} out of range")));
        }
        Ok(())
    }

    #[inline]
    fn active(&self, t: f64) -> bool {
        t >= 0.0 && t <= self.duration
    }

    pub fn delta_omega_sq_at(&self, mode: usize, t: f64) -> f64 {
        if self.active(t) {
            self.delta_omega_sq[mode].value(t)
        } else {
            0.0
        }
    }

    pub fn coupling_at(&self, mu: usize, nu: usize, t: f64) -> f64 {
        if self.active(t) {
            self.coupling[mu][nu].value(t)
        } else {
            0.0
        }
    }

    pub fn is_zero(&self) -> bool {
        self.delta_omega_sq.iter().all(TimeFunction::is_zero)
            && self.coupling.iter().flatten().all(TimeFunction::is_zero)
    }

    /// Normal-ordered coefficients at time t in the Schrödinger-like frame
    /// (operators static, coefficients time dependent): pair creation
    /// c^S (symmetric), hopping c^U (Hermitian) and the c-number.
    pub fn normal_ordered_coefficients(&self, t: f64) -> (CMatrix, CMatrix, f64) {
        let k = self.mode_count();
        let mut cs = CMatrix::zeros(k, k);
        let mut cu = CMatrix::zeros(k, k);
        let mut cc = 0.0;
        if !self.active(t) {
            return (cs, cu, cc);
        }
        for mu in 0..k {
            let d = self.delta_omega_sq_at(mu, t);
            if d != 0.0 {
                let w = self.frequencies[mu];
                cs[(mu, mu)] += Complex64::new(d / (2.0 * w), 0.0);
                cu[(mu, mu)] += Complex64::new(d / (2.0 * w), 0.0);
                cc += d / (4.0 * w);
            }
        }
        // M_{μν} q_μ p_ν = κ_{μν}(a†_μ a†_ν − a_μ a_ν + a†_ν a_μ − a†_μ a_ν)
        // with κ_{μν} = (i/2)√(Ω_ν/Ω_μ) M_{μν}.
        for mu in 0..k {
            for nu in 0..k {
                let m = if mu == nu { 0.0 } else { self.coupling_at(mu, nu, t) };
                if m == 0.0 {
                    continue;
                }
                let kappa = I * (0.5 * (self.frequencies[nu] / self.frequencies[mu]).sqrt() * m);
                cs[(mu, nu)] += kappa;
                cs[(nu, mu)] += kappa;
                cu[(nu, mu)] += kappa;
                cu[(mu, nu)] -= kappa;
            }
        }
        (cs, cu, cc)
    }

    /// Interaction-picture coefficients s_{μν}(t), u_{μν}(t) and C(t).
    pub fn interaction_coefficients(&self, t: f64) -> (CMatrix, CMatrix, f64) {
        let (mut cs, mut cu, cc) = self.normal_ordered_coefficients(t);
        let k = self.mode_count();
        for mu in 0..k {
            for nu in 0..k {
                let (wm, wn) = (self.frequencies[mu], self.frequencies[nu]);
                if cs[(mu, nu)] != ZERO {
                    cs[(mu, nu)] *= Complex64::from_polar(1.0, (wm + wn) * t);
                }
                if cu[(mu, nu)] != ZERO {
                    cu[(mu, nu)] *= Complex64::from_polar(1.0, (wm - wn) * t);
                }
            }
        }
        (cs, cu, cc)
    }
}

/// ΔΩ²_1(t) = 2εΩ₁² sin(2ωt) on the lowest mode, no velocity coupling.
pub fn standard_drive(drive: &DriveProfile, spectrum: &CavitySpectrum, modes: usize) -> Result<InteractionSpec> {
    let spec = InteractionSpec::zero(spectrum, modes, drive.duration)?;
    if drive.epsilon == 0.0 {
        return Ok(spec);
    }
    let w1 = spec.frequencies[0];
    spec.with_delta_omega_sq(
        0,
        TimeFunction::Harmonic {
            amplitude: 2.0 * drive.epsilon * w1 * w1,
            frequency: 2.0 * drive.omega,
            phase: 0.0,
        },
    )
}

/// Time average of the (a†_μ)² coefficient of H_I over `grid`.
pub fn mean_pair_coefficient(spec: &InteractionSpec, mode: usize, grid: &TimeGrid) -> Result<Complex64> {
    spec.check_mode(mode)?;
    if grid.duration == 0.0 {
        return Ok(ZERO);
    }
    let integral: Complex64 = quadrature::integrate(grid, |t| spec.interaction_coefficients(t).0[(mode, mode)] * 0.5)?;
    Ok(integral / grid.duration)
}

/// Dense H_I(t) assembled from interaction-picture quadrature matrices.
pub fn interaction_hamiltonian(spec: &InteractionSpec, space: &FockSpace, t: f64) -> Result<OperatorMatrix> {
    check_space(spec, space)?;
    let d = space.dimension();
    let mut h = CMatrix::zeros(d, d);
    if !spec.active(t) || spec.is_zero() {
        return Ok(OperatorMatrix::new(h, None));
    }
    let k = spec.mode_count();
    let mut quads = Vec::with_capacity(k);
    for mode in 0..k {
        let w = spec.frequencies[mode];
        let (a, a_dag) = fock::ladder_ops(space, mode)?;
        let down = a.matrix.map(|z| z * Complex64::from_polar(1.0, -w * t));
        let up = a_dag.matrix.map(|z| z * Complex64::from_polar(1.0, w * t));
        let q = (&down + &up).map(|z| z / (2.0 * w).sqrt());
        let p = (&up - &down).map(|z| z * I * (w / 2.0).sqrt());
        quads.push((q, p));
    }
    for mu in 0..k {
        let d2 = spec.delta_omega_sq_at(mu, t);
        if d2 != 0.0 {
            let q = &quads[mu].0;
            h += (q * q).map(|z| z * (d2 / 2.0));
        }
        for nu in 0..k {
            let m = if mu == nu { 0.0 } else { spec.coupling_at(mu, nu, t) };
            if m != 0.0 {
                let (q, p) = (&quads[mu].0, &quads[nu].1);
                h += (q * p + p * q).map(|z| z * (m / 2.0));
            }
        }
    }
    let scale = h.iter().fold(0.0f64, |m, z| m.max(z.norm())).max(1.0);
    let defect = linalg::hermiticity_defect(&h);
    if defect > 1e-12 * scale {
        return Err(Error::tolerance(format!("interaction Hamiltonian not Hermitian (defect {defect:.3e})")));
    }
    Ok(OperatorMatrix::new(h, None))
}

fn check_space(spec: &InteractionSpec, space: &FockSpace) -> Result<()> {
    if space.mode_count() != spec.mode_count() {
        return Err(Error::DimensionMismatch {
            expected: spec.mode_count(),
            actual: space.mode_count(),
        });
    }
    Ok(())
}

/// Simpson integrals of the (S, U, C) parts of ∫dt H_I over `grid`.
pub fn extract_perturbation_matrices(spec: &InteractionSpec, grid: &TimeGrid) -> Result<PerturbationMatrices> {
    grid.require_even()?;
    let k = spec.mode_count();
    let samples: Vec<(CMatrix, CMatrix, f64)> = grid.times().map(|t| spec.interaction_coefficients(t)).collect();
    let h = grid.step();
    let mut s = CMatrix::zeros(k, k);
    let mut u = CMatrix::zeros(k, k);
    for mu in 0..k {
        for nu in 0..k {
            let sv: Vec<Complex64> = samples.iter().map(|x| x.0[(mu, nu)]).collect();
            let uv: Vec<Complex64> = samples.iter().map(|x| x.1[(mu, nu)]).collect();
            s[(mu, nu)] = quadrature::simpson(&sv, h)?;
            u[(mu, nu)] = quadrature::simpson(&uv, h)?;
        }
    }
    let cv: Vec<f64> = samples.iter().map(|x| x.2).collect();
    let c = quadrature::simpson(&cv, h)?;
    PerturbationMatrices::new(s, u, Complex64::new(c, 0.0))
}

/// Knobs for [`evolve`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolveOptions {
    /// Record observables every this many steps (the last step is always recorded).
    pub record_every: usize,
    /// Escalate cutoff saturation to an error.
    pub strict: bool,
    /// Largest tolerated population of a top Fock level.
    pub saturation_tolerance: f64,
    /// Largest tolerated |Tr ρ − 1|.
    pub trace_tolerance: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            record_every: 1,
            strict: true,
            saturation_tolerance: 1e-6,
            trace_tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionResult {
    pub times: Vec<f64>,
    /// occupations[sample][mode]
    pub occupations: Vec<Vec<f64>>,
    pub entropy: Vec<f64>,
    pub trace_defect: Vec<f64>,
    /// Largest |Tr ρ − 1| over every step, recorded or not.
    pub max_trace_defect: f64,
    /// Largest top-level population per mode over the recorded samples.
    pub top_level_population: Vec<f64>,
    pub warnings: Vec<String>,
    pub final_state: DensityMatrix,
}

impl EvolutionResult {
    pub fn initial_entropy(&self) -> f64 {
        self.entropy[0]
    }

    /// max |S(t) − S(0)|.
    pub fn entropy_drift(&self) -> f64 {
        let s0 = self.initial_entropy();
        self.entropy.iter().fold(0.0f64, |m, s| m.max((s - s0).abs()))
    }

    /// Entropy drift relative to S(0), or absolute for a pure initial state.
    pub fn relative_entropy_drift(&self) -> f64 {
        let s0 = self.initial_entropy();
        if s0 > 0.0 {
            self.entropy_drift() / s0
        } else {
            self.entropy_drift()
        }
    }

    pub fn final_occupations(&self) -> &[f64] {
        self.occupations.last().expect("evolution records at least one sample")
    }
}

/// (μ, ν, (flat index, coefficient, ...)) ladder entries of one monomial.
type Entries<E> = Vec<(usize, usize, Vec<E>)>;

/// Sparse form of H_I(t): a fixed nonzero pattern whose values are
/// recombined from the active ladder monomials at each time.
struct Generator<'a> {
    spec: &'a InteractionSpec,
    dimension: usize,
    pattern: Vec<(usize, usize)>,
    /// (μ, ν, entries) for pair creation ½ s_{μν} a†a† (μ = ν) or s_{μν} a†_μ a†_ν (μ < ν).
    pairs: Entries<(usize, f64, usize)>,
    /// (μ, ν, entries) for u_{μν} a†_μ a_ν.
    hops: Entries<(usize, f64)>,
}

impl<'a> Generator<'a> {
    fn new(spec: &'a InteractionSpec, space: &FockSpace) -> Result<Self> {
        let k = spec.mode_count();
        let mut slots: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pattern = Vec::new();
        let mut slot = |r: usize, c: usize, pattern: &mut Vec<(usize, usize)>| {
            *slots.entry((r, c)).or_insert_with(|| {
                pattern.push((r, c));
                pattern.len() - 1
            })
        };
        let mut pairs = Vec::new();
        let mut hops = Vec::new();
        for mu in 0..k {
            for nu in mu..k {
                let active = if mu == nu {
                    !spec.delta_omega_sq[mu].is_zero()
                } else {
                    !spec.coupling[mu][nu].is_zero()
                };
                if !active {
                    continue;
                }
                let entries = fock::monomial_elements(space, &[mu, nu], &[])?
                    .into_iter()
                    .map(|(r, c, v)| (slot(r, c, &mut pattern), v, slot(c, r, &mut pattern)))
                    .collect();
                pairs.push((mu, nu, entries));
            }
        }
        for mu in 0..k {
            for nu in 0..k {
                let active = if mu == nu {
                    !spec.delta_omega_sq[mu].is_zero()
                } else {
                    !spec.coupling[mu][nu].is_zero()
                };
                if !active {
                    continue;
                }
                let entries = fock::monomial_elements(space, &[mu], &[nu])?
                    .into_iter()
                    .map(|(r, c, v)| (slot(r, c, &mut pattern), v))
                    .collect();
                hops.push((mu, nu, entries));
            }
        }
        Ok(Self {
            spec,
            dimension: space.dimension(),
            pattern,
            pairs,
            hops,
        })
    }

    fn values(&self, t: f64) -> Vec<Complex64> {
        let mut values = vec![ZERO; self.pattern.len()];
        if !self.spec.active(t) {
            return values;
        }
        let (s, u, _) = self.spec.interaction_coefficients(t);
        for (mu, nu, entries) in &self.pairs {
            let coef = if mu == nu { s[(*mu, *nu)] * 0.5 } else { s[(*mu, *nu)] };
            let conj = coef.conj();
            for &(up, v, down) in entries {
                values[up] += coef * v;
                values[down] += conj * v;
            }
        }
        for (mu, nu, entries) in &self.hops {
            let coef = u[(*mu, *nu)];
            for &(idx, v) in entries {
                values[idx] += coef * v;
            }
        }
        values
    }

    /// −i[H, ρ] = −i(X − X†) with X = Hρ, for Hermitian H and ρ.
    fn rhs(&self, values: &[Complex64], rho: &CMatrix) -> CMatrix {
        let d = self.dimension;
        let mut x = CMatrix::zeros(d, d);
        {
            let src = rho.as_slice();
            let dst = x.as_mut_slice();
            for c in 0..d {
                let col_in = &src[c * d..(c + 1) * d];
                let col_out = &mut dst[c * d..(c + 1) * d];
                for (&(r, k), &v) in self.pattern.iter().zip(values) {
                    if v != ZERO {
                        col_out[r] += v * col_in[k];
                    }
                }
            }
        }
        let mut out = CMatrix::zeros(d, d);
        for j in 0..d {
            for i in 0..d {
                out[(i, j)] = -I * (x[(i, j)] - x[(j, i)].conj());
            }
        }
        out
    }
}

fn axpy(base: &CMatrix, h: f64, k: &CMatrix) -> CMatrix {
    base + k.map(|z| z * h)
}

/// Integrates i dρ/dt = [H_I(t), ρ] with classic fixed-step RK4 on `grid`.
pub fn evolve(
    spec: &InteractionSpec,
    space: &FockSpace,
    rho0: &DensityMatrix,
    grid: &TimeGrid,
    options: &EvolveOptions,
) -> Result<EvolutionResult> {
    check_space(spec, space)?;
    if rho0.dimension() != space.dimension() {
        return Err(Error::DimensionMismatch {
            expected: space.dimension(),
            actual: rho0.dimension(),
        });
    }
    if options.record_every == 0 {
        return Err(Error::domain("record_every must be >= 1"));
    }
    let k = spec.mode_count();
    let mut result = EvolutionResult {
        times: Vec::new(),
        occupations: Vec::new(),
        entropy: Vec::new(),
        trace_defect: Vec::new(),
        max_trace_defect: 0.0,
        top_level_population: vec![0.0; k],
        warnings: Vec::new(),
        final_state: rho0.clone(),
    };
    let record = |result: &mut EvolutionResult, t: f64, rho: &CMatrix| -> Result<()> {
        let state = DensityMatrix::from_trusted(rho.clone());
        let occ = (0..k)
            .map(|m| state.mean_occupation(space, m))
            .collect::<Result<Vec<_>>>()?;
        for m in 0..k {
            let top = state.top_level_population(space, m)?;
            result.top_level_population[m] = result.top_level_population[m].max(top);
        }
        result.times.push(t);
        result.occupations.push(occ);
        result.entropy.push(fock::entropy_of(rho)?);
        result.trace_defect.push((rho.trace().re - 1.0).abs());
        Ok(())
    };

    // Nothing moves: skip the arithmetic so the state stays bit-identical.
    let frozen = spec.is_zero() || spec.duration() == 0.0 || grid.duration == 0.0;
    let generator = Generator::new(spec, space)?;
    let mut rho = rho0.matrix().clone();
    record(&mut result, grid.time(0), &rho)?;
    let h = grid.step();
    for step in 0..grid.intervals {
        let t = grid.time(step);
        if !frozen {
            let v0 = generator.values(t);
            let vm = generator.values(t + 0.5 * h);
            let v1 = generator.values(t + h);
            let k1 = generator.rhs(&v0, &rho);
            let k2 = generator.rhs(&vm, &axpy(&rho, 0.5 * h, &k1));
            let k3 = generator.rhs(&vm, &axpy(&rho, 0.5 * h, &k2));
            let k4 = generator.rhs(&v1, &axpy(&rho, h, &k3));
            let update = (&k1 + &k2 * Complex64::new(2.0, 0.0) + &k3 * Complex64::new(2.0, 0.0) + &k4).map(|z| z * (h / 6.0));
            rho = linalg::hermitian_part(&(rho + update));
        }
        let defect = (rho.trace() - Complex64::new(1.0, 0.0)).norm();
        result.max_trace_defect = result.max_trace_defect.max(defect);
        if defect > options.trace_tolerance {
            return Err(Error::tolerance(format!(
                "trace drifted by {defect:.3e} at t = {:.6e}; reduce the step size",
                t + h
            )));
        }
        if (step + 1) % options.record_every == 0 || step + 1 == grid.intervals {
            record(&mut result, grid.time(step + 1), &rho)?;
        }
    }
    for (mode, &top) in result.top_level_population.iter().enumerate() {
        if top > options.saturation_tolerance {
            if options.strict {
                return Err(Error::Truncation {
                    mode,
                    occupation: top,
                    tolerance: options.saturation_tolerance,
                });
            }
            result.warnings.push(format!(
                "mode {mode}: top Fock level reached population {top:.3e}"
            ));
        }
    }
    result.final_state = DensityMatrix::from_trusted(rho);
    Ok(result)
}

/// Final occupations on `grid` and on the refined grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub coarse: Vec<f64>,
    pub fine: Vec<f64>,
    /// max over modes of |fine − coarse| / |fine| (absolute where fine = 0).
    pub relative_change: f64,
}

/// Step-halving self-convergence test of [`evolve`].
pub fn self_convergence(
    spec: &InteractionSpec,
    space: &FockSpace,
    rho0: &DensityMatrix,
    grid: &TimeGrid,
    options: &EvolveOptions,
) -> Result<ConvergenceReport> {
    let coarse_opts = EvolveOptions {
        record_every: grid.intervals,
        ..*options
    };
    let fine_grid = grid.refined();
    let fine_opts = EvolveOptions {
        record_every: fine_grid.intervals,
        ..*options
    };
    let coarse = evolve(spec, space, rho0, grid, &coarse_opts)?.final_occupations().to_vec();
    let fine = evolve(spec, space, rho0, &fine_grid, &fine_opts)?.final_occupations().to_vec();
    let relative_change = coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| if *f != 0.0 { ((f - c) / f).abs() } else { (f - c).abs() })
        .fold(0.0, f64::max);
    Ok(ConvergenceReport {
        coarse,
        fine,
        relative_change,
    })
}
