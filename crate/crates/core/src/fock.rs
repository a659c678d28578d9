//! Truncated multimode Fock space.
//!
//! Basis states are occupation tuples (n_0, …, n_{K−1}) with n_k ≤ N_max,k,
//! flattened with mode 0 as the slowest-varying index. All operators are
//! dense complex matrices over this basis.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::cavity::CavitySpectrum;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::units::Temperature;

/// Default dimension cap for dense operators.
pub const DEFAULT_DIMENSION_CAP: usize = 4096;
/// Largest truncated thermal tail mass accepted by [`thermal_density_matrix`].
pub const TAIL_TOLERANCE: f64 = 1e-6;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockSpace {
    cutoffs: Vec<usize>,
    strides: Vec<usize>,
    dimension: usize,
}

impl FockSpace {
    pub fn new(cutoffs: Vec<usize>) -> Result<Self> {
        Self::with_cap(cutoffs, DEFAULT_DIMENSION_CAP)
    }

    pub fn single_mode(cutoff: usize) -> Result<Self> {
        Self::new(vec![cutoff])
    }

    pub fn with_cap(cutoffs: Vec<usize>, cap: usize) -> Result<Self> {
        if cutoffs.is_empty() {
            return Err(Error::domain("Fock space needs at least one mode"));
        }
        if cutoffs.iter().any(|&c| c < 1) {
            return Err(Error::domain("every Fock cutoff must be >= 1"));
        }
        let mut dimension = 1usize;
        for &c in &cutoffs {
            dimension = dimension.saturating_mul(c + 1);
        }
        if dimension > cap {
            return Err(Error::DimensionCap { dimension, cap });
        }
        let mut strides = vec![1usize; cutoffs.len()];
        for k in (0..cutoffs.len() - 1).rev() {
            strides[k] = strides[k + 1] * (cutoffs[k + 1] + 1);
        }
        Ok(Self {
            cutoffs,
            strides,
            dimension,
        })
    }

    pub fn mode_count(&self) -> usize {
        self.cutoffs.len()
    }

    pub fn cutoffs(&self) -> &[usize] {
        &self.cutoffs
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn index_of(&self, occupations: &[usize]) -> Result<usize> {
        if occupations.len() != self.mode_count() {
            return Err(Error::DimensionMismatch {
                expected: self.mode_count(),
                actual: occupations.len(),
            });
        }
        let mut idx = 0;
        for (k, &n) in occupations.iter().enumerate() {
            if n > self.cutoffs[k] {
                return Err(Error::domain(format!(
                    "occupation {n} exceeds cutoff {} of mode {k}",
                    self.cutoffs[k]
                )));
            }
            idx += n * self.strides[k];
        }
        Ok(idx)
    }

    pub fn occupations_of(&self, index: usize) -> Vec<usize> {
        self.cutoffs
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| (index / s) % (c + 1))
            .collect()
    }

    #[inline]
    pub(crate) fn occupation(&self, index: usize, mode: usize) -> usize {
        (index / self.strides[mode]) % (self.cutoffs[mode] + 1)
    }

    #[inline]
    pub(crate) fn stride(&self, mode: usize) -> usize {
        self.strides[mode]
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.mode_count() {
            return Err(Error::domain(format!(
                "mode {mode} out of range for a {}-mode space",
                self.mode_count()
            )));
        }
        Ok(())
    }

    fn check_dimension(&self, m: &CMatrix) -> Result<()> {
        if m.nrows() != self.dimension || m.ncols() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                actual: m.nrows(),
            });
        }
        Ok(())
    }
}

/// A dense operator, optionally annotated with the mode it acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub matrix: CMatrix,
    pub mode: Option<usize>,
}

impl OperatorMatrix {
    pub fn new(matrix: CMatrix, mode: Option<usize>) -> Self {
        Self { matrix, mode }
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.matrix.adjoint(), self.mode)
    }
}

/// Matrix elements ⟨row| a†_{c_1}…a†_{c_m} a_{d_1}…a_{d_n} |col⟩ of a
/// normal-ordered ladder monomial, as (row, col, value) triplets. Raising
/// past the cutoff annihilates the state, matching products of the
/// truncated ladder matrices.
pub fn monomial_elements(space: &FockSpace, creators: &[usize], annihilators: &[usize]) -> Result<Vec<(usize, usize, f64)>> {
    for &m in creators.iter().chain(annihilators) {
        space.check_mode(m)?;
    }
    let mut out = Vec::new();
    'basis: for col in 0..space.dimension() {
        let mut occ = space.occupations_of(col);
        let mut amp = 1.0f64;
        for &m in annihilators.iter().rev() {
            if occ[m] == 0 {
                continue 'basis;
            }
            amp *= (occ[m] as f64).sqrt();
            occ[m] -= 1;
        }
        for &m in creators.iter().rev() {
            if occ[m] == space.cutoffs[m] {
                continue 'basis;
            }
            occ[m] += 1;
            amp *= (occ[m] as f64).sqrt();
        }
        out.push((space.index_of(&occ)?, col, amp));
    }
    Ok(out)
}

fn dense_from_elements(space: &FockSpace, elements: &[(usize, usize, f64)]) -> CMatrix {
    let mut m = CMatrix::zeros(space.dimension(), space.dimension());
    for &(r, c, v) in elements {
        m[(r, c)] += Complex64::new(v, 0.0);
    }
    m
}

/// Annihilation and creation operators of `mode`.
pub fn ladder_ops(space: &FockSpace, mode: usize) -> Result<(OperatorMatrix, OperatorMatrix)> {
    space.check_mode(mode)?;
    let d = space.dimension();
    let stride = space.stride(mode);
    let mut a = CMatrix::zeros(d, d);
    for col in 0..d {
        let n = space.occupation(col, mode);
        if n > 0 {
            a[(col - stride, col)] = Complex64::new((n as f64).sqrt(), 0.0);
        }
    }
    let a_dag = a.adjoint();
    Ok((OperatorMatrix::new(a, Some(mode)), OperatorMatrix::new(a_dag, Some(mode))))
}

pub fn number_operator(space: &FockSpace, mode: usize) -> Result<OperatorMatrix> {
    space.check_mode(mode)?;
    let d = space.dimension();
    let diag = DVector::from_iterator(d, (0..d).map(|i| Complex64::new(space.occupation(i, mode) as f64, 0.0)));
    Ok(OperatorMatrix::new(CMatrix::from_diagonal(&diag), Some(mode)))
}

/// q = (a + a†)/√(2ω), p = i√(ω/2)(a† − a).
pub fn quadrature_ops(space: &FockSpace, mode: usize, omega: f64) -> Result<(OperatorMatrix, OperatorMatrix)> {
    if !omega.is_finite() || omega <= 0.0 {
        return Err(Error::domain(format!("quadrature frequency must be positive, got {omega}")));
    }
    let (a, a_dag) = ladder_ops(space, mode)?;
    let q = (&a.matrix + &a_dag.matrix).map(|z| z / (2.0 * omega).sqrt());
    let p = (&a_dag.matrix - &a.matrix).map(|z| z * Complex64::new(0.0, (omega / 2.0).sqrt()));
    Ok((OperatorMatrix::new(q, Some(mode)), OperatorMatrix::new(p, Some(mode))))
}

/// Σ_λ Ω_λ a†_λ a_λ over the first K modes of `spectrum`.
pub fn normal_ordered_energy(space: &FockSpace, spectrum: &CavitySpectrum) -> Result<OperatorMatrix> {
    let freqs = mode_frequencies(space, spectrum)?;
    let d = space.dimension();
    let diag = DVector::from_iterator(
        d,
        (0..d).map(|i| {
            let e: f64 = freqs
                .iter()
                .enumerate()
                .map(|(k, w)| w * space.occupation(i, k) as f64)
                .sum();
            Complex64::new(e, 0.0)
        }),
    );
    Ok(OperatorMatrix::new(CMatrix::from_diagonal(&diag), None))
}

fn mode_frequencies(space: &FockSpace, spectrum: &CavitySpectrum) -> Result<Vec<f64>> {
    if spectrum.len() < space.mode_count() {
        return Err(Error::DimensionMismatch {
            expected: space.mode_count(),
            actual: spectrum.len(),
        });
    }
    Ok(spectrum.frequencies()[..space.mode_count()].to_vec())
}

/// A Hermitian, unit-trace, positive semidefinite state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    pub const HERMITIAN_TOLERANCE: f64 = 1e-12;
    pub const TRACE_TOLERANCE: f64 = 1e-10;
    pub const POSITIVITY_TOLERANCE: f64 = 1e-10;

    /// Validates Hermiticity, trace and positivity.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                actual: matrix.ncols(),
            });
        }
        let h = linalg::hermiticity_defect(&matrix);
        if h > Self::HERMITIAN_TOLERANCE {
            return Err(Error::domain(format!("density matrix not Hermitian (defect {h:.3e})")));
        }
        let tr = matrix.trace();
        if (tr - ONE).norm() > Self::TRACE_TOLERANCE {
            return Err(Error::domain(format!("density matrix trace {tr} is not 1")));
        }
        let min = linalg::hermitian_part(&matrix)
            .symmetric_eigenvalues()
            .iter()
            .fold(f64::INFINITY, |m, &v| m.min(v));
        if min < -Self::POSITIVITY_TOLERANCE {
            return Err(Error::domain(format!("density matrix has negative eigenvalue {min:.3e}")));
        }
        Ok(Self { matrix })
    }

    /// Wraps a matrix the caller guarantees to be a state (evolution output).
    pub(crate) fn from_trusted(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    /// |ψ⟩⟨ψ| for a normalized vector.
    pub fn pure(state: &DVector<Complex64>) -> Result<Self> {
        let norm = state.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::domain(format!("state vector norm {norm} is not 1")));
        }
        Ok(Self {
            matrix: state * state.adjoint(),
        })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Population of the basis state with index `i`.
    pub fn population(&self, i: usize) -> f64 {
        self.matrix[(i, i)].re
    }

    /// Mean occupation of `mode`, read off the diagonal.
    pub fn mean_occupation(&self, space: &FockSpace, mode: usize) -> Result<f64> {
        space.check_mode(mode)?;
        space.check_dimension(&self.matrix)?;
        Ok((0..space.dimension())
            .map(|i| space.occupation(i, mode) as f64 * self.population(i))
            .sum())
    }

    /// Total population on the top Fock level of `mode`.
    pub fn top_level_population(&self, space: &FockSpace, mode: usize) -> Result<f64> {
        space.check_mode(mode)?;
        space.check_dimension(&self.matrix)?;
        let top = space.cutoffs()[mode];
        Ok((0..space.dimension())
            .filter(|&i| space.occupation(i, mode) == top)
            .map(|i| self.population(i))
            .sum())
    }
}

/// The Fock vacuum |0…0⟩⟨0…0|.
pub fn ground_state(space: &FockSpace) -> DensityMatrix {
    let mut m = CMatrix::zeros(space.dimension(), space.dimension());
    m[(0, 0)] = ONE;
    DensityMatrix { matrix: m }
}

/// Smallest cutoff N with geometric tail mass x^{N+1} ≤ `tail` for a mode of
/// mean occupation `mean` (x = n/(n+1)). At least 1.
pub fn required_cutoff(mean: f64, tail: f64) -> usize {
    if mean <= 0.0 {
        return 1;
    }
    let ratio_ln = -(1.0 / mean).ln_1p();
    let levels = (tail.ln() / ratio_ln).ceil();
    (levels as usize).saturating_sub(1).max(1)
}

/// Smallest cutoff used for driven evolution.
pub const MIN_EVOLUTION_CUTOFF: usize = 60;

/// Cutoff for evolving a mode of initial mean `mean` under squeezing `r`.
/// Squeezing stretches one quadrature by e^{r}, so the tail is sized for the
/// effective mean (n + ½)e^{2r} − ½ of the stretched quadrature.
pub fn evolution_cutoff(mean: f64, squeeze: f64) -> usize {
    let stretched = (mean.max(0.0) + 0.5) * (2.0 * squeeze.abs()).exp() - 0.5;
    required_cutoff(stretched, TAIL_TOLERANCE).max(MIN_EVOLUTION_CUTOFF)
}

/// exp(−βĤ₀)/Z₀ restricted to the truncated basis and renormalized. The
/// truncated tail of every mode must be below [`TAIL_TOLERANCE`].
pub fn thermal_density_matrix(space: &FockSpace, spectrum: &CavitySpectrum, temperature: Temperature) -> Result<DensityMatrix> {
    let freqs = mode_frequencies(space, spectrum)?;
    if temperature.is_zero() {
        return Ok(ground_state(space));
    }
    let mut ratios = Vec::with_capacity(freqs.len());
    for (k, &w) in freqs.iter().enumerate() {
        let x = w / temperature.angular();
        let ratio = (-x).exp();
        let cutoff = space.cutoffs()[k];
        let tail = (-(cutoff as f64 + 1.0) * x).exp();
        if tail > TAIL_TOLERANCE {
            let mean = ratio / -(-x).exp_m1();
            return Err(Error::CutoffTooSmall {
                mode: k,
                cutoff,
                required: required_cutoff(mean, TAIL_TOLERANCE),
                tail_mass: tail,
                tolerance: TAIL_TOLERANCE,
            });
        }
        ratios.push(x);
    }
    let d = space.dimension();
    let weights: Vec<f64> = (0..d)
        .map(|i| {
            let exponent: f64 = ratios
                .iter()
                .enumerate()
                .map(|(k, x)| x * space.occupation(i, k) as f64)
                .sum();
            (-exponent).exp()
        })
        .collect();
    let z: f64 = weights.iter().sum();
    let diag = DVector::from_iterator(d, weights.iter().map(|w| Complex64::new(w / z, 0.0)));
    Ok(DensityMatrix {
        matrix: CMatrix::from_diagonal(&diag),
    })
}

/// Unitarity defect above which a squeeze operator is rejected.
pub const SQUEEZE_UNITARITY_TOLERANCE: f64 = 1e-6;

/// exp((r/2)[(a†)² − a²]) on `mode`.
pub fn squeeze_operator(space: &FockSpace, mode: usize, r: f64) -> Result<OperatorMatrix> {
    if !r.is_finite() {
        return Err(Error::domain("squeeze parameter must be finite"));
    }
    if r == 0.0 {
        space.check_mode(mode)?;
        let d = space.dimension();
        return Ok(OperatorMatrix::new(CMatrix::identity(d, d), Some(mode)));
    }
    let up = monomial_elements(space, &[mode, mode], &[])?;
    let down = monomial_elements(space, &[], &[mode, mode])?;
    let generator = dense_from_elements(space, &up) - dense_from_elements(space, &down);
    let s = linalg::expm(&generator.map(|z| z * (r / 2.0)))?;
    let defect = linalg::unitarity_defect(&s);
    if defect > SQUEEZE_UNITARITY_TOLERANCE {
        return Err(Error::tolerance(format!(
            "squeeze operator unitarity defect {defect:.3e} at r = {r}"
        )));
    }
    Ok(OperatorMatrix::new(s, Some(mode)))
}

/// U ρ U†.
pub fn conjugate(u: &OperatorMatrix, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if u.dimension() != rho.dimension() {
        return Err(Error::DimensionMismatch {
            expected: rho.dimension(),
            actual: u.dimension(),
        });
    }
    let m = &u.matrix * &rho.matrix * u.matrix.adjoint();
    Ok(DensityMatrix {
        matrix: linalg::hermitian_part(&m),
    })
}

/// Tr(op·ρ).
pub fn expectation(op: &OperatorMatrix, rho: &DensityMatrix) -> Result<Complex64> {
    if op.dimension() != rho.dimension() {
        return Err(Error::DimensionMismatch {
            expected: rho.dimension(),
            actual: op.dimension(),
        });
    }
    Ok(linalg::trace_product(&op.matrix, &rho.matrix))
}

/// Imaginary residue tolerated for the expectation of a Hermitian operator.
pub const EXPECTATION_IMAG_TOLERANCE: f64 = 1e-10;

/// Real expectation of a Hermitian operator.
pub fn expectation_real(op: &OperatorMatrix, rho: &DensityMatrix) -> Result<f64> {
    let v = expectation(op, rho)?;
    if v.im.abs() > EXPECTATION_IMAG_TOLERANCE * v.re.abs().max(1.0) {
        return Err(Error::tolerance(format!(
            "expectation has imaginary residue {:.3e}; operator not Hermitian?",
            v.im
        )));
    }
    Ok(v.re)
}

/// −Σ λ ln λ over the eigenvalues of ρ, clamped at zero.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    entropy_of(&rho.matrix)
}

pub(crate) fn entropy_of(m: &CMatrix) -> Result<f64> {
    let defect = linalg::hermiticity_defect(m);
    if defect > 1e-10 {
        return Err(Error::domain(format!("entropy of a non-Hermitian matrix (defect {defect:.3e})")));
    }
    if is_diagonal(m) {
        return Ok(m.diagonal().iter().map(|z| entropy_term(z.re)).sum());
    }
    Ok(linalg::hermitian_part(m)
        .symmetric_eigenvalues()
        .iter()
        .map(|&l| entropy_term(l))
        .sum())
}

fn is_diagonal(m: &CMatrix) -> bool {
    let n = m.nrows();
    (0..n).all(|j| (0..n).all(|i| i == j || m[(i, j)] == ZERO))
}

#[inline]
fn entropy_term(lambda: f64) -> f64 {
    let l = lambda.max(0.0);
    if l == 0.0 {
        0.0
    } else {
        -l * l.ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::NaturalFrequency;
    use approx::assert_relative_eq;

    fn unit_mode() -> CavitySpectrum {
        CavitySpectrum::single(NaturalFrequency::positive(1.0).unwrap()).unwrap()
    }

    fn ln2_temperature() -> Temperature {
        Temperature::from_angular(1.0 / std::f64::consts::LN_2).unwrap()
    }

    #[test]
    fn basis_index_is_bijective() {
        let s = FockSpace::new(vec![2, 3, 1]).unwrap();
        assert_eq!(s.dimension(), 24);
        for i in 0..s.dimension() {
            assert_eq!(s.index_of(&s.occupations_of(i)).unwrap(), i);
        }
    }

    #[test]
    fn space_validation() {
        assert!(FockSpace::new(vec![]).is_err());
        assert!(FockSpace::new(vec![0]).is_err());
        assert!(matches!(
            FockSpace::new(vec![63, 63, 63]),
            Err(Error::DimensionCap { dimension: 262_144, cap: 4096 })
        ));
    }

    #[test]
    fn ladder_entries_single_mode() {
        let s = FockSpace::single_mode(2).unwrap();
        let (a, a_dag) = ladder_ops(&s, 0).unwrap();
        assert_eq!(a.matrix[(0, 1)].re, 1.0);
        assert_relative_eq!(a.matrix[(1, 2)].re, 2f64.sqrt());
        let nonzero = a.matrix.iter().filter(|z| z.norm() > 0.0).count();
        assert_eq!(nonzero, 2);
        assert_eq!(a_dag.matrix, a.matrix.adjoint());
        let n = &a_dag.matrix * &a.matrix;
        for k in 0..3 {
            assert_relative_eq!(n[(k, k)].re, k as f64, epsilon = 1e-15);
        }
        assert!(ladder_ops(&s, 1).is_err());
    }

    #[test]
    fn commutator_on_interior_subspace() {
        let s = FockSpace::new(vec![3, 4]).unwrap();
        for mode in 0..2 {
            let (a, a_dag) = ladder_ops(&s, mode).unwrap();
            let comm = &a.matrix * &a_dag.matrix - &a_dag.matrix * &a.matrix;
            for i in 0..s.dimension() {
                for j in 0..s.dimension() {
                    let top = s.occupation(i, mode) == s.cutoffs()[mode];
                    let want = if i == j && !top { 1.0 } else if i == j { -(s.cutoffs()[mode] as f64) } else { 0.0 };
                    assert_relative_eq!(comm[(i, j)].re, want, epsilon = 1e-12);
                    assert!(comm[(i, j)].im.abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn monomials_match_dense_products() {
        let s = FockSpace::new(vec![3, 2]).unwrap();
        let (a0, c0) = ladder_ops(&s, 0).unwrap();
        let (a1, c1) = ladder_ops(&s, 1).unwrap();
        let cases: Vec<(Vec<usize>, Vec<usize>, CMatrix)> = vec![
            (vec![0, 0], vec![], &c0.matrix * &c0.matrix),
            (vec![], vec![0, 1], &a0.matrix * &a1.matrix),
            (vec![0, 1], vec![], &c0.matrix * &c1.matrix),
            (vec![1], vec![0], &c1.matrix * &a0.matrix),
            (vec![0], vec![0], &c0.matrix * &a0.matrix),
        ];
        for (cr, an, dense) in cases {
            let m = dense_from_elements(&s, &monomial_elements(&s, &cr, &an).unwrap());
            assert!((m - dense).iter().all(|z| z.norm() < 1e-14));
        }
    }

    #[test]
    fn quadrature_conventions() {
        let s = FockSpace::single_mode(12).unwrap();
        let omega = 2.5;
        let (q, p) = quadrature_ops(&s, 0, omega).unwrap();
        let q2 = &q.matrix * &q.matrix;
        assert_relative_eq!(q2[(0, 0)].re, 1.0 / (2.0 * omega), max_relative = 1e-14);
        let comm = &q.matrix * &p.matrix - &p.matrix * &q.matrix;
        for i in 0..12 {
            assert_relative_eq!(comm[(i, i)].im, 1.0, max_relative = 1e-13);
            assert!(comm[(i, i)].re.abs() < 1e-14);
        }
        let (q4, _) = quadrature_ops(&s, 0, 4.0 * omega).unwrap();
        assert!((q4.matrix.map(|z| z * 2.0) - &q.matrix).iter().all(|z| z.norm() < 1e-14));
        assert!(quadrature_ops(&s, 0, 0.0).is_err());
    }

    #[test]
    fn zero_temperature_is_ground_projector() {
        let s = FockSpace::single_mode(5).unwrap();
        let rho = thermal_density_matrix(&s, &unit_mode(), Temperature::ZERO).unwrap();
        assert_eq!(rho, ground_state(&s));
    }

    #[test]
    fn thermal_state_matches_geometric_law() {
        let s = FockSpace::single_mode(40).unwrap();
        let rho = thermal_density_matrix(&s, &unit_mode(), ln2_temperature()).unwrap();
        // Geometric oracle: p(n) = (1/2)^{n+1}, renormalized over n <= 40.
        let z: f64 = (0..=40).map(|n| 0.5f64.powi(n + 1)).sum();
        for n in 0..=40 {
            assert_relative_eq!(rho.population(n as usize), 0.5f64.powi(n + 1) / z, max_relative = 1e-12);
        }
        assert_relative_eq!(rho.trace().re, 1.0, epsilon = 1e-14);
        let n_op = number_operator(&s, 0).unwrap();
        let mean = expectation_real(&n_op, &rho).unwrap();
        assert!((mean - 1.0).abs() < TAIL_TOLERANCE);
        assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());
    }

    #[test]
    fn cutoff_too_small_names_requirement() {
        let s = FockSpace::single_mode(5).unwrap();
        match thermal_density_matrix(&s, &unit_mode(), ln2_temperature()) {
            Err(Error::CutoffTooSmall { required, .. }) => {
                assert_eq!(required, 19);
                let ok = FockSpace::single_mode(required).unwrap();
                assert!(thermal_density_matrix(&ok, &unit_mode(), ln2_temperature()).is_ok());
                let short = FockSpace::single_mode(required - 1).unwrap();
                assert!(thermal_density_matrix(&short, &unit_mode(), ln2_temperature()).is_err());
            }
            other => panic!("expected cutoff error, got {other:?}"),
        }
    }

    #[test]
    fn normal_ordered_energy_of_thermal_state() {
        let spectrum = crate::cavity::build_spectrum(
            crate::cavity::GeometryTag::one_dimensional_with_spacing(NaturalFrequency::positive(1.0).unwrap()).unwrap(),
            2,
        )
        .unwrap();
        let t = Temperature::from_angular(0.8).unwrap();
        let s = FockSpace::new(vec![14, 8]).unwrap();
        let rho = thermal_density_matrix(&s, &spectrum, t).unwrap();
        let h0 = normal_ordered_energy(&s, &spectrum).unwrap();
        let ensemble = crate::thermal::ThermalEnsemble::new(spectrum, t).unwrap();
        assert!((expectation_real(&h0, &rho).unwrap() - ensemble.energy()).abs() < 1e-5);
    }

    #[test]
    fn squeeze_identity_and_inverse() {
        let s = FockSpace::single_mode(40).unwrap();
        let id = squeeze_operator(&s, 0, 0.0).unwrap();
        assert_eq!(id.matrix, CMatrix::identity(41, 41));
        let plus = squeeze_operator(&s, 0, 0.7).unwrap();
        let minus = squeeze_operator(&s, 0, -0.7).unwrap();
        let prod = &plus.matrix * &minus.matrix;
        assert!((prod - CMatrix::identity(41, 41)).iter().all(|z| z.norm() < 1e-8));
    }

    #[test]
    fn squeezed_vacuum_photon_number() {
        let s = FockSpace::single_mode(40).unwrap();
        let sq = squeeze_operator(&s, 0, 0.5).unwrap();
        let rho = conjugate(&sq, &ground_state(&s)).unwrap();
        let n = expectation_real(&number_operator(&s, 0).unwrap(), &rho).unwrap();
        assert_relative_eq!(n, 0.271_540_317_407_621_89, max_relative = 1e-10);
    }

    #[test]
    fn squeeze_columns_are_normalized() {
        let s = FockSpace::single_mode(60).unwrap();
        for r in [0.3, 1.0, 1.5] {
            let sq = squeeze_operator(&s, 0, r).unwrap();
            for col in sq.matrix.column_iter() {
                assert!((col.norm() - 1.0).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn expectation_checks_dimensions() {
        let s = FockSpace::single_mode(3).unwrap();
        let id = OperatorMatrix::new(CMatrix::identity(4, 4), None);
        assert_relative_eq!(expectation_real(&id, &ground_state(&s)).unwrap(), 1.0);
        let wrong = OperatorMatrix::new(CMatrix::identity(3, 3), None);
        assert!(expectation(&wrong, &ground_state(&s)).is_err());
        let n = number_operator(&s, 0).unwrap();
        assert_eq!(expectation_real(&n, &ground_state(&s)).unwrap(), 0.0);
    }

    #[test]
    fn entropy_values() {
        let s = FockSpace::single_mode(60).unwrap();
        assert_eq!(von_neumann_entropy(&ground_state(&s)).unwrap(), 0.0);
        let rho = thermal_density_matrix(&s, &unit_mode(), ln2_temperature()).unwrap();
        assert_relative_eq!(von_neumann_entropy(&rho).unwrap(), 2.0 * std::f64::consts::LN_2, max_relative = 1e-10);

        let d = 7;
        let mixed = DensityMatrix::new(CMatrix::identity(d, d).map(|z| z / d as f64)).unwrap();
        assert_relative_eq!(von_neumann_entropy(&mixed).unwrap(), (d as f64).ln(), max_relative = 1e-14);

        // Entropy is unitarily invariant: squeezing a thermal state keeps it.
        let sq = squeeze_operator(&s, 0, 0.3).unwrap();
        let small = thermal_density_matrix(&s, &unit_mode(), Temperature::from_angular(0.5).unwrap()).unwrap();
        let squeezed = conjugate(&sq, &small).unwrap();
        assert_relative_eq!(
            von_neumann_entropy(&squeezed).unwrap(),
            von_neumann_entropy(&small).unwrap(),
            max_relative = 1e-8
        );
    }

    #[test]
    fn invalid_density_matrices_rejected() {
        let mut m = CMatrix::identity(2, 2).map(|z| z * 0.5);
        m[(0, 1)] = Complex64::new(0.1, 0.0);
        assert!(DensityMatrix::new(m.clone()).is_err());
        m[(1, 0)] = Complex64::new(0.1, 0.0);
        assert!(DensityMatrix::new(m).is_ok());
        assert!(DensityMatrix::new(CMatrix::identity(2, 2)).is_err());
        let neg = CMatrix::from_diagonal(&DVector::from_vec(vec![Complex64::new(1.5, 0.0), Complex64::new(-0.5, 0.0)]));
        assert!(DensityMatrix::new(neg).is_err());
    }
}
