//! Eigenmode spectra of one-dimensional and cubic cavities, and the
//! enumeration of mode pairs that satisfy the velocity-term resonance
//! condition |Ω_μ ± Ω_ν| = 2Ω₁ for a drive at the fundamental.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{self, NaturalFrequency};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    OneDimensional,
    Cubic,
}

impl std::str::FromStr for Geometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "1d" | "one_dimensional" | "one-dimensional" => Ok(Geometry::OneDimensional),
            "cubic" | "cube" => Ok(Geometry::Cubic),
            other => Err(Error::domain(format!("unknown geometry '{other}'"))),
        }
    }
}

/// A cavity of characteristic size `length` (meters).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryTag {
    pub geometry: Geometry,
    pub length: f64,
}

impl GeometryTag {
    pub fn new(geometry: Geometry, length: f64) -> Result<Self> {
        if !length.is_finite() || length <= 0.0 {
            return Err(Error::domain(format!(
                "cavity length must be positive, got {length} m"
            )));
        }
        Ok(Self { geometry, length })
    }

    /// A one-dimensional cavity whose ladder spacing πc/L equals `spacing`.
    pub fn one_dimensional_with_spacing(spacing: NaturalFrequency) -> Result<Self> {
        Self::new(
            Geometry::OneDimensional,
            std::f64::consts::PI * units::SPEED_OF_LIGHT / spacing.value(),
        )
    }

    /// The ladder unit πc/L.
    pub fn unit_frequency(&self) -> f64 {
        std::f64::consts::PI * units::SPEED_OF_LIGHT / self.length
    }
}

/// Geometric label of a mode: the integer n of a 1D ladder or (n_x, n_y, n_z).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModeLabel {
    Index(u32),
    Triple([u32; 3]),
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModeLabel::Index(n) => write!(f, "({n})"),
            ModeLabel::Triple([x, y, z]) => write!(f, "({x},{y},{z})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub label: ModeLabel,
    pub frequency: NaturalFrequency,
}

/// Eigenfrequencies sorted ascending, ties broken by label order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CavitySpectrum {
    geometry: Option<GeometryTag>,
    modes: Vec<Mode>,
}

impl CavitySpectrum {
    /// A spectrum from explicit modes. Sorted on construction.
    pub fn from_modes(mut modes: Vec<Mode>) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::domain("spectrum must contain at least one mode"));
        }
        for m in &modes {
            NaturalFrequency::positive(m.frequency.value())?;
        }
        sort_modes(&mut modes);
        if modes.windows(2).any(|w| w[0].label == w[1].label) {
            return Err(Error::domain("mode labels must be unique"));
        }
        Ok(Self {
            geometry: None,
            modes,
        })
    }

    /// Single mode of the given frequency, labelled (1).
    pub fn single(omega: NaturalFrequency) -> Result<Self> {
        Self::from_modes(vec![Mode {
            label: ModeLabel::Index(1),
            frequency: NaturalFrequency::positive(omega.value())?,
        }])
    }

    pub fn geometry(&self) -> Option<GeometryTag> {
        self.geometry
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.frequency.value()).collect()
    }

    /// Ω⁰₁ = min{Ω⁰_λ}.
    pub fn fundamental(&self) -> NaturalFrequency {
        self.modes[0].frequency
    }

    /// The lowest `k` modes.
    pub fn truncated(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.modes.len() {
            return Err(Error::domain(format!(
                "cannot keep {k} modes of a {}-mode spectrum",
                self.modes.len()
            )));
        }
        Ok(Self {
            geometry: self.geometry,
            modes: self.modes[..k].to_vec(),
        })
    }
}

fn sort_modes(modes: &mut [Mode]) {
    modes.sort_by(|a, b| {
        a.frequency
            .value()
            .partial_cmp(&b.frequency.value())
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.label.cmp(&b.label))
    });
}

/// Scalar Dirichlet spectrum of the cavity: nπc/L in 1D, and
/// πc/L·√(n_x²+n_y²+n_z²) with every 1 ≤ n_i ≤ `max_index` for the cube.
pub fn build_spectrum(tag: GeometryTag, max_index: u32) -> Result<CavitySpectrum> {
    if max_index < 1 {
        return Err(Error::domain("max_index must be at least 1"));
    }
    let unit = tag.unit_frequency();
    let mut modes = Vec::new();
    match tag.geometry {
        Geometry::OneDimensional => {
            for n in 1..=max_index {
                modes.push(Mode {
                    label: ModeLabel::Index(n),
                    frequency: NaturalFrequency::positive(unit * n as f64)?,
                });
            }
        }
        Geometry::Cubic => {
            for x in 1..=max_index {
                for y in 1..=max_index {
                    for z in 1..=max_index {
                        let sq = (x * x + y * y + z * z) as f64;
                        modes.push(Mode {
                            label: ModeLabel::Triple([x, y, z]),
                            frequency: NaturalFrequency::positive(unit * sq.sqrt())?,
                        });
                    }
                }
            }
        }
    }
    sort_modes(&mut modes);
    Ok(CavitySpectrum {
        geometry: Some(tag),
        modes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResonanceSign {
    Plus,
    Minus,
}

impl fmt::Display for ResonanceSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ResonanceSign::Plus => "plus",
            ResonanceSign::Minus => "minus",
        })
    }
}

/// A mode pair meeting |Ω_μ ± Ω_ν| = 2Ω₁ within tolerance. For the minus
/// branch `mu` is the higher mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonancePair {
    pub mu: ModeLabel,
    pub nu: ModeLabel,
    pub sign: ResonanceSign,
    /// Ω_μ ± Ω_ν − 2Ω₁, rad/s.
    pub residual: f64,
}

impl ResonancePair {
    /// Pairs of distinct modes; only these can be reached by the
    /// antisymmetric velocity coupling.
    pub fn is_intermode(&self) -> bool {
        self.mu != self.nu
    }
}

/// All unordered pairs satisfying the resonance condition. The plus branch
/// admits μ = ν; the minus branch requires μ ≠ ν.
pub fn find_resonance_pairs(spectrum: &CavitySpectrum, tolerance: f64) -> Result<Vec<ResonancePair>> {
    if spectrum.is_empty() {
        return Err(Error::domain("empty spectrum"));
    }
    if tolerance.is_nan() || tolerance < 0.0 {
        return Err(Error::domain(format!("tolerance must be >= 0, got {tolerance}")));
    }
    let target = 2.0 * spectrum.fundamental().value();
    let modes = spectrum.modes();
    let mut pairs = Vec::new();
    for (i, lo) in modes.iter().enumerate() {
        for hi in &modes[i..] {
            let (wl, wh) = (lo.frequency.value(), hi.frequency.value());
            let plus = wh + wl - target;
            if plus.abs() <= tolerance {
                pairs.push(ResonancePair {
                    mu: hi.label,
                    nu: lo.label,
                    sign: ResonanceSign::Plus,
                    residual: plus,
                });
            }
            if hi.label != lo.label {
                let minus = (wh - wl) - target;
                if minus.abs() <= tolerance {
                    pairs.push(ResonancePair {
                        mu: hi.label,
                        nu: lo.label,
                        sign: ResonanceSign::Minus,
                        residual: minus,
                    });
                }
            }
        }
    }
    Ok(pairs)
}

/// Resonant pairs of distinct modes, the ones the velocity term can drive.
pub fn velocity_resonance_pairs(spectrum: &CavitySpectrum, tolerance: f64) -> Result<Vec<ResonancePair>> {
    Ok(find_resonance_pairs(spectrum, tolerance)?
        .into_iter()
        .filter(ResonancePair::is_intermode)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_ladder(n: u32) -> CavitySpectrum {
        let tag = GeometryTag::one_dimensional_with_spacing(NaturalFrequency::positive(1.0).unwrap()).unwrap();
        build_spectrum(tag, n).unwrap()
    }

    #[test]
    fn one_dimensional_ladder() {
        let s = unit_ladder(4);
        let f = s.frequencies();
        for (got, want) in f.iter().zip([1.0, 2.0, 3.0, 4.0]) {
            assert_relative_eq!(*got, want, max_relative = 1e-15);
        }
    }

    #[test]
    fn cubic_lowest_mode() {
        let tag = GeometryTag::new(Geometry::Cubic, 0.01).unwrap();
        let s = build_spectrum(tag, 3).unwrap();
        assert_eq!(s.modes()[0].label, ModeLabel::Triple([1, 1, 1]));
        assert_relative_eq!(s.fundamental().value(), 1.631_290_109_167_840e11, max_relative = 1e-14);
    }

    #[test]
    fn cubic_degeneracy_is_kept_and_ordered() {
        let tag = GeometryTag::new(Geometry::Cubic, std::f64::consts::PI * units::SPEED_OF_LIGHT).unwrap();
        let s = build_spectrum(tag, 2).unwrap();
        assert_eq!(s.len(), 8);
        assert_relative_eq!(s.modes()[0].frequency.value(), 3f64.sqrt(), max_relative = 1e-15);
        let next: Vec<_> = s.modes()[1..4].iter().map(|m| m.label).collect();
        assert_eq!(
            next,
            vec![
                ModeLabel::Triple([1, 1, 2]),
                ModeLabel::Triple([1, 2, 1]),
                ModeLabel::Triple([2, 1, 1])
            ]
        );
        for m in &s.modes()[1..4] {
            assert_relative_eq!(m.frequency.value(), 6f64.sqrt(), max_relative = 1e-15);
        }
        assert!(s.modes()[4].frequency.value() > 6f64.sqrt() * (1.0 + 1e-12));
    }

    #[test]
    fn zero_max_index_rejected() {
        let tag = GeometryTag::new(Geometry::Cubic, 1.0).unwrap();
        assert!(build_spectrum(tag, 0).is_err());
        assert!(GeometryTag::new(Geometry::Cubic, 0.0).is_err());
    }

    #[test]
    fn ladder_resonances_match_enumeration() {
        let s = unit_ladder(6);
        let pairs = find_resonance_pairs(&s, 1e-9).unwrap();
        // Integer oracle: m + n = 2 with m = n = 1, or m - n = 2.
        let mut expected = vec![(1, 1, ResonanceSign::Plus)];
        for m in 1..=6u32 {
            for n in 1..m {
                if m - n == 2 {
                    expected.push((m, n, ResonanceSign::Minus));
                }
            }
        }
        let mut got: Vec<_> = pairs
            .iter()
            .map(|p| match (p.mu, p.nu) {
                (ModeLabel::Index(a), ModeLabel::Index(b)) => (a, b, p.sign),
                _ => unreachable!(),
            })
            .collect();
        let key = |t: &(u32, u32, ResonanceSign)| (t.0, t.1, t.2 == ResonanceSign::Minus);
        got.sort_by_key(key);
        expected.sort_by_key(key);
        assert_eq!(got, expected);
        assert!(pairs.iter().all(|p| p.residual.abs() <= 1e-9));
    }

    #[test]
    fn infinite_tolerance_keeps_every_pair() {
        let s = unit_ladder(5);
        let pairs = find_resonance_pairs(&s, f64::INFINITY).unwrap();
        // 15 plus-branch pairs (with diagonal) + 10 minus-branch pairs.
        assert_eq!(pairs.len(), 15 + 10);
    }

    #[test]
    fn velocity_pairs_exclude_diagonal() {
        let s = unit_ladder(2);
        assert!(velocity_resonance_pairs(&s, 1e-9).unwrap().is_empty());
        let s = unit_ladder(3);
        let v = velocity_resonance_pairs(&s, 1e-9).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].mu, v[0].nu), (ModeLabel::Index(3), ModeLabel::Index(1)));
    }

    #[test]
    fn negative_tolerance_rejected() {
        assert!(find_resonance_pairs(&unit_ladder(2), -1.0).is_err());
    }

    #[test]
    fn spectrum_build_is_deterministic() {
        let tag = GeometryTag::new(Geometry::Cubic, 0.01).unwrap();
        assert_eq!(build_spectrum(tag, 4).unwrap(), build_spectrum(tag, 4).unwrap());
    }
}
