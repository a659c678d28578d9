//! Bose–Einstein statistics of the initial canonical ensemble.

use serde::{Deserialize, Serialize};

use crate::cavity::CavitySpectrum;
use crate::error::{Error, Result};
use crate::units::{NaturalFrequency, Temperature};

fn check_mode(omega: NaturalFrequency) -> Result<f64> {
    let w = omega.value();
    if !w.is_finite() || w <= 0.0 {
        return Err(Error::domain(format!("mode frequency must be positive, got {w}")));
    }
    Ok(w)
}

/// Mean occupation 1/(e^{βω} − 1), evaluated as e^{−βω}/(1 − e^{−βω}).
/// Exactly zero at T = 0.
pub fn bose_occupation(omega: NaturalFrequency, temperature: Temperature) -> Result<f64> {
    let w = check_mode(omega)?;
    if temperature.is_zero() {
        return Ok(0.0);
    }
    let x = w / temperature.angular();
    let boltzmann = (-x).exp();
    Ok(boltzmann / -(-x).exp_m1())
}

/// 1 + 2n, the factor by which a thermal population multiplies pair creation.
pub fn enhancement_factor(omega: NaturalFrequency, temperature: Temperature) -> Result<f64> {
    if temperature.is_zero() {
        check_mode(omega)?;
        return Ok(1.0);
    }
    Ok(1.0 + 2.0 * bose_occupation(omega, temperature)?)
}

/// Standard deviation of the thermal photon number, √(n(n+1)).
pub fn thermal_variance(omega: NaturalFrequency, temperature: Temperature) -> Result<f64> {
    let n = bose_occupation(omega, temperature)?;
    Ok((n * (n + 1.0)).sqrt())
}

/// Per-mode occupations of a spectrum at a fixed temperature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermalEnsemble {
    temperature: Temperature,
    spectrum: CavitySpectrum,
    occupations: Vec<f64>,
}

impl ThermalEnsemble {
    pub fn new(spectrum: CavitySpectrum, temperature: Temperature) -> Result<Self> {
        let occupations = spectrum
            .modes()
            .iter()
            .map(|m| bose_occupation(m.frequency, temperature))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            temperature,
            spectrum,
            occupations,
        })
    }

    /// Vacuum ensemble over the same spectrum.
    pub fn vacuum(spectrum: CavitySpectrum) -> Self {
        let occupations = vec![0.0; spectrum.len()];
        Self {
            temperature: Temperature::ZERO,
            spectrum,
            occupations,
        }
    }

    pub fn temperature(&self) -> Temperature {
        self.temperature
    }

    pub fn spectrum(&self) -> &CavitySpectrum {
        &self.spectrum
    }

    pub fn occupations(&self) -> &[f64] {
        &self.occupations
    }

    pub fn enhancements(&self) -> Vec<f64> {
        self.occupations.iter().map(|n| 1.0 + 2.0 * n).collect()
    }

    pub fn variances(&self) -> Vec<f64> {
        self.occupations.iter().map(|n| (n * (n + 1.0)).sqrt()).collect()
    }

    /// Σ Ω_λ n_λ, the normal-ordered thermal energy.
    pub fn energy(&self) -> f64 {
        self.spectrum
            .modes()
            .iter()
            .zip(&self.occupations)
            .map(|(m, n)| m.frequency.value() * n)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn w(x: f64) -> NaturalFrequency {
        NaturalFrequency::positive(x).unwrap()
    }

    #[test]
    fn vacuum_limit_is_exact() {
        assert_eq!(bose_occupation(w(3.0), Temperature::ZERO).unwrap(), 0.0);
        assert_eq!(enhancement_factor(w(3.0), Temperature::ZERO).unwrap(), 1.0);
        assert_eq!(thermal_variance(w(3.0), Temperature::ZERO).unwrap(), 0.0);
    }

    #[test]
    fn ln2_gives_unit_occupation() {
        let t = Temperature::from_angular(1.0 / std::f64::consts::LN_2).unwrap();
        assert_relative_eq!(bose_occupation(w(1.0), t).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(thermal_variance(w(1.0), t).unwrap(), 2f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn room_temperature_fundamental() {
        // 40-digit Planck evaluation with exact SI constants.
        let t = Temperature::from_kelvin(290.0).unwrap();
        let n = bose_occupation(w(1.46e11), t).unwrap();
        assert_relative_eq!(n, 259.547_569_405_374_935, max_relative = 1e-12);
        assert_relative_eq!(enhancement_factor(w(1.46e11), t).unwrap(), 520.095_138_810_749_871, max_relative = 1e-12);
        assert_relative_eq!(thermal_variance(w(1.46e11), t).unwrap(), 260.047_088_723_644_999, max_relative = 1e-12);
    }

    #[test]
    fn non_positive_frequency_rejected() {
        let t = Temperature::from_kelvin(1.0).unwrap();
        assert!(NaturalFrequency::new(0.0).is_ok());
        assert!(bose_occupation(NaturalFrequency::new(0.0).unwrap(), t).is_err());
        assert!(enhancement_factor(NaturalFrequency::new(0.0).unwrap(), Temperature::ZERO).is_err());
    }

    #[test]
    fn high_temperature_asymptote() {
        let t = Temperature::from_angular(1e6).unwrap();
        let f = enhancement_factor(w(1.0), t).unwrap();
        assert_relative_eq!(f, 2e6, max_relative = 1e-6);
    }

    #[test]
    fn ensemble_occupations_decrease() {
        let spec = crate::cavity::build_spectrum(
            crate::cavity::GeometryTag::one_dimensional_with_spacing(w(1.0)).unwrap(),
            6,
        )
        .unwrap();
        let e = ThermalEnsemble::new(spec.clone(), Temperature::from_angular(2.0).unwrap()).unwrap();
        assert!(e.occupations().windows(2).all(|p| p[1] < p[0]));
        let vac = ThermalEnsemble::new(spec.clone(), Temperature::ZERO).unwrap();
        assert_eq!(vac, ThermalEnsemble::vacuum(spec));
    }

    proptest! {
        #[test]
        fn overflow_safe(x in 1e-3f64..1e4) {
            let t = Temperature::from_angular(1.0).unwrap();
            let n = bose_occupation(w(x), t).unwrap();
            prop_assert!(n.is_finite() && n >= 0.0);
        }

        #[test]
        fn enhancement_is_coth(x in 1e-3f64..30.0) {
            let t = Temperature::from_angular(1.0).unwrap();
            let f = enhancement_factor(w(x), t).unwrap();
            let coth = 1.0 / (x / 2.0).tanh();
            prop_assert!(((f - coth) / coth).abs() <= 1e-12);
        }

        #[test]
        fn variance_bounds(x in 1e-4f64..20.0) {
            let t = Temperature::from_angular(1.0).unwrap();
            let n = bose_occupation(w(x), t).unwrap();
            let s = thermal_variance(w(x), t).unwrap();
            prop_assert!(s >= n);
            if n > 1e3 {
                prop_assert!((s / n - 1.0).abs() < 1e-3);
            }
        }
    }
}
