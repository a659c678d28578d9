//! Conversions between SI inputs and natural units (ħ = c = k_B = 1).
//!
//! Every frequency-like quantity (mode frequencies, temperatures, energies)
//! is carried internally as an angular frequency in rad/s. Times are in
//! seconds and lengths in light-seconds once they leave this module.

use serde::{Deserialize, Serialize};

use crate::cavity::Geometry;
use crate::error::{Error, Result};

/// Boltzmann constant, J/K (exact SI).
pub const BOLTZMANN: f64 = 1.380649e-23;
/// Planck constant, J·s (exact SI).
pub const PLANCK: f64 = 6.62607015e-34;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = PLANCK / (2.0 * std::f64::consts::PI);
/// Speed of light in vacuum, m/s (exact SI).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// An angular frequency in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct NaturalFrequency(f64);

impl NaturalFrequency {
    /// Accepts any finite, non-negative value. Zero is allowed so that a
    /// zero temperature can be expressed on the same scale.
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::domain(format!(
                "frequency must be finite and non-negative, got {value}"
            )));
        }
        Ok(Self(value))
    }

    /// Strictly positive frequency, as required for a physical mode.
    pub fn positive(value: f64) -> Result<Self> {
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::domain(format!(
                "mode frequency must be finite and positive, got {value}"
            )));
        }
        Ok(Self(value))
    }

    /// Convenience for the "X GHz" angular convention: X·1e9 rad/s.
    pub fn from_ghz_angular(ghz: f64) -> Result<Self> {
        Self::positive(ghz * 1e9)
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

/// A temperature, stored both in kelvin and on the angular-frequency scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Temperature {
    kelvin: f64,
    /// k_B·T/ħ in rad/s.
    angular: f64,
}

impl Temperature {
    pub const ZERO: Temperature = Temperature {
        kelvin: 0.0,
        angular: 0.0,
    };

    pub fn from_kelvin(kelvin: f64) -> Result<Self> {
        let angular = kelvin_to_angular(kelvin)?.value();
        Ok(Self { kelvin, angular })
    }

    /// Temperature given directly on the rad/s scale.
    pub fn from_angular(angular: f64) -> Result<Self> {
        let angular = NaturalFrequency::new(angular)?.value();
        Ok(Self {
            kelvin: angular_to_kelvin(NaturalFrequency(angular)),
            angular,
        })
    }

    /// The temperature at which a mode of frequency `omega` has mean
    /// occupation `occupation`: T = ω / ln(1 + 1/n).
    pub fn for_occupation(omega: NaturalFrequency, occupation: f64) -> Result<Self> {
        if !occupation.is_finite() || occupation < 0.0 {
            return Err(Error::domain(format!(
                "occupation must be finite and non-negative, got {occupation}"
            )));
        }
        if occupation == 0.0 {
            return Ok(Self::ZERO);
        }
        Self::from_angular(omega.value() / (1.0 / occupation).ln_1p())
    }

    #[inline]
    pub fn kelvin(self) -> f64 {
        self.kelvin
    }

    #[inline]
    pub fn angular(self) -> f64 {
        self.angular
    }

    /// β = 1/T in seconds; `+inf` at zero temperature.
    pub fn beta(self) -> f64 {
        if self.is_zero() {
            f64::INFINITY
        } else {
            1.0 / self.angular
        }
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.angular == 0.0
    }
}

/// k_B·T/ħ in rad/s. Exactly zero for 0 K.
pub fn kelvin_to_angular(kelvin: f64) -> Result<NaturalFrequency> {
    if !kelvin.is_finite() || kelvin < 0.0 {
        return Err(Error::domain(format!(
            "temperature must be finite and non-negative, got {kelvin} K"
        )));
    }
    if kelvin == 0.0 {
        return Ok(NaturalFrequency(0.0));
    }
    NaturalFrequency::new(BOLTZMANN * kelvin / HBAR)
}

pub fn angular_to_kelvin(angular: NaturalFrequency) -> f64 {
    if angular.0 == 0.0 {
        return 0.0;
    }
    HBAR * angular.0 / BOLTZMANN
}

/// Lowest eigenfrequency of a cavity of size `length` (meters).
pub fn length_to_fundamental(length: f64, geometry: Geometry) -> Result<NaturalFrequency> {
    if !length.is_finite() || length <= 0.0 {
        return Err(Error::domain(format!(
            "cavity length must be positive, got {length} m"
        )));
    }
    let base = std::f64::consts::PI * SPEED_OF_LIGHT / length;
    let omega = match geometry {
        Geometry::OneDimensional => base,
        Geometry::Cubic => 3f64.sqrt() * base,
    };
    NaturalFrequency::positive(omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn zero_kelvin_is_exact_zero() {
        assert_eq!(kelvin_to_angular(0.0).unwrap().value(), 0.0);
        let t = Temperature::from_kelvin(0.0).unwrap();
        assert!(t.is_zero());
        assert_eq!(t.beta(), f64::INFINITY);
    }

    #[test]
    fn kelvin_conversion_matches_codata() {
        // k_B·T/ħ evaluated at 40 digits with the exact SI constants.
        assert_relative_eq!(
            kelvin_to_angular(290.0).unwrap().value(),
            3.796_689_834_682_681e13,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            kelvin_to_angular(1.0).unwrap().value(),
            1.309_203_391_269_890e11,
            max_relative = 1e-14
        );
    }

    #[test]
    fn negative_temperature_rejected() {
        assert!(matches!(kelvin_to_angular(-1.0), Err(Error::Domain(_))));
        assert!(kelvin_to_angular(f64::NAN).is_err());
    }

    #[test]
    fn fundamental_frequencies() {
        let cubic = length_to_fundamental(0.01, Geometry::Cubic).unwrap().value();
        assert_relative_eq!(cubic, 1.631_290_109_167_840e11, max_relative = 1e-14);

        let unit = length_to_fundamental(std::f64::consts::PI * SPEED_OF_LIGHT, Geometry::OneDimensional)
            .unwrap()
            .value();
        assert_relative_eq!(unit, 1.0, max_relative = 1e-15);

        let doubled = length_to_fundamental(0.02, Geometry::Cubic).unwrap().value();
        assert_relative_eq!(doubled, cubic / 2.0, max_relative = 1e-15);

        assert!(length_to_fundamental(0.0, Geometry::Cubic).is_err());
        assert!(length_to_fundamental(-1.0, Geometry::OneDimensional).is_err());
    }

    #[test]
    fn occupation_temperature_inverts_bose() {
        let omega = NaturalFrequency::positive(1.0).unwrap();
        let t = Temperature::for_occupation(omega, 1.0).unwrap();
        assert_relative_eq!(t.beta() * omega.value(), std::f64::consts::LN_2, max_relative = 1e-15);
    }

    proptest! {
        #[test]
        fn kelvin_round_trip(t in 1e-6f64..1e6) {
            let back = angular_to_kelvin(kelvin_to_angular(t).unwrap());
            prop_assert!(((back - t) / t).abs() <= 1e-12);
        }

        #[test]
        fn conversions_monotone(a in 1e-3f64..1e4, b in 1e-3f64..1e4) {
            prop_assume!(a < b);
            prop_assert!(kelvin_to_angular(a).unwrap().value() < kelvin_to_angular(b).unwrap().value());
            let la = length_to_fundamental(a, Geometry::Cubic).unwrap().value();
            let lb = length_to_fundamental(b, Geometry::Cubic).unwrap().value();
            prop_assert!(la > lb);
        }
    }
}
