//! Empirical path-loss models.
//!
//! All external quantities are in meters, MHz and dB. Each model converts to
//! its native units (km for the Hata family) internally. Logarithms are base 10
//! throughout.
//!
//! Where the formulas as commonly printed differ from the literature forms,
//! operations take a [`FidelityMode`]: `Corrected` follows the COST-231 final
//! report and Hata's original forms, `AsPrinted` evaluates the printed
//! expressions literally and falls back to the corrected branch (with a
//! warning) wherever the printed branch set is incomplete.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};

pub mod ericsson;
pub mod hata;
pub mod okumura;
pub mod sui;
pub mod walfisch;

pub use ericsson::{ericsson_gf, ericsson_path_loss, EricssonCoefficients};
pub use hata::{cost231_hata_path_loss, hata_rx_correction};
pub use okumura::{okumura_antenna_gains, okumura_path_loss};
pub use sui::{
    sui_freq_correction, sui_gamma, sui_height_correction, sui_path_loss, sui_reference_loss,
    sui_shadowing, SuiTerrain, SuiTerrainParams,
};
pub use walfisch::{
    wi_los_path_loss, wi_multiscreen, wi_nlos_path_loss, wi_orientation_loss, wi_rooftop_to_street,
    MultiscreenTerms, WiGeometry,
};

/// Speed of light in m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[inline]
pub(crate) fn lg(x: f64) -> f64 {
    x.log10()
}

/// Which reading of an erratum-bearing formula to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FidelityMode {
    AsPrinted,
    #[default]
    Corrected,
}

impl FidelityMode {
    pub fn as_str(self) -> &'static str {
        match self {
            FidelityMode::AsPrinted => "as_printed",
            FidelityMode::Corrected => "corrected",
        }
    }
}

impl fmt::Display for FidelityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FidelityMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "as_printed" | "as-printed" => Ok(FidelityMode::AsPrinted),
            "corrected" => Ok(FidelityMode::Corrected),
            other => Err(format!(
                "unknown fidelity mode '{other}' (expected as_printed or corrected)"
            )),
        }
    }
}

/// Propagation environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Environment {
    Urban,
    Suburban,
    Rural,
}

impl Environment {
    pub const ALL: [Environment; 3] = [
        Environment::Urban,
        Environment::Suburban,
        Environment::Rural,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Environment::Urban => "urban",
            Environment::Suburban => "suburban",
            Environment::Rural => "rural",
        }
    }

    /// SUI terrain class: urban is A (densest), rural is C (flat).
    pub fn sui_terrain(self) -> SuiTerrain {
        match self {
            Environment::Urban => SuiTerrain::A,
            Environment::Suburban => SuiTerrain::B,
            Environment::Rural => SuiTerrain::C,
        }
    }
}

impl fmt::Display for Environment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Environment {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "urban" => Ok(Environment::Urban),
            "suburban" => Ok(Environment::Suburban),
            "rural" => Ok(Environment::Rural),
            other => Err(format!(
                "unknown environment '{other}' (expected urban, suburban or rural)"
            )),
        }
    }
}

/// One transmitter/receiver pair.
///
/// Wavelength is always derived from `frequency_mhz`; it is never stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadioLink {
    pub frequency_mhz: f64,
    pub distance_m: f64,
    pub bs_height_m: f64,
    pub rx_height_m: f64,
    /// SUI reference distance d0.
    pub sui_reference_distance_m: f64,
}

impl RadioLink {
    pub const DEFAULT_SUI_REFERENCE_M: f64 = 100.0;

    pub fn new(
        frequency_mhz: f64,
        distance_m: f64,
        bs_height_m: f64,
        rx_height_m: f64,
    ) -> Result<Self> {
        let link = RadioLink {
            frequency_mhz,
            distance_m,
            bs_height_m,
            rx_height_m,
            sui_reference_distance_m: Self::DEFAULT_SUI_REFERENCE_M,
        };
        link.validate()?;
        Ok(link)
    }

    pub fn with_sui_reference_distance(mut self, d0_m: f64) -> Result<Self> {
        self.sui_reference_distance_m = d0_m;
        self.validate()?;
        Ok(self)
    }

    pub fn with_distance(mut self, distance_m: f64) -> Result<Self> {
        self.distance_m = distance_m;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("frequency", self.frequency_mhz)?;
        require_positive("distance", self.distance_m)?;
        require_positive("bs_height", self.bs_height_m)?;
        require_positive("rx_height", self.rx_height_m)?;
        require_positive("sui_reference_distance", self.sui_reference_distance_m)?;
        if self.bs_height_m <= self.rx_height_m {
            return Err(Error::Domain(format!(
                "base-station height {} m must exceed receiver height {} m",
                self.bs_height_m, self.rx_height_m
            )));
        }
        Ok(())
    }

    pub fn wavelength_m(&self) -> f64 {
        wavelength_m(self.frequency_mhz)
    }

    pub fn distance_km(&self) -> f64 {
        self.distance_m / 1000.0
    }
}

pub fn wavelength_m(frequency_mhz: f64) -> f64 {
    SPEED_OF_LIGHT / (frequency_mhz * 1e6)
}

/// Free-space loss 20·log(4πd/λ) with d in meters.
pub fn free_space_loss(frequency_mhz: f64, distance_m: f64) -> Result<f64> {
    require_positive("frequency", frequency_mhz)?;
    require_positive("distance", distance_m)?;
    Ok(20.0 * lg(4.0 * std::f64::consts::PI * distance_m / wavelength_m(frequency_mhz)))
}

/// Total loss with an itemized breakdown.
///
/// `total_db` is always the sum of the component values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathLossResult {
    pub total_db: f64,
    pub components: Vec<Component>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub label: String,
    pub value_db: f64,
}

impl PathLossResult {
    pub(crate) fn builder() -> ResultBuilder {
        ResultBuilder::default()
    }

    pub fn component(&self, label: &str) -> Option<f64> {
        self.components
            .iter()
            .find(|c| c.label == label)
            .map(|c| c.value_db)
    }

    /// Appends a component and keeps `total_db` equal to the component sum.
    pub fn push_component(&mut self, label: impl Into<String>, value_db: f64) {
        let label = label.into();
        debug_assert!(self.component(&label).is_none(), "duplicate label {label}");
        self.components.push(Component {
            label,
            value_db: value_db + 0.0,
        });
        self.total_db = self.components.iter().map(|c| c.value_db).sum();
    }
}

#[derive(Debug, Default)]
pub(crate) struct ResultBuilder {
    components: Vec<Component>,
    warnings: Vec<String>,
}

impl ResultBuilder {
    pub fn component(mut self, label: &str, value_db: f64) -> Self {
        debug_assert!(
            self.components.iter().all(|c| c.label != label),
            "duplicate label {label}"
        );
        // Adding 0.0 turns -0.0 into 0.0.
        self.components.push(Component {
            label: label.to_string(),
            value_db: value_db + 0.0,
        });
        self
    }

    pub fn warn(mut self, message: impl Into<String>) -> Self {
        self.warnings.push(message.into());
        self
    }

    pub fn warnings(mut self, messages: impl IntoIterator<Item = String>) -> Self {
        self.warnings.extend(messages);
        self
    }

    pub fn build(self) -> PathLossResult {
        let total_db = self.components.iter().map(|c| c.value_db).sum();
        PathLossResult {
            total_db,
            components: self.components,
            warnings: self.warnings,
        }
    }
}
