//! Stanford University Interim (SUI) model for IEEE 802.16 terrains.

use serde::{Deserialize, Serialize};

use super::{free_space_loss, lg, Environment, PathLossResult, RadioLink};
use crate::error::{require_positive, Error, Result};

/// SUI terrain class. A is dense/hilly, C is flat/rural.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SuiTerrain {
    A,
    B,
    C,
}

impl SuiTerrain {
    pub fn params(self) -> SuiTerrainParams {
        match self {
            SuiTerrain::A => SuiTerrainParams {
                a: 4.6,
                b: 0.0075,
                c: 12.6,
            },
            SuiTerrain::B => SuiTerrainParams {
                a: 4.0,
                b: 0.0065,
                c: 17.1,
            },
            SuiTerrain::C => SuiTerrainParams {
                a: 3.6,
                b: 0.005,
                c: 20.0,
            },
        }
    }
}

/// Path-loss exponent coefficients: `a` (dimensionless), `b` (1/m), `c` (m).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiTerrainParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Path-loss exponent γ = a − b·h_b + c/h_b.
pub fn sui_gamma(params: SuiTerrainParams, bs_height_m: f64) -> Result<f64> {
    require_positive("bs_height", bs_height_m)?;
    Ok(params.a - params.b * bs_height_m + params.c / bs_height_m)
}

/// Free-space loss at the reference distance d0.
pub fn sui_reference_loss(frequency_mhz: f64, d0_m: f64) -> Result<f64> {
    free_space_loss(frequency_mhz, d0_m)
}

pub fn sui_freq_correction(frequency_mhz: f64) -> Result<f64> {
    require_positive("frequency", frequency_mhz)?;
    Ok(6.0 * lg(frequency_mhz / 2000.0))
}

/// Receiver-height correction. The 2000 divisor is kept literally; at a 3 m
/// receiver it contributes roughly +30 dB (A, B) or +56 dB (C).
pub fn sui_height_correction(rx_height_m: f64, terrain: SuiTerrain) -> Result<f64> {
    require_positive("rx_height", rx_height_m)?;
    let slope = match terrain {
        SuiTerrain::A | SuiTerrain::B => -10.8,
        SuiTerrain::C => -20.0,
    };
    Ok(slope * lg(rx_height_m / 2000.0))
}

/// Deterministic shadowing term S = 0.65(log f)² − 1.3 log f + α.
///
/// α is bound by environment name: 6.6 dB urban, 5.2 dB suburban and rural.
pub fn sui_shadowing(frequency_mhz: f64, environment: Environment) -> Result<f64> {
    require_positive("frequency", frequency_mhz)?;
    let alpha = match environment {
        Environment::Urban => 6.6,
        Environment::Suburban | Environment::Rural => 5.2,
    };
    let lf = lg(frequency_mhz);
    Ok(0.65 * lf * lf - 1.3 * lf + alpha)
}

pub fn sui_path_loss(
    link: &RadioLink,
    environment: Environment,
    include_shadowing: bool,
) -> Result<PathLossResult> {
    link.validate()?;
    let d0 = link.sui_reference_distance_m;
    if link.distance_m <= d0 {
        return Err(Error::BelowReferenceDistance {
            distance_m: link.distance_m,
            reference_m: d0,
        });
    }
    let terrain = environment.sui_terrain();
    let gamma = sui_gamma(terrain.params(), link.bs_height_m)?;

    let mut b = PathLossResult::builder()
        .component(
            "reference_loss",
            sui_reference_loss(link.frequency_mhz, d0)?,
        )
        .component("distance_term", 10.0 * gamma * lg(link.distance_m / d0))
        .component("freq_correction", sui_freq_correction(link.frequency_mhz)?)
        .component(
            "height_correction",
            sui_height_correction(link.rx_height_m, terrain)?,
        );
    if include_shadowing {
        b = b.component("shadowing", sui_shadowing(link.frequency_mhz, environment)?);
    }
    if link.frequency_mhz < 1900.0 {
        b = b.warn(format!(
            "frequency {} MHz outside model validity (SUI is specified above 1900 MHz)",
            link.frequency_mhz
        ));
    }
    Ok(b.build())
}
