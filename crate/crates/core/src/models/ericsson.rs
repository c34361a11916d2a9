//! Ericsson 9999 model, a tunable Hata extension.

use serde::{Deserialize, Serialize};

use super::{lg, FidelityMode, PathLossResult, RadioLink};
use crate::error::{require_positive, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EricssonCoefficients {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl Default for EricssonCoefficients {
    fn default() -> Self {
        EricssonCoefficients {
            a0: 36.2,
            a1: 30.2,
            a2: 12.0,
            a3: 0.1,
        }
    }
}

/// g(f) = 44.49·log f − 4.78·(log f)².
pub fn ericsson_gf(frequency_mhz: f64) -> Result<f64> {
    require_positive("frequency", frequency_mhz)?;
    let lf = lg(frequency_mhz);
    Ok(44.49 * lf - 4.78 * lf * lf)
}

/// The receiver term is `3.2·(log(11.75·h_r))²` in corrected mode and the
/// height-free `3.2·(log 11.75)²` in as-printed mode.
pub fn ericsson_path_loss(
    link: &RadioLink,
    coeffs: &EricssonCoefficients,
    mode: FidelityMode,
) -> Result<PathLossResult> {
    link.validate()?;
    let ld = lg(link.distance_km());
    let lh = lg(link.bs_height_m);
    let rx_arg = match mode {
        FidelityMode::AsPrinted => 11.75,
        FidelityMode::Corrected => 11.75 * link.rx_height_m,
    };
    let rx_term = 3.2 * lg(rx_arg).powi(2);

    Ok(PathLossResult::builder()
        .component("a0", coeffs.a0)
        .component("distance_term", coeffs.a1 * ld)
        .component("bs_height_term", coeffs.a2 * lh)
        .component("cross_term", coeffs.a3 * lh * ld)
        .component("rx_term", -rx_term)
        .component("frequency_term", ericsson_gf(link.frequency_mhz)?)
        .build())
}
