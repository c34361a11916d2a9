//! COST-231 extension of the Hata model.

use super::{lg, Environment, FidelityMode, PathLossResult, RadioLink};
use crate::error::{require_positive, Result};

/// Mobile antenna correction a(h_r).
///
/// Urban uses the large-city form in both modes. For suburban and rural,
/// `Corrected` is Hata's small/medium-city term
/// `(1.1·log f − 0.7)·h_r − (1.56·log f − 0.8)`, while `AsPrinted` evaluates
/// `1.1·log f − 0.7·h_r − (1.58·f − 0.8)` literally.
pub fn hata_rx_correction(
    frequency_mhz: f64,
    rx_height_m: f64,
    environment: Environment,
    mode: FidelityMode,
) -> Result<f64> {
    require_positive("frequency", frequency_mhz)?;
    require_positive("rx_height", rx_height_m)?;
    let lf = lg(frequency_mhz);
    Ok(match (environment, mode) {
        (Environment::Urban, _) => {
            let t = lg(11.75 * rx_height_m);
            3.2 * t * t - 4.97
        }
        (_, FidelityMode::Corrected) => (1.1 * lf - 0.7) * rx_height_m - (1.56 * lf - 0.8),
        (_, FidelityMode::AsPrinted) => 1.1 * lf - 0.7 * rx_height_m - (1.58 * frequency_mhz - 0.8),
    })
}

pub fn cost231_hata_path_loss(
    link: &RadioLink,
    environment: Environment,
    mode: FidelityMode,
) -> Result<PathLossResult> {
    link.validate()?;
    let f = link.frequency_mhz;
    let hb = link.bs_height_m;
    let a_hr = hata_rx_correction(f, link.rx_height_m, environment, mode)?;
    let metro = match environment {
        Environment::Urban => 3.0,
        Environment::Suburban | Environment::Rural => 0.0,
    };

    let mut b = PathLossResult::builder()
        .component("constant", 46.3)
        .component("frequency_term", 33.9 * lg(f))
        .component("bs_height_term", -13.82 * lg(hb))
        .component("rx_correction", -a_hr)
        .component(
            "distance_term",
            (44.9 - 6.55 * lg(hb)) * lg(link.distance_km()),
        )
        .component("metro_correction", metro);
    if !(1500.0..=2000.0).contains(&f) {
        b = b.warn(format!(
            "frequency {f} MHz outside model validity (COST-231 Hata covers 1500-2000 MHz)"
        ));
    }
    Ok(b.build())
}
