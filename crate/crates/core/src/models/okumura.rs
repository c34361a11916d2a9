//! Okumura model: free space plus curve-based median attenuation, minus
//! antenna-height and area gains.

use super::{free_space_loss, lg, Environment, PathLossResult, RadioLink};
use crate::curves::{BoundsPolicy, CurveTable};
use crate::error::{require_positive, Result};

/// Base-station and receiver height gains `(G(h_b), G(h_r))` relative to the
/// curves' 200 m / 3 m reference heights.
pub fn okumura_antenna_gains(bs_height_m: f64, rx_height_m: f64) -> Result<(f64, f64)> {
    require_positive("bs_height", bs_height_m)?;
    require_positive("rx_height", rx_height_m)?;
    Ok((20.0 * lg(bs_height_m / 200.0), 10.0 * lg(rx_height_m / 3.0)))
}

pub fn okumura_path_loss(
    link: &RadioLink,
    environment: Environment,
    curves: &CurveTable,
) -> Result<PathLossResult> {
    okumura_path_loss_with(link, environment, curves, BoundsPolicy::Reject)
}

pub fn okumura_path_loss_with(
    link: &RadioLink,
    environment: Environment,
    curves: &CurveTable,
    policy: BoundsPolicy,
) -> Result<PathLossResult> {
    link.validate()?;
    // The free-space term uses the actual Tx-Rx distance.
    let free_space = free_space_loss(link.frequency_mhz, link.distance_m)?;
    let amu = curves.amu_lookup_with(link.frequency_mhz, link.distance_m, policy)?;
    let garea = curves.garea_lookup_with(link.frequency_mhz, environment, policy)?;
    let (g_bs, g_rx) = okumura_antenna_gains(link.bs_height_m, link.rx_height_m)?;

    let mut b = PathLossResult::builder()
        .component("free_space", free_space)
        .component("median_attenuation", amu.value_db)
        .component("bs_height_gain", -g_bs)
        .component("rx_height_gain", -g_rx)
        .component("area_gain", -garea.value_db)
        .warnings(amu.notes)
        .warnings(garea.notes);
    if link.frequency_mhz > 3000.0 {
        b = b.warn(format!(
            "frequency {} MHz outside model validity (Okumura is specified up to 3000 MHz)",
            link.frequency_mhz
        ));
    }
    Ok(b.build())
}
