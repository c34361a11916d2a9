//! COST-231 Walfisch-Ikegami model.
//!
//! Height symbols: the base-station antenna height is compared against the
//! mean roof height. In the printed multi-screen expressions these appear as
//! `h_t` (base station) and `h_b` (roof); the rooftop-to-street term uses the
//! roof height minus the receiver height.

use serde::{Deserialize, Serialize};

use super::{lg, FidelityMode, PathLossResult, RadioLink};
use crate::error::{require_positive, Error, Result};

/// Street and building geometry for the NLOS terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WiGeometry {
    pub street_width_m: f64,
    pub building_separation_m: f64,
    pub roof_height_m: f64,
    /// Angle between the incident wave and the street axis.
    pub orientation_deg: f64,
    pub metro_factor: MetroFactor,
    pub los: bool,
}

/// The `k` factor in k_F.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetroFactor {
    /// Medium-sized city and suburban centers, k = 0.7.
    Suburban,
    /// Metropolitan centers, k = 1.5.
    Metropolitan,
    /// Explicit override.
    Custom(f64),
}

impl MetroFactor {
    pub fn k(self) -> f64 {
        match self {
            MetroFactor::Suburban => 0.7,
            MetroFactor::Metropolitan => 1.5,
            MetroFactor::Custom(k) => k,
        }
    }
}

impl WiGeometry {
    /// Urban street geometry: 25 m streets, 50 m building separation, 15 m
    /// roofs, 30 degree orientation, metropolitan k.
    pub fn urban() -> Self {
        WiGeometry {
            street_width_m: 25.0,
            building_separation_m: 50.0,
            roof_height_m: 15.0,
            orientation_deg: 30.0,
            metro_factor: MetroFactor::Metropolitan,
            los: false,
        }
    }

    /// As [`WiGeometry::urban`] with a 40 degree orientation and suburban k.
    pub fn suburban() -> Self {
        WiGeometry {
            orientation_deg: 40.0,
            metro_factor: MetroFactor::Suburban,
            ..Self::urban()
        }
    }

    /// Rural links are evaluated line-of-sight.
    pub fn rural() -> Self {
        WiGeometry {
            los: true,
            ..Self::suburban()
        }
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("street_width", self.street_width_m)?;
        require_positive("building_separation", self.building_separation_m)?;
        require_positive("roof_height", self.roof_height_m)?;
        if !(0.0..=90.0).contains(&self.orientation_deg) {
            return Err(Error::OrientationOutOfRange(self.orientation_deg));
        }
        if !self.metro_factor.k().is_finite() {
            return Err(Error::Domain("metro factor k must be finite".into()));
        }
        Ok(())
    }
}

/// Line-of-sight loss 42.64 + 26·log d_km + 20·log f.
pub fn wi_los_path_loss(link: &RadioLink) -> Result<PathLossResult> {
    link.validate()?;
    let mut b = PathLossResult::builder()
        .component("constant", 42.64)
        .component("distance_term", 26.0 * lg(link.distance_km()))
        .component("frequency_term", 20.0 * lg(link.frequency_mhz));
    if let Some(w) = validity_warning(link) {
        b = b.warn(w);
    }
    Ok(b.build())
}

/// Street-orientation loss over [0, 35), [35, 55), [55, 90].
pub fn wi_orientation_loss(orientation_deg: f64) -> Result<f64> {
    let a = orientation_deg;
    if !(0.0..=90.0).contains(&a) {
        return Err(Error::OrientationOutOfRange(a));
    }
    Ok(if a < 35.0 {
        -10.0 + 0.354 * a
    } else if a < 55.0 {
        2.5 + 0.075 * (a - 35.0)
    } else {
        4.0 - 0.114 * (a - 55.0)
    })
}

/// Rooftop-to-street diffraction L_RTS.
pub fn wi_rooftop_to_street(
    geometry: &WiGeometry,
    frequency_mhz: f64,
    rx_height_m: f64,
) -> Result<f64> {
    geometry.validate()?;
    require_positive("frequency", frequency_mhz)?;
    require_positive("rx_height", rx_height_m)?;
    if geometry.roof_height_m <= rx_height_m {
        return Err(Error::RooftopUndefined {
            roof_m: geometry.roof_height_m,
            rx_m: rx_height_m,
        });
    }
    Ok(-16.9 - 10.0 * lg(geometry.street_width_m)
        + 10.0 * lg(frequency_mhz)
        + 20.0 * lg(geometry.roof_height_m - rx_height_m)
        + wi_orientation_loss(geometry.orientation_deg)?)
}

/// Multi-screen diffraction terms. `total_db` is
/// `l_bsh + k_a + k_d·log d_km + k_f·log f − 9·log s_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiscreenTerms {
    pub l_bsh: f64,
    pub k_a: f64,
    pub k_d: f64,
    pub k_f: f64,
    pub total_db: f64,
    pub warnings: Vec<String>,
}

pub fn wi_multiscreen(
    geometry: &WiGeometry,
    link: &RadioLink,
    mode: FidelityMode,
) -> Result<MultiscreenTerms> {
    geometry.validate()?;
    link.validate()?;
    let f = link.frequency_mhz;
    let d_km = link.distance_km();
    let h_roof = geometry.roof_height_m;
    let dh = link.bs_height_m - h_roof;
    let above = dh > 0.0;
    let k = geometry.metro_factor.k();

    let l_bsh_std = if above { -18.0 * lg(1.0 + dh) } else { 0.0 };
    let k_a_std = if above {
        54.0
    } else if d_km >= 0.5 {
        54.0 - 0.8 * dh
    } else {
        54.0 - 0.8 * dh * d_km / 0.5
    };
    let k_d_std = if above {
        18.0
    } else {
        18.0 - 15.0 * dh / h_roof
    };

    let mut warnings = Vec::new();
    let (l_bsh, k_a, k_d, k_f) = match mode {
        FidelityMode::Corrected => (l_bsh_std, k_a_std, k_d_std, -4.0 + k * (f / 925.0 - 1.0)),
        FidelityMode::AsPrinted => {
            let mut garbled = |term: &str| {
                warnings.push(format!(
                    "garbled branch: corrected definition substituted for {term} \
                     (base station {} m <= roof {} m, d = {} km)",
                    link.bs_height_m, h_roof, d_km
                ));
            };
            let l_bsh = if above {
                l_bsh_std
            } else {
                garbled("L_BSH");
                l_bsh_std
            };
            let k_a = if above {
                54.0
            } else if d_km > 0.5 {
                54.0 + 0.8 * dh
            } else {
                garbled("k_A");
                k_a_std
            };
            let k_d = if above {
                18.0 + 15.0 * dh / h_roof
            } else if d_km > 0.5 {
                18.0
            } else {
                garbled("k_D");
                k_d_std
            };
            if link.bs_height_m != h_roof {
                warnings.push(format!(
                    "height symbols bound as h_t = base station ({} m), h_b = roof ({} m); \
                     reading h_b as the base station selects the opposite branch",
                    link.bs_height_m, h_roof
                ));
            }
            (l_bsh, k_a, k_d, -4.0 + k * (f / 924.0))
        }
    };

    let total_db =
        l_bsh + k_a + k_d * lg(d_km) + k_f * lg(f) - 9.0 * lg(geometry.building_separation_m);
    Ok(MultiscreenTerms {
        l_bsh,
        k_a,
        k_d,
        k_f,
        total_db,
        warnings,
    })
}

/// NLOS loss L_o + L_RTS + L_MSD. When the two diffraction terms sum below
/// zero, a `diffraction_floor` component cancels them and a warning is added.
pub fn wi_nlos_path_loss(
    geometry: &WiGeometry,
    link: &RadioLink,
    mode: FidelityMode,
) -> Result<PathLossResult> {
    link.validate()?;
    let l_o = 32.45 + 20.0 * lg(link.distance_km()) + 20.0 * lg(link.frequency_mhz);
    let l_rts = wi_rooftop_to_street(geometry, link.frequency_mhz, link.rx_height_m)?;
    let msd = wi_multiscreen(geometry, link, mode)?;

    let mut b = PathLossResult::builder()
        .component("free_space", l_o)
        .component("rooftop_to_street", l_rts)
        .component("multiscreen", msd.total_db)
        .warnings(msd.warnings);
    let diffraction = l_rts + msd.total_db;
    if diffraction < 0.0 {
        b = b.component("diffraction_floor", -diffraction).warn(format!(
            "rooftop and multi-screen terms sum to {diffraction:.2} dB; clamped to free space"
        ));
    }
    if mode == FidelityMode::AsPrinted {
        b = b.warn("rooftop-to-street height difference uses roof height minus receiver height");
    }
    if let Some(w) = validity_warning(link) {
        b = b.warn(w);
    }
    Ok(b.build())
}

fn validity_warning(link: &RadioLink) -> Option<String> {
    let f = link.frequency_mhz;
    (!(800.0..=2000.0).contains(&f)).then(|| {
        format!("frequency {f} MHz outside model validity (COST-231 Walfisch-Ikegami covers 800-2000 MHz)")
    })
}
