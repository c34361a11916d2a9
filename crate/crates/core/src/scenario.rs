//! Scenario binding, model dispatch, distance sweeps and cell-range inversion.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curves::CurveTable;
use crate::error::{Error, Result};
use crate::models::{
    cost231_hata_path_loss, ericsson_path_loss, okumura_path_loss, sui_path_loss, wi_los_path_loss,
    wi_nlos_path_loss, Environment, EricssonCoefficients, FidelityMode, PathLossResult, RadioLink,
    WiGeometry,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelId {
    Sui,
    Okumura,
    #[serde(rename = "cost231_hata")]
    Cost231Hata,
    WalfischIkegami,
    #[serde(rename = "ericsson9999")]
    Ericsson9999,
}

impl ModelId {
    pub const ALL: [ModelId; 5] = [
        ModelId::Sui,
        ModelId::Okumura,
        ModelId::Cost231Hata,
        ModelId::WalfischIkegami,
        ModelId::Ericsson9999,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelId::Sui => "sui",
            ModelId::Okumura => "okumura",
            ModelId::Cost231Hata => "cost231_hata",
            ModelId::WalfischIkegami => "walfisch_ikegami",
            ModelId::Ericsson9999 => "ericsson9999",
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        ModelId::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| {
                format!(
                    "unknown model '{s}' (expected one of sui, okumura, cost231_hata, walfisch_ikegami, ericsson9999)"
                )
            })
    }
}

/// One fully-bound evaluation context.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub link: RadioLink,
    pub environment: Environment,
    pub wi_geometry: WiGeometry,
    pub ericsson: EricssonCoefficients,
    pub mode: FidelityMode,
    /// Log-normal shadowing margin carried with the scenario.
    pub shadow_margin_db: f64,
    /// Adds `shadow_margin_db` as a `shadow_margin` component when set.
    pub apply_shadow_margin: bool,
    pub include_sui_shadowing: bool,
}

impl Scenario {
    pub const DEFAULT_FREQUENCY_MHZ: f64 = 1900.0;
    pub const DEFAULT_DISTANCE_M: f64 = 5000.0;
    pub const DEFAULT_BS_HEIGHT_M: f64 = 30.0;
    pub const DEFAULT_RX_HEIGHT_M: f64 = 3.0;

    /// The simulation defaults for one environment: 5 km link, 3 m receiver,
    /// 25 m streets, 50 m building separation, 15 m roofs.
    pub fn defaults(
        environment: Environment,
        frequency_mhz: f64,
        bs_height_m: f64,
    ) -> Result<Self> {
        let link = RadioLink::new(
            frequency_mhz,
            Self::DEFAULT_DISTANCE_M,
            bs_height_m,
            Self::DEFAULT_RX_HEIGHT_M,
        )?;
        Ok(Scenario {
            link,
            environment,
            wi_geometry: default_geometry(environment),
            ericsson: EricssonCoefficients::default(),
            mode: FidelityMode::Corrected,
            shadow_margin_db: default_shadow_margin_db(environment),
            apply_shadow_margin: false,
            include_sui_shadowing: true,
        })
    }

    pub fn with_distance(&self, distance_m: f64) -> Result<Self> {
        Ok(Scenario {
            link: self.link.with_distance(distance_m)?,
            ..self.clone()
        })
    }
}

/// Street orientation 30 degrees in urban areas, 40 elsewhere; rural is LOS.
pub fn default_geometry(environment: Environment) -> WiGeometry {
    match environment {
        Environment::Urban => WiGeometry::urban(),
        Environment::Suburban => WiGeometry::suburban(),
        Environment::Rural => WiGeometry::rural(),
    }
}

pub fn default_shadow_margin_db(environment: Environment) -> f64 {
    match environment {
        Environment::Urban => 10.6,
        Environment::Suburban | Environment::Rural => 8.2,
    }
}

/// Evaluates one model. Walfisch-Ikegami uses the LOS formula for rural
/// scenarios (or when the geometry requests LOS) and NLOS otherwise.
pub fn evaluate(
    model: ModelId,
    scenario: &Scenario,
    curves: Option<&CurveTable>,
) -> Result<PathLossResult> {
    let link = &scenario.link;
    let mut result = match model {
        ModelId::Sui => sui_path_loss(link, scenario.environment, scenario.include_sui_shadowing)?,
        ModelId::Okumura => {
            let curves = curves.ok_or(Error::CurveTableRequired)?;
            okumura_path_loss(link, scenario.environment, curves)?
        }
        ModelId::Cost231Hata => cost231_hata_path_loss(link, scenario.environment, scenario.mode)?,
        ModelId::WalfischIkegami => {
            if scenario.environment == Environment::Rural || scenario.wi_geometry.los {
                wi_los_path_loss(link)?
            } else {
                wi_nlos_path_loss(&scenario.wi_geometry, link, scenario.mode)?
            }
        }
        ModelId::Ericsson9999 => ericsson_path_loss(link, &scenario.ericsson, scenario.mode)?,
    };
    if scenario.apply_shadow_margin {
        result.push_component("shadow_margin", scenario.shadow_margin_db);
    }
    Ok(result)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Spacing {
    #[default]
    Log,
    Linear,
}

/// Sample distances between `d_min` and `d_max` inclusive.
pub fn sample_distances(
    d_min_m: f64,
    d_max_m: f64,
    steps: usize,
    spacing: Spacing,
) -> Result<Vec<f64>> {
    if !(d_min_m > 0.0 && d_min_m.is_finite() && d_max_m.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "sweep bounds must be finite and positive (got {d_min_m}, {d_max_m})"
        )));
    }
    if d_min_m >= d_max_m {
        return Err(Error::InvalidArgument(format!(
            "d_min {d_min_m} m must be below d_max {d_max_m} m"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidArgument(format!(
            "steps must be >= 2 (got {steps})"
        )));
    }
    let last = steps - 1;
    let mut out: Vec<f64> = (0..steps)
        .map(|i| {
            let t = i as f64 / last as f64;
            match spacing {
                Spacing::Log => (d_min_m.ln() + t * (d_max_m.ln() - d_min_m.ln())).exp(),
                Spacing::Linear => d_min_m + t * (d_max_m - d_min_m),
            }
        })
        .collect();
    out[0] = d_min_m;
    out[last] = d_max_m;
    Ok(out)
}

/// Evaluates a model over a distance sweep. Points are evaluated in parallel
/// and returned in ascending distance order.
pub fn sweep(
    model: ModelId,
    scenario: &Scenario,
    d_min_m: f64,
    d_max_m: f64,
    steps: usize,
    spacing: Spacing,
    curves: Option<&CurveTable>,
) -> Result<Vec<(f64, PathLossResult)>> {
    let distances = sample_distances(d_min_m, d_max_m, steps, spacing)?;
    let results: Vec<Result<(f64, PathLossResult)>> = distances
        .par_iter()
        .map(|&d| {
            scenario
                .with_distance(d)
                .and_then(|s| evaluate(model, &s, curves))
                .map(|r| (d, r))
                .map_err(|e| Error::SweepPoint {
                    distance_m: d,
                    source: Box::new(e),
                })
        })
        .collect();
    results.into_iter().collect()
}

/// Number of samples used to check monotonicity before inverting.
const MONOTONE_SAMPLES: usize = 64;
/// Convergence tolerance of the inversion, in dB.
pub const INVERSION_TOLERANCE_DB: f64 = 1e-9;

/// Largest distance in `[d_min, d_max]` whose loss does not exceed `max_loss_db`,
/// found by bisection to within [`INVERSION_TOLERANCE_DB`].
pub fn invert_cell_range(
    model: ModelId,
    scenario: &Scenario,
    max_loss_db: f64,
    d_min_m: f64,
    d_max_m: f64,
    curves: Option<&CurveTable>,
) -> Result<f64> {
    let loss = |d: f64| -> Result<f64> {
        evaluate(model, &scenario.with_distance(d)?, curves).map(|r| r.total_db)
    };

    let probes = sample_distances(d_min_m, d_max_m, MONOTONE_SAMPLES, Spacing::Log)?;
    let losses = probes
        .iter()
        .map(|&d| loss(d))
        .collect::<Result<Vec<_>>>()?;
    if let Some(i) = losses.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::NonMonotone {
            distance_m: probes[i + 1],
        });
    }

    let (pl_min, pl_max) = (losses[0], losses[losses.len() - 1]);
    if !(pl_min..=pl_max).contains(&max_loss_db) {
        return Err(Error::Bracket {
            target_db: max_loss_db,
            pl_min_db: pl_min,
            pl_max_db: pl_max,
        });
    }
    if max_loss_db == pl_max {
        return Ok(d_max_m);
    }
    if max_loss_db - pl_min <= INVERSION_TOLERANCE_DB {
        return Ok(d_min_m);
    }

    // Invariant: loss(lo) <= target < loss(hi).
    let (mut lo, mut hi) = (d_min_m, d_max_m);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(lo);
        }
        let pl = loss(mid)?;
        if pl <= max_loss_db {
            lo = mid;
            if max_loss_db - pl <= INVERSION_TOLERANCE_DB {
                return Ok(lo);
            }
        } else {
            hi = mid;
        }
    }
}
