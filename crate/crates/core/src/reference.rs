//! Published comparison values and the discrepancy ledger that checks them
//! against the implemented models.

use std::io::Read;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curves::CurveTable;
use crate::error::{Error, Result};
use crate::models::{Environment, FidelityMode};
use crate::scenario::{evaluate, ModelId, Scenario};

const PUBLISHED_CSV: &str = include_str!("../data/published_losses.csv");

/// Default tolerance for a ledger match.
pub const DEFAULT_TOLERANCE_DB: f64 = 0.5;

/// One printed row: inputs and the loss reported for each environment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub model: ModelId,
    pub freq_mhz: f64,
    pub dist_km: f64,
    pub bs_m: f64,
    pub rx_m: f64,
    pub urban_db: f64,
    pub suburban_db: f64,
    pub rural_db: f64,
}

impl ReferenceRow {
    pub fn printed_db(&self, environment: Environment) -> f64 {
        match environment {
            Environment::Urban => self.urban_db,
            Environment::Suburban => self.suburban_db,
            Environment::Rural => self.rural_db,
        }
    }

    /// The scenario these inputs describe, with all other fields at their
    /// simulation defaults.
    pub fn scenario(&self, environment: Environment, mode: FidelityMode) -> Result<Scenario> {
        let mut s = Scenario::defaults(environment, self.freq_mhz, self.bs_m)?;
        s.link.distance_m = self.dist_km * 1000.0;
        s.link.rx_height_m = self.rx_m;
        s.link.validate()?;
        s.mode = mode;
        Ok(s)
    }
}

/// The embedded comparison table, verbatim.
pub fn published_table() -> Vec<ReferenceRow> {
    parse_reference(PUBLISHED_CSV.as_bytes()).expect("embedded reference table is valid")
}

pub fn parse_reference(reader: impl Read) -> Result<Vec<ReferenceRow>> {
    let mut rdr = csv::Reader::from_reader(reader);
    rdr.deserialize()
        .enumerate()
        .map(|(i, row)| {
            row.map_err(|e| Error::ReferenceParse {
                line: i + 2,
                message: e.to_string(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Match,
    Mismatch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub row: ReferenceRow,
    pub environment: Environment,
    pub printed_db: f64,
    /// `None` when the evaluation itself failed; the reason is in `notes`.
    pub computed_db: Option<f64>,
    /// computed − printed.
    pub delta_db: Option<f64>,
    pub verdict: Verdict,
    pub mode: FidelityMode,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyLedger {
    pub tolerance_db: f64,
    pub mode: FidelityMode,
    pub entries: Vec<LedgerEntry>,
}

impl DiscrepancyLedger {
    pub fn matched(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| e.verdict == Verdict::Match)
            .count()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `matched M/N within T dB`.
    pub fn summary(&self) -> String {
        format!(
            "matched {}/{} within {:.2} dB",
            self.matched(),
            self.len(),
            self.tolerance_db
        )
    }
}

/// Options shared by every scenario derived from a reference row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareOptions {
    pub tolerance_db: f64,
    pub mode: FidelityMode,
    pub apply_shadow_margin: bool,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            tolerance_db: DEFAULT_TOLERANCE_DB,
            mode: FidelityMode::Corrected,
            apply_shadow_margin: false,
        }
    }
}

/// Evaluates every (row, environment) cell and records the delta against the
/// printed value. Evaluation failures become notes on a mismatch entry.
pub fn compare_against_reference(
    reference: &[ReferenceRow],
    options: CompareOptions,
    curves: Option<&CurveTable>,
) -> Result<DiscrepancyLedger> {
    if options.tolerance_db.is_nan() || options.tolerance_db <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive (got {})",
            options.tolerance_db
        )));
    }
    let cells: Vec<(ReferenceRow, Environment)> = reference
        .iter()
        .flat_map(|row| Environment::ALL.map(|env| (*row, env)))
        .collect();
    let entries = cells
        .par_iter()
        .map(|&(row, env)| ledger_entry(row, env, options, curves))
        .collect();
    Ok(DiscrepancyLedger {
        tolerance_db: options.tolerance_db,
        mode: options.mode,
        entries,
    })
}

fn ledger_entry(
    row: ReferenceRow,
    environment: Environment,
    options: CompareOptions,
    curves: Option<&CurveTable>,
) -> LedgerEntry {
    let printed_db = row.printed_db(environment);
    let mut notes = vec![format!("mode={}", options.mode)];
    if row.rural_db > row.urban_db {
        notes.push("printed anomaly: rural loss exceeds urban loss".to_string());
    }

    let outcome = row.scenario(environment, options.mode).and_then(|mut s| {
        s.apply_shadow_margin = options.apply_shadow_margin;
        evaluate(row.model, &s, curves)
    });
    let (computed_db, delta_db, verdict) = match outcome {
        Ok(result) => {
            notes.extend(result.warnings);
            let delta = result.total_db - printed_db;
            let verdict = if delta.abs() <= options.tolerance_db {
                Verdict::Match
            } else {
                Verdict::Mismatch
            };
            (Some(result.total_db), Some(delta), verdict)
        }
        Err(e) => {
            notes.push(format!("evaluation failed: {e}"));
            (None, None, Verdict::Mismatch)
        }
    };

    LedgerEntry {
        row,
        environment,
        printed_db,
        computed_db,
        delta_db,
        verdict,
        mode: options.mode,
        notes,
    }
}
