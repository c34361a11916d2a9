//! Empirical radio path-loss models for LTE cell planning.
//!
//! Five models are implemented in [`models`]: SUI, Okumura, COST-231 Hata,
//! COST-231 Walfisch-Ikegami and Ericsson 9999. [`scenario`] binds them to
//! the standard simulation parameters and provides sweeps and cell-range
//! inversion, [`reference`] compares them against published values, and
//! [`cli`] is the `pathcast` command-line front end.

pub mod cli;
pub mod curves;
pub mod error;
pub mod models;
pub mod reference;
pub mod scenario;

pub use curves::{BoundsPolicy, CurveTable};
pub use error::{Error, Result};
pub use models::{Environment, FidelityMode, PathLossResult, RadioLink};
pub use reference::{compare_against_reference, published_table, DiscrepancyLedger, ReferenceRow};
pub use scenario::{evaluate, invert_cell_range, sweep, ModelId, Scenario, Spacing};
