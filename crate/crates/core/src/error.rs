use thiserror::Error;

/// Errors raised by model evaluation, curve lookup and scenario orchestration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {name} must be positive (got {value})")]
    NonPositive { name: &'static str, value: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("domain error: below reference distance (d = {distance_m} m, d0 = {reference_m} m)")]
    BelowReferenceDistance { distance_m: f64, reference_m: f64 },

    #[error(
        "domain error: rooftop term undefined (roof height {roof_m} m <= receiver height {rx_m} m)"
    )]
    RooftopUndefined { roof_m: f64, rx_m: f64 },

    #[error("domain error: street orientation {0} deg outside [0, 90]")]
    OrientationOutOfRange(f64),

    #[error("range error: {axis} {value} outside curve table bounds [{min}, {max}]")]
    OutOfGrid {
        axis: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("lookup error: no area-gain rows for environment '{0}'")]
    MissingEnvironment(String),

    #[error("curve table required for the okumura model")]
    CurveTableRequired,

    #[error("range error: target {target_db:.6} dB outside bracket, PL(d_min) = {pl_min_db:.6} dB, PL(d_max) = {pl_max_db:.6} dB")]
    Bracket {
        target_db: f64,
        pl_min_db: f64,
        pl_max_db: f64,
    },

    #[error("precondition error: path loss is not increasing in distance near {distance_m} m")]
    NonMonotone { distance_m: f64 },

    #[error("sweep aborted at distance {distance_m} m: {source}")]
    SweepPoint {
        distance_m: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("curve file line {line}: {message}")]
    CurveParse { line: usize, message: String },

    #[error("curve table invariant violated: {0}")]
    CurveInvariant(String),

    #[error("reference table line {line}: {message}")]
    ReferenceParse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositive { name, value })
    }
}
