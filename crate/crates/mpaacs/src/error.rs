use thiserror::Error;

/// Errors reported by state construction, moment evaluation, and the
/// phase-space routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("gain must be at least 1 (got {0})")]
    GainBelowUnity(f64),

    #[error("alpha must be finite")]
    NonFiniteAlpha,

    #[error("truncation tolerance must lie strictly inside (0, 1) (got {0:e})")]
    ToleranceOutOfRange(f64),

    #[error("unknown formal variable `{0}`")]
    UnknownVariable(String),

    #[error("exponents support at most {max} formal variables (got {got})")]
    TooManyVariables { max: usize, got: usize },

    #[error("moment order ({k}, {l}) exceeds the supported cap of {max} per index")]
    MomentOrderTooLarge { k: u32, l: u32, max: u32 },

    #[error("moment engines disagree at order ({k}, {l}): relative gap {gap:.3e}")]
    MomentEngineMismatch { k: u32, l: u32, gap: f64 },

    #[error("effective gain is undefined for alpha = 0")]
    GainUndefinedForVacuumInput,

    #[error("squeezing threshold order m = {0} lies outside the supported range 1..=8")]
    ThresholdOrderOutOfRange(u32),

    #[error("no squeezing-threshold sign change inside [{lo}, {hi}] for m = {m}")]
    ThresholdBracketFailed { m: u32, lo: f64, hi: f64 },

    #[error("threshold check failed: variance not below 1/2 just past the root for m = {m}")]
    ThresholdNotSqueezedBeyond { m: u32 },

    #[error("density matrix trace defect {0:.3e} is too large for the parity evaluation")]
    TraceDefectTooLarge(f64),

    #[error("invalid phase-space grid: {0}")]
    InvalidGrid(String),

    #[error(
        "y window [{y_min}, {y_max}] clips an estimated {clipped:.3e} of the marginal integrand"
    )]
    MarginalWindowClips { y_min: f64, y_max: f64, clipped: f64 },

    #[error("sweep over {quantity} requires a strictly positive lower bound (got {lo})")]
    NonPositiveSweepStart { quantity: &'static str, lo: f64 },

    #[error("sweep range is inverted: lower bound {lo} exceeds upper bound {hi}")]
    InvertedSweepRange { lo: f64, hi: f64 },

    #[error("sweep sample count must be at least 1")]
    EmptySweep,
}
