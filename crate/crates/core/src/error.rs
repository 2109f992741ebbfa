use alloc::string::String;

/// Errors raised by parameter validation and decoding in the core crate.
///
/// Decoding failures that are an expected outcome of a protocol run (the
/// bit-flipping decoder hitting its cap, Reed-Solomon finding too many
/// errors) are reported through [`Error::DecodeFailure`] so callers can count
/// them instead of aborting.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("ratio s/k = {size}/{bound} is below 2")]
    RatioBelowTwo { size: u64, bound: u64 },

    #[error("enumeration budget exceeded: {count} subsets > {budget}")]
    BudgetExceeded { count: u128, budget: u128 },

    #[error("malformed sketch: {0}")]
    MalformedSketch(String),

    #[error("decode failure at stage {stage}")]
    DecodeFailure { stage: FailureStage },

    #[error("parameter regime not supported: {0}")]
    UnsupportedRegime(String),
}

impl Error {
    /// The failure label a trial record should carry for this error.
    pub fn stage(&self) -> FailureStage {
        match self {
            Error::DecodeFailure { stage } => *stage,
            _ => FailureStage::Rejected,
        }
    }
}

/// Where a protocol run failed. Closed set; every failure record carries one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FailureStage {
    /// A bit-flipping stage hit its flip cap before reaching a fixpoint.
    FlipCap,
    /// The final parity check was not satisfied at the decoder fixpoint.
    ParityUnsatisfied,
    /// Reed-Solomon decoding found more errors than it can correct.
    Syndrome,
    /// Edit recovery: too many mismatching blocks at one level.
    TooManyBadBlocks,
    /// Bob's output disagrees with Alice's input (harness-only verdict).
    OutputMismatch,
    /// Inputs or parameters were rejected before decoding started.
    Rejected,
}

impl FailureStage {
    pub const ALL: [FailureStage; 6] = [
        FailureStage::FlipCap,
        FailureStage::ParityUnsatisfied,
        FailureStage::Syndrome,
        FailureStage::TooManyBadBlocks,
        FailureStage::OutputMismatch,
        FailureStage::Rejected,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FailureStage::FlipCap => "flip_cap",
            FailureStage::ParityUnsatisfied => "parity_unsatisfied",
            FailureStage::Syndrome => "syndrome",
            FailureStage::TooManyBadBlocks => "too_many_bad_blocks",
            FailureStage::OutputMismatch => "output_mismatch",
            FailureStage::Rejected => "rejected",
        }
    }
}

impl core::fmt::Display for FailureStage {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameters(msg.into())
}

pub(crate) fn decode_failure(stage: FailureStage) -> Error {
    Error::DecodeFailure { stage }
}
