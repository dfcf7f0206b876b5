//! Error type shared by the exact-computation modules.
//!
//! Hypothesis violations detected by the structured-matrix validators are *not*
//! errors: they are report content (see [`crate::banded`] and [`crate::grids`]),
//! because a violated hypothesis with an intact conclusion is useful data.
//! `CoreError` covers genuine misuse (mismatched dimensions, mixed scalar
//! contexts) and exhausted resampling budgets.

use alloc::string::String;
use core::fmt;

/// Failure modes of the exact-computation layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoreError {
    /// Two scalars from different contexts (rational vs. prime, or two
    /// different moduli) met in one arithmetic expression.
    ContextMismatch,
    /// A variable or component index was out of range.
    IndexOutOfRange { index: usize, len: usize },
    /// A form over `m` variables was applied to a curve with `n` components.
    VariableCountMismatch { form_vars: usize, curve_components: usize },
    /// Matrix dimensions incompatible with the requested operation.
    DimensionMismatch(String),
    /// Marked or interpolation points must be pairwise distinct.
    RepeatedPoints,
    /// A width or degree parameter was below its admissible minimum.
    ParameterOutOfRange(String),
    /// A constructor invariant failed (e.g. a curve with all components zero).
    InvalidConstruction(String),
    /// A randomized search exceeded its resampling budget; the seed is
    /// reported so the failing run can be replayed.
    ResamplingExhausted { what: String, seed: u64, budget: u32 },
    /// A requested construction is not available in the asked-for regime
    /// (e.g. pattern-mode quartic witnesses above the supported degree).
    Unsupported(String),
    /// Measured twisted-section dimensions admit no splitting multiset of
    /// the expected rank and degree inside the search window. Reported
    /// rather than guessed: it signals a non-locally-free pullback, a
    /// non-transverse level, or an exhausted window.
    SplittingUndetermined(String),
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::ContextMismatch => {
                write!(f, "scalars from different arithmetic contexts were combined")
            }
            CoreError::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for length {len}")
            }
            CoreError::VariableCountMismatch { form_vars, curve_components } => write!(
                f,
                "form over {form_vars} variables applied to a curve with {curve_components} components"
            ),
            CoreError::DimensionMismatch(what) => write!(f, "dimension mismatch: {what}"),
            CoreError::RepeatedPoints => write!(f, "points must be pairwise distinct"),
            CoreError::ParameterOutOfRange(what) => write!(f, "parameter out of range: {what}"),
            CoreError::InvalidConstruction(what) => write!(f, "invalid construction: {what}"),
            CoreError::ResamplingExhausted { what, seed, budget } => write!(
                f,
                "resampling budget of {budget} exhausted while drawing {what} (seed {seed})"
            ),
            CoreError::Unsupported(what) => write!(f, "unsupported: {what}"),
            CoreError::SplittingUndetermined(what) => {
                write!(f, "splitting type undetermined: {what}")
            }
        }
    }
}
