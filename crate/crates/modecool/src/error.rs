//! Error type shared by all modules.

use thiserror::Error;

/// Errors reported by the library.
///
/// Domain infeasibilities (`SynthesisInfeasible`, `AmplitudeOverflow`,
/// `DegenerateDispersion`, `NoUniqueSteadyState`, `CorrectionBreakdown`,
/// `ComplexityRefusal`) describe protocols that cannot be realized with the
/// given inputs; they are distinct from malformed inputs (`InvalidInput`) and
/// from internal numerical failures (`NumericalInconsistency`).
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Malformed or inconsistent input; `what` names the offending field or index.
    #[error("invalid input: {what}")]
    InvalidInput { what: String },

    /// A numerical identity that must hold was violated beyond tolerance.
    #[error("numerical inconsistency: {what} (residual {residual:.3e})")]
    NumericalInconsistency { what: String, residual: f64 },

    /// No modulation plan exists for the requested target.
    #[error("synthesis infeasible for qubit {qubit}, mode {mode}: {why}")]
    SynthesisInfeasible {
        qubit: usize,
        mode: usize,
        why: String,
    },

    /// A synthesized modulation amplitude reached or exceeded 1.
    #[error("modulation amplitude overflow at qubit {qubit}, tone {tone}: eta = {eta}")]
    AmplitudeOverflow { qubit: usize, tone: usize, eta: f64 },

    /// Resonance enumeration was refused because the index space is too large.
    #[error("resonance enumeration refused: order {max_order} with {n_modes} modes; set the force flag to override")]
    ComplexityRefusal { max_order: usize, n_modes: usize },

    /// The |n|=3 corrected couplings have a non-positive normalizer (modulation too strong).
    #[error("correction breakdown at qubit {qubit}: non-positive coupling normalizer {normalizer}")]
    CorrectionBreakdown { qubit: usize, normalizer: f64 },

    /// Two normal-mode frequencies coincide; the tone matching is ill-defined.
    #[error("degenerate dispersion: modes k = {k1} and k = {k2} have equal frequencies")]
    DegenerateDispersion { k1: i64, k2: i64 },

    /// The drift matrix is not Hurwitz; the Lyapunov equation has no unique steady state.
    #[error("no unique steady state: drift matrix is not Hurwitz ({detail})")]
    NoUniqueSteadyState { detail: String },
}

impl Error {
    pub(crate) fn invalid(what: impl Into<String>) -> Self {
        Error::InvalidInput { what: what.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
