use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma has a pole at x = {x}")]
    Pole { x: f64 },

    #[error("argument out of domain: {what}")]
    Domain { what: &'static str },

    #[error("flux {phi} is an integer; no critical channel exists")]
    IntegerFlux { phi: f64 },

    #[error("irregular term not allowed in non-critical channel l = {l}")]
    IrregularForbidden { l: i64 },

    #[error("degenerate configuration: {what}")]
    Degenerate { what: &'static str },

    #[error("momenta {p} and {p_prime} coincide")]
    EqualMomenta { p: f64, p_prime: f64 },

    #[error("quadrature did not converge: {what}")]
    Convergence { what: &'static str },

    #[error("channel mismatch: {what}")]
    ChannelMismatch { what: &'static str },

    #[error("channel l = {l} is not critical")]
    NonCriticalChannel { l: i64 },

    #[error("need at least 3 distinct momenta, got {got}")]
    InsufficientSamples { got: usize },

    #[error("least-squares fit is singular")]
    SingularFit,

    #[error("infinite extension parameter has no finite coefficient ratio")]
    InfiniteParameter,

    #[error("resonant configuration, defect = {defect:e}")]
    Resonant { defect: f64 },

    #[error("matching ratio denominator vanishes ({denominator:e})")]
    NumericalPole { denominator: f64 },

    #[error("g-factor denominator vanishes")]
    DegenerateDenominator,

    #[error("first-order expansion undefined for alpha = 0")]
    ZeroAlpha,

    #[error("no sign change of the target function on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
}

impl Error {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Pole { .. } => "pole",
            Error::Domain { .. } => "domain",
            Error::IntegerFlux { .. } => "integer_flux",
            Error::IrregularForbidden { .. } => "irregular_forbidden",
            Error::Degenerate { .. } => "degenerate",
            Error::EqualMomenta { .. } => "equal_momenta",
            Error::Convergence { .. } => "convergence",
            Error::ChannelMismatch { .. } => "channel_mismatch",
            Error::NonCriticalChannel { .. } => "non_critical_channel",
            Error::InsufficientSamples { .. } => "insufficient_samples",
            Error::SingularFit => "singular_fit",
            Error::InfiniteParameter => "infinite_parameter",
            Error::Resonant { .. } => "resonant",
            Error::NumericalPole { .. } => "numerical_pole",
            Error::DegenerateDenominator => "degenerate_denominator",
            Error::ZeroAlpha => "zero_alpha",
            Error::NoBracket { .. } => "no_bracket",
        }
    }

    /// True for failures of a numerical procedure on otherwise valid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Convergence { .. }
                | Error::NoBracket { .. }
                | Error::Resonant { .. }
                | Error::NumericalPole { .. }
                | Error::SingularFit
                | Error::DegenerateDenominator
                | Error::Degenerate { .. }
        )
    }
}
