//! Crate-wide error type.

use thiserror::Error;

/// Everything that can go wrong in the engine.
///
/// Validation failures name the violated axiom together with a witness, so a
/// caller (or the CLI) can point at the offending basis elements.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("algebra axiom violated: {0}")]
    AlgebraAxiom(String),

    #[error("module axiom violated: {0}")]
    ModuleAxiom(String),

    #[error("morphism is not {0}")]
    BadMorphism(String),

    #[error("operands live over different algebras")]
    AlgebraMismatch,

    #[error("expected a {expected:?} module, got a {got:?} module")]
    SideMismatch {
        expected: crate::module::Side,
        got: crate::module::Side,
    },

    #[error(
        "module is not compact: resolution did not complete within degree window {window}; \
         generators per degree so far: {counts:?}"
    )]
    NotCompact {
        window: i64,
        counts: Vec<(i64, usize)>,
    },

    #[error("operation requires characteristic zero, field is {0}")]
    CharZeroRequired(String),

    #[error("operation requires the duality shift on both sides; report: {0}")]
    GorensteinRequired(String),

    #[error("irreducible-morphism universe did not stabilise: {0}")]
    UniverseUnstable(String),

    #[error("could not certify decomposition: {0}")]
    NotCertified(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("translation-quiver construction rejected: {0}")]
    BadTranslationQuiver(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
