//! Crate-wide error type.
//!
//! One enum covers every failure the library reports. The CLI maps classes of
//! variants onto distinct process exit codes (see [`Error::exit_code`]):
//! parse failures exit 2, violated preconditions exit 3, exhausted bounded
//! searches exit 4, and a missing rational root (retryable with the float
//! backend) exits 5.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The polynomial does not involve the named indeterminate, so the
    /// separant and initial with respect to it are undefined.
    #[error("undefined separant: polynomial does not involve indeterminate #{indet}")]
    UndefinedSeparant { indet: u32 },

    /// A substitution was requested without an image for an occurring
    /// indeterminate.
    #[error("missing substitution image for indeterminate #{indet}")]
    MissingImage { indet: u32 },

    /// Evaluation hit a derivative variable the table does not assign.
    #[error("derivative table does not assign {var}")]
    UnassignedVariable { var: String },

    /// Resultant of two polynomials both constant in the elimination variable.
    #[error("resultant undefined: both inputs are constant in {var}")]
    BothConstantInV { var: String },

    /// A forward/inverse image pair does not define an automorphism.
    #[error("invalid automorphism: {msg}")]
    InvalidAutomorphism { msg: String },

    /// The candidate inequation already lies in the saturation ideal.
    #[error("inequation lies in the saturation ideal of the hypersurface")]
    QInIdeal,

    /// The input failed the cheap irreducibility screen.
    #[error("input polynomial is obviously reducible: {reason}")]
    ReducibleInput { reason: String },

    /// The elimination resultant vanished; the defining polynomial is not
    /// irreducible or shares a factor with the separant-cleared inequation.
    #[error("elimination resultant vanished; defining polynomial is likely reducible")]
    ResultantVanished,

    /// An order precondition between the pair members does not hold.
    #[error("order precondition violated: {msg}")]
    PreconditionOrder { msg: String },

    /// A zero polynomial was supplied where a nonzero one is required.
    #[error("polynomial argument must be nonzero")]
    ZeroPolynomial,

    /// Randomized search exhausted its trial budget.
    #[error("search exhausted {trials} trials (bounds too small?)")]
    ExhaustedTrials { trials: u64 },

    /// Bounded elimination gave out before producing the required relations.
    #[error("primitive element search exceeded its bounds: {msg}")]
    BoundExceeded { msg: String },

    /// No choice of initial values keeps the guard away from zero.
    #[error("guard vanishes for every candidate choice of initial values")]
    GuardUnsatisfiable,

    /// The univariate step polynomial has no rational root; the float backend
    /// may still succeed.
    #[error("no rational root for the order-{order} step polynomial")]
    NoRationalRoot { order: u32 },

    /// The order-zero equation collapsed to a nonzero constant: no series
    /// solution extends the given inputs.
    #[error("no solution: order-0 residual is the nonzero constant {residual}")]
    OrderZeroResidual { residual: String },

    /// The recursion denominator vanished. The guard is supposed to rule this
    /// out; reaching it means the supplied guard does not control the separant.
    #[error("separant vanished on the candidate solution; guard does not contain the resultant")]
    SeparantVanished,

    /// The defining polynomial does not involve the distinguished indeterminate.
    #[error("defining polynomial does not involve the distinguished indeterminate #{indet}")]
    NotDependent { indet: u32 },

    /// In time mode the t-component of the computed solution must be s + λ.
    #[error("time component is not affine: {component}")]
    TimeComponentNotAffine { component: String },

    /// A time-mode equation has a genuine rational-function coefficient, which
    /// cannot be adjoined as a polynomial relation in t.
    #[error("coefficient {coeff} is not polynomial in t")]
    NonPolynomialTimeCoefficient { coeff: String },

    /// Series inputs are shorter than the requested truncation order.
    #[error("input series truncated at {got}, need at least {need}")]
    TruncationTooSmall { got: u32, need: u32 },

    /// Text input failed to parse; `pos` is a byte offset into the input.
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    /// Derivative orders must be nonnegative.
    #[error("negative derivative order at byte {pos}")]
    NegativeDerivativeOrder { pos: usize },

    /// A result document failed to parse.
    #[error("malformed document: {msg}")]
    Document { msg: String },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    /// An internal invariant failed; indicates a bug, not bad input.
    #[error("internal invariant violated: {msg}")]
    Internal { msg: String },
}

impl Error {
    /// Process exit code the CLI uses for this error.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            Syntax { .. } | NegativeDerivativeOrder { .. } | Document { .. } => 2,
            UndefinedSeparant { .. }
            | MissingImage { .. }
            | UnassignedVariable { .. }
            | BothConstantInV { .. }
            | InvalidAutomorphism { .. }
            | QInIdeal
            | ReducibleInput { .. }
            | ResultantVanished
            | PreconditionOrder { .. }
            | ZeroPolynomial
            | NotDependent { .. }
            | NonPolynomialTimeCoefficient { .. }
            | TruncationTooSmall { .. } => 3,
            ExhaustedTrials { .. }
            | BoundExceeded { .. }
            | GuardUnsatisfiable
            | OrderZeroResidual { .. }
            | SeparantVanished
            | TimeComponentNotAffine { .. } => 4,
            NoRationalRoot { .. } => 5,
            Io(_) | Internal { .. } => 1,
        }
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal { msg: msg.into() }
    }
}
