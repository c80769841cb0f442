//! Numerical toolkit for matrix multiplication operators `M_u : f ↦ u·f` on
//! discretized Banach function spaces.
//!
//! A symbol `u : Ω → M_N(C)` over a weighted-atom measure space induces the
//! operator `M_u`. This crate decides boundedness, invertibility, closed
//! range, compactness and Fredholmness of `M_u`, computes its spectrum, and
//! solves the abstract Cauchy problem `v' = M_u v, v(0) = x` through the
//! multiplication semigroup `T(t) = M_{exp(tu)}`. Every analytic answer can
//! be cross-checked against a brute-force block-diagonal [`oracle`].
//!
//! Norms on the function space come in three families ([`space::NormSpec`]):
//! `L^p`, Orlicz with a Δ₂ Young function (Luxemburg norm), and Lorentz
//! `L^{p,q}` via decreasing rearrangement. The pointwise norm on `C^N` is the
//! sup norm throughout, which induces the maximal-absolute-row-sum norm on
//! `M_N(C)`.

pub mod config;
pub mod expr;
pub mod matrix;
pub mod measure;
pub mod operator;
pub mod oracle;
pub(crate) mod par;
pub mod probe;
pub mod report;
pub mod semigroup;
pub mod space;
pub mod suite;
pub mod symbol;

mod quad;

use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("non-finite symbol value at atom {atom}")]
    NonFinite { atom: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular or ill-conditioned (pivot {pivot:.3e} below threshold {threshold:.3e})")]
    Singular { pivot: f64, threshold: f64 },

    #[error("eigenvalue iteration did not converge (best residual {residual:.3e})")]
    EigenNonConvergence { residual: f64 },

    #[error("operation requires a finite-mode space")]
    SequenceModeUnsupported,

    #[error("sequence-mode symbol is missing its tail envelope")]
    MissingTailEnvelope,

    #[error("point {0} is within tolerance of the spectrum; resolvent undefined")]
    SpectrumTooClose(String),

    #[error("time grid must be ascending and start at 0")]
    BadTimeGrid,

    #[error("sets are not nested")]
    SetsNotNested,

    #[error("quadrature failed to converge to the requested tolerance")]
    QuadratureNonConvergence,

    #[error("insufficient decay margin: Re λ = {re_lambda} must exceed the spectral bound {bound} by at least {margin}")]
    InsufficientDecay {
        re_lambda: f64,
        bound: f64,
        margin: f64,
    },

    #[error("hypothesis violation: {0}")]
    Hypothesis(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
