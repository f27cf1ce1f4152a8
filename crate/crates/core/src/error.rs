//! Error type shared by the solver modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("layer: {0}")]
    InvalidLayer(String),
    #[error("stack: {0}")]
    InvalidStack(String),
    #[error("plane wave: {0}")]
    InvalidPlaneWave(String),
    #[error("free propagation through a semi-infinite layer is undefined")]
    SemiInfiniteLayer,
    #[error("degenerate stack: |M22| below 1e-30, no outgoing wave")]
    DegenerateStack,
    #[error("geometry is not evanescent: incidence below the critical angle")]
    BelowCriticalAngle,
    #[error("no interior minimum bracketed on the search interval")]
    NoBracket,
    #[error("quadrature did not converge: achieved relative error {achieved:.3e}")]
    QuadratureNoConvergence { achieved: f64 },
    #[error("fit did not converge: residual norm {residual:.3e}")]
    FitNoConvergence { residual: f64 },
    #[error("atom-number resolution undefined for zero signal-to-noise ratio")]
    UndefinedResolution,
    #[error("density profile: {0}")]
    InvalidProfile(String),
    #[error("io: {0}")]
    Io(String),
    #[error("{0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
