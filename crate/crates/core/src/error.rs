use thiserror::Error;

/// Errors raised by trajectory construction, the cost engine, and the
/// frontier solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvacError {
    /// An argument lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A trajectory pair leaves part of the circle unvisited, or the
    /// catch-up root could not be located inside the search horizon.
    #[error("infeasible algorithm: {0}")]
    Infeasible(String),

    /// A family rejected its parameters or produced a discontinuous path.
    #[error("construction error: {0}")]
    Construction(String),

    /// Adaptive quadrature hit its depth limit before meeting the tolerance.
    #[error("quadrature did not converge (partial result {partial}, estimated error {error:e})")]
    Tolerance { partial: f64, error: f64 },

    /// An iterative solver failed to converge.
    #[error("numeric error: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, EvacError>;
