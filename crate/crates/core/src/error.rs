use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("configuration error at `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("element has zero norm; smoothness indicator undefined")]
    DegenerateElement,

    #[error("least-squares fit is underdetermined (fewer than two distinct abscissae)")]
    UnderdeterminedFit,

    #[error("non-physical state in element {element} at t = {time}: density {density}, pressure {pressure}")]
    Positivity { element: usize, time: f64, density: f64, pressure: f64 },

    #[error("non-finite value in solution state")]
    NonFinite,

    #[error("time step stagnated at t = {t} (dt = {dt})")]
    Stagnation { t: f64, dt: f64 },

    #[error("Riemann data generates vacuum")]
    Vacuum,

    #[error("Riemann solver did not converge after {0} iterations")]
    RiemannNoConvergence(usize),

    #[error("unknown sample function `{0}`")]
    UnknownFunction(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config { key: key.into(), message: message.into() }
    }

    /// Failures of the numerical method itself, as opposed to bad input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::Positivity { .. }
                | Error::NonFinite
                | Error::Stagnation { .. }
                | Error::Vacuum
                | Error::RiemannNoConvergence(_)
        )
    }
}
