use thiserror::Error;

/// Error type shared by every subsystem in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Adaptive quadrature ran out of subdivisions before meeting the
    /// requested tolerance. Carries the best value and error estimate
    /// reached so the caller can decide whether it is usable.
    #[error("quadrature did not converge: value ~ {value}, error estimate {error}")]
    QuadratureNonConvergence { value: f64, error: f64 },

    /// The p-energy integral diverged (non-integrable singularity).
    #[error("divergent energy integral: partial value {partial}")]
    DivergentEnergy { partial: f64 },

    /// ODE step size underflow, typically when the trajectory approaches
    /// the characteristic set. The last accepted state is preserved.
    #[error("ode step underflow at s = {s}; last state retained")]
    OdeSingularity { s: f64, last_state: Vec<f64> },

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("degenerate parametrization: {0}")]
    DegenerateParametrization(String),

    #[error("singular jacobian at {0:?}")]
    SingularJacobian(Vec<f64>),

    /// |mu| >= 1: the planar map is not orientation preserving at the point.
    #[error("orientation violated: |mu| = {0} >= 1")]
    Orientation(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("missing parameter `{0}`")]
    MissingParameter(String),

    /// The oracle hit its iteration cap. Best primal value and duality gap
    /// are reported so partial results stay inspectable.
    #[error("oracle did not converge: best value {value}, gap {gap}")]
    OracleNonConvergence { value: f64, gap: f64 },

    #[error("plates are not connected inside the grid mask")]
    DisconnectedPlates,
}

pub type Result<T> = std::result::Result<T, Error>;
