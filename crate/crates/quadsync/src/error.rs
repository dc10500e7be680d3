use thiserror::Error;

/// Errors shared by every module of the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside its documented domain.
    #[error("{name} = {value} is outside {domain}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// The coupling is too weak for the geometric tail bound to converge.
    #[error("coupling k = {k} is not above the threshold {threshold}; the series bound diverges")]
    BoundInvalid { k: f64, threshold: f64 },

    /// The orbit hit the critical point to machine precision, so log|T'| blows up.
    #[error("orbit derivative vanished at step {step} (|T'| < 1e-300)")]
    SingularOrbit { step: usize },

    /// Fewer samples than the estimator can work with.
    #[error("sample set too small: {n} < {min}")]
    DegenerateSample { n: usize, min: usize },

    /// The smallest query radius captured no sample at all.
    #[error("empty ball: no sample within radius {radius} of x = {center}")]
    EmptyBall { center: f64, radius: f64 },

    /// Toy-model parameters violate the pressure/exponent constraints.
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// A generated value escaped [-1, 1] by more than rounding noise.
    #[error("confinement violated: {value} left [-1, 1] at step {step}")]
    ConfinementViolated { value: f64, step: usize },

    /// A radius window is empty, inverted, or otherwise unusable.
    #[error("invalid scale window: {0}")]
    InvalidWindow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
