use thiserror::Error;

/// Errors raised by model construction, the Bethe solver and the evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("spin energies must be strictly ascending (violated at index {index})")]
    NonAscendingEnergies { index: usize },
    #[error("coupling g must be positive, got {g}")]
    NonPositiveCoupling { g: f64 },
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),
    #[error("invalid disorder specification: {0}")]
    InvalidSpec(String),
    #[error("spin energies coincide within {tolerance:e} after {attempts} resampling attempts")]
    DistinctnessViolation { attempts: usize, tolerance: f64 },
    #[error("residual evaluated on the pole at epsilon_{index}")]
    PoleHit { index: usize },
    #[error("no sign change bracketed for root {alpha} after {expansions} expansions")]
    BracketFailure { alpha: usize, expansions: usize },
    #[error("root {alpha} not converged after {iterations} iterations (bracket width {width:e})")]
    ConvergenceFailure {
        alpha: usize,
        iterations: usize,
        width: f64,
    },
    #[error("lambda = {lambda} is not a root of the Bethe equation (Newton distance {distance:e})")]
    NotARoot { lambda: f64, distance: f64 },
    #[error("spin index {index} outside 1..={spins}")]
    IndexOutOfRange { index: usize, spins: usize },
    #[error("Bell state needs two distinct spins, got {0} twice")]
    CoincidentBellSpins(usize),
    #[error("energy {value} outside the open band ({lower}, {upper})")]
    OutOfRange { value: f64, lower: f64, upper: f64 },
    #[error("initial condition not supported by this evaluator: {0}")]
    UnsupportedCondition(&'static str),
    #[error("Jacobi sweeps did not converge after {sweeps} sweeps (off-diagonal norm {off:e})")]
    EigenConvergence { sweeps: usize, off: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
