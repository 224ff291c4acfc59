use thiserror::Error;

use crate::mdp::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The document could not be read as an MDP (bad JSON, unknown labels,
    /// mismatched shapes).
    #[error("schema error: {0}")]
    Schema(String),

    /// A parameter lies outside the range the model accepts.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid MDP: {}", join_violations(.0))]
    Validation(Vec<Violation>),

    #[error("singular linear system while evaluating policy")]
    Singular,

    #[error("value iteration did not converge within {iterations} iterations (last change {change:e})")]
    IterationLimit { iterations: usize, change: f64 },

    #[error("policy enumeration needs {count} policies, above the cap of {cap}")]
    CapExceeded { count: u128, cap: u64 },

    #[error("no deterministic policy satisfies the optimality condition")]
    NoOptimalPolicy,

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("unknown action `{action}` in state `{state}`")]
    UnknownAction { state: String, action: String },

    #[error("invalid policy: {0}")]
    InvalidPolicy(String),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error(
        "no sign change of q({a1}) - q({a2}) on [{lo}, {hi}]: {dq_lo:e} at {lo}, {dq_hi:e} at {hi}"
    )]
    NoSignChange {
        a1: String,
        a2: String,
        lo: f64,
        hi: f64,
        dq_lo: f64,
        dq_hi: f64,
    },

    #[error("sweep cell {index} failed: {source}")]
    Cell {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("csv export failed: {0}")]
    Csv(#[from] csv::Error),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

impl Error {
    /// True for errors caused by a malformed or out-of-range request, as
    /// opposed to a solver failure.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::Schema(_)
            | Error::Domain(_)
            | Error::Validation(_)
            | Error::UnknownPreset(_)
            | Error::UnknownParameter(_)
            | Error::UnknownState(_)
            | Error::UnknownAction { .. }
            | Error::InvalidPolicy(_)
            | Error::InvalidSweep(_)
            | Error::InvalidConfig(_) => true,
            Error::Cell { source, .. } => source.is_input_error(),
            _ => false,
        }
    }
}
