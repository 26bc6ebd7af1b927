use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input value violates a documented precondition. The message names
    /// the offending field.
    #[error("invalid parameter `{field}`: {reason}")]
    Parameter { field: String, reason: String },

    #[error("dimension mismatch in `{what}`: expected {expected}, got {actual}")]
    Dimension {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    /// The greedy was handed a subproblem whose all-ones point is infeasible.
    #[error("subproblem is infeasible: period {period} can reach {reachable} but needs {required}")]
    InfeasibleInput {
        period: usize,
        reachable: f64,
        required: f64,
    },

    #[error("exhaustive search refused: {num_vars} variables exceeds the cap of {max_vars}")]
    SizeGuard { num_vars: usize, max_vars: usize },

    #[error("variable {0} is not free in this subproblem")]
    NotFree(usize),

    #[error("cannot branch on an empty free set")]
    EmptyFreeSet,

    #[error("simplex did not converge within {0} pivots")]
    IterationLimit(usize),

    #[error("no feasible scenario after {attempts} draws (K={num_stations}, scenario {scenario})")]
    NoFeasibleScenario {
        num_stations: usize,
        scenario: usize,
        attempts: usize,
    },

    #[error(
        "branch-and-bound and exhaustive search disagree for K={num_stations}, scenario {scenario} \
         (seed {seed}): bnb={bnb:?}, oracle={oracle:?}"
    )]
    OracleMismatch {
        num_stations: usize,
        scenario: usize,
        seed: u64,
        bnb: Option<usize>,
        oracle: Option<usize>,
    },

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parameter(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parameter {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
