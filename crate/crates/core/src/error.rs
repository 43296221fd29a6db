use alloc::boxed::Box;
use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{name} = {value} is outside its domain ({requirement})")]
    Domain {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    #[error("family `{family}` takes {expected} generator parameter(s), got {got}")]
    XiArity {
        family: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("unknown generator `{0}` (expected one of exp, lfr, weib, gomp, wg, mwe)")]
    UnknownFamily(String),

    #[error("no data")]
    NoData,

    #[error("row {row}: coordinates must be finite and positive, got ({x1}, {x2})")]
    NonPositiveObservation { row: usize, x1: f64, x2: f64 },

    #[error("{0} did not converge")]
    NoConvergence(&'static str),

    #[error("could not bracket a root of the {0} score")]
    Bracket(&'static str),

    #[error("{0} underflowed to zero")]
    Underflow(&'static str),

    #[error("M-step denominator for {0} vanished")]
    DegenerateMStep(&'static str),

    #[error("information matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("models are not nested ({0})")]
    NotNested(&'static str),

    #[error("sample size n = {n} too small for k = {k} free parameters")]
    TooFewObservations { n: usize, k: usize },

    #[error("EM iteration {iteration}: {source}")]
    AtIteration {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, requirement: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            requirement,
        }
    }

    pub(crate) fn at_iteration(self, iteration: usize) -> Self {
        Error::AtIteration {
            iteration,
            source: Box::new(self),
        }
    }
}
