use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element {element:?} not reached within radius {radius}")]
    RadiusExceeded { element: Vec<i64>, radius: u32 },

    #[error("requested ball radius {radius} exceeds the configured cap {cap}")]
    RadiusCap { radius: u32, cap: u32 },

    #[error("ball enumeration exceeded the element cap of {cap} (radius {radius})")]
    ElementCapExceeded { cap: usize, radius: u32 },

    #[error("group mismatch: `{left}` vs `{right}`")]
    GroupMismatch { left: String, right: String },

    #[error("invalid element {element:?} for group `{group}`")]
    InvalidElement { group: String, element: Vec<i64> },

    #[error("invalid spec `{spec}`: {reason}")]
    Spec { spec: String, reason: String },

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("not a Young function: {0}")]
    NotYoung(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("cocycle value is zero at {s:?}, {t:?}")]
    ZeroCocycle { s: Vec<i64>, t: Vec<i64> },

    #[error("cocycle is not unimodular at {s:?}, {t:?} (|value| = {modulus})")]
    NotUnimodular { s: Vec<i64>, t: Vec<i64>, modulus: f64 },

    #[error("cocycle value at {s:?}, {t:?} is not an {n}-th root of unity")]
    NotRootOfUnity { s: Vec<i64>, t: Vec<i64>, n: u32 },

    #[error("domination |Ω(s,t)| <= u(s) + v(t) violated at {s:?}, {t:?}: {lhs} > {rhs}")]
    DominationViolated { s: Vec<i64>, t: Vec<i64>, lhs: f64, rhs: f64 },

    #[error("|Ω| is not the coboundary of the weight at {s:?}, {t:?}")]
    CoboundaryMismatch { s: Vec<i64>, t: Vec<i64> },

    #[error("group `{0}` is not finite")]
    InfiniteGroup(String),

    #[error("support budget exceeded: {size} > {cap}")]
    SupportBudget { size: usize, cap: usize },

    #[error("no x0 found below {bound} for the p-function")]
    NoThreshold { bound: f64 },

    #[error("function file: {0}")]
    FunctionFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Budget errors are usage-level failures (exit code 2) rather than check failures.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::RadiusExceeded { .. } | Error::RadiusCap { .. } | Error::ElementCapExceeded { .. } | Error::SupportBudget { .. }
        )
    }

    pub fn spec(spec: &str, reason: impl Into<String>) -> Self {
        Error::Spec { spec: spec.to_string(), reason: reason.into() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
