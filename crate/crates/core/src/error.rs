use thiserror::Error;

/// Errors shared across the crate. Guard violations map to CLI exit code 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("fibonacci index {0} exceeds the 128-bit overflow guard (max {1})")]
    OverflowGuard(u32, u32),

    #[error("index {got} outside the supported range for {what} ({lo}..={hi})")]
    RangeGuard {
        what: &'static str,
        got: u32,
        lo: u32,
        hi: u32,
    },

    #[error("integrand dimension {integrand} does not match rule dimension {rule}")]
    DimensionMismatch { rule: usize, integrand: usize },

    #[error("integrand `{0}` carries no exact integral")]
    MissingExactIntegral(String),

    #[error("L_p grid norms are only sampled for p >= 1, got p = {0}")]
    UnsupportedExponent(f64),

    #[error("chi enumeration for s = ({0}, {1}) at n = {2} exceeds the term cap")]
    CapExceeded(u32, u32, u32),

    #[error("grid for d = {d}, m = {m} would exceed the point cap of {max}")]
    SizeGuard { d: usize, m: u32, max: u64 },

    #[error("level {level:?} offers only {found} free cells but {need} are required")]
    InsufficientCells {
        level: Vec<u32>,
        found: usize,
        need: usize,
    },

    #[error("witness does not vanish at node {node:?} (value {value:e})")]
    VanishingCheckFailed { node: Vec<f64>, value: f64 },

    #[error("rate fit needs at least {min} rows spanning two decades, got {rows} rows over {decades:.2} decades")]
    DegenerateFit {
        rows: usize,
        min: usize,
        decades: f64,
    },

    #[error("{0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidSpec(msg.into())
    }
}
