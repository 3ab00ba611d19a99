use thiserror::Error;

/// Which marginal of a demand matrix an error or choice refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Source,
    Destination,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Source => f.write_str("source"),
            Side::Destination => f.write_str("destination"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("node {node} has zero {side} activity")]
    ZeroActivityNode { node: usize, side: Side },

    #[error("precision exceeded: {0}")]
    PrecisionExceeded(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid demand matrix: {0}")]
    InvalidDemand(String),

    #[error("invalid decimal {0:?}")]
    InvalidDecimal(String),

    #[error("invalid bit string {0:?}")]
    InvalidBitString(String),

    #[error("node set mass exceeds 1/2")]
    InvalidSet,

    #[error("node index {index} out of range for {n} nodes")]
    NodeOutOfRange { index: usize, n: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("inconsistent network file: {0}")]
    InconsistentNetwork(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
