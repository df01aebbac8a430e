use thiserror::Error;

use crate::quad::QuadError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}` for {context}: {reason}")]
    InvalidParameter {
        context: &'static str,
        field: &'static str,
        reason: String,
    },
    #[error("{family} has no density at {at}")]
    NoDensity { family: &'static str, at: f64 },
    #[error("quantile at level 0 is undefined for {family} (unbounded below)")]
    UndefinedQuantile { family: &'static str },
    #[error("expected shortfall is infinite for {0}")]
    InfiniteEs(String),
    #[error("numerical integration failed in {context}: {source}")]
    Quadrature {
        context: &'static str,
        source: QuadError,
    },
    #[error("sample is empty")]
    EmptySample,
    #[error("sample value at index {index} is not finite")]
    NonFiniteValue { index: usize },
    #[error("no complete block of size {m} (gap {gap}) fits in {n} observations")]
    NoCompleteBlock { n: usize, m: usize, gap: usize },
    #[error(
        "need >= 2 complete blocks; reduce m (got {blocks} block(s) of size {m} with gap {gap} \
         from {n} observations; largest valid m is {max_m})"
    )]
    TooFewBlocks {
        n: usize,
        m: usize,
        gap: usize,
        blocks: usize,
        max_m: usize,
    },
    #[error("trimming {k} points leaves nothing of a sample of size {n}")]
    TrimTooLarge { k: usize, n: usize },
    #[error("corruption touches {k} points but the sample has only {n}")]
    CorruptionTooLarge { k: usize, n: usize },
    #[error("corruption index {index} outside 1..={n}")]
    CorruptionIndex { index: usize, n: usize },
    #[error("trial {trial} at N={n} failed: {source}")]
    Trial {
        n: usize,
        trial: u64,
        source: Box<Error>,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn param(
        context: &'static str,
        field: &'static str,
        reason: impl Into<String>,
    ) -> Self {
        Error::InvalidParameter {
            context,
            field,
            reason: reason.into(),
        }
    }
}
