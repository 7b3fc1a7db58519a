use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid transition matrix: {0}")]
    InvalidMatrix(String),

    #[error("symbol {symbol} outside alphabet of size {size}")]
    SymbolOutOfRange { symbol: u32, size: usize },

    #[error("word {0} is not admissible")]
    Inadmissible(String),

    #[error("subshift is not mixing: {0}")]
    NotMixing(String),

    #[error("no connecting word of length {gap} joins {left} to {right}")]
    NoConnector {
        left: String,
        right: String,
        gap: usize,
    },

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("word of length {len} is shorter than the potential depth {depth}")]
    WordTooShort { len: usize, depth: usize },

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("potential must be strictly positive, minimum value is {0}")]
    NonPositivePotential(f64),

    #[error("{what} = {count} exceeds the limit {limit}")]
    TooLarge {
        what: String,
        count: u128,
        limit: u128,
    },

    #[error(
        "z0 = {0} is a transitive point of the subshift; \
         non-dense orbit sets are only defined here for points whose orbit closure is not the whole space"
    )]
    TransitivePoint(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("itinerary of {x} is undefined at step {step}: {reason}; supply z0 symbolically instead")]
    Itinerary {
        x: String,
        step: usize,
        reason: String,
    },

    #[error("invalid construction parameters: {0}")]
    InvalidParams(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
