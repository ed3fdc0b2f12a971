use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("exact zero test is only complete for inverse-free elements")]
    InverseSymbolsPresent,
    #[error("element declared invertible is not a loop at a single vertex: {0}")]
    NotALoop(String),
    #[error("continuant sequence is not alternating/composable at position {0}")]
    NotAlternating(usize),
    #[error("empty continuant needs an explicit anchor idempotent")]
    MissingAnchor,
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
    #[error("unknown inverse symbol: not among the declared inverted continuants")]
    UnknownInverse,
    #[error("symbol has no image under this quiver map")]
    UnmappedInverse,
    #[error("matrix is not invertible")]
    SingularMatrix,
    #[error("Gauss decomposition needs M22 != 0")]
    NotDecomposable,
    #[error("division by zero while evaluating a continued fraction")]
    DivisionByZero,
    #[error("failed to sample an invertible representation point after {0} retries")]
    SamplingFailed(usize),
    #[error("polyvector degree {0} is not supported (only 2 and 3)")]
    UnsupportedDegree(usize),
    #[error("fusion requires two distinct idempotents")]
    BadFusion,
    #[error("scalar substitution needs an inverse-free element")]
    ScalarSubstInverse,
    #[error("serialization: {0}")]
    Serialization(String),
    #[error("{0}")]
    Config(String),
}
