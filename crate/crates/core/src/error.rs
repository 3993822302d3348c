use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polar undefined at 0")]
    PolarAtZero,
    #[error("cut locus: log undefined at -1")]
    CutLocus,
    #[error("chart singular")]
    ChartSingular,
    #[error("zero quaternion cannot be normalized")]
    ZeroNorm,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("invalid row subset: {0}")]
    BadSubset(String),
    #[error("singular matrix")]
    Singular,
    #[error("dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("degree overflow: degree {degree} on dimension {dim}")]
    DegreeOverflow { degree: usize, dim: usize },
    #[error("bracket table is not antisymmetric at ({0}, {1})")]
    NonAntisymmetricBracket(usize, usize),
    #[error("orbit too small: dimension {0} < 4")]
    OrbitTooSmall(usize),
    #[error("degenerate plane representation")]
    DegeneratePlane,
    #[error("rank deficient: rank {rank} < {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("non-finite state at step {0}")]
    NonFinite(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
