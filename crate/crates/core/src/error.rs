use thiserror::Error;

/// Errors raised by constructions and searches in this crate.
///
/// Counterexamples found by the lemma harnesses are not errors; they are
/// returned as verdicts.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("a hypergraph needs at least one vertex")]
    NoVertices,
    #[error("vertex {vertex} is outside the vertex range 0..{n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edges must be nonempty")]
    EmptyEdge,
    #[error("at most {max} vertices are supported, got {n}")]
    TooManyVertices { n: usize, max: usize },
    #[error("edge of size {size} in a hypergraph declared {r}-uniform")]
    UniformityMismatch { size: usize, r: usize },
    #[error("the hypergraph has no declared or detected uniformity")]
    NotUniform,
    #[error("parts {0} and {1} overlap")]
    OverlappingParts(usize, usize),
    #[error("coloring has {got} entries but the hypergraph has {n} vertices")]
    PartialColoring { got: usize, n: usize },
    #[error("color {color} is outside the palette of size {palette}")]
    ColorOutOfPalette { color: usize, palette: usize },
    #[error("coloring is not proper: edge {0:?} is monochromatic")]
    ImproperColoring(Vec<usize>),
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(usize),
    #[error("modulus {0} is not prime (non-prime moduli must be requested explicitly)")]
    NotPrime(usize),
    #[error("modulus {p} is smaller than the uniformity {r}")]
    ModulusBelowUniformity { p: usize, r: usize },
    #[error("Kneser uniformity must be at least 2, got {0}")]
    KneserUniformity(usize),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("the group action is not free")]
    NotFree,
    #[error("complexes carry different group actions")]
    GroupMismatch,
    #[error("ordering is not a bijection onto the vertex set")]
    NotBijection,
    #[error("input outside the function's domain: {0}")]
    OutsideDomain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
