use thiserror::Error;

use crate::superfree::GeneratorId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty E/D word")]
    EmptyWord,
    #[error("invalid letter {0:?} in word (expected E or D)")]
    BadLetter(char),
    #[error("affine root datum needs at least 3 letters, got {0}")]
    AffineTooShort(usize),
    #[error("loop cutoff {0} requires an affine datum")]
    LoopCutoffFinite(i64),
    #[error("weight vectors over different (m,n)")]
    WeightMismatch,
    #[error("invalid simple root index {0}")]
    InvalidIndex(usize),
    #[error("step {step}: invalid simple root index {index}")]
    InvalidWordStep { step: usize, index: usize },
    #[error("simple root {0} is odd")]
    OddRoot(usize),
    #[error("simple root {0} is even")]
    EvenRoot(usize),
    #[error("negative exponent {0}")]
    NegativeExponent(i64),
    #[error("generator {0} has no image")]
    Unmapped(GeneratorId),
    #[error("image of {0} has the wrong parity")]
    ParityMismatch(GeneratorId),
    #[error("Cartan entry {entry} at ({i},{j}) has no table row")]
    UntabulatedCartan { i: usize, j: usize, entry: i64 },
    #[error("invalid loop cutoff {0}")]
    InvalidCutoff(i64),
    #[error("element contains hbar")]
    HbarPresent,
    #[error("generator {0} is not a level-0 Lie generator")]
    NotLieLevel(GeneratorId),
    #[error("Laurent degree exceeds cutoff {0}")]
    Overflow(i64),
    #[error("word length {len} exceeds bound {bound}")]
    LengthBound { len: usize, bound: usize },
    #[error("bound {bound} is below the longest relation ({needed})")]
    BoundTooSmall { bound: usize, needed: usize },
    #[error("empty generator support")]
    EmptySupport,
    #[error("generator {0} is outside the support")]
    OutsideSupport(GeneratorId),
    #[error("relation {0} is not homogeneous")]
    Inhomogeneous(String),
    #[error("cutoff mismatch: {0}")]
    CutoffMismatch(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(GeneratorId),
    #[error("tensor arity mismatch")]
    ArityMismatch,
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
