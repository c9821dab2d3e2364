use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("code has no variables")]
    EmptyCode,
    #[error("check {check} references variable {index}, but n = {n}")]
    IndexOutOfRange { check: usize, index: usize, n: usize },
    #[error("check {check} lists a variable twice")]
    DuplicateIndex { check: usize },
    #[error("check {check} is empty")]
    EmptyCheck { check: usize },
    #[error("check {check} has degree 1")]
    DegreeOneCheck { check: usize },
    #[error("no checks selected")]
    EmptyCheckSet,
    #[error("check index {check} out of range (m = {m})")]
    CheckOutOfRange { check: usize, m: usize },
    #[error("degrees must be at least 2 (dv = {dv}, dc = {dc})")]
    DegreeTooSmall { dv: usize, dc: usize },
    #[error("n * dv must be divisible by dc (n = {n}, dv = {dv}, dc = {dc})")]
    NotDivisible { n: usize, dv: usize, dc: usize },
    #[error("degrees too large for the code size (n = {n}, m = {m}, dv = {dv}, dc = {dc})")]
    DegreeExceedsSize { n: usize, m: usize, dv: usize, dc: usize },
    #[error("could not remove parallel edges within {attempts} attempts")]
    ParallelEdges { attempts: usize },
    #[error("code length {n} exceeds the enumeration limit of {limit}")]
    TooLarge { n: usize, limit: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("alist line {line}: {kind}")]
pub struct AlistError {
    pub line: usize,
    pub kind: AlistErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlistErrorKind {
    #[error("unexpected end of input")]
    UnexpectedEof,
    #[error("expected a non-negative integer, found {0:?}")]
    NotAnInteger(String),
    #[error("malformed header: {0}")]
    Header(String),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("index {0} repeated")]
    DuplicateIndex(usize),
    #[error("list has {found} nonzero entries, degree line says {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("row and column lists disagree")]
    AdjacencyMismatch,
    #[error("trailing data after the last row list")]
    TrailingData,
    #[error(transparent)]
    Code(#[from] CodeError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("objective has length {objective}, expected {n}")]
    DimensionMismatch { n: usize, objective: usize },
    #[error("constraint {index}: {reason}")]
    InvalidConstraint { index: usize, reason: String },
    #[error("warm-start basis does not match the problem")]
    BasisMismatch,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CutError {
    #[error("subset V has even size {0}")]
    EvenSubset(usize),
    #[error("variable {0} of V is not in the neighborhood")]
    NotInNeighborhood(usize),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecodeError {
    #[error("LLR vector has length {gamma}, code has n = {n}")]
    DimensionMismatch { n: usize, gamma: usize },
    #[error("check degree {degree} exceeds the full-relaxation limit of {limit}")]
    DegreeTooLarge { degree: usize, limit: usize },
    #[error("max_iterations must be at least 1")]
    ZeroIterations,
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Code(#[from] CodeError),
}
