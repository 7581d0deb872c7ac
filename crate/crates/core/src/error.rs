use thiserror::Error;

/// Crate-wide error type.
///
/// Construction of the main objects (fields, algebras, modules, complexes,
/// perversity data) is validating; every variant below names the check that
/// failed rather than a generic condition.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field F_{p}^{m} exceeds the supported size")]
    FieldTooLarge { p: u64, m: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields: GF({p1},{m1}) vs GF({p2},{m2})")]
    FieldMismatch { p1: u64, m1: u32, p2: u64, m2: u32 },
    #[error("no embedding: element of degree {degree} into GF({p},{m})")]
    NoEmbedding { degree: u32, p: u64, m: u32 },
    #[error("operation requires enumerating {needed} field elements, cap is {cap}")]
    EnumerationCap { needed: u64, cap: u64 },

    #[error("structure constants are not associative at basis triple ({i},{j},{k})")]
    NotAssociative { i: usize, j: usize, k: usize },
    #[error("designated unit vector is not a two-sided identity (fails at basis index {0})")]
    NoUnit(usize),
    #[error("algebra dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("algebra is not split: simple module #{witness} has endomorphism ring of dimension {end_dim}")]
    NotSplit { witness: usize, end_dim: usize },
    #[error("operands live over different algebras")]
    AlgebraMismatch,
    #[error("path algebra quotient did not saturate below the cap ({0} basis paths)")]
    InfiniteDimensional(usize),
    #[error("relation mixes paths of different lengths or endpoints; only uniform relations are supported")]
    InhomogeneousRelation,

    #[error("zero vector cannot be spun")]
    ZeroVector,
    #[error("module splitter exhausted {0} words without reaching a decision")]
    SplitSearchExhausted(usize),
    #[error("module isomorphism search exhausted its budget without a certificate")]
    IsoUndecided,

    #[error("matrix is not a module homomorphism (fails against basis element {0})")]
    NotAHomomorphism(usize),
    #[error("differentials do not compose to zero at degree {0}")]
    NotAComplex(i64),
    #[error("complex/datum labels do not match the algebra's simple registry")]
    LabelMismatch,
    #[error("perversity chains disagree; composition undefined")]
    ChainMismatch,
    #[error("malformed perversity datum: {0}")]
    BadDatum(String),
    #[error("induced K0 matrix is not invertible over the integers")]
    K0NotInvertible,

    #[error("invalid sigma-Morita witness: {0}")]
    InvalidWitness(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("multiplication table is not a group: {0}")]
    NotAGroup(String),
    #[error("group order {order} exceeds cap {cap}")]
    GroupTooLarge { order: usize, cap: usize },
    #[error("values do not form a 2-cocycle at triple ({0},{1},{2})")]
    NotACocycle(usize, usize, usize),
    #[error("map is not an action by automorphisms: {0}")]
    NotAnAction(String),
    #[error("cocycle value order {n} is divisible by the characteristic {p}")]
    OrderNotCoprime { n: u64, p: u64 },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
