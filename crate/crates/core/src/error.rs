use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    CompositeModulus(String),
    #[error("extension modulus is reducible over the base field")]
    ReducibleModulus,
    #[error("extension modulus must have degree at least 1")]
    ZeroDegreeModulus,
    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),
    #[error("no root of unity of order {n} in a field with {size} elements")]
    NoSuchRoot { n: u64, size: String },
    #[error("element is not in the subgroup generated by zeta")]
    NotInSubgroup,
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("operands live over different base rings")]
    MixedBase,
    #[error("subspace is not a unital subalgebra: {0}")]
    NotSubalgebra(String),
    #[error("no primitive element found")]
    NoPrimitiveElement,
    #[error("dual pair axioms fail: {0}")]
    AxiomsFailed(String),
    #[error("coefficient cannot be mapped into the target ring: {0}")]
    CoefficientNotMapped(String),
    #[error("invalid Hopf algebra data: {0}")]
    InvalidHopf(String),
    #[error("dimension cap exceeded: {0}")]
    DimensionCapExceeded(String),
    #[error("adjoint map is not an algebra homomorphism")]
    AdjointNotAlgebraMap,
    #[error("operation requires a field base")]
    NotAField,
    #[error("points take values in different rings")]
    MixedTarget,
    #[error("linear map is not an algebra homomorphism: {0}")]
    NotAlgebraMap(String),
    #[error("order search exceeded {0} steps")]
    OrderSearchExceeded(usize),
    #[error("elementary divisor sequences differ")]
    SeqMismatch,
    #[error("malformed pairing table: {0}")]
    MalformedTable(String),
    #[error("characteristic {p} divides the order {n}")]
    CharDividesOrder { p: u64, n: usize },
    #[error("expected {expected} points, found {found}")]
    SplitCountMismatch { expected: usize, found: usize },
    #[error("pairing value outside the group generated by zeta")]
    ZetaOrderTooSmall,
    #[error("precision exhausted at {0} bits")]
    PrecisionExhausted(usize),
    #[error("algebra is not etale")]
    NotEtale,
    #[error("bad reduction: {0}")]
    BadReduction(String),
    #[error("image under the automorphism is not a point")]
    NotAPoint,
    #[error("could not solve for the automorphism matrix: {0}")]
    SolveFailed(String),
    #[error("coefficients are not fixed by the Galois action")]
    NotDescended,
    #[error("interpolation nodes are not distinct")]
    SingularVandermonde,
    #[error("parameter must be nonzero")]
    ZeroParameter,
    #[error("unsupported base ring: {0}")]
    UnsupportedBase(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
}
