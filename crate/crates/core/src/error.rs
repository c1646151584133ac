use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field of order {p}^{a} exceeds the 2^20 cap")]
    FieldTooLarge { p: u32, a: u32 },
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("singular matrix")]
    Singular,
    #[error("group too large: closure exceeds the cap of {cap} elements")]
    TooLarge { cap: usize },
    #[error("invalid permutation: {0}")]
    InvalidPerm(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("group is not transitive")]
    NotTransitive,
    #[error("block system is not invariant under the group")]
    BlocksNotInvariant,
    #[error("no fixed point: {0}")]
    NoFixedPoint(String),
    #[error("unsupported case: {0}")]
    Unsupported(String),
    #[error("{p} divides the group order {order}")]
    NotCoprime { p: u32, order: usize },
    #[error("primitive group is not of affine type")]
    NotAffine,
    #[error("structure not recognized: {0}")]
    Structure(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("construction `{path}` left a stabilizer intersection of order {order}")]
    Construction { path: String, order: usize },
    #[error("no base of size two exists for this group")]
    NoBase,
    #[error("invalid input: {0}")]
    Input(String),
}
