use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("oracle too large: more than {cap} elements")]
    OracleTooLarge { cap: usize },
    #[error("cap exceeded: {what} needs {required}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        required: String,
        cap: String,
    },
    #[error("tuple of length {len} is shorter than the word arity {arity}")]
    TupleTooShort { arity: usize, len: usize },
    #[error("element is not in the group (sift residue at level {level})")]
    NotAMember { level: usize },
    #[error("element is not in the subgroup: residue {residue} at level {level}")]
    NonMember { level: usize, residue: String },
    #[error("the group is solvable")]
    Solvable,
    #[error("the group is not just non-solvable")]
    NotJustNonSolvable,
    #[error("not a product of nonabelian simple groups: {0}")]
    NotProductOfSimples(String),
    #[error("no normal subgroups below the group")]
    TrivialGroup,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("infeasible pattern: block {block:?} mixes trivial and nontrivial demands")]
    InfeasiblePattern { block: alloc::vec::Vec<usize> },
    #[error(
        "columns {first} and {second} are automorphism dependent (automorphism #{automorphism})"
    )]
    AutomorphismDependent {
        first: usize,
        second: usize,
        automorphism: usize,
    },
    #[error("column {0} does not generate its coordinate group")]
    NotGenerating(usize),
    #[error("nothing to build: {0}")]
    EmptyProduct(String),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}
