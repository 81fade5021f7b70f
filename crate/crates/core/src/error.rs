use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable index {var} is out of range 1..={n}")]
    VariableOutOfRange { var: u32, n: usize },
    #[error("clause repeats variable x{0}")]
    RepeatedVariable(u32),
    #[error("duplicate clause at position {0} while duplicates are disallowed")]
    DuplicateClause(usize),
    #[error("variable x{0} is bound twice")]
    DoubleBinding(u32),
    #[error("bipartition parts overlap on x{0}")]
    PartsOverlap(u32),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: clause has {found} literals, expected 2")]
    Width { line: usize, found: usize },
    #[error("line {line}: clause contains opposite literals of x{var}")]
    Tautology { line: usize, var: u32 },

    #[error("enumeration over {vars} variables exceeds the guard of {limit}")]
    EnumerationTooLarge { vars: usize, limit: usize },
    #[error("formula is not a matching formula")]
    NotAMatchingFormula,
    #[error("formula is not a matching subformula of the target under the bipartition")]
    NotMatchingSubformula,

    #[error("requested {requested} clauses but only {available} exist")]
    TooManyClauses { requested: u64, available: u64 },
    #[error("need {needed} variables, have {n}")]
    NotEnoughVariables { needed: usize, n: usize },
    #[error("split index {index} is outside 0..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("graph has {vertices} vertices, limit is {limit}")]
    GraphTooLarge { vertices: usize, limit: usize },
    #[error("graph has {0} vertices, at least 3 are needed")]
    GraphTooSmall(usize),
    #[error("matching edge {{x{0}, x{1}}} has no clause in the formula")]
    EdgeWithoutClause(u32, u32),
    #[error("not a permutation of 1..={0}")]
    InvalidOrder(usize),

    #[error("node table exceeded capacity {capacity} (peak {peak} nodes)")]
    CapacityExceeded { capacity: usize, peak: usize },
    #[error("assignment does not bind x{0}")]
    PartialAssignment(u32),
    #[error("unknown ordering strategy `{0}`")]
    UnknownStrategy(String),
    #[error("formula has {n} variables, limit is {limit}")]
    TooManyVariables { n: usize, limit: usize },
    #[error("formula is not monotone")]
    NotMonotone,
}
