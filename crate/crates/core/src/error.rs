use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // coefficient rings
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("interpolation point {0} appears more than once")]
    DuplicatePoint(String),
    #[error("scalars or circuits from different rings: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("field too small: {0}")]
    FieldTooSmall(String),
    #[error("characteristic {characteristic} too small, need > {needed}")]
    CharacteristicTooSmall { characteristic: u64, needed: u64 },
    #[error("characteristic {characteristic} divides {value}")]
    BadCharacteristic { characteristic: u64, value: String },

    // IR structure
    #[error("expected {expected} values, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("gate {gate} in layer {layer} reads gate {operand} from layer {operand_layer}")]
    BadOperandLayer { gate: u32, layer: u32, operand: u32, operand_layer: u32 },
    #[error("output {0} does not name a gate")]
    DanglingOutput(String),
    #[error("invalid structure: {0}")]
    Malformed(String),
    #[error("mode mismatch: {0}")]
    ModeMismatch(String),
    #[error("circuit is not staggered: {0}")]
    NotStaggered(String),
    #[error("formula node {0} has more than one parent")]
    NotATree(u32),
    #[error("syntax error on line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("semantic error on line {line}: {message}")]
    Semantic { line: usize, message: String },

    // oracle caps
    #[error("expansion exceeds term cap {cap}")]
    TermCapExceeded { cap: usize },
    #[error("expansion exceeds degree cap {cap} (degree {degree})")]
    DegreeCapExceeded { cap: u32, degree: u64 },

    // transforms
    #[error("degree bound {bound} violated: {message}")]
    DegreeBoundViolated { bound: u64, message: String },
    #[error("y0 is not a root of P(0, y)")]
    NotARoot,
    #[error("dP/dy vanishes at (0, y0)")]
    DegenerateRoot,
    #[error("newton iteration did not converge after {0} steps")]
    NoConvergence(usize),
    #[error("linear system for the root expansion has no solution")]
    UnsolvableSystem,
    #[error("assembled program has {size} steps, budget is {budget}")]
    SizeBudgetExceeded { size: usize, budget: usize },

    // families
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("projection capacity exceeded: {0}")]
    CapacityExceeded(String),

    // analysis and testing
    #[error("circuit is not monotone: {0}")]
    NotMonotone(String),
    #[error("evaluation grid of {points} points exceeds budget {budget}")]
    GridTooLarge { points: String, budget: u64 },
}
