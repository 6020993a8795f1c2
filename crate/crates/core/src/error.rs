use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Operand shapes do not conform.
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    /// Rows of a matrix literal have differing lengths.
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },
    /// Malformed text input; `line` is 1-based.
    Parse { line: usize, message: String },
    /// Coset enumeration requested over a basis that is too large.
    BasisTooLarge { rank: usize, limit: usize },
    /// Two stabilizer rows fail to commute (1-based row indices).
    NotOrthogonal { row_a: usize, row_b: usize },
    /// Stabilizer rows are linearly dependent.
    RankDeficient { expected: usize, found: usize },
    /// Logical operators violate a commutation condition.
    InvalidLogicals(String),
    /// Qubit index outside the register.
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    /// A gate acts twice on the same qubit.
    RepeatedQubit { qubit: usize },
    /// Structural precondition of a synthesis step failed.
    Synthesis(String),
    /// Unsupported parameter for a combinatorial search.
    Budget(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { op, left, right } => write!(
                f,
                "{op}: dimension mismatch {}x{} vs {}x{}",
                left.0, left.1, right.0, right.1
            ),
            Error::RaggedRows {
                row,
                expected,
                found,
            } => {
                write!(f, "row {row} has {found} entries, expected {expected}")
            }
            Error::Parse { line, message } => write!(f, "line {line}: {message}"),
            Error::BasisTooLarge { rank, limit } => {
                write!(
                    f,
                    "coset enumeration over rank {rank} exceeds limit {limit}"
                )
            }
            Error::NotOrthogonal { row_a, row_b } => {
                write!(
                    f,
                    "symplectic orthogonality violated by rows {row_a} and {row_b}"
                )
            }
            Error::RankDeficient { expected, found } => {
                write!(f, "stabilizer rank {found}, expected {expected}")
            }
            Error::InvalidLogicals(msg) => write!(f, "invalid logical operators: {msg}"),
            Error::QubitOutOfRange { qubit, num_qubits } => {
                write!(
                    f,
                    "qubit {qubit} out of range for {num_qubits}-qubit register"
                )
            }
            Error::RepeatedQubit { qubit } => write!(f, "gate repeats qubit {qubit}"),
            Error::Synthesis(msg) => write!(f, "synthesis failed: {msg}"),
            Error::Budget(msg) => write!(f, "{msg}"),
        }
    }
}

impl core::error::Error for Error {}
