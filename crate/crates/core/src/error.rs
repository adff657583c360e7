use alloc::string::String;
use core::fmt;

/// Input and invariant errors raised by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Lengths, matrix shapes or subsystem dimensions do not fit the operation.
    Shape(String),
    /// A bipartition or index set is malformed for the state it is applied to.
    Partition(String),
    /// A state vector is not normalized (or cannot be normalized).
    Normalization { norm: f64 },
    NotHermitian { deviation: f64 },
    Trace { trace: f64 },
    NegativeEigenvalue { value: f64 },
    NonFinite,
    /// A family parameter or configuration value is out of range.
    Parameter(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Shape(msg) => write!(f, "shape mismatch: {msg}"),
            Error::Partition(msg) => write!(f, "invalid partition: {msg}"),
            Error::Normalization { norm } => write!(f, "state norm {norm} is not 1"),
            Error::NotHermitian { deviation } => {
                write!(f, "matrix is not Hermitian (max deviation {deviation:e})")
            }
            Error::Trace { trace } => write!(f, "density matrix trace {trace} is not 1"),
            Error::NegativeEigenvalue { value } => {
                write!(f, "density matrix has negative eigenvalue {value:e}")
            }
            Error::NonFinite => f.write_str("matrix contains NaN or infinite entries"),
            Error::Parameter(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
