//! Reference synthesizers for the two data representations: a dense
//! amplitude encoder (uniformly controlled rotation cascades) and a
//! sparse block-per-point loader whose circuits can be edited
//! incrementally.

mod dense;
mod io;
mod sparse;

pub use dense::{
    dense_target_state, load_dense, magnitude_angles, phase_angles, DenseState, DENSE_QUBIT_CAP,
};
pub use io::{parse_dense_text, parse_sparse_text};
pub use sparse::{
    load_sparse, sparse_target_state, BitPattern, SparseBuilder, SparsePointSet,
    SPARSE_DATA_QUBIT_CAP,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LoaderError {
    #[error("amplitude list length {0} is not a power of two covering at least one qubit")]
    BadLength(usize),
    #[error("input has norm {norm}, expected 1 within 1e-8")]
    NotNormalized { norm: f64 },
    #[error("cannot normalize an input with near-zero norm")]
    ZeroNorm,
    #[error("amplitudes must be finite")]
    NonFiniteAmplitude,
    #[error("loader supports at most {cap} data qubits, input uses {qubits}")]
    TooManyQubits { qubits: usize, cap: usize },
    #[error("bad pattern `{0}`: expected 1 to 63 characters, each 0 or 1")]
    BadPattern(String),
    #[error("pattern {0} appears more than once")]
    DuplicatePattern(String),
    #[error("amplitude for pattern {0} is below 1e-12; drop the point instead")]
    TinyAmplitude(String),
    #[error("point set is empty")]
    EmptySet,
    #[error("pattern {0} is not in the set")]
    PatternAbsent(String),
    #[error("pattern {0} is already in the set")]
    PatternPresent(String),
    #[error("pattern width {got} does not match the set width {want}")]
    WidthMismatch { got: usize, want: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
