//! Quantum wavelet transforms built from a linear combination of permutations.
//!
//! The crate constructs single-level, multi-level and packet wavelet transform
//! circuits for any orthogonal filter, lowers their macro gates to elementary
//! gates for resource counting, simulates them on a dense statevector and checks
//! every result against exact classical matrices.

pub mod builders;
pub mod circuit;
pub mod error;
pub mod filters;
pub mod matrix;
pub mod reference;
pub mod simulator;

pub use error::{QwtError, Result};
pub use filters::{builtin_filter, WaveletFilter};
pub use matrix::{ComplexMatrix, RealMatrix};
