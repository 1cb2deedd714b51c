//! States, tests, channels, and the tensor-factor bookkeeping they share.
//!
//! All matrices are dense complex, tagged with a [`DimLayout`] recording the
//! ordered local dimensions of the tensor factors. Values are immutable after
//! construction and every operation is a pure function.

mod channel;
mod hermitian;
mod json;
mod layout;
mod perm;
pub mod random;
mod state;

pub use channel::{apply_channel, choi_of_replacer, QuantumChannel};
pub use hermitian::{Eigh, HermitianOp};
pub use json::OperatorJson;

/// Eigendecomposition of a raw Hermitian matrix (ascending eigenvalues,
/// deterministic phase convention).
pub fn hermitian_eigh(m: &nalgebra::DMatrix<num_complex::Complex64>) -> Eigh {
    hermitian::eigh(m)
}
pub use layout::DimLayout;
pub use perm::{permutation_unitary, permute_factors, Permutation};
pub use state::{spectral_projection_leq, BinaryTest, DensityOp};
