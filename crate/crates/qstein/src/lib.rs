//! Numerics for binary quantum hypothesis testing against convex families of
//! states, resource measures over those families, and the measure-and-prepare
//! protocol constructions used in asymptotic resource conversion.
//!
//! The crate is organized in layers:
//!
//! - [`operators`]: dense complex Hermitian linear algebra over tensor-factor
//!   layouts (states, binary tests, channels, Choi calculus, permutations,
//!   spectral projections).
//! - [`divergence`]: quantum relative entropy and the Rényi families with
//!   explicit support handling.
//! - [`symmetry`]: permutation twirling, pinching maps, and the polynomial
//!   eigenvalue-count bound for permutation-invariant states.
//! - [`sdp`]: a small dense primal-dual interior-point solver for Hermitian
//!   semidefinite programs.
//! - [`hyptest`]: type-II error optima `β_ε` for simple and composite
//!   hypotheses, with two independently implemented routes kept as mutual
//!   oracles.
//! - [`freesets`]: convex free-state families (vertex polytopes, group
//!   orbits, PPT sections, IID product families), membership oracles, and
//!   min-relative-entropy projection.
//! - [`qrt`]: generalized robustness, relative entropy of resource,
//!   truncated channels, and one-slot super-channel constructions.
//! - [`experiments`]: reproducible experiment runners emitting CSV/JSON,
//!   also exposed through the `qstein` command-line binary.
//!
//! Everything is sized for desk-scale verification: local dimension 2-4,
//! a handful of tensor copies, operators capped at dimension 4096.

pub mod divergence;
pub mod error;
pub mod experiments;
pub mod freesets;
pub mod hyptest;
pub mod operators;
pub mod qrt;
pub mod sdp;
pub mod symmetry;
pub mod tolerances;

pub use error::QsteinError;
pub use operators::{BinaryTest, DensityOp, DimLayout, HermitianOp, QuantumChannel};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, QsteinError>;
