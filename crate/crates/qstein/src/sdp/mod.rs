//! Dense primal-dual interior-point solver for semidefinite programs over
//! complex Hermitian blocks.
//!
//! Standard form handled by the solver:
//!
//! ```text
//! minimize    Σ_i ⟨C_i, X_i⟩
//! subject to  Σ_i ⟨A_{j,i}, X_i⟩  (= | ≤)  b_j
//!             X_i ⪰ 0
//! ```
//!
//! `≤` rows are lowered to equalities with 1×1 slack blocks. The blocks stay
//! complex Hermitian all the way through; the normal-equation matrix is real
//! by construction, so only the linear solve runs over the reals.

mod model;
mod solver;

pub use model::{Constraint, MatrixEqHandle, SdpProblem, Sense, SparseHermitian};
pub use solver::{solve, KktResiduals, SdpSolution, SdpStatus, SolverOptions};
