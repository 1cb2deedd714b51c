//! Centralized numerical tolerances and size budgets.
//!
//! Every tolerance used by invariant checks and spectral operations lives
//! here so that numerical drift has a single tuning point.

/// Tolerances and budgets shared by all modules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative Hermiticity deviation allowed on construction,
    /// `‖A − A†‖_max ≤ hermiticity · ‖A‖_max`.
    pub hermiticity: f64,
    /// Absolute slack below zero allowed for eigenvalues of a density
    /// operator.
    pub psd_slack: f64,
    /// Absolute deviation from unit trace allowed for a density operator.
    pub trace_slack: f64,
    /// Relative tolerance for clustering near-degenerate eigenvalues into a
    /// single eigenspace (relative to the spectral radius).
    pub eig_cluster_rel: f64,
    /// Relative cutoff below which an eigenvalue of a reference state counts
    /// as zero for support computations.
    pub support_cutoff_rel: f64,
    /// Probability mass on a cut-off subspace above which a divergence is
    /// reported as +infinity.
    pub support_mass: f64,
    /// Maximum dimension of any single operator.
    pub dim_cap: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: 1e-12,
            psd_slack: 1e-10,
            trace_slack: 1e-10,
            eig_cluster_rel: 1e-9,
            support_cutoff_rel: 1e-12,
            support_mass: 1e-10,
            dim_cap: 4096,
        }
    }
}

/// The crate-wide default tolerance record.
pub const DEFAULT: Tolerances = Tolerances {
    hermiticity: 1e-12,
    psd_slack: 1e-10,
    trace_slack: 1e-10,
    eig_cluster_rel: 1e-9,
    support_cutoff_rel: 1e-12,
    support_mass: 1e-10,
    dim_cap: 4096,
};

/// Budget cap for one semidefinite program: sum of squared block dimensions.
pub const SDP_VAR_CAP: usize = 200_000;

/// Default iteration cap for the interior-point solver.
pub const SDP_MAX_ITER: usize = 200;

/// Frank-Wolfe stopping gap for min-relative-entropy projection.
pub const FRANK_WOLFE_GAP: f64 = 1e-6;

/// Frank-Wolfe iteration cap.
pub const FRANK_WOLFE_MAX_ITER: usize = 10_000;

/// Tolerance for the scalar golden-section searches.
pub const GOLDEN_SECTION_TOL: f64 = 1e-9;
