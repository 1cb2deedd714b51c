//! Permutation twirling, pinching maps, and the polynomial
//! eigenvalue-count bound for permutation-invariant states.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::divergence::{relative_entropy, DivergenceValue};
use crate::error::QsteinError;
use crate::operators::{permute_factors, DensityOp, DimLayout, HermitianOp, Permutation};
use crate::tolerances;
use crate::Result;

/// Average an operator over all permutation conjugations of its `n` tensor
/// factors: `(1/n!) Σ_g U(g) X U(g)†`.
///
/// Evaluated by index relabeling, summed in the fixed enumeration order of
/// the permutations, so results are deterministic.
pub fn twirl(x: &HermitianOp) -> Result<HermitianOp> {
    let n = x.layout().num_factors();
    if n > 8 {
        return Err(QsteinError::BudgetExceeded {
            requested: (1..=n).product(),
            cap: 40_320,
        });
    }
    let perms = Permutation::all(n);
    let mut acc = DMatrix::<Complex64>::zeros(x.dim(), x.dim());
    for g in &perms {
        let term = permute_factors(x, g)?;
        acc += term.matrix();
    }
    acc /= Complex64::new(perms.len() as f64, 0.0);
    Ok(HermitianOp::hermitized(acc, x.layout().clone()))
}

/// Twirl of a density operator (trace- and PSD-preserving).
pub fn twirl_state(rho: &DensityOp) -> Result<DensityOp> {
    DensityOp::new(twirl(rho.op())?)
}

/// Pinching map built from the clustered eigenspaces of a reference state.
///
/// Stores the reference eigenbasis and the cluster boundaries; the
/// projections `E_j` sum to the identity and are mutually orthogonal by
/// construction.
#[derive(Debug, Clone)]
pub struct PinchingMap {
    basis: DMatrix<Complex64>,
    blocks: Vec<std::ops::Range<usize>>,
    layout: DimLayout,
}

impl PinchingMap {
    /// Pinching with respect to `reference`, clustering eigenvalues within
    /// the configured relative tolerance into one block.
    pub fn new(reference: &DensityOp) -> Self {
        let e = reference.op().eigh();
        let blocks = e.clusters(tolerances::DEFAULT.eig_cluster_rel);
        Self {
            basis: e.vectors,
            blocks,
            layout: reference.layout().clone(),
        }
    }

    pub fn layout(&self) -> &DimLayout {
        &self.layout
    }

    /// Number of blocks (distinct clustered eigenvalues of the reference).
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// The spectral projection `E_j`.
    pub fn projector(&self, j: usize) -> HermitianOp {
        let d = self.layout.total_dim();
        let mut p = DMatrix::<Complex64>::zeros(d, d);
        for col in self.blocks[j].clone() {
            let v = self.basis.column(col);
            for r in 0..d {
                for c in 0..d {
                    p[(r, c)] += v[r] * v[c].conj();
                }
            }
        }
        HermitianOp::hermitized(p, self.layout.clone())
    }

    /// Apply the pinching `X ↦ Σ_j E_j X E_j`: cross-block entries vanish in
    /// the reference eigenbasis.
    pub fn apply(&self, x: &HermitianOp) -> Result<HermitianOp> {
        if x.layout() != &self.layout {
            return Err(QsteinError::ShapeMismatch(
                "pinching layout mismatch".into(),
            ));
        }
        let in_basis = self.basis.adjoint() * x.matrix() * &self.basis;
        let d = self.layout.total_dim();
        let mut pinched = DMatrix::<Complex64>::zeros(d, d);
        for b in &self.blocks {
            for r in b.clone() {
                for c in b.clone() {
                    pinched[(r, c)] = in_basis[(r, c)];
                }
            }
        }
        let back = &self.basis * pinched * self.basis.adjoint();
        Ok(HermitianOp::hermitized(back, self.layout.clone()))
    }

    /// Apply to a state.
    pub fn apply_state(&self, rho: &DensityOp) -> Result<DensityOp> {
        DensityOp::new(self.apply(rho.op())?)
    }
}

/// Pinch `x` with respect to `reference` in one call.
pub fn pinch(reference: &DensityOp, x: &HermitianOp) -> Result<HermitianOp> {
    PinchingMap::new(reference).apply(x)
}

/// Count bound `v_n = (n+1)^{(d+2)(d−1)/2}` on the number of distinct
/// eigenvalues of a permutation-invariant state of `n` subsystems of local
/// dimension `d`.
pub fn eigenvalue_count_bound(n: usize, d: usize) -> u64 {
    let exp = (d + 2) * (d - 1) / 2;
    ((n + 1) as u64).pow(exp as u32)
}

/// Report of the pinching relative-entropy identities for a state and a
/// reference.
#[derive(Debug, Clone)]
pub struct PinchingAuditReport {
    /// `D(ρ ‖ ℰ(ρ))`.
    pub direct: DivergenceValue,
    /// `D(ρ ‖ σ) − D(ℰ(ρ) ‖ σ)`.
    pub difference: DivergenceValue,
    /// `log(#blocks)` of the pinching.
    pub log_blocks: f64,
    /// Number of blocks.
    pub blocks: usize,
    /// Whether the two finite quantities agree to 1e-7 and the first is
    /// bounded by `log(#blocks)`; `None` when a divergence is infinite.
    pub applicable: bool,
}

/// Audit the identities relating `D(ρ‖ℰ(ρ))`, `D(ρ‖σ) − D(ℰ(ρ)‖σ)`, and
/// `log(#blocks)` for the pinching `ℰ` with respect to `sigma_ref`.
///
/// When all divergences are finite, asserts the first two agree to `1e-7`
/// and the first is at most the third plus `1e-9`; otherwise the report is
/// flagged not applicable.
pub fn pinching_entropy_identity_audit(
    rho_n: &DensityOp,
    sigma_ref: &DensityOp,
) -> Result<PinchingAuditReport> {
    let map = PinchingMap::new(sigma_ref);
    let pinched = map.apply_state(rho_n)?;
    let direct = relative_entropy(rho_n, &pinched)?;
    let full = relative_entropy(rho_n, sigma_ref)?;
    let reduced = relative_entropy(&pinched, sigma_ref)?;
    let log_blocks = (map.block_count() as f64).ln();

    if !direct.is_finite() || !full.is_finite() || !reduced.is_finite() {
        return Ok(PinchingAuditReport {
            direct,
            difference: DivergenceValue::infinite(),
            log_blocks,
            blocks: map.block_count(),
            applicable: false,
        });
    }
    let difference = DivergenceValue::finite(full.nats() - reduced.nats());
    let identity_residual = (direct.nats() - difference.nats()).abs();
    if identity_residual > 1e-7 {
        return Err(QsteinError::InvariantViolated(format!(
            "pinching identity residual {identity_residual:.3e} exceeds 1e-7"
        )));
    }
    if direct.nats() > log_blocks + 1e-9 {
        return Err(QsteinError::InvariantViolated(format!(
            "pinching gap {:.6} exceeds log block count {:.6}",
            direct.nats(),
            log_blocks
        )));
    }
    Ok(PinchingAuditReport {
        direct,
        difference,
        log_blocks,
        blocks: map.block_count(),
        applicable: true,
    })
}
