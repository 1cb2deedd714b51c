//! Density operators, binary tests, and spectral projections.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::QsteinError;
use crate::tolerances::{self, Tolerances};
use crate::Result;

use super::hermitian::HermitianOp;
use super::layout::DimLayout;

/// Positive semidefinite unit-trace Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOp {
    op: HermitianOp,
}

impl DensityOp {
    /// Validate PSD (up to slack) and unit trace (up to slack).
    pub fn new(op: HermitianOp) -> Result<Self> {
        Self::with_tolerances(op, &tolerances::DEFAULT)
    }

    pub fn with_tolerances(op: HermitianOp, tol: &Tolerances) -> Result<Self> {
        let min_eig = op.min_eigenvalue();
        if min_eig < -tol.psd_slack {
            return Err(QsteinError::InvariantViolated(format!(
                "density operator has eigenvalue {min_eig:.3e}"
            )));
        }
        let tr = op.trace();
        if (tr - 1.0).abs() > tol.trace_slack {
            return Err(QsteinError::InvariantViolated(format!(
                "density operator has trace {tr:.12}"
            )));
        }
        Ok(Self { op })
    }

    /// Build from a raw matrix.
    pub fn from_matrix(mat: DMatrix<Complex64>, layout: DimLayout) -> Result<Self> {
        Self::new(HermitianOp::new(mat, layout)?)
    }

    /// Pure state `|ψ⟩⟨ψ|` from an amplitude vector (normalized internally).
    pub fn pure(amplitudes: &[Complex64], layout: DimLayout) -> Result<Self> {
        let d = layout.total_dim();
        if amplitudes.len() != d {
            return Err(QsteinError::ShapeMismatch(format!(
                "amplitude vector length {} vs dimension {}",
                amplitudes.len(),
                d
            )));
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(QsteinError::InvariantViolated("zero state vector".into()));
        }
        let mut m = DMatrix::zeros(d, d);
        for r in 0..d {
            for c in 0..d {
                m[(r, c)] = amplitudes[r] * amplitudes[c].conj() / (norm * norm);
            }
        }
        Self::new(HermitianOp::hermitized(m, layout))
    }

    /// Computational basis state `|k⟩⟨k|`.
    pub fn basis_state(k: usize, layout: DimLayout) -> Result<Self> {
        let d = layout.total_dim();
        if k >= d {
            return Err(QsteinError::ShapeMismatch(format!("basis index {k} vs dim {d}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); d];
        amps[k] = Complex64::new(1.0, 0.0);
        Self::pure(&amps, layout)
    }

    /// Maximally mixed state `I/d`.
    pub fn maximally_mixed(layout: DimLayout) -> Self {
        let d = layout.total_dim();
        let op = HermitianOp::identity(layout).scale(1.0 / d as f64);
        Self { op }
    }

    /// Maximally entangled state `Φ_d` on two `d`-dimensional factors,
    /// `|Φ⟩ = d^{-1/2} Σ_j |j⟩⊗|j⟩`.
    pub fn maximally_entangled(d: usize) -> Result<Self> {
        let layout = DimLayout::new(vec![d, d])?;
        let mut amps = vec![Complex64::new(0.0, 0.0); d * d];
        for j in 0..d {
            amps[j * d + j] = Complex64::new(1.0, 0.0);
        }
        Self::pure(&amps, layout)
    }

    /// Mix `Σ w_i ρ_i` with nonnegative weights summing to one.
    pub fn mixture(parts: &[(f64, DensityOp)]) -> Result<Self> {
        if parts.is_empty() {
            return Err(QsteinError::ShapeMismatch("empty mixture".into()));
        }
        let layout = parts[0].1.layout().clone();
        let mut acc = HermitianOp::zeros(layout);
        for (w, rho) in parts {
            acc = acc.add(&rho.op().scale(*w))?;
        }
        Self::new(acc)
    }

    /// `n`-fold Kronecker power with concatenated layout.
    pub fn tensor_power(&self, n: usize) -> Result<DensityOp> {
        if n == 0 {
            return Err(QsteinError::ShapeMismatch("tensor power needs n >= 1".into()));
        }
        let mut acc = self.op.clone();
        for _ in 1..n {
            acc = acc.tensor(&self.op)?;
        }
        Ok(DensityOp { op: acc })
    }

    /// Tensor product of two states.
    pub fn tensor(&self, other: &DensityOp) -> Result<DensityOp> {
        Ok(DensityOp {
            op: self.op.tensor(&other.op)?,
        })
    }

    /// Partial trace keeping the listed factors; trace-preserving.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOp> {
        let op = self.op.partial_trace(keep)?;
        DensityOp::new(op)
    }

    pub fn op(&self) -> &HermitianOp {
        &self.op
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        self.op.matrix()
    }

    pub fn layout(&self) -> &DimLayout {
        self.op.layout()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// Smallest eigenvalue (useful for full-rank checks).
    pub fn min_eigenvalue(&self) -> f64 {
        self.op.min_eigenvalue()
    }

    /// Trace distance `‖ρ − σ‖₁ / 2`.
    pub fn trace_distance(&self, other: &DensityOp) -> Result<f64> {
        Ok(self.op.sub(&other.op)?.trace_norm() / 2.0)
    }
}

/// Operator `T` with `0 ≤ T ≤ 1`, representing the POVM `{T, 1−T}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryTest {
    op: HermitianOp,
}

impl BinaryTest {
    pub fn new(op: HermitianOp) -> Result<Self> {
        Self::with_tolerances(op, &tolerances::DEFAULT)
    }

    pub fn with_tolerances(op: HermitianOp, tol: &Tolerances) -> Result<Self> {
        let e = op.eigh();
        let lo = e.values[0];
        let hi = e.values[e.values.len() - 1];
        if lo < -tol.psd_slack || hi > 1.0 + tol.psd_slack {
            return Err(QsteinError::InvariantViolated(format!(
                "test eigenvalues in [{lo:.3e}, {hi:.3e}] leave [0, 1]"
            )));
        }
        Ok(Self { op })
    }

    /// Everything-accepting test.
    pub fn identity(layout: DimLayout) -> Self {
        Self {
            op: HermitianOp::identity(layout),
        }
    }

    /// Everything-rejecting test.
    pub fn zero(layout: DimLayout) -> Self {
        Self {
            op: HermitianOp::zeros(layout),
        }
    }

    pub fn op(&self) -> &HermitianOp {
        &self.op
    }

    pub fn layout(&self) -> &DimLayout {
        self.op.layout()
    }

    /// Acceptance probability `Tr[T ρ]`.
    pub fn accept_prob(&self, rho: &DensityOp) -> Result<f64> {
        self.op.check_same_layout(rho.op())?;
        Ok(self.op.inner(rho.op()))
    }

    /// The complementary test `1 − T`.
    pub fn complement(&self) -> BinaryTest {
        let id = HermitianOp::identity(self.op.layout().clone());
        BinaryTest {
            op: id.sub(&self.op).expect("same layout"),
        }
    }
}

/// Projection `{A ≤ B}` onto the eigenspace of nonnegative eigenvalues of
/// `B − A`. Eigenvalues within the clustering tolerance of zero count as
/// nonnegative, which keeps the result stable on degenerate spectra.
pub fn spectral_projection_leq(a: &HermitianOp, b: &HermitianOp) -> Result<BinaryTest> {
    a.check_same_layout(b)?;
    let diff = b.sub(a)?;
    let e = diff.eigh();
    let tol = tolerances::DEFAULT.eig_cluster_rel * e.spectral_radius().max(1e-300);
    let p = e.projector(|_, w| w >= -tol);
    BinaryTest::new(HermitianOp::hermitized(p, a.layout().clone()))
}
