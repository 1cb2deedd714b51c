//! Problem model: Hermitian blocks, sparse constraint matrices, and the
//! expansion of matrix-valued equalities into scalar rows.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::QsteinError;
use crate::operators::DimLayout;
use crate::Result;

/// Sparse Hermitian coefficient matrix stored as explicit entries.
///
/// Entries always come in conjugate pairs (only one stored call per pair);
/// the represented matrix is exactly the sum of the stored entries.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SparseHermitian {
    dim: usize,
    entries: Vec<(usize, usize, Complex64)>,
}

impl SparseHermitian {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            entries: Vec::new(),
        }
    }

    /// Add `v` at `(r, c)` and `v̄` at `(c, r)`; for `r == c` the imaginary
    /// part must vanish.
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) -> &mut Self {
        assert!(r < self.dim && c < self.dim, "entry out of range");
        if r == c {
            assert!(v.im.abs() < 1e-14, "diagonal entries must be real");
            self.entries.push((r, r, Complex64::new(v.re, 0.0)));
        } else {
            self.entries.push((r, c, v));
            self.entries.push((c, r, v.conj()));
        }
        self
    }

    /// Identity-like diagonal with the given value on every slot.
    pub fn scaled_identity(dim: usize, v: f64) -> Self {
        let mut s = Self::new(dim);
        for i in 0..dim {
            s.set(i, i, Complex64::new(v, 0.0));
        }
        s
    }

    /// Densify into a full matrix (entries are summed).
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v;
        }
        m
    }

    /// Sparse copy of a dense Hermitian matrix, pruning entries below the
    /// threshold.
    pub fn from_dense(m: &DMatrix<Complex64>, prune: f64) -> Self {
        let dim = m.nrows();
        let mut s = Self::new(dim);
        for r in 0..dim {
            if m[(r, r)].re.abs() > prune {
                s.entries.push((r, r, Complex64::new(m[(r, r)].re, 0.0)));
            }
            for c in (r + 1)..dim {
                let v = (m[(r, c)] + m[(c, r)].conj()) * 0.5;
                if v.norm() > prune {
                    s.entries.push((r, c, v));
                    s.entries.push((c, r, v.conj()));
                }
            }
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// `⟨self, M⟩ = Tr[self · M]` for Hermitian `M` (real).
    pub fn inner_dense(&self, m: &DMatrix<Complex64>) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(r, c, v) in &self.entries {
            // Tr[self·M] picks M[c, r] against entry (r, c)
            acc += v * m[(c, r)];
        }
        acc.re
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.2.norm()))
    }

    /// Partial transpose over the given factors of the layout.
    pub fn partial_transpose(&self, layout: &DimLayout, factors: &[usize]) -> Result<Self> {
        if layout.total_dim() != self.dim {
            return Err(QsteinError::ShapeMismatch(
                "sparse matrix dimension vs layout".into(),
            ));
        }
        let ix = layout.indexer();
        let n = layout.num_factors();
        let mut out = Self::new(self.dim);
        let mut rd = vec![0usize; n];
        let mut cd = vec![0usize; n];
        for &(r, c, v) in &self.entries {
            ix.unpack(r, &mut rd);
            ix.unpack(c, &mut cd);
            for &f in factors {
                let t = rd[f];
                rd[f] = cd[f];
                cd[f] = t;
            }
            out.entries.push((ix.pack(&rd), ix.pack(&cd), v));
        }
        Ok(out)
    }
}

/// Constraint sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Eq,
    Le,
}

/// One scalar constraint `Σ_i ⟨A_{j,i}, X_i⟩ (= | ≤) rhs`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Constraint {
    pub terms: Vec<(usize, SparseHermitian)>,
    pub sense: Sense,
    pub rhs: f64,
}

/// Handle to the scalar rows spanned by one matrix-valued equality, for
/// reassembling the Hermitian dual multiplier.
#[derive(Debug, Clone)]
pub struct MatrixEqHandle {
    dim: usize,
    /// (constraint index, basis descriptor)
    rows: Vec<(usize, BasisElem)>,
}

#[derive(Debug, Clone, Copy)]
enum BasisElem {
    Diag(usize),
    Re(usize, usize),
    Im(usize, usize),
}

impl BasisElem {
    /// The Hermitian basis matrix: `E_rr`, `E_rc + E_cr`, or
    /// `i·E_rc − i·E_cr`.
    fn sparse(&self, dim: usize) -> SparseHermitian {
        let mut s = SparseHermitian::new(dim);
        match *self {
            BasisElem::Diag(r) => {
                s.set(r, r, Complex64::new(1.0, 0.0));
            }
            BasisElem::Re(r, c) => {
                s.set(r, c, Complex64::new(1.0, 0.0));
            }
            BasisElem::Im(r, c) => {
                s.set(r, c, Complex64::new(0.0, 1.0));
            }
        }
        s
    }

    /// `⟨H, M⟩` against a dense matrix, used for right-hand sides.
    fn eval(&self, m: &DMatrix<Complex64>) -> f64 {
        match *self {
            BasisElem::Diag(r) => m[(r, r)].re,
            BasisElem::Re(r, c) => 2.0 * m[(r, c)].re,
            BasisElem::Im(r, c) => 2.0 * m[(r, c)].im,
        }
    }
}

/// A semidefinite program over Hermitian PSD blocks.
#[derive(Debug, Clone, Default)]
pub struct SdpProblem {
    block_dims: Vec<usize>,
    objective: Vec<DMatrix<Complex64>>,
    constraints: Vec<Constraint>,
}

impl SdpProblem {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add a PSD block of the given dimension with zero objective; returns
    /// its index.
    pub fn add_block(&mut self, dim: usize) -> usize {
        self.block_dims.push(dim);
        self.objective.push(DMatrix::zeros(dim, dim));
        self.block_dims.len() - 1
    }

    /// Set the (Hermitian) objective coefficient of a block.
    pub fn set_objective(&mut self, block: usize, c: DMatrix<Complex64>) {
        assert_eq!(c.nrows(), self.block_dims[block]);
        self.objective[block] = c;
    }

    /// Add `Σ ⟨A_i, X_i⟩ = rhs`.
    pub fn add_eq(&mut self, terms: Vec<(usize, SparseHermitian)>, rhs: f64) -> usize {
        self.push_constraint(terms, Sense::Eq, rhs)
    }

    /// Add `Σ ⟨A_i, X_i⟩ ≤ rhs`.
    pub fn add_le(&mut self, terms: Vec<(usize, SparseHermitian)>, rhs: f64) -> usize {
        self.push_constraint(terms, Sense::Le, rhs)
    }

    fn push_constraint(
        &mut self,
        terms: Vec<(usize, SparseHermitian)>,
        sense: Sense,
        rhs: f64,
    ) -> usize {
        for (b, a) in &terms {
            assert!(*b < self.block_dims.len(), "unknown block {b}");
            assert_eq!(a.dim(), self.block_dims[*b], "coefficient dim mismatch");
        }
        self.constraints.push(Constraint { terms, sense, rhs });
        self.constraints.len() - 1
    }

    /// Expand a Hermitian matrix equality `Σ_t coeff_t(X_{b_t}) = rhs` into
    /// `dim²` scalar rows. Each term maps a basis element `H` to the
    /// coefficient matrix `L†(H)` on its block; identity and partial
    /// transposes are the maps needed here, both self-adjoint, plus scalar
    /// embeddings for 1×1 blocks.
    ///
    /// `terms`: for each participating block, a function producing the
    /// coefficient sparse matrix on that block from a basis element of the
    /// target space.
    pub fn add_matrix_eq(
        &mut self,
        dim: usize,
        terms: &[(usize, &dyn Fn(&SparseHermitian) -> SparseHermitian)],
        rhs: &DMatrix<Complex64>,
    ) -> MatrixEqHandle {
        assert_eq!(rhs.nrows(), dim);
        let mut rows = Vec::with_capacity(dim * dim);
        let mut basis = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            basis.push(BasisElem::Diag(r));
            for c in (r + 1)..dim {
                basis.push(BasisElem::Re(r, c));
                basis.push(BasisElem::Im(r, c));
            }
        }
        for h in basis {
            let hs = h.sparse(dim);
            let mut cterms = Vec::with_capacity(terms.len());
            for (b, map) in terms {
                let coeff = map(&hs);
                if coeff.nnz() > 0 {
                    cterms.push((*b, coeff));
                }
            }
            let idx = self.add_eq(cterms, h.eval(rhs));
            rows.push((idx, h));
        }
        MatrixEqHandle { dim, rows }
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn objective(&self) -> &[DMatrix<Complex64>] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }
}

impl MatrixEqHandle {
    /// Reassemble the Hermitian dual multiplier `Ω = Σ_α y_α H_α` of the
    /// matrix equality from the scalar dual vector.
    pub fn dual_matrix(&self, dual: &[f64]) -> DMatrix<Complex64> {
        let mut m = DMatrix::<Complex64>::zeros(self.dim, self.dim);
        for (idx, h) in &self.rows {
            let y = dual[*idx];
            match *h {
                BasisElem::Diag(r) => m[(r, r)] += Complex64::new(y, 0.0),
                BasisElem::Re(r, c) => {
                    m[(r, c)] += Complex64::new(y, 0.0);
                    m[(c, r)] += Complex64::new(y, 0.0);
                }
                BasisElem::Im(r, c) => {
                    m[(r, c)] += Complex64::new(0.0, y);
                    m[(c, r)] += Complex64::new(0.0, -y);
                }
            }
        }
        m
    }
}
