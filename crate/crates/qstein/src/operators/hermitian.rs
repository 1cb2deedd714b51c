//! Hermitian operators over a tensor-factor layout.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::QsteinError;
use crate::tolerances::{self, Tolerances};
use crate::Result;

use super::layout::DimLayout;

/// Dense complex Hermitian operator tagged with a [`DimLayout`].
///
/// Construction hermitizes the matrix, `(A + A†)/2`, after checking the
/// input deviation against the configured relative tolerance. Eigenvalue
/// decomposition is the single spectral primitive; every spectral operation
/// funnels through [`HermitianOp::eigh`].
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOp {
    mat: DMatrix<Complex64>,
    layout: DimLayout,
}

/// Eigendecomposition of a Hermitian operator: `A = V diag(w) V†` with
/// eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: DVector<f64>,
    pub vectors: DMatrix<Complex64>,
}

impl Eigh {
    /// Group eigenvalue indices into clusters of relative width
    /// `rel_tol · max(spectral radius, floor)`. Eigenvalues are ascending, so
    /// clusters are contiguous index ranges.
    pub fn clusters(&self, rel_tol: f64) -> Vec<std::ops::Range<usize>> {
        let n = self.values.len();
        let scale = self
            .values
            .iter()
            .fold(0.0f64, |m, &v| m.max(v.abs()))
            .max(1e-300);
        let tol = rel_tol * scale;
        let mut out = Vec::new();
        let mut start = 0;
        for i in 1..=n {
            if i == n || self.values[i] - self.values[i - 1] > tol {
                out.push(start..i);
                start = i;
            }
        }
        out
    }

    /// Spectral radius, `max |w_i|`.
    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
    }

    /// Reassemble `V f(diag) V†` for a scalar function of the eigenvalues.
    pub fn apply_scalar(&self, f: impl Fn(f64) -> f64) -> DMatrix<Complex64> {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            let fj = Complex64::new(f(self.values[j]), 0.0);
            for i in 0..n {
                scaled[(i, j)] *= fj;
            }
        }
        &scaled * self.vectors.adjoint()
    }

    /// Projector onto the span of the eigenvectors selected by `pick`.
    pub fn projector(&self, pick: impl Fn(usize, f64) -> bool) -> DMatrix<Complex64> {
        let n = self.values.len();
        let mut p = DMatrix::zeros(n, n);
        for j in 0..n {
            if pick(j, self.values[j]) {
                let col = self.vectors.column(j);
                for r in 0..n {
                    for c in 0..n {
                        p[(r, c)] += col[r] * col[c].conj();
                    }
                }
            }
        }
        p
    }
}

impl HermitianOp {
    /// Wrap a matrix, checking shape and Hermiticity, and storing the
    /// hermitized form.
    pub fn new(mat: DMatrix<Complex64>, layout: DimLayout) -> Result<Self> {
        Self::with_tolerances(mat, layout, &tolerances::DEFAULT)
    }

    pub fn with_tolerances(
        mat: DMatrix<Complex64>,
        layout: DimLayout,
        tol: &Tolerances,
    ) -> Result<Self> {
        let d = layout.total_dim();
        if mat.nrows() != d || mat.ncols() != d {
            return Err(QsteinError::ShapeMismatch(format!(
                "matrix is {}x{}, layout dimension {}",
                mat.nrows(),
                mat.ncols(),
                d
            )));
        }
        let mut max_abs = 0.0f64;
        let mut max_dev = 0.0f64;
        for r in 0..d {
            for c in 0..d {
                max_abs = max_abs.max(mat[(r, c)].norm());
                let dev = (mat[(r, c)] - mat[(c, r)].conj()).norm();
                max_dev = max_dev.max(dev);
            }
        }
        if max_dev > tol.hermiticity * max_abs.max(1.0) {
            return Err(QsteinError::InvariantViolated(format!(
                "Hermiticity deviation {max_dev:.3e} exceeds {:.3e}",
                tol.hermiticity * max_abs.max(1.0)
            )));
        }
        let herm = hermitize(&mat);
        Ok(Self { mat: herm, layout })
    }

    /// Zero operator on the layout.
    pub fn zeros(layout: DimLayout) -> Self {
        let d = layout.total_dim();
        Self {
            mat: DMatrix::zeros(d, d),
            layout,
        }
    }

    /// Identity operator on the layout.
    pub fn identity(layout: DimLayout) -> Self {
        let d = layout.total_dim();
        Self {
            mat: DMatrix::identity(d, d),
            layout,
        }
    }

    /// Diagonal operator from real entries.
    pub fn from_diagonal(diag: &[f64], layout: DimLayout) -> Result<Self> {
        let d = layout.total_dim();
        if diag.len() != d {
            return Err(QsteinError::ShapeMismatch(format!(
                "diagonal length {} vs dimension {}",
                diag.len(),
                d
            )));
        }
        let mut m = DMatrix::zeros(d, d);
        for i in 0..d {
            m[(i, i)] = Complex64::new(diag[i], 0.0);
        }
        Ok(Self { mat: m, layout })
    }

    /// Construct without the Hermiticity check; the matrix is hermitized
    /// unconditionally. For internal use where exactness is guaranteed.
    pub(crate) fn hermitized(mat: DMatrix<Complex64>, layout: DimLayout) -> Self {
        Self {
            mat: hermitize(&mat),
            layout,
        }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn layout(&self) -> &DimLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.layout.total_dim()
    }

    /// Real trace.
    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    /// Hilbert-Schmidt inner product `Tr[self · other]` (real for Hermitian
    /// pairs).
    pub fn inner(&self, other: &HermitianOp) -> f64 {
        hs_inner(&self.mat, &other.mat)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.mat.iter().fold(0.0f64, |m, z| m.max(z.norm()))
    }

    /// Eigendecomposition with ascending eigenvalues.
    pub fn eigh(&self) -> Eigh {
        eigh(&self.mat)
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> f64 {
        let e = self.eigh();
        e.values[0]
    }

    /// `self + other`.
    pub fn add(&self, other: &HermitianOp) -> Result<HermitianOp> {
        self.check_same_layout(other)?;
        Ok(HermitianOp {
            mat: &self.mat + &other.mat,
            layout: self.layout.clone(),
        })
    }

    /// `self - other`.
    pub fn sub(&self, other: &HermitianOp) -> Result<HermitianOp> {
        self.check_same_layout(other)?;
        Ok(HermitianOp {
            mat: &self.mat - &other.mat,
            layout: self.layout.clone(),
        })
    }

    /// `s · self`.
    pub fn scale(&self, s: f64) -> HermitianOp {
        HermitianOp {
            mat: &self.mat * Complex64::new(s, 0.0),
            layout: self.layout.clone(),
        }
    }

    /// Kronecker product with concatenated layouts.
    pub fn tensor(&self, other: &HermitianOp) -> Result<HermitianOp> {
        let layout = self.layout.tensor(&other.layout)?;
        Ok(HermitianOp {
            mat: self.mat.kronecker(&other.mat),
            layout,
        })
    }

    /// Partial trace keeping the listed factor indices (original order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<HermitianOp> {
        if keep.is_empty() {
            return Err(QsteinError::ShapeMismatch(
                "partial trace must keep at least one factor".into(),
            ));
        }
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != keep.len() || keep.windows(2).any(|w| w[0] >= w[1]) {
            return Err(QsteinError::ShapeMismatch(
                "keep indices must be strictly increasing".into(),
            ));
        }
        let n = self.layout.num_factors();
        for &k in keep {
            if k >= n {
                return Err(QsteinError::InvalidFactor { index: k, factors: n });
            }
        }
        let traced: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
        let out_layout = self.layout.keep(keep)?;
        let ix_in = self.layout.indexer();
        let ix_keep = out_layout.indexer();
        let traced_dims: Vec<usize> = traced.iter().map(|&i| self.layout.factors()[i]).collect();
        let ix_tr = super::layout::Indexer::new(&traced_dims);
        let dk = ix_keep.total();

        let mut out = DMatrix::<Complex64>::zeros(dk, dk);
        let mut row_digits = vec![0usize; n];
        let mut col_digits = vec![0usize; n];
        let mut keep_r = vec![0usize; keep.len()];
        let mut keep_c = vec![0usize; keep.len()];
        let mut tr_digits = vec![0usize; traced.len().max(1)];
        for rk in 0..dk {
            ix_keep.unpack(rk, &mut keep_r);
            for ck in 0..dk {
                ix_keep.unpack(ck, &mut keep_c);
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..ix_tr.total() {
                    ix_tr.unpack(t, &mut tr_digits[..traced.len()]);
                    for (slot, &f) in keep.iter().enumerate() {
                        row_digits[f] = keep_r[slot];
                        col_digits[f] = keep_c[slot];
                    }
                    for (slot, &f) in traced.iter().enumerate() {
                        row_digits[f] = tr_digits[slot];
                        col_digits[f] = tr_digits[slot];
                    }
                    acc += self.mat[(ix_in.pack(&row_digits), ix_in.pack(&col_digits))];
                }
                out[(rk, ck)] = acc;
            }
        }
        Ok(HermitianOp {
            mat: out,
            layout: out_layout,
        })
    }

    /// Partial transpose over the listed factor indices.
    pub fn partial_transpose(&self, transpose: &[usize]) -> Result<HermitianOp> {
        let n = self.layout.num_factors();
        for &k in transpose {
            if k >= n {
                return Err(QsteinError::InvalidFactor { index: k, factors: n });
            }
        }
        let ix = self.layout.indexer();
        let d = ix.total();
        let mut out = DMatrix::<Complex64>::zeros(d, d);
        let mut rd = vec![0usize; n];
        let mut cd = vec![0usize; n];
        for r in 0..d {
            ix.unpack(r, &mut rd);
            for c in 0..d {
                ix.unpack(c, &mut cd);
                let mut rr = rd.clone();
                let mut cc = cd.clone();
                for &f in transpose {
                    rr[f] = cd[f];
                    cc[f] = rd[f];
                }
                out[(ix.pack(&rr), ix.pack(&cc))] = self.mat[(r, c)];
            }
        }
        Ok(HermitianOp {
            mat: out,
            layout: self.layout.clone(),
        })
    }

    /// Conjugate by a unitary matrix, `U self U†`.
    pub fn conjugate_by(&self, u: &DMatrix<Complex64>) -> Result<HermitianOp> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(QsteinError::ShapeMismatch(format!(
                "unitary is {}x{}, operator dimension {}",
                u.nrows(),
                u.ncols(),
                self.dim()
            )));
        }
        let m = u * &self.mat * u.adjoint();
        Ok(HermitianOp::hermitized(m, self.layout.clone()))
    }

    /// Trace norm `‖A‖₁ = Σ|w_i|`.
    pub fn trace_norm(&self) -> f64 {
        self.eigh().values.iter().map(|v| v.abs()).sum()
    }

    pub(crate) fn check_same_layout(&self, other: &HermitianOp) -> Result<()> {
        if self.layout != other.layout {
            return Err(QsteinError::ShapeMismatch(format!(
                "layouts differ: {:?} vs {:?}",
                self.layout.factors(),
                other.layout.factors()
            )));
        }
        Ok(())
    }
}

/// `(A + A†)/2`.
pub(crate) fn hermitize(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let half = Complex64::new(0.5, 0.0);
    (m + m.adjoint()) * half
}

/// Hermitian eigendecomposition with ascending eigenvalues and a
/// deterministic eigenvector convention (largest-magnitude component made
/// real positive).
pub(crate) fn eigh(m: &DMatrix<Complex64>) -> Eigh {
    let se = m.clone().symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
    let mut values = DVector::zeros(n);
    let mut vectors = DMatrix::<Complex64>::zeros(n, n);
    for (slot, &j) in order.iter().enumerate() {
        values[slot] = se.eigenvalues[j];
        let col = se.eigenvectors.column(j);
        // phase convention for determinism
        let mut best = 0usize;
        let mut best_mag = 0.0f64;
        for i in 0..n {
            let mag = col[i].norm();
            if mag > best_mag + 1e-15 {
                best_mag = mag;
                best = i;
            }
        }
        let phase = if best_mag > 0.0 {
            col[best] / Complex64::new(best_mag, 0.0)
        } else {
            Complex64::new(1.0, 0.0)
        };
        let inv_phase = phase.conj();
        for i in 0..n {
            vectors[(i, slot)] = col[i] * inv_phase;
        }
    }
    Eigh { values, vectors }
}

/// Real Hilbert-Schmidt inner product `Re Tr[A† B]`.
pub(crate) fn hs_inner(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    let mut acc = 0.0f64;
    for (x, y) in a.iter().zip(b.iter()) {
        acc += x.conj().re * y.re - (-x.conj().im) * y.im;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_non_hermitian() {
        let l = DimLayout::single(2).unwrap();
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(HermitianOp::new(m, l).is_err());
    }

    #[test]
    fn eigh_recovers_diagonal() {
        let l = DimLayout::single(3).unwrap();
        let a = HermitianOp::from_diagonal(&[2.0, -1.0, 0.5], l).unwrap();
        let e = a.eigh();
        assert_relative_eq!(e.values[0], -1.0, epsilon = 1e-12);
        assert_relative_eq!(e.values[1], 0.5, epsilon = 1e-12);
        assert_relative_eq!(e.values[2], 2.0, epsilon = 1e-12);
        let back = e.apply_scalar(|x| x);
        assert!((&back - a.matrix()).iter().all(|z| z.norm() < 1e-10));
    }

    #[test]
    fn partial_trace_of_product_recovers_factor() {
        let l2 = DimLayout::single(2).unwrap();
        let a = HermitianOp::from_diagonal(&[0.25, 0.75], l2.clone()).unwrap();
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[c(0.5, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.5, 0.0)],
        );
        let b = HermitianOp::new(m, l2).unwrap();
        let ab = a.tensor(&b).unwrap();
        let ta = ab.partial_trace(&[0]).unwrap();
        assert!((ta.matrix() - a.matrix()).iter().all(|z| z.norm() < 1e-12));
        let tb = ab.partial_trace(&[1]).unwrap();
        assert!((tb.matrix() - b.matrix()).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn partial_transpose_is_involution() {
        let l = DimLayout::new(vec![2, 2]).unwrap();
        let m = DMatrix::from_fn(4, 4, |r, c_| {
            c(((r * 4 + c_) % 7) as f64, ((r + 2 * c_) % 3) as f64)
        });
        let h = HermitianOp::hermitized(m, l);
        let pt = h.partial_transpose(&[1]).unwrap();
        let back = pt.partial_transpose(&[1]).unwrap();
        assert!((back.matrix() - h.matrix()).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn clusters_group_degenerate_eigenvalues() {
        let l = DimLayout::single(4).unwrap();
        let a = HermitianOp::from_diagonal(&[1.0, 1.0 + 1e-13, 2.0, 3.0], l).unwrap();
        let cl = a.eigh().clusters(1e-9);
        assert_eq!(cl.len(), 3);
        assert_eq!(cl[0], 0..2);
    }
}
