//! Quantum channels stored by their normalized Choi state.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::QsteinError;
use crate::Result;

use super::hermitian::HermitianOp;
use super::layout::DimLayout;
use super::state::DensityOp;

/// Completely positive trace-preserving map from a `d_in`- to a
/// `d_out`-dimensional system, stored by its normalized Choi state
/// `J(N) = (id ⊗ N)(Φ_{d_in})` on the layout `[d_in, d_out]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel {
    choi: DensityOp,
    d_in: usize,
    d_out: usize,
}

impl QuantumChannel {
    /// Wrap a Choi state, checking the input-marginal condition
    /// `Tr_out[J] = I/d_in`.
    pub fn from_choi(choi: DensityOp, d_in: usize, d_out: usize) -> Result<Self> {
        if choi.layout().factors() != [d_in, d_out] {
            return Err(QsteinError::ShapeMismatch(format!(
                "Choi layout {:?} vs expected [{d_in}, {d_out}]",
                choi.layout().factors()
            )));
        }
        let marginal = choi.op().partial_trace(&[0])?;
        let target = 1.0 / d_in as f64;
        for r in 0..d_in {
            for c in 0..d_in {
                let want = if r == c { target } else { 0.0 };
                if (marginal.matrix()[(r, c)] - Complex64::new(want, 0.0)).norm() > 1e-9 {
                    return Err(QsteinError::InvariantViolated(format!(
                        "Choi input marginal deviates from I/{d_in} at ({r},{c})"
                    )));
                }
            }
        }
        Ok(Self { choi, d_in, d_out })
    }

    /// Identity channel on dimension `d` (Choi state `Φ_d`).
    pub fn identity(d: usize) -> Result<Self> {
        let phi = DensityOp::maximally_entangled(d)?;
        Self::from_choi(phi, d, d)
    }

    /// Channel from the action `ρ ↦ Σ_k K_k ρ K_k†` of Kraus operators.
    pub fn from_kraus(kraus: &[DMatrix<Complex64>], d_in: usize, d_out: usize) -> Result<Self> {
        let layout = DimLayout::new(vec![d_in, d_out])?;
        let dim = d_in * d_out;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        // J = (1/d) Σ_{ij} |i⟩⟨j| ⊗ Σ_k K|i⟩⟨j|K†
        for k in kraus {
            if k.nrows() != d_out || k.ncols() != d_in {
                return Err(QsteinError::ShapeMismatch(format!(
                    "Kraus operator is {}x{}, expected {d_out}x{d_in}",
                    k.nrows(),
                    k.ncols()
                )));
            }
            for i in 0..d_in {
                for j in 0..d_in {
                    for o in 0..d_out {
                        for p in 0..d_out {
                            m[(i * d_out + o, j * d_out + p)] +=
                                k[(o, i)] * k[(p, j)].conj() / d_in as f64;
                        }
                    }
                }
            }
        }
        let choi = DensityOp::from_matrix(m, layout)?;
        Self::from_choi(choi, d_in, d_out)
    }

    pub fn choi(&self) -> &DensityOp {
        &self.choi
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    /// Kraus operators recovered from the Choi eigendecomposition; vectors
    /// with eigenvalue below the cutoff are dropped.
    pub fn kraus(&self) -> Vec<DMatrix<Complex64>> {
        let e = self.choi.op().eigh();
        let cutoff = 1e-12 * e.spectral_radius().max(1e-300);
        let mut out = Vec::new();
        for j in 0..e.values.len() {
            let w = e.values[j];
            if w <= cutoff {
                continue;
            }
            let scale = (w * self.d_in as f64).sqrt();
            let mut k = DMatrix::<Complex64>::zeros(self.d_out, self.d_in);
            for i in 0..self.d_in {
                for o in 0..self.d_out {
                    k[(o, i)] = e.vectors[(i * self.d_out + o, j)] * scale;
                }
            }
            out.push(k);
        }
        out
    }

    /// Parallel composition `self ⊗ other`, with interleaved factor pairs
    /// regrouped into a single `[d_in·d_in', d_out·d_out']` Choi layout.
    pub fn tensor(&self, other: &QuantumChannel) -> Result<QuantumChannel> {
        let raw = self.choi.op().tensor(other.choi.op())?;
        // raw layout: [in1, out1, in2, out2] -> regroup to [in1*in2, out1*out2]
        let regrouped = regroup_in_out(&raw, self.d_in, self.d_out, other.d_in, other.d_out)?;
        let choi = DensityOp::new(regrouped)?;
        QuantumChannel::from_choi(choi, self.d_in * other.d_in, self.d_out * other.d_out)
    }

    /// `n`-fold parallel power.
    pub fn tensor_power(&self, n: usize) -> Result<QuantumChannel> {
        if n == 0 {
            return Err(QsteinError::ShapeMismatch("tensor power needs n >= 1".into()));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.tensor(self)?;
        }
        Ok(acc)
    }
}

/// Permute `[in1, out1, in2, out2]` into `[(in1 in2), (out1 out2)]`.
fn regroup_in_out(
    raw: &HermitianOp,
    d_in1: usize,
    d_out1: usize,
    d_in2: usize,
    d_out2: usize,
) -> Result<HermitianOp> {
    let src = DimLayout::new(vec![d_in1, d_out1, d_in2, d_out2])?;
    if raw.layout() != &src {
        return Err(QsteinError::ShapeMismatch("unexpected raw layout".into()));
    }
    let dst = DimLayout::new(vec![d_in1 * d_in2, d_out1 * d_out2])?;
    let ix_src = src.indexer();
    let d = ix_src.total();
    let mut out = DMatrix::<Complex64>::zeros(d, d);
    let mut rd = [0usize; 4];
    let mut cd = [0usize; 4];
    let pack = |dig: &[usize; 4]| -> usize {
        let row_in = dig[0] * d_in2 + dig[2];
        let row_out = dig[1] * d_out2 + dig[3];
        row_in * (d_out1 * d_out2) + row_out
    };
    for r in 0..d {
        ix_src.unpack(r, &mut rd);
        for c in 0..d {
            ix_src.unpack(c, &mut cd);
            out[(pack(&rd), pack(&cd))] = raw.matrix()[(r, c)];
        }
    }
    Ok(HermitianOp::hermitized(out, dst))
}

/// Channel that discards its input and prepares the full-rank state
/// `rho_full`; its Choi state is `(I/d_in) ⊗ ρ_full`, strictly positive.
pub fn choi_of_replacer(d_in: usize, rho_full: &DensityOp) -> Result<QuantumChannel> {
    let min_eig = rho_full.min_eigenvalue();
    if min_eig <= 0.0 {
        return Err(QsteinError::RankDeficient { min_eig });
    }
    let d_out = rho_full.dim();
    let in_layout = DimLayout::single(d_in)?;
    let mixed = DensityOp::maximally_mixed(in_layout);
    let flat_out = DensityOp::new(HermitianOp::hermitized(
        rho_full.matrix().clone(),
        DimLayout::single(d_out)?,
    ))?;
    let choi = mixed.tensor(&flat_out)?;
    QuantumChannel::from_choi(choi, d_in, d_out)
}

/// Apply a channel to a state through the Choi contraction
/// `N(ρ) = d_in · Tr_in[(ρ^T ⊗ I) J(N)]`.
pub fn apply_channel(n: &QuantumChannel, rho: &DensityOp) -> Result<DensityOp> {
    if rho.dim() != n.d_in() {
        return Err(QsteinError::ShapeMismatch(format!(
            "state dimension {} vs channel input {}",
            rho.dim(),
            n.d_in()
        )));
    }
    let d_in = n.d_in();
    let d_out = n.d_out();
    let j = n.choi().matrix();
    let mut out = DMatrix::<Complex64>::zeros(d_out, d_out);
    for o in 0..d_out {
        for p in 0..d_out {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..d_in {
                for k in 0..d_in {
                    // J[(i,o),(k,p)] = N(|i⟩⟨k|)[o,p] / d_in
                    acc += rho.matrix()[(i, k)] * j[(i * d_out + o, k * d_out + p)];
                }
            }
            out[(o, p)] = acc * d_in as f64;
        }
    }
    DensityOp::from_matrix(out, DimLayout::single(d_out)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn identity_channel_acts_trivially() {
        let id = QuantumChannel::identity(2).unwrap();
        let rho = DensityOp::from_matrix(
            DMatrix::from_row_slice(
                2,
                2,
                &[
                    Complex64::new(0.6, 0.0),
                    Complex64::new(0.2, 0.1),
                    Complex64::new(0.2, -0.1),
                    Complex64::new(0.4, 0.0),
                ],
            ),
            DimLayout::single(2).unwrap(),
        )
        .unwrap();
        let out = apply_channel(&id, &rho).unwrap();
        assert!((out.matrix() - rho.matrix()).iter().all(|z| z.norm() < 1e-10));
    }

    #[test]
    fn replacer_outputs_target() {
        let full = DensityOp::from_matrix(
            DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
                Complex64::new(0.75, 0.0),
                Complex64::new(0.25, 0.0),
            ])),
            DimLayout::single(2).unwrap(),
        )
        .unwrap();
        let rep = choi_of_replacer(2, &full).unwrap();
        // Choi eigenvalues {3/8, 3/8, 1/8, 1/8}
        let mut eigs: Vec<f64> = rep.choi().op().eigh().values.iter().cloned().collect();
        eigs.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert_relative_eq!(eigs[0], 0.375, epsilon = 1e-12);
        assert_relative_eq!(eigs[2], 0.125, epsilon = 1e-12);

        let any = DensityOp::basis_state(1, DimLayout::single(2).unwrap()).unwrap();
        let out = apply_channel(&rep, &any).unwrap();
        assert!((out.matrix() - full.matrix()).iter().all(|z| z.norm() < 1e-10));
    }

    #[test]
    fn kraus_roundtrip_matches_choi_application() {
        // amplitude damping-ish channel built from explicit Kraus operators
        let g: f64 = 0.3;
        let k0 = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new((1.0 - g).sqrt(), 0.0),
            ],
        );
        let k1 = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(g.sqrt(), 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        let ch = QuantumChannel::from_kraus(&[k0.clone(), k1.clone()], 2, 2).unwrap();
        let rho = DensityOp::maximally_mixed(DimLayout::single(2).unwrap());
        let via_choi = apply_channel(&ch, &rho).unwrap();
        let direct = &k0 * rho.matrix() * k0.adjoint() + &k1 * rho.matrix() * k1.adjoint();
        assert!((via_choi.matrix() - direct).iter().all(|z| z.norm() < 1e-10));

        // and the recovered Kraus form agrees again
        let kr = ch.kraus();
        let mut back = DMatrix::<Complex64>::zeros(2, 2);
        for k in &kr {
            back += k * rho.matrix() * k.adjoint();
        }
        assert!((via_choi.matrix() - back).iter().all(|z| z.norm() < 1e-10));
    }

    #[test]
    fn tensor_regroups_in_out() {
        let id = QuantumChannel::identity(2).unwrap();
        let two = id.tensor(&id).unwrap();
        assert_eq!(two.d_in(), 4);
        let rho = DensityOp::maximally_entangled(2).unwrap();
        // flatten the [2,2] layout into a single factor of dimension 4
        let flat = DensityOp::from_matrix(rho.matrix().clone(), DimLayout::single(4).unwrap())
            .unwrap();
        let out = apply_channel(&two, &flat).unwrap();
        assert!((out.matrix() - flat.matrix()).iter().all(|z| z.norm() < 1e-10));
    }
}
