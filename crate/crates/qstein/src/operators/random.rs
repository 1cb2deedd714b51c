//! Seeded random instances for tests and experiment runners.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::Result;

use super::channel::QuantumChannel;
use super::hermitian::HermitianOp;
use super::layout::DimLayout;
use super::state::DensityOp;

/// Standard normal sample via Box-Muller.
fn normal(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn complex_normal(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(normal(rng), normal(rng))
}

/// Ginibre matrix with independent complex-normal entries.
pub fn ginibre(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Full-rank random density operator `G G† / Tr`.
pub fn random_density(rng: &mut impl Rng, layout: &DimLayout) -> DensityOp {
    let d = layout.total_dim();
    let g = ginibre(rng, d, d);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityOp::new(HermitianOp::hermitized(m / Complex64::new(tr, 0.0), layout.clone()))
        .expect("Ginibre state is PSD with unit trace")
}

/// Random rank-`r` density operator.
pub fn random_density_rank(rng: &mut impl Rng, layout: &DimLayout, rank: usize) -> DensityOp {
    let d = layout.total_dim();
    let r = rank.clamp(1, d);
    let g = ginibre(rng, d, r);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityOp::new(HermitianOp::hermitized(m / Complex64::new(tr, 0.0), layout.clone()))
        .expect("Ginibre state is PSD with unit trace")
}

/// Random pure state.
pub fn random_pure(rng: &mut impl Rng, layout: &DimLayout) -> DensityOp {
    random_density_rank(rng, layout, 1)
}

/// Haar-ish random unitary from the QR factorization of a Ginibre matrix.
pub fn random_unitary(rng: &mut impl Rng, d: usize) -> DMatrix<Complex64> {
    let g = ginibre(rng, d, d);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / Complex64::new(rjj.norm(), 0.0)
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random Hermitian operator with entries of the given scale.
pub fn random_hermitian(rng: &mut impl Rng, layout: &DimLayout, scale: f64) -> HermitianOp {
    let d = layout.total_dim();
    let g = ginibre(rng, d, d) * Complex64::new(scale, 0.0);
    HermitianOp::hermitized(g, layout.clone())
}

/// Random channel: a random Choi operator with its input marginal flattened
/// back to `I/d_in`.
pub fn random_channel(rng: &mut impl Rng, d_in: usize, d_out: usize) -> Result<QuantumChannel> {
    let dim = d_in * d_out;
    let g = ginibre(rng, dim, dim);
    let w = &g * g.adjoint();
    let layout = DimLayout::new(vec![d_in, d_out])?;
    let raw = HermitianOp::hermitized(w, layout.clone());
    // sigma = Tr_out[W]; conjugate by sigma^{-1/2} ⊗ I to fix the marginal
    let sigma = raw.partial_trace(&[0])?;
    let e = sigma.eigh();
    let inv_sqrt = e.apply_scalar(|x| 1.0 / x.max(1e-14).sqrt());
    let d_out_id = DMatrix::<Complex64>::identity(d_out, d_out);
    let corr = inv_sqrt.kronecker(&d_out_id);
    let fixed = &corr * raw.matrix() * corr.adjoint();
    let choi = DensityOp::new(HermitianOp::hermitized(
        fixed / Complex64::new(d_in as f64, 0.0),
        layout,
    ))?;
    QuantumChannel::from_choi(choi, d_in, d_out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_channel_has_valid_marginal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let ch = random_channel(&mut rng, 2, 3).unwrap();
            assert_eq!(ch.d_in(), 2);
            assert_eq!(ch.d_out(), 3);
        }
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = random_unitary(&mut rng, 4);
        let id = DMatrix::<Complex64>::identity(4, 4);
        assert!(((&u * u.adjoint()) - id).iter().all(|z| z.norm() < 1e-12));
    }
}
