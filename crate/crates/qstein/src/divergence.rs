//! Quantum relative entropy and Rényi families with explicit support
//! handling.
//!
//! All values are in nats; the natural logarithm is used throughout the
//! crate, and callers wanting bits divide by `ln 2` (the CLI exposes a
//! `--bits` flag). Eigenvalues of the reference state below the relative
//! support cutoff are treated as zero; if the first argument has more than
//! the configured mass on the cut subspace the divergence is +infinity.

use crate::operators::{DensityOp, HermitianOp};
use crate::tolerances;
use crate::Result;

/// Extended-real divergence value in nats. Infinite exactly when a support
/// violation was detected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceValue {
    nats: f64,
}

impl DivergenceValue {
    pub fn finite(nats: f64) -> Self {
        Self { nats }
    }

    pub fn infinite() -> Self {
        Self { nats: f64::INFINITY }
    }

    pub fn is_finite(&self) -> bool {
        self.nats.is_finite()
    }

    /// Value in nats (may be +infinity).
    pub fn nats(&self) -> f64 {
        self.nats
    }

    /// Value in bits.
    pub fn bits(&self) -> f64 {
        self.nats / std::f64::consts::LN_2
    }
}

/// Quantum relative entropy `D(ρ‖σ) = Tr[ρ (log ρ − log σ)]` in nats.
///
/// Returns +infinity when the support of `ρ` is not contained in the
/// support of `σ`. The convention `0·log 0 = 0` applies to null eigenvalues
/// of `ρ`.
pub fn relative_entropy(rho: &DensityOp, sigma: &DensityOp) -> Result<DivergenceValue> {
    rho.op().check_same_layout(sigma.op())?;
    let tol = tolerances::DEFAULT;

    let e_rho = rho.op().eigh();
    let mut tr_rho_log_rho = 0.0;
    for &l in e_rho.values.iter() {
        if l > 0.0 {
            tr_rho_log_rho += l * l.ln();
        }
    }

    let e_sig = sigma.op().eigh();
    let cutoff = tol.support_cutoff_rel * e_sig.spectral_radius().max(1e-300);
    let mut tr_rho_log_sigma = 0.0;
    let mut cut_mass = 0.0;
    for j in 0..e_sig.values.len() {
        let overlap = state_overlap(rho, &e_sig, j);
        if e_sig.values[j] > cutoff {
            tr_rho_log_sigma += overlap * e_sig.values[j].ln();
        } else {
            cut_mass += overlap;
        }
    }
    if cut_mass > tol.support_mass {
        return Ok(DivergenceValue::infinite());
    }
    Ok(DivergenceValue::finite(tr_rho_log_rho - tr_rho_log_sigma))
}

/// Sandwiched Rényi relative entropy
/// `D̃_α(ρ‖σ) = (α−1)^{-1} log Tr[(σ^{(1−α)/2α} ρ σ^{(1−α)/2α})^α]` in nats.
///
/// Requires `α > 0`, `α ≠ 1`. For `α > 1` the support condition
/// `supp ρ ⊆ supp σ` is enforced and its violation yields +infinity.
pub fn sandwiched_renyi(rho: &DensityOp, sigma: &DensityOp, alpha: f64) -> Result<DivergenceValue> {
    rho.op().check_same_layout(sigma.op())?;
    check_alpha(alpha)?;
    let tol = tolerances::DEFAULT;

    let e_sig = sigma.op().eigh();
    let cutoff = tol.support_cutoff_rel * e_sig.spectral_radius().max(1e-300);
    if alpha > 1.0 && support_violation(rho, &e_sig, cutoff, tol.support_mass) {
        return Ok(DivergenceValue::infinite());
    }
    let exponent = (1.0 - alpha) / (2.0 * alpha);
    // pseudo-power on the support of sigma
    let a = e_sig.apply_scalar(|x| if x > cutoff { x.powf(exponent) } else { 0.0 });
    let m = &a * rho.matrix() * &a;
    let e_m = HermitianOp::hermitized(m, rho.layout().clone()).eigh();
    let trace: f64 = e_m.values.iter().map(|&w| w.max(0.0).powf(alpha)).sum();
    if trace <= 0.0 {
        // disjoint supports at alpha < 1
        return Ok(DivergenceValue::infinite());
    }
    Ok(DivergenceValue::finite(trace.ln() / (alpha - 1.0)))
}

/// Petz Rényi relative entropy
/// `D_α(ρ‖σ) = (α−1)^{-1} log Tr[ρ^α σ^{1−α}]` in nats, same domain rules as
/// [`sandwiched_renyi`].
pub fn petz_renyi(rho: &DensityOp, sigma: &DensityOp, alpha: f64) -> Result<DivergenceValue> {
    rho.op().check_same_layout(sigma.op())?;
    check_alpha(alpha)?;
    let tol = tolerances::DEFAULT;

    let e_sig = sigma.op().eigh();
    let cutoff = tol.support_cutoff_rel * e_sig.spectral_radius().max(1e-300);
    if alpha > 1.0 && support_violation(rho, &e_sig, cutoff, tol.support_mass) {
        return Ok(DivergenceValue::infinite());
    }
    let e_rho = rho.op().eigh();
    let rho_a = e_rho.apply_scalar(|x| x.max(0.0).powf(alpha));
    let sig_b = e_sig.apply_scalar(|x| if x > cutoff { x.powf(1.0 - alpha) } else { 0.0 });
    let trace = (&rho_a * &sig_b).trace().re;
    if trace <= 0.0 {
        return Ok(DivergenceValue::infinite());
    }
    Ok(DivergenceValue::finite(trace.ln() / (alpha - 1.0)))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha <= 0.0 || (alpha - 1.0).abs() < 1e-12 {
        return Err(crate::QsteinError::Config(format!(
            "Rényi order must be positive and different from 1, got {alpha}"
        )));
    }
    Ok(())
}

/// `⟨v_j| ρ |v_j⟩` for the j-th eigenvector of the decomposition.
fn state_overlap(rho: &DensityOp, e: &crate::operators::Eigh, j: usize) -> f64 {
    let v = e.vectors.column(j);
    let mut overlap = 0.0;
    for r in 0..v.len() {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for c in 0..v.len() {
            acc += rho.matrix()[(r, c)] * v[c];
        }
        overlap += (v[r].conj() * acc).re;
    }
    overlap.max(0.0)
}

fn support_violation(
    rho: &DensityOp,
    e_sig: &crate::operators::Eigh,
    cutoff: f64,
    mass_tol: f64,
) -> bool {
    let mut cut_mass = 0.0;
    for j in 0..e_sig.values.len() {
        if e_sig.values[j] > cutoff {
            continue;
        }
        cut_mass += state_overlap(rho, e_sig, j);
    }
    cut_mass > mass_tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::random::{random_channel, random_density, random_unitary};
    use crate::operators::{apply_channel, DimLayout, HermitianOp};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn qubit() -> DimLayout {
        DimLayout::single(2).unwrap()
    }

    fn diag_state(p: &[f64]) -> DensityOp {
        let l = DimLayout::single(p.len()).unwrap();
        DensityOp::new(HermitianOp::from_diagonal(p, l).unwrap()).unwrap()
    }

    #[test]
    fn self_divergences_vanish() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rho = random_density(&mut rng, &qubit());
        assert!(relative_entropy(&rho, &rho).unwrap().nats().abs() < 1e-10);
        assert!(sandwiched_renyi(&rho, &rho, 2.0).unwrap().nats().abs() < 1e-9);
        assert!(petz_renyi(&rho, &rho, 2.0).unwrap().nats().abs() < 1e-9);
    }

    #[test]
    fn support_violation_is_infinite() {
        let zero = DensityOp::basis_state(0, qubit()).unwrap();
        let one = DensityOp::basis_state(1, qubit()).unwrap();
        assert!(!relative_entropy(&zero, &one).unwrap().is_finite());
        assert!(!sandwiched_renyi(&zero, &one, 2.0).unwrap().is_finite());
    }

    #[test]
    fn entangled_vs_mixed_is_log4() {
        let phi = DensityOp::maximally_entangled(2).unwrap();
        let mixed = DensityOp::maximally_mixed(DimLayout::new(vec![2, 2]).unwrap());
        let d = relative_entropy(&phi, &mixed).unwrap();
        assert_relative_eq!(d.nats(), 4.0f64.ln(), epsilon = 1e-10);
    }

    #[test]
    fn commuting_renyi_matches_classical_formula() {
        let p = [0.6, 0.3, 0.1];
        let q = [0.2, 0.5, 0.3];
        let rho = diag_state(&p);
        let sigma = diag_state(&q);
        for &alpha in &[0.5, 2.0, 3.0] {
            let classical: f64 = p
                .iter()
                .zip(&q)
                .map(|(&pi, &qi)| pi.powf(alpha) * qi.powf(1.0 - alpha))
                .sum::<f64>()
                .ln()
                / (alpha - 1.0);
            let s = sandwiched_renyi(&rho, &sigma, alpha).unwrap().nats();
            let z = petz_renyi(&rho, &sigma, alpha).unwrap().nats();
            assert_relative_eq!(s, classical, epsilon = 1e-9);
            assert_relative_eq!(z, classical, epsilon = 1e-9);
        }
    }

    #[test]
    fn petz_order_two_closed_form() {
        let rho = diag_state(&[0.7, 0.3]);
        let sigma = diag_state(&[0.5, 0.5]);
        let expect = (2.0f64 * (0.49 + 0.09)).ln();
        assert_relative_eq!(petz_renyi(&rho, &sigma, 2.0).unwrap().nats(), expect, epsilon = 1e-12);
    }

    #[test]
    fn sandwiched_converges_to_relative_entropy() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mixed = DensityOp::maximally_mixed(qubit());
        for _ in 0..5 {
            // keep the pair away from the support boundary so the
            // first-order term of the alpha expansion stays small
            let rho = DensityOp::mixture(&[
                (0.7, random_density(&mut rng, &qubit())),
                (0.3, mixed.clone()),
            ])
            .unwrap();
            let sigma = DensityOp::mixture(&[
                (0.7, random_density(&mut rng, &qubit())),
                (0.3, mixed.clone()),
            ])
            .unwrap();
            let d = relative_entropy(&rho, &sigma).unwrap().nats();
            let mut final_err = f64::INFINITY;
            for &alpha in &[1.5, 1.1, 1.01, 1.001] {
                let s = sandwiched_renyi(&rho, &sigma, alpha).unwrap().nats();
                final_err = (s - d).abs();
            }
            assert!(final_err < 1e-3, "alpha=1.001 error {final_err} too large");
        }
    }

    #[test]
    fn additivity_on_tensor_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..5 {
            let r1 = random_density(&mut rng, &qubit());
            let r2 = random_density(&mut rng, &qubit());
            let s1 = random_density(&mut rng, &qubit());
            let s2 = random_density(&mut rng, &qubit());
            let joint = relative_entropy(&r1.tensor(&r2).unwrap(), &s1.tensor(&s2).unwrap())
                .unwrap()
                .nats();
            let split = relative_entropy(&r1, &s1).unwrap().nats()
                + relative_entropy(&r2, &s2).unwrap().nats();
            assert_relative_eq!(joint, split, epsilon = 1e-8);

            let ja = sandwiched_renyi(&r1.tensor(&r2).unwrap(), &s1.tensor(&s2).unwrap(), 2.0)
                .unwrap()
                .nats();
            let sa = sandwiched_renyi(&r1, &s1, 2.0).unwrap().nats()
                + sandwiched_renyi(&r2, &s2, 2.0).unwrap().nats();
            assert_relative_eq!(ja, sa, epsilon = 1e-8);
        }
    }

    #[test]
    fn data_processing_under_channels_and_partial_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..10 {
            let rho = random_density(&mut rng, &qubit());
            let sigma = random_density(&mut rng, &qubit());
            let d0 = relative_entropy(&rho, &sigma).unwrap().nats();
            let ch = random_channel(&mut rng, 2, 2).unwrap();
            let d1 = relative_entropy(
                &apply_channel(&ch, &rho).unwrap(),
                &apply_channel(&ch, &sigma).unwrap(),
            )
            .unwrap()
            .nats();
            assert!(d1 <= d0 + 1e-8, "channel DPI violated: {d1} > {d0}");
        }
        let l22 = DimLayout::new(vec![2, 2]).unwrap();
        for _ in 0..5 {
            let rho = random_density(&mut rng, &l22);
            let sigma = random_density(&mut rng, &l22);
            let d0 = relative_entropy(&rho, &sigma).unwrap().nats();
            let d1 = relative_entropy(
                &rho.partial_trace(&[0]).unwrap(),
                &sigma.partial_trace(&[0]).unwrap(),
            )
            .unwrap()
            .nats();
            assert!(d1 <= d0 + 1e-8, "partial-trace DPI violated");
        }
    }

    #[test]
    fn sandwiched_dominates_relative_entropy_above_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..10 {
            let rho = random_density(&mut rng, &qubit());
            let sigma = random_density(&mut rng, &qubit());
            let d = relative_entropy(&rho, &sigma).unwrap().nats();
            for &alpha in &[1.2, 2.0, 4.0] {
                let s = sandwiched_renyi(&rho, &sigma, alpha).unwrap().nats();
                assert!(s >= d - 1e-8, "ordering violated at alpha={alpha}");
            }
        }
    }

    #[test]
    fn unitary_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let rho = random_density(&mut rng, &qubit());
        let sigma = random_density(&mut rng, &qubit());
        let u = random_unitary(&mut rng, 2);
        let ru = DensityOp::new(rho.op().conjugate_by(&u).unwrap()).unwrap();
        let su = DensityOp::new(sigma.op().conjugate_by(&u).unwrap()).unwrap();
        let a = relative_entropy(&rho, &sigma).unwrap().nats();
        let b = relative_entropy(&ru, &su).unwrap().nats();
        assert_relative_eq!(a, b, epsilon = 1e-9);
    }
}
