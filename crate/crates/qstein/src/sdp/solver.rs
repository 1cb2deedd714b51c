//! Primal-dual path-following solver with Nesterov-Todd scaling and a
//! Mehrotra-style predictor-corrector, on dense complex Hermitian blocks.
//!
//! The per-iteration linear system is the normal-equation matrix
//! `M[j,k] = Σ_i ⟨A_{j,i}, W_i A_{k,i} W_i⟩`, which is real symmetric
//! positive definite for W ≻ 0 and independent constraint rows; it is
//! factored by dense Cholesky. Constraint matrices are sparse, so `M` is
//! assembled from sparse-outer products. The iteration schedule is fixed,
//! making identical inputs produce identical outputs bit for bit.

use nalgebra::{Cholesky, DMatrix, DVector};
use num_complex::Complex64;

use crate::error::QsteinError;
use crate::operators::hermitian_eigh;
use crate::tolerances;
use crate::Result;

use super::model::{SdpProblem, Sense, SparseHermitian};

/// Solver knobs. Defaults match the crate-wide budgets.
#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    pub max_iter: usize,
    /// Relative duality-gap target.
    pub gap_tol: f64,
    /// Relative primal/dual feasibility target.
    pub feas_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iter: tolerances::SDP_MAX_ITER,
            gap_tol: 1e-9,
            feas_tol: 1e-10,
        }
    }
}

/// Residuals of the returned iterate.
#[derive(Debug, Clone, Copy)]
pub struct KktResiduals {
    /// `max_j |b_j − ⟨A_j, X⟩|`, relative.
    pub primal: f64,
    /// `max ‖C − A*(y) − S‖`, relative.
    pub dual: f64,
    /// `|primal_obj − dual_obj| / (1 + |primal_obj|)`.
    pub gap: f64,
}

/// Termination status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    NumericalFail,
}

/// Solution record. On `Infeasible` the `farkas` vector `ŷ` certifies
/// `A*(ŷ) ⪯ 0`, `b·ŷ > 0`; on `NumericalFail` the best iterate is attached.
#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub status: SdpStatus,
    pub primal: Vec<DMatrix<Complex64>>,
    pub dual: Vec<f64>,
    pub primal_obj: f64,
    pub dual_obj: f64,
    pub iterations: usize,
    pub kkt: KktResiduals,
    pub farkas: Option<Vec<f64>>,
}

struct Lowered {
    dims: Vec<usize>,
    obj: Vec<DMatrix<Complex64>>,
    cons: Vec<Vec<(usize, SparseHermitian)>>,
    b: Vec<f64>,
    /// number of original (non-slack) blocks
    n_orig_blocks: usize,
}

fn lower(p: &SdpProblem) -> Lowered {
    let mut dims = p.block_dims().to_vec();
    let n_orig_blocks = dims.len();
    let mut obj: Vec<DMatrix<Complex64>> = p.objective().to_vec();
    let mut cons = Vec::with_capacity(p.num_constraints());
    let mut b = Vec::with_capacity(p.num_constraints());
    for c in p.constraints() {
        let mut terms = c.terms.clone();
        if c.sense == Sense::Le {
            dims.push(1);
            obj.push(DMatrix::zeros(1, 1));
            let slack = dims.len() - 1;
            let mut s = SparseHermitian::new(1);
            s.set(0, 0, Complex64::new(1.0, 0.0));
            terms.push((slack, s));
        }
        cons.push(terms);
        b.push(c.rhs);
    }
    Lowered {
        dims,
        obj,
        cons,
        b,
        n_orig_blocks,
    }
}

/// Solve the program. Infeasibility is certified by a dual improving ray;
/// iterates exceeding the iteration cap return `NumericalFail` with the best
/// iterate attached.
pub fn solve(p: &SdpProblem, opts: &SolverOptions) -> Result<SdpSolution> {
    let lw = lower(p);
    let nblocks = lw.dims.len();
    let m = lw.b.len();
    if m == 0 {
        return Err(QsteinError::Config("SDP with no constraints".into()));
    }
    let var_size: usize = lw.dims.iter().map(|d| d * d).sum();
    if var_size > tolerances::SDP_VAR_CAP {
        return Err(QsteinError::BudgetExceeded {
            requested: var_size,
            cap: tolerances::SDP_VAR_CAP,
        });
    }
    let total_dim: usize = lw.dims.iter().sum();

    // data scales
    let b_max = lw.b.iter().fold(0.0f64, |a, &v| a.max(v.abs())).max(1.0);
    let a_max = lw
        .cons
        .iter()
        .flat_map(|t| t.iter())
        .fold(0.0f64, |a, (_, s)| a.max(s.max_abs()))
        .max(1e-12);
    let c_max = lw
        .obj
        .iter()
        .fold(0.0f64, |a, c| a.max(c.iter().fold(0.0, |x, z| x.max(z.norm()))))
        .max(1.0);

    // identity-proportional start with slack-based scaling
    let xi_p = (b_max / a_max).max(1.0) * 10.0;
    let xi_d = c_max.max(a_max).max(1.0) * 10.0;
    let mut x: Vec<DMatrix<Complex64>> = lw
        .dims
        .iter()
        .map(|&d| DMatrix::identity(d, d) * Complex64::new(xi_p, 0.0))
        .collect();
    let mut s: Vec<DMatrix<Complex64>> = lw
        .dims
        .iter()
        .map(|&d| DMatrix::identity(d, d) * Complex64::new(xi_d, 0.0))
        .collect();
    let mut y = DVector::<f64>::zeros(m);

    let mut best: Option<(f64, Vec<DMatrix<Complex64>>, DVector<f64>, f64, f64, KktResiduals, usize)> =
        None;
    let mut last_mu = f64::INFINITY;
    let mut stall = 0usize;

    for iter in 0..opts.max_iter {
        // residuals
        let ax = apply_a(&lw, &x);
        let rp: DVector<f64> = DVector::from_iterator(m, (0..m).map(|j| lw.b[j] - ax[j]));
        let aty = apply_at(&lw, y.as_slice());
        let rd: Vec<DMatrix<Complex64>> = (0..nblocks)
            .map(|i| &lw.obj[i] - &aty[i] - &s[i])
            .collect();
        let mu = inner_blocks(&x, &s) / total_dim as f64;

        let pobj = obj_value(&lw, &x);
        let dobj: f64 = lw.b.iter().zip(y.iter()).map(|(&bj, &yj)| bj * yj).sum();
        let pres = rp.iter().fold(0.0f64, |a, &v| a.max(v.abs())) / (1.0 + b_max);
        let dres = rd
            .iter()
            .fold(0.0f64, |a, r| a.max(r.iter().fold(0.0, |x_, z| x_.max(z.norm()))))
            / (1.0 + c_max);
        let gap = (pobj - dobj).abs() / (1.0 + pobj.abs());
        let kkt = KktResiduals {
            primal: pres,
            dual: dres,
            gap,
        };

        // track best iterate by worst residual
        let score = pres.max(dres).max(gap);
        if best.as_ref().map_or(true, |b_| score < b_.0) {
            best = Some((score, x.clone(), y.clone(), pobj, dobj, kkt, iter));
        }

        if pres <= opts.feas_tol && dres <= opts.feas_tol && gap <= opts.gap_tol {
            return Ok(finish(&lw, p, x, y, pobj, dobj, kkt, iter, SdpStatus::Optimal));
        }

        // infeasibility certificate: normalized dual ray
        if iter >= 3 {
            if let Some(cert) = farkas_certificate(&lw, y.as_slice()) {
                return Ok(SdpSolution {
                    status: SdpStatus::Infeasible,
                    primal: x[..lw.n_orig_blocks].to_vec(),
                    dual: y.as_slice().to_vec(),
                    primal_obj: pobj,
                    dual_obj: dobj,
                    iterations: iter,
                    kkt,
                    farkas: Some(cert),
                });
            }
            if let Some(_ray) = unbounded_certificate(&lw, &x) {
                return Ok(SdpSolution {
                    status: SdpStatus::Unbounded,
                    primal: x[..lw.n_orig_blocks].to_vec(),
                    dual: y.as_slice().to_vec(),
                    primal_obj: pobj,
                    dual_obj: dobj,
                    iterations: iter,
                    kkt,
                    farkas: None,
                });
            }
        }

        // stall detection
        if mu > 0.9999 * last_mu && pres > opts.feas_tol {
            stall += 1;
        } else {
            stall = 0;
        }
        last_mu = mu;
        if stall > 25 {
            break;
        }

        // NT scaling per block
        let w: Vec<DMatrix<Complex64>> = (0..nblocks)
            .map(|i| nt_scaling(&x[i], &s[i]))
            .collect();

        // normal matrix M[j,k] = Σ_i <A_j, W A_k W>
        let waw: Vec<Vec<(usize, DMatrix<Complex64>)>> = lw
            .cons
            .iter()
            .map(|terms| {
                terms
                    .iter()
                    .map(|(bi, a)| (*bi, sandwich(&w[*bi], a)))
                    .collect()
            })
            .collect();
        let mut mmat = DMatrix::<f64>::zeros(m, m);
        for j in 0..m {
            for k in j..m {
                let mut acc = 0.0;
                for (bj, aj) in &lw.cons[j] {
                    for (bk, bwk) in &waw[k] {
                        if bj == bk {
                            acc += aj.inner_dense(bwk);
                        }
                    }
                }
                mmat[(j, k)] = acc;
                mmat[(k, j)] = acc;
            }
        }
        let chol = match cholesky_with_jitter(mmat) {
            Some(c) => c,
            None => break,
        };

        let s_inv: Vec<DMatrix<Complex64>> = (0..nblocks).map(|i| herm_inverse(&s[i])).collect();

        // predictor: Rc = -X
        let rc_aff: Vec<DMatrix<Complex64>> = x.iter().map(|xi| -xi.clone()).collect();
        let (dx_a, dy_a, ds_a) = nt_direction(&lw, &chol, &w, &rd, &rp, &rc_aff);
        let ap_a = step_to_boundary(&x, &dx_a);
        let ad_a = step_to_boundary(&s, &ds_a);
        let mu_aff = {
            let xa: Vec<DMatrix<Complex64>> = (0..nblocks)
                .map(|i| &x[i] + &dx_a[i] * Complex64::new(ap_a.min(1.0), 0.0))
                .collect();
            let sa: Vec<DMatrix<Complex64>> = (0..nblocks)
                .map(|i| &s[i] + &ds_a[i] * Complex64::new(ad_a.min(1.0), 0.0))
                .collect();
            inner_blocks(&xa, &sa).max(0.0) / total_dim as f64
        };
        let sigma = ((mu_aff / mu).powi(3)).clamp(1e-8, 0.9);

        // corrector: Rc = σμ S⁻¹ − X − sym(ΔX_aff ΔS_aff S⁻¹)
        let rc: Vec<DMatrix<Complex64>> = (0..nblocks)
            .map(|i| {
                let second = &dx_a[i] * &ds_a[i] * &s_inv[i];
                let sym = (&second + second.adjoint()) * Complex64::new(0.5, 0.0);
                &s_inv[i] * Complex64::new(sigma * mu, 0.0) - &x[i] - sym
            })
            .collect();
        let (dx, dy, ds) = nt_direction(&lw, &chol, &w, &rd, &rp, &rc);
        let _ = (dy_a, ds_a);

        let tau = if iter < 5 { 0.95 } else { 0.98 };
        let ap = (tau * step_to_boundary(&x, &dx)).min(1.0);
        let ad = (tau * step_to_boundary(&s, &ds)).min(1.0);

        for i in 0..nblocks {
            x[i] += &dx[i] * Complex64::new(ap, 0.0);
            s[i] += &ds[i] * Complex64::new(ad, 0.0);
            // keep exact Hermitian form
            x[i] = (&x[i] + x[i].adjoint()) * Complex64::new(0.5, 0.0);
            s[i] = (&s[i] + s[i].adjoint()) * Complex64::new(0.5, 0.0);
        }
        y += dy * ad;
    }

    // classify the best iterate
    let (_, bx, by, pobj, dobj, kkt, iters) = best.expect("at least one iterate");
    let acceptable = kkt.primal <= 1e-7 && kkt.dual <= 1e-7 && kkt.gap <= 1e-7;
    if acceptable {
        return Ok(finish(&lw, p, bx, by, pobj, dobj, kkt, iters, SdpStatus::Optimal));
    }
    if let Some(cert) = farkas_certificate(&lw, by.as_slice()) {
        return Ok(SdpSolution {
            status: SdpStatus::Infeasible,
            primal: bx[..lw.n_orig_blocks].to_vec(),
            dual: by.as_slice().to_vec(),
            primal_obj: pobj,
            dual_obj: dobj,
            iterations: iters,
            kkt,
            farkas: Some(cert),
        });
    }
    Ok(SdpSolution {
        status: SdpStatus::NumericalFail,
        primal: bx[..lw.n_orig_blocks].to_vec(),
        dual: by.as_slice().to_vec(),
        primal_obj: pobj,
        dual_obj: dobj,
        iterations: iters,
        kkt,
        farkas: None,
    })
}

#[allow(clippy::too_many_arguments)]
fn finish(
    lw: &Lowered,
    _p: &SdpProblem,
    x: Vec<DMatrix<Complex64>>,
    y: DVector<f64>,
    pobj: f64,
    dobj: f64,
    kkt: KktResiduals,
    iterations: usize,
    status: SdpStatus,
) -> SdpSolution {
    SdpSolution {
        status,
        primal: x[..lw.n_orig_blocks].to_vec(),
        dual: y.as_slice().to_vec(),
        primal_obj: pobj,
        dual_obj: dobj,
        iterations,
        kkt,
        farkas: None,
    }
}

fn obj_value(lw: &Lowered, x: &[DMatrix<Complex64>]) -> f64 {
    let mut acc = 0.0;
    for (c, xi) in lw.obj.iter().zip(x.iter()) {
        acc += (c.adjoint() * xi).trace().re;
    }
    acc
}

fn apply_a(lw: &Lowered, x: &[DMatrix<Complex64>]) -> Vec<f64> {
    lw.cons
        .iter()
        .map(|terms| terms.iter().map(|(b, a)| a.inner_dense(&x[*b])).sum())
        .collect()
}

fn apply_at(lw: &Lowered, y: &[f64]) -> Vec<DMatrix<Complex64>> {
    let mut out: Vec<DMatrix<Complex64>> = lw
        .dims
        .iter()
        .map(|&d| DMatrix::zeros(d, d))
        .collect();
    for (j, terms) in lw.cons.iter().enumerate() {
        let yj = y[j];
        if yj == 0.0 {
            continue;
        }
        for (b, a) in terms {
            for &(r, c, v) in a.entries() {
                out[*b][(r, c)] += v * yj;
            }
        }
    }
    out
}

fn inner_blocks(p: &[DMatrix<Complex64>], q: &[DMatrix<Complex64>]) -> f64 {
    let mut acc = 0.0;
    for (a, b) in p.iter().zip(q.iter()) {
        for (x, y) in a.iter().zip(b.iter()) {
            acc += x.conj().re * y.re + x.conj().im * (-y.im);
        }
    }
    acc
}

/// `W A W` from a sparse `A` via outer products of W columns.
fn sandwich(w: &DMatrix<Complex64>, a: &SparseHermitian) -> DMatrix<Complex64> {
    let d = w.nrows();
    let mut out = DMatrix::<Complex64>::zeros(d, d);
    for &(r, c, v) in a.entries() {
        let wr = w.column(r);
        let wc = w.column(c);
        for i in 0..d {
            let vi = v * wr[i];
            for k in 0..d {
                out[(i, k)] += vi * wc[k].conj();
            }
        }
    }
    out
}

/// NT scaling point: `W = X^{1/2} (X^{1/2} S X^{1/2})^{-1/2} X^{1/2}`.
fn nt_scaling(x: &DMatrix<Complex64>, s: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let ex = hermitian_eigh(x);
    let scale = ex.spectral_radius().max(1e-300);
    let floor = scale * 1e-14;
    let x_half = ex.apply_scalar(|v| v.max(floor).sqrt());
    let t = &x_half * s * &x_half;
    let t = (&t + t.adjoint()) * Complex64::new(0.5, 0.0);
    let et = hermitian_eigh(&t);
    let t_scale = et.spectral_radius().max(1e-300);
    let t_floor = t_scale * 1e-14;
    let t_inv_half = et.apply_scalar(|v| 1.0 / v.max(t_floor).sqrt());
    let w = &x_half * t_inv_half * x_half;
    (&w + w.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Solve for a search direction given the complementarity residual `Rc` in
/// the linearization `ΔX + W ΔS W = Rc`.
fn nt_direction(
    lw: &Lowered,
    chol: &Cholesky<f64, nalgebra::Dyn>,
    w: &[DMatrix<Complex64>],
    rd: &[DMatrix<Complex64>],
    rp: &DVector<f64>,
    rc: &[DMatrix<Complex64>],
) -> (Vec<DMatrix<Complex64>>, DVector<f64>, Vec<DMatrix<Complex64>>) {
    let nblocks = lw.dims.len();
    let m = lw.b.len();
    // rhs_j = rp_j − ⟨A_j, Rc − W Rd W⟩
    let combo: Vec<DMatrix<Complex64>> = (0..nblocks)
        .map(|i| {
            let wrdw = &w[i] * &rd[i] * &w[i];
            &rc[i] - (&wrdw + wrdw.adjoint()) * Complex64::new(0.5, 0.0)
        })
        .collect();
    let mut rhs = DVector::<f64>::zeros(m);
    for (j, terms) in lw.cons.iter().enumerate() {
        let mut acc = 0.0;
        for (b, a) in terms {
            acc += a.inner_dense(&combo[*b]);
        }
        rhs[j] = rp[j] - acc;
    }
    let dy = chol.solve(&rhs);
    // ΔS = Rd − A*(Δy); ΔX = Rc − W ΔS W
    let at_dy = apply_at(lw, dy.as_slice());
    let mut dx = Vec::with_capacity(nblocks);
    let mut ds = Vec::with_capacity(nblocks);
    for i in 0..nblocks {
        let dsi = &rd[i] - &at_dy[i];
        let wdsw = &w[i] * &dsi * &w[i];
        let dxi = &rc[i] - (&wdsw + wdsw.adjoint()) * Complex64::new(0.5, 0.0);
        let dxi = (&dxi + dxi.adjoint()) * Complex64::new(0.5, 0.0);
        let dsi = (&dsi + dsi.adjoint()) * Complex64::new(0.5, 0.0);
        dx.push(dxi);
        ds.push(dsi);
    }
    (dx, dy, ds)
}

/// Largest step `α` keeping every block of `P + α D` positive semidefinite.
fn step_to_boundary(p: &[DMatrix<Complex64>], d: &[DMatrix<Complex64>]) -> f64 {
    let mut alpha = f64::INFINITY;
    for (pi, di) in p.iter().zip(d.iter()) {
        let ep = hermitian_eigh(pi);
        let scale = ep.spectral_radius().max(1e-300);
        let floor = scale * 1e-14;
        let p_inv_half = ep.apply_scalar(|v| 1.0 / v.max(floor).sqrt());
        let mhat = &p_inv_half * di * &p_inv_half;
        let mhat = (&mhat + mhat.adjoint()) * Complex64::new(0.5, 0.0);
        let em = hermitian_eigh(&mhat);
        let lam_min = em.values[0];
        if lam_min < -1e-14 {
            alpha = alpha.min(-1.0 / lam_min);
        }
    }
    alpha.min(1e6)
}

fn herm_inverse(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let e = hermitian_eigh(m);
    let scale = e.spectral_radius().max(1e-300);
    let floor = scale * 1e-14;
    e.apply_scalar(|v| 1.0 / v.max(floor))
}

fn cholesky_with_jitter(mut m: DMatrix<f64>) -> Option<Cholesky<f64, nalgebra::Dyn>> {
    let n = m.nrows();
    let base = m.trace().abs() / n as f64;
    for attempt in 0..4 {
        if let Some(c) = Cholesky::new(m.clone()) {
            return Some(c);
        }
        let jitter = base.max(1e-300) * 1e-12 * 10f64.powi(attempt);
        for i in 0..n {
            m[(i, i)] += jitter;
        }
    }
    None
}

/// Farkas test on the normalized dual vector: `A*(ŷ) ⪯ tol` on every block
/// and `b·ŷ ≥ margin` certifies primal infeasibility.
fn farkas_certificate(lw: &Lowered, y: &[f64]) -> Option<Vec<f64>> {
    let norm: f64 = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm < 1e-8 {
        return None;
    }
    let yhat: Vec<f64> = y.iter().map(|v| v / norm).collect();
    let bdot: f64 = lw.b.iter().zip(&yhat).map(|(&b, &v)| b * v).sum();
    if bdot < 1e-8 {
        return None;
    }
    let aty = apply_at(lw, &yhat);
    for blk in &aty {
        if blk.nrows() == 0 {
            continue;
        }
        let e = hermitian_eigh(blk);
        if e.values[e.values.len() - 1] > 1e-9 {
            return None;
        }
    }
    Some(yhat)
}

/// Primal improving ray: normalized `X̂ ⪰ 0` with `A(X̂) ≈ 0` and
/// `⟨C, X̂⟩ < 0` certifies unboundedness.
fn unbounded_certificate(lw: &Lowered, x: &[DMatrix<Complex64>]) -> Option<()> {
    let tr: f64 = x.iter().map(|xi| xi.trace().re).sum();
    if tr < 1e8 {
        return None;
    }
    let xhat: Vec<DMatrix<Complex64>> = x
        .iter()
        .map(|xi| xi / Complex64::new(tr, 0.0))
        .collect();
    let ax = apply_a(lw, &xhat);
    if ax.iter().any(|v| v.abs() > 1e-8) {
        return None;
    }
    let cvx = obj_value(lw, &xhat);
    if cvx <= -1e-9 {
        Some(())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::random::{random_density, random_unitary};
    use crate::operators::DimLayout;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// minimize x subject to x ≥ c, i.e. -x ≤ -c, x ⪰ 0 (1×1 block).
    #[test]
    fn scalar_lower_bound() {
        let mut p = SdpProblem::new();
        let x = p.add_block(1);
        p.set_objective(x, DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0)));
        let mut a = SparseHermitian::new(1);
        a.set(0, 0, Complex64::new(-1.0, 0.0));
        p.add_le(vec![(x, a)], -2.5);
        let sol = solve(&p, &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert_relative_eq!(sol.primal_obj, 2.5, epsilon = 1e-7);
        assert!((sol.primal_obj - sol.dual_obj).abs() <= 1e-7 * (1.0 + sol.primal_obj.abs()));
    }

    /// {x ≤ −1, x ≥ 0} is infeasible.
    #[test]
    fn detects_infeasible() {
        let mut p = SdpProblem::new();
        let x = p.add_block(1);
        p.set_objective(x, DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0)));
        let mut a = SparseHermitian::new(1);
        a.set(0, 0, Complex64::new(1.0, 0.0));
        p.add_le(vec![(x, a)], -1.0);
        let sol = solve(&p, &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, SdpStatus::Infeasible);
        assert!(sol.farkas.is_some());
    }

    /// min -x with only x ⪰ 0 and a vacuous constraint is unbounded.
    #[test]
    fn detects_unbounded() {
        let mut p = SdpProblem::new();
        let x = p.add_block(1);
        let z = p.add_block(1);
        p.set_objective(x, DMatrix::from_element(1, 1, Complex64::new(-1.0, 0.0)));
        // z = 1 pins the constraint system without bounding x
        let mut a = SparseHermitian::new(1);
        a.set(0, 0, Complex64::new(1.0, 0.0));
        p.add_eq(vec![(z, a)], 1.0);
        let sol = solve(&p, &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, SdpStatus::Unbounded);
    }

    /// max Tr[Tρ] s.t. 0 ≤ T ≤ I, Tr[Tσ] ≤ β on commuting states matches the
    /// classical likelihood-ratio oracle.
    #[test]
    fn neyman_pearson_commuting_oracle() {
        let rho_diag = [0.5, 0.3, 0.2];
        let sig_diag = [0.1, 0.3, 0.6];
        let beta = 0.25;

        // classical oracle: accept in decreasing ρ/σ order until σ budget β
        let mut order: Vec<usize> = (0..3).collect();
        order.sort_by(|&a, &b| {
            (rho_diag[b] / sig_diag[b])
                .partial_cmp(&(rho_diag[a] / sig_diag[a]))
                .unwrap()
        });
        let mut budget = beta;
        let mut expect = 0.0;
        for &i in &order {
            if sig_diag[i] <= budget + 1e-15 {
                budget -= sig_diag[i];
                expect += rho_diag[i];
            } else {
                expect += rho_diag[i] * (budget / sig_diag[i]);
                budget = 0.0;
            }
        }

        let mut p = SdpProblem::new();
        let t = p.add_block(3);
        let u = p.add_block(3);
        // maximize Tr[Tρ] = minimize -Tr[Tρ]
        let mut c = DMatrix::<Complex64>::zeros(3, 3);
        for i in 0..3 {
            c[(i, i)] = Complex64::new(-rho_diag[i], 0.0);
        }
        p.set_objective(t, c);
        // T + U = I
        let id = |h: &SparseHermitian| h.clone();
        let rhs = DMatrix::<Complex64>::identity(3, 3);
        p.add_matrix_eq(3, &[(t, &id), (u, &id)], &rhs);
        // Tr[Tσ] ≤ β
        let mut a = SparseHermitian::new(3);
        for i in 0..3 {
            a.set(i, i, Complex64::new(sig_diag[i], 0.0));
        }
        p.add_le(vec![(t, a)], beta);

        let sol = solve(&p, &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert_relative_eq!(-sol.primal_obj, expect, epsilon = 1e-6);
    }

    /// Objective invariant under unitary re-parameterization of a block.
    #[test]
    fn unitary_reparameterization_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let l = DimLayout::single(3).unwrap();
        let rho = random_density(&mut rng, &l);
        let sigma = random_density(&mut rng, &l);

        let build = |rho_m: &DMatrix<Complex64>, sig_m: &DMatrix<Complex64>| {
            let mut p = SdpProblem::new();
            let t = p.add_block(3);
            let u = p.add_block(3);
            p.set_objective(t, sig_m.clone());
            let id = |h: &SparseHermitian| h.clone();
            p.add_matrix_eq(3, &[(t, &id), (u, &id)], &DMatrix::identity(3, 3));
            let mut a = SparseHermitian::from_dense(rho_m, 0.0);
            a = negate(&a);
            p.add_le(vec![(t, a)], -(1.0 - 0.2));
            solve(&p, &SolverOptions::default()).unwrap()
        };

        fn negate(s: &SparseHermitian) -> SparseHermitian {
            let mut out = SparseHermitian::new(s.dim());
            let d = s.to_dense() * Complex64::new(-1.0, 0.0);
            out = SparseHermitian::from_dense(&d, 0.0);
            out
        }

        let sol1 = build(rho.matrix(), sigma.matrix());
        let v = random_unitary(&mut rng, 3);
        let rho2 = &v * rho.matrix() * v.adjoint();
        let sig2 = &v * sigma.matrix() * v.adjoint();
        let sol2 = build(&rho2, &sig2);
        assert_eq!(sol1.status, SdpStatus::Optimal);
        assert_eq!(sol2.status, SdpStatus::Optimal);
        assert!((sol1.primal_obj - sol2.primal_obj).abs() < 1e-6);
    }

    /// Identical inputs give identical outputs bit for bit.
    #[test]
    fn deterministic_repeat() {
        let mut p = SdpProblem::new();
        let x = p.add_block(2);
        p.set_objective(
            x,
            DMatrix::from_row_slice(
                2,
                2,
                &[
                    Complex64::new(1.0, 0.0),
                    Complex64::new(0.25, 0.5),
                    Complex64::new(0.25, -0.5),
                    Complex64::new(2.0, 0.0),
                ],
            ),
        );
        let mut a = SparseHermitian::new(2);
        a.set(0, 0, Complex64::new(1.0, 0.0));
        a.set(1, 1, Complex64::new(1.0, 0.0));
        p.add_eq(vec![(x, a)], 1.0);
        let s1 = solve(&p, &SolverOptions::default()).unwrap();
        let s2 = solve(&p, &SolverOptions::default()).unwrap();
        assert_eq!(s1.primal_obj.to_bits(), s2.primal_obj.to_bits());
        assert_eq!(s1.dual_obj.to_bits(), s2.dual_obj.to_bits());
        // weak duality on the minimization form
        assert!(s1.dual_obj <= s1.primal_obj + 1e-9);
    }
}
