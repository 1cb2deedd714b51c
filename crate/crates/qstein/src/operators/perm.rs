//! Permutations of tensor factors and their unitary representation.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::QsteinError;
use crate::Result;

use super::hermitian::HermitianOp;
use super::layout::{DimLayout, Indexer};

/// Permutation of `{0, …, n−1}` stored as the image list: `g.map[i] = g(i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &v in &map {
            if v >= n || seen[v] {
                return Err(QsteinError::ShapeMismatch(format!(
                    "not a permutation: {map:?}"
                )));
            }
            seen[v] = true;
        }
        Ok(Self { map })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
        }
    }

    /// Transposition swapping `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        let mut map: Vec<usize> = (0..n).collect();
        if i >= n || j >= n {
            return Err(QsteinError::InvalidFactor {
                index: i.max(j),
                factors: n,
            });
        }
        map.swap(i, j);
        Self::new(map)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    /// Composition `self ∘ other`, i.e. `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            map: other.map.iter().map(|&i| self.map[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0usize; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { map: inv }
    }

    /// All `n!` permutations in a fixed deterministic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        use itertools::Itertools;
        (0..n)
            .permutations(n)
            .map(|map| Permutation { map })
            .collect()
    }
}

/// Unitary `U(g)` acting on `n` factors of local dimension `d`:
/// `U(g)(v_1 ⊗ … ⊗ v_n) = v_{g^{-1}(1)} ⊗ … ⊗ v_{g^{-1}(n)}`, so the content
/// of slot `i` moves to slot `g(i)`.
pub fn permutation_unitary(g: &Permutation, d: usize) -> Result<DMatrix<Complex64>> {
    let n = g.len();
    let layout = DimLayout::uniform(d, n)?;
    let ix = layout.indexer();
    let dim = ix.total();
    let mut u = DMatrix::<Complex64>::zeros(dim, dim);
    let mut digits = vec![0usize; n];
    let mut moved = vec![0usize; n];
    for col in 0..dim {
        ix.unpack(col, &mut digits);
        for i in 0..n {
            moved[g.apply(i)] = digits[i];
        }
        u[(ix.pack(&moved), col)] = Complex64::new(1.0, 0.0);
    }
    Ok(u)
}

/// Conjugate `X` by `U(g)` through index relabeling, avoiding the matrix
/// product: `(U X U†)[j, j'] = X[j∘g, j'∘g]`.
pub fn permute_factors(x: &HermitianOp, g: &Permutation) -> Result<HermitianOp> {
    let layout = x.layout();
    if layout.num_factors() != g.len() {
        return Err(QsteinError::ShapeMismatch(format!(
            "permutation on {} slots vs {} factors",
            g.len(),
            layout.num_factors()
        )));
    }
    // index relabeling only works when permuted factors share dimensions
    for i in 0..g.len() {
        if layout.factors()[i] != layout.factors()[g.apply(i)] {
            return Err(QsteinError::ShapeMismatch(
                "permutation mixes factors of different dimension".into(),
            ));
        }
    }
    let ix: Indexer = layout.indexer();
    let d = ix.total();
    let mut out = DMatrix::<Complex64>::zeros(d, d);
    let n = g.len();
    let mut rd = vec![0usize; n];
    let mut cd = vec![0usize; n];
    let mut rs = vec![0usize; n];
    let mut cs = vec![0usize; n];
    for r in 0..d {
        ix.unpack(r, &mut rd);
        for c in 0..d {
            ix.unpack(c, &mut cd);
            for k in 0..n {
                let src = g.apply(k);
                rs[k] = rd[src];
                cs[k] = cd[src];
            }
            out[(r, c)] = x.matrix()[(ix.pack(&rs), ix.pack(&cs))];
        }
    }
    Ok(HermitianOp::hermitized(out, layout.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::DensityOp;

    #[test]
    fn identity_permutation_is_identity_matrix() {
        let g = Permutation::identity(2);
        let u = permutation_unitary(&g, 2).unwrap();
        let id = DMatrix::<Complex64>::identity(4, 4);
        assert!((&u - id).iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn swap_moves_01_to_10() {
        let g = Permutation::transposition(2, 0, 1).unwrap();
        let u = permutation_unitary(&g, 2).unwrap();
        // |01⟩ is flat index 1; |10⟩ is flat index 2
        assert_eq!(u[(2, 1)].re, 1.0);
        assert_eq!(u[(1, 2)].re, 1.0);
    }

    #[test]
    fn homomorphism_on_compose() {
        let perms = Permutation::all(3);
        let g = &perms[3];
        let h = &perms[4];
        let ug = permutation_unitary(g, 2).unwrap();
        let uh = permutation_unitary(h, 2).unwrap();
        let ugh = permutation_unitary(&g.compose(h), 2).unwrap();
        assert!((&ug * &uh - ugh).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn permute_factors_matches_unitary_conjugation() {
        let phi = DensityOp::maximally_entangled(2).unwrap();
        let g = Permutation::transposition(2, 0, 1).unwrap();
        let u = permutation_unitary(&g, 2).unwrap();
        let fast = permute_factors(phi.op(), &g).unwrap();
        let slow = phi.op().conjugate_by(&u).unwrap();
        assert!((fast.matrix() - slow.matrix()).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn iid_state_is_invariant() {
        let l = crate::operators::DimLayout::single(2).unwrap();
        let rho = DensityOp::from_matrix(
            nalgebra::DMatrix::from_row_slice(
                2,
                2,
                &[
                    Complex64::new(0.7, 0.0),
                    Complex64::new(0.1, 0.2),
                    Complex64::new(0.1, -0.2),
                    Complex64::new(0.3, 0.0),
                ],
            ),
            l,
        )
        .unwrap();
        let r3 = rho.tensor_power(3).unwrap();
        for g in Permutation::all(3) {
            let moved = permute_factors(r3.op(), &g).unwrap();
            assert!((moved.matrix() - r3.matrix()).iter().all(|z| z.norm() < 1e-12));
        }
    }
}
