use std::sync::Arc;

use crate::error::Result;
use crate::homology::ChainBasis;
use crate::linalg::{dense_symmetric_eigen, extremal_cluster, SparseSym, SpectrumEnd};
use crate::Tolerances;

use super::Laplacian;

/// Largest connected block solved densely. Bigger blocks only get their
/// extreme eigenvalue clusters.
pub const DENSE_LIMIT: usize = 2000;

/// Relative tolerance for ties in the sign convention.
const SIGN_TIE: f64 = 1e-12;

/// Ascending eigenpairs of a Laplacian's symmetric form.
///
/// Each eigenvector is stored sparsely over the connected block it lives
/// in. Its largest-magnitude coordinate is positive (ties: lowest index).
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    basis: Arc<ChainBasis>,
    eigenvalues: Vec<f64>,
    vectors: Vec<Vec<(usize, f64)>>,
    complete: bool,
}

impl EigenDecomposition {
    pub fn basis(&self) -> &Arc<ChainBasis> {
        &self.basis
    }

    /// Dimension of the space.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Number of computed eigenpairs.
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// False when only extreme clusters of some block were computed.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Non-zero coordinates of eigenvector `i` as `(basis index, value)`.
    pub fn support(&self, i: usize) -> &[(usize, f64)] {
        &self.vectors[i]
    }

    pub fn vector(&self, i: usize) -> Vec<f64> {
        let mut v = vec![0.0; self.dim()];
        for &(j, x) in &self.vectors[i] {
            v[j] = x;
        }
        v
    }

    /// Largest `‖Sv − λv‖∞` over all pairs.
    pub fn max_residual(&self, lap: &Laplacian) -> f64 {
        (0..self.len())
            .map(|i| {
                let v = self.vector(i);
                let sv = lap.matrix().mul_vec(&v);
                sv.iter()
                    .zip(&v)
                    .map(|(a, b)| (a - self.eigenvalues[i] * b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.len() {
            let vi = self.vector(i);
            for j in i..self.len() {
                let d: f64 = self.vectors[j].iter().map(|&(k, x)| x * vi[k]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((d - want).abs());
            }
        }
        worst
    }
}

fn fix_sign(v: &mut [(usize, f64)]) {
    let max = v.iter().map(|e| e.1.abs()).fold(0.0, f64::max);
    // Support is sorted by index, so the first near-maximal entry wins ties.
    if let Some(&(_, x)) = v.iter().find(|e| e.1.abs() >= max * (1.0 - SIGN_TIE)) {
        if x < 0.0 {
            v.iter_mut().for_each(|e| e.1 = -e.1);
        }
    }
}

/// Eigendecomposition of `lap`, solved block by block over the connected
/// components of its sparsity pattern.
pub fn eig(lap: &Laplacian, tol: &Tolerances, dense_limit: usize) -> Result<EigenDecomposition> {
    let m = lap.matrix();
    let mut pairs: Vec<(f64, Vec<(usize, f64)>)> = Vec::with_capacity(m.n());
    let mut complete = true;
    for block in m.components() {
        let found = if block.len() <= dense_limit {
            dense_symmetric_eigen(m.submatrix(&block))?
        } else {
            complete = false;
            extreme_clusters(&m.restrict(&block), tol)?
        };
        for (lambda, v) in found {
            let mut sparse: Vec<(usize, f64)> =
                block.iter().zip(v).filter(|e| e.1 != 0.0).map(|(&i, x)| (i, x)).collect();
            sparse.sort_unstable_by_key(|e| e.0);
            fix_sign(&mut sparse);
            pairs.push((lambda, sparse));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (eigenvalues, vectors) = pairs.into_iter().unzip();
    Ok(EigenDecomposition { basis: lap.basis().clone(), eigenvalues, vectors, complete })
}

fn extreme_clusters(m: &SparseSym, tol: &Tolerances) -> Result<Vec<(f64, Vec<f64>)>> {
    let bound = m.gershgorin().max(1.0);
    let residual = 1e-9 * bound;
    let mut high = extremal_cluster(m, SpectrumEnd::Largest, tol.group * bound, residual)?;
    let scale = high.last().map(|p| p.0).unwrap_or(0.0).max(1.0);
    let mut low = extremal_cluster(m, SpectrumEnd::Smallest, tol.group * scale, residual)?;
    if low.last().map(|p| p.0) >= high.first().map(|p| p.0) {
        // The two clusters coincide: the block is a multiple of the identity.
        return Ok(high);
    }
    low.append(&mut high);
    Ok(low)
}

/// Dimension of the kernel of `lap`: eigenvalues at most
/// `tol.zero · max(1, λ_max)`.
pub fn nullity(lap: &Laplacian, tol: &Tolerances, dense_limit: usize) -> Result<usize> {
    let m = lap.matrix();
    let mut values = Vec::new();
    let mut scale: f64 = 1.0;
    for block in m.components() {
        if block.len() <= dense_limit {
            let pairs = dense_symmetric_eigen(m.submatrix(&block))?;
            scale = scale.max(pairs.last().map(|p| p.0).unwrap_or(0.0));
            values.extend(pairs.into_iter().map(|p| p.0));
        } else {
            let sub = m.restrict(&block);
            let bound = sub.gershgorin().max(1.0);
            scale = scale.max(bound);
            let low = extremal_cluster(&sub, SpectrumEnd::Smallest, tol.group * bound, 1e-9 * bound)?;
            values.extend(low.into_iter().map(|p| p.0));
        }
    }
    Ok(values.iter().filter(|&&v| v <= tol.zero * scale).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{Grade, Side};
    use crate::fixtures;
    use crate::spectral::laplacian;

    #[test]
    fn f3_top_spectrum() {
        let lap = laplacian(&fixtures::f3(), Grade::CROSS_EDGES, Side::Top).unwrap();
        let e = eig(&lap, &Tolerances::default(), DENSE_LIMIT).unwrap();
        let want = [0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 2.0, 3.0, 5.0];
        for (got, want) in e.eigenvalues().iter().zip(want) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
        assert!(e.max_residual(&lap) < 1e-10);
        assert!(e.orthonormality_error() < 1e-10);
        assert!(e.is_complete());
    }

    #[test]
    fn lanczos_path_matches_dense_extremes() {
        let lap = laplacian(&fixtures::f3(), Grade::CROSS_EDGES, Side::Bottom).unwrap();
        let tol = Tolerances::default();
        let dense = eig(&lap, &tol, DENSE_LIMIT).unwrap();
        let partial = eig(&lap, &tol, 2).unwrap();
        assert!(!partial.is_complete());
        assert!((partial.lambda_max() - dense.lambda_max()).abs() < 1e-9);
        let zeros = |e: &EigenDecomposition| e.eigenvalues().iter().filter(|v| v.abs() < 1e-8).count();
        assert_eq!(zeros(&partial), zeros(&dense));
        assert!(partial.max_residual(&lap) < 1e-8);
        assert_eq!(nullity(&lap, &tol, 2).unwrap(), 2);
    }

    #[test]
    fn sign_convention() {
        let mut v = vec![(0, 0.5), (3, -0.5), (4, -0.1)];
        fix_sign(&mut v);
        assert_eq!(v[0].1, 0.5);
        let mut w = vec![(0, 0.1), (2, -0.9)];
        fix_sign(&mut w);
        assert_eq!(w, vec![(0, -0.1), (2, 0.9)]);
    }
}
