//! Sparse symmetric matrices and the numerical kernels built on them.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{EigenDiagnostics, Error, Result};

/// Row-major sparse square matrix. Rows hold `(column, value)` pairs sorted
/// by column with no duplicates and no explicit zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseSym {
    rows: Vec<Vec<(usize, f64)>>,
}

impl SparseSym {
    /// Builds from per-row accumulators, dropping exact zeros.
    pub fn from_rows(rows: Vec<std::collections::BTreeMap<usize, f64>>) -> Self {
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().filter(|&(_, v)| v != 0.0).collect())
            .collect();
        SparseSym { rows }
    }

    pub fn from_dense(m: &DMatrix<f64>) -> Self {
        assert_eq!(m.nrows(), m.ncols());
        let rows = (0..m.nrows())
            .map(|i| {
                (0..m.ncols())
                    .filter(|&j| m[(i, j)] != 0.0)
                    .map(|j| (j, m[(i, j)]))
                    .collect()
            })
            .collect();
        SparseSym { rows }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match self.rows[i].binary_search_by_key(&j, |e| e.0) {
            Ok(p) => self.rows[i][p].1,
            Err(_) => 0.0,
        }
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut m = DMatrix::zeros(n, n);
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, v) in r {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&(j, v)| v * x[j]).sum())
            .collect()
    }

    /// Largest absolute asymmetry `|m_ij - m_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, v) in r {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Gershgorin bound on the spectral radius.
    pub fn gershgorin(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.iter().map(|e| e.1.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Index sets of the connected components of the sparsity graph, each
    /// sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut uf = UnionFind::new(n);
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, _) in r {
                uf.union(i, j);
            }
        }
        uf.groups()
    }

    /// Sparse principal submatrix on `idx`, renumbered by position in `idx`.
    pub fn restrict(&self, idx: &[usize]) -> SparseSym {
        let pos: std::collections::HashMap<usize, usize> =
            idx.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let rows = idx
            .iter()
            .map(|&i| {
                let mut r: Vec<(usize, f64)> = self.rows[i]
                    .iter()
                    .filter_map(|&(j, v)| pos.get(&j).map(|&q| (q, v)))
                    .collect();
                r.sort_unstable_by_key(|e| e.0);
                r
            })
            .collect();
        SparseSym { rows }
    }

    /// Dense principal submatrix on `idx`.
    pub fn submatrix(&self, idx: &[usize]) -> DMatrix<f64> {
        let mut pos = std::collections::HashMap::with_capacity(idx.len());
        for (p, &i) in idx.iter().enumerate() {
            pos.insert(i, p);
        }
        let mut m = DMatrix::zeros(idx.len(), idx.len());
        for (p, &i) in idx.iter().enumerate() {
            for &(j, v) in &self.rows[i] {
                if let Some(&q) = pos.get(&j) {
                    m[(p, q)] = v;
                }
            }
        }
        m
    }
}

/// Disjoint-set forest with path halving.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true if the sets were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // Smaller root wins so that representatives are deterministic.
        if ra < rb {
            self.parent[rb] = ra;
        } else {
            self.parent[ra] = rb;
        }
        true
    }

    pub fn groups(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..n {
            let r = self.find(i);
            by_root.entry(r).or_default().push(i);
        }
        by_root.into_values().collect()
    }
}

/// Eigenpairs of a dense symmetric matrix, ascending.
pub fn dense_symmetric_eigen(m: DMatrix<f64>) -> Result<Vec<(f64, Vec<f64>)>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let max_iter = 64 * n.max(16);
    let eig = SymmetricEigen::try_new(m, f64::EPSILON, max_iter).ok_or(Error::EigenFailure(
        EigenDiagnostics { dimension: n, iterations: max_iter, residual: f64::NAN },
    ))?;
    let mut pairs: Vec<(f64, Vec<f64>)> = (0..n)
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors.column(i).iter().copied().collect()))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(pairs)
}

/// Singular values of a dense matrix.
pub fn singular_values(m: DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    m.singular_values().iter().copied().collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Which end of the spectrum to extract.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumEnd {
    Smallest,
    Largest,
}

/// Extracts the eigenvalue cluster at one end of the spectrum of a large
/// sparse symmetric matrix: every eigenpair whose eigenvalue is within
/// `cluster_tol` of the extreme one.
///
/// Uses Lanczos with full reorthogonalization, deflating converged vectors
/// one at a time, so repeated eigenvalues are recovered with their full
/// multiplicity.
pub fn extremal_cluster(
    m: &SparseSym,
    end: SpectrumEnd,
    cluster_tol: f64,
    residual_tol: f64,
) -> Result<Vec<(f64, Vec<f64>)>> {
    let n = m.n();
    let mut found: Vec<(f64, Vec<f64>)> = Vec::new();
    let max_steps = n.min(240);
    let max_restarts = 40;
    let mut start = deterministic_start(n, 0);
    while found.len() < n {
        let mut converged = None;
        let mut last_residual = f64::INFINITY;
        for restart in 0..max_restarts {
            let (theta, y) = lanczos_extreme(m, &start, &found, max_steps, end)?;
            let ay = m.mul_vec(&y);
            let mut r = ay.clone();
            axpy(-theta, &y, &mut r);
            last_residual = norm(&r);
            if last_residual <= residual_tol {
                converged = Some((theta, y));
                break;
            }
            start = y;
            // Nudge the restart vector so a stagnating run does not repeat.
            let jitter = deterministic_start(n, restart + 1);
            axpy(1e-3, &jitter, &mut start);
        }
        let (theta, y) = converged.ok_or(Error::EigenFailure(EigenDiagnostics {
            dimension: n,
            iterations: max_restarts * max_steps,
            residual: last_residual,
        }))?;
        if let Some((first, _)) = found.first() {
            if (theta - first).abs() > cluster_tol {
                break;
            }
        }
        found.push((theta, y));
        start = deterministic_start(n, found.len() + 7);
    }
    found.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(found)
}

fn deterministic_start(n: usize, salt: usize) -> Vec<f64> {
    // Quasi-random, dense, reproducible.
    (0..n)
        .map(|i| {
            let t = (i as f64 + 1.0) * 0.618_033_988_749_895 + salt as f64 * 0.414_213_562_373_095;
            (t.fract() - 0.5) + 1e-3
        })
        .collect()
}

fn project_out(v: &mut [f64], basis: &[(f64, Vec<f64>)]) {
    for (_, b) in basis {
        let c = dot(v, b);
        axpy(-c, b, v);
    }
}

/// One Lanczos run on `m` restricted to the orthogonal complement of
/// `deflate`; returns the extreme Ritz pair.
fn lanczos_extreme(
    m: &SparseSym,
    start: &[f64],
    deflate: &[(f64, Vec<f64>)],
    max_steps: usize,
    end: SpectrumEnd,
) -> Result<(f64, Vec<f64>)> {
    let n = m.n();
    let mut q = start.to_vec();
    project_out(&mut q, deflate);
    let mut nq = norm(&q);
    if nq == 0.0 {
        q = deterministic_start(n, 99);
        project_out(&mut q, deflate);
        nq = norm(&q);
    }
    q.iter_mut().for_each(|x| *x /= nq);

    let mut basis: Vec<Vec<f64>> = vec![q];
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let steps = max_steps.min(n - deflate.len()).max(1);
    for j in 0..steps {
        let mut w = m.mul_vec(&basis[j]);
        project_out(&mut w, deflate);
        let a = dot(&w, &basis[j]);
        alpha.push(a);
        // Full reorthogonalization, twice for stability.
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&w, b);
                axpy(-c, b, &mut w);
            }
            project_out(&mut w, deflate);
        }
        let b = norm(&w);
        if j + 1 == steps || b < 1e-12 {
            break;
        }
        beta.push(b);
        w.iter_mut().for_each(|x| *x /= b);
        basis.push(w);
    }
    let k = alpha.len();
    let mut t = DMatrix::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alpha[i];
        if i + 1 < k {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let pairs = dense_symmetric_eigen(t)?;
    let (theta, s) = match end {
        SpectrumEnd::Smallest => pairs.first().cloned().unwrap(),
        SpectrumEnd::Largest => pairs.last().cloned().unwrap(),
    };
    let mut y = vec![0.0; n];
    for (i, b) in basis.iter().enumerate().take(k) {
        axpy(s[i], b, &mut y);
    }
    let ny = norm(&y);
    y.iter_mut().for_each(|x| *x /= ny);
    Ok((theta, y))
}
