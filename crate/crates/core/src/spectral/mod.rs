//! Weighted cross-Laplacians, their spectra, spectral cross-hubs and
//! persistence.

mod eigen;
mod hubs;
mod persistence;

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::complex::{Bicomplex, Crossimplex, Grade, Side};
use crate::error::{Error, Result};
use crate::homology::{boundary_matrix, ChainBasis, SignedSparseMatrix};
use crate::linalg::SparseSym;

pub use eigen::{eig, nullity, EigenDecomposition, DENSE_LIMIT};
pub use hubs::{
    edge_intensities, harmonic_cross_hubs, principal_cross_hubs, projector_diagonal,
    projector_intensities, spectral_cross_hubs, stage_partition, CrossSpectrum, IntensityRule,
    SpectralOptions, Stage,
};
pub use persistence::{persistence_bars, Bar, PersistenceBars, RankedHub, SpectralReport, StageReport};

/// Top or bottom cross-Laplacian at one grade.
///
/// The stored matrix is the symmetric form `W^{1/2} L W^{-1/2}` of the
/// operator `L` on the weighted inner product; it has the spectrum of `L`
/// and equals `L` when all weights are 1. [`Laplacian::operator_matrix`]
/// returns `L` itself.
#[derive(Clone, Debug)]
pub struct Laplacian {
    grade: Grade,
    part: Side,
    basis: Arc<ChainBasis>,
    weights: Vec<f64>,
    matrix: SparseSym,
}

impl Laplacian {
    pub fn grade(&self) -> Grade {
        self.grade
    }

    pub fn part(&self) -> Side {
        self.part
    }

    pub fn basis(&self) -> &Arc<ChainBasis> {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Symmetric form.
    pub fn matrix(&self) -> &SparseSym {
        &self.matrix
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        self.matrix.to_dense()
    }

    /// The operator in the elementary basis (not symmetric for non-unit
    /// weights).
    pub fn operator_matrix(&self) -> DMatrix<f64> {
        let mut m = self.matrix.to_dense();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                m[(i, j)] *= (self.weights[j] / self.weights[i]).sqrt();
            }
        }
        m
    }

    /// Entry of the symmetric form between two crossimplices.
    pub fn entry(&self, a: &Crossimplex, b: &Crossimplex) -> Option<f64> {
        Some(self.matrix.get(self.basis.index_of(a)?, self.basis.index_of(b)?))
    }

    /// Weight of each basis element.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Coboundary on `side` from grade `(k,l)` to the coface grade: the
/// transpose of the boundary matrix there.
pub fn coboundary_matrix(x: &Bicomplex, k: i32, l: i32, side: Side) -> SignedSparseMatrix {
    let up = Grade::new(k, l).up(side);
    boundary_matrix(x, up.k, up.l, side).transpose()
}

/// Adjoint of [`coboundary_matrix`] for the weighted inner product. Entry
/// `(a, a')` is `sgn · w(a') / w(a)`.
pub fn coboundary_adjoint(x: &Bicomplex, k: i32, l: i32, side: Side) -> SignedSparseMatrix {
    let up = Grade::new(k, l).up(side);
    let d = boundary_matrix(x, up.k, up.l, side);
    let (rows, cols) = (d.rows().clone(), d.cols().clone());
    let triplets: Vec<_> = d
        .entries()
        .iter()
        .map(|&(r, c, v)| (r, c, v * x.weight(cols.get(c)) / x.weight(rows.get(r))))
        .collect();
    SignedSparseMatrix::from_triplets(rows, cols, triplets)
}

/// Assembles the `part` cross-Laplacian at `grade` entry by entry from
/// parent (coface) and child (face) incidences.
pub fn laplacian(x: &Bicomplex, grade: Grade, part: Side) -> Result<Laplacian> {
    if x.count(grade) == 0 {
        return Err(Error::EmptyGrade(grade));
    }
    let basis = Arc::new(ChainBasis::new(x, grade));
    let n = basis.len();
    let weights: Vec<f64> = basis.iter().map(|a| x.weight(a)).collect();
    let sqrt_w: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
    let mut rows: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); n];

    // Upper part: a, b both faces of a parent c.
    let up = grade.up(part);
    for c in x.grade(up) {
        let wc = x.weight(c);
        let faces: Vec<(usize, f64)> = c
            .faces(part)
            .into_iter()
            .filter_map(|(f, s)| basis.index_of(&f).map(|i| (i, f64::from(s))))
            .collect();
        for &(i, si) in &faces {
            for &(j, sj) in &faces {
                *rows[i].entry(j).or_default() += wc / (sqrt_w[i] * sqrt_w[j]) * si * sj;
            }
        }
    }

    // Lower part: a, b share a child d.
    let mut children: BTreeMap<Crossimplex, Vec<(usize, f64)>> = BTreeMap::new();
    for (i, a) in basis.iter().enumerate() {
        for (d, s) in a.faces(part) {
            children.entry(d).or_default().push((i, f64::from(s)));
        }
    }
    for (d, members) in &children {
        let wd = x.weight(d);
        for &(i, si) in members {
            for &(j, sj) in members {
                *rows[i].entry(j).or_default() += sqrt_w[i] * sqrt_w[j] / wd * si * sj;
            }
        }
    }

    Ok(Laplacian { grade, part, basis, weights, matrix: SparseSym::from_rows(rows) })
}

/// Independent dense assembly from explicit boundary matrices:
/// `W^{-1} B₊ W₊ B₊ᵀ + B₋ᵀ W₋^{-1} B₋ W`, returned in the same symmetric
/// form as [`Laplacian::matrix`].
pub fn laplacian_from_boundaries(x: &Bicomplex, grade: Grade, part: Side) -> Result<DMatrix<f64>> {
    if x.count(grade) == 0 {
        return Err(Error::EmptyGrade(grade));
    }
    let up = grade.up(part);
    let b_up = boundary_matrix(x, up.k, up.l, part).to_dense();
    let b_down = boundary_matrix(x, grade.k, grade.l, part);
    let diag = |basis: &ChainBasis| {
        DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            basis.len(),
            basis.iter().map(|a| x.weight(a)),
        ))
    };
    let basis = ChainBasis::new(x, grade);
    let w = diag(&basis);
    let w_inv = w.map(|v| if v == 0.0 { 0.0 } else { 1.0 / v });
    let up_basis = ChainBasis::new(x, up);
    let w_up = diag(&up_basis);
    let down_dense = b_down.to_dense();
    let w_down_inv = diag(b_down.rows()).map(|v| if v == 0.0 { 0.0 } else { 1.0 / v });

    let upper = &w_inv * &b_up * &w_up * b_up.transpose();
    let lower = down_dense.transpose() * w_down_inv * &down_dense * &w;
    let op = upper + lower;
    let half = w.map(|v| v.sqrt());
    let half_inv = w_inv.map(|v| v.sqrt());
    Ok(half * op * half_inv)
}
