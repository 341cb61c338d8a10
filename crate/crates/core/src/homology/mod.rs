//! Chain bases, boundary matrices, cross-Betti vectors, kites and cones.

mod cones;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::complex::{Bicomplex, Crossimplex, Grade, Multicomplex, Side};
use crate::error::{Error, Result};
use crate::linalg::{singular_values, UnionFind};
use crate::spectral;
use crate::Tolerances;

pub use cones::{all_cones, enumerate_cones, enumerate_kites, Cone, Kite};

/// Ordered basis of the chain space at one grade. Elements are sorted
/// lexicographically on `(top, bottom)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainBasis {
    grade: Grade,
    elements: Vec<Crossimplex>,
    index: HashMap<Crossimplex, usize>,
}

impl ChainBasis {
    pub fn new(x: &Bicomplex, grade: Grade) -> Self {
        Self::from_elements(grade, x.grade(grade).iter().cloned().collect())
    }

    /// Builds a basis from arbitrary crossimplices of one grade; they are
    /// sorted and deduplicated.
    pub fn from_elements(grade: Grade, mut elements: Vec<Crossimplex>) -> Self {
        elements.sort();
        elements.dedup();
        debug_assert!(elements.iter().all(|a| a.grade() == grade));
        let index = elements.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        ChainBasis { grade, elements, index }
    }

    pub fn grade(&self) -> Grade {
        self.grade
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, i: usize) -> &Crossimplex {
        &self.elements[i]
    }

    pub fn index_of(&self, a: &Crossimplex) -> Option<usize> {
        self.index.get(a).copied()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Crossimplex> {
        self.elements.iter()
    }

    pub fn as_slice(&self) -> &[Crossimplex] {
        &self.elements
    }
}

/// Sparse matrix between two chain bases, stored as triplets sorted by
/// `(col, row)`.
#[derive(Clone, Debug)]
pub struct SignedSparseMatrix {
    rows: Arc<ChainBasis>,
    cols: Arc<ChainBasis>,
    entries: Vec<(usize, usize, f64)>,
}

impl SignedSparseMatrix {
    /// Builds from triplets, summing duplicates and dropping zeros.
    pub fn from_triplets(
        rows: Arc<ChainBasis>,
        cols: Arc<ChainBasis>,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Self {
        let mut acc: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (r, c, v) in triplets {
            assert!(r < rows.len() && c < cols.len(), "triplet out of range");
            *acc.entry((c, r)).or_default() += v;
        }
        let entries = acc
            .into_iter()
            .filter(|&(_, v)| v != 0.0)
            .map(|((c, r), v)| (r, c, v))
            .collect();
        SignedSparseMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> &Arc<ChainBasis> {
        &self.rows
    }

    pub fn cols(&self) -> &Arc<ChainBasis> {
        &self.cols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    /// `(row, col, value)` triplets ordered by column, then row.
    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.entries
            .binary_search_by(|&(er, ec, _)| (ec, er).cmp(&(c, r)))
            .map(|p| self.entries[p].2)
            .unwrap_or(0.0)
    }

    pub fn transpose(&self) -> SignedSparseMatrix {
        SignedSparseMatrix::from_triplets(
            self.cols.clone(),
            self.rows.clone(),
            self.entries.iter().map(|&(r, c, v)| (c, r, v)),
        )
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.nrows(), self.ncols());
        for &(r, c, v) in &self.entries {
            m[(r, c)] = v;
        }
        m
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols());
        let mut y = vec![0.0; self.nrows()];
        for &(r, c, v) in &self.entries {
            y[r] += v * x[c];
        }
        y
    }

    /// Product `self * rhs`; the inner bases must have equal length.
    pub fn matmul(&self, rhs: &SignedSparseMatrix) -> SignedSparseMatrix {
        assert_eq!(self.ncols(), rhs.nrows());
        let mut by_row: Vec<Vec<(usize, f64)>> = vec![Vec::new(); rhs.nrows()];
        for &(r, c, v) in &rhs.entries {
            by_row[r].push((c, v));
        }
        let triplets = self.entries.iter().flat_map(|&(r, k, v)| {
            by_row[k].iter().map(move |&(c, w)| (r, c, v * w))
        });
        SignedSparseMatrix::from_triplets(self.rows.clone(), rhs.cols.clone(), triplets.collect::<Vec<_>>())
    }

    /// Number of stored non-zero entries.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }
}

/// Matrix of the cross-boundary on `side` from grade `(k,l)` to the face
/// grade. Column `a` has `sgn` at each crossface row.
pub fn boundary_matrix(x: &Bicomplex, k: i32, l: i32, side: Side) -> SignedSparseMatrix {
    let grade = Grade::new(k, l);
    let cols = Arc::new(ChainBasis::new(x, grade));
    let down = grade.down(side);
    let rows = Arc::new(if down.is_valid() {
        ChainBasis::new(x, down)
    } else {
        ChainBasis::from_elements(down, Vec::new())
    });
    boundary_between(rows, cols, side)
}

pub(crate) fn boundary_between(
    rows: Arc<ChainBasis>,
    cols: Arc<ChainBasis>,
    side: Side,
) -> SignedSparseMatrix {
    let mut triplets = Vec::new();
    for (c, a) in cols.iter().enumerate() {
        for (face, sign) in a.faces(side) {
            // Closure guarantees membership; skipping keeps the map total.
            if let Some(r) = rows.index_of(&face) {
                triplets.push((r, c, f64::from(sign)));
            }
        }
    }
    SignedSparseMatrix::from_triplets(rows, cols, triplets)
}

/// Band around the rank threshold inside which a singular value makes the
/// numerical rank ambiguous, relative to the largest singular value.
pub const RANK_AMBIGUITY_BAND: (f64, f64) = (1e-12, 1e-8);

/// Singular values of each connected block of the row/column incidence
/// graph, concatenated.
fn blockwise_singular_values(m: &SignedSparseMatrix) -> Vec<f64> {
    let (nr, nc) = (m.nrows(), m.ncols());
    if m.nnz() == 0 {
        return Vec::new();
    }
    let mut uf = UnionFind::new(nr + nc);
    for &(r, c, _) in m.entries() {
        uf.union(r, nr + c);
    }
    let mut blocks: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for r in 0..nr {
        let root = uf.find(r);
        blocks.entry(root).or_default().0.push(r);
    }
    for c in 0..nc {
        let root = uf.find(nr + c);
        blocks.entry(root).or_default().1.push(c);
    }
    let mut row_pos = vec![0; nr];
    let mut col_pos = vec![0; nc];
    let mut block_of = vec![0; nc];
    let mut dense: Vec<DMatrix<f64>> = Vec::new();
    for (rs, cs) in blocks.into_values() {
        if rs.is_empty() || cs.is_empty() {
            continue;
        }
        for (p, &r) in rs.iter().enumerate() {
            row_pos[r] = p;
        }
        for (p, &c) in cs.iter().enumerate() {
            col_pos[c] = p;
            block_of[c] = dense.len();
        }
        dense.push(DMatrix::zeros(rs.len(), cs.len()));
    }
    for &(r, c, v) in m.entries() {
        dense[block_of[c]][(row_pos[r], col_pos[c])] = v;
    }
    dense.into_iter().flat_map(singular_values).collect()
}

/// Numerical rank: singular values at least `tau * sigma_max` count.
/// Errors when a singular value falls inside the ambiguity band.
pub fn numerical_rank(m: &SignedSparseMatrix, tau: f64, grade: Grade, side: Side) -> Result<usize> {
    let sv = blockwise_singular_values(m);
    let smax = sv.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return Ok(0);
    }
    let (lo, hi) = (RANK_AMBIGUITY_BAND.0 * smax, RANK_AMBIGUITY_BAND.1 * smax);
    if let Some(&s) = sv.iter().find(|&&s| s >= lo && s < hi) {
        return Err(Error::RankAmbiguous {
            grade,
            side,
            singular_value: s,
            band_low: lo,
            band_high: hi,
        });
    }
    Ok(sv.iter().filter(|&&s| s >= tau * smax).count())
}

/// Cross-Betti vector of one grade, computed two ways.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BettiVector {
    pub top: usize,
    pub bottom: usize,
    /// Nullities of the top and bottom cross-Laplacians at the same grade.
    pub laplacian_nullity: (usize, usize),
}

impl BettiVector {
    pub fn pair(&self) -> (usize, usize) {
        (self.top, self.bottom)
    }

    /// True when rank-nullity and Laplacian nullity agree on both sides.
    pub fn cross_checked(&self) -> bool {
        (self.top, self.bottom) == self.laplacian_nullity
    }
}

impl std::fmt::Display for BettiVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.top, self.bottom)
    }
}

/// Rank-nullity Betti number on one side.
pub fn betti_number(x: &Bicomplex, grade: Grade, side: Side, tol: &Tolerances) -> Result<usize> {
    let dim = x.count(grade);
    if dim == 0 {
        return Ok(0);
    }
    let here = boundary_matrix(x, grade.k, grade.l, side);
    let up = grade.up(side);
    let above = boundary_matrix(x, up.k, up.l, side);
    let r_here = numerical_rank(&here, tol.rank, grade, side)?;
    let r_above = numerical_rank(&above, tol.rank, up, side)?;
    Ok(dim - r_here - r_above)
}

/// `(β¹, β²)` at `grade`, with the Laplacian-nullity cross-check.
pub fn betti_vector(x: &Bicomplex, grade: Grade, tol: &Tolerances) -> Result<BettiVector> {
    let top = betti_number(x, grade, Side::Top, tol)?;
    let bottom = betti_number(x, grade, Side::Bottom, tol)?;
    let nullity = |part| -> Result<usize> {
        if x.count(grade) == 0 {
            return Ok(0);
        }
        let lap = spectral::laplacian(x, grade, part)?;
        spectral::nullity(&lap, tol, spectral::DENSE_LIMIT)
    };
    Ok(BettiVector { top, bottom, laplacian_nullity: (nullity(Side::Top)?, nullity(Side::Bottom)?) })
}

/// Betti vectors per stored layer pair and grade.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BettiTable {
    pub grades: Vec<Grade>,
    pub pairs: Vec<(u32, u32)>,
    /// `cells[i][j]` is the vector at `grades[i]` for `pairs[j]`.
    pub cells: Vec<Vec<BettiVector>>,
}

impl BettiTable {
    pub fn get(&self, pair: (u32, u32), grade: Grade) -> Option<&BettiVector> {
        let i = self.grades.iter().position(|&g| g == grade)?;
        let j = self.pairs.iter().position(|&p| p == pair)?;
        Some(&self.cells[i][j])
    }

    /// CSV with one row per grade and one column per layer pair; cells are
    /// `"(b1,b2)"`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["grade".to_string()];
        header.extend(self.pairs.iter().map(|(s, t)| format!("{s}-{t}")));
        w.write_record(&header)?;
        for (g, row) in self.grades.iter().zip(&self.cells) {
            let mut rec = vec![g.to_string()];
            rec.extend(row.iter().map(|b| b.to_string()));
            w.write_record(&rec)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Cross-Betti table of a multicomplex over its stored pairs.
pub fn cross_betti_table(m: &Multicomplex, grades: &[Grade], tol: &Tolerances) -> Result<BettiTable> {
    let pairs: Vec<(u32, u32)> = m.pairs().map(|(p, _)| p).collect();
    let mut cells = Vec::with_capacity(grades.len());
    for &g in grades {
        let mut row = Vec::with_capacity(pairs.len());
        for (_, x) in m.pairs() {
            row.push(betti_vector(x, g, tol)?);
        }
        cells.push(row);
    }
    Ok(BettiTable { grades: grades.to_vec(), pairs, cells })
}
