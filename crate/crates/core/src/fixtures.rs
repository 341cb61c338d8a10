//! Small hand-built bicomplexes used in tests, benches and documentation.

use crate::complex::Bicomplex;

/// Two-layer toy bicomplex with eight top vertices (0..=7) and six bottom
/// vertices (0..=5).
///
/// Top layer: triangle {5,6,7} and edges 01, 12, 13, 23, 34. Bottom layer:
/// triangles {0,1,2} and {3,4,5} joined by edge 23. Cross-triangles
/// [0,1;1], [1,2;1], [6;1,2], [6;4,5] and lone cross-edges [4;1], [4;4].
pub fn f3() -> Bicomplex {
    Bicomplex::builder()
        .cell(&[5, 6, 7], &[])
        .cell(&[0, 1], &[])
        .cell(&[1, 2], &[])
        .cell(&[1, 3], &[])
        .cell(&[2, 3], &[])
        .cell(&[3, 4], &[])
        .cell(&[], &[0, 1, 2])
        .cell(&[], &[3, 4, 5])
        .cell(&[], &[2, 3])
        .cell(&[0, 1], &[1])
        .cell(&[1, 2], &[1])
        .cell(&[6], &[1, 2])
        .cell(&[6], &[4, 5])
        .cell(&[4], &[1])
        .cell(&[4], &[4])
        .build()
        .expect("fixture is well formed")
}

/// Bicomplex with kites and cones: top vertices 0..=6, bottom 0..=4.
///
/// Top path 0-1-2-3-4 plus edge 56; bottom triangle {0,1,2} with path
/// 2-3-4. Cross-triangles [0,1;1], [1,2;1], [6;1,2], [6;2,3], [6;3,4] and
/// lone cross-edges [4;1], [4;4].
pub fn kites_and_cones() -> Bicomplex {
    Bicomplex::builder()
        .cell(&[0, 1], &[])
        .cell(&[1, 2], &[])
        .cell(&[2, 3], &[])
        .cell(&[3, 4], &[])
        .cell(&[5, 6], &[])
        .cell(&[], &[0, 1, 2])
        .cell(&[], &[2, 3])
        .cell(&[], &[3, 4])
        .cell(&[0, 1], &[1])
        .cell(&[1, 2], &[1])
        .cell(&[6], &[1, 2])
        .cell(&[6], &[2, 3])
        .cell(&[6], &[3, 4])
        .cell(&[4], &[1])
        .cell(&[4], &[4])
        .build()
        .expect("fixture is well formed")
}

/// Two vertices joined by one cross-edge.
pub fn single_cross_edge() -> Bicomplex {
    Bicomplex::builder().cell(&[0], &[0]).build().expect("fixture is well formed")
}
