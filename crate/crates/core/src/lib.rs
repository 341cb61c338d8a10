//! Crossimplicial bicomplexes of two-layer networks, their cross-homology
//! and cross-Laplacian spectra, and the spectral cross-hub analysis built on
//! them.
//!
//! ```
//! use crosslap::{betti_vector, fixtures, Grade, Tolerances};
//!
//! let x = fixtures::f3();
//! let b = betti_vector(&x, Grade::CROSS_EDGES, &Tolerances::default()).unwrap();
//! assert_eq!(b.pair(), (3, 2));
//! ```

pub mod complex;
pub mod diffusion;
pub mod error;
pub mod fixtures;
pub mod homology;
pub mod io;
pub mod linalg;
pub mod spectral;

pub use complex::{
    cross_clique_bicomplex, make_crossimplex, Adjacency, Bicomplex, BicomplexBuilder, Crossface,
    Crossimplex, Degrees, Grade, Graph, Multicomplex, NodeId, Side, VertexRef, Violation, Weighting,
};
pub use diffusion::{diffusion_bicomplex, diffusion_hub_analysis, DiffusionReport, Multiplex};
pub use error::{EigenDiagnostics, Error, Result};
pub use homology::{
    all_cones, betti_vector, boundary_matrix, cross_betti_table, enumerate_cones, enumerate_kites,
    BettiTable, BettiVector, ChainBasis, Cone, Kite, SignedSparseMatrix,
};
pub use spectral::{
    coboundary_matrix, eig, harmonic_cross_hubs, laplacian, persistence_bars, principal_cross_hubs,
    CrossSpectrum, EigenDecomposition, IntensityRule, Laplacian, PersistenceBars, RankedHub,
    SpectralOptions, SpectralReport, Stage,
};

/// Numerical thresholds shared across the crate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Kernel membership and non-zero coordinate threshold.
    pub zero: f64,
    /// Relative gap below which consecutive eigenvalues share a stage.
    pub group: f64,
    /// Relative singular value threshold for numerical rank.
    pub rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { zero: 1e-8, group: 1e-9, rank: 1e-10 }
    }
}
