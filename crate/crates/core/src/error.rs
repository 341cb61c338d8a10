use std::fmt;

use crate::complex::{Grade, Side, Violation};

/// Errors produced by the crosslap library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("vertex {vertex} appears more than once in a crossimplex")]
    DegenerateSimplex { vertex: u32 },

    #[error("a crossimplex needs at least one vertex")]
    EmptySimplex,

    #[error("weight {value} is not a positive finite number")]
    InvalidWeight { value: f64 },

    #[error("unknown {side} vertex {vertex}")]
    UnknownVertex { side: Side, vertex: u32 },

    #[error("crossimplex {0} is not part of the bicomplex")]
    UnknownSimplex(String),

    #[error("crossimplices live in different grades {left} and {right}")]
    GradeMismatch { left: Grade, right: Grade },

    #[error(
        "numerical rank of the {side} boundary at {grade} is ambiguous: singular value {singular_value:e} lies in [{band_low:e}, {band_high:e})"
    )]
    RankAmbiguous {
        grade: Grade,
        side: Side,
        singular_value: f64,
        band_low: f64,
        band_high: f64,
    },

    #[error("grade {0} has no crossimplices")]
    EmptyGrade(Grade),

    #[error("eigensolver did not converge: {0}")]
    EigenFailure(EigenDiagnostics),

    #[error("hub analysis is only defined at grade (0,0), got {0}")]
    UnsupportedGrade(Grade),

    #[error("only part of the spectrum was computed ({0}); full-spectrum persistence is unavailable")]
    SpectrumIncomplete(String),

    #[error("source and target layer are both {0}")]
    SameLayer(u32),

    #[error("unknown layer {0}")]
    UnknownLayer(u32),

    #[error("self-loop on node {node} (line {line})")]
    SelfLoop { line: usize, node: u32 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("bicomplex failed validation: {}", format_violations(.0))]
    Validation(Vec<Violation>),

    #[error("nothing to report")]
    EmptyReport,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Iteration diagnostics attached to [`Error::EigenFailure`].
#[derive(Debug, Clone)]
pub struct EigenDiagnostics {
    pub dimension: usize,
    pub iterations: usize,
    pub residual: f64,
}

impl fmt::Display for EigenDiagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "dimension {}, {} iterations, residual {:e}",
            self.dimension, self.iterations, self.residual
        )
    }
}

fn format_violations(v: &[Violation]) -> String {
    let shown: Vec<String> = v.iter().take(5).map(|x| x.to_string()).collect();
    if v.len() > 5 {
        format!("{} (and {} more)", shown.join("; "), v.len() - 5)
    } else {
        shown.join("; ")
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
