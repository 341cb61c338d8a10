use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complex::{Bicomplex, Grade, NodeId, Side};
use crate::error::{Error, Result};
use crate::homology::ChainBasis;
use crate::Tolerances;

use super::{eig, laplacian, persistence, EigenDecomposition, Laplacian, PersistenceBars, SpectralReport};

/// How per-eigenvector coordinates are combined into one intensity per
/// cross-edge when a stage has several eigenvectors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntensityRule {
    /// Largest absolute coordinate.
    #[default]
    MaxAbs,
    /// Sum of absolute coordinates.
    L1,
    /// Square root of the eigenspace projector diagonal. Independent of the
    /// basis chosen inside a repeated eigenvalue.
    Projector,
}

impl std::str::FromStr for IntensityRule {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "max-abs" | "max" => Ok(IntensityRule::MaxAbs),
            "l1" | "L1" => Ok(IntensityRule::L1),
            "projector" => Ok(IntensityRule::Projector),
            _ => Err(format!("unknown intensity rule '{s}' (expected max-abs, l1 or projector)")),
        }
    }
}

/// Settings shared by the spectral pipeline.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralOptions {
    pub tol: Tolerances,
    pub rule: IntensityRule,
    /// Largest block handed to the dense eigensolver.
    pub dense_limit: usize,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions {
            tol: Tolerances::default(),
            rule: IntensityRule::default(),
            dense_limit: super::DENSE_LIMIT,
        }
    }
}

/// One group of (numerically) equal eigenvalues.
#[derive(Clone, Debug, PartialEq)]
pub struct Stage {
    pub index: usize,
    /// Mean of the member eigenvalues, snapped to 0 inside the kernel
    /// threshold.
    pub lambda: f64,
    /// Indices into the decomposition's eigenpairs.
    pub members: Vec<usize>,
    /// Non-zero intensities keyed by basis index.
    pub intensities: BTreeMap<usize, f64>,
    /// Hub nodes and their hubness.
    pub hubs: BTreeMap<NodeId, f64>,
}

impl Stage {
    pub fn multiplicity(&self) -> usize {
        self.members.len()
    }

    pub fn intensity(&self, i: usize) -> f64 {
        self.intensities.get(&i).copied().unwrap_or(0.0)
    }
}

/// Groups ascending eigenvalues into maximal runs whose consecutive gaps are
/// at most `tol_group · max(1, λ_max)`. Intensities and hubs are left empty.
pub fn stage_partition(e: &EigenDecomposition, tol_group: f64) -> Vec<Stage> {
    let vals = e.eigenvalues();
    let scale = e.lambda_max().max(1.0);
    let gap = tol_group * scale;
    let mut stages: Vec<Stage> = Vec::new();
    for (i, &v) in vals.iter().enumerate() {
        match stages.last_mut() {
            Some(s) if v - vals[*s.members.last().unwrap()] <= gap => s.members.push(i),
            _ => stages.push(Stage {
                index: stages.len(),
                lambda: 0.0,
                members: vec![i],
                intensities: BTreeMap::new(),
                hubs: BTreeMap::new(),
            }),
        }
    }
    for s in &mut stages {
        s.lambda = s.members.iter().map(|&i| vals[i]).sum::<f64>() / s.members.len() as f64;
    }
    stages
}

/// Per-edge intensities of a stage under `rule`. Coordinates with absolute
/// value at most `tol_zero` count as 0.
pub fn edge_intensities(
    stage: &Stage,
    e: &EigenDecomposition,
    rule: IntensityRule,
    tol_zero: f64,
) -> BTreeMap<usize, f64> {
    if rule == IntensityRule::Projector {
        return projector_intensities(stage, e, tol_zero);
    }
    let mut out: BTreeMap<usize, f64> = BTreeMap::new();
    for &m in &stage.members {
        for &(i, x) in e.support(m) {
            let a = x.abs();
            if a <= tol_zero {
                continue;
            }
            let slot = out.entry(i).or_default();
            match rule {
                IntensityRule::MaxAbs => *slot = slot.max(a),
                _ => *slot += a,
            }
        }
    }
    out
}

/// Diagonal of the orthogonal projector onto the stage's eigenspace,
/// keyed by basis index (non-zero entries only).
pub fn projector_diagonal(stage: &Stage, e: &EigenDecomposition) -> BTreeMap<usize, f64> {
    let mut out: BTreeMap<usize, f64> = BTreeMap::new();
    for &m in &stage.members {
        for &(i, x) in e.support(m) {
            *out.entry(i).or_default() += x * x;
        }
    }
    out
}

/// `sqrt(P_aa)` per edge, dropping values at most `tol_zero`.
pub fn projector_intensities(stage: &Stage, e: &EigenDecomposition, tol_zero: f64) -> BTreeMap<usize, f64> {
    projector_diagonal(stage, e)
        .into_iter()
        .map(|(i, p)| (i, p.sqrt()))
        .filter(|&(_, v)| v > tol_zero)
        .collect()
}

/// Node whose cross-edges are aggregated for `part`: the bottom vertex for
/// the top Laplacian, the top vertex for the bottom one.
fn hub_node(basis: &ChainBasis, i: usize, part: Side) -> NodeId {
    basis.get(i).part(part.other())[0]
}

/// Sums edge intensities per node. Nodes with hubness at most `tol_zero`
/// are dropped.
pub fn spectral_cross_hubs(
    basis: &ChainBasis,
    intensities: &BTreeMap<usize, f64>,
    part: Side,
    tol_zero: f64,
) -> Result<BTreeMap<NodeId, f64>> {
    if basis.grade() != Grade::CROSS_EDGES {
        return Err(Error::UnsupportedGrade(basis.grade()));
    }
    let mut hubs: BTreeMap<NodeId, f64> = BTreeMap::new();
    for (&i, &v) in intensities {
        *hubs.entry(hub_node(basis, i, part)).or_default() += v;
    }
    hubs.retain(|_, h| *h > tol_zero);
    Ok(hubs)
}

/// A Laplacian with its decomposition and populated stages.
#[derive(Clone, Debug)]
pub struct CrossSpectrum {
    pub laplacian: Laplacian,
    pub eigen: EigenDecomposition,
    pub stages: Vec<Stage>,
    pub options: SpectralOptions,
}

impl CrossSpectrum {
    /// Assembles, decomposes and partitions. Hubs are filled in only at
    /// grade (0,0).
    pub fn compute(x: &Bicomplex, grade: Grade, part: Side, options: &SpectralOptions) -> Result<Self> {
        let lap = laplacian(x, grade, part)?;
        Self::from_laplacian(lap, options)
    }

    pub fn from_laplacian(lap: Laplacian, options: &SpectralOptions) -> Result<Self> {
        let eigen = eig(&lap, &options.tol, options.dense_limit)?;
        let mut stages = stage_partition(&eigen, options.tol.group);
        let kernel = options.tol.zero * eigen.lambda_max().max(1.0);
        for s in &mut stages {
            if s.lambda.abs() <= kernel {
                s.lambda = 0.0;
            }
            s.intensities = edge_intensities(s, &eigen, options.rule, options.tol.zero);
            if lap.grade() == Grade::CROSS_EDGES {
                s.hubs = spectral_cross_hubs(lap.basis(), &s.intensities, lap.part(), options.tol.zero)?;
            }
        }
        Ok(CrossSpectrum { laplacian: lap, eigen, stages, options: *options })
    }

    pub fn grade(&self) -> Grade {
        self.laplacian.grade()
    }

    pub fn part(&self) -> Side {
        self.laplacian.part()
    }

    fn require_hubs(&self) -> Result<()> {
        if self.grade() != Grade::CROSS_EDGES {
            return Err(Error::UnsupportedGrade(self.grade()));
        }
        Ok(())
    }

    /// The kernel stage, if the Laplacian is singular.
    pub fn harmonic_stage(&self) -> Option<&Stage> {
        self.stages.first().filter(|s| s.lambda == 0.0)
    }

    /// The stage of the largest eigenvalue.
    pub fn principal_stage(&self) -> Option<&Stage> {
        self.stages.last()
    }

    pub fn harmonic_hubs(&self) -> Result<BTreeMap<NodeId, f64>> {
        self.require_hubs()?;
        Ok(self.harmonic_stage().map(|s| s.hubs.clone()).unwrap_or_default())
    }

    pub fn principal_hubs(&self) -> Result<BTreeMap<NodeId, f64>> {
        self.require_hubs()?;
        Ok(self.principal_stage().map(|s| s.hubs.clone()).unwrap_or_default())
    }

    /// Hubs of the stage at `index`.
    pub fn stage_hubs(&self, index: usize) -> Result<BTreeMap<NodeId, f64>> {
        self.require_hubs()?;
        self.stages
            .get(index)
            .map(|s| s.hubs.clone())
            .ok_or_else(|| Error::SpectrumIncomplete(format!("stage {index} does not exist")))
    }

    pub fn persistence(&self) -> Result<PersistenceBars> {
        self.require_hubs()?;
        if !self.eigen.is_complete() {
            return Err(Error::SpectrumIncomplete(format!(
                "{} of {} eigenpairs",
                self.eigen.len(),
                self.eigen.dim()
            )));
        }
        Ok(PersistenceBars::from_stages(&self.stages))
    }

    pub fn report(&self) -> Result<SpectralReport> {
        persistence::report(self)
    }
}

/// Hubs of the kernel stage of the `part` (0,0)-Laplacian.
pub fn harmonic_cross_hubs(x: &Bicomplex, part: Side, options: &SpectralOptions) -> Result<BTreeMap<NodeId, f64>> {
    CrossSpectrum::compute(x, Grade::CROSS_EDGES, part, options)?.harmonic_hubs()
}

/// Hubs of the largest-eigenvalue stage of the `part` (0,0)-Laplacian.
pub fn principal_cross_hubs(x: &Bicomplex, part: Side, options: &SpectralOptions) -> Result<BTreeMap<NodeId, f64>> {
    CrossSpectrum::compute(x, Grade::CROSS_EDGES, part, options)?.principal_hubs()
}
