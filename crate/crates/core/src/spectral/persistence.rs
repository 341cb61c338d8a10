use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complex::{Bicomplex, Grade, NodeId, Side};
use crate::error::Result;

use super::{CrossSpectrum, SpectralOptions, Stage};

/// A maximal run of consecutive stages at which a node is a hub.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bar {
    pub node: NodeId,
    pub start: usize,
    /// Inclusive.
    pub end: usize,
}

/// Stage membership of every node that is a hub somewhere in the spectrum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PersistenceBars {
    pub n_stages: usize,
    /// Sorted stage indices per node.
    pub presence: BTreeMap<NodeId, Vec<usize>>,
    /// Hubness at each stage in `presence`, aligned with it.
    pub hubness: BTreeMap<NodeId, Vec<f64>>,
    /// Nodes by descending stage count, then later last stage, then id.
    pub ranking: Vec<NodeId>,
}

impl PersistenceBars {
    pub fn from_stages(stages: &[Stage]) -> Self {
        let mut presence: BTreeMap<NodeId, Vec<usize>> = BTreeMap::new();
        let mut hubness: BTreeMap<NodeId, Vec<f64>> = BTreeMap::new();
        for s in stages {
            for (&node, &h) in &s.hubs {
                presence.entry(node).or_default().push(s.index);
                hubness.entry(node).or_default().push(h);
            }
        }
        let mut ranking: Vec<NodeId> = presence.keys().copied().collect();
        ranking.sort_by(|a, b| {
            let (pa, pb) = (&presence[a], &presence[b]);
            pb.len()
                .cmp(&pa.len())
                .then(pb.last().cmp(&pa.last()))
                .then(a.cmp(b))
        });
        PersistenceBars { n_stages: stages.len(), presence, hubness, ranking }
    }

    pub fn is_empty(&self) -> bool {
        self.presence.is_empty()
    }

    /// Maximal consecutive runs, grouped by node in ranking order.
    pub fn bars(&self) -> Vec<Bar> {
        let mut out = Vec::new();
        for &node in &self.ranking {
            let stages = &self.presence[&node];
            let mut start = stages[0];
            for w in stages.windows(2) {
                if w[1] != w[0] + 1 {
                    out.push(Bar { node, start, end: w[0] });
                    start = w[1];
                }
            }
            out.push(Bar { node, start, end: *stages.last().unwrap() });
        }
        out
    }

    /// Nodes present at the final stage.
    pub fn survivors(&self) -> Vec<NodeId> {
        let last = self.n_stages.saturating_sub(1);
        self.presence
            .iter()
            .filter(|(_, s)| s.last() == Some(&last))
            .map(|(&n, _)| n)
            .collect()
    }

    /// Ranking rows with labels resolved through `label`.
    pub fn ranked(&self, top_n: Option<usize>, label: impl Fn(NodeId) -> Option<String>) -> Vec<RankedHub> {
        self.ranking
            .iter()
            .take(top_n.unwrap_or(usize::MAX))
            .enumerate()
            .map(|(i, &node)| RankedHub {
                rank: i + 1,
                node,
                label: label(node),
                persistence: self.presence[&node].len(),
                last_stage: *self.presence[&node].last().unwrap(),
                hubness: *self.hubness[&node].last().unwrap(),
            })
            .collect()
    }
}

/// One row of a hub ranking.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankedHub {
    pub rank: usize,
    pub node: NodeId,
    pub label: Option<String>,
    /// Number of stages at which the node is a hub.
    pub persistence: usize,
    pub last_stage: usize,
    /// Hubness at `last_stage`.
    pub hubness: f64,
}

/// Persistence bars of the `part` (0,0)-Laplacian over its full spectrum.
pub fn persistence_bars(x: &Bicomplex, part: Side, options: &SpectralOptions) -> Result<PersistenceBars> {
    CrossSpectrum::compute(x, Grade::CROSS_EDGES, part, options)?.persistence()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageReport {
    pub lambda: f64,
    pub multiplicity: usize,
    pub hubs: BTreeMap<NodeId, f64>,
}

/// Serializable summary of a spectral analysis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub grade: Grade,
    pub part: Side,
    pub complete: bool,
    pub eigenvalues: Vec<f64>,
    pub stages: Vec<StageReport>,
    /// Absent when the spectrum is incomplete or the grade has no hubs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bars: Option<BTreeMap<NodeId, Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranking: Option<Vec<NodeId>>,
}

pub(super) fn report(s: &CrossSpectrum) -> Result<SpectralReport> {
    let bars = if s.grade() == Grade::CROSS_EDGES && s.eigen.is_complete() {
        Some(s.persistence()?)
    } else {
        None
    };
    Ok(SpectralReport {
        grade: s.grade(),
        part: s.part(),
        complete: s.eigen.is_complete(),
        eigenvalues: s.eigen.eigenvalues().to_vec(),
        stages: s
            .stages
            .iter()
            .map(|st| StageReport { lambda: st.lambda, multiplicity: st.multiplicity(), hubs: st.hubs.clone() })
            .collect(),
        ranking: bars.as_ref().map(|b| b.ranking.clone()),
        bars: bars.map(|b| b.presence),
    })
}
