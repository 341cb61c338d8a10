//! Diffusion bicomplexes of multiplex networks and the hub pipeline on them.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::complex::{Bicomplex, Crossimplex, Grade, NodeId, Side, Weighting};
use crate::error::{Error, Result};
use crate::spectral::{CrossSpectrum, PersistenceBars, RankedHub, SpectralOptions, SpectralReport};

/// Graphs on one shared node set, one per layer.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Multiplex {
    nodes: BTreeSet<NodeId>,
    labels: BTreeMap<NodeId, String>,
    /// Layer → edge `(u, v)` with `u < v` → weight.
    layers: BTreeMap<u32, BTreeMap<(NodeId, NodeId), f64>>,
}

impl Multiplex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, v: NodeId) {
        self.nodes.insert(v);
    }

    pub fn add_layer(&mut self, layer: u32) {
        self.layers.entry(layer).or_default();
    }

    /// Adds an undirected edge; a repeated edge keeps its first weight.
    pub fn add_edge(&mut self, layer: u32, u: NodeId, v: NodeId, weight: f64) -> Result<()> {
        if u == v {
            return Err(Error::SelfLoop { line: 0, node: u });
        }
        if !(weight.is_finite() && weight > 0.0) {
            return Err(Error::InvalidWeight { value: weight });
        }
        self.nodes.insert(u);
        self.nodes.insert(v);
        self.layers.entry(layer).or_default().entry((u.min(v), u.max(v))).or_insert(weight);
        Ok(())
    }

    pub fn set_label(&mut self, v: NodeId, label: impl Into<String>) {
        self.labels.insert(v, label.into());
    }

    pub fn label(&self, v: NodeId) -> Option<&str> {
        self.labels.get(&v).map(String::as_str)
    }

    pub fn labels(&self) -> &BTreeMap<NodeId, String> {
        &self.labels
    }

    pub fn nodes(&self) -> &BTreeSet<NodeId> {
        &self.nodes
    }

    pub fn layer_ids(&self) -> impl Iterator<Item = u32> + '_ {
        self.layers.keys().copied()
    }

    /// Edges of `layer` as `(u, v, weight)` with `u < v`.
    pub fn edges(&self, layer: u32) -> Result<impl Iterator<Item = (NodeId, NodeId, f64)> + '_> {
        let l = self.layers.get(&layer).ok_or(Error::UnknownLayer(layer))?;
        Ok(l.iter().map(|(&(u, v), &w)| (u, v, w)))
    }

    pub fn has_edge(&self, layer: u32, u: NodeId, v: NodeId) -> bool {
        self.layers.get(&layer).is_some_and(|l| l.contains_key(&(u.min(v), u.max(v))))
    }

    /// Every ordered pair of distinct layers.
    pub fn ordered_pairs(&self) -> Vec<(u32, u32)> {
        let ids: Vec<u32> = self.layer_ids().collect();
        ids.iter()
            .flat_map(|&s| ids.iter().filter(move |&&t| t != s).map(move |&t| (s, t)))
            .collect()
    }

    fn adjacency(&self, layer: u32) -> Result<BTreeMap<NodeId, BTreeSet<NodeId>>> {
        let mut adj: BTreeMap<NodeId, BTreeSet<NodeId>> = BTreeMap::new();
        for (u, v, _) in self.edges(layer)? {
            adj.entry(u).or_default().insert(v);
            adj.entry(v).or_default().insert(u);
        }
        Ok(adj)
    }
}

/// Diffusion bicomplex of layer `s` onto layer `t`.
///
/// Both sides carry the full node set. Cross-edges are `[i; j]` for each
/// edge `{i,j}` of `s` with `i < j`; the bottom complex is the clique
/// complex of `t` up to triangles; `[i; j,k]` is present when `[i;j]` and
/// `[i;k]` are cross-edges and `{j,k}` is an edge of `t`.
///
/// With `use_weights`, each cross-edge carries the weight of its edge in `s`.
pub fn diffusion_bicomplex(m: &Multiplex, s: u32, t: u32, use_weights: bool) -> Result<Bicomplex> {
    if s == t {
        return Err(Error::SameLayer(s));
    }
    let adj_t = m.adjacency(t)?;
    let mut grades: BTreeMap<Grade, BTreeSet<Crossimplex>> = BTreeMap::new();
    let mut put = |a: Crossimplex| {
        grades.entry(a.grade()).or_default().insert(a);
    };
    for &v in m.nodes() {
        put(Crossimplex::top_vertex(v));
        put(Crossimplex::bottom_vertex(v));
    }

    for (u, nbrs) in &adj_t {
        for &v in nbrs.range(u + 1..) {
            put(Crossimplex::from_raw_unchecked(vec![], vec![*u, v]));
            for &w in nbrs.range(v + 1..) {
                if adj_t[&v].contains(&w) {
                    put(Crossimplex::from_raw_unchecked(vec![], vec![*u, v, w]));
                }
            }
        }
    }

    let mut weights = Weighting::new();
    let mut forward: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for (i, j, w) in m.edges(s)? {
        let e = Crossimplex::cross_edge(i, j);
        if use_weights {
            weights.set(e.clone(), w)?;
        }
        put(e);
        forward.entry(i).or_default().push(j);
    }
    for (i, js) in &forward {
        for (p, &j) in js.iter().enumerate() {
            for &k in &js[p + 1..] {
                if adj_t.get(&j).is_some_and(|n| n.contains(&k)) {
                    put(Crossimplex::from_raw_unchecked(vec![*i], vec![j, k]));
                }
            }
        }
    }
    Ok(Bicomplex::from_raw_parts(grades, weights))
}

/// Result of the hub pipeline on one ordered layer pair.
#[derive(Clone, Debug, Serialize)]
pub struct DiffusionReport {
    pub source: u32,
    pub target: u32,
    pub cross_edges: usize,
    pub spectral: SpectralReport,
    pub hubs: Vec<RankedHub>,
    #[serde(skip)]
    pub persistence: PersistenceBars,
}

/// Builds the diffusion bicomplex of `s` onto `t`, decomposes its bottom
/// (0,0)-Laplacian and ranks the top-layer nodes by spectral persistence.
pub fn diffusion_hub_analysis(
    m: &Multiplex,
    s: u32,
    t: u32,
    top_n: Option<usize>,
    use_weights: bool,
    options: &SpectralOptions,
) -> Result<DiffusionReport> {
    let x = diffusion_bicomplex(m, s, t, use_weights)?;
    let cross_edges = x.count(Grade::CROSS_EDGES);
    let spectrum = CrossSpectrum::compute(&x, Grade::CROSS_EDGES, Side::Bottom, options)?;
    let persistence = spectrum.persistence()?;
    let hubs = persistence.ranked(top_n, |v| m.label(v).map(str::to_string));
    Ok(DiffusionReport { source: s, target: t, cross_edges, spectral: spectrum.report()?, hubs, persistence })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_and_edge() -> Multiplex {
        let mut m = Multiplex::new();
        m.add_edge(1, 1, 2, 1.0).unwrap();
        m.add_edge(1, 2, 3, 1.0).unwrap();
        m.add_edge(2, 2, 3, 1.0).unwrap();
        m
    }

    #[test]
    fn path_onto_edge() {
        let x = diffusion_bicomplex(&path_and_edge(), 1, 2, false).unwrap();
        let edges: Vec<String> = x.grade(Grade::CROSS_EDGES).iter().map(|a| a.to_string()).collect();
        assert_eq!(edges, vec!["[1;2]", "[2;3]"]);
        assert_eq!(x.count(Grade::new(0, 1)), 0);
        assert!(x.validate().is_ok());
    }

    #[test]
    fn triangle_crossimplex() {
        // Γ^s = star at 1 over {2,3}, Γ^t = edge {2,3}.
        let mut m = Multiplex::new();
        m.add_edge(1, 1, 2, 1.0).unwrap();
        m.add_edge(1, 1, 3, 1.0).unwrap();
        m.add_edge(2, 2, 3, 1.0).unwrap();
        let x = diffusion_bicomplex(&m, 1, 2, false).unwrap();
        assert_eq!(x.count(Grade::CROSS_EDGES), 2);
        assert!(x.contains(&Crossimplex::new(&[1], &[2, 3]).unwrap()));
        assert_eq!(x.count(Grade::new(1, 0)), 0);
        assert_eq!(x.count(Grade::new(1, -1)), 0);
        assert!(x.validate().is_ok());
        let back = diffusion_bicomplex(&m, 2, 1, false).unwrap();
        assert_eq!(back.count(Grade::CROSS_EDGES), 1);
    }

    #[test]
    fn errors() {
        let m = path_and_edge();
        assert!(matches!(diffusion_bicomplex(&m, 1, 1, false), Err(Error::SameLayer(1))));
        assert!(matches!(diffusion_bicomplex(&m, 1, 9, false), Err(Error::UnknownLayer(9))));
        let mut empty = Multiplex::new();
        empty.add_layer(1);
        empty.add_edge(2, 1, 2, 1.0).unwrap();
        let r = diffusion_hub_analysis(&empty, 1, 2, None, false, &SpectralOptions::default());
        assert!(matches!(r, Err(Error::EmptyGrade(_))));
    }

    #[test]
    fn single_edge_source() {
        let mut m = Multiplex::new();
        m.add_edge(1, 4, 7, 1.0).unwrap();
        m.add_edge(2, 1, 2, 1.0).unwrap();
        let r = diffusion_hub_analysis(&m, 1, 2, None, false, &SpectralOptions::default()).unwrap();
        assert_eq!(r.cross_edges, 1);
        assert_eq!(r.hubs.len(), 1);
        assert_eq!(r.hubs[0].node, 4);
    }

    #[test]
    fn weights_land_on_cross_edges() {
        let mut m = Multiplex::new();
        m.add_edge(1, 1, 2, 3.5).unwrap();
        m.add_edge(2, 1, 2, 1.0).unwrap();
        let x = diffusion_bicomplex(&m, 1, 2, true).unwrap();
        assert_eq!(x.weight(&Crossimplex::cross_edge(1, 2)), 3.5);
        let y = diffusion_bicomplex(&m, 1, 2, false).unwrap();
        assert_eq!(y.weight(&Crossimplex::cross_edge(1, 2)), 1.0);
    }
}
