use std::collections::{BTreeMap, BTreeSet};

use super::{Bicomplex, Crossimplex, Grade, NodeId, Side};
use crate::error::{Error, Result};

/// Simple undirected graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: BTreeMap<NodeId, BTreeSet<NodeId>>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from an edge list. Duplicate edges collapse; self-loops
    /// are rejected.
    pub fn from_edges(
        vertices: impl IntoIterator<Item = NodeId>,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self> {
        let mut g = Graph::new();
        for v in vertices {
            g.add_vertex(v);
        }
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: NodeId) {
        self.adj.entry(v).or_default();
    }

    pub fn add_edge(&mut self, u: NodeId, v: NodeId) -> Result<()> {
        if u == v {
            return Err(Error::SelfLoop { line: 0, node: u });
        }
        self.adj.entry(u).or_default().insert(v);
        self.adj.entry(v).or_default().insert(u);
        Ok(())
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adj.get(&u).is_some_and(|n| n.contains(&v))
    }

    pub fn vertices(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.adj.keys().copied()
    }

    pub fn neighbors(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.adj.get(&v).into_iter().flat_map(|n| n.iter().copied())
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(|n| n.len()).sum::<usize>() / 2
    }

    /// Edges as ordered pairs `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adj
            .iter()
            .flat_map(|(&u, n)| n.range(u + 1..).map(move |&v| (u, v)))
    }

    /// All cliques (as sorted vertex lists) with at most `max_size` vertices
    /// whose vertices lie in `within`, including the empty clique.
    pub fn cliques_within(&self, within: &BTreeSet<NodeId>, max_size: usize) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new()];
        let mut frontier: Vec<(Vec<NodeId>, BTreeSet<NodeId>)> = vec![(Vec::new(), within.clone())];
        while let Some((clique, candidates)) = frontier.pop() {
            if clique.len() == max_size {
                continue;
            }
            for &v in &candidates {
                if clique.last().is_some_and(|&l| v <= l) {
                    continue;
                }
                let mut grown = clique.clone();
                grown.push(v);
                let next: BTreeSet<NodeId> = candidates
                    .range(v + 1..)
                    .copied()
                    .filter(|&u| self.has_edge(v, u))
                    .collect();
                out.push(grown.clone());
                frontier.push((grown, next));
            }
        }
        out.sort();
        out
    }
}

/// Cross-clique bicomplex of a two-layer network: `X_{k,l}` holds every pair
/// of a `(k+1)`-clique of `g1` and an `(l+1)`-clique of `g2` that are fully
/// joined by `inter`, up to dimension `max_dim`.
pub fn cross_clique_bicomplex(
    g1: &Graph,
    g2: &Graph,
    inter: &[(NodeId, NodeId)],
    max_dim: usize,
) -> Result<Bicomplex> {
    let mut cross: BTreeMap<NodeId, BTreeSet<NodeId>> = BTreeMap::new();
    for &(u, v) in inter {
        if !g1.contains(u) {
            return Err(Error::UnknownVertex { side: Side::Top, vertex: u });
        }
        if !g2.contains(v) {
            return Err(Error::UnknownVertex { side: Side::Bottom, vertex: v });
        }
        cross.entry(u).or_default().insert(v);
    }

    let max_size = max_dim + 1;
    let mut grades: BTreeMap<Grade, BTreeSet<Crossimplex>> = BTreeMap::new();
    let mut push = |top: Vec<NodeId>, bottom: Vec<NodeId>| {
        let a = Crossimplex::from_raw_unchecked(top, bottom);
        grades.entry(a.grade()).or_default().insert(a);
    };

    let all1: BTreeSet<NodeId> = g1.vertices().collect();
    let all2: BTreeSet<NodeId> = g2.vertices().collect();
    for b in g2.cliques_within(&all2, max_size) {
        if !b.is_empty() {
            push(Vec::new(), b);
        }
    }
    for t in g1.cliques_within(&all1, max_size) {
        if t.is_empty() {
            continue;
        }
        // Bottom vertices joined to every top vertex of the clique.
        let mut common: Option<BTreeSet<NodeId>> = None;
        for v in &t {
            let n = cross.get(v).cloned().unwrap_or_default();
            common = Some(match common {
                None => n,
                Some(c) => c.intersection(&n).copied().collect(),
            });
        }
        let common = common.unwrap_or_default();
        for b in g2.cliques_within(&common, max_size - t.len()) {
            push(t.clone(), b);
        }
    }
    Ok(Bicomplex::from_raw_parts(grades, Default::default()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_cliques(g: &Graph, max_size: usize) -> BTreeSet<Vec<NodeId>> {
        let vs: Vec<NodeId> = g.vertices().collect();
        let mut out = BTreeSet::new();
        for mask in 1u32..(1 << vs.len()) {
            let s: Vec<NodeId> = (0..vs.len()).filter(|i| mask >> i & 1 == 1).map(|i| vs[i]).collect();
            if s.len() > max_size {
                continue;
            }
            if s.iter().enumerate().all(|(i, &u)| s[i + 1..].iter().all(|&v| g.has_edge(u, v))) {
                out.insert(s);
            }
        }
        out
    }

    fn triangle(offset: NodeId) -> Graph {
        Graph::from_edges(
            [],
            [(offset, offset + 1), (offset + 1, offset + 2), (offset, offset + 2)],
        )
        .unwrap()
    }

    #[test]
    fn edge_over_vertex() {
        let g1 = Graph::from_edges([], [(0, 1)]).unwrap();
        let g2 = Graph::from_edges([9], []).unwrap();
        let x = cross_clique_bicomplex(&g1, &g2, &[(0, 9), (1, 9)], 2).unwrap();
        assert_eq!(
            x.grade(Grade::new(1, 0)).iter().collect::<Vec<_>>(),
            vec![&Crossimplex::new(&[0, 1], &[9]).unwrap()]
        );
        assert_eq!(x.count(Grade::new(0, 0)), 2);
        assert_eq!(x.len(), 7);
        assert!(x.validate().is_ok());
    }

    #[test]
    fn no_interlayer_edges() {
        let x = cross_clique_bicomplex(&triangle(0), &triangle(10), &[], 2).unwrap();
        for (g, _) in x.grades() {
            assert!(g.k == -1 || g.l == -1, "unexpected grade {g}");
        }
        assert_eq!(x.count(Grade::new(2, -1)), 1);
        assert_eq!(x.count(Grade::new(-1, 2)), 1);
    }

    #[test]
    fn two_triangles_fully_joined() {
        let inter: Vec<_> = (0..3).flat_map(|u| (10..13).map(move |v| (u, v))).collect();
        let x = cross_clique_bicomplex(&triangle(0), &triangle(10), &inter, 2).unwrap();
        assert_eq!(x.count(Grade::new(0, 1)), 9);
        assert_eq!(x.count(Grade::new(1, 0)), 9);
        assert_eq!(x.count(Grade::new(1, 1)), 0);
        assert_eq!(x.count(Grade::new(0, 0)), 9);
        assert!(x.validate().is_ok());
    }

    #[test]
    fn unknown_vertex_in_interlayer_edges() {
        let r = cross_clique_bicomplex(&triangle(0), &triangle(10), &[(0, 99)], 2);
        assert!(matches!(r, Err(Error::UnknownVertex { side: Side::Bottom, vertex: 99 })));
    }

    #[test]
    fn clique_listing_matches_brute_force() {
        let g = Graph::from_edges(
            0..7,
            [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (2, 4), (4, 5), (1, 3), (5, 6)],
        )
        .unwrap();
        let all: BTreeSet<NodeId> = g.vertices().collect();
        for max in 1..5 {
            let got: BTreeSet<_> = g.cliques_within(&all, max).into_iter().filter(|c| !c.is_empty()).collect();
            assert_eq!(got, brute_cliques(&g, max));
        }
    }
}
