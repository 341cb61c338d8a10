use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::complex::{Bicomplex, Crossimplex, Grade, NodeId, Side};
use crate::linalg::UnionFind;

/// Chain of cross-triangles sharing one apex vertex. The spine lives in the
/// layer opposite the apex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Kite {
    pub apex_side: Side,
    pub apex: NodeId,
    pub spine: Vec<NodeId>,
}

/// Two cross-edges to a common apex whose base pair is not joined by a kite.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Cone {
    pub base_side: Side,
    pub base: (NodeId, NodeId),
    pub apex: NodeId,
    /// Base vertices are joined by a horizontal path in their layer.
    pub closed: bool,
}

impl Cone {
    fn edge(&self, v: NodeId) -> Crossimplex {
        match self.base_side {
            Side::Top => Crossimplex::cross_edge(v, self.apex),
            Side::Bottom => Crossimplex::cross_edge(self.apex, v),
        }
    }

    /// The cross-cycle `e(base.0) - e(base.1)` on cross-edges.
    pub fn cross_cycle(&self) -> [(Crossimplex, f64); 2] {
        [(self.edge(self.base.0), 1.0), (self.edge(self.base.1), -1.0)]
    }
}

/// Per apex: the sorted cross-neighbours and the kite-graph edges among them.
struct ApexGraph {
    neighbours: Vec<NodeId>,
    adjacency: BTreeMap<NodeId, BTreeSet<NodeId>>,
}

fn apex_graphs(x: &Bicomplex, apex_side: Side) -> BTreeMap<NodeId, ApexGraph> {
    let mut out: BTreeMap<NodeId, ApexGraph> = BTreeMap::new();
    for e in x.grade(Grade::CROSS_EDGES) {
        let (apex, v) = (e.part(apex_side)[0], e.part(apex_side.other())[0]);
        out.entry(apex)
            .or_insert_with(|| ApexGraph { neighbours: Vec::new(), adjacency: BTreeMap::new() })
            .neighbours
            .push(v);
    }
    let tri_grade = match apex_side {
        Side::Top => Grade::new(0, 1),
        Side::Bottom => Grade::new(1, 0),
    };
    for t in x.grade(tri_grade) {
        let apex = t.part(apex_side)[0];
        let pair = t.part(apex_side.other());
        let g = out.get_mut(&apex).expect("closure gives the cross-edges");
        g.adjacency.entry(pair[0]).or_default().insert(pair[1]);
        g.adjacency.entry(pair[1]).or_default().insert(pair[0]);
    }
    for g in out.values_mut() {
        g.neighbours.sort_unstable();
    }
    out
}

/// All kites with at most `max_len` spine vertices and apex on `apex_side`,
/// one per reversal class (spine starts with the smaller endpoint).
pub fn enumerate_kites(x: &Bicomplex, apex_side: Side, max_len: usize) -> Vec<Kite> {
    assert!(max_len >= 2, "a kite spine has at least two vertices");
    let mut out = Vec::new();
    for (apex, g) in apex_graphs(x, apex_side) {
        let mut stack: Vec<Vec<NodeId>> = g.adjacency.keys().map(|&v| vec![v]).collect();
        while let Some(path) = stack.pop() {
            if path.len() >= 2 && path[0] < *path.last().unwrap() {
                out.push(Kite { apex_side, apex, spine: path.clone() });
            }
            if path.len() == max_len {
                continue;
            }
            for &w in &g.adjacency[path.last().unwrap()] {
                if !path.contains(&w) {
                    let mut p = path.clone();
                    p.push(w);
                    stack.push(p);
                }
            }
        }
    }
    out.sort();
    out
}

fn horizontal_components(x: &Bicomplex, side: Side) -> BTreeMap<NodeId, NodeId> {
    let verts: Vec<NodeId> = x.vertices(side).collect();
    let pos: BTreeMap<NodeId, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut uf = UnionFind::new(verts.len());
    let edges = match side {
        Side::Top => Grade::new(1, -1),
        Side::Bottom => Grade::new(-1, 1),
    };
    for e in x.grade(edges) {
        let p = e.part(side);
        uf.union(pos[&p[0]], pos[&p[1]]);
    }
    verts.iter().enumerate().map(|(i, &v)| (v, verts[uf.find(i)])).collect()
}

fn kite_components(g: &ApexGraph) -> (UnionFind, BTreeMap<NodeId, usize>) {
    let pos: BTreeMap<NodeId, usize> = g.neighbours.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut uf = UnionFind::new(g.neighbours.len());
    for (u, ws) in &g.adjacency {
        for w in ws {
            uf.union(pos[u], pos[w]);
        }
    }
    (uf, pos)
}

/// Generating cones with base on `base_side`.
///
/// For each apex, neighbours are scanned in ascending order and a cone is
/// kept for each consecutive pair lying in different kite components, which
/// are then merged. The resulting cycles span the same classes as
/// [`all_cones`] without repeating homologous combinations.
pub fn enumerate_cones(x: &Bicomplex, base_side: Side) -> Vec<Cone> {
    let comp = horizontal_components(x, base_side);
    let mut out = Vec::new();
    for (apex, g) in apex_graphs(x, base_side.other()) {
        let (mut uf, pos) = kite_components(&g);
        for w in g.neighbours.windows(2) {
            let (a, b) = (w[0], w[1]);
            if uf.union(pos[&a], pos[&b]) {
                out.push(Cone { base_side, base: (a, b), apex, closed: comp[&a] == comp[&b] });
            }
        }
    }
    out
}

/// Every base pair at every apex that is not joined by a kite.
pub fn all_cones(x: &Bicomplex, base_side: Side) -> Vec<Cone> {
    let comp = horizontal_components(x, base_side);
    let mut out = Vec::new();
    for (apex, g) in apex_graphs(x, base_side.other()) {
        let (mut uf, pos) = kite_components(&g);
        for (i, &a) in g.neighbours.iter().enumerate() {
            for &b in &g.neighbours[i + 1..] {
                if uf.find(pos[&a]) != uf.find(pos[&b]) {
                    out.push(Cone { base_side, base: (a, b), apex, closed: comp[&a] == comp[&b] });
                }
            }
        }
    }
    out
}
