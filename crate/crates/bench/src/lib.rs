//! Seeded random inputs shared by the benchmarks.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crosslap::{cross_clique_bicomplex, Bicomplex, Graph, Multiplex, NodeId};

/// Erdős–Rényi graph on `0..n`.
pub fn random_graph(rng: &mut StdRng, n: NodeId, p: f64) -> Graph {
    let mut g = Graph::new();
    for v in 0..n {
        g.add_vertex(v);
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                g.add_edge(u, v).expect("distinct endpoints");
            }
        }
    }
    g
}

/// Cross-clique bicomplex of two random layers with random interlinks,
/// truncated at dimension 2.
pub fn random_bicomplex(seed: u64, n_top: NodeId, n_bottom: NodeId, p_intra: f64, p_inter: f64) -> Bicomplex {
    let mut rng = StdRng::seed_from_u64(seed);
    let g1 = random_graph(&mut rng, n_top, p_intra);
    let g2 = random_graph(&mut rng, n_bottom, p_intra);
    let mut inter = Vec::new();
    for u in 0..n_top {
        for v in 0..n_bottom {
            if rng.random_bool(p_inter) {
                inter.push((u, v));
            }
        }
    }
    cross_clique_bicomplex(&g1, &g2, &inter, 2).expect("vertices exist")
}

/// Multiplex on nodes `1..=n` with `layers` layers of about `edges` edges
/// each.
pub fn random_multiplex(seed: u64, n: NodeId, layers: u32, edges: usize) -> Multiplex {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut m = Multiplex::new();
    for v in 1..=n {
        m.add_node(v);
    }
    for layer in 1..=layers {
        m.add_layer(layer);
        for _ in 0..edges {
            let u = rng.random_range(1..=n);
            let v = rng.random_range(1..=n);
            if u != v {
                m.add_edge(layer, u, v, 1.0).expect("positive weight");
            }
        }
    }
    m
}
