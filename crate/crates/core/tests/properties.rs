//! Randomized invariants of bicomplexes, homology, Laplacians and the
//! diffusion construction.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use proptest::prelude::*;

use crosslap::homology::betti_number;
use crosslap::io::{bicomplex_to_json, read_bicomplex_str, VertexLabels};
use crosslap::linalg::UnionFind;
use crosslap::spectral::{laplacian_from_boundaries, nullity, DENSE_LIMIT};
use crosslap::{
    betti_vector, boundary_matrix, diffusion_bicomplex, enumerate_cones, laplacian, Bicomplex, Crossimplex, Error,
    Grade, Multiplex, NodeId, Side, Tolerances,
};

const MAX_SIZE: usize = 40;

fn bits(mask: u8) -> Vec<NodeId> {
    (0..6).filter(|i| mask & (1 << i) != 0).collect()
}

/// Closes seeds one at a time, skipping any that would push the complex past
/// `MAX_SIZE` crossimplices.
fn build(seeds: &[(u8, u8, Option<u8>)]) -> Bicomplex {
    let mut accepted: Vec<(Crossimplex, Option<f64>)> = Vec::new();
    let mut x = Bicomplex::default();
    for &(t, b, w) in seeds {
        let (t, b) = (bits(t), bits(b));
        if t.len() + b.len() == 0 || t.len() > 3 || b.len() > 3 {
            continue;
        }
        let a = Crossimplex::new(&t, &b).unwrap();
        accepted.push((a, w.map(|w| 0.5 * f64::from(w))));
        match Bicomplex::close(accepted.clone()) {
            Ok(y) if y.len() <= MAX_SIZE => x = y,
            _ => {
                accepted.pop();
            }
        }
    }
    x
}

fn bicomplex(weighted: bool) -> impl Strategy<Value = Bicomplex> {
    let weight = if weighted { proptest::option::of(1u8..7).boxed() } else { Just(None).boxed() };
    proptest::collection::vec((0u8..64, 0u8..64, weight), 1..10).prop_map(|s| build(&s))
}

fn tol() -> Tolerances {
    Tolerances::default()
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 256, ..ProptestConfig::default() }
}

fn grades(x: &Bicomplex) -> Vec<Grade> {
    x.grades().map(|(g, _)| g).collect()
}

fn sym_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    m.symmetric_eigen().eigenvalues.iter().copied().collect()
}

/// Components of the horizontal graph on `side`.
fn horizontal_components(x: &Bicomplex, side: Side) -> usize {
    let verts: Vec<NodeId> = x.vertices(side).collect();
    let pos: BTreeMap<NodeId, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut uf = UnionFind::new(verts.len());
    let edges = match side {
        Side::Top => Grade::new(1, -1),
        Side::Bottom => Grade::new(-1, 1),
    };
    let mut merges = 0;
    for e in x.grade(edges) {
        let p = e.part(side);
        if uf.union(pos[&p[0]], pos[&p[1]]) {
            merges += 1;
        }
    }
    verts.len() - merges
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn boundary_squares_to_zero(x in bicomplex(false)) {
        for g in grades(&x) {
            for side in [Side::Top, Side::Bottom] {
                let d = g.down(side);
                if !d.is_valid() || !d.down(side).is_valid() {
                    continue;
                }
                let outer = boundary_matrix(&x, d.k, d.l, side);
                let inner = boundary_matrix(&x, g.k, g.l, side);
                let prod = outer.matmul(&inner);
                prop_assert!(prod.entries().iter().all(|&(_, _, v)| v == 0.0), "{g} {side}");
            }
        }
    }

    #[test]
    fn closure_is_idempotent(x in bicomplex(false)) {
        let again = Bicomplex::close(x.simplices().map(|a| (a.clone(), None))).unwrap();
        prop_assert_eq!(&again, &x);
        prop_assert!(x.validate().is_ok());
    }

    #[test]
    fn laplacians_symmetric_psd_and_harmonic(x in bicomplex(true)) {
        for g in grades(&x) {
            let b = betti_vector(&x, g, &tol()).unwrap();
            for side in [Side::Top, Side::Bottom] {
                let lap = laplacian(&x, g, side).unwrap();
                let m = lap.to_dense();
                prop_assert!((&m - m.transpose()).amax() == 0.0, "{g} {side} asymmetric");
                let ev = sym_eigenvalues(m.clone());
                let scale = m.amax().max(1.0);
                prop_assert!(ev.iter().all(|&l| l >= -1e-10 * scale), "{g} {side}: {ev:?}");
                let k = nullity(&lap, &tol(), DENSE_LIMIT).unwrap();
                let beta = betti_number(&x, g, side, &tol()).unwrap();
                prop_assert_eq!(k, beta, "{} {}", g, side);
            }
            prop_assert!(b.cross_checked());
        }
    }

    #[test]
    fn two_assembly_paths_agree(x in bicomplex(true)) {
        for g in grades(&x) {
            for side in [Side::Top, Side::Bottom] {
                let a = laplacian(&x, g, side).unwrap().to_dense();
                let b = laplacian_from_boundaries(&x, g, side).unwrap();
                prop_assert!((a - b).amax() <= 1e-12, "{g} {side}");
            }
        }
    }

    #[test]
    fn vertex_grade_betti_numbers(x in bicomplex(false)) {
        let t = tol();
        let top_vertices = x.count(Grade::new(0, -1));
        if top_vertices > 0 {
            let b = betti_vector(&x, Grade::new(0, -1), &t).unwrap();
            prop_assert_eq!(b.top, horizontal_components(&x, Side::Top));
            let lonely = x.grade(Grade::new(0, -1)).iter()
                .filter(|v| !x.grade(Grade::CROSS_EDGES).iter().any(|e| e.top() == v.top()))
                .count();
            prop_assert_eq!(b.bottom, lonely);
        }
        if x.count(Grade::new(-1, 0)) > 0 {
            let b = betti_vector(&x, Grade::new(-1, 0), &t).unwrap();
            prop_assert_eq!(b.bottom, horizontal_components(&x, Side::Bottom));
        }
    }

    #[test]
    fn cones_generate_cross_edge_homology(x in bicomplex(false)) {
        if x.count(Grade::CROSS_EDGES) == 0 {
            return Ok(());
        }
        let b = betti_vector(&x, Grade::CROSS_EDGES, &tol()).unwrap();
        for (side, beta) in [(Side::Top, b.top), (Side::Bottom, b.bottom)] {
            // A cone with base on `side` joins two cross-edges through an
            // apex on the other side; its cycle lives in the `side` kernel.
            let cones = enumerate_cones(&x, side);
            prop_assert_eq!(cones.len(), beta, "{}", side);
            let d = boundary_matrix(&x, 0, 0, side);
            let up = boundary_matrix(&x, Grade::CROSS_EDGES.up(side).k, Grade::CROSS_EDGES.up(side).l, side);
            let basis = d.cols().clone();
            let n = basis.len();
            let mut cycles = DMatrix::<f64>::zeros(n, cones.len());
            for (j, c) in cones.iter().enumerate() {
                for (a, coef) in c.cross_cycle() {
                    cycles[(basis.index_of(&a).unwrap(), j)] = coef;
                }
            }
            prop_assert!((d.to_dense() * &cycles).amax() == 0.0);
            // Independent modulo boundaries.
            let image = up.to_dense();
            let r_image = if image.ncols() == 0 { 0 } else { image.rank(1e-9) };
            let mut joined = DMatrix::<f64>::zeros(n, image.ncols() + cones.len());
            joined.view_mut((0, 0), (n, image.ncols())).copy_from(&image);
            joined.view_mut((0, image.ncols()), (n, cones.len())).copy_from(&cycles);
            let r_joined = if joined.ncols() == 0 { 0 } else { joined.rank(1e-9) };
            prop_assert_eq!(r_joined, r_image + cones.len());
        }
    }

    #[test]
    fn degrees_match_brute_force(x in bicomplex(false)) {
        for a in x.simplices() {
            let d = x.degrees(a).unwrap();
            for side in [Side::Top, Side::Bottom] {
                let parents = x.simplices().filter(|c| {
                    c.part(side.other()) == a.part(side.other())
                        && c.part(side).len() == a.part(side).len() + 1
                        && a.part(side).iter().all(|v| c.part(side).contains(v))
                }).count();
                let faces = if a.part(side).len() + a.part(side.other()).len() > 1 { a.part(side).len() } else { 0 };
                prop_assert_eq!(d.outer(side), parents as f64);
                prop_assert_eq!(d.inner(side), faces as f64);
            }
        }
    }

    #[test]
    fn json_round_trip(x in bicomplex(true)) {
        let text = bicomplex_to_json(&x, &VertexLabels::default()).unwrap();
        let (y, _) = read_bicomplex_str(&text).unwrap();
        prop_assert_eq!(&y, &x);
        let w: Vec<(Crossimplex, f64)> = x.weights().iter().map(|(a, w)| (a.clone(), w)).collect();
        let v: Vec<(Crossimplex, f64)> = y.weights().iter().map(|(a, w)| (a.clone(), w)).collect();
        prop_assert_eq!(w, v);
    }
}

fn multiplex() -> impl Strategy<Value = Multiplex> {
    let edges = proptest::collection::vec((1u32..=3, 1u32..=9, 1u32..=9), 0..40);
    edges.prop_map(|es| {
        let mut m = Multiplex::new();
        for l in 1..=3 {
            m.add_layer(l);
        }
        for (l, u, v) in es {
            if u != v {
                m.add_edge(l, u, v, 1.0).unwrap();
            }
        }
        m
    })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn diffusion_bicomplex_structure(m in multiplex()) {
        for (s, t) in m.ordered_pairs() {
            let x = diffusion_bicomplex(&m, s, t, false).unwrap();
            prop_assert!(x.validate().is_ok());
            let es: BTreeSet<(NodeId, NodeId)> = m.edges(s).unwrap().map(|(u, v, _)| (u.min(v), u.max(v))).collect();
            let et: BTreeSet<(NodeId, NodeId)> = m.edges(t).unwrap().map(|(u, v, _)| (u.min(v), u.max(v))).collect();
            prop_assert_eq!(x.count(Grade::CROSS_EDGES), es.len());
            for e in x.grade(Grade::CROSS_EDGES) {
                prop_assert!(e.top()[0] < e.bottom()[0]);
                prop_assert!(es.contains(&(e.top()[0], e.bottom()[0])));
            }
            // (0,1): brute force over all triples.
            let nodes: Vec<NodeId> = m.nodes().iter().copied().collect();
            let mut expect = BTreeSet::new();
            for &i in &nodes {
                for &j in &nodes {
                    for &k in &nodes {
                        if i < j && j < k && es.contains(&(i, j)) && es.contains(&(i, k)) && et.contains(&(j, k)) {
                            expect.insert(Crossimplex::new(&[i], &[j, k]).unwrap());
                        }
                    }
                }
            }
            let got: BTreeSet<Crossimplex> = x.grade(Grade::new(0, 1)).iter().cloned().collect();
            prop_assert_eq!(got, expect);
            prop_assert_eq!(x.count(Grade::new(1, 0)), 0);
            prop_assert_eq!(x.count(Grade::new(1, -1)), 0);
            prop_assert_eq!(x.count(Grade::new(0, -1)), nodes.len());
            prop_assert_eq!(x.count(Grade::new(-1, 0)), nodes.len());
            prop_assert_eq!(x.count(Grade::new(-1, 1)), et.len());
            let triangles = nodes.iter().flat_map(|&a| nodes.iter().map(move |&b| (a, b)))
                .filter(|&(a, b)| a < b && et.contains(&(a, b)))
                .map(|(a, b)| nodes.iter().filter(|&&c| c > b && et.contains(&(a, c)) && et.contains(&(b, c))).count())
                .sum::<usize>();
            prop_assert_eq!(x.count(Grade::new(-1, 2)), triangles);
            prop_assert_eq!(x.count(Grade::new(-1, 3)), 0);
        }
    }
}

#[test]
fn diffusion_is_asymmetric() {
    // Star 1-2, 1-3 onto a single edge 3-4: the star's two cross-edges form
    // a bottom cone at apex 1; the reverse direction has one lone edge.
    let mut m = Multiplex::new();
    m.add_edge(1, 1, 2, 1.0).unwrap();
    m.add_edge(1, 1, 3, 1.0).unwrap();
    m.add_edge(2, 3, 4, 1.0).unwrap();
    let t = tol();
    let fwd = betti_vector(&diffusion_bicomplex(&m, 1, 2, false).unwrap(), Grade::CROSS_EDGES, &t).unwrap();
    let back = betti_vector(&diffusion_bicomplex(&m, 2, 1, false).unwrap(), Grade::CROSS_EDGES, &t).unwrap();
    assert_eq!(fwd.pair(), (0, 1));
    assert_eq!(back.pair(), (0, 0));
}

#[test]
fn empty_grade_is_an_error() {
    let x = crosslap::fixtures::single_cross_edge();
    assert!(matches!(laplacian(&x, Grade::new(1, 1), Side::Top), Err(Error::EmptyGrade(_))));
}
