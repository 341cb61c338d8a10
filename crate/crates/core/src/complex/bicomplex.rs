use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Crossimplex, Grade, NodeId, Side};
use crate::error::{Error, Result};

static EMPTY: BTreeSet<Crossimplex> = BTreeSet::new();

/// Positive weights on crossimplices. Absent keys weigh 1.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Weighting {
    values: BTreeMap<Crossimplex, f64>,
}

impl Weighting {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, a: &Crossimplex) -> f64 {
        self.values.get(a).copied().unwrap_or(1.0)
    }

    pub fn set(&mut self, a: Crossimplex, w: f64) -> Result<()> {
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::InvalidWeight { value: w });
        }
        self.values.insert(a, w);
        Ok(())
    }

    #[doc(hidden)]
    pub fn set_unchecked(&mut self, a: Crossimplex, w: f64) {
        self.values.insert(a, w);
    }

    /// Explicitly stored weights.
    pub fn iter(&self) -> impl Iterator<Item = (&Crossimplex, f64)> {
        self.values.iter().map(|(a, w)| (a, *w))
    }

    /// True when every stored value equals 1.
    pub fn is_unit(&self) -> bool {
        self.values.values().all(|&w| w == 1.0)
    }

    fn retain(&mut self, mut keep: impl FnMut(&Crossimplex) -> bool) {
        self.values.retain(|a, _| keep(a));
    }
}

/// A problem found by [`Bicomplex::validate`].
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    MissingFace { simplex: Crossimplex, face: Crossimplex },
    NonCanonical(Crossimplex),
    Misplaced { simplex: Crossimplex, stored_at: Grade },
    InvalidWeight { simplex: Crossimplex, value: f64 },
    OrphanWeight(Crossimplex),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingFace { simplex, face } => {
                write!(f, "face {face} of {simplex} is missing")
            }
            Violation::NonCanonical(a) => write!(f, "{a} is not in canonical order"),
            Violation::Misplaced { simplex, stored_at } => {
                write!(f, "{simplex} has grade {} but is stored at {stored_at}", simplex.grade())
            }
            Violation::InvalidWeight { simplex, value } => {
                write!(f, "{simplex} has non-positive weight {value}")
            }
            Violation::OrphanWeight(a) => write!(f, "weight given for {a}, which is not in the complex"),
        }
    }
}

/// The four weighted degrees of a crossimplex.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Degrees {
    pub top_outer: f64,
    pub top_inner: f64,
    pub bottom_outer: f64,
    pub bottom_inner: f64,
}

impl Degrees {
    pub fn outer(&self, side: Side) -> f64 {
        match side {
            Side::Top => self.top_outer,
            Side::Bottom => self.bottom_outer,
        }
    }

    pub fn inner(&self, side: Side) -> f64 {
        match side {
            Side::Top => self.top_inner,
            Side::Bottom => self.bottom_inner,
        }
    }
}

/// How two crossimplices of the same grade touch. Each variant carries its
/// witness: the shared parent for outer adjacency, the shared face for inner.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Adjacency {
    TopOuter(Crossimplex),
    TopInner(Crossimplex),
    BottomOuter(Crossimplex),
    BottomInner(Crossimplex),
}

/// A crossimplicial bicomplex: crossimplices over a top and a bottom vertex
/// set, graded by bidegree and closed under taking crossfaces.
///
/// Vertices are stored as the grades `(0,-1)` and `(-1,0)`, so isolated
/// vertices are ordinary members.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Bicomplex {
    grades: BTreeMap<Grade, BTreeSet<Crossimplex>>,
    weights: Weighting,
}

/// Incremental construction of a closed [`Bicomplex`].
#[derive(Clone, Debug, Default)]
pub struct BicomplexBuilder {
    seed: Vec<(Crossimplex, Option<f64>)>,
    top: BTreeSet<NodeId>,
    bottom: BTreeSet<NodeId>,
}

impl BicomplexBuilder {
    pub fn top_vertex(mut self, v: NodeId) -> Self {
        self.top.insert(v);
        self
    }

    pub fn bottom_vertex(mut self, v: NodeId) -> Self {
        self.bottom.insert(v);
        self
    }

    pub fn top_vertices(mut self, vs: impl IntoIterator<Item = NodeId>) -> Self {
        self.top.extend(vs);
        self
    }

    pub fn bottom_vertices(mut self, vs: impl IntoIterator<Item = NodeId>) -> Self {
        self.bottom.extend(vs);
        self
    }

    pub fn simplex(mut self, a: Crossimplex) -> Self {
        self.seed.push((a, None));
        self
    }

    pub fn weighted(mut self, a: Crossimplex, w: f64) -> Self {
        self.seed.push((a, Some(w)));
        self
    }

    /// Convenience for literal fixtures; panics on malformed input.
    pub fn cell(self, top: &[NodeId], bottom: &[NodeId]) -> Self {
        let a = Crossimplex::new(top, bottom).expect("malformed crossimplex literal");
        self.simplex(a)
    }

    pub fn build(self) -> Result<Bicomplex> {
        let mut x = Bicomplex::close(self.seed)?;
        for v in self.top {
            x.insert_closed(Crossimplex::top_vertex(v));
        }
        for v in self.bottom {
            x.insert_closed(Crossimplex::bottom_vertex(v));
        }
        Ok(x)
    }
}

impl Bicomplex {
    pub fn builder() -> BicomplexBuilder {
        BicomplexBuilder::default()
    }

    /// Smallest bicomplex containing `seed`. Generated faces weigh 1.
    pub fn close<I>(seed: I) -> Result<Bicomplex>
    where
        I: IntoIterator<Item = (Crossimplex, Option<f64>)>,
    {
        let mut x = Bicomplex::default();
        let mut weights = Vec::new();
        for (a, w) in seed {
            if let Some(w) = w {
                if !(w.is_finite() && w > 0.0) {
                    return Err(Error::InvalidWeight { value: w });
                }
                weights.push((a.clone(), w));
            }
            x.insert_closed(a);
        }
        for (a, w) in weights {
            x.weights.set(a, w)?;
        }
        Ok(x)
    }

    /// Assembles a bicomplex from parts without closing or checking it.
    /// Run [`Bicomplex::validate`] on the result if the input is untrusted.
    pub fn from_raw_parts(
        grades: BTreeMap<Grade, BTreeSet<Crossimplex>>,
        weights: Weighting,
    ) -> Bicomplex {
        let grades = grades.into_iter().filter(|(_, s)| !s.is_empty()).collect();
        Bicomplex { grades, weights }
    }

    fn insert_closed(&mut self, a: Crossimplex) {
        let mut stack = vec![a];
        while let Some(a) = stack.pop() {
            let set = self.grades.entry(a.grade()).or_default();
            if set.contains(&a) {
                continue;
            }
            stack.extend(a.crossfaces().into_iter().map(|f| f.face));
            set.insert(a);
        }
    }

    /// Crossimplices of grade `g` (empty set for absent grades).
    pub fn grade(&self, g: Grade) -> &BTreeSet<Crossimplex> {
        self.grades.get(&g).unwrap_or(&EMPTY)
    }

    pub fn count(&self, g: Grade) -> usize {
        self.grade(g).len()
    }

    /// Non-empty grades in ascending order.
    pub fn grades(&self) -> impl Iterator<Item = (Grade, &BTreeSet<Crossimplex>)> {
        self.grades.iter().filter(|(_, s)| !s.is_empty()).map(|(g, s)| (*g, s))
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Crossimplex> {
        self.grades.values().flat_map(|s| s.iter())
    }

    pub fn len(&self) -> usize {
        self.grades.values().map(|s| s.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, a: &Crossimplex) -> bool {
        self.grade(a.grade()).contains(a)
    }

    pub fn weights(&self) -> &Weighting {
        &self.weights
    }

    pub fn weight(&self, a: &Crossimplex) -> f64 {
        self.weights.get(a)
    }

    /// Vertex set of one layer.
    pub fn vertices(&self, side: Side) -> impl Iterator<Item = NodeId> + '_ {
        let g = match side {
            Side::Top => Grade::new(0, -1),
            Side::Bottom => Grade::new(-1, 0),
        };
        self.grade(g).iter().map(move |a| a.part(side)[0])
    }

    /// Highest dimension present, or -1 for an empty complex.
    pub fn dim(&self) -> i32 {
        self.grades().map(|(g, _)| g.dim()).max().unwrap_or(-1)
    }

    /// Crossimplices that are not a crossface of anything else.
    pub fn maximal(&self) -> Vec<&Crossimplex> {
        self.simplices()
            .filter(|a| {
                [Side::Top, Side::Bottom].iter().all(|&side| {
                    let up = self.grade(a.grade().up(side));
                    !up.iter().any(|c| c.faces(side).iter().any(|(f, _)| f == *a))
                })
            })
            .collect()
    }

    /// The same complex seen with top and bottom swapped.
    pub fn mirrored(&self) -> Bicomplex {
        let mut grades: BTreeMap<Grade, BTreeSet<Crossimplex>> = BTreeMap::new();
        for (g, set) in &self.grades {
            grades.insert(g.mirrored(), set.iter().map(|a| a.mirrored()).collect());
        }
        let mut weights = Weighting::new();
        for (a, w) in self.weights.iter() {
            weights.set_unchecked(a.mirrored(), w);
        }
        Bicomplex { grades, weights }
    }

    /// Restriction to crossimplices of dimension at most `n`.
    pub fn skeleton(&self, n: usize) -> Bicomplex {
        let n = n as i32;
        let grades: BTreeMap<_, _> = self
            .grades
            .iter()
            .filter(|(g, _)| g.dim() <= n)
            .map(|(g, s)| (*g, s.clone()))
            .collect();
        let mut weights = self.weights.clone();
        weights.retain(|a| a.dim() <= n);
        Bicomplex { grades, weights }
    }

    /// Adds vertices that no crossimplex mentions.
    pub fn with_isolated_vertices(
        mut self,
        side: Side,
        vs: impl IntoIterator<Item = NodeId>,
    ) -> Bicomplex {
        for v in vs {
            let a = match side {
                Side::Top => Crossimplex::top_vertex(v),
                Side::Bottom => Crossimplex::bottom_vertex(v),
            };
            self.insert_closed(a);
        }
        self
    }

    /// Checks closure, canonical form, grading and weights. Reports every
    /// violation found.
    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        for (g, set) in &self.grades {
            for a in set {
                if !a.is_canonical() {
                    out.push(Violation::NonCanonical(a.clone()));
                    continue;
                }
                if a.grade() != *g {
                    out.push(Violation::Misplaced { simplex: a.clone(), stored_at: *g });
                    continue;
                }
                for f in a.crossfaces() {
                    if !self.contains(&f.face) {
                        out.push(Violation::MissingFace { simplex: a.clone(), face: f.face });
                    }
                }
            }
        }
        for (a, w) in self.weights.iter() {
            if !(w.is_finite() && w > 0.0) {
                out.push(Violation::InvalidWeight { simplex: a.clone(), value: w });
            }
            if !self.contains(a) {
                out.push(Violation::OrphanWeight(a.clone()));
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    /// Cofaces of `a` on `side` that belong to the complex, with the sign of
    /// `a` in each coface's boundary.
    pub fn cofaces(&self, a: &Crossimplex, side: Side) -> Vec<(Crossimplex, i8)> {
        let up = self.grade(a.grade().up(side));
        if up.is_empty() {
            return Vec::new();
        }
        let mut out = Vec::new();
        // Adding a vertex: candidates are the vertices of that layer.
        for v in self.vertices(side) {
            if let Some((c, s)) = a.with_vertex(side, v) {
                if up.contains(&c) {
                    out.push((c, s));
                }
            }
        }
        out
    }

    /// TO, TI, BO and BI degrees of `a`.
    pub fn degrees(&self, a: &Crossimplex) -> Result<Degrees> {
        if !self.contains(a) {
            return Err(Error::UnknownSimplex(a.to_string()));
        }
        let outer = |side| -> f64 { self.cofaces(a, side).iter().map(|(c, _)| self.weight(c)).sum() };
        let inner = |side| -> f64 { a.faces(side).iter().map(|(d, _)| 1.0 / self.weight(d)).sum() };
        Ok(Degrees {
            top_outer: outer(Side::Top),
            top_inner: inner(Side::Top),
            bottom_outer: outer(Side::Bottom),
            bottom_inner: inner(Side::Bottom),
        })
    }

    /// All adjacency relations between two crossimplices of the same grade.
    pub fn adjacency(&self, a: &Crossimplex, b: &Crossimplex) -> Result<BTreeSet<Adjacency>> {
        if a.grade() != b.grade() {
            return Err(Error::GradeMismatch { left: a.grade(), right: b.grade() });
        }
        let mut out = BTreeSet::new();
        if a == b {
            return Ok(out);
        }
        for side in [Side::Top, Side::Bottom] {
            if a.part(side.other()) != b.part(side.other()) {
                continue;
            }
            let pa: BTreeSet<NodeId> = a.part(side).iter().copied().collect();
            let pb: BTreeSet<NodeId> = b.part(side).iter().copied().collect();
            let union: Vec<NodeId> = pa.union(&pb).copied().collect();
            let inter: Vec<NodeId> = pa.intersection(&pb).copied().collect();
            if union.len() != pa.len() + 1 {
                continue;
            }
            let other = a.part(side.other()).to_vec();
            let build = |p: Vec<NodeId>| match side {
                Side::Top => Crossimplex::from_raw_unchecked(p, other.clone()),
                Side::Bottom => Crossimplex::from_raw_unchecked(other.clone(), p),
            };
            let parent = build(union);
            if self.contains(&parent) {
                out.insert(match side {
                    Side::Top => Adjacency::TopOuter(parent),
                    Side::Bottom => Adjacency::BottomOuter(parent),
                });
            }
            if !(inter.is_empty() && other.is_empty()) {
                let shared = build(inter);
                if self.contains(&shared) {
                    out.insert(match side {
                        Side::Top => Adjacency::TopInner(shared),
                        Side::Bottom => Adjacency::BottomInner(shared),
                    });
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn c(top: &[NodeId], bottom: &[NodeId]) -> Crossimplex {
        Crossimplex::new(top, bottom).unwrap()
    }

    #[test]
    fn close_single_cross_triangle() {
        let x = Bicomplex::close([(c(&[0, 1], &[0]), None)]).unwrap();
        assert_eq!(x.count(Grade::new(1, 0)), 1);
        assert_eq!(x.count(Grade::new(0, 0)), 2);
        assert!(x.contains(&c(&[0], &[0])));
        assert!(x.contains(&c(&[1], &[0])));
        assert_eq!(x.count(Grade::new(1, -1)), 1);
        assert_eq!(x.count(Grade::new(0, -1)), 2);
        assert_eq!(x.count(Grade::new(-1, 0)), 1);
        assert_eq!(x.len(), 7);
        assert!(x.validate().is_ok());
    }

    #[test]
    fn declared_isolated_vertex() {
        let x = Bicomplex::builder().top_vertex(0).build().unwrap();
        assert_eq!(x.len(), 1);
        assert_eq!(x.grade(Grade::new(0, -1)).iter().next().unwrap(), &Crossimplex::top_vertex(0));
    }

    #[test]
    fn close_rejects_bad_weight() {
        let r = Bicomplex::close([(c(&[0], &[1]), Some(0.0))]);
        assert!(matches!(r, Err(Error::InvalidWeight { .. })));
        let r = Bicomplex::close([(c(&[0], &[1]), Some(-1.0))]);
        assert!(matches!(r, Err(Error::InvalidWeight { .. })));
    }

    #[test]
    fn closure_is_idempotent_on_f3() {
        let x = fixtures::f3();
        let again = Bicomplex::close(x.simplices().cloned().map(|a| (a, None))).unwrap();
        assert_eq!(x, again);
    }

    #[test]
    fn validate_reports_missing_face() {
        let mut grades = BTreeMap::new();
        let t = c(&[0, 1], &[5]);
        grades.insert(t.grade(), BTreeSet::from([t.clone()]));
        grades.insert(Grade::new(0, 0), BTreeSet::from([c(&[1], &[5])]));
        grades.insert(Grade::new(1, -1), BTreeSet::from([c(&[0, 1], &[])]));
        grades.insert(
            Grade::new(0, -1),
            BTreeSet::from([Crossimplex::top_vertex(0), Crossimplex::top_vertex(1)]),
        );
        grades.insert(Grade::new(-1, 0), BTreeSet::from([Crossimplex::bottom_vertex(5)]));
        let x = Bicomplex::from_raw_parts(grades, Weighting::new());
        let v = x.validate().unwrap_err();
        assert_eq!(v, vec![Violation::MissingFace { simplex: t, face: c(&[0], &[5]) }]);
    }

    #[test]
    fn validate_reports_weight_and_form_problems() {
        let mut x = fixtures::f3();
        x.weights.set_unchecked(c(&[4], &[1]), 0.0);
        x.weights.set_unchecked(c(&[7], &[0]), 2.0);
        let bad = Crossimplex::from_raw_unchecked(vec![2, 1], vec![]);
        x.grades.get_mut(&Grade::new(1, -1)).unwrap().insert(bad.clone());
        let v = x.validate().unwrap_err();
        assert!(v.contains(&Violation::InvalidWeight { simplex: c(&[4], &[1]), value: 0.0 }));
        assert!(v.contains(&Violation::OrphanWeight(c(&[7], &[0]))));
        assert!(v.contains(&Violation::NonCanonical(bad)));
    }

    #[test]
    fn skeleton_counts_on_f3() {
        let x = fixtures::f3();
        let s1 = x.skeleton(1);
        assert_eq!(s1.count(Grade::new(1, -1)), 8);
        assert_eq!(s1.count(Grade::new(-1, 1)), 7);
        assert_eq!(s1.count(Grade::new(0, 0)), 9);
        assert_eq!(s1.dim(), 1);
        assert!(s1.validate().is_ok());
        let s0 = x.skeleton(0);
        assert!(s0.grades().all(|(g, _)| g.dim() == 0));
        assert_eq!(s0.len(), 14);
        assert_eq!(x.skeleton(x.dim() as usize), x);
    }

    #[test]
    fn degrees_on_f3() {
        let x = fixtures::f3();
        let d = x.degrees(&c(&[1], &[1])).unwrap();
        assert_eq!(d.top_outer, 2.0);
        let d = x.degrees(&c(&[4], &[1])).unwrap();
        assert_eq!(d, Degrees { top_outer: 0.0, top_inner: 1.0, bottom_outer: 0.0, bottom_inner: 1.0 });
        for a in x.grade(Grade::CROSS_EDGES) {
            assert_eq!(x.degrees(a).unwrap().top_inner, 1.0);
        }
        assert!(matches!(x.degrees(&c(&[7], &[5])), Err(Error::UnknownSimplex(_))));
    }

    #[test]
    fn weighted_degrees() {
        let x = Bicomplex::close([
            (c(&[0, 1], &[0]), Some(3.0)),
            (c(&[0], &[0]), Some(2.0)),
            (c(&[], &[0]), Some(4.0)),
        ])
        .unwrap();
        let d = x.degrees(&c(&[0], &[0])).unwrap();
        assert_eq!(d.top_outer, 3.0);
        assert_eq!(d.top_inner, 0.25);
        assert_eq!(d.bottom_inner, 1.0);
    }

    #[test]
    fn adjacency_on_f3() {
        let x = fixtures::f3();
        let a = x.adjacency(&c(&[0], &[1]), &c(&[1], &[1])).unwrap();
        assert_eq!(
            a,
            BTreeSet::from([
                Adjacency::TopOuter(c(&[0, 1], &[1])),
                Adjacency::TopInner(c(&[], &[1])),
            ])
        );
        let a = x.adjacency(&c(&[4], &[1]), &c(&[6], &[1])).unwrap();
        assert_eq!(a, BTreeSet::from([Adjacency::TopInner(c(&[], &[1]))]));
        let a = x.adjacency(&c(&[4], &[4]), &c(&[6], &[2])).unwrap();
        assert!(a.is_empty());
        assert!(matches!(
            x.adjacency(&c(&[4], &[4]), &c(&[4], &[])),
            Err(Error::GradeMismatch { .. })
        ));
        // Vertices of one layer are never inner adjacent.
        let a = x.adjacency(&c(&[0], &[]), &c(&[1], &[])).unwrap();
        assert_eq!(a, BTreeSet::from([Adjacency::TopOuter(c(&[0, 1], &[]))]));
    }

    #[test]
    fn mirror_roundtrip() {
        let x = fixtures::f3();
        let m = x.mirrored();
        assert_eq!(m.count(Grade::new(0, 1)), x.count(Grade::new(1, 0)));
        assert!(m.validate().is_ok());
        assert_eq!(m.mirrored(), x);
    }

    #[test]
    fn maximal_of_f3() {
        let x = fixtures::f3();
        let m = x.maximal();
        // 1 top triangle, 3 top edges (01 and 12 sit under cross-triangles),
        // 2 bottom triangles, 1 bottom edge, 4 cross-triangles, 2 cross-edges.
        assert_eq!(m.len(), 13);
    }
}
