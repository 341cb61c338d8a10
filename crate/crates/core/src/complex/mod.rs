//! Combinatorial data model: crossimplices, bicomplexes and multicomplexes.
//!
//! A `(k,l)`-crossimplex has `k+1` vertices in the top layer and `l+1`
//! vertices in the bottom layer. Vertex lists are always stored strictly
//! increasing; callers that care about orientation go through
//! [`make_crossimplex`], which reports the sign of the sorting permutation.

mod bicomplex;
mod clique;
mod multicomplex;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bicomplex::{Adjacency, Bicomplex, BicomplexBuilder, Degrees, Violation, Weighting};
pub use clique::{cross_clique_bicomplex, Graph};
pub use multicomplex::Multicomplex;

/// Node identifier within one layer.
pub type NodeId = u32;

/// Which layer of a bicomplex an object belongs to. For Laplacians this is
/// the part (`T` or `B`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "T")]
    Top,
    #[serde(rename = "B")]
    Bottom,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Top => Side::Bottom,
            Side::Bottom => Side::Top,
        }
    }

    /// Layer number used in file formats: 1 for top, 2 for bottom.
    pub fn layer_number(self) -> u8 {
        match self {
            Side::Top => 1,
            Side::Bottom => 2,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Side::Top => 'T',
            Side::Bottom => 'B',
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Top => "top",
            Side::Bottom => "bottom",
        })
    }
}

impl std::str::FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "T" | "t" | "top" | "1" => Ok(Side::Top),
            "B" | "b" | "bottom" | "2" => Ok(Side::Bottom),
            other => Err(format!("expected T or B, got `{other}`")),
        }
    }
}

/// A vertex together with the layer it lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexRef {
    pub layer: Side,
    pub id: NodeId,
}

impl VertexRef {
    pub fn top(id: NodeId) -> Self {
        VertexRef { layer: Side::Top, id }
    }

    pub fn bottom(id: NodeId) -> Self {
        VertexRef { layer: Side::Bottom, id }
    }
}

impl fmt::Display for VertexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}_{}", self.layer.layer_number(), self.id)
    }
}

/// Bidegree `(k,l)` of a crossimplex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i32; 2]", into = "[i32; 2]")]
pub struct Grade {
    pub k: i32,
    pub l: i32,
}

impl Grade {
    /// Cross-edges.
    pub const CROSS_EDGES: Grade = Grade { k: 0, l: 0 };

    pub const fn new(k: i32, l: i32) -> Self {
        Grade { k, l }
    }

    /// Geometric dimension `k + l + 1`.
    pub fn dim(self) -> i32 {
        self.k + self.l + 1
    }

    /// True for grades that can hold crossimplices.
    pub fn is_valid(self) -> bool {
        self.k >= -1 && self.l >= -1 && !(self.k == -1 && self.l == -1)
    }

    /// Grade of the faces obtained by dropping a vertex on `side`.
    pub fn down(self, side: Side) -> Grade {
        match side {
            Side::Top => Grade::new(self.k - 1, self.l),
            Side::Bottom => Grade::new(self.k, self.l - 1),
        }
    }

    /// Grade of the cofaces obtained by adding a vertex on `side`.
    pub fn up(self, side: Side) -> Grade {
        match side {
            Side::Top => Grade::new(self.k + 1, self.l),
            Side::Bottom => Grade::new(self.k, self.l + 1),
        }
    }

    pub fn mirrored(self) -> Grade {
        Grade::new(self.l, self.k)
    }

    /// The grades reported in a default cross-Betti table.
    pub fn betti_table_default() -> Vec<Grade> {
        vec![
            Grade::new(0, -1),
            Grade::new(1, -1),
            Grade::new(-1, 0),
            Grade::new(-1, 1),
            Grade::new(0, 0),
        ]
    }
}

impl From<[i32; 2]> for Grade {
    fn from(v: [i32; 2]) -> Self {
        Grade::new(v[0], v[1])
    }
}

impl From<Grade> for [i32; 2] {
    fn from(g: Grade) -> Self {
        [g.k, g.l]
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k, self.l)
    }
}

impl std::str::FromStr for Grade {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let (a, b) = t
            .split_once(',')
            .ok_or_else(|| format!("expected `k,l`, got `{s}`"))?;
        let k = a.trim().parse::<i32>().map_err(|e| e.to_string())?;
        let l = b.trim().parse::<i32>().map_err(|e| e.to_string())?;
        let g = Grade::new(k, l);
        if !g.is_valid() {
            return Err(format!("grade {g} is not valid"));
        }
        Ok(g)
    }
}

/// A crossimplex in canonical orientation: both vertex lists strictly
/// increasing, at least one of them non-empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Crossimplex {
    top: Vec<NodeId>,
    bottom: Vec<NodeId>,
}

/// One crossface of a crossimplex with its incidence sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossface {
    pub face: Crossimplex,
    pub sign: i8,
    pub side: Side,
}

/// Sorts an oriented crossimplex into canonical form and returns the sign of
/// the permutation that was applied (product of both layers' parities).
pub fn make_crossimplex(top: &[NodeId], bottom: &[NodeId]) -> Result<(Crossimplex, i8)> {
    if top.is_empty() && bottom.is_empty() {
        return Err(Error::EmptySimplex);
    }
    let (top, s1) = sort_with_parity(top)?;
    let (bottom, s2) = sort_with_parity(bottom)?;
    Ok((Crossimplex { top, bottom }, s1 * s2))
}

fn sort_with_parity(v: &[NodeId]) -> Result<(Vec<NodeId>, i8)> {
    let mut inversions = 0usize;
    for i in 0..v.len() {
        for j in (i + 1)..v.len() {
            if v[i] == v[j] {
                return Err(Error::DegenerateSimplex { vertex: v[i] });
            }
            if v[i] > v[j] {
                inversions += 1;
            }
        }
    }
    let mut sorted = v.to_vec();
    sorted.sort_unstable();
    Ok((sorted, if inversions.is_multiple_of(2) { 1 } else { -1 }))
}

impl Crossimplex {
    /// Builds a crossimplex from vertex lists in any order.
    pub fn new(top: &[NodeId], bottom: &[NodeId]) -> Result<Self> {
        make_crossimplex(top, bottom).map(|(a, _)| a)
    }

    /// A top vertex, grade `(0,-1)`.
    pub fn top_vertex(v: NodeId) -> Self {
        Crossimplex { top: vec![v], bottom: Vec::new() }
    }

    /// A bottom vertex, grade `(-1,0)`.
    pub fn bottom_vertex(v: NodeId) -> Self {
        Crossimplex { top: Vec::new(), bottom: vec![v] }
    }

    /// Cross-edge `[t; b]`.
    pub fn cross_edge(t: NodeId, b: NodeId) -> Self {
        Crossimplex { top: vec![t], bottom: vec![b] }
    }

    /// Skips the canonical-form checks. Used by tests that need to build
    /// malformed complexes.
    #[doc(hidden)]
    pub fn from_raw_unchecked(top: Vec<NodeId>, bottom: Vec<NodeId>) -> Self {
        Crossimplex { top, bottom }
    }

    pub fn top(&self) -> &[NodeId] {
        &self.top
    }

    pub fn bottom(&self) -> &[NodeId] {
        &self.bottom
    }

    pub fn part(&self, side: Side) -> &[NodeId] {
        match side {
            Side::Top => &self.top,
            Side::Bottom => &self.bottom,
        }
    }

    pub fn grade(&self) -> Grade {
        Grade::new(self.top.len() as i32 - 1, self.bottom.len() as i32 - 1)
    }

    pub fn dim(&self) -> i32 {
        self.grade().dim()
    }

    pub fn is_canonical(&self) -> bool {
        let increasing = |v: &[NodeId]| v.windows(2).all(|w| w[0] < w[1]);
        (!self.top.is_empty() || !self.bottom.is_empty())
            && increasing(&self.top)
            && increasing(&self.bottom)
    }

    /// Swaps the roles of the two layers.
    pub fn mirrored(&self) -> Crossimplex {
        Crossimplex { top: self.bottom.clone(), bottom: self.top.clone() }
    }

    /// Crossfaces on one side: drop position `i`, sign `(-1)^i`. Faces that
    /// would be empty are omitted.
    pub fn faces(&self, side: Side) -> Vec<(Crossimplex, i8)> {
        let (part, other) = match side {
            Side::Top => (&self.top, &self.bottom),
            Side::Bottom => (&self.bottom, &self.top),
        };
        if part.is_empty() || (part.len() == 1 && other.is_empty()) {
            return Vec::new();
        }
        (0..part.len())
            .map(|i| {
                let mut dropped = part.clone();
                dropped.remove(i);
                let face = match side {
                    Side::Top => Crossimplex { top: dropped, bottom: other.clone() },
                    Side::Bottom => Crossimplex { top: other.clone(), bottom: dropped },
                };
                (face, if i % 2 == 0 { 1 } else { -1 })
            })
            .collect()
    }

    /// All top crossfaces followed by all bottom crossfaces.
    pub fn crossfaces(&self) -> Vec<Crossface> {
        let mut out = Vec::with_capacity(self.top.len() + self.bottom.len());
        for side in [Side::Top, Side::Bottom] {
            out.extend(
                self.faces(side)
                    .into_iter()
                    .map(|(face, sign)| Crossface { face, sign, side }),
            );
        }
        out
    }

    /// Inserts `v` on `side`. Returns the coface and the sign of `self` in
    /// its boundary, or `None` if `v` is already a vertex.
    pub fn with_vertex(&self, side: Side, v: NodeId) -> Option<(Crossimplex, i8)> {
        let part = self.part(side);
        let pos = match part.binary_search(&v) {
            Ok(_) => return None,
            Err(p) => p,
        };
        let mut grown = part.to_vec();
        grown.insert(pos, v);
        let c = match side {
            Side::Top => Crossimplex { top: grown, bottom: self.bottom.clone() },
            Side::Bottom => Crossimplex { top: self.top.clone(), bottom: grown },
        };
        Some((c, if pos % 2 == 0 { 1 } else { -1 }))
    }
}

impl fmt::Display for Crossimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[NodeId]| {
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        };
        write!(f, "[{};{}]", join(&self.top), join(&self.bottom))
    }
}

impl Serialize for Crossimplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Crossimplex", 2)?;
        st.serialize_field("top", &self.top)?;
        st.serialize_field("bottom", &self.bottom)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Crossimplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(default)]
            top: Vec<NodeId>,
            #[serde(default)]
            bottom: Vec<NodeId>,
        }
        let raw = Raw::deserialize(d)?;
        Crossimplex::new(&raw.top, &raw.bottom).map_err(serde::de::Error::custom)
    }
}
