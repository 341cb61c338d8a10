use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::complex::{make_crossimplex, Bicomplex, Crossimplex, NodeId, Side};
use crate::error::{Error, Result};

/// Display names for vertices, per side.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VertexLabels {
    pub top: BTreeMap<NodeId, String>,
    pub bottom: BTreeMap<NodeId, String>,
}

impl VertexLabels {
    pub fn get(&self, side: Side, v: NodeId) -> Option<&str> {
        match side {
            Side::Top => self.top.get(&v),
            Side::Bottom => self.bottom.get(&v),
        }
        .map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.top.is_empty() && self.bottom.is_empty()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileSimplex {
    #[serde(default)]
    top: Vec<NodeId>,
    #[serde(default)]
    bottom: Vec<NodeId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weight: Option<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileLayers {
    #[serde(rename = "1", default)]
    top: Option<Vec<NodeId>>,
    #[serde(rename = "2", default)]
    bottom: Option<Vec<NodeId>>,
}

#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileLabels {
    #[serde(rename = "1", default, skip_serializing_if = "BTreeMap::is_empty")]
    top: BTreeMap<NodeId, String>,
    #[serde(rename = "2", default, skip_serializing_if = "BTreeMap::is_empty")]
    bottom: BTreeMap<NodeId, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BicomplexFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    layers: Option<FileLayers>,
    crossimplices: Vec<FileSimplex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<FileLabels>,
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse { line: e.line(), message: e.to_string() }
}

/// Parses, closes and validates a bicomplex document.
///
/// When `layers` is present it must list every vertex used; vertices listed
/// there but used nowhere become isolated vertices.
pub fn read_bicomplex_str(text: &str) -> Result<(Bicomplex, VertexLabels)> {
    let file: BicomplexFile = serde_json::from_str(text).map_err(parse_error)?;
    let mut seed = Vec::with_capacity(file.crossimplices.len());
    for s in &file.crossimplices {
        let (a, _sign) = make_crossimplex(&s.top, &s.bottom)?;
        seed.push((a, s.weight));
    }
    let mut x = Bicomplex::close(seed)?;
    if let Some(layers) = &file.layers {
        for (side, declared) in [(Side::Top, &layers.top), (Side::Bottom, &layers.bottom)] {
            let Some(declared) = declared else { continue };
            let set: BTreeSet<NodeId> = declared.iter().copied().collect();
            if let Some(v) = x.vertices(side).find(|v| !set.contains(v)) {
                return Err(Error::UnknownVertex { side, vertex: v });
            }
            x = x.with_isolated_vertices(side, set);
        }
    }
    x.validate().map_err(Error::Validation)?;
    let labels = file.labels.map(|l| VertexLabels { top: l.top, bottom: l.bottom }).unwrap_or_default();
    Ok((x, labels))
}

pub fn parse_bicomplex(path: &Path) -> Result<(Bicomplex, VertexLabels)> {
    read_bicomplex_str(&std::fs::read_to_string(path)?)
}

/// Serializes `x` as its maximal crossimplices plus every weighted one, so
/// that reading the document back yields the same complex.
pub fn bicomplex_to_json(x: &Bicomplex, labels: &VertexLabels) -> Result<String> {
    let weighted: BTreeMap<&Crossimplex, f64> = x.weights().iter().collect();
    let mut listed: BTreeSet<&Crossimplex> = x.maximal().into_iter().collect();
    listed.extend(weighted.keys().copied());
    let crossimplices = listed
        .into_iter()
        .map(|a| FileSimplex {
            top: a.top().to_vec(),
            bottom: a.bottom().to_vec(),
            weight: weighted.get(a).copied(),
        })
        .collect();
    let file = BicomplexFile {
        layers: Some(FileLayers {
            top: Some(x.vertices(Side::Top).collect()),
            bottom: Some(x.vertices(Side::Bottom).collect()),
        }),
        crossimplices,
        labels: (!labels.is_empty())
            .then(|| FileLabels { top: labels.top.clone(), bottom: labels.bottom.clone() }),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Grade;
    use crate::fixtures;

    #[test]
    fn closure_on_load() {
        let (x, labels) = read_bicomplex_str(
            r#"{"crossimplices": [{"top": [1, 0], "bottom": [9]}], "labels": {"2": {"9": "LFPG"}}}"#,
        )
        .unwrap();
        assert_eq!(x.count(Grade::CROSS_EDGES), 2);
        assert_eq!(x.len(), 7);
        assert_eq!(labels.get(Side::Bottom, 9), Some("LFPG"));
    }

    #[test]
    fn declared_isolated_vertices() {
        let (x, _) =
            read_bicomplex_str(r#"{"layers": {"1": [0, 1, 5], "2": [2]}, "crossimplices": [{"top": [0], "bottom": [2]}]}"#)
                .unwrap();
        assert_eq!(x.vertices(Side::Top).collect::<Vec<_>>(), vec![0, 1, 5]);
    }

    #[test]
    fn undeclared_vertex_rejected() {
        let r = read_bicomplex_str(r#"{"layers": {"1": [0]}, "crossimplices": [{"top": [0, 3]}]}"#);
        assert!(matches!(r, Err(Error::UnknownVertex { side: Side::Top, vertex: 3 })));
    }

    #[test]
    fn bad_inputs() {
        assert!(matches!(
            read_bicomplex_str(r#"{"crossimplices": [{"top": [0], "weight": -1}]}"#),
            Err(Error::InvalidWeight { .. })
        ));
        assert!(matches!(
            read_bicomplex_str("{\n\"crossimplices\": 3}"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            read_bicomplex_str(r#"{"crossimplices": [{"top": [0, 0]}]}"#),
            Err(Error::DegenerateSimplex { vertex: 0 })
        ));
    }

    #[test]
    fn round_trip_f3_with_weights() {
        let x = fixtures::f3();
        let x = Bicomplex::close(
            x.simplices()
                .cloned()
                .map(|a| {
                    let w = (a == Crossimplex::cross_edge(4, 1)).then_some(2.5);
                    (a, w)
                })
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let text = bicomplex_to_json(&x, &VertexLabels::default()).unwrap();
        let (y, _) = read_bicomplex_str(&text).unwrap();
        assert_eq!(x, y);
    }
}
