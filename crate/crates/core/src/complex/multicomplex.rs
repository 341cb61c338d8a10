use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};

use super::{Bicomplex, NodeId, Side};
use crate::error::{Error, Result};

/// A family of bicomplexes indexed by ordered layer pairs.
///
/// For undirected multicomplexes only pairs `(s,t)` with `s < t` need to be
/// stored; [`Multicomplex::get`] derives `(t,s)` by swapping layers.
#[derive(Clone, Debug, Default)]
pub struct Multicomplex {
    layers: BTreeMap<u32, BTreeSet<NodeId>>,
    pairs: BTreeMap<(u32, u32), Bicomplex>,
}

impl Multicomplex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_layer(&mut self, id: u32, vertices: impl IntoIterator<Item = NodeId>) {
        self.layers.entry(id).or_default().extend(vertices);
    }

    pub fn layers(&self) -> impl Iterator<Item = (u32, &BTreeSet<NodeId>)> {
        self.layers.iter().map(|(k, v)| (*k, v))
    }

    /// Stores the bicomplex for `(s,t)`. Its vertices must belong to the
    /// declared layers; layer vertices it does not mention become isolated
    /// vertices, so that its vertex sets equal the layers.
    pub fn insert(&mut self, s: u32, t: u32, x: Bicomplex) -> Result<()> {
        if s == t {
            return Err(Error::SameLayer(s));
        }
        let ls = self.layers.get(&s).ok_or(Error::UnknownLayer(s))?;
        let lt = self.layers.get(&t).ok_or(Error::UnknownLayer(t))?;
        for (side, layer) in [(Side::Top, ls), (Side::Bottom, lt)] {
            if let Some(v) = x.vertices(side).find(|v| !layer.contains(v)) {
                return Err(Error::UnknownVertex { side, vertex: v });
            }
        }
        let x = x
            .with_isolated_vertices(Side::Top, ls.iter().copied())
            .with_isolated_vertices(Side::Bottom, lt.iter().copied());
        self.pairs.insert((s, t), x);
        Ok(())
    }

    /// Bicomplex for `(s,t)`, mirroring a stored `(t,s)` when needed.
    pub fn get(&self, s: u32, t: u32) -> Option<Cow<'_, Bicomplex>> {
        if let Some(x) = self.pairs.get(&(s, t)) {
            return Some(Cow::Borrowed(x));
        }
        self.pairs.get(&(t, s)).map(|x| Cow::Owned(x.mirrored()))
    }

    /// Stored pairs in ascending order.
    pub fn pairs(&self) -> impl Iterator<Item = ((u32, u32), &Bicomplex)> {
        self.pairs.iter().map(|(k, v)| (*k, v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{Crossimplex, Grade};

    #[test]
    fn mirrored_lookup() {
        let mut m = Multicomplex::new();
        m.add_layer(1, [0, 1, 2]);
        m.add_layer(2, [5, 6]);
        let x = Bicomplex::builder().cell(&[0, 1], &[5]).build().unwrap();
        m.insert(1, 2, x).unwrap();
        let fwd = m.get(1, 2).unwrap();
        assert_eq!(fwd.vertices(Side::Top).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(fwd.vertices(Side::Bottom).collect::<Vec<_>>(), vec![5, 6]);
        let back = m.get(2, 1).unwrap();
        assert!(back.contains(&Crossimplex::new(&[5], &[0, 1]).unwrap()));
        assert_eq!(back.count(Grade::new(0, 1)), 1);
        assert!(m.get(1, 3).is_none());
    }

    #[test]
    fn insert_checks_layers() {
        let mut m = Multicomplex::new();
        m.add_layer(1, [0]);
        m.add_layer(2, [5]);
        let x = Bicomplex::builder().cell(&[0], &[7]).build().unwrap();
        assert!(matches!(
            m.insert(1, 2, x.clone()),
            Err(Error::UnknownVertex { side: Side::Bottom, vertex: 7 })
        ));
        assert!(matches!(m.insert(1, 1, x.clone()), Err(Error::SameLayer(1))));
        assert!(matches!(m.insert(1, 3, x), Err(Error::UnknownLayer(3))));
    }
}
