use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::signature::{Signature, Symbol};
use crate::error::{Error, Result};

/// A finite relational structure on the universe `0..size`.
///
/// Each relation is a dense bitset over all `size^arity` tuples, indexed
/// big-endian so that index order equals lexicographic tuple order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    sig: Arc<Signature>,
    size: usize,
    rels: Vec<Vec<u64>>,
}

pub(crate) fn tuple_count(n: usize, arity: usize) -> usize {
    n.pow(arity as u32)
}

pub(crate) fn tuple_index(n: usize, t: &[usize]) -> usize {
    t.iter().fold(0, |acc, &x| acc * n + x)
}

pub(crate) fn index_tuple(n: usize, arity: usize, mut idx: usize, out: &mut [usize]) {
    for i in (0..arity).rev() {
        out[i] = idx % n;
        idx /= n;
    }
}

/// All tuples of the given arity over `0..n`, in lexicographic order.
pub fn all_tuples(n: usize, arity: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if n == 0 { 0 } else { tuple_count(n, arity) };
    (0..total).map(move |i| {
        let mut t = vec![0; arity];
        index_tuple(n, arity, i, &mut t);
        t
    })
}

impl Structure {
    pub fn empty(sig: Arc<Signature>, size: usize) -> Self {
        let rels = sig
            .symbols()
            .iter()
            .map(|s| vec![0u64; tuple_count(size, s.arity).div_ceil(64)])
            .collect();
        Structure { sig, size, rels }
    }

    /// Build from 0-based tuples; panics on out-of-range input, so use
    /// [`Structure::from_doc`] for anything user supplied.
    pub fn from_tuples(sig: Arc<Signature>, size: usize, rels: &[(&str, Vec<Vec<usize>>)]) -> Self {
        let mut s = Structure::empty(sig, size);
        for (name, ts) in rels {
            let sym = s.sig.index_of(name).expect("unknown symbol");
            for t in ts {
                s.set(sym, t, true);
            }
        }
        s
    }

    pub fn sig(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn holds(&self, sym: usize, t: &[usize]) -> bool {
        let i = tuple_index(self.size, t);
        self.rels[sym][i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, sym: usize, t: &[usize], value: bool) {
        debug_assert!(t.iter().all(|&x| x < self.size));
        let i = tuple_index(self.size, t);
        if value {
            self.rels[sym][i / 64] |= 1 << (i % 64);
        } else {
            self.rels[sym][i / 64] &= !(1 << (i % 64));
        }
    }

    /// Present tuples of one symbol, lexicographically.
    pub fn tuples(&self, sym: usize) -> Vec<Vec<usize>> {
        let arity = self.sig.arity(sym);
        all_tuples(self.size, arity)
            .filter(|t| self.holds(sym, t))
            .collect()
    }

    pub fn tuple_total(&self) -> usize {
        (0..self.sig.len()).map(|s| self.tuples(s).len()).sum()
    }

    /// The structure on `0..map.len()` with `R(t)` iff `R(map(t))` here.
    /// `map` must be injective into `0..size`.
    pub fn pull(&self, map: &[usize]) -> Structure {
        let k = map.len();
        let mut out = Structure::empty(self.sig.clone(), k);
        let mut img = Vec::new();
        for sym in 0..self.sig.len() {
            let arity = self.sig.arity(sym);
            for t in all_tuples(k, arity) {
                img.clear();
                img.extend(t.iter().map(|&x| map[x]));
                if self.holds(sym, &img) {
                    out.set(sym, &t, true);
                }
            }
        }
        out
    }

    /// Induced substructure on `subset`, relabeled in increasing vertex order,
    /// with the inclusion map.
    pub fn induced(&self, subset: &[usize]) -> Result<(Structure, Vec<usize>)> {
        let mut s: Vec<usize> = subset.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.len() != subset.len() {
            return Err(Error::OutOfRange("subset has repeated vertices".into()));
        }
        if let Some(&bad) = s.iter().find(|&&v| v >= self.size) {
            return Err(Error::OutOfRange(format!(
                "vertex {} outside universe of size {}",
                bad + 1,
                self.size
            )));
        }
        Ok((self.pull(&s), s))
    }

    /// Apply a permutation: vertex `v` moves to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Structure {
        let mut inv = vec![0; perm.len()];
        for (v, &p) in perm.iter().enumerate() {
            inv[p] = v;
        }
        self.pull(&inv)
    }

    /// Keep only the first `sig.len()` symbols; `sig` must be a prefix.
    pub fn reduct_to(&self, sig: &Arc<Signature>) -> Result<Structure> {
        if !sig.is_prefix_of(&self.sig) {
            return Err(Error::SignatureMismatch(format!(
                "{} is not a prefix of {}",
                sig.describe(),
                self.sig.describe()
            )));
        }
        Ok(Structure {
            sig: sig.clone(),
            size: self.size,
            rels: self.rels[..sig.len()].to_vec(),
        })
    }

    /// Same universe, larger signature: the new symbols start empty.
    pub fn widen_to(&self, sig: &Arc<Signature>) -> Result<Structure> {
        if !self.sig.is_prefix_of(sig) {
            return Err(Error::SignatureMismatch(format!(
                "{} is not a prefix of {}",
                self.sig.describe(),
                sig.describe()
            )));
        }
        let mut out = Structure::empty(sig.clone(), self.size);
        out.rels[..self.sig.len()].clone_from_slice(&self.rels);
        Ok(out)
    }

    pub fn check_same_sig(&self, other: &Structure) -> Result<()> {
        if self.sig == other.sig {
            Ok(())
        } else {
            Err(Error::SignatureMismatch(format!(
                "{} vs {}",
                self.sig.describe(),
                other.sig.describe()
            )))
        }
    }

    pub fn to_doc(&self) -> StructureDoc {
        let mut relations = BTreeMap::new();
        for (sym, s) in self.sig.symbols().iter().enumerate() {
            let ts = self
                .tuples(sym)
                .into_iter()
                .map(|t| t.into_iter().map(|x| x + 1).collect())
                .collect();
            relations.insert(s.name.clone(), ts);
        }
        StructureDoc {
            signature: self.sig.symbols().to_vec(),
            size: self.size,
            relations,
        }
    }

    pub fn from_doc(doc: &StructureDoc) -> Result<Structure> {
        let sig = Signature::new(doc.signature.clone())?;
        Self::from_doc_with(doc, sig, "")
    }

    /// Parse against an already-built signature (shared by class files).
    pub fn from_doc_with(doc: &StructureDoc, sig: Arc<Signature>, prefix: &str) -> Result<Structure> {
        if doc.signature != sig.symbols() {
            return Err(Error::malformed(
                format!("{prefix}signature"),
                format!("expected {}", sig.describe()),
            ));
        }
        let mut s = Structure::empty(sig.clone(), doc.size);
        for (name, ts) in &doc.relations {
            let Some(sym) = sig.index_of(name) else {
                return Err(Error::malformed(
                    format!("{prefix}relations.{name}"),
                    "symbol not in signature",
                ));
            };
            let arity = sig.arity(sym);
            for (i, t) in ts.iter().enumerate() {
                let path = format!("{prefix}relations.{name}[{i}]");
                if t.len() != arity {
                    return Err(Error::malformed(
                        path,
                        format!("tuple has length {}, symbol arity is {arity}", t.len()),
                    ));
                }
                for (j, &x) in t.iter().enumerate() {
                    if x < 1 || x > doc.size {
                        return Err(Error::malformed(
                            format!("{path}[{j}]"),
                            format!("vertex {x} outside 1..{}", doc.size),
                        ));
                    }
                }
                let t0: Vec<usize> = t.iter().map(|x| x - 1).collect();
                s.set(sym, &t0, true);
            }
        }
        Ok(s)
    }
}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Structure(n={}", self.size)?;
        for (sym, s) in self.sig.symbols().iter().enumerate() {
            let ts: Vec<String> = self
                .tuples(sym)
                .iter()
                .map(|t| {
                    t.iter()
                        .map(|x| (x + 1).to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                })
                .collect();
            write!(f, " {}={{{}}}", s.name, ts.join(" "))?;
        }
        write!(f, ")")
    }
}

/// Text form of a structure. Vertices are 1-based here.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureDoc {
    pub signature: Vec<Symbol>,
    pub size: usize,
    #[serde(default)]
    pub relations: BTreeMap<String, Vec<Vec<usize>>>,
}

impl Serialize for Structure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Structure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = StructureDoc::deserialize(d)?;
        Structure::from_doc(&doc).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::named;

    #[test]
    fn tuple_index_is_lexicographic() {
        let ts: Vec<Vec<usize>> = all_tuples(3, 2).collect();
        assert_eq!(ts.len(), 9);
        assert_eq!(ts[0], vec![0, 0]);
        assert_eq!(ts[1], vec![0, 1]);
        assert_eq!(ts[8], vec![2, 2]);
        for (i, t) in ts.iter().enumerate() {
            assert_eq!(tuple_index(3, t), i);
        }
    }

    #[test]
    fn induced_examples() {
        let (k3, inc) = named::complete_graph(4).induced(&[0, 1, 2]).unwrap();
        assert_eq!(k3, named::complete_graph(3));
        assert_eq!(inc, vec![0, 1, 2]);
        let (two, _) = named::path(3).induced(&[0, 2]).unwrap();
        assert_eq!(two, named::empty_graph(2));
        let (z, inc) = named::cycle(5).induced(&[]).unwrap();
        assert_eq!(z.size(), 0);
        assert!(inc.is_empty());
        assert!(named::path(3).induced(&[0, 3]).is_err());
    }

    #[test]
    fn doc_round_trip_and_errors() {
        let c4 = named::cycle(4);
        let json = serde_json::to_string(&c4).unwrap();
        let back: Structure = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c4);

        let bad = r#"{"signature":[{"name":"E","arity":2}],"size":4,"relations":{"E":[[1,5]]}}"#;
        let doc: StructureDoc = serde_json::from_str(bad).unwrap();
        match Structure::from_doc(&doc) {
            Err(Error::Malformed { path, .. }) => assert_eq!(path, "relations.E[0][1]"),
            other => panic!("unexpected {other:?}"),
        }
        let unknown = r#"{"signature":[],"size":1,"relations":{},"extra":1}"#;
        assert!(serde_json::from_str::<StructureDoc>(unknown).is_err());
    }

    #[test]
    fn reduct_and_widen() {
        let og = named::ordered_graph_sig();
        let g = named::complete_graph(2);
        let w = g.widen_to(&og).unwrap();
        assert_eq!(w.reduct_to(g.sig()).unwrap(), g);
        assert!(g.reduct_to(&og).is_err());
    }
}
