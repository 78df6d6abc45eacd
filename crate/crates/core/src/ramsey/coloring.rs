use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::structures::{enumerate_embeddings, Map, Structure};

/// Emb(A, target) in enumeration order, with a reverse lookup.
#[derive(Debug, Clone)]
pub struct EmbeddingIndex {
    pub a: Structure,
    pub target: Structure,
    pub embs: Vec<Map>,
    lookup: HashMap<Map, usize>,
}

impl EmbeddingIndex {
    pub fn new(a: &Structure, target: &Structure) -> Result<Self> {
        let embs = enumerate_embeddings(a, target)?;
        let lookup = embs.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Ok(EmbeddingIndex { a: a.clone(), target: target.clone(), embs, lookup })
    }

    pub fn len(&self) -> usize {
        self.embs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.embs.is_empty()
    }

    pub fn index_of(&self, e: &[usize]) -> Option<usize> {
        self.lookup.get(e).copied()
    }

    pub fn fingerprint(&self) -> String {
        fingerprint_maps(&self.embs)
    }
}

/// sha256 over the listed maps, so that indices in certificates can be
/// checked against the enumeration that produced them.
pub fn fingerprint_maps(maps: &[Map]) -> String {
    let mut h = Sha256::new();
    h.update((maps.len() as u64).to_be_bytes());
    for m in maps {
        h.update((m.len() as u64).to_be_bytes());
        for &x in m {
            h.update((x as u64).to_be_bytes());
        }
    }
    hex::encode(h.finalize())
}

/// A partial coloring of Emb(A, C) by colors `1..=r`, indexed in
/// enumeration order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub a: Structure,
    pub c: Structure,
    pub r: usize,
    pub colors: Vec<Option<usize>>,
}

impl Coloring {
    pub fn new(a: &Structure, c: &Structure, r: usize, colors: Vec<Option<usize>>) -> Result<Self> {
        let n = EmbeddingIndex::new(a, c)?.len();
        if colors.len() != n {
            return Err(Error::OutOfRange(format!("coloring has {} entries, expected {n}", colors.len())));
        }
        if let Some(bad) = colors.iter().flatten().find(|&&x| x == 0 || x > r) {
            return Err(Error::OutOfRange(format!("color {bad} outside 1..={r}")));
        }
        Ok(Coloring { a: a.clone(), c: c.clone(), r, colors })
    }

    pub fn full(a: &Structure, c: &Structure, r: usize, colors: Vec<usize>) -> Result<Self> {
        Coloring::new(a, c, r, colors.into_iter().map(Some).collect())
    }

    /// Color every embedding by `f`.
    pub fn from_fn(idx: &EmbeddingIndex, r: usize, f: &dyn Fn(&[usize]) -> Option<usize>) -> Self {
        Coloring {
            a: idx.a.clone(),
            c: idx.target.clone(),
            r,
            colors: idx.embs.iter().map(|e| f(e)).collect(),
        }
    }

    pub fn is_full(&self) -> bool {
        self.colors.iter().all(Option::is_some)
    }

    /// Indices of color `i`.
    pub fn class(&self, i: usize) -> Vec<usize> {
        (0..self.colors.len()).filter(|&x| self.colors[x] == Some(i)).collect()
    }

    pub fn domain(&self) -> Vec<usize> {
        (0..self.colors.len()).filter(|&x| self.colors[x].is_some()).collect()
    }

    fn check_base(&self, other: &Coloring) -> Result<()> {
        if self.a != other.a || self.c != other.c || self.colors.len() != other.colors.len() {
            return Err(Error::SignatureMismatch("colorings live on different embedding sets".into()));
        }
        Ok(())
    }
}

/// γ * δ with (γ(x)-1)·ℓ + δ(x), defined where both are.
pub fn product_coloring(g: &Coloring, d: &Coloring) -> Result<Coloring> {
    g.check_base(d)?;
    let l = d.r;
    let colors = g
        .colors
        .iter()
        .zip(&d.colors)
        .map(|(x, y)| match (x, y) {
            (Some(x), Some(y)) => Some((x - 1) * l + y),
            _ => None,
        })
        .collect();
    Ok(Coloring { a: g.a.clone(), c: g.c.clone(), r: g.r * l, colors })
}

/// δ(x) = δ(y) implies γ(x) = γ(y), on the common domain.
pub fn refines(d: &Coloring, g: &Coloring) -> Result<bool> {
    g.check_base(d)?;
    let mut seen: HashMap<usize, usize> = HashMap::new();
    for (x, y) in d.colors.iter().zip(&g.colors) {
        if let (Some(x), Some(y)) = (x, y) {
            if *seen.entry(*x).or_insert(*y) != *y {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// f(γ) on Emb(B, C) for γ on Emb(A, C) and f: A → B: x ↦ γ(x∘f).
pub fn pullback_coloring(g: &Coloring, f: &[usize], b: &Structure) -> Result<Coloring> {
    if !crate::structures::is_embedding(f, &g.a, b)? {
        return Err(Error::NotEmbedding("f is not an embedding between the bases".into()));
    }
    let from = EmbeddingIndex::new(&g.a, &g.c)?;
    let to = EmbeddingIndex::new(b, &g.c)?;
    let colors = to
        .embs
        .iter()
        .map(|x| {
            let xf: Map = f.iter().map(|&v| x[v]).collect();
            from.index_of(&xf).and_then(|i| g.colors[i])
        })
        .collect();
    Ok(Coloring { a: b.clone(), c: g.c.clone(), r: g.r, colors })
}

/// A partial isomorphism of a structure: `domain[i] ↦ range[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialMap {
    pub domain: Vec<usize>,
    pub range: Vec<usize>,
}

impl PartialMap {
    pub fn identity(n: usize) -> Self {
        PartialMap { domain: (0..n).collect(), range: (0..n).collect() }
    }

    pub fn apply(&self, v: usize) -> Option<usize> {
        self.domain.iter().position(|&d| d == v).map(|i| self.range[i])
    }

    /// h∘g on the points where both are defined.
    pub fn then(&self, h: &PartialMap) -> PartialMap {
        let mut out = PartialMap { domain: Vec::new(), range: Vec::new() };
        for (&d, &r) in self.domain.iter().zip(&self.range) {
            if let Some(y) = h.apply(r) {
                out.domain.push(d);
                out.range.push(y);
            }
        }
        out
    }

    pub fn is_partial_iso(&self, s: &Structure) -> bool {
        let mut sorted = self.range.clone();
        sorted.sort_unstable();
        sorted.dedup();
        self.domain.len() == self.range.len()
            && sorted.len() == self.range.len()
            && self.domain.iter().chain(&self.range).all(|&v| v < s.size())
            && s.pull(&self.domain) == s.pull(&self.range)
    }
}

/// (g·γ)(g∘x) = γ(x); undefined where g∘x is not defined.
pub fn act_on_coloring(g: &PartialMap, gamma: &Coloring) -> Result<Coloring> {
    if !g.is_partial_iso(&gamma.c) {
        return Err(Error::NotEmbedding("g is not a partial isomorphism of the target".into()));
    }
    let idx = EmbeddingIndex::new(&gamma.a, &gamma.c)?;
    let mut colors = vec![None; idx.len()];
    for (i, x) in idx.embs.iter().enumerate() {
        let Some(col) = gamma.colors[i] else { continue };
        let gx: Option<Map> = x.iter().map(|&v| g.apply(v)).collect();
        if let Some(j) = gx.and_then(|gx| idx.index_of(&gx)) {
            colors[j] = Some(col);
        }
    }
    Ok(Coloring { colors, ..gamma.clone() })
}
