//! Thick and syndetic sets of embeddings, truncated at a horizon.
//!
//! S ⊆ Emb(A, top) is thick at horizon `s` when every class member B with
//! A ≤ B and |B| ≤ s has some f ∈ Emb(B, top) with f∘Emb(A, B) ⊆ S. Members
//! B without a copy of A put no condition on S and are left out. S is
//! syndetic when its complement is not thick.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::coloring::EmbeddingIndex;
use crate::classes::{generate_up_to, ClassSpec};
use crate::error::{Error, Result};
use crate::structures::{embeds, enumerate_embeddings, Map, Plan, Structure};

/// A set of embeddings of A into a target, by index in enumeration order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingSet {
    pub a: Structure,
    pub target: Structure,
    pub members: Vec<usize>,
}

impl EmbeddingSet {
    pub fn new(a: &Structure, target: &Structure, mut members: Vec<usize>) -> Result<Self> {
        let n = EmbeddingIndex::new(a, target)?.len();
        members.sort_unstable();
        members.dedup();
        if let Some(&bad) = members.iter().find(|&&i| i >= n) {
            return Err(Error::OutOfRange(format!("embedding index {bad} but only {n} embeddings")));
        }
        Ok(EmbeddingSet { a: a.clone(), target: target.clone(), members })
    }

    pub fn full(a: &Structure, target: &Structure) -> Result<Self> {
        let n = EmbeddingIndex::new(a, target)?.len();
        Ok(EmbeddingSet { a: a.clone(), target: target.clone(), members: (0..n).collect() })
    }

    /// Members are the embeddings satisfying `pred`.
    pub fn filter(a: &Structure, target: &Structure, pred: &dyn Fn(&[usize]) -> bool) -> Result<Self> {
        let idx = EmbeddingIndex::new(a, target)?;
        let members = (0..idx.len()).filter(|&i| pred(&idx.embs[i])).collect();
        Ok(EmbeddingSet { a: a.clone(), target: target.clone(), members })
    }

    pub fn complement(&self) -> Self {
        let n = EmbeddingIndex::new(&self.a, &self.target).map(|i| i.len()).unwrap_or(0);
        let inside: HashSet<usize> = self.members.iter().copied().collect();
        EmbeddingSet {
            a: self.a.clone(),
            target: self.target.clone(),
            members: (0..n).filter(|i| !inside.contains(i)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThickWitness {
    pub b: Structure,
    pub f: Map,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThickReport {
    pub s: usize,
    pub top_size: usize,
    pub members: usize,
    pub thick: bool,
    pub checked: usize,
    /// One f per B when thick.
    pub witnesses: Vec<ThickWitness>,
    /// The first B with no f when not thick.
    pub blocking: Option<Structure>,
    /// Whether the blocking B embeds in the top at all.
    pub blocking_embeds: Option<bool>,
}

/// Class members B ⊇ A with |B| ≤ s, by size then canonical code.
pub fn horizon_members(spec: &ClassSpec, a: &Structure, s: usize) -> Vec<Structure> {
    generate_up_to(spec, s)
        .into_iter()
        .flatten()
        .filter(|b| b.size() >= a.size() && embeds(a, b).unwrap_or(false))
        .collect()
}

/// f ∈ Emb(B, top) with f∘Emb(A, B) ⊆ S, if any.
fn witness_for(set: &HashSet<Map>, a: &Structure, b: &Structure, top: &Structure) -> Result<Option<Map>> {
    let inner = enumerate_embeddings(a, b)?;
    let mut found = None;
    Plan::new(b).run(top, None, None, &mut |f| {
        let ok = inner.iter().all(|e| set.contains(&e.iter().map(|&x| f[x]).collect::<Vec<_>>()));
        if ok {
            found = Some(f.to_vec());
        }
        !ok
    });
    Ok(found)
}

pub fn thick_at_horizon(spec: &ClassSpec, set: &EmbeddingSet, s: usize) -> Result<ThickReport> {
    spec.check_sig(&set.a)?;
    spec.check_sig(&set.target)?;
    let idx = EmbeddingIndex::new(&set.a, &set.target)?;
    let members: HashSet<Map> = set.members.iter().map(|&i| idx.embs[i].clone()).collect();
    let bs = horizon_members(spec, &set.a, s);
    let found: Vec<Result<Option<Map>>> = bs
        .par_iter()
        .map(|b| witness_for(&members, &set.a, b, &set.target))
        .collect();
    let mut witnesses = Vec::new();
    for (b, f) in bs.iter().zip(found) {
        match f? {
            Some(f) => witnesses.push(ThickWitness { b: b.clone(), f }),
            None => {
                return Ok(ThickReport {
                    s,
                    top_size: set.target.size(),
                    members: set.members.len(),
                    thick: false,
                    checked: witnesses.len() + 1,
                    witnesses: Vec::new(),
                    blocking_embeds: Some(embeds(b, &set.target)?),
                    blocking: Some(b.clone()),
                });
            }
        }
    }
    Ok(ThickReport {
        s,
        top_size: set.target.size(),
        members: set.members.len(),
        thick: true,
        checked: witnesses.len(),
        witnesses,
        blocking: None,
        blocking_embeds: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyndeticReport {
    pub syndetic: bool,
    /// The thickness check of the complement.
    pub complement: ThickReport,
}

/// Syndetic at horizon: the complement is not thick at the same horizon.
pub fn syndetic_at_horizon(spec: &ClassSpec, set: &EmbeddingSet, s: usize) -> Result<SyndeticReport> {
    let complement = thick_at_horizon(spec, &set.complement(), s)?;
    Ok(SyndeticReport { syndetic: !complement.thick, complement })
}
