use serde::{Deserialize, Serialize};

use super::coloring::EmbeddingIndex;
use crate::error::{Error, Result};
use crate::structures::{enumerate_embeddings, Map, Structure};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeLevel {
    pub t: usize,
    pub items: usize,
    pub count: usize,
    /// Colorings at this level with at least one bad extension to the next.
    pub extendable: Option<usize>,
}

/// Bad colorings of Emb(A, A_t), where A_t is the target on its first `t`
/// points. A coloring is bad when no f ∈ Emb(B, A_t) has f∘Emb(A, B) within
/// `k` colors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadColoringTree {
    pub a: Structure,
    pub b: Structure,
    pub r: usize,
    pub k: usize,
    pub levels: Vec<TreeLevel>,
    /// Per level, the bad colorings (colors `1..=r`, items in enumeration
    /// order of Emb(A, A_t)).
    pub colorings: Vec<Vec<Vec<u8>>>,
    /// Per level, the index of each coloring's restriction one level down.
    pub parents: Vec<Vec<usize>>,
    pub first_empty_level: Option<usize>,
}

/// Build levels `1..=depth`; refuses when a level would hold more than
/// `limit` colorings.
pub fn bad_coloring_tree(
    a: &Structure,
    b: &Structure,
    top: &Structure,
    depth: usize,
    r: usize,
    k: usize,
    limit: usize,
) -> Result<BadColoringTree> {
    a.check_same_sig(b)?;
    a.check_same_sig(top)?;
    if depth > top.size() {
        return Err(Error::OutOfRange(format!("depth {depth} exceeds the {} points available", top.size())));
    }
    if r == 0 || r > 128 {
        return Err(Error::OutOfRange("r must be in 1..=128".into()));
    }
    let inner = enumerate_embeddings(a, b)?;
    let mut tree = BadColoringTree {
        a: a.clone(),
        b: b.clone(),
        r,
        k,
        levels: Vec::new(),
        colorings: Vec::new(),
        parents: Vec::new(),
        first_empty_level: None,
    };
    let mut prev_items: Vec<Map> = Vec::new();
    let mut prev: Vec<Vec<u8>> = vec![Vec::new()];
    for t in 1..=depth {
        let level = top.pull(&(0..t).collect::<Vec<_>>());
        let idx = EmbeddingIndex::new(a, &level)?;
        let old_pos: Vec<usize> = prev_items.iter().map(|e| idx.index_of(e).unwrap()).collect();
        let new_items: Vec<usize> = (0..idx.len()).filter(|&i| idx.embs[i].contains(&(t - 1))).collect();
        let mut rank = vec![usize::MAX; idx.len()];
        for (n, &i) in new_items.iter().enumerate() {
            rank[i] = n;
        }
        // constraints from the new copies of B, split by the last new item
        let mut fixed: Vec<Vec<usize>> = Vec::new();
        let mut by_new: Vec<Vec<Vec<usize>>> = vec![Vec::new(); new_items.len()];
        for f in enumerate_embeddings(b, &level)? {
            if !f.contains(&(t - 1)) {
                continue;
            }
            let set: Vec<usize> = inner
                .iter()
                .map(|e| idx.index_of(&e.iter().map(|&x| f[x]).collect::<Vec<_>>()).unwrap())
                .collect();
            match set.iter().filter(|&&i| rank[i] != usize::MAX).map(|&i| rank[i]).max() {
                Some(last) => by_new[last].push(set),
                None => fixed.push(set),
            }
        }
        let mut next = Vec::new();
        let mut parents = Vec::new();
        let mut has_child = vec![false; prev.len()];
        for (pi, pc) in prev.iter().enumerate() {
            let mut col = vec![0u8; idx.len()];
            for (j, &c) in pc.iter().enumerate() {
                col[old_pos[j]] = c;
            }
            if fixed.iter().any(|s| distinct(s, &col) <= k) {
                continue;
            }
            let mut found = 0usize;
            extend(&mut col, &new_items, 0, r, k, &by_new, &mut |c| {
                next.push(c.to_vec());
                parents.push(pi);
                found += 1;
            });
            if found > 0 {
                has_child[pi] = true;
            }
            if next.len() > limit {
                return Err(Error::SearchTooLarge(format!("more than {limit} bad colorings at level {t}")));
            }
        }
        if let Some(last) = tree.levels.last_mut() {
            last.extendable = Some(has_child.iter().filter(|&&x| x).count());
        }
        tree.levels.push(TreeLevel { t, items: idx.len(), count: next.len(), extendable: None });
        if next.is_empty() && tree.first_empty_level.is_none() {
            tree.first_empty_level = Some(t);
        }
        tree.colorings.push(next.clone());
        tree.parents.push(parents);
        prev = next;
        prev_items = idx.embs;
    }
    Ok(tree)
}

fn distinct(set: &[usize], col: &[u8]) -> usize {
    let mut mask = 0u128;
    for &i in set {
        mask |= 1 << (col[i] - 1);
    }
    mask.count_ones() as usize
}

fn extend(
    col: &mut Vec<u8>,
    new_items: &[usize],
    n: usize,
    r: usize,
    k: usize,
    by_new: &[Vec<Vec<usize>>],
    emit: &mut dyn FnMut(&[u8]),
) {
    if n == new_items.len() {
        emit(col);
        return;
    }
    for c in 1..=r as u8 {
        col[new_items[n]] = c;
        if by_new[n].iter().any(|s| distinct(s, col) <= k) {
            continue;
        }
        extend(col, new_items, n + 1, r, k, by_new, emit);
    }
    col[new_items[n]] = 0;
}
