use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::structure::{all_tuples, Structure};

/// Isomorphism-invariant code plus the relabeling that achieves it.
///
/// `relabeling[v]` is the position of original vertex `v` in the canonical
/// structure, so `structure.relabel(&relabeling)` is the canonical
/// representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalCode {
    pub code: Vec<u8>,
    pub relabeling: Vec<usize>,
}

impl CanonicalCode {
    pub fn hex(&self) -> String {
        hex::encode(&self.code)
    }
}

/// Colour refinement: vertices start equal and are split by the multiset of
/// (symbol, positions occupied, colours of the tuple) over present tuples.
/// Colours are ranks of sorted keys, so the result is invariant.
pub(crate) fn refine_colors(s: &Structure) -> Vec<u32> {
    let n = s.size();
    let mut color = vec![0u32; n];
    let mut classes = if n == 0 { 0 } else { 1 };
    let present: Vec<(usize, Vec<usize>)> = (0..s.sig().len())
        .flat_map(|sym| s.tuples(sym).into_iter().map(move |t| (sym, t)))
        .collect();
    loop {
        let mut lists: Vec<Vec<(usize, u32, Vec<u32>)>> = vec![Vec::new(); n];
        for (sym, t) in &present {
            let cols: Vec<u32> = t.iter().map(|&x| color[x]).collect();
            let mut seen = Vec::with_capacity(t.len());
            for &v in t {
                if seen.contains(&v) {
                    continue;
                }
                seen.push(v);
                let mask = t
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x == v)
                    .fold(0u32, |m, (i, _)| m | 1 << i);
                lists[v].push((*sym, mask, cols.clone()));
            }
        }
        let mut keys: Vec<(u32, Vec<(usize, u32, Vec<u32>)>)> = Vec::with_capacity(n);
        for (v, mut l) in lists.into_iter().enumerate() {
            l.sort();
            keys.push((color[v], l));
        }
        let mut sorted: Vec<&(u32, Vec<(usize, u32, Vec<u32>)>)> = keys.iter().collect();
        sorted.sort();
        sorted.dedup();
        let rank: BTreeMap<&(u32, Vec<(usize, u32, Vec<u32>)>), u32> = sorted
            .iter()
            .enumerate()
            .map(|(i, k)| (*k, i as u32))
            .collect();
        let next: Vec<u32> = keys.iter().map(|k| rank[k]).collect();
        let new_classes = sorted.len();
        color = next;
        if new_classes == classes {
            return color;
        }
        classes = new_classes;
    }
}

struct Search<'a> {
    s: &'a Structure,
    color: Vec<u32>,
    cells: Vec<u32>,
    blocks: Vec<Vec<(usize, Vec<usize>)>>,
    offsets: Vec<usize>,
    twin_rep: Vec<usize>,
    best: Option<(Vec<bool>, Vec<usize>)>,
}

impl<'a> Search<'a> {
    fn dfs(&mut self, d: usize, order: &mut Vec<usize>, used: &mut Vec<bool>, bits: &mut Vec<bool>, less: bool) {
        let n = self.s.size();
        if d == n {
            if less || self.best.is_none() {
                self.best = Some((bits.clone(), order.clone()));
            }
            return;
        }
        let mut tried_reps: Vec<usize> = Vec::new();
        for v in 0..n {
            if used[v] || self.color[v] != self.cells[d] {
                continue;
            }
            let rep = self.twin_rep[v];
            if tried_reps.contains(&rep) {
                continue;
            }
            tried_reps.push(rep);
            order.push(v);
            let start = bits.len();
            let mut img = Vec::new();
            for (sym, t) in &self.blocks[d] {
                img.clear();
                img.extend(t.iter().map(|&x| order[x]));
                bits.push(self.s.holds(*sym, &img));
            }
            let mut now_less = less;
            let mut prune = false;
            if !less {
                if let Some((best, _)) = &self.best {
                    let off = self.offsets[d];
                    for (i, &b) in bits[start..].iter().enumerate() {
                        let c = best[off + i];
                        if b != c {
                            if b & !c {
                                prune = true;
                            } else {
                                now_less = true;
                            }
                            break;
                        }
                    }
                }
            }
            if !prune {
                used[v] = true;
                self.dfs(d + 1, order, used, bits, now_less);
                used[v] = false;
            }
            bits.truncate(start);
            order.pop();
        }
    }
}

/// Two vertices are twins when swapping them is an automorphism.
fn twin_representatives(s: &Structure) -> Vec<usize> {
    let n = s.size();
    let mut rep: Vec<usize> = (0..n).collect();
    let mut img = Vec::new();
    for u in 0..n {
        if rep[u] != u {
            continue;
        }
        for w in u + 1..n {
            if rep[w] != w {
                continue;
            }
            let swap = |x: usize| {
                if x == u {
                    w
                } else if x == w {
                    u
                } else {
                    x
                }
            };
            let ok = (0..s.sig().len()).all(|sym| {
                s.tuples(sym).iter().all(|t| {
                    img.clear();
                    img.extend(t.iter().map(|&x| swap(x)));
                    s.holds(sym, &img)
                })
            });
            if ok {
                rep[w] = u;
            }
        }
    }
    rep
}

/// Minimum code over colour-respecting relabelings.
///
/// Position `p` of the canonical order must be filled by a vertex whose
/// refined colour is the `p`-th smallest. The code is the size (4 bytes,
/// big-endian) followed by the relation bits in blocks: block `d` lists,
/// symbol by symbol, every tuple over positions `0..=d` with largest entry
/// `d` in lexicographic order. Branches whose partial code already exceeds
/// the best are cut, and interchangeable (twin) vertices are tried once.
pub fn canonical_form(s: &Structure) -> CanonicalCode {
    let n = s.size();
    let color = refine_colors(s);
    let mut cells = color.clone();
    cells.sort_unstable();
    let mut blocks = vec![Vec::new(); n];
    for sym in 0..s.sig().len() {
        for t in all_tuples(n, s.sig().arity(sym)) {
            let m = *t.iter().max().unwrap();
            blocks[m].push((sym, t));
        }
    }
    let mut offsets = Vec::with_capacity(n);
    let mut acc = 0;
    for b in &blocks {
        offsets.push(acc);
        acc += b.len();
    }
    let mut search = Search {
        s,
        color,
        cells,
        blocks,
        offsets,
        twin_rep: twin_representatives(s),
        best: None,
    };
    search.dfs(0, &mut Vec::new(), &mut vec![false; n], &mut Vec::new(), false);
    let (bits, order) = search.best.unwrap_or_default();
    let mut code = (n as u32).to_be_bytes().to_vec();
    for chunk in bits.chunks(8) {
        let mut byte = 0u8;
        for (i, &b) in chunk.iter().enumerate() {
            if b {
                byte |= 0x80 >> i;
            }
        }
        code.push(byte);
    }
    let mut relabeling = vec![0; n];
    for (p, &v) in order.iter().enumerate() {
        relabeling[v] = p;
    }
    CanonicalCode { code, relabeling }
}

/// The canonical representative of the isomorphism type of `s`.
pub fn canonical_structure(s: &Structure) -> Structure {
    s.relabel(&canonical_form(s).relabeling)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::embedding::enumerate_embeddings;
    use crate::structures::named::*;

    #[test]
    fn relabeled_path_has_same_code() {
        let a = path(3);
        let b = graph(3, &[(1, 0), (0, 2)]);
        assert_eq!(canonical_form(&a).code, canonical_form(&b).code);
        assert_ne!(
            canonical_form(&complete_graph(2)).code,
            canonical_form(&empty_graph(2)).code
        );
    }

    #[test]
    fn canonical_structure_is_isomorphic_image() {
        let c = cycle(6);
        let cf = canonical_form(&c);
        let rep = c.relabel(&cf.relabeling);
        assert_eq!(canonical_form(&rep).code, cf.code);
        assert!(!enumerate_embeddings(&c, &rep).unwrap().is_empty());
    }

    /// Independent oracle: iso-dedup by explicit bijection search.
    #[test]
    fn four_vertex_graphs_have_eleven_codes() {
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let mut codes = std::collections::BTreeSet::new();
        let mut reps: Vec<Structure> = Vec::new();
        for mask in 0u32..64 {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let g = graph(4, &edges);
            codes.insert(canonical_form(&g).code);
            if !reps.iter().any(|r| brute_iso(r, &g)) {
                reps.push(g);
            }
        }
        assert_eq!(reps.len(), 11);
        assert_eq!(codes.len(), 11);
    }

    fn brute_iso(a: &Structure, b: &Structure) -> bool {
        permutations(a.size()).iter().any(|p| a.relabel(p) == *b)
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn symmetric_structures_are_fast() {
        let s = pure_set(12);
        let cf = canonical_form(&s);
        assert_eq!(cf.code, 12u32.to_be_bytes().to_vec());
        canonical_form(&complete_graph(12));
    }

    #[test]
    fn refinement_splits_linear_orders() {
        let c = refine_colors(&linear_order(5));
        let mut d = c.clone();
        d.sort();
        d.dedup();
        assert_eq!(d.len(), 5);
    }
}
