//! Exact arrow checking by search for a bad coloring.
//!
//! Items (embeddings or copies of A in C) are colored in enumeration order.
//! Colors are kept in first-occurrence normal form: item `i` may use at most
//! one color beyond those already used. A constraint is the item set
//! f∘Emb(A,B) of one f ∈ Emb(B,C); it is checked as soon as its last item is
//! colored and the branch dies if it sees at most `k` colors. The first leaf
//! reached is the lexicographically least bad coloring in normal form.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::coloring::{fingerprint_maps, Coloring, EmbeddingIndex};
use crate::classes::{generate_up_to, ClassSpec};
use crate::error::{Error, Result};
use crate::structures::{enumerate_copies, enumerate_embeddings, Map, Structure};

/// Frontier size aimed for before the search is split across workers.
const FRONTIER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowQuery {
    pub c: Structure,
    pub b: Structure,
    pub a: Structure,
    pub r: usize,
    pub k: usize,
    /// Color copies of A instead of embeddings.
    pub structural: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArrowVerdict {
    Holds,
    Fails,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowResult {
    pub query: ArrowQuery,
    pub verdict: ArrowVerdict,
    /// On failure, a bad coloring: entry `i` colors item `i`.
    pub coloring: Option<Vec<usize>>,
    pub items: usize,
    pub constraints: usize,
    pub nodes: u64,
    pub prunings: u64,
    /// Hash of the item enumeration the coloring is indexed by.
    pub fingerprint: String,
}

/// The colored items and the constraint sets of one query.
#[derive(Debug, Clone)]
pub struct Instance {
    pub items: Vec<Map>,
    pub constraints: Vec<Vec<usize>>,
    pub r: usize,
    pub k: usize,
    by_last: Vec<Vec<usize>>,
}

impl Instance {
    fn from_parts(items: Vec<Map>, constraints: BTreeSet<Vec<usize>>, r: usize, k: usize) -> Self {
        let constraints: Vec<Vec<usize>> = constraints.into_iter().collect();
        let mut by_last = vec![Vec::new(); items.len()];
        for (ci, c) in constraints.iter().enumerate() {
            if let Some(&last) = c.last() {
                by_last[last].push(ci);
            }
        }
        Instance { items, constraints, r, k, by_last }
    }

    pub fn fingerprint(&self) -> String {
        fingerprint_maps(&self.items)
    }

    /// A constraint whose items use at most `k` colors, if any.
    pub fn good_constraint(&self, colors: &[usize]) -> Option<usize> {
        (0..self.constraints.len()).find(|&ci| self.distinct(ci, colors) <= self.k)
    }

    fn distinct(&self, ci: usize, colors: &[usize]) -> usize {
        let mut mask = 0u128;
        for &i in &self.constraints[ci] {
            mask |= 1 << colors[i];
        }
        mask.count_ones() as usize
    }
}

fn check_query(q: &ArrowQuery) -> Result<()> {
    q.a.check_same_sig(&q.b)?;
    q.a.check_same_sig(&q.c)?;
    if q.k == 0 {
        return Err(Error::OutOfRange("k must be at least 1".into()));
    }
    if q.r <= q.k {
        return Err(Error::TriviallyHolds(format!(
            "r = {} ≤ k = {}: every coloring already uses at most k colors",
            q.r, q.k
        )));
    }
    if q.r > 127 {
        return Err(Error::OutOfRange("at most 127 colors are supported".into()));
    }
    Ok(())
}

/// Build the search instance for a query.
pub fn instance(q: &ArrowQuery) -> Result<Instance> {
    check_query(q)?;
    if q.structural {
        let items = enumerate_copies(&q.a, &q.c)?;
        if items.is_empty() {
            return Err(Error::EmptyDomain("C has no copy of A".into()));
        }
        let pos: std::collections::HashMap<&[usize], usize> =
            items.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
        let mut cons = BTreeSet::new();
        for bc in enumerate_copies(&q.b, &q.c)? {
            let inside: Vec<usize> = enumerate_copies(&q.a, &q.c.pull(&bc))?
                .iter()
                .map(|s| {
                    let img: Vec<usize> = s.iter().map(|&x| bc[x]).collect();
                    pos[img.as_slice()]
                })
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            cons.insert(inside);
        }
        Ok(Instance::from_parts(items, cons, q.r, q.k))
    } else {
        let idx = EmbeddingIndex::new(&q.a, &q.c)?;
        if idx.is_empty() {
            return Err(Error::EmptyDomain("A has no embedding into C".into()));
        }
        let inner = enumerate_embeddings(&q.a, &q.b)?;
        let mut cons = BTreeSet::new();
        for f in enumerate_embeddings(&q.b, &q.c)? {
            let set: BTreeSet<usize> = inner
                .iter()
                .map(|e| idx.index_of(&e.iter().map(|&x| f[x]).collect::<Vec<_>>()).expect("composite is an embedding"))
                .collect();
            cons.insert(set.into_iter().collect());
        }
        Ok(Instance::from_parts(idx.embs, cons, q.r, q.k))
    }
}

#[derive(Default, Clone, Copy)]
struct Stats {
    nodes: u64,
    prunings: u64,
}

struct Dfs<'a> {
    inst: &'a Instance,
    colors: Vec<usize>,
    stats: Stats,
    cancel: Option<(&'a AtomicUsize, usize)>,
}

impl Dfs<'_> {
    /// Colors `0..=used` allowed at item `i` (0-based colors here).
    fn go(&mut self, i: usize, used: usize) -> bool {
        if i == self.inst.items.len() {
            return true;
        }
        if let Some((best, me)) = self.cancel {
            if best.load(Ordering::Relaxed) < me {
                return false;
            }
        }
        let top = (used + 1).min(self.inst.r);
        for col in 0..top {
            self.stats.nodes += 1;
            self.colors[i] = col;
            if self.inst.by_last[i].iter().any(|&ci| self.inst.distinct(ci, &self.colors) <= self.inst.k) {
                self.stats.prunings += 1;
                continue;
            }
            if self.go(i + 1, used.max(col + 1)) {
                return true;
            }
        }
        false
    }
}

/// Prefixes of length `depth` that survive pruning, in lexicographic order.
fn frontier(inst: &Instance, stats: &mut Stats) -> (usize, Vec<(Vec<usize>, usize)>) {
    let mut level = vec![(Vec::new(), 0usize)];
    let mut depth = 0;
    let mut scratch = vec![0; inst.items.len()];
    while depth < inst.items.len() && level.len() < FRONTIER && !level.is_empty() {
        let mut next = Vec::new();
        for (prefix, used) in &level {
            scratch[..depth].copy_from_slice(prefix);
            for col in 0..(used + 1).min(inst.r) {
                stats.nodes += 1;
                scratch[depth] = col;
                if inst.by_last[depth].iter().any(|&ci| inst.distinct(ci, &scratch) <= inst.k) {
                    stats.prunings += 1;
                    continue;
                }
                let mut p = prefix.clone();
                p.push(col);
                next.push((p, (*used).max(col + 1)));
            }
        }
        level = next;
        depth += 1;
    }
    (depth, level)
}

/// Search for the least bad coloring (0-based colors).
fn search(inst: &Instance) -> (Option<Vec<usize>>, Stats) {
    let mut stats = Stats::default();
    let (depth, roots) = frontier(inst, &mut stats);
    let best = AtomicUsize::new(usize::MAX);
    let outcomes: Vec<Option<(Stats, Option<Vec<usize>>)>> = roots
        .par_iter()
        .enumerate()
        .map(|(ri, (prefix, used))| {
            if best.load(Ordering::Relaxed) < ri {
                return None;
            }
            let mut colors = vec![0; inst.items.len()];
            colors[..depth].copy_from_slice(prefix);
            let mut dfs = Dfs { inst, colors, stats: Stats::default(), cancel: Some((&best, ri)) };
            let found = dfs.go(depth, *used);
            if found {
                best.fetch_min(ri, Ordering::Relaxed);
                Some((dfs.stats, Some(dfs.colors)))
            } else {
                Some((dfs.stats, None))
            }
        })
        .collect();
    for o in outcomes {
        let (s, sol) = o.expect("subtrees before the first solution are never cancelled");
        stats.nodes += s.nodes;
        stats.prunings += s.prunings;
        if sol.is_some() {
            return (sol, stats);
        }
    }
    (None, stats)
}

fn run(q: ArrowQuery) -> Result<ArrowResult> {
    let inst = instance(&q)?;
    let (sol, stats) = search(&inst);
    Ok(ArrowResult {
        verdict: if sol.is_some() { ArrowVerdict::Fails } else { ArrowVerdict::Holds },
        coloring: sol.map(|c| c.into_iter().map(|x| x + 1).collect()),
        items: inst.items.len(),
        constraints: inst.constraints.len(),
        nodes: stats.nodes,
        prunings: stats.prunings,
        fingerprint: inst.fingerprint(),
        query: q,
    })
}

/// Does every `r`-coloring of Emb(A, C) leave some f ∈ Emb(B, C) with
/// f∘Emb(A, B) using at most `k` colors?
pub fn arrow_check(c: &Structure, b: &Structure, a: &Structure, r: usize, k: usize) -> Result<ArrowResult> {
    run(ArrowQuery { c: c.clone(), b: b.clone(), a: a.clone(), r, k, structural: false })
}

/// As [`arrow_check`] with copies of A in C colored instead of embeddings.
pub fn structural_arrow_check(c: &Structure, b: &Structure, a: &Structure, r: usize, k: usize) -> Result<ArrowResult> {
    run(ArrowQuery { c: c.clone(), b: b.clone(), a: a.clone(), r, k, structural: true })
}

impl ArrowResult {
    /// Failing results: the coloring is checked against every constraint.
    /// Holding results: the search is run again.
    pub fn verify(&self) -> Result<bool> {
        let inst = instance(&self.query)?;
        if inst.fingerprint() != self.fingerprint || inst.items.len() != self.items {
            return Ok(false);
        }
        match self.verdict {
            ArrowVerdict::Fails => {
                let Some(col) = &self.coloring else { return Ok(false) };
                if col.len() != inst.items.len() || col.iter().any(|&x| x == 0 || x > inst.r) {
                    return Ok(false);
                }
                let zero: Vec<usize> = col.iter().map(|x| x - 1).collect();
                Ok(inst.good_constraint(&zero).is_none())
            }
            ArrowVerdict::Holds => Ok(self.coloring.is_none() && search(&inst).0.is_none()),
        }
    }

    /// The bad coloring as a [`Coloring`] of Emb(A, C).
    pub fn bad_coloring(&self) -> Option<Coloring> {
        if self.query.structural {
            return None;
        }
        let col = self.coloring.as_ref()?;
        Some(Coloring {
            a: self.query.a.clone(),
            c: self.query.c.clone(),
            r: self.query.r,
            colors: col.iter().map(|&x| Some(x)).collect(),
        })
    }
}

/// A structural coloring is constant on each orbit f∘Aut(A); read it as a
/// coloring of copies (by sorted image). Fails if it is not structural.
pub fn to_copy_coloring(g: &Coloring) -> Result<(Vec<Vec<usize>>, Vec<Option<usize>>)> {
    let copies = enumerate_copies(&g.a, &g.c)?;
    let idx = EmbeddingIndex::new(&g.a, &g.c)?;
    let mut colors: Vec<Option<Option<usize>>> = vec![None; copies.len()];
    for (i, e) in idx.embs.iter().enumerate() {
        let mut img = e.clone();
        img.sort_unstable();
        let ci = copies.binary_search(&img).expect("image of an embedding is a copy");
        match colors[ci] {
            None => colors[ci] = Some(g.colors[i]),
            Some(prev) if prev != g.colors[i] => {
                return Err(Error::OutOfRange(format!("coloring is not structural on copy {:?}", img)));
            }
            _ => {}
        }
    }
    Ok((copies, colors.into_iter().map(|c| c.flatten()).collect()))
}

/// γ'(f) = γ(im f) for a coloring of copies (indexed as in
/// `enumerate_copies`).
pub fn from_copy_coloring(a: &Structure, c: &Structure, r: usize, copy_colors: &[Option<usize>]) -> Result<Coloring> {
    let copies = enumerate_copies(a, c)?;
    if copies.len() != copy_colors.len() {
        return Err(Error::OutOfRange("one color per copy expected".into()));
    }
    let idx = EmbeddingIndex::new(a, c)?;
    Ok(Coloring::from_fn(&idx, r, &|e| {
        let mut img = e.to_vec();
        img.sort_unstable();
        copy_colors[copies.binary_search(&img).unwrap()]
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSearch {
    pub size_bound: usize,
    pub candidates_tried: usize,
    pub witness: Option<Structure>,
    pub result: Option<ArrowResult>,
}

/// The first class member C (by size, then canonical code) with
/// C ↪ (B)^A_{r,k}.
pub fn find_arrow_witness(
    spec: &ClassSpec,
    b: &Structure,
    a: &Structure,
    r: usize,
    k: usize,
    size_bound: usize,
) -> Result<WitnessSearch> {
    spec.check_sig(a)?;
    spec.check_sig(b)?;
    let mut tried = 0;
    for level in generate_up_to(spec, size_bound) {
        for c in level {
            tried += 1;
            match arrow_check(&c, b, a, r, k) {
                Ok(res) if res.verdict == ArrowVerdict::Holds => {
                    return Ok(WitnessSearch { size_bound, candidates_tried: tried, witness: Some(c), result: Some(res) });
                }
                Ok(_) | Err(Error::EmptyDomain(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(WitnessSearch { size_bound, candidates_tried: tried, witness: None, result: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::library;
    use crate::structures::{is_isomorphic, named::*};

    /// Brute force over all r^n colorings.
    fn oracle(q: &ArrowQuery) -> bool {
        let inst = instance(q).unwrap();
        let n = inst.items.len();
        let total = q.r.pow(n as u32);
        let mut col = vec![0; n];
        for code in 0..total {
            let mut x = code;
            for c in col.iter_mut() {
                *c = x % q.r;
                x /= q.r;
            }
            if inst.good_constraint(&col).is_none() {
                return false;
            }
        }
        true
    }

    #[test]
    fn ramsey_three_three() {
        let r6 = arrow_check(&linear_order(6), &linear_order(3), &linear_order(2), 2, 1).unwrap();
        assert_eq!(r6.verdict, ArrowVerdict::Holds);
        assert!(r6.verify().unwrap());
        let r5 = arrow_check(&linear_order(5), &linear_order(3), &linear_order(2), 2, 1).unwrap();
        assert_eq!(r5.verdict, ArrowVerdict::Fails);
        assert!(r5.verify().unwrap());
        // both color classes are 5-cycles on the points
        let col = r5.coloring.unwrap();
        let inst = instance(&r5.query).unwrap();
        for color in [1, 2] {
            let edges: Vec<(usize, usize)> = inst
                .items
                .iter()
                .zip(&col)
                .filter(|(_, &c)| c == color)
                .map(|(e, _)| (e[0], e[1]))
                .collect();
            assert!(is_isomorphic(&graph(5, &edges), &cycle(5)).unwrap());
        }
    }

    #[test]
    fn matches_brute_force() {
        let q = ArrowQuery { c: linear_order(5), b: linear_order(3), a: linear_order(2), r: 2, k: 1, structural: false };
        assert!(!oracle(&q));
        let q = ArrowQuery { c: complete_graph(3), b: complete_graph(2), a: complete_graph(1), r: 2, k: 1, structural: true };
        assert!(oracle(&q));
        assert_eq!(structural_arrow_check(&q.c, &q.b, &q.a, 2, 1).unwrap().verdict, ArrowVerdict::Holds);
        let p = structural_arrow_check(&path(3), &complete_graph(2), &complete_graph(1), 2, 1).unwrap();
        assert_eq!(p.verdict, ArrowVerdict::Fails);
        assert!(p.verify().unwrap());
    }

    #[test]
    fn degenerate_queries() {
        let lo = linear_order(3);
        assert!(matches!(arrow_check(&lo, &lo, &lo, 1, 1), Err(Error::TriviallyHolds(_))));
        assert!(matches!(arrow_check(&linear_order(1), &lo, &lo, 2, 1), Err(Error::EmptyDomain(_))));
        let none = arrow_check(&linear_order(2), &lo, &linear_order(1), 2, 1).unwrap();
        assert_eq!(none.verdict, ArrowVerdict::Fails);
        assert_eq!(none.coloring, Some(vec![1, 1]));
    }

    #[test]
    fn copy_translation_round_trips() {
        let a = complete_graph(2);
        let c = complete_graph(4);
        let colors: Vec<Option<usize>> = (0..6).map(|i| Some(i % 2 + 1)).collect();
        let g = from_copy_coloring(&a, &c, 2, &colors).unwrap();
        let (_, back) = to_copy_coloring(&g).unwrap();
        assert_eq!(back, colors);
        let mut bad = g.clone();
        bad.colors[0] = Some(if bad.colors[0] == Some(1) { 2 } else { 1 });
        assert!(to_copy_coloring(&bad).is_err());
    }

    #[test]
    fn witnesses() {
        let lo = library::linear_orders();
        let w = find_arrow_witness(&lo, &linear_order(3), &linear_order(2), 2, 1, 6).unwrap();
        assert_eq!(w.witness.unwrap().size(), 6);
        let w = find_arrow_witness(&lo, &linear_order(2), &linear_order(1), 2, 1, 3).unwrap();
        assert_eq!(w.witness.unwrap().size(), 3);
        let w = find_arrow_witness(&library::graphs(), &complete_graph(2), &complete_graph(1), 2, 1, 3).unwrap();
        assert!(is_isomorphic(&w.witness.unwrap(), &complete_graph(3)).unwrap());
    }
}
