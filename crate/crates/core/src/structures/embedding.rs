use super::canonical::canonical_form;
use super::structure::{all_tuples, Structure};
use crate::error::{Error, Result};

/// An embedding is stored as its image tuple: `map[i]` is the image of
/// vertex `i` (0-based).
pub type Map = Vec<usize>;

/// `g ∘ f`: first `f`, then `g`.
pub fn compose(g: &[usize], f: &[usize]) -> Map {
    f.iter().map(|&x| g[x]).collect()
}

pub fn invert(perm: &[usize]) -> Map {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// Precomputed checks for embedding a fixed domain structure.
///
/// Vertex `i` of the domain is placed at depth `i`; at that depth every
/// tuple whose largest entry is `i` is compared with its image. Targets are
/// tried in increasing order, so solutions come out lexicographically by
/// image tuple.
#[derive(Debug, Clone)]
pub struct Plan {
    size: usize,
    checks: Vec<Vec<(usize, Vec<usize>, bool)>>,
}

impl Plan {
    pub fn new(a: &Structure) -> Self {
        let n = a.size();
        let mut checks = vec![Vec::new(); n];
        for sym in 0..a.sig().len() {
            for t in all_tuples(n, a.sig().arity(sym)) {
                let m = *t.iter().max().unwrap();
                let v = a.holds(sym, &t);
                checks[m].push((sym, t, v));
            }
        }
        Plan { size: n, checks }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Visit embeddings into `b` that agree with `pins` (a `Some(t)` fixes
    /// the image of that position) and only use targets where `allowed` is
    /// true. The visitor returns `false` to stop early. The caller is
    /// responsible for signatures matching.
    pub fn run(
        &self,
        b: &Structure,
        pins: Option<&[Option<usize>]>,
        allowed: Option<&[bool]>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) {
        if self.size > b.size() {
            return;
        }
        let mut st = State {
            map: vec![usize::MAX; self.size],
            used: vec![false; b.size()],
            img: Vec::with_capacity(8),
        };
        self.step(b, 0, &mut st, pins, allowed, visit);
    }

    fn step(
        &self,
        b: &Structure,
        i: usize,
        st: &mut State,
        pins: Option<&[Option<usize>]>,
        allowed: Option<&[bool]>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if i == self.size {
            return visit(&st.map);
        }
        let (lo, hi) = match pins.and_then(|p| p[i]) {
            Some(t) => (t, (t + 1).min(b.size())),
            None => (0, b.size()),
        };
        for t in lo..hi {
            if st.used[t] || allowed.is_some_and(|al| !al[t]) {
                continue;
            }
            st.map[i] = t;
            let ok = self.checks[i].iter().all(|(sym, tup, v)| {
                st.img.clear();
                st.img.extend(tup.iter().map(|&x| st.map[x]));
                b.holds(*sym, &st.img) == *v
            });
            if !ok {
                continue;
            }
            st.used[t] = true;
            let go_on = self.step(b, i + 1, st, pins, allowed, visit);
            st.used[t] = false;
            if !go_on {
                return false;
            }
        }
        true
    }

    pub fn first(&self, b: &Structure, pins: Option<&[Option<usize>]>, allowed: Option<&[bool]>) -> Option<Map> {
        let mut out = None;
        self.run(b, pins, allowed, &mut |m| {
            out = Some(m.to_vec());
            false
        });
        out
    }
}

struct State {
    map: Vec<usize>,
    used: Vec<bool>,
    img: Vec<usize>,
}

/// Embedding search between two fixed structures.
pub struct EmbeddingSearch<'a> {
    b: &'a Structure,
    plan: Plan,
}

impl<'a> EmbeddingSearch<'a> {
    pub fn new(a: &Structure, b: &'a Structure) -> Result<Self> {
        a.check_same_sig(b)?;
        Ok(EmbeddingSearch { b, plan: Plan::new(a) })
    }

    pub fn run(
        &self,
        pins: Option<&[Option<usize>]>,
        allowed: Option<&[bool]>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) {
        self.plan.run(self.b, pins, allowed, visit)
    }

    pub fn all(&self) -> Vec<Map> {
        let mut out = Vec::new();
        self.run(None, None, &mut |m| {
            out.push(m.to_vec());
            true
        });
        out
    }

    pub fn first_with(&self, pins: Option<&[Option<usize>]>, allowed: Option<&[bool]>) -> Option<Map> {
        self.plan.first(self.b, pins, allowed)
    }
}

/// Checks injectivity plus preservation and reflection of every relation.
pub fn is_embedding(map: &[usize], a: &Structure, b: &Structure) -> Result<bool> {
    a.check_same_sig(b)?;
    if map.len() != a.size() {
        return Err(Error::OutOfRange(format!(
            "map has length {}, domain has size {}",
            map.len(),
            a.size()
        )));
    }
    if let Some(&x) = map.iter().find(|&&x| x >= b.size()) {
        return Err(Error::OutOfRange(format!(
            "image {} outside codomain of size {}",
            x + 1,
            b.size()
        )));
    }
    Ok(is_embedding_unchecked(map, a, b))
}

pub(crate) fn is_embedding_unchecked(map: &[usize], a: &Structure, b: &Structure) -> bool {
    let mut seen = vec![false; b.size()];
    for &x in map {
        if seen[x] {
            return false;
        }
        seen[x] = true;
    }
    let mut img = Vec::new();
    for sym in 0..a.sig().len() {
        for t in all_tuples(a.size(), a.sig().arity(sym)) {
            img.clear();
            img.extend(t.iter().map(|&x| map[x]));
            if a.holds(sym, &t) != b.holds(sym, &img) {
                return false;
            }
        }
    }
    true
}

/// Emb(A, B) in lexicographic order of image tuples.
pub fn enumerate_embeddings(a: &Structure, b: &Structure) -> Result<Vec<Map>> {
    Ok(EmbeddingSearch::new(a, b)?.all())
}

pub fn first_embedding(a: &Structure, b: &Structure) -> Result<Option<Map>> {
    Ok(EmbeddingSearch::new(a, b)?.first_with(None, None))
}

pub fn embeds(a: &Structure, b: &Structure) -> Result<bool> {
    Ok(first_embedding(a, b)?.is_some())
}

pub fn automorphisms(a: &Structure) -> Vec<Map> {
    EmbeddingSearch::new(a, a).expect("same signature").all()
}

pub fn is_isomorphic(a: &Structure, b: &Structure) -> Result<bool> {
    a.check_same_sig(b)?;
    Ok(a.size() == b.size() && canonical_form(a).code == canonical_form(b).code)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Vertex sets of `b` inducing a copy of `a`, found by comparing
/// canonical codes of induced substructures.
pub fn enumerate_copies(a: &Structure, b: &Structure) -> Result<Vec<Vec<usize>>> {
    a.check_same_sig(b)?;
    let target = canonical_form(a).code;
    let mut out = Vec::new();
    for s in subsets(b.size(), a.size()) {
        let sub = b.pull(&s);
        if canonical_form(&sub).code == target {
            out.push(s);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::named::*;

    #[test]
    fn is_embedding_examples() {
        let k3 = complete_graph(3);
        assert!(is_embedding(&[0, 1, 2], &k3, &k3).unwrap());
        assert!(!is_embedding(&[0, 1], &complete_graph(2), &empty_graph(2)).unwrap());
        assert!(is_embedding(&[0, 2], &empty_graph(2), &path(3)).unwrap());
        assert!(is_embedding(&[0, 3], &k3, &k3).is_err());
        assert!(is_embedding(&[0], &k3, &k3).is_err());
        assert!(is_embedding(&[0, 1], &linear_order(2), &k3).is_err());
    }

    #[test]
    fn enumeration_examples() {
        let e = enumerate_embeddings(&linear_order(2), &linear_order(4)).unwrap();
        assert_eq!(e.len(), 6);
        assert_eq!(e[0], vec![0, 1]);
        assert_eq!(e[5], vec![2, 3]);
        assert_eq!(enumerate_embeddings(&complete_graph(2), &complete_graph(3)).unwrap().len(), 6);
        assert_eq!(enumerate_embeddings(&complete_graph(2), &cycle(4)).unwrap().len(), 8);
        assert!(enumerate_embeddings(&linear_order(2), &cycle(4)).is_err());
    }

    #[test]
    fn empty_domain_has_one_embedding() {
        let e = enumerate_embeddings(&empty_graph(0), &cycle(5)).unwrap();
        assert_eq!(e, vec![Vec::<usize>::new()]);
    }

    #[test]
    fn copies_examples() {
        assert_eq!(enumerate_copies(&complete_graph(3), &complete_graph(4)).unwrap().len(), 4);
        assert_eq!(enumerate_copies(&complete_graph(2), &path(3)).unwrap().len(), 2);
        assert_eq!(enumerate_copies(&path(3), &complete_graph(3)).unwrap().len(), 0);
    }

    #[test]
    fn automorphism_examples() {
        assert_eq!(automorphisms(&linear_order(5)).len(), 1);
        assert_eq!(automorphisms(&complete_graph(3)).len(), 6);
        assert_eq!(automorphisms(&cycle(5)).len(), 10);
        assert_eq!(automorphisms(&pure_set(0)).len(), 1);
    }

    #[test]
    fn pinned_search() {
        let k2 = complete_graph(2);
        let c4 = cycle(4);
        let s = EmbeddingSearch::new(&k2, &c4).unwrap();
        let m = s.first_with(Some(&[Some(2), None]), None).unwrap();
        assert_eq!(m, vec![2, 1]);
        let allowed = [true, false, true, true];
        assert_eq!(s.first_with(Some(&[Some(2), None]), Some(&allowed)).unwrap(), vec![2, 3]);
    }

    #[test]
    fn subsets_lex() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(subsets(3, 3), vec![vec![0, 1, 2]]);
        assert!(subsets(2, 3).is_empty());
    }
}
