use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::complete::Completion;
use super::generate::copy_onto;
use super::spec::ClassSpec;
use crate::error::{Error, Result};
use crate::structures::{all_tuples, compose, is_embedding, subsets, Map, Structure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

/// A forbidden structure found inside a candidate, with its embedding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForbiddenHit {
    pub forbidden: Structure,
    pub map: Map,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApCertificate {
    pub verdict: Verdict,
    pub a: Structure,
    pub b: Structure,
    pub c: Structure,
    pub f: Map,
    pub g: Map,
    pub d: Option<Structure>,
    pub r: Option<Map>,
    pub s: Option<Map>,
    /// Number of identified point pairs in the witness.
    pub overlap: Option<usize>,
    /// Whether the witness needed tuples beyond those of B and C.
    pub added_tuples: Option<bool>,
    pub size_bound: usize,
    pub candidates_tried: usize,
    pub skipped_over_bound: usize,
    pub free_amalgam: Structure,
    pub free_violation: Option<ForbiddenHit>,
}

/// Identification pattern: pairs (C vertex, B vertex) glued together,
/// both outside the images of A.
type Pattern = Vec<(usize, usize)>;

struct Candidate {
    d: Structure,
    r: Map,
    s: Map,
    c_only_start: usize,
    b_only_start: usize,
}

fn build(a_len: usize, b: &Structure, c: &Structure, f: &[usize], g: &[usize], pat: &Pattern) -> Option<Candidate> {
    let c_rest: Vec<usize> = (0..c.size()).filter(|x| !g.contains(x)).collect();
    let b_rest: Vec<usize> = (0..b.size()).filter(|x| !f.contains(x)).collect();
    let c_plain: Vec<usize> = c_rest.iter().copied().filter(|x| !pat.iter().any(|p| p.0 == *x)).collect();
    let b_plain: Vec<usize> = b_rest.iter().copied().filter(|x| !pat.iter().any(|p| p.1 == *x)).collect();
    let size = a_len + c_plain.len() + pat.len() + b_plain.len();
    let mut s = vec![usize::MAX; c.size()];
    let mut r = vec![usize::MAX; b.size()];
    for i in 0..a_len {
        s[g[i]] = i;
        r[f[i]] = i;
    }
    let mut next = a_len;
    for &x in &c_plain {
        s[x] = next;
        next += 1;
    }
    for &(cx, bx) in pat {
        s[cx] = next;
        r[bx] = next;
        next += 1;
    }
    for &x in &b_plain {
        r[x] = next;
        next += 1;
    }
    let mut d = Structure::empty(b.sig().clone(), size);
    copy_onto(c, &s, &mut d);
    // B's tuples must agree with C's on the shared part
    let shared_limit = a_len + c_plain.len() + pat.len();
    let in_s = |x: usize| x < a_len || (x >= a_len + c_plain.len() && x < shared_limit);
    let mut img = Vec::new();
    for sym in 0..b.sig().len() {
        for t in all_tuples(b.size(), b.sig().arity(sym)) {
            img.clear();
            img.extend(t.iter().map(|&x| r[x]));
            let v = b.holds(sym, &t);
            if img.iter().all(|&x| in_s(x)) {
                if d.holds(sym, &img) != v {
                    return None;
                }
            } else if v {
                d.set(sym, &img, true);
            }
        }
    }
    Some(Candidate {
        d,
        r,
        s,
        c_only_start: a_len,
        b_only_start: a_len + c_plain.len() + pat.len(),
    })
}

/// Patterns in search order: empty first, then by decreasing overlap, each
/// size in lexicographic order of (C vertices, B images).
fn patterns(b_rest: &[usize], c_rest: &[usize]) -> Vec<Pattern> {
    let max = b_rest.len().min(c_rest.len());
    let mut out = vec![vec![]];
    for m in (1..=max).rev() {
        for cs in subsets(c_rest.len(), m) {
            let mut imgs = Vec::new();
            injections(m, b_rest.len(), &mut vec![], &mut imgs);
            for im in imgs {
                out.push(cs.iter().zip(&im).map(|(&ci, &bi)| (c_rest[ci], b_rest[bi])).collect());
            }
        }
    }
    out
}

fn injections(m: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == m {
        out.push(cur.clone());
        return;
    }
    for x in 0..n {
        if !cur.contains(&x) {
            cur.push(x);
            injections(m, n, cur, out);
            cur.pop();
        }
    }
}

/// Search for D with r: B → D, s: C → D and r∘f = s∘g, where D ranges over
/// candidates of size at most `size_bound`.
///
/// The free amalgam is tried first, then identifications of points outside
/// the images of A in decreasing overlap, all without added tuples; then
/// the same identifications again with added tuples in lexicographic order.
pub fn amalgamate(
    spec: &ClassSpec,
    a: &Structure,
    b: &Structure,
    c: &Structure,
    f: &[usize],
    g: &[usize],
    size_bound: usize,
) -> Result<ApCertificate> {
    amalgamate_seeded(spec, a, b, c, f, g, size_bound, None)
}

/// As [`amalgamate`]; with an rng, ties among equally ranked first-phase
/// witnesses (same overlap) are broken at random instead of taking the first.
#[allow(clippy::too_many_arguments)]
pub fn amalgamate_seeded(
    spec: &ClassSpec,
    a: &Structure,
    b: &Structure,
    c: &Structure,
    f: &[usize],
    g: &[usize],
    size_bound: usize,
    mut rng: Option<&mut ChaCha8Rng>,
) -> Result<ApCertificate> {
    for x in [a, b, c] {
        spec.check_sig(x)?;
    }
    if !is_embedding(f, a, b)? {
        return Err(Error::NotEmbedding("f is not an embedding of A into B".into()));
    }
    if !is_embedding(g, a, c)? {
        return Err(Error::NotEmbedding("g is not an embedding of A into C".into()));
    }
    let a_len = a.size();
    let b_rest: Vec<usize> = (0..b.size()).filter(|x| !f.contains(x)).collect();
    let c_rest: Vec<usize> = (0..c.size()).filter(|x| !g.contains(x)).collect();
    let pats = patterns(&b_rest, &c_rest);

    let free = build(a_len, b, c, f, g, &vec![]).expect("empty pattern is consistent");
    let free_violation = spec.forbidden_witness(&free.d).map(|(i, map)| ForbiddenHit {
        forbidden: spec.forbidden()[i].clone(),
        map,
    });
    let mut cert = ApCertificate {
        verdict: Verdict::Fails,
        a: a.clone(),
        b: b.clone(),
        c: c.clone(),
        f: f.to_vec(),
        g: g.to_vec(),
        d: None,
        r: None,
        s: None,
        overlap: None,
        added_tuples: None,
        size_bound,
        candidates_tried: 0,
        skipped_over_bound: 0,
        free_amalgam: free.d.clone(),
        free_violation,
    };
    let full = a_len + b_rest.len() + c_rest.len();
    let accept = |cert: &mut ApCertificate, cand: Candidate, overlap: usize, added: bool| {
        cert.verdict = Verdict::Holds;
        cert.d = Some(cand.d);
        cert.r = Some(cand.r);
        cert.s = Some(cand.s);
        cert.overlap = Some(overlap);
        cert.added_tuples = Some(added);
    };

    // phase 1: no added tuples
    let mut level: Option<usize> = None;
    let mut tied: Vec<Candidate> = Vec::new();
    for p in &pats {
        if let Some(m) = level {
            if p.len() != m {
                break;
            }
        }
        if full - p.len() > size_bound {
            continue;
        }
        let Some(cand) = build(a_len, b, c, f, g, p) else { continue };
        cert.candidates_tried += 1;
        if spec.forbidden_witness(&cand.d).is_none() {
            level = Some(p.len());
            tied.push(cand);
            if rng.is_none() || p.is_empty() {
                break;
            }
        }
    }
    if !tied.is_empty() {
        let pick = match rng.as_mut() {
            Some(r) if tied.len() > 1 => r.gen_range(0..tied.len()),
            _ => 0,
        };
        let m = level.unwrap();
        accept(&mut cert, tied.swap_remove(pick), m, false);
        return Ok(cert);
    }

    // phase 2: added tuples across the two sides
    for p in &pats {
        if full - p.len() > size_bound {
            cert.skipped_over_bound += 1;
            continue;
        }
        let Some(cand) = build(a_len, b, c, f, g, p) else { continue };
        cert.candidates_tried += 1;
        let (lo, hi) = (cand.c_only_start, cand.b_only_start);
        let n = cand.d.size();
        let c_region: Vec<bool> = (0..n).map(|x| x < hi).collect();
        let b_region: Vec<bool> = (0..n).map(|x| x < lo || x >= cand.b_only_start - p.len()).collect();
        let is_free = |_: usize, t: &[usize]| {
            t.iter().any(|&x| x >= lo && x < hi - p.len()) && t.iter().any(|&x| x >= hi)
        };
        let comp = Completion::new(spec, cand.d.clone(), &is_free, &[c_region, b_region]);
        if comp.free_count() == 0 {
            continue;
        }
        if let Some(d) = comp.first() {
            let cand = Candidate { d, ..cand };
            accept(&mut cert, cand, p.len(), true);
            return Ok(cert);
        }
    }
    if cert.skipped_over_bound > 0 {
        cert.verdict = Verdict::Inconclusive;
    }
    Ok(cert)
}

impl ApCertificate {
    /// Re-check the certificate with structure primitives only. A success
    /// must commute and land in the class; a failure must record the true
    /// free amalgam and, if one is listed, a real forbidden copy in it.
    pub fn verify(&self, spec: &ClassSpec) -> Result<bool> {
        if !is_embedding(&self.f, &self.a, &self.b)? || !is_embedding(&self.g, &self.a, &self.c)? {
            return Ok(false);
        }
        match self.verdict {
            Verdict::Holds => {
                let (Some(d), Some(r), Some(s)) = (&self.d, &self.r, &self.s) else {
                    return Ok(false);
                };
                Ok(is_embedding(r, &self.b, d)?
                    && is_embedding(s, &self.c, d)?
                    && compose(r, &self.f) == compose(s, &self.g)
                    && spec.is_member(d)?)
            }
            Verdict::Fails | Verdict::Inconclusive => {
                let free = build(self.a.size(), &self.b, &self.c, &self.f, &self.g, &vec![]).unwrap();
                if free.d != self.free_amalgam {
                    return Ok(false);
                }
                if let Some(hit) = &self.free_violation {
                    if !spec.forbidden().contains(&hit.forbidden) {
                        return Ok(false);
                    }
                    if !is_embedding(&hit.map, &hit.forbidden, &self.free_amalgam)? {
                        return Ok(false);
                    }
                }
                Ok(self.d.is_none())
            }
        }
    }

    /// Recompute from scratch and compare verdicts.
    pub fn replay(&self, spec: &ClassSpec) -> Result<bool> {
        let again = amalgamate(spec, &self.a, &self.b, &self.c, &self.f, &self.g, self.size_bound)?;
        Ok(again.verdict == self.verdict && again.d == self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::library;
    use crate::structures::named::*;

    #[test]
    fn graphs_over_a_point_take_the_free_amalgam() {
        let spec = library::graphs();
        let k1 = complete_graph(1);
        let k2 = complete_graph(2);
        let cert = amalgamate(&spec, &k1, &k2, &k2, &[0], &[0], 3).unwrap();
        assert_eq!(cert.verdict, Verdict::Holds);
        assert_eq!(cert.overlap, Some(0));
        let d = cert.d.clone().unwrap();
        assert_eq!(d.size(), 3);
        assert!(crate::structures::is_isomorphic(&d, &path(3)).unwrap());
        assert!(cert.verify(&spec).unwrap());
    }

    #[test]
    fn linear_orders_amalgamate_to_three_points() {
        let spec = library::linear_orders();
        let cert = amalgamate(&spec, &linear_order(1), &linear_order(2), &linear_order(2), &[0], &[1], 3).unwrap();
        assert_eq!(cert.verdict, Verdict::Holds);
        assert_eq!(cert.d.as_ref().unwrap().size(), 3);
        assert!(crate::structures::is_isomorphic(cert.d.as_ref().unwrap(), &linear_order(3)).unwrap());
        assert!(cert.verify(&spec).unwrap());
        assert!(cert.free_violation.is_some());
    }

    #[test]
    fn c3c5_triple_fails_with_induced_pentagon() {
        let spec = library::c3c5_free();
        let a = empty_graph(2);
        let b = path(3);
        let c = path(4);
        let cert = amalgamate(&spec, &a, &b, &c, &[0, 2], &[0, 3], 7).unwrap();
        assert_eq!(cert.verdict, Verdict::Fails);
        let hit = cert.free_violation.clone().unwrap();
        assert!(crate::structures::is_isomorphic(&hit.forbidden, &cycle(5)).unwrap());
        assert!(cert.verify(&spec).unwrap());
        assert!(cert.replay(&spec).unwrap());
    }

    #[test]
    fn bad_input_is_rejected() {
        let spec = library::graphs();
        let r = amalgamate(&spec, &complete_graph(2), &complete_graph(2), &empty_graph(2), &[0, 1], &[0, 1], 3);
        assert!(matches!(r, Err(Error::NotEmbedding(_))));
    }

    #[test]
    fn small_bound_is_inconclusive() {
        let spec = library::linear_orders();
        let cert = amalgamate(&spec, &linear_order(1), &linear_order(2), &linear_order(2), &[0], &[1], 2).unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);
    }
}
