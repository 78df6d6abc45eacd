use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::flim::{inclusion_pairs, FlimPrefix};
use crate::structures::{canonical_form, subsets, Map, Plan, Structure};

const MAX_LISTED: usize = 50;

/// A map g: B → top (restricted to the vertices below `source_size`) that
/// has no extension to C.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionFailure {
    pub pair: usize,
    pub c: Structure,
    pub subset: Vec<usize>,
    pub g: Map,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensionReport {
    pub s: usize,
    pub top_size: usize,
    pub source_size: usize,
    pub pairs: usize,
    pub instances: usize,
    pub extended: usize,
    pub coverage: f64,
    pub failures_total: usize,
    pub failures: Vec<ExtensionFailure>,
}

impl ExtensionReport {
    pub fn complete(&self) -> bool {
        self.extended == self.instances
    }
}

/// Does g: B → top extend to some h: C → top, where B is C on `subset`?
pub fn extends(top: &Structure, c: &Structure, subset: &[usize], g: &[usize]) -> bool {
    let mut pins = vec![None; c.size()];
    for (i, &x) in subset.iter().enumerate() {
        pins[x] = Some(g[i]);
    }
    Plan::new(c).first(top, Some(&pins), None).is_some()
}

/// For every inclusion pair B ⊆ C with |C| ≤ `s` and every embedding of B
/// into the top, whether it extends to C inside the top.
pub fn check_extension_property(prefix: &FlimPrefix, s: usize) -> ExtensionReport {
    check_extension_from(prefix, s, prefix.top.size())
}

/// As [`check_extension_property`], but only embeddings of B into the first
/// `source_size` vertices are asked to extend (into the whole top). With
/// `source_size` an earlier chain level this is what the construction
/// guarantees once every pair has been scheduled after that level.
pub fn check_extension_from(prefix: &FlimPrefix, s: usize, source_size: usize) -> ExtensionReport {
    let top = &prefix.top;
    let source_size = source_size.min(top.size());
    let allowed: Vec<bool> = (0..top.size()).map(|v| v < source_size).collect();
    let pairs = inclusion_pairs(&prefix.spec, s);
    let per_pair: Vec<(usize, usize, Vec<ExtensionFailure>)> = pairs
        .par_iter()
        .map(|p| {
            let b = p.b();
            let mut gs = Vec::new();
            Plan::new(&b).run(top, None, Some(&allowed), &mut |m| {
                gs.push(m.to_vec());
                true
            });
            let mut ok = 0;
            let mut bad = Vec::new();
            for g in gs.iter() {
                if extends(top, &p.c, &p.subset, g) {
                    ok += 1;
                } else {
                    bad.push(ExtensionFailure { pair: p.id, c: p.c.clone(), subset: p.subset.clone(), g: g.clone() });
                }
            }
            (gs.len(), ok, bad)
        })
        .collect();
    let instances: usize = per_pair.iter().map(|x| x.0).sum();
    let extended: usize = per_pair.iter().map(|x| x.1).sum();
    let all_bad: Vec<ExtensionFailure> = per_pair.into_iter().flat_map(|x| x.2).collect();
    ExtensionReport {
        s,
        top_size: top.size(),
        source_size,
        pairs: pairs.len(),
        instances,
        extended,
        coverage: ratio(extended, instances),
        failures_total: all_bad.len(),
        failures: all_bad.into_iter().take(MAX_LISTED).collect(),
    }
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        1.0
    } else {
        a as f64 / b as f64
    }
}

/// A partial isomorphism of the top given by `domain[i] ↦ range[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialIso {
    pub domain: Vec<usize>,
    pub range: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogeneityFailure {
    pub iso: PartialIso,
    /// Number of forth/back steps that succeeded before getting stuck.
    pub reached: usize,
    /// The vertex that could not be matched.
    pub stuck_on: usize,
    pub forth: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomogeneityReport {
    pub s: usize,
    pub depth: usize,
    pub top_size: usize,
    pub partial_isos: usize,
    pub successes: usize,
    pub coverage: f64,
    pub max_depth_reached: usize,
    pub failures_total: usize,
    pub failures: Vec<HomogeneityFailure>,
    /// First forth steps agree with the corresponding one-point extension
    /// queries answered through canonical inclusion pairs.
    pub one_point_consistent: bool,
}

/// Find y with `dom ∪ {x} ↦ rng ∪ {y}` a partial isomorphism.
fn match_point(top: &Structure, dom: &[usize], rng: &[usize], x: usize) -> Option<usize> {
    let mut keys = dom.to_vec();
    keys.push(x);
    let a = top.pull(&keys);
    let mut pins: Vec<Option<usize>> = rng.iter().map(|&y| Some(y)).collect();
    pins.push(None);
    Plan::new(&a).first(top, Some(&pins), None).map(|m| m[dom.len()])
}

/// Forth-and-back from `iso` for `depth` steps, each step matching the
/// least vertex missing from the domain (forth) or the range (back).
/// Returns the number of completed steps and the failure point if any.
fn back_and_forth(top: &Structure, iso: &PartialIso, depth: usize) -> (usize, Option<(usize, bool)>) {
    let mut dom = iso.domain.clone();
    let mut rng = iso.range.clone();
    for step in 0..depth {
        let forth = step % 2 == 0;
        let (from, to) = if forth { (&dom, &rng) } else { (&rng, &dom) };
        let Some(x) = (0..top.size()).find(|v| !from.contains(v)) else {
            return (depth, None);
        };
        match match_point(top, from, to, x) {
            Some(y) => {
                if forth {
                    dom.push(x);
                    rng.push(y);
                } else {
                    rng.push(x);
                    dom.push(y);
                }
            }
            None => return (step, Some((x, forth))),
        }
    }
    (depth, None)
}

/// Bounded forth-and-back for every partial isomorphism between substructures
/// of the top of size at most `s`.
pub fn check_ultrahomogeneity(prefix: &FlimPrefix, s: usize, depth: usize) -> HomogeneityReport {
    let top = &prefix.top;
    let mut isos = Vec::new();
    for k in 1..=s.min(top.size()) {
        for x in subsets(top.size(), k) {
            let a = top.pull(&x);
            Plan::new(&a).run(top, None, None, &mut |m| {
                isos.push(PartialIso { domain: x.clone(), range: m.to_vec() });
                true
            });
        }
    }
    let one_point = inclusion_pairs(&prefix.spec, s + 1);
    let lookup: std::collections::HashMap<(Vec<u8>, Vec<usize>), usize> = one_point
        .iter()
        .filter(|p| p.subset.len() + 1 == p.c.size())
        .map(|p| ((canonical_form(&p.c).code, p.subset.clone()), p.id))
        .collect();
    let outcomes: Vec<((usize, Option<(usize, bool)>), bool)> = isos
        .par_iter()
        .map(|iso| {
            let r = back_and_forth(top, iso, depth);
            let consistent = depth == 0 || first_step_consistent(top, iso, &r, &one_point, &lookup);
            (r, consistent)
        })
        .collect();
    let mut successes = 0;
    let mut max_reached = 0;
    let mut failures = Vec::new();
    let mut consistent = true;
    for (iso, ((reached, fail), ok)) in isos.iter().zip(outcomes) {
        consistent &= ok;
        max_reached = max_reached.max(reached);
        match fail {
            None => successes += 1,
            Some((stuck_on, forth)) => failures.push(HomogeneityFailure { iso: iso.clone(), reached, stuck_on, forth }),
        }
    }
    HomogeneityReport {
        s,
        depth,
        top_size: top.size(),
        partial_isos: isos.len(),
        successes,
        coverage: ratio(successes, isos.len()),
        max_depth_reached: max_reached,
        failures_total: failures.len(),
        failures: failures.into_iter().take(MAX_LISTED).collect(),
        one_point_consistent: consistent,
    }
}

/// Re-answer the first forth step as an extension query: B = the range,
/// C = the domain plus the new point, in canonical labelling.
fn first_step_consistent(
    top: &Structure,
    iso: &PartialIso,
    result: &(usize, Option<(usize, bool)>),
    pairs: &[super::flim::InclusionPair],
    lookup: &std::collections::HashMap<(Vec<u8>, Vec<usize>), usize>,
) -> bool {
    let Some(x) = (0..top.size()).find(|v| !iso.domain.contains(v)) else {
        return true;
    };
    let mut keys = iso.domain.clone();
    keys.push(x);
    let c = top.pull(&keys);
    let cf = canonical_form(&c);
    let mut subset: Vec<usize> = (0..iso.domain.len()).map(|i| cf.relabeling[i]).collect();
    let mut g_by_pos: Vec<(usize, usize)> = subset.iter().copied().zip(iso.range.iter().copied()).collect();
    subset.sort_unstable();
    g_by_pos.sort_unstable();
    let g: Vec<usize> = g_by_pos.into_iter().map(|(_, y)| y).collect();
    let canon = c.relabel(&cf.relabeling);
    // the pair list holds one subset per orbit: move ours to it
    let auts = crate::structures::automorphisms(&canon);
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    for al in &auts {
        let mut img: Vec<(usize, usize)> = subset.iter().map(|&v| al[v]).zip(g.iter().copied()).collect();
        img.sort_unstable();
        let sub: Vec<usize> = img.iter().map(|p| p.0).collect();
        let gg: Vec<usize> = img.iter().map(|p| p.1).collect();
        if best.as_ref().is_none_or(|b| sub < b.0) {
            best = Some((sub, gg));
        }
    }
    let (sub, gg) = best.unwrap();
    let Some(&id) = lookup.get(&(cf.code, sub.clone())) else {
        return false;
    };
    let expected = extends(top, &pairs[id].c, &pairs[id].subset, &gg);
    let got = result.0 >= 1 || result.1.is_none();
    expected == got
}
