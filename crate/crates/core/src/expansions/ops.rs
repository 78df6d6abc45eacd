use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::spec::ExpansionSpec;
use crate::classes::{flim_prefix, generate_up_to, Completion, FlimConfig};
use crate::error::{Error, Result};
use crate::ramsey::{degree_report, syndetic_at_horizon, DegreeConfig, DegreeReport, EmbeddingSet, PartialMap};
use crate::structures::{
    automorphisms, canonical_form, compose, embeds, enumerate_embeddings, is_embedding, subsets, Map, Plan, Structure,
};

/// All expansions of `a` on its own universe (labeled), in lexicographic
/// order of the new relations.
pub fn expansions_of(spec: &ExpansionSpec, a: &Structure) -> Result<Vec<Structure>> {
    spec.base.check_sig(a)?;
    spec.base.require_member(a, "cannot expand a non-member")?;
    let base = a.widen_to(spec.extended.sig())?;
    let first_new = spec.base.sig().len();
    let comp = Completion::new(&spec.extended, base, &|sym, _| sym >= first_new, &[]);
    let mut out = Vec::new();
    comp.run(&mut |s| {
        out.push(s.clone());
        true
    });
    Ok(out)
}

/// A(f, B*): the expansion of A making f an embedding into B*.
pub fn pullback_expansion(spec: &ExpansionSpec, f: &[usize], a: &Structure, b_star: &Structure) -> Result<Structure> {
    let b = spec.reduct(b_star)?;
    if !is_embedding(f, a, &b)? {
        return Err(Error::NotEmbedding("f is not an embedding into the reduct".into()));
    }
    let out = b_star.pull(f);
    debug_assert!(is_embedding(f, &out, b_star).unwrap());
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReasonableFailure {
    pub a: Structure,
    pub b: Structure,
    pub f: Map,
    pub a_star: Structure,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgeShadow {
    pub m: usize,
    pub prefix_size: usize,
    /// Isomorphism types of size `0..=m` in the reduct of the extended prefix.
    pub reduct_types: Vec<usize>,
    pub base_types: Vec<usize>,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReasonableReport {
    pub bound: usize,
    pub checked: usize,
    pub reasonable: bool,
    pub failure: Option<ReasonableFailure>,
    pub age_shadow: Option<AgeShadow>,
}

/// For A, B up to `bound`, f: A → B (up to automorphisms of B) and every
/// expansion A*, some expansion B* makes f an embedding of A* into B*.
pub fn check_reasonable(spec: &ExpansionSpec, bound: usize, shadow: Option<(&FlimConfig, usize)>) -> Result<ReasonableReport> {
    let reps: Vec<Structure> = generate_up_to(&spec.base, bound).into_iter().flatten().collect();
    let mut jobs = Vec::new();
    for a in &reps {
        for b in &reps {
            if a.size() > b.size() {
                continue;
            }
            let auts = automorphisms(b);
            for f in enumerate_embeddings(a, b)? {
                if auts.iter().all(|al| compose(al, &f) >= f) {
                    jobs.push((a.clone(), b.clone(), f));
                }
            }
        }
    }
    let results: Vec<Result<(usize, Option<ReasonableFailure>)>> = jobs
        .par_iter()
        .map(|(a, b, f)| {
            let pulled: HashSet<Structure> = expansions_of(spec, b)?.iter().map(|bs| bs.pull(f)).collect();
            let stars = expansions_of(spec, a)?;
            let miss = stars.iter().find(|s| !pulled.contains(*s)).cloned();
            Ok((
                stars.len(),
                miss.map(|a_star| ReasonableFailure { a: a.clone(), b: b.clone(), f: f.clone(), a_star }),
            ))
        })
        .collect();
    let mut checked = 0;
    let mut failure = None;
    for r in results {
        let (n, fail) = r?;
        checked += n;
        if failure.is_none() {
            failure = fail;
        }
    }
    let age_shadow = match shadow {
        Some((cfg, m)) => Some(age_shadow(spec, cfg, m)?),
        None => None,
    };
    Ok(ReasonableReport { bound, checked, reasonable: failure.is_none(), failure, age_shadow })
}

/// Compare the isomorphism types of small substructures of the reduct of an
/// extended-class prefix with the base class.
pub fn age_shadow(spec: &ExpansionSpec, cfg: &FlimConfig, m: usize) -> Result<AgeShadow> {
    let p = flim_prefix(&spec.extended, cfg)?;
    let top = spec.reduct(&p.top)?;
    let mut reduct_types = Vec::new();
    let mut base_types = Vec::new();
    let mut matches = true;
    let levels = generate_up_to(&spec.base, m);
    for (k, level) in levels.iter().enumerate() {
        let seen: BTreeSet<Vec<u8>> = subsets(top.size(), k).iter().map(|s| canonical_form(&top.pull(s)).code).collect();
        let want: BTreeSet<Vec<u8>> = level.iter().map(|s| canonical_form(s).code).collect();
        matches &= seen == want;
        reduct_types.push(seen.len());
        base_types.push(want.len());
    }
    Ok(AgeShadow { m, prefix_size: top.size(), reduct_types, base_types, matches })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecompactRow {
    pub a: Structure,
    pub labeled: usize,
    pub iso_types: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecompactReport {
    pub bound: usize,
    pub rows: Vec<PrecompactRow>,
}

pub fn check_precompact(spec: &ExpansionSpec, bound: usize) -> Result<PrecompactReport> {
    let reps: Vec<Structure> = generate_up_to(&spec.base, bound).into_iter().flatten().collect();
    let rows: Vec<Result<PrecompactRow>> = reps
        .par_iter()
        .map(|a| {
            let ex = expansions_of(spec, a)?;
            let types: BTreeSet<Vec<u8>> = ex.iter().map(|s| canonical_form(s).code).collect();
            Ok(PrecompactRow { a: a.clone(), labeled: ex.len(), iso_types: types.len() })
        })
        .collect();
    Ok(PrecompactReport { bound, rows: rows.into_iter().collect::<Result<_>>()? })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpPVerdict {
    Witness,
    Exhausted,
    Refuted,
}

/// Each new symbol is all-false or all-true. With this pattern, every base
/// member B has a member expansion that is constant, and A* is not
/// constant, so A* embeds in no such expansion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantRefutation {
    pub pattern: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpPRow {
    pub a_star: Structure,
    pub verdict: ExpPVerdict,
    pub witness: Option<Structure>,
    pub candidates: usize,
    pub refutation: Option<ConstantRefutation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpPReport {
    pub star_bound: usize,
    pub bound: usize,
    pub rows: Vec<ExpPRow>,
    pub holds_at_bound: bool,
}

fn constant_expansion(spec: &ExpansionSpec, b: &Structure, pattern: &[bool]) -> Result<Structure> {
    let mut s = b.widen_to(spec.extended.sig())?;
    for (i, sym) in spec.new_symbols().enumerate() {
        if pattern[i] {
            for t in crate::structures::all_tuples(b.size(), spec.extended.sig().arity(sym)) {
                s.set(sym, &t, true);
            }
        }
    }
    Ok(s)
}

fn is_constant(spec: &ExpansionSpec, s: &Structure, pattern: &[bool]) -> Result<bool> {
    let red = spec.reduct(s)?;
    Ok(constant_expansion(spec, &red, pattern)? == *s)
}

/// Patterns for which every constant expansion of a base member is a member
/// of the extended class.
fn safe_patterns(spec: &ExpansionSpec) -> Result<Vec<Vec<bool>>> {
    let n = spec.new_symbols().len();
    if n > 8 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for bits in 0..1u32 << n {
        let pattern: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
        let mut ok = true;
        for f in spec.extended.forbidden() {
            if is_constant(spec, f, &pattern)? && spec.base.is_member(&spec.reduct(f)?)? {
                ok = false;
                break;
            }
        }
        if ok {
            out.push(pattern);
        }
    }
    Ok(out)
}

/// Every expansion of `b` embeds `a_star`.
pub fn all_expansions_embed(spec: &ExpansionSpec, a_star: &Structure, b: &Structure) -> Result<bool> {
    for bs in expansions_of(spec, b)? {
        if !embeds(a_star, &bs)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For every extended member A* of size `1..=star_bound`, look for a base
/// member B of size at most `bound` all of whose expansions embed A*.
pub fn check_expp(spec: &ExpansionSpec, star_bound: usize, bound: usize) -> Result<ExpPReport> {
    let stars: Vec<Structure> = generate_up_to(&spec.extended, star_bound).into_iter().skip(1).flatten().collect();
    let bases: Vec<Structure> = generate_up_to(&spec.base, bound).into_iter().flatten().collect();
    let safe = safe_patterns(spec)?;
    let mut rows = Vec::new();
    for a_star in stars {
        let a = spec.reduct(&a_star)?;
        let cands: Vec<&Structure> = bases.iter().filter(|b| b.size() >= a.size() && embeds(&a, b).unwrap_or(false)).collect();
        let found: Vec<Result<bool>> = cands.par_iter().map(|b| all_expansions_embed(spec, &a_star, b)).collect();
        let mut witness = None;
        let mut tried = 0;
        for (b, ok) in cands.iter().zip(found) {
            tried += 1;
            if ok? {
                witness = Some((*b).clone());
                break;
            }
        }
        let mut refutation = None;
        if witness.is_none() {
            for p in &safe {
                if !is_constant(spec, &a_star, p)? {
                    refutation = Some(ConstantRefutation { pattern: p.clone() });
                    break;
                }
            }
        }
        let verdict = if witness.is_some() {
            ExpPVerdict::Witness
        } else if refutation.is_some() {
            ExpPVerdict::Refuted
        } else {
            ExpPVerdict::Exhausted
        };
        rows.push(ExpPRow { a_star, verdict, witness, candidates: tried, refutation });
    }
    let holds_at_bound = rows.iter().all(|r| r.verdict == ExpPVerdict::Witness);
    Ok(ExpPReport { star_bound, bound, rows, holds_at_bound })
}

impl ConstantRefutation {
    /// Recheck: the pattern is safe and `a_star` is not constant for it.
    pub fn verify(&self, spec: &ExpansionSpec, a_star: &Structure) -> Result<bool> {
        Ok(safe_patterns(spec)?.contains(&self.pattern) && !is_constant(spec, a_star, &self.pattern)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConsistencyStatus {
    Consistent,
    Inconsistent,
    InconclusiveAtBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionClass {
    pub expansion: Structure,
    pub size: usize,
    pub syndetic: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub a: Structure,
    pub count: usize,
    pub iso_types: usize,
    pub prefix_size: usize,
    pub s: usize,
    /// Emb(A, reduct of the prefix) split by pullback expansion, one class
    /// per expansion of A (possibly empty).
    pub classes: Vec<ExpansionClass>,
    /// Every embedding pulls back to exactly one listed expansion.
    pub partition_ok: bool,
    pub syndetic_classes: usize,
    pub degree: DegreeReport,
    pub status: ConsistencyStatus,
}

/// Compare the number of expansions of A with Ramsey degree evidence for A
/// in the base class.
pub fn degree_equals_expansion_count(
    spec: &ExpansionSpec,
    a: &Structure,
    dcfg: &DegreeConfig,
    fcfg: &FlimConfig,
) -> Result<ConsistencyReport> {
    let ex = expansions_of(spec, a)?;
    let iso_types = ex.iter().map(|s| canonical_form(s).code).collect::<BTreeSet<_>>().len();
    let p = flim_prefix(&spec.extended, fcfg)?;
    let top = spec.reduct(&p.top)?;
    let embs = enumerate_embeddings(a, &top)?;
    let mut members = vec![Vec::new(); ex.len()];
    let mut partition_ok = true;
    for (i, x) in embs.iter().enumerate() {
        let star = p.top.pull(x);
        match ex.iter().position(|e| *e == star) {
            Some(j) => members[j].push(i),
            None => partition_ok = false,
        }
    }
    let mut classes = Vec::new();
    for (e, m) in ex.iter().zip(members) {
        let set = EmbeddingSet { a: a.clone(), target: top.clone(), members: m };
        let syn = syndetic_at_horizon(&spec.base, &set, dcfg.s)?;
        classes.push(ExpansionClass { expansion: e.clone(), size: set.members.len(), syndetic: syn.syndetic });
    }
    let syndetic_classes = classes.iter().filter(|c| c.syndetic).count();
    let degree = degree_report(&spec.base, a, dcfg, &top)?;
    let count = ex.len();
    let contradiction = degree.upper.is_some_and(|u| u < count) || degree.lower > count;
    let status = if contradiction || !partition_ok {
        ConsistencyStatus::Inconsistent
    } else if syndetic_classes == count {
        ConsistencyStatus::Consistent
    } else {
        ConsistencyStatus::InconclusiveAtBound
    };
    Ok(ConsistencyReport {
        a: a.clone(),
        count,
        iso_types,
        prefix_size: top.size(),
        s: dcfg.s,
        classes,
        partition_ok,
        syndetic_classes,
        degree,
        status,
    })
}

/// The expansion of the first `m` points pulled back along `g`, a partial
/// isomorphism of the reduct defined on `0..m`.
pub fn finite_logic_action(spec: &ExpansionSpec, top_star: &Structure, m: usize, g: &PartialMap) -> Result<Structure> {
    let top = spec.reduct(top_star)?;
    if g.domain != (0..m).collect::<Vec<_>>() || !g.is_partial_iso(&top) {
        return Err(Error::NotEmbedding(format!("g is not a partial isomorphism of the reduct defined on the first {m} points")));
    }
    Ok(top_star.pull(&g.range))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReachablePoints {
    pub m: usize,
    pub maps: usize,
    /// Distinct expansions of the first `m` points, in order of discovery.
    pub points: Vec<Structure>,
}

/// Run [`finite_logic_action`] over every partial isomorphism from the
/// first `m` points into the reduct.
pub fn reachable_points(spec: &ExpansionSpec, top_star: &Structure, m: usize) -> Result<ReachablePoints> {
    let top = spec.reduct(top_star)?;
    if m > top.size() {
        return Err(Error::OutOfRange(format!("depth {m} exceeds the {} points available", top.size())));
    }
    let am = top.pull(&(0..m).collect::<Vec<_>>());
    let mut seen = HashSet::new();
    let mut points = Vec::new();
    let mut maps = 0;
    Plan::new(&am).run(&top, None, None, &mut |g| {
        maps += 1;
        let p = top_star.pull(g);
        if seen.insert(p.clone()) {
            points.push(p);
        }
        true
    });
    Ok(ReachablePoints { m, maps, points })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorReport {
    pub objects: usize,
    pub pairs: usize,
    pub faithful: bool,
    pub failure: Option<String>,
}

/// Check that `phi`, sending expansions in `from` to expansions in `to` over
/// the same base, keeps reducts and embedding sets, on all expansions of
/// base members up to `bound`.
pub fn check_expansion_functor(
    from: &ExpansionSpec,
    to: &ExpansionSpec,
    phi: &dyn Fn(&Structure) -> Structure,
    bound: usize,
) -> Result<FunctorReport> {
    if from.base != to.base {
        return Err(Error::SignatureMismatch("expansions of different base classes".into()));
    }
    let mut objects = Vec::new();
    for a in generate_up_to(&from.base, bound).into_iter().flatten() {
        objects.extend(expansions_of(from, &a)?);
    }
    let fail = |msg: String, objects: usize, pairs: usize| FunctorReport { objects, pairs, faithful: false, failure: Some(msg) };
    let mut images = Vec::new();
    for (i, o) in objects.iter().enumerate() {
        let img = phi(o);
        if to.reduct(&img)? != from.reduct(o)? {
            return Ok(fail(format!("object {i}: reduct changed"), objects.len(), 0));
        }
        if !to.extended.is_member(&img)? {
            return Ok(fail(format!("object {i}: image outside the target class"), objects.len(), 0));
        }
        images.push(img);
    }
    let mut pairs = 0;
    for i in 0..objects.len() {
        for j in 0..objects.len() {
            if objects[i].size() > objects[j].size() {
                continue;
            }
            pairs += 1;
            if enumerate_embeddings(&objects[i], &objects[j])? != enumerate_embeddings(&images[i], &images[j])? {
                return Ok(fail(format!("objects {i} → {j}: embedding sets differ"), objects.len(), pairs));
            }
        }
    }
    Ok(FunctorReport { objects: objects.len(), pairs, faithful: true, failure: None })
}

/// Number of labeled expansions of each structure.
pub fn expansion_counts(spec: &ExpansionSpec, reps: &[Structure]) -> Result<Vec<usize>> {
    reps.iter().map(|a| expansions_of(spec, a).map(|e| e.len())).collect()
}
