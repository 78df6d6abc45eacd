use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::age::{check_age_class, check_ap};
use super::amalgam::{amalgamate_seeded, Verdict};
use super::complete::Completion;
use super::generate::{copy_onto, generate_up_to};
use super::spec::{ClassSpec, ClassSpecDoc};
use crate::error::{Error, Result};
use crate::structures::{automorphisms, canonical_form, subsets, Map, Plan, Structure};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlimConfig {
    pub steps: usize,
    pub seed: u64,
    /// Largest C in the inclusion pairs B ⊆ C.
    pub pair_bound: usize,
    /// No amalgam may grow the top beyond this many points.
    pub max_size: usize,
    /// Size bound for the joint-embedding search used when B has no copy
    /// in the current top.
    pub jep_bound: usize,
    /// Sizes that must be inhabited before construction starts.
    pub age_bound: usize,
    /// Pair size for the joint-embedding precheck.
    pub jep_check_bound: usize,
    pub ap_triple_bound: usize,
    pub ap_amalgam_bound: usize,
}

impl Default for FlimConfig {
    fn default() -> Self {
        FlimConfig {
            steps: 20,
            seed: 0,
            pair_bound: 3,
            max_size: 40,
            jep_bound: 40,
            age_bound: 6,
            jep_check_bound: 3,
            ap_triple_bound: 3,
            ap_amalgam_bound: 6,
        }
    }
}

/// A class member C with a vertex subset; B is the induced substructure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InclusionPair {
    pub id: usize,
    pub c: Structure,
    pub subset: Vec<usize>,
}

impl InclusionPair {
    pub fn b(&self) -> Structure {
        self.c.pull(&self.subset)
    }
}

/// Inclusion pairs B ⊊ C with |C| ≤ `max`, one per isomorphism type of
/// pair, ordered by (|C|, code of C, code of B, subset).
pub fn inclusion_pairs(spec: &ClassSpec, max: usize) -> Vec<InclusionPair> {
    let levels = generate_up_to(spec, max);
    let mut keyed = Vec::new();
    for c in levels.iter().skip(1).flatten() {
        let ccode = canonical_form(c).code;
        let auts = automorphisms(c);
        for k in 0..c.size() {
            for sub in subsets(c.size(), k) {
                let least = auts.iter().all(|al| {
                    let mut img: Vec<usize> = sub.iter().map(|&x| al[x]).collect();
                    img.sort_unstable();
                    img >= sub
                });
                if !least {
                    continue;
                }
                let bcode = canonical_form(&c.pull(&sub)).code;
                keyed.push(((c.size(), ccode.clone(), bcode, sub.clone()), c.clone()));
            }
        }
    }
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed
        .into_iter()
        .enumerate()
        .map(|(id, ((_, _, _, subset), c))| InclusionPair { id, c, subset })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    /// Every copy of B already extends to C.
    Realized,
    /// An amalgam was added so that one copy of B extends to C.
    Extend,
    /// B had no copy, so C was joined in.
    Join,
    /// The size cap prevented an extension.
    Capped,
    /// No amalgam exists for this instance: construction stopped.
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogEntry {
    pub step: usize,
    pub pair: usize,
    pub kind: StepKind,
    pub embedding: Option<Map>,
    pub overlap: Option<usize>,
    pub added_tuples: Option<bool>,
    pub size_after: usize,
}

/// A chain A_1 ⊆ A_2 ⊆ … built by repeated amalgamation. Every chain member
/// is an initial segment of `top`, so inclusions are identity prefixes.
#[derive(Debug, Clone)]
pub struct FlimPrefix {
    pub spec: ClassSpec,
    pub config: FlimConfig,
    pub pairs: Vec<InclusionPair>,
    pub chain_sizes: Vec<usize>,
    pub top: Structure,
    pub log: Vec<LogEntry>,
    pub capped: bool,
    pub stopped: bool,
}

impl FlimPrefix {
    pub fn chain_len(&self) -> usize {
        self.chain_sizes.len()
    }

    pub fn chain_member(&self, t: usize) -> Structure {
        self.level(self.chain_sizes[t])
    }

    /// The top restricted to its first `t` vertices.
    pub fn level(&self, t: usize) -> Structure {
        let keep: Vec<usize> = (0..t.min(self.top.size())).collect();
        self.top.pull(&keep)
    }

    /// The largest chain index t such that every inclusion pair was
    /// scheduled at some step ≥ t and none of those steps hit the size cap.
    /// Every embedding of a pair's B into chain member t then extends to C
    /// inside the top.
    pub fn guaranteed_level(&self) -> Option<usize> {
        let steps = self.chain_sizes.len() - 1;
        let sched = schedule(self.pairs.len(), steps);
        let mut seen = vec![false; self.pairs.len()];
        let mut missing = self.pairs.len();
        for t in (0..steps).rev() {
            if self.log.iter().any(|l| l.step == t && l.kind == StepKind::Capped) {
                return None;
            }
            if !seen[sched[t]] {
                seen[sched[t]] = true;
                missing -= 1;
            }
            if missing == 0 {
                return Some(t);
            }
        }
        None
    }

    pub fn to_doc(&self) -> FlimPrefixDoc {
        FlimPrefixDoc {
            class: self.spec.to_doc(),
            config: self.config.clone(),
            chain: (0..self.chain_len()).map(|t| self.chain_member(t)).collect(),
            log: self.log.clone(),
            capped: self.capped,
            stopped: self.stopped,
        }
    }

    /// Rebuild from the class and configuration recorded in an export and
    /// check that the chain matches.
    pub fn replay(doc: &FlimPrefixDoc) -> Result<FlimPrefix> {
        let spec = ClassSpec::from_doc(&doc.class)?;
        let p = flim_prefix(&spec, &doc.config)?;
        let chain: Vec<Structure> = (0..p.chain_len()).map(|t| p.chain_member(t)).collect();
        if chain != doc.chain || p.log != doc.log {
            return Err(Error::malformed("chain", "replayed prefix differs from the export"));
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlimPrefixDoc {
    pub class: ClassSpecDoc,
    pub config: FlimConfig,
    pub chain: Vec<Structure>,
    pub log: Vec<LogEntry>,
    pub capped: bool,
    pub stopped: bool,
}

/// Sizes `0..=bound` that have at least one member. Tries to extend a
/// single witness first and falls back to full generation only when that
/// gets stuck.
pub fn inhabited_sizes(spec: &ClassSpec, bound: usize) -> Vec<bool> {
    let mut out = vec![true];
    let mut cur = Structure::empty(spec.sig().clone(), 0);
    for m in 1..=bound {
        let mut base = Structure::empty(spec.sig().clone(), m);
        copy_onto(&cur, &(0..m - 1).collect::<Vec<_>>(), &mut base);
        let mut region = vec![true; m];
        region[m - 1] = false;
        let comp = Completion::new(spec, base, &|_, t| t.contains(&(m - 1)), &[region]);
        match comp.first() {
            Some(next) => {
                cur = next;
                out.push(true);
            }
            None => {
                let levels = generate_up_to(spec, bound);
                return levels.iter().map(|l| !l.is_empty()).collect();
            }
        }
    }
    out
}

/// Refuse classes that fail the age or amalgamation checks at the
/// configured bounds.
pub fn precheck(spec: &ClassSpec, cfg: &FlimConfig) -> Result<()> {
    let inhabited = inhabited_sizes(spec, cfg.age_bound);
    if let Some(n) = inhabited.iter().position(|&x| !x) {
        return Err(Error::Refused(format!(
            "class {} is not an age class: no structures of size {n}",
            spec.name
        )));
    }
    let age = check_age_class(spec, cfg.jep_check_bound);
    if age.jep != Verdict::Holds {
        return Err(Error::Refused(format!(
            "class {} fails joint embedding at bound {}",
            spec.name, cfg.jep_check_bound
        )));
    }
    let ap = check_ap(spec, cfg.ap_triple_bound, cfg.ap_amalgam_bound);
    if ap.verdict != Verdict::Holds {
        return Err(Error::Refused(format!(
            "class {} fails amalgamation at triple bound {} (amalgam bound {})",
            spec.name, cfg.ap_triple_bound, cfg.ap_amalgam_bound
        )));
    }
    Ok(())
}

/// Pair indices visited at each step, round robin, so every pair comes
/// back every P steps.
pub fn schedule(pair_count: usize, steps: usize) -> Vec<usize> {
    if pair_count == 0 {
        return Vec::new();
    }
    (0..steps).map(|t| t % pair_count).collect()
}

/// Build a prefix of the limit: each step takes the next inclusion pair
/// B ⊆ C from the schedule and, for every copy of B in the current top that
/// does not already extend to C, amalgamates a copy of C over it.
pub fn flim_prefix(spec: &ClassSpec, cfg: &FlimConfig) -> Result<FlimPrefix> {
    precheck(spec, cfg)?;
    build_unchecked(spec, cfg)
}

pub(crate) fn build_unchecked(spec: &ClassSpec, cfg: &FlimConfig) -> Result<FlimPrefix> {
    let pairs = inclusion_pairs(spec, cfg.pair_bound);
    let ones = generate_up_to(spec, 1);
    let Some(first) = ones[1].first().cloned() else {
        return Err(Error::Refused(format!("class {} has no one-point structure", spec.name)));
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut p = FlimPrefix {
        spec: spec.clone(),
        config: cfg.clone(),
        pairs: pairs.clone(),
        chain_sizes: vec![1],
        top: first,
        log: Vec::new(),
        capped: false,
        stopped: false,
    };
    let empty = Structure::empty(spec.sig().clone(), 0);
    'steps: for (step, &pi) in schedule(pairs.len(), cfg.steps).iter().enumerate() {
        let pair = &pairs[pi];
        let b = pair.b();
        let c_plan = Plan::new(&pair.c);
        let snapshot_embs = {
            let mut v = Vec::new();
            Plan::new(&b).run(&p.top, None, None, &mut |m| {
                v.push(m.to_vec());
                true
            });
            v
        };
        let mut changed = false;
        let mut jobs: Vec<(Option<Map>, bool)> = snapshot_embs.into_iter().map(|e| (Some(e), false)).collect();
        if jobs.is_empty() {
            jobs.push((None, true));
        }
        for (e, join) in jobs {
            let realized = match &e {
                Some(e) => {
                    let mut pins = vec![None; pair.c.size()];
                    for (i, &x) in pair.subset.iter().enumerate() {
                        pins[x] = Some(e[i]);
                    }
                    c_plan.first(&p.top, Some(&pins), None).is_some()
                }
                None => c_plan.first(&p.top, None, None).is_some(),
            };
            if realized {
                continue;
            }
            // any amalgam within the cap would have to be the top itself
            if p.top.size() >= cfg.max_size {
                p.log.push(LogEntry {
                    step,
                    pair: pi,
                    kind: StepKind::Capped,
                    embedding: e.clone(),
                    overlap: None,
                    added_tuples: None,
                    size_after: p.top.size(),
                });
                p.capped = true;
                break;
            }
            let cert = if join {
                amalgamate_seeded(spec, &empty, &p.top, &pair.c, &[], &[], cfg.jep_bound.min(cfg.max_size), Some(&mut rng))?
            } else {
                let e = e.as_ref().unwrap();
                amalgamate_seeded(spec, &b, &p.top, &pair.c, e, &pair.subset, cfg.max_size, Some(&mut rng))?
            };
            let kind = match cert.verdict {
                Verdict::Holds if join => StepKind::Join,
                Verdict::Holds => StepKind::Extend,
                Verdict::Inconclusive => StepKind::Capped,
                Verdict::Fails => StepKind::Exhausted,
            };
            if let (Some(d), Some(r)) = (&cert.d, &cert.r) {
                let mut perm = vec![usize::MAX; d.size()];
                for (i, &x) in r.iter().enumerate() {
                    perm[x] = i;
                }
                let mut next = r.len();
                for slot in perm.iter_mut() {
                    if *slot == usize::MAX {
                        *slot = next;
                        next += 1;
                    }
                }
                let new_top = d.relabel(&perm);
                debug_assert_eq!(new_top.pull(&(0..p.top.size()).collect::<Vec<_>>()), p.top);
                p.top = new_top;
                changed = true;
            }
            p.log.push(LogEntry {
                step,
                pair: pi,
                kind,
                embedding: e.clone(),
                overlap: cert.overlap,
                added_tuples: cert.added_tuples,
                size_after: p.top.size(),
            });
            match kind {
                StepKind::Capped => p.capped = true,
                StepKind::Exhausted => {
                    p.stopped = true;
                    p.chain_sizes.push(p.top.size());
                    break 'steps;
                }
                _ => {}
            }
        }
        if !changed && !p.log.last().is_some_and(|l| l.step == step) {
            p.log.push(LogEntry {
                step,
                pair: pi,
                kind: StepKind::Realized,
                embedding: None,
                overlap: None,
                added_tuples: None,
                size_after: p.top.size(),
            });
        }
        p.chain_sizes.push(p.top.size());
    }
    Ok(p)
}
