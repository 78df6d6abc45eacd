//! Evidence for the Ramsey degree of A in a class.
//!
//! Upper: for k = 1, 2, … every B ⊇ A up to `b_bound` gets a witness C up to
//! `witness_bound` with C ↪ (B)^A_{k+1,k}; the first such k bounds the
//! degree from above (for those B). Lower: Emb(A, top) is colored by the
//! order type of each embedding in the top's vertex order. Merging the
//! classes that are not syndetic at horizon `s` into a syndetic one leaves a
//! coloring whose classes are all syndetic, so the number of syndetic
//! classes (at least 1) bounds the degree from below at that horizon.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::arrow::find_arrow_witness;
use super::horizon::{horizon_members, syndetic_at_horizon, EmbeddingSet};
use crate::classes::ClassSpec;
use crate::error::Result;
use crate::structures::{automorphisms, canonical_form, enumerate_embeddings, Structure};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeConfig {
    pub r_max: usize,
    /// Largest B tried for the upper evidence; `None` means |A| + 1.
    pub b_bound: Option<usize>,
    pub witness_bound: usize,
    pub s: usize,
}

impl Default for DegreeConfig {
    fn default() -> Self {
        DegreeConfig { r_max: 3, b_bound: None, witness_bound: 6, s: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpperInstance {
    pub b: Structure,
    pub witness: Option<Structure>,
    pub candidates_tried: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpperAttempt {
    pub k: usize,
    pub r: usize,
    pub verified: bool,
    /// Instances in order, up to the first without a witness.
    pub instances: Vec<UpperInstance>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderClass {
    /// Ranks of x(0), x(1), … among the image.
    pub pattern: Vec<usize>,
    pub size: usize,
    pub syndetic: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerEvidence {
    pub s: usize,
    pub top_size: usize,
    pub embeddings: usize,
    pub classes: Vec<OrderClass>,
    pub value: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub num: usize,
    pub den: usize,
}

impl Ratio {
    pub fn new(num: usize, den: usize) -> Self {
        fn gcd(a: usize, b: usize) -> usize {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        let g = gcd(num, den).max(1);
        Ratio { num: num / g, den: den / g }
    }
}

impl std::fmt::Display for Ratio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegreeStatus {
    Exact,
    InconclusiveAtBound,
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstructureCheck {
    pub sub: Structure,
    pub upper: Option<usize>,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub class: String,
    pub a: Structure,
    pub aut_size: usize,
    pub config: DegreeConfig,
    pub upper: Option<usize>,
    pub upper_attempts: Vec<UpperAttempt>,
    pub lower: usize,
    pub lower_evidence: LowerEvidence,
    /// Embedding figures divided by |Aut(A)|.
    pub structural_lower: Ratio,
    pub structural_upper: Option<Ratio>,
    pub status: DegreeStatus,
    /// Upper evidence for one-point deletions of A, which may not exceed
    /// that of A.
    pub monotonicity: Vec<SubstructureCheck>,
}

/// Ranks of the entries of `x`.
pub fn order_pattern(x: &[usize]) -> Vec<usize> {
    x.iter().map(|v| x.iter().filter(|w| *w < v).count()).collect()
}

pub fn upper_evidence(spec: &ClassSpec, a: &Structure, cfg: &DegreeConfig) -> Result<(Option<usize>, Vec<UpperAttempt>)> {
    let b_bound = cfg.b_bound.unwrap_or(a.size() + 1);
    let bs = horizon_members(spec, a, b_bound);
    let mut attempts = Vec::new();
    for k in 1..cfg.r_max {
        let mut instances = Vec::new();
        let mut verified = true;
        for b in &bs {
            let w = find_arrow_witness(spec, b, a, k + 1, k, cfg.witness_bound)?;
            let ok = w.witness.is_some();
            instances.push(UpperInstance { b: b.clone(), witness: w.witness, candidates_tried: w.candidates_tried });
            if !ok {
                verified = false;
                break;
            }
        }
        attempts.push(UpperAttempt { k, r: k + 1, verified, instances });
        if verified {
            return Ok((Some(k), attempts));
        }
    }
    Ok((None, attempts))
}

pub fn lower_evidence(spec: &ClassSpec, a: &Structure, top: &Structure, s: usize) -> Result<LowerEvidence> {
    let embs = enumerate_embeddings(a, top)?;
    let mut by_pattern: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (i, e) in embs.iter().enumerate() {
        by_pattern.entry(order_pattern(e)).or_default().push(i);
    }
    let mut classes = Vec::new();
    for (pattern, members) in by_pattern {
        let set = EmbeddingSet { a: a.clone(), target: top.clone(), members };
        let syn = syndetic_at_horizon(spec, &set, s)?;
        classes.push(OrderClass { pattern, size: set.members.len(), syndetic: syn.syndetic });
    }
    let value = classes.iter().filter(|c| c.syndetic).count().max(1);
    Ok(LowerEvidence { s, top_size: top.size(), embeddings: embs.len(), classes, value })
}

pub fn degree_report(spec: &ClassSpec, a: &Structure, cfg: &DegreeConfig, top: &Structure) -> Result<DegreeReport> {
    spec.check_sig(a)?;
    spec.check_sig(top)?;
    let aut_size = automorphisms(a).len();
    let (upper, upper_attempts) = upper_evidence(spec, a, cfg)?;
    let lower_evidence = lower_evidence(spec, a, top, cfg.s)?;
    let lower = lower_evidence.value;
    let status = match upper {
        Some(u) if lower > u => DegreeStatus::Inconsistent,
        Some(u) if lower == u => DegreeStatus::Exact,
        _ => DegreeStatus::InconclusiveAtBound,
    };
    let mut monotonicity = Vec::new();
    if let Some(u) = upper {
        let mut seen = BTreeSet::new();
        for v in 0..a.size() {
            let keep: Vec<usize> = (0..a.size()).filter(|&x| x != v).collect();
            let sub = a.pull(&keep);
            if sub.size() == 0 || !seen.insert(canonical_form(&sub).code) {
                continue;
            }
            let sub_cfg = DegreeConfig { r_max: u + 1, ..cfg.clone() };
            let (su, _) = upper_evidence(spec, &sub, &sub_cfg)?;
            monotonicity.push(SubstructureCheck { consistent: su.is_none_or(|x| x <= u), sub, upper: su });
        }
    }
    Ok(DegreeReport {
        class: spec.name.clone(),
        a: a.clone(),
        aut_size,
        config: cfg.clone(),
        upper,
        upper_attempts,
        lower,
        lower_evidence,
        structural_lower: Ratio::new(lower, aut_size),
        structural_upper: upper.map(|u| Ratio::new(u, aut_size)),
        status,
        monotonicity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::library;
    use crate::structures::named::*;

    #[test]
    fn orders_are_exact() {
        let lo = library::linear_orders();
        let r = degree_report(&lo, &linear_order(2), &DegreeConfig::default(), &linear_order(8)).unwrap();
        assert_eq!(r.upper, Some(1));
        assert_eq!(r.lower, 1);
        assert_eq!(r.status, DegreeStatus::Exact);
        assert!(r.monotonicity.iter().all(|m| m.consistent));
    }

    #[test]
    fn edges_have_two_syndetic_orientations() {
        let g = library::graphs();
        let top = graph(5, &[(0, 1), (1, 2), (0, 2), (2, 3)]);
        let cfg = DegreeConfig { witness_bound: 3, ..Default::default() };
        let r = degree_report(&g, &complete_graph(2), &cfg, &top).unwrap();
        assert_eq!(r.lower, 2);
        assert_eq!(r.structural_lower, Ratio { num: 1, den: 1 });
        assert_eq!(r.upper, None);
        assert_eq!(r.status, DegreeStatus::InconclusiveAtBound);
    }

    #[test]
    fn patterns() {
        assert_eq!(order_pattern(&[5, 2, 9]), vec![1, 0, 2]);
    }
}
