use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::amalgam::{amalgamate, ApCertificate, Verdict};
use super::generate::generate_up_to;
use super::spec::ClassSpec;
use crate::structures::{automorphisms, compose, enumerate_embeddings, Map, Structure};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgeReport {
    pub class: String,
    pub bound: usize,
    /// Representatives per size `0..=bound`.
    pub counts: Vec<usize>,
    pub all_sizes_inhabited: bool,
    pub first_empty_size: Option<usize>,
    pub jep: Verdict,
    pub jep_pairs_checked: usize,
    /// Joint-embedding failure: the pair and the exhausted search.
    pub jep_counterexample: Option<ApCertificate>,
    pub is_age_at_bound: bool,
}

/// JEP for all pairs of representatives of size `1..=bound` (each pair once,
/// witnesses up to `2·bound`) and non-emptiness of every size up to `bound`.
/// JEP is amalgamation over the size-0 structure.
pub fn check_age_class(spec: &ClassSpec, bound: usize) -> AgeReport {
    let levels = generate_up_to(spec, bound);
    let counts: Vec<usize> = levels.iter().map(|l| l.len()).collect();
    let first_empty_size = counts.iter().position(|&c| c == 0);
    let reps: Vec<&Structure> = levels[1..].iter().flatten().collect();
    let mut pairs = Vec::new();
    for i in 0..reps.len() {
        for j in i..reps.len() {
            pairs.push((i, j));
        }
    }
    let empty = Structure::empty(spec.sig().clone(), 0);
    let certs: Vec<ApCertificate> = pairs
        .par_iter()
        .map(|&(i, j)| amalgamate(spec, &empty, reps[i], reps[j], &[], &[], 2 * bound).expect("valid JEP query"))
        .collect();
    let fail = certs.iter().find(|c| c.verdict == Verdict::Fails).cloned();
    let jep = if fail.is_some() {
        Verdict::Fails
    } else if certs.iter().any(|c| c.verdict == Verdict::Inconclusive) {
        Verdict::Inconclusive
    } else {
        Verdict::Holds
    };
    AgeReport {
        class: spec.name.clone(),
        bound,
        all_sizes_inhabited: first_empty_size.is_none(),
        first_empty_size,
        jep,
        jep_pairs_checked: certs.len(),
        jep_counterexample: fail,
        is_age_at_bound: first_empty_size.is_none() && jep == Verdict::Holds,
        counts,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApReport {
    pub class: String,
    pub triple_bound: usize,
    pub amalgam_bound: usize,
    pub verdict: Verdict,
    pub triples_checked: usize,
    pub first_failure: Option<ApCertificate>,
    pub first_inconclusive: Option<ApCertificate>,
}

/// `f` is kept only if it is the lexicographically least member of its
/// orbit under automorphisms of its codomain.
pub(crate) fn orbit_reps(embs: Vec<Map>, auts: &[Map]) -> Vec<Map> {
    embs.into_iter()
        .filter(|f| auts.iter().all(|al| compose(al, f) >= *f))
        .collect()
}

/// Triples (A, B, C, f, g) with |A| < |B|, |C| ≤ `triple_bound`, ordered by
/// |A|, code of A, then (|B|, code of B, f) and (|C|, code of C, g) with the
/// B side not after the C side. `f` and `g` are taken up to automorphisms
/// of B and C, so they behave like inclusions.
pub(crate) fn ap_triples(spec: &ClassSpec, triple_bound: usize) -> Vec<(Structure, Structure, Structure, Map, Map)> {
    let levels = generate_up_to(spec, triple_bound);
    let reps: Vec<&Structure> = levels.iter().flatten().collect();
    let auts: Vec<Vec<Map>> = reps.iter().map(|s| automorphisms(s)).collect();
    let mut out = Vec::new();
    for a in reps.iter() {
        // (index in reps, f) for every extension of A
        let mut exts: Vec<(usize, Map)> = Vec::new();
        for (bi, b) in reps.iter().enumerate() {
            if b.size() <= a.size() {
                continue;
            }
            for f in orbit_reps(enumerate_embeddings(a, b).unwrap(), &auts[bi]) {
                exts.push((bi, f));
            }
        }
        for x in 0..exts.len() {
            for y in x..exts.len() {
                let (bi, f) = &exts[x];
                let (ci, g) = &exts[y];
                out.push(((*a).clone(), reps[*bi].clone(), reps[*ci].clone(), f.clone(), g.clone()));
            }
        }
    }
    out
}

/// Amalgamation over every triple up to `triple_bound`; reports the first
/// failure in triple order.
pub fn check_ap(spec: &ClassSpec, triple_bound: usize, amalgam_bound: usize) -> ApReport {
    let triples = ap_triples(spec, triple_bound);
    let certs: Vec<ApCertificate> = triples
        .par_iter()
        .map(|(a, b, c, f, g)| amalgamate(spec, a, b, c, f, g, amalgam_bound).expect("valid triple"))
        .collect();
    let first_failure = certs.iter().find(|c| c.verdict == Verdict::Fails).cloned();
    let first_inconclusive = certs.iter().find(|c| c.verdict == Verdict::Inconclusive).cloned();
    let verdict = if first_failure.is_some() {
        Verdict::Fails
    } else if first_inconclusive.is_some() {
        Verdict::Inconclusive
    } else {
        Verdict::Holds
    };
    ApReport {
        class: spec.name.clone(),
        triple_bound,
        amalgam_bound,
        verdict,
        triples_checked: certs.len(),
        first_failure,
        first_inconclusive,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::library;
    use crate::structures::{is_isomorphic, named::*};

    #[test]
    fn graphs_are_an_age() {
        let r = check_age_class(&library::graphs(), 4);
        assert_eq!(r.jep, Verdict::Holds);
        assert!(r.all_sizes_inhabited);
        assert_eq!(r.counts, vec![1, 1, 2, 4, 11]);
        assert!(check_age_class(&library::linear_orders(), 5).is_age_at_bound);
    }

    #[test]
    fn ramsey_class_is_not_an_age() {
        let r = check_age_class(&library::forbid_k3_i3(), 6);
        assert!(!r.all_sizes_inhabited);
        assert_eq!(r.first_empty_size, Some(6));
        assert!(!r.is_age_at_bound);
    }

    #[test]
    fn ap_holds_for_graphs_and_orders() {
        assert_eq!(check_ap(&library::graphs(), 3, 6).verdict, Verdict::Holds);
        assert_eq!(check_ap(&library::linear_orders(), 3, 6).verdict, Verdict::Holds);
    }

    #[test]
    fn ap_fails_for_c3c5_on_the_path_triple() {
        let spec = library::c3c5_free();
        let r = check_ap(&spec, 4, 7);
        assert_eq!(r.verdict, Verdict::Fails);
        let cert = r.first_failure.unwrap();
        assert!(is_isomorphic(&cert.a, &empty_graph(2)).unwrap());
        assert!(is_isomorphic(&cert.b, &path(3)).unwrap());
        assert!(is_isomorphic(&cert.c, &path(4)).unwrap());
        assert!(cert.verify(&spec).unwrap());
    }
}
