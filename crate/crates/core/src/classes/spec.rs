use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structures::{canonical_form, subsets, Map, Plan, Signature, Structure, StructureDoc, Symbol};

/// A class of finite structures given by forbidden induced substructures.
///
/// Forbidden structures are stored in canonical form, deduplicated, and
/// sorted by (size, code). Membership is hereditary by construction.
#[derive(Debug, Clone)]
pub struct ClassSpec {
    pub name: String,
    sig: Arc<Signature>,
    forbidden: Vec<Structure>,
    codes: Vec<Vec<u8>>,
    plans: Vec<Plan>,
    duplicates_dropped: usize,
}

impl PartialEq for ClassSpec {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.sig == other.sig && self.codes == other.codes
    }
}

impl ClassSpec {
    pub fn new(name: impl Into<String>, sig: Arc<Signature>, forbidden: Vec<Structure>) -> Result<Self> {
        let mut items: Vec<(usize, Vec<u8>, Structure)> = Vec::new();
        let mut dropped = 0;
        for (i, f) in forbidden.into_iter().enumerate() {
            if *f.sig() != sig {
                return Err(Error::malformed(format!("forbidden[{i}].signature"), "does not match class signature"));
            }
            if f.size() == 0 {
                return Err(Error::malformed(format!("forbidden[{i}]"), "forbidden structure of size 0"));
            }
            let cf = canonical_form(&f);
            if items.iter().any(|(_, c, _)| *c == cf.code) {
                dropped += 1;
                continue;
            }
            items.push((f.size(), cf.code.clone(), f.relabel(&cf.relabeling)));
        }
        items.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        let plans = items.iter().map(|(_, _, s)| Plan::new(s)).collect();
        Ok(ClassSpec {
            name: name.into(),
            sig,
            codes: items.iter().map(|(_, c, _)| c.clone()).collect(),
            forbidden: items.into_iter().map(|(_, _, s)| s).collect(),
            plans,
            duplicates_dropped: dropped,
        })
    }

    pub fn sig(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn forbidden(&self) -> &[Structure] {
        &self.forbidden
    }

    /// Number of forbidden entries removed as isomorphic duplicates.
    pub fn duplicates_dropped(&self) -> usize {
        self.duplicates_dropped
    }

    pub fn check_sig(&self, a: &Structure) -> Result<()> {
        if *a.sig() == self.sig {
            Ok(())
        } else {
            Err(Error::SignatureMismatch(format!(
                "class {} has signature {}, structure has {}",
                self.name,
                self.sig.describe(),
                a.sig().describe()
            )))
        }
    }

    pub fn is_member(&self, a: &Structure) -> Result<bool> {
        self.check_sig(a)?;
        Ok(self.forbidden_witness(a).is_none())
    }

    /// First forbidden structure (by index) embedded in `a`, with the
    /// lexicographically first embedding.
    pub fn forbidden_witness(&self, a: &Structure) -> Option<(usize, Map)> {
        self.plans
            .iter()
            .enumerate()
            .find_map(|(i, p)| p.first(a, None, None).map(|m| (i, m)))
    }

    pub(crate) fn require_member(&self, a: &Structure, what: &str) -> Result<()> {
        if self.is_member(a)? {
            Ok(())
        } else {
            Err(Error::NotMember {
                class: self.name.clone(),
                msg: what.to_string(),
            })
        }
    }

    /// Is there a forbidden copy inside `allowed` whose image contains every
    /// vertex in `must`? Used to prune partial completions.
    pub(crate) fn forbidden_through(&self, a: &Structure, must: &[usize], allowed: &[bool]) -> bool {
        for p in &self.plans {
            let k = p.size();
            if k < must.len() {
                continue;
            }
            let mut pins = vec![None; k];
            if place(p, a, must, 0, &mut pins, allowed) {
                return true;
            }
        }
        false
    }

    pub fn to_doc(&self) -> ClassSpecDoc {
        ClassSpecDoc {
            name: self.name.clone(),
            signature: self.sig.symbols().to_vec(),
            forbidden: self.forbidden.iter().map(|f| f.to_doc()).collect(),
        }
    }

    pub fn from_doc(doc: &ClassSpecDoc) -> Result<Self> {
        let sig = Signature::new(doc.signature.clone())?;
        let mut fs = Vec::with_capacity(doc.forbidden.len());
        for (i, f) in doc.forbidden.iter().enumerate() {
            fs.push(Structure::from_doc_with(f, sig.clone(), &format!("forbidden[{i}]."))?);
        }
        ClassSpec::new(doc.name.clone(), sig, fs)
    }
}

fn place(p: &Plan, a: &Structure, must: &[usize], i: usize, pins: &mut Vec<Option<usize>>, allowed: &[bool]) -> bool {
    if i == must.len() {
        return p.first(a, Some(pins), Some(allowed)).is_some();
    }
    for pos in 0..pins.len() {
        if pins[pos].is_none() {
            pins[pos] = Some(must[i]);
            if place(p, a, must, i + 1, pins, allowed) {
                pins[pos] = None;
                return true;
            }
            pins[pos] = None;
        }
    }
    false
}

/// Text form of a class: `{name, signature, forbidden: [structure, ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassSpecDoc {
    pub name: String,
    pub signature: Vec<Symbol>,
    pub forbidden: Vec<StructureDoc>,
}

/// The minimal structures (up to isomorphism) of size at most `max` that
/// fail `pred`, given that `pred` is hereditary. Every structure failing
/// `pred` contains one of these, provided the minimal failures are all of
/// size at most `max`.
pub fn minimal_forbidden(sig: &Arc<Signature>, max: usize, pred: &dyn Fn(&Structure) -> bool) -> Vec<Structure> {
    let mut found: Vec<Structure> = Vec::new();
    let mut found_codes: Vec<Vec<u8>> = Vec::new();
    for n in 1..=max {
        let slots: Vec<(usize, Vec<usize>)> = (0..sig.len())
            .flat_map(|sym| crate::structures::all_tuples(n, sig.arity(sym)).map(move |t| (sym, t)))
            .collect();
        assert!(slots.len() <= 24, "too many tuples for brute-force enumeration");
        let plans: Vec<Plan> = found.iter().map(Plan::new).collect();
        for mask in 0u64..(1u64 << slots.len()) {
            let mut s = Structure::empty(sig.clone(), n);
            for (i, (sym, t)) in slots.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    s.set(*sym, t, true);
                }
            }
            if pred(&s) {
                continue;
            }
            if plans.iter().any(|p| p.first(&s, None, None).is_some()) {
                continue;
            }
            // every proper induced substructure must satisfy pred
            let minimal = (1..n).all(|k| subsets(n, k).iter().all(|sub| pred(&s.pull(sub))));
            if !minimal {
                continue;
            }
            let cf = canonical_form(&s);
            if !found_codes.contains(&cf.code) {
                found_codes.push(cf.code);
                found.push(s.relabel(&cf.relabeling));
            }
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::library;
    use crate::structures::named::*;

    #[test]
    fn membership_examples() {
        assert!(library::graphs().is_member(&cycle(4)).unwrap());
        assert!(!library::triangle_free().is_member(&complete_graph(4)).unwrap());
        assert!(library::linear_orders().is_member(&linear_order(3)).unwrap());
        assert!(library::graphs().is_member(&linear_order(3)).is_err());
    }

    #[test]
    fn duplicates_are_dropped() {
        let sig = graph_sig();
        let k3a = complete_graph(3);
        let k3b = complete_graph(3).relabel(&[2, 0, 1]);
        let spec = ClassSpec::new("dup", sig, vec![k3a, k3b]).unwrap();
        assert_eq!(spec.forbidden().len(), 1);
        assert_eq!(spec.duplicates_dropped(), 1);
    }

    #[test]
    fn rejects_empty_forbidden() {
        assert!(ClassSpec::new("bad", graph_sig(), vec![empty_graph(0)]).is_err());
    }

    #[test]
    fn forbidden_through_respects_pins() {
        let spec = library::triangle_free();
        let mut g = complete_graph(3);
        g = g.widen_to(g.sig()).unwrap();
        let all = [true; 3];
        assert!(spec.forbidden_through(&g, &[2, 0], &all));
        assert!(!spec.forbidden_through(&g, &[2, 0], &[true, false, true]));
    }
}
