use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::classes::{generate_up_to, library, ClassSpec, ClassSpecDoc};
use crate::error::{Error, Result};
use crate::structures::{Signature, Structure, Symbol};

/// A base class over L and an extended class over L* whose signature starts
/// with L.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionSpec {
    pub name: String,
    pub base: ClassSpec,
    pub extended: ClassSpec,
}

impl ExpansionSpec {
    pub fn new(name: impl Into<String>, base: ClassSpec, extended: ClassSpec) -> Result<Self> {
        if !base.sig().is_prefix_of(extended.sig()) {
            return Err(Error::SignatureMismatch(format!(
                "base signature {} is not a prefix of {}",
                base.sig().describe(),
                extended.sig().describe()
            )));
        }
        Ok(ExpansionSpec { name: name.into(), base, extended })
    }

    pub fn base_sig(&self) -> &Arc<Signature> {
        self.base.sig()
    }

    pub fn new_symbols(&self) -> std::ops::Range<usize> {
        self.base.sig().len()..self.extended.sig().len()
    }

    /// Forget the new symbols.
    pub fn reduct(&self, star: &Structure) -> Result<Structure> {
        self.extended.check_sig(star)?;
        star.reduct_to(self.base.sig())
    }

    /// The first extended member up to `bound` whose reduct is not a base
    /// member.
    pub fn reduct_counterexample(&self, bound: usize) -> Result<Option<Structure>> {
        for s in generate_up_to(&self.extended, bound).into_iter().flatten() {
            if !self.base.is_member(&self.reduct(&s)?)? {
                return Ok(Some(s));
            }
        }
        Ok(None)
    }

    pub fn to_doc(&self) -> ExpansionSpecDoc {
        ExpansionSpecDoc {
            name: self.name.clone(),
            base: ClassRef::Inline(self.base.to_doc()),
            extended: ClassRef::Inline(self.extended.to_doc()),
            alignment: self
                .base
                .sig()
                .symbols()
                .iter()
                .map(|s| Alignment { base: s.name.clone(), extended: s.name.clone() })
                .collect(),
        }
    }

    /// Resolve class references, then reorder the extended signature so
    /// that the aligned symbols come first in base order.
    pub fn from_doc(doc: &ExpansionSpecDoc) -> Result<Self> {
        let base = doc.base.resolve("base")?;
        let extended = doc.extended.resolve("extended")?;
        let extended = realign(&base, &extended, &doc.alignment)?;
        ExpansionSpec::new(doc.name.clone(), base, extended)
    }
}

/// A class given by built-in name or written out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassRef {
    Named(String),
    Inline(ClassSpecDoc),
}

impl ClassRef {
    fn resolve(&self, path: &str) -> Result<ClassSpec> {
        match self {
            ClassRef::Named(n) => library::by_name(n).ok_or_else(|| Error::malformed(path, format!("unknown class {n}"))),
            ClassRef::Inline(doc) => ClassSpec::from_doc(doc),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Alignment {
    pub base: String,
    pub extended: String,
}

/// `{name, base, extended, alignment: [{base, extended}, ...]}`; every base
/// symbol must be aligned with an extended symbol of the same arity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpansionSpecDoc {
    pub name: String,
    pub base: ClassRef,
    pub extended: ClassRef,
    #[serde(default)]
    pub alignment: Vec<Alignment>,
}

fn realign(base: &ClassSpec, ext: &ClassSpec, alignment: &[Alignment]) -> Result<ClassSpec> {
    let bsig = base.sig();
    let esig = ext.sig();
    let mut order = Vec::new();
    for (i, sym) in bsig.symbols().iter().enumerate() {
        let Some(al) = alignment.iter().find(|a| a.base == sym.name) else {
            return Err(Error::malformed("alignment", format!("base symbol {} is not aligned", sym.name)));
        };
        let Some(j) = esig.index_of(&al.extended) else {
            return Err(Error::malformed(format!("alignment[{i}].extended"), format!("no symbol {}", al.extended)));
        };
        if esig.arity(j) != sym.arity {
            return Err(Error::SignatureMismatch(format!("{} and {} differ in arity", sym.name, al.extended)));
        }
        order.push(j);
    }
    let rest: Vec<usize> = (0..esig.len()).filter(|j| !order.contains(j)).collect();
    order.extend(rest);
    if order.iter().enumerate().all(|(i, &j)| i == j)
        && bsig.symbols().iter().zip(esig.symbols()).all(|(a, b)| a.name == b.name)
    {
        return Ok(ext.clone());
    }
    let symbols: Vec<Symbol> = order
        .iter()
        .enumerate()
        .map(|(i, &j)| {
            let name = if i < bsig.len() { bsig.symbols()[i].name.clone() } else { esig.symbols()[j].name.clone() };
            Symbol { name, arity: esig.arity(j) }
        })
        .collect();
    let sig = Signature::new(symbols)?;
    let forbidden = ext
        .forbidden()
        .iter()
        .map(|f| {
            let mut out = Structure::empty(sig.clone(), f.size());
            for (i, &j) in order.iter().enumerate() {
                for t in f.tuples(j) {
                    out.set(i, &t, true);
                }
            }
            out
        })
        .collect();
    ClassSpec::new(ext.name.clone(), sig, forbidden)
}

pub(crate) const EXPANSION_FILES: &[(&str, &str)] = &[
    ("graphs-ordered", include_str!("../../data/expansions/graphs-ordered.json")),
    ("sets-ordered", include_str!("../../data/expansions/sets-ordered.json")),
    ("sets-with-p", include_str!("../../data/expansions/sets-with-p.json")),
    ("orders-identity", include_str!("../../data/expansions/orders-identity.json")),
];

pub fn expansion_names() -> Vec<&'static str> {
    EXPANSION_FILES.iter().map(|(n, _)| *n).collect()
}

pub fn expansion_by_name(name: &str) -> Option<ExpansionSpec> {
    static CACHE: OnceLock<Vec<ExpansionSpec>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        EXPANSION_FILES
            .iter()
            .map(|(n, text)| {
                let doc: ExpansionSpecDoc = serde_json::from_str(text).unwrap_or_else(|e| panic!("built-in {n}: {e}"));
                ExpansionSpec::from_doc(&doc).unwrap_or_else(|e| panic!("built-in {n}: {e}"))
            })
            .collect()
    });
    let want = name.to_ascii_lowercase().replace('_', "-");
    EXPANSION_FILES.iter().position(|(n, _)| *n == want).map(|i| all[i].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::named::*;

    #[test]
    fn library_loads() {
        for n in expansion_names() {
            let e = expansion_by_name(n).unwrap();
            assert_eq!(e.reduct_counterexample(3).unwrap(), None, "{n}");
        }
    }

    #[test]
    fn realigns_symbol_order() {
        let og = library::ordered_graphs();
        let flipped = Signature::from_pairs(&[("lt", 2), ("edge", 2)]).unwrap();
        let forbidden = og
            .forbidden()
            .iter()
            .map(|f| {
                let mut s = Structure::empty(flipped.clone(), f.size());
                for t in f.tuples(0) {
                    s.set(1, &t, true);
                }
                for t in f.tuples(1) {
                    s.set(0, &t, true);
                }
                s
            })
            .collect();
        let ext = ClassSpec::new("og-flipped", flipped, forbidden).unwrap();
        let doc = ExpansionSpecDoc {
            name: "x".into(),
            base: ClassRef::Named("graphs".into()),
            extended: ClassRef::Inline(ext.to_doc()),
            alignment: vec![Alignment { base: "E".into(), extended: "edge".into() }],
        };
        let spec = ExpansionSpec::from_doc(&doc).unwrap();
        assert_eq!(spec.extended.sig().symbols()[0].name, "E");
        let mut k2 = complete_graph(2).widen_to(spec.extended.sig()).unwrap();
        k2.set(1, &[0, 1], true);
        assert!(spec.extended.is_member(&k2).unwrap());
        let bad = ExpansionSpecDoc { alignment: vec![], ..doc };
        assert!(ExpansionSpec::from_doc(&bad).is_err());
    }
}
