use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// Ordered list of relation symbols. The order matters: canonical codes
/// walk symbols in this order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    symbols: Vec<Symbol>,
}

impl Signature {
    pub fn new(symbols: Vec<Symbol>) -> Result<Arc<Self>> {
        for (i, s) in symbols.iter().enumerate() {
            let path = format!("signature[{i}]");
            if s.arity == 0 {
                return Err(Error::malformed(path, "arity must be at least 1"));
            }
            if !is_identifier(&s.name) {
                return Err(Error::malformed(
                    path,
                    format!("symbol name {:?} is not an identifier", s.name),
                ));
            }
            if symbols[..i].iter().any(|t| t.name == s.name) {
                return Err(Error::malformed(
                    path,
                    format!("duplicate symbol name {:?}", s.name),
                ));
            }
        }
        Ok(Arc::new(Signature { symbols }))
    }

    /// Shorthand for tests and built-ins: `[("E", 2), ("P", 1)]`.
    pub fn from_pairs(pairs: &[(&str, usize)]) -> Result<Arc<Self>> {
        Self::new(
            pairs
                .iter()
                .map(|(n, a)| Symbol {
                    name: n.to_string(),
                    arity: *a,
                })
                .collect(),
        )
    }

    pub fn empty() -> Arc<Self> {
        Arc::new(Signature { symbols: vec![] })
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn arity(&self, sym: usize) -> usize {
        self.symbols[sym].arity
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    /// True when `self` lists exactly the first symbols of `other`.
    pub fn is_prefix_of(&self, other: &Signature) -> bool {
        self.symbols.len() <= other.symbols.len()
            && self.symbols.iter().zip(&other.symbols).all(|(a, b)| a == b)
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .symbols
            .iter()
            .map(|s| format!("{}/{}", s.name, s.arity))
            .collect();
        format!("[{}]", parts.join(", "))
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}
