//! Small named structures used throughout tests, examples and the CLI.

use std::sync::Arc;

use super::signature::Signature;
use super::structure::Structure;

pub fn graph_sig() -> Arc<Signature> {
    Signature::from_pairs(&[("E", 2)]).unwrap()
}

pub fn order_sig() -> Arc<Signature> {
    Signature::from_pairs(&[("lt", 2)]).unwrap()
}

pub fn ordered_graph_sig() -> Arc<Signature> {
    Signature::from_pairs(&[("E", 2), ("lt", 2)]).unwrap()
}

pub fn unary_sig() -> Arc<Signature> {
    Signature::from_pairs(&[("P", 1)]).unwrap()
}

fn graph_from_edges(n: usize, edges: &[(usize, usize)]) -> Structure {
    let mut s = Structure::empty(graph_sig(), n);
    for &(a, b) in edges {
        s.set(0, &[a, b], true);
        s.set(0, &[b, a], true);
    }
    s
}

/// Undirected graph from 0-based edge pairs.
pub fn graph(n: usize, edges: &[(usize, usize)]) -> Structure {
    graph_from_edges(n, edges)
}

pub fn complete_graph(n: usize) -> Structure {
    let mut e = vec![];
    for a in 0..n {
        for b in a + 1..n {
            e.push((a, b));
        }
    }
    graph_from_edges(n, &e)
}

pub fn empty_graph(n: usize) -> Structure {
    Structure::empty(graph_sig(), n)
}

/// Path 0-1-..-(n-1).
pub fn path(n: usize) -> Structure {
    let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    graph_from_edges(n, &e)
}

pub fn cycle(n: usize) -> Structure {
    let mut e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    if n > 2 {
        e.push((n - 1, 0));
    }
    graph_from_edges(n, &e)
}

/// `lt(i, j)` iff `i < j`.
pub fn linear_order(n: usize) -> Structure {
    let mut s = Structure::empty(order_sig(), n);
    for a in 0..n {
        for b in a + 1..n {
            s.set(0, &[a, b], true);
        }
    }
    s
}

pub fn pure_set(n: usize) -> Structure {
    Structure::empty(Signature::empty(), n)
}

/// Resolve short names: `lo<n>`, `k<n>`, `i<n>`, `c<n>`, `p<n>`, `set<n>`.
pub fn by_name(name: &str) -> Option<Structure> {
    let split = name.find(|c: char| c.is_ascii_digit())?;
    let (head, num) = name.split_at(split);
    let n: usize = num.parse().ok()?;
    if n > 64 {
        return None;
    }
    match head.to_ascii_lowercase().as_str() {
        "lo" => Some(linear_order(n)),
        "k" => Some(complete_graph(n)),
        "i" => Some(empty_graph(n)),
        "c" if n >= 3 => Some(cycle(n)),
        "p" => Some(path(n)),
        "set" => Some(pure_set(n)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_resolve() {
        assert_eq!(by_name("lo6"), Some(linear_order(6)));
        assert_eq!(by_name("K3"), Some(complete_graph(3)));
        assert_eq!(by_name("c5").unwrap().tuple_total(), 10);
        assert!(by_name("c2").is_none());
        assert!(by_name("zz3").is_none());
        assert!(by_name("lo").is_none());
    }
}
