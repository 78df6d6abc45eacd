//! Built-in classes, shipped as JSON documents under `data/`.

use std::sync::OnceLock;

use super::spec::{minimal_forbidden, ClassSpec, ClassSpecDoc};
use crate::structures::named::{complete_graph, cycle, empty_graph, graph_sig, order_sig, ordered_graph_sig, unary_sig};
use crate::structures::{Signature, Structure};

pub(crate) const CLASS_FILES: &[(&str, &str)] = &[
    ("graphs", include_str!("../../data/graphs.json")),
    ("triangle-free", include_str!("../../data/triangle-free.json")),
    ("c3c5-free", include_str!("../../data/c3c5-free.json")),
    ("forbid-k3-i3", include_str!("../../data/forbid-k3-i3.json")),
    ("linear-orders", include_str!("../../data/linear-orders.json")),
    ("sets", include_str!("../../data/sets.json")),
    ("tournaments", include_str!("../../data/tournaments.json")),
    ("ordered-graphs", include_str!("../../data/ordered-graphs.json")),
    ("sets-with-p", include_str!("../../data/sets-with-p.json")),
];

pub fn class_names() -> Vec<&'static str> {
    CLASS_FILES.iter().map(|(n, _)| *n).collect()
}

/// Look up a built-in class. Accepts a few spelling variants
/// (`c3c5free`, `linear_orders`, `lo`).
pub fn by_name(name: &str) -> Option<ClassSpec> {
    static CACHE: OnceLock<Vec<ClassSpec>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        CLASS_FILES
            .iter()
            .map(|(n, text)| {
                let doc: ClassSpecDoc = serde_json::from_str(text).unwrap_or_else(|e| panic!("built-in {n}: {e}"));
                ClassSpec::from_doc(&doc).unwrap_or_else(|e| panic!("built-in {n}: {e}"))
            })
            .collect()
    });
    let norm = normalize(name);
    let norm = match norm.as_str() {
        "lo" | "orders" => "linearorders".to_string(),
        "trianglefreegraphs" => "trianglefree".to_string(),
        "setswithunaryp" | "setsp" => "setswithp".to_string(),
        other => other.to_string(),
    };
    CLASS_FILES
        .iter()
        .position(|(n, _)| normalize(n) == norm)
        .map(|i| all[i].clone())
}

fn normalize(s: &str) -> String {
    s.chars()
        .filter(|c| c.is_ascii_alphanumeric())
        .map(|c| c.to_ascii_lowercase())
        .collect()
}

pub fn graphs() -> ClassSpec {
    by_name("graphs").unwrap()
}
pub fn triangle_free() -> ClassSpec {
    by_name("triangle-free").unwrap()
}
pub fn c3c5_free() -> ClassSpec {
    by_name("c3c5-free").unwrap()
}
pub fn forbid_k3_i3() -> ClassSpec {
    by_name("forbid-k3-i3").unwrap()
}
pub fn linear_orders() -> ClassSpec {
    by_name("linear-orders").unwrap()
}
pub fn sets() -> ClassSpec {
    by_name("sets").unwrap()
}
pub fn tournaments() -> ClassSpec {
    by_name("tournaments").unwrap()
}
pub fn ordered_graphs() -> ClassSpec {
    by_name("ordered-graphs").unwrap()
}
pub fn sets_with_p() -> ClassSpec {
    by_name("sets-with-p").unwrap()
}

fn is_graph(s: &Structure, e: usize) -> bool {
    let n = s.size();
    (0..n).all(|a| !s.holds(e, &[a, a]) && (0..n).all(|b| s.holds(e, &[a, b]) == s.holds(e, &[b, a])))
}

fn is_strict_order(s: &Structure, lt: usize) -> bool {
    let n = s.size();
    for a in 0..n {
        if s.holds(lt, &[a, a]) {
            return false;
        }
        for b in 0..n {
            if a != b && s.holds(lt, &[a, b]) == s.holds(lt, &[b, a]) {
                return false;
            }
            for c in 0..n {
                if s.holds(lt, &[a, b]) && s.holds(lt, &[b, c]) && !s.holds(lt, &[a, c]) {
                    return false;
                }
            }
        }
    }
    true
}

fn is_tournament(s: &Structure) -> bool {
    let n = s.size();
    (0..n).all(|a| {
        !s.holds(0, &[a, a]) && (0..n).all(|b| a == b || s.holds(0, &[a, b]) != s.holds(0, &[b, a]))
    })
}

/// Rebuild every built-in class from its defining predicate. The data
/// files must agree with these (checked by a test).
pub fn build_from_predicates() -> Vec<ClassSpec> {
    let g = graph_sig();
    let graph_axioms = minimal_forbidden(&g, 2, &|s| is_graph(s, 0));
    let with = |name: &str, extra: Vec<Structure>| {
        let mut f = graph_axioms.clone();
        f.extend(extra);
        ClassSpec::new(name, g.clone(), f).unwrap()
    };
    let o = order_sig();
    let og = ordered_graph_sig();
    vec![
        with("graphs", vec![]),
        with("triangle-free", vec![complete_graph(3)]),
        with("c3c5-free", vec![complete_graph(3), cycle(5)]),
        with("forbid-k3-i3", vec![complete_graph(3), empty_graph(3)]),
        ClassSpec::new("linear-orders", o.clone(), minimal_forbidden(&o, 3, &|s| is_strict_order(s, 0))).unwrap(),
        ClassSpec::new("sets", Signature::empty(), vec![]).unwrap(),
        ClassSpec::new("tournaments", g.clone(), minimal_forbidden(&g, 2, &is_tournament)).unwrap(),
        ClassSpec::new(
            "ordered-graphs",
            og.clone(),
            minimal_forbidden(&og, 3, &|s| is_graph(s, 0) && is_strict_order(s, 1)),
        )
        .unwrap(),
        ClassSpec::new("sets-with-p", unary_sig(), vec![]).unwrap(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Set `FRAISSE_WRITE_DATA=1` to regenerate the data files.
    #[test]
    fn data_files_match_predicates() {
        let built = build_from_predicates();
        if std::env::var("FRAISSE_WRITE_DATA").is_ok() {
            let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
            for spec in &built {
                let text = serde_json::to_string_pretty(&spec.to_doc()).unwrap();
                std::fs::write(format!("{dir}/{}.json", spec.name), text + "\n").unwrap();
            }
        }
        for spec in built {
            let shipped = by_name(&spec.name).unwrap();
            assert_eq!(shipped, spec, "{}", spec.name);
        }
    }

    #[test]
    fn forbidden_list_shapes() {
        assert_eq!(graphs().forbidden().len(), 2);
        assert_eq!(linear_orders().forbidden().len(), 4);
        assert_eq!(tournaments().forbidden().len(), 3);
        assert_eq!(c3c5_free().forbidden().len(), 4);
        assert!(by_name("c3c5free").is_some());
        assert!(by_name("LO").is_some());
        assert!(by_name("nope").is_none());
    }
}
