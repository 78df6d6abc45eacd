use std::collections::BTreeMap;

use rayon::prelude::*;

use super::complete::Completion;
use super::spec::ClassSpec;
use crate::structures::{canonical_form, Structure};

/// One canonical representative per isomorphism type of each size
/// `0..=n`, each level sorted by canonical code.
///
/// Size `n` members are one-point extensions of size `n-1` representatives
/// (any member minus a vertex is a member), deduplicated by code.
pub fn generate_up_to(spec: &ClassSpec, n: usize) -> Vec<Vec<Structure>> {
    let mut levels = vec![vec![Structure::empty(spec.sig().clone(), 0)]];
    for m in 1..=n {
        let prev = &levels[m - 1];
        let found: Vec<Vec<(Vec<u8>, Structure)>> = prev
            .par_iter()
            .map(|rep| {
                let mut base = Structure::empty(spec.sig().clone(), m);
                let keep: Vec<usize> = (0..m - 1).collect();
                copy_onto(rep, &keep, &mut base);
                let mut region = vec![true; m];
                region[m - 1] = false;
                let comp = Completion::new(spec, base, &|_, t| t.contains(&(m - 1)), &[region]);
                let mut out = Vec::new();
                comp.run(&mut |s| {
                    let cf = canonical_form(s);
                    out.push((cf.code, s.relabel(&cf.relabeling)));
                    true
                });
                out
            })
            .collect();
        let mut merged = BTreeMap::new();
        for (code, s) in found.into_iter().flatten() {
            merged.entry(code).or_insert(s);
        }
        levels.push(merged.into_values().collect());
    }
    levels
}

pub fn generate_structures(spec: &ClassSpec, n: usize) -> Vec<Structure> {
    generate_up_to(spec, n).pop().unwrap()
}

/// Copy the relations of `src` onto `dst` along `map` (vertex `i` of `src`
/// goes to `map[i]`).
pub(crate) fn copy_onto(src: &Structure, map: &[usize], dst: &mut Structure) {
    let mut img = Vec::new();
    for sym in 0..src.sig().len() {
        for t in src.tuples(sym) {
            img.clear();
            img.extend(t.iter().map(|&x| map[x]));
            dst.set(sym, &img, true);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::library;

    #[test]
    fn counts_match_known_tables() {
        let g: Vec<usize> = generate_up_to(&library::graphs(), 5).iter().map(|l| l.len()).collect();
        assert_eq!(g, vec![1, 1, 2, 4, 11, 34]);
        let lo: Vec<usize> = generate_up_to(&library::linear_orders(), 6).iter().map(|l| l.len()).collect();
        assert_eq!(lo, vec![1; 7]);
        let t: Vec<usize> = generate_up_to(&library::tournaments(), 5).iter().map(|l| l.len()).collect();
        assert_eq!(t, vec![1, 1, 1, 2, 4, 12]);
    }

    #[test]
    fn ramsey_class_is_empty_at_six() {
        let levels = generate_up_to(&library::forbid_k3_i3(), 6);
        assert_eq!(levels[5].len(), 1);
        assert!(levels[6].is_empty());
    }

    #[test]
    fn output_is_sorted_by_code() {
        let reps = generate_structures(&library::graphs(), 4);
        let codes: Vec<_> = reps.iter().map(|s| canonical_form(s).code).collect();
        let mut sorted = codes.clone();
        sorted.sort();
        assert_eq!(codes, sorted);
    }
}
