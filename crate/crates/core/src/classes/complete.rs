//! Staged completion of partially specified structures.
//!
//! Some tuples of a structure are fixed, the rest are free. Free tuples are
//! decided in stages keyed by (largest vertex `v`, second largest vertex
//! `j`), with the loop stage of `v` first. After a stage, every tuple over
//! `{0..=j} ∪ {v}` is decided, so forbidden copies through both `v` and `j`
//! inside that set can be ruled out. Completions come out in lexicographic
//! order of the free-tuple values (absent before present).

use super::spec::ClassSpec;
use crate::structures::{all_tuples, Structure};

struct Stage {
    v: usize,
    j: Option<usize>,
    free: Vec<(usize, Vec<usize>)>,
    allowed: Vec<bool>,
    check: bool,
}

pub(crate) struct Completion<'a> {
    spec: &'a ClassSpec,
    base: Structure,
    stages: Vec<Stage>,
}

fn stage_key(t: &[usize]) -> (usize, Option<usize>) {
    let v = *t.iter().max().unwrap();
    let j = t.iter().filter(|&&x| x != v).max().copied();
    (v, j)
}

impl<'a> Completion<'a> {
    /// `base` holds the fixed tuples (free ones are overwritten). `regions`
    /// are vertex sets known to induce members; checks confined to one of
    /// them are skipped.
    pub fn new(
        spec: &'a ClassSpec,
        base: Structure,
        is_free: &dyn Fn(usize, &[usize]) -> bool,
        regions: &[Vec<bool>],
    ) -> Self {
        let n = base.size();
        let mut stages = Vec::new();
        let mut index = std::collections::HashMap::new();
        for v in 0..n {
            for j in std::iter::once(None).chain((0..v).map(Some)) {
                let mut allowed = vec![false; n];
                allowed[v] = true;
                if let Some(j) = j {
                    allowed[..=j].iter_mut().for_each(|x| *x = true);
                }
                let inside = regions
                    .iter()
                    .any(|r| allowed.iter().zip(r).all(|(&a, &b)| !a || b));
                index.insert((v, j), stages.len());
                stages.push(Stage {
                    v,
                    j,
                    free: Vec::new(),
                    allowed,
                    check: !inside,
                });
            }
        }
        for sym in 0..base.sig().len() {
            for t in all_tuples(n, base.sig().arity(sym)) {
                if is_free(sym, &t) {
                    stages[index[&stage_key(&t)]].free.push((sym, t));
                }
            }
        }
        let mut base = base;
        for st in &stages {
            for (sym, t) in &st.free {
                base.set(*sym, t, false);
            }
        }
        Completion { spec, base, stages }
    }

    pub fn free_count(&self) -> usize {
        self.stages.iter().map(|s| s.free.len()).sum()
    }

    /// Visit member completions in order; the visitor returns `false` to stop.
    pub fn run(&self, visit: &mut dyn FnMut(&Structure) -> bool) {
        let mut s = self.base.clone();
        self.stage(0, 0, &mut s, visit);
    }

    pub fn first(&self) -> Option<Structure> {
        let mut out = None;
        self.run(&mut |s| {
            out = Some(s.clone());
            false
        });
        out
    }

    fn stage(&self, si: usize, ti: usize, s: &mut Structure, visit: &mut dyn FnMut(&Structure) -> bool) -> bool {
        if si == self.stages.len() {
            return visit(s);
        }
        let st = &self.stages[si];
        if ti == st.free.len() {
            if st.check {
                let must: Vec<usize> = match st.j {
                    Some(j) => vec![st.v, j],
                    None => vec![st.v],
                };
                if self.spec.forbidden_through(s, &must, &st.allowed) {
                    return true;
                }
            }
            return self.stage(si + 1, 0, s, visit);
        }
        let (sym, t) = &st.free[ti];
        for value in [false, true] {
            s.set(*sym, t, value);
            if !self.stage(si, ti + 1, s, visit) {
                s.set(*sym, t, false);
                return false;
            }
        }
        s.set(*sym, t, false);
        true
    }
}
