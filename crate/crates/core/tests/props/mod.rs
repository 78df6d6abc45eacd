//! Property checks shared by the `properties` test target and the acceptance
//! runner. Each check returns a one-line summary or a failure message.
//! Randomness comes from fixed ChaCha seeds, so every run sees the same cases.
#![allow(dead_code)]

use std::cell::Cell;
use std::collections::BTreeSet;

use fraisse::classes::{check_ap, generate_up_to, library, ClassSpec, Verdict};
use fraisse::ramsey::{
    act_on_coloring, arrow_check, export_bad_coloring_cnf, find_arrow_witness, import_sat_model, instance,
    product_coloring, pullback_coloring, refines, thick_at_horizon, upper_evidence, ArrowQuery, ArrowVerdict,
    Coloring, DegreeConfig, EmbeddingIndex, EmbeddingSet, PartialMap,
};
use fraisse::structures::named::{complete_graph, cycle, empty_graph, graph_sig, linear_order, path};
use fraisse::structures::{
    all_tuples, canonical_form, compose, enumerate_copies, enumerate_embeddings, is_embedding, Structure,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<String, String>;

fn runner(cases: u32) -> TestRunner {
    let cfg = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(cfg, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// ---------------------------------------------------------------------------
// brute-force oracles

/// Every injective map, tested tuple by tuple.
pub fn brute_embeddings(a: &Structure, b: &Structure) -> Vec<Vec<usize>> {
    fn go(a: &Structure, b: &Structure, map: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if map.len() == a.size() {
            let ok = (0..a.sig().len()).all(|sym| {
                all_tuples(a.size(), a.sig().arity(sym)).all(|t| {
                    let img: Vec<usize> = t.iter().map(|&x| map[x]).collect();
                    a.holds(sym, &t) == b.holds(sym, &img)
                })
            });
            if ok {
                out.push(map.clone());
            }
            return;
        }
        for v in 0..b.size() {
            if !used[v] {
                used[v] = true;
                map.push(v);
                go(a, b, map, used, out);
                map.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    if a.size() <= b.size() {
        go(a, b, &mut Vec::new(), &mut vec![false; b.size()], &mut out);
    }
    out.sort();
    out
}

pub fn brute_isomorphic(a: &Structure, b: &Structure) -> bool {
    a.size() == b.size() && !brute_embeddings(a, b).is_empty()
}

/// Images of embeddings, as sorted vertex sets.
pub fn brute_copies(a: &Structure, b: &Structure) -> Vec<Vec<usize>> {
    let set: BTreeSet<Vec<usize>> = brute_embeddings(a, b)
        .into_iter()
        .map(|mut m| {
            m.sort_unstable();
            m
        })
        .collect();
    set.into_iter().collect()
}

// ---------------------------------------------------------------------------
// corpus

/// Small members of several classes, grouped by class.
pub fn corpus() -> Vec<(ClassSpec, Vec<Structure>)> {
    let take = |name: &str, n: usize| {
        let spec = library::by_name(name).unwrap();
        let all: Vec<Structure> = generate_up_to(&spec, n).into_iter().flatten().filter(|s| s.size() > 0).collect();
        (spec, all)
    };
    let mut graphs = take("graphs", 4);
    graphs.1.extend([cycle(5), path(5), complete_graph(5), empty_graph(5)]);
    vec![
        graphs,
        take("linear-orders", 5),
        take("tournaments", 4),
        take("ordered-graphs", 3),
        take("sets-with-p", 3),
    ]
}

fn random_perm(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

fn random_graph(n: usize, seed: u64) -> Structure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = Structure::empty(graph_sig(), n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(0.5) {
                s.set(0, &[a, b], true);
                s.set(0, &[b, a], true);
            }
        }
    }
    s
}

// ---------------------------------------------------------------------------
// structures

pub fn counting_identity() -> Check {
    let mut pairs = 0;
    for (_, members) in corpus() {
        for a in &members {
            for b in &members {
                if a.size() > b.size() {
                    continue;
                }
                let embs = enumerate_embeddings(a, b).map_err(e2s)?;
                let mut sorted = embs.clone();
                sorted.sort();
                if sorted != brute_embeddings(a, b) {
                    return Err(format!("embedding sets differ from the oracle for {a:?} into {b:?}"));
                }
                let copies = enumerate_copies(a, b).map_err(e2s)?;
                if copies != brute_copies(a, b) {
                    return Err(format!("copies differ from the oracle for {a:?} into {b:?}"));
                }
                let aut = brute_embeddings(a, a).len();
                if embs.len() != copies.len() * aut {
                    return Err(format!("|Emb| = {} but {} copies x {aut} automorphisms", embs.len(), copies.len()));
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("|Emb(A,B)| = |copies| * |Aut(A)| on {pairs} corpus pairs, all sets equal to brute force"))
}

pub fn composition_closure() -> Check {
    let corpus = corpus();
    let mut r = runner(200);
    let groups: Vec<usize> = (0..corpus.len()).collect();
    let strat = (proptest::sample::select(groups), any::<[u16; 3]>());
    let composed = Cell::new(0usize);
    r.run(&strat, |(gi, picks)| {
        let members = &corpus[gi].1;
        let mut trio: Vec<&Structure> = picks.iter().map(|&p| &members[p as usize % members.len()]).collect();
        trio.sort_by_key(|s| s.size());
        let (a, b, c) = (trio[0], trio[1], trio[2]);
        let ab = enumerate_embeddings(a, b).unwrap();
        let bc = enumerate_embeddings(b, c).unwrap();
        let ac: BTreeSet<Vec<usize>> = enumerate_embeddings(a, c).unwrap().into_iter().collect();
        for f in &ab {
            for g in &bc {
                let gf = compose(g, f);
                prop_assert!(is_embedding(&gf, a, c).unwrap());
                prop_assert!(ac.contains(&gf));
                composed.set(composed.get() + 1);
            }
        }
        Ok(())
    })
    .map_err(e2s)?;
    Ok(format!("{} composites g∘f landed in Emb(A,C) over 200 random triples", composed.get()))
}

pub fn canonical_invariance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut n = 0;
    for (_, members) in corpus() {
        for s in &members {
            let code = canonical_form(s).code;
            for _ in 0..50 {
                let p = random_perm(s.size(), &mut rng);
                if canonical_form(&s.relabel(&p)).code != code {
                    return Err(format!("code changed under relabeling {p:?} of {s:?}"));
                }
            }
            n += 1;
        }
    }
    Ok(format!("codes stable under 50 random relabelings of each of {n} structures"))
}

pub fn canonical_separates() -> Check {
    let mut pairs = 0;
    for (_, members) in corpus() {
        for (i, a) in members.iter().enumerate() {
            for b in &members[i..] {
                if a.size() != b.size() {
                    continue;
                }
                let same = canonical_form(a).code == canonical_form(b).code;
                if same != brute_isomorphic(a, b) {
                    return Err(format!("code equality {same} disagrees with isomorphism for {a:?}, {b:?}"));
                }
                pairs += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let graphs: Vec<Structure> = (0..40).map(|_| random_graph(5, rng.gen())).collect();
    for (i, a) in graphs.iter().enumerate() {
        for b in &graphs[i + 1..] {
            if (canonical_form(a).code == canonical_form(b).code) != brute_isomorphic(a, b) {
                return Err("random graphs: code equality disagrees with isomorphism".into());
            }
            pairs += 1;
        }
    }
    Ok(format!("equal codes iff isomorphic on {pairs} pairs"))
}

// ---------------------------------------------------------------------------
// thick sets

/// {x∘f : x ∈ S} as a set of embeddings of `a`.
fn push_forward(set: &EmbeddingSet, a: &Structure, f: &[usize]) -> EmbeddingSet {
    let from = EmbeddingIndex::new(&set.a, &set.target).unwrap();
    let to = EmbeddingIndex::new(a, &set.target).unwrap();
    let members = set.members.iter().filter_map(|&i| to.index_of(&compose(&from.embs[i], f))).collect();
    EmbeddingSet::new(a, &set.target, members).unwrap()
}

/// Embeddings of `a` into `top` with image inside `keep`, plus extras.
fn core_plus(a: &Structure, top: &Structure, keep: &[bool], extra: &[bool]) -> EmbeddingSet {
    let idx = EmbeddingIndex::new(a, top).unwrap();
    let members = (0..idx.len())
        .filter(|&i| idx.embs[i].iter().all(|&v| keep[v]) || extra[i % extra.len()])
        .collect();
    EmbeddingSet::new(a, top, members).unwrap()
}

/// Thickness of S at s carries over to {x∘f : x ∈ S} at s - |B| + |A|.
/// Cases are the embeddings f whose image misses one end of B, where the
/// new point can be added outside a copy of C.
pub fn thick_pullback() -> Check {
    let lo = library::linear_orders();
    let gr = library::graphs();
    let gtop = random_graph(9, 5);
    let cases: Vec<(&ClassSpec, Structure, Structure, Vec<usize>, Structure)> = vec![
        (&lo, linear_order(1), linear_order(2), vec![0], linear_order(8)),
        (&lo, linear_order(1), linear_order(2), vec![1], linear_order(8)),
        (&lo, linear_order(2), linear_order(3), vec![0, 1], linear_order(8)),
        (&lo, linear_order(2), linear_order(3), vec![1, 2], linear_order(8)),
        (&gr, complete_graph(1), complete_graph(2), vec![0], gtop.clone()),
        (&gr, complete_graph(1), complete_graph(2), vec![1], gtop.clone()),
        (&gr, complete_graph(1), path(3), vec![1], gtop),
    ];
    let premises = Cell::new(0usize);
    for (spec, a, b, f, top) in &cases {
        let mut r = runner(24);
        let n = top.size();
        let strat = (proptest::collection::vec(any::<bool>(), n), proptest::collection::vec(proptest::bool::weighted(0.1), 37));
        r.run(&strat, |(keep, extra)| {
            let s_set = core_plus(b, top, &keep, &extra);
            let t_set = push_forward(&s_set, a, f);
            for s in b.size()..=5 {
                if !thick_at_horizon(spec, &s_set, s).unwrap().thick {
                    break;
                }
                let reduced = s - b.size() + a.size();
                premises.set(premises.get() + 1);
                prop_assert!(thick_at_horizon(spec, &t_set, reduced).unwrap().thick, "f = {:?}, s = {}", f, s);
            }
            Ok(())
        })
        .map_err(e2s)?;
    }
    if premises.get() == 0 {
        return Err("no thick set was generated; the check is vacuous".into());
    }
    Ok(format!("{} thick sets pulled back to thick sets at the reduced horizon", premises.get()))
}

/// The middle embedding LO_2 → LO_3 needs a fresh point between every pair,
/// which one extra point cannot supply: on LO_4 the full set of triples is
/// thick at 4 but its push-forward is not thick at 3.
pub fn thick_pullback_middle_gap() -> Check {
    let lo = library::linear_orders();
    let top = linear_order(4);
    let s_set = EmbeddingSet::full(&linear_order(3), &top).map_err(e2s)?;
    let t_set = push_forward(&s_set, &linear_order(2), &[0, 2]);
    let s_thick = thick_at_horizon(&lo, &s_set, 4).map_err(e2s)?.thick;
    let t_thick = thick_at_horizon(&lo, &t_set, 3).map_err(e2s)?.thick;
    if s_thick && !t_thick {
        Ok("middle embedding: thick at 4 does not give thick at 3 on LO_4".into())
    } else {
        Err(format!("expected thick/not thick, got {s_thick}/{t_thick}"))
    }
}

// ---------------------------------------------------------------------------
// Ramsey degrees

fn substructures(b: &Structure) -> Vec<Structure> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 1u32..(1 << b.size()) - 1 {
        let keep: Vec<usize> = (0..b.size()).filter(|&v| mask >> v & 1 == 1).collect();
        let sub = b.pull(&keep);
        if seen.insert(canonical_form(&sub).code) {
            out.push(sub);
        }
    }
    out
}

/// When the (k+1, k) instances verify for B, they verify for each A ≤ B
/// with the same bounds.
pub fn ramsey_monotonicity() -> Check {
    let lo = library::linear_orders();
    let gr = library::graphs();
    let cases = [
        (&lo, linear_order(3), 3, 6),
        (&lo, linear_order(2), 3, 6),
        (&gr, complete_graph(2), 2, 4),
        (&gr, empty_graph(2), 2, 4),
    ];
    let mut checked = Vec::new();
    for (spec, b, b_bound, witness_bound) in cases {
        let cfg = DegreeConfig { r_max: 3, b_bound: Some(b_bound), witness_bound, s: 3 };
        let (Some(k), _) = upper_evidence(spec, &b, &cfg).map_err(e2s)? else {
            return Err(format!("no upper evidence for B of size {} in {}", b.size(), spec.name));
        };
        for a in substructures(&b) {
            let sub = DegreeConfig { r_max: k + 1, ..cfg.clone() };
            match upper_evidence(spec, &a, &sub).map_err(e2s)?.0 {
                Some(j) if j <= k => checked.push(format!("{}:{}<{}", spec.name, a.size(), b.size())),
                other => return Err(format!("B has evidence {k} but a substructure has {other:?}")),
            }
        }
    }
    Ok(format!("substructure evidence never exceeded B's: {}", checked.join(", ")))
}

/// With degree-1 evidence, any 2-partition of a thick set has a thick part.
pub fn partition_thickness() -> Check {
    let lo = library::linear_orders();
    let top = linear_order(9);
    let horizon = 3;
    let parts = Cell::new(0usize);
    for a in [linear_order(1), linear_order(2)] {
        let w = find_arrow_witness(&lo, &linear_order(horizon), &a, 2, 1, 9).map_err(e2s)?;
        let need = w.witness.ok_or("no arrow witness within the top")?.size();
        let idx = EmbeddingIndex::new(&a, &top).map_err(e2s)?;
        let mut r = runner(48);
        let strat = (proptest::sample::subsequence((0..9usize).collect::<Vec<_>>(), need..=9), proptest::collection::vec(any::<bool>(), idx.len()));
        r.run(&strat, |(u, split)| {
            let in_u = |e: &[usize]| e.iter().all(|v| u.contains(v));
            let s: Vec<usize> = (0..idx.len()).filter(|&i| in_u(&idx.embs[i])).collect();
            let whole = EmbeddingSet::new(&a, &top, s.clone()).unwrap();
            prop_assert!(thick_at_horizon(&lo, &whole, u.len()).unwrap().thick);
            let p1: Vec<usize> = s.iter().copied().filter(|&i| split[i]).collect();
            let p2: Vec<usize> = s.iter().copied().filter(|&i| !split[i]).collect();
            let t1 = thick_at_horizon(&lo, &EmbeddingSet::new(&a, &top, p1).unwrap(), horizon).unwrap().thick;
            let t2 = thick_at_horizon(&lo, &EmbeddingSet::new(&a, &top, p2).unwrap(), horizon).unwrap().thick;
            prop_assert!(t1 || t2);
            parts.set(parts.get() + 1);
            Ok(())
        })
        .map_err(e2s)?;
    }
    Ok(format!("{} random 2-partitions of thick sets each kept a thick part at horizon {horizon}", parts.get()))
}

/// A bad coloring from a failing arrow splits Emb(A, C) into two pieces,
/// neither thick at |B|.
pub fn bad_coloring_splits() -> Check {
    let cases = [
        (library::linear_orders(), linear_order(5), linear_order(3), linear_order(2)),
        (library::graphs(), complete_graph(4), complete_graph(3), complete_graph(2)),
        (library::graphs(), cycle(5), path(3), complete_graph(1)),
    ];
    let mut n = 0;
    for (spec, c, b, a) in &cases {
        let res = arrow_check(c, b, a, 2, 1).map_err(e2s)?;
        let col = res.bad_coloring().ok_or("arrow unexpectedly holds")?;
        for i in 1..=2 {
            let piece = EmbeddingSet::new(a, c, col.class(i)).map_err(e2s)?;
            if thick_at_horizon(spec, &piece, b.size()).map_err(e2s)?.thick {
                return Err(format!("color class {i} is thick at {}", b.size()));
            }
        }
        n += 1;
    }
    Ok(format!("{n} bad colorings split into two non-thick pieces"))
}

/// Every full 2-coloring of Emb(A, top) has a class thick at s when the
/// arrow instances for s have witnesses inside the top.
pub fn large_colorings_have_thick_class() -> Check {
    let lo = library::linear_orders();
    let mut total = 0;
    for (a, top, s) in [(linear_order(1), linear_order(5), 3), (linear_order(1), linear_order(7), 4), (linear_order(2), linear_order(6), 3)] {
        for b in a.size()..=s {
            let w = find_arrow_witness(&lo, &linear_order(b), &a, 2, 1, top.size()).map_err(e2s)?;
            if w.witness.is_none() {
                return Err(format!("no witness for LO_{b} inside the top"));
            }
        }
        let idx = EmbeddingIndex::new(&a, &top).map_err(e2s)?;
        let n = idx.len();
        for bits in 0u64..1 << n {
            let c1: Vec<usize> = (0..n).filter(|&i| bits >> i & 1 == 1).collect();
            let c2: Vec<usize> = (0..n).filter(|&i| bits >> i & 1 == 0).collect();
            let t1 = thick_at_horizon(&lo, &EmbeddingSet::new(&a, &top, c1).map_err(e2s)?, s).map_err(e2s)?.thick;
            if !t1 && !thick_at_horizon(&lo, &EmbeddingSet::new(&a, &top, c2).map_err(e2s)?, s).map_err(e2s)?.thick {
                return Err(format!("coloring {bits:b} of Emb(LO_{}, LO_{}) has no thick class", a.size(), top.size()));
            }
        }
        total += 1u64 << n;
    }
    Ok(format!("all {total} full 2-colorings had a class thick at the horizon"))
}

/// Arrow verdicts do not depend on vertex names in C or on color names.
pub fn arrow_symmetry() -> Check {
    let cases = [
        (linear_order(5), linear_order(3), linear_order(2)),
        (linear_order(6), linear_order(3), linear_order(2)),
        (complete_graph(4), complete_graph(3), complete_graph(2)),
        (cycle(5), path(3), complete_graph(1)),
    ];
    let checked = Cell::new(0usize);
    for (c, b, a) in &cases {
        let base = arrow_check(c, b, a, 2, 1).map_err(e2s)?;
        let mut r = runner(12);
        r.run(&(any::<u64>(), any::<bool>()), |(seed, swap)| {
            let perm = random_perm(c.size(), &mut ChaCha8Rng::seed_from_u64(seed));
            let c2 = c.relabel(&perm);
            let res = arrow_check(&c2, b, a, 2, 1).unwrap();
            prop_assert_eq!(res.verdict, base.verdict);
            prop_assert!(res.verify().unwrap());
            if let Some(col) = &base.coloring {
                // carry the coloring across the relabeling, optionally swapping colors
                let from = EmbeddingIndex::new(a, c).unwrap();
                let to = EmbeddingIndex::new(a, &c2).unwrap();
                let mut moved = vec![0usize; to.len()];
                for (i, e) in from.embs.iter().enumerate() {
                    let j = to.index_of(&compose(&perm, e)).unwrap();
                    moved[j] = (if swap { 3 - col[i] } else { col[i] }) - 1;
                }
                let inst = instance(&res.query).unwrap();
                prop_assert!(inst.good_constraint(&moved).is_none());
            }
            checked.set(checked.get() + 1);
            Ok(())
        })
        .map_err(e2s)?;
    }
    Ok(format!("{} relabeled instances kept their verdicts and bad colorings", checked.get()))
}

/// The exported CNF is satisfiable exactly when the arrow fails, and a
/// solver's model imports as a verified bad coloring.
pub fn cnf_agrees() -> Check {
    let cases = [
        (linear_order(5), linear_order(3), linear_order(2)),
        (linear_order(6), linear_order(3), linear_order(2)),
        (complete_graph(4), complete_graph(3), complete_graph(2)),
        (cycle(5), path(3), complete_graph(1)),
    ];
    let mut out = Vec::new();
    for (c, b, a) in &cases {
        let q = ArrowQuery { c: c.clone(), b: b.clone(), a: a.clone(), r: 2, k: 1, structural: false };
        let native = arrow_check(c, b, a, 2, 1).map_err(e2s)?;
        let cnf = export_bad_coloring_cnf(&q).map_err(e2s)?;
        let mut solver = varisat::Solver::new();
        solver.add_dimacs_cnf(cnf.text.as_bytes()).map_err(e2s)?;
        let sat = solver.solve().map_err(e2s)?;
        if sat != (native.verdict == ArrowVerdict::Fails) {
            return Err(format!("solver says sat={sat}, search says {:?}", native.verdict));
        }
        let answer = match solver.model() {
            Some(model) if sat => {
                let lits: Vec<String> = model.iter().map(|l| l.to_dimacs().to_string()).collect();
                format!("s SATISFIABLE\nv {} 0\n", lits.join(" "))
            }
            _ => "s UNSATISFIABLE\n".to_string(),
        };
        let imported = import_sat_model(&q, &answer).map_err(e2s)?;
        if imported.verdict != native.verdict || !imported.verify().map_err(e2s)? {
            return Err("imported solver answer does not verify".into());
        }
        out.push(if sat { "SAT" } else { "UNSAT" });
    }
    Ok(format!("solver and search agree: {}", out.join(", ")))
}

/// Linear orders: arrow witnesses for every A ≤ B up to 3 exist, and
/// amalgamation holds over the same range.
pub fn ap_from_rp() -> Check {
    let lo = library::linear_orders();
    let mut pairs = 0;
    for n in 1..=3 {
        for m in 1..n {
            let w = find_arrow_witness(&lo, &linear_order(n), &linear_order(m), 2, 1, 6).map_err(e2s)?;
            if w.witness.is_none() {
                return Err(format!("no witness for LO_{m} in LO_{n}"));
            }
            pairs += 1;
        }
    }
    let ap = check_ap(&lo, 3, 6);
    if ap.verdict != Verdict::Holds {
        return Err(format!("amalgamation verdict {:?}", ap.verdict));
    }
    Ok(format!("{pairs} arrow instances verified and {} triples amalgamate", ap.triples_checked))
}

// ---------------------------------------------------------------------------
// coloring algebra

fn random_coloring(a: &Structure, top: &Structure, r: usize, seed: u64) -> Coloring {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let idx = EmbeddingIndex::new(a, top).unwrap();
    let colors = (0..idx.len()).map(|_| rng.gen_range(1..=r)).collect();
    Coloring::full(a, top, r, colors).unwrap()
}

fn sorted_sample(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut v = rand::seq::index::sample(rng, n, k).into_vec();
    v.sort_unstable();
    v
}

fn order_preserving(n: usize, rng: &mut ChaCha8Rng) -> PartialMap {
    let k = rng.gen_range(0..=n);
    let domain = sorted_sample(rng, n, k);
    PartialMap { domain, range: sorted_sample(rng, n, k) }
}

pub fn coloring_laws() -> Check {
    let a = linear_order(2);
    let top = linear_order(6);
    let mut r = runner(64);
    let n = Cell::new(0usize);
    let strat = (any::<u64>(), 2usize..4, 2usize..4);
    r.run(&strat, |(seed, k, l)| {
        let g = random_coloring(&a, &top, k, seed);
        let d = random_coloring(&a, &top, l, seed ^ 0x9e37);
        let p = product_coloring(&g, &d).unwrap();
        prop_assert_eq!(p.r, k * l);
        prop_assert!(refines(&p, &g).unwrap() && refines(&p, &d).unwrap());
        prop_assert!(refines(&g, &g).unwrap());

        // pullback along f: LO_2 → LO_3, then h: LO_3 → LO_4
        let id = pullback_coloring(&g, &[0, 1], &a).unwrap();
        prop_assert_eq!(&id, &g);
        for f in enumerate_embeddings(&a, &linear_order(3)).unwrap() {
            let once = pullback_coloring(&g, &f, &linear_order(3)).unwrap();
            for h in enumerate_embeddings(&linear_order(3), &linear_order(4)).unwrap() {
                let twice = pullback_coloring(&once, &h, &linear_order(4)).unwrap();
                let direct = pullback_coloring(&g, &compose(&h, &f), &linear_order(4)).unwrap();
                prop_assert_eq!(twice, direct);
            }
        }

        // actions of partial isomorphisms
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert_eq!(act_on_coloring(&PartialMap::identity(6), &g).unwrap(), g.clone());
        let g1 = order_preserving(6, &mut rng);
        let h1 = order_preserving(6, &mut rng);
        let stepwise = act_on_coloring(&h1, &act_on_coloring(&g1, &g).unwrap()).unwrap();
        let composite = act_on_coloring(&g1.then(&h1), &g).unwrap();
        prop_assert_eq!(&stepwise, &composite);
        let pd = act_on_coloring(&g1, &p).unwrap();
        let pg = act_on_coloring(&g1, &g).unwrap();
        prop_assert!(refines(&pd, &pg).unwrap());
        n.set(n.get() + 1);
        Ok(())
    })
    .map_err(e2s)?;

    // graphs: random partial maps that happen to be partial isomorphisms
    let gtop = random_graph(7, 3);
    let k1 = complete_graph(1);
    let k2 = complete_graph(2);
    let mut r = runner(64);
    r.run(&(any::<u64>(), any::<u64>()), |(seed, mseed)| {
        let g = random_coloring(&k2, &gtop, 2, seed);
        let d = random_coloring(&k2, &gtop, 3, seed ^ 1);
        let p = product_coloring(&g, &d).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(mseed);
        let mut maps = Vec::new();
        while maps.len() < 2 {
            let k = rng.gen_range(0..=4);
            let m = PartialMap {
                domain: rand::seq::index::sample(&mut rng, 7, k).into_vec(),
                range: rand::seq::index::sample(&mut rng, 7, k).into_vec(),
            };
            if m.is_partial_iso(&gtop) {
                maps.push(m);
            }
        }
        let stepwise = act_on_coloring(&maps[1], &act_on_coloring(&maps[0], &g).unwrap()).unwrap();
        prop_assert_eq!(stepwise, act_on_coloring(&maps[0].then(&maps[1]), &g).unwrap());
        prop_assert!(refines(&act_on_coloring(&maps[0], &p).unwrap(), &act_on_coloring(&maps[0], &g).unwrap()).unwrap());
        let pts = random_coloring(&k1, &gtop, 2, seed);
        let via = pullback_coloring(&pullback_coloring(&pts, &[1], &k2).unwrap(), &[0, 1], &k2).unwrap();
        prop_assert_eq!(via, pullback_coloring(&pts, &[1], &k2).unwrap());
        n.set(n.get() + 1);
        Ok(())
    })
    .map_err(e2s)?;
    Ok(format!("product, refinement, pullback and action laws held on {} random cases", n.get()))
}

/// A class syndetic at s pulls back to a class syndetic at s + |A_n| - |A_m|.
pub fn syndetic_pullback() -> Check {
    let lo = library::linear_orders();
    let gr = library::graphs();
    let gtop = random_graph(8, 9);
    let cases: Vec<(&ClassSpec, Structure, usize)> = vec![(&lo, linear_order(7), 3), (&gr, gtop, 2)];
    let premises = Cell::new(0usize);
    for (spec, top, s) in cases {
        let a = if spec.name == lo.name { linear_order(1) } else { complete_graph(1) };
        let b = if spec.name == lo.name { linear_order(2) } else { complete_graph(2) };
        let mut r = runner(32);
        r.run(&any::<u64>(), |seed| {
            let g = random_coloring(&a, &top, 2, seed);
            for f in [[0usize], [1]] {
                let pulled = pullback_coloring(&g, &f, &b).unwrap();
                for i in 1..=2 {
                    let cls = EmbeddingSet::new(&a, &top, g.class(i)).unwrap();
                    if thick_at_horizon(spec, &cls.complement(), s).unwrap().thick {
                        continue;
                    }
                    premises.set(premises.get() + 1);
                    let back = EmbeddingSet::new(&b, &top, pulled.class(i)).unwrap();
                    let s2 = s + b.size() - a.size();
                    prop_assert!(!thick_at_horizon(spec, &back.complement(), s2).unwrap().thick);
                }
            }
            Ok(())
        })
        .map_err(e2s)?;
    }
    if premises.get() == 0 {
        return Err("no syndetic class was generated; the check is vacuous".into());
    }
    Ok(format!("{} syndetic classes pulled back to syndetic classes", premises.get()))
}

/// Every check, in the order the acceptance runner reports them.
pub fn all() -> Vec<(&'static str, fn() -> Check)> {
    vec![
        ("composition closure", composition_closure),
        ("counting identity", counting_identity),
        ("canonical relabeling invariance", canonical_invariance),
        ("canonical codes separate", canonical_separates),
        ("thick pullback", thick_pullback),
        ("thick pullback middle gap", thick_pullback_middle_gap),
        ("ramsey monotonicity", ramsey_monotonicity),
        ("partition thickness", partition_thickness),
        ("bad colorings split", bad_coloring_splits),
        ("large colorings have a thick class", large_colorings_have_thick_class),
        ("coloring laws", coloring_laws),
        ("syndetic pullback", syndetic_pullback),
        ("ap from rp", ap_from_rp),
        ("arrow symmetry", arrow_symmetry),
        ("cnf agrees", cnf_agrees),
    ]
}
