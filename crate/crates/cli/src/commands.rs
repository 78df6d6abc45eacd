use std::fmt::Write as _;

use fraisse::classes::{
    check_age_class, check_ap, check_extension_from, check_extension_property, check_ultrahomogeneity, flim_prefix,
    generate_structures, generate_up_to, ClassSpec, FlimConfig, Verdict,
};
use fraisse::expansions::{
    check_expp, check_precompact, check_reasonable, degree_equals_expansion_count, expansions_of, reachable_points,
    ConsistencyStatus, ExpPVerdict,
};
use fraisse::ramsey::{
    bad_coloring_tree, degree_report, export_bad_coloring_cnf, import_sat_model, instance, order_pattern,
    syndetic_at_horizon, thick_at_horizon, ArrowQuery, ArrowResult, ArrowVerdict, DegreeConfig, DegreeStatus,
    EmbeddingSet, ThickReport,
};
use fraisse::structures::{automorphisms, canonical_form, enumerate_copies, enumerate_embeddings, Structure};
use fraisse::Error;
use serde_json::json;

use crate::cache::Cache;
use crate::input::{self, Input, InputError};
use crate::report::{map1, structure_text, Outcome, EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_VERDICT};
use crate::{ArrowArgs, Cmd, PrefixArgs, SetArgs};

pub fn name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Gen { .. } => "gen",
        Cmd::Emb { .. } => "emb",
        Cmd::Aut { .. } => "aut",
        Cmd::Member { .. } => "member",
        Cmd::CheckAge { .. } => "check-age",
        Cmd::CheckAp { .. } => "check-ap",
        Cmd::Flim { .. } => "flim",
        Cmd::ExtProp { .. } => "ext-prop",
        Cmd::Arrow { .. } => "arrow",
        Cmd::Degree { .. } => "degree",
        Cmd::Thick { .. } => "thick",
        Cmd::Syndetic { .. } => "syndetic",
        Cmd::CnfExport { .. } => "cnf-export",
        Cmd::ImportModel { .. } => "import-model",
        Cmd::Expansions { .. } => "expansions",
        Cmd::CheckExpp { .. } => "check-expp",
        Cmd::Consistency { .. } => "consistency",
        Cmd::LogicAction { .. } => "logic-action",
        Cmd::Tree { .. } => "tree",
        Cmd::Verify { .. } => "verify",
    }
}

fn class(arg: &str) -> Input<ClassSpec> {
    let loaded = input::class(arg)?;
    for w in &loaded.warnings {
        eprintln!("warning: {w}");
    }
    Ok(loaded.spec)
}

fn member_of(spec: &ClassSpec, arg: &str) -> Input<Structure> {
    let s = input::structure(arg)?;
    spec.check_sig(&s)?;
    Ok(s)
}

fn flim_config(p: &PrefixArgs) -> FlimConfig {
    FlimConfig { steps: p.steps, seed: p.seed, pair_bound: p.pair_bound, max_size: p.max_size, ..FlimConfig::default() }
}

fn top_for(spec: &ClassSpec, top: &Option<String>, p: &PrefixArgs) -> Input<Structure> {
    match top {
        Some(t) => member_of(spec, t),
        None => Ok(flim_prefix(spec, &flim_config(p))?.top),
    }
}

fn query(q: &ArrowArgs) -> Input<ArrowQuery> {
    let c = input::structure(&q.c)?;
    let b = input::structure(&q.b)?;
    let a = input::structure(&q.a)?;
    a.check_same_sig(&b)?;
    a.check_same_sig(&c)?;
    Ok(ArrowQuery { c, b, a, r: q.r, k: q.k, structural: q.structural })
}

pub fn run(cmd: &Cmd, cache: &mut Cache) -> Input<Outcome> {
    let n = name(cmd);
    match cmd {
        Cmd::Gen { class: cl, size, up_to } => {
            let spec = class(cl)?;
            let levels: Vec<Vec<Structure>> = if *up_to {
                generate_up_to(&spec, *size)
            } else {
                let mut v = vec![Vec::new(); *size];
                v.push(generate_structures(&spec, *size));
                v
            };
            let from = if *up_to { 0 } else { *size };
            let mut text = String::new();
            for (k, level) in levels.iter().enumerate().skip(from) {
                writeln!(text, "{} structure(s) of size {k} in {}", level.len(), spec.name).unwrap();
                for s in level {
                    writeln!(text, "  {}", structure_text(s)).unwrap();
                }
            }
            let counts: Vec<usize> = levels.iter().skip(from).map(|l| l.len()).collect();
            let structures: Vec<&Structure> = levels.iter().skip(from).flatten().collect();
            Ok(Outcome::new(n, "ok", EXIT_VERDICT, json!({ "class": spec.name, "from": from, "counts": counts, "structures": structures }), text))
        }
        Cmd::Emb { a, b } => {
            let a = input::structure(a)?;
            let b = input::structure(b)?;
            let embs = enumerate_embeddings(&a, &b)?;
            let copies = enumerate_copies(&a, &b)?;
            let aut = automorphisms(&a).len();
            let mut text = format!("{} embedding(s), {} copies, |Aut(A)| = {aut}\n", embs.len(), copies.len());
            for e in &embs {
                writeln!(text, "  {}", map1(e)).unwrap();
            }
            Ok(Outcome::new(n, "ok", EXIT_VERDICT, json!({ "embeddings": embs, "copies": copies, "aut_size": aut }), text))
        }
        Cmd::Aut { a } => {
            let a = input::structure(a)?;
            let auts = automorphisms(&a);
            let code = canonical_form(&a).hex();
            let mut text = format!("|Aut| = {}, canonical code {code}\n", auts.len());
            for g in &auts {
                writeln!(text, "  {}", map1(g)).unwrap();
            }
            Ok(Outcome::new(n, "ok", EXIT_VERDICT, json!({ "automorphisms": auts, "canonical_code": code }), text))
        }
        Cmd::Member { class: cl, a } => {
            let spec = class(cl)?;
            let a = member_of(&spec, a)?;
            let w = spec.forbidden_witness(&a);
            let (status, text) = match &w {
                None => ("member", format!("member of {}\n", spec.name)),
                Some((i, m)) => (
                    "not-member",
                    format!("not a member of {}: forbidden #{} embeds via {}\n", spec.name, i + 1, map1(m)),
                ),
            };
            let witness = w.map(|(i, m)| json!({ "forbidden": spec.forbidden()[i], "map": m }));
            Ok(Outcome::new(n, status, EXIT_VERDICT, json!({ "class": spec.name, "member": status == "member", "witness": witness }), text))
        }
        Cmd::CheckAge { class: cl, bound } => {
            let spec = class(cl)?;
            let r = check_age_class(&spec, *bound);
            let (status, code) = if r.is_age_at_bound {
                ("age-at-bound", EXIT_VERDICT)
            } else if r.first_empty_size.is_some() || r.jep == Verdict::Fails {
                ("not-age", EXIT_VERDICT)
            } else {
                ("inconclusive-at-bound", EXIT_INCONCLUSIVE)
            };
            let mut text = format!("{}: {status} (bound {bound})\n  counts by size: {:?}\n", spec.name, r.counts);
            if let Some(s) = r.first_empty_size {
                writeln!(text, "  no members of size {s}; a limit prefix would be refused").unwrap();
            }
            writeln!(text, "  joint embedding: {:?} over {} pairs", r.jep, r.jep_pairs_checked).unwrap();
            Ok(Outcome::new(n, status, code, json!({ "class": spec.to_doc(), "report": r }), text))
        }
        Cmd::CheckAp { class: cl, triple_bound, amalgam_bound } => {
            let spec = class(cl)?;
            let r = check_ap(&spec, *triple_bound, *amalgam_bound);
            let (status, code) = match r.verdict {
                Verdict::Holds => ("holds-at-bound", EXIT_VERDICT),
                Verdict::Fails => ("fails", EXIT_VERDICT),
                Verdict::Inconclusive => ("inconclusive-at-bound", EXIT_INCONCLUSIVE),
            };
            let mut text = format!(
                "{}: amalgamation {status} ({} triples up to size {triple_bound}, amalgams up to {amalgam_bound})\n",
                spec.name, r.triples_checked
            );
            if let Some(c) = r.first_failure.as_ref().or(r.first_inconclusive.as_ref()) {
                writeln!(text, "  A: {}", structure_text(&c.a)).unwrap();
                writeln!(text, "  B: {}  f = {}", structure_text(&c.b), map1(&c.f)).unwrap();
                writeln!(text, "  C: {}  g = {}", structure_text(&c.c), map1(&c.g)).unwrap();
                writeln!(text, "  free amalgam: {}", structure_text(&c.free_amalgam)).unwrap();
                if let Some(h) = &c.free_violation {
                    writeln!(text, "  it contains forbidden {} via {}", structure_text(&h.forbidden), map1(&h.map)).unwrap();
                }
                writeln!(text, "  {} candidate amalgams tried up to size {}", c.candidates_tried, c.size_bound).unwrap();
            }
            Ok(Outcome::new(n, status, code, json!({ "class": spec.to_doc(), "report": r }), text))
        }
        Cmd::Flim { class: cl, prefix } => {
            let spec = class(cl)?;
            match flim_prefix(&spec, &flim_config(prefix)) {
                Ok(p) => {
                    let status = if p.stopped { "stopped" } else { "built" };
                    let mut text = format!(
                        "{}: prefix of {} points after {} steps ({} inclusion pairs)\n  chain sizes: {:?}\n",
                        spec.name,
                        p.top.size(),
                        p.log.len(),
                        p.pairs.len(),
                        p.chain_sizes
                    );
                    if p.capped {
                        writeln!(text, "  size cap {} was hit", prefix.max_size).unwrap();
                    }
                    match p.guaranteed_level() {
                        Some(t) => writeln!(text, "  extension guaranteed from chain member {t} ({} points)", p.chain_sizes[t]).unwrap(),
                        None => writeln!(text, "  no chain member has every pair scheduled after it").unwrap(),
                    }
                    writeln!(text, "  top: {}", structure_text(&p.top)).unwrap();
                    let g = p.guaranteed_level();
                    Ok(Outcome::new(n, status, EXIT_VERDICT, json!({ "prefix": p.to_doc(), "top": p.top, "guaranteed_level": g }), text))
                }
                Err(Error::Refused(msg)) => {
                    let text = format!("{}: refused: {msg}\n", spec.name);
                    Ok(Outcome::new(n, "refused", EXIT_VERDICT, json!({ "class": spec.name, "reason": msg }), text))
                }
                Err(e) => Err(e.into()),
            }
        }
        Cmd::ExtProp { class: cl, prefix, s, depth } => {
            let spec = class(cl)?;
            let p = flim_prefix(&spec, &flim_config(prefix))?;
            let r = match p.guaranteed_level() {
                Some(t) => check_extension_from(&p, *s, p.chain_sizes[t]),
                None => check_extension_property(&p, *s),
            };
            let h = (*depth > 0).then(|| check_ultrahomogeneity(&p, *s, *depth));
            let complete = r.complete() && h.as_ref().is_none_or(|h| h.successes == h.partial_isos);
            let (status, code) = if complete { ("complete", EXIT_VERDICT) } else { ("incomplete-at-bound", EXIT_INCONCLUSIVE) };
            let mut text = format!(
                "{}: {status}; {}/{} embeddings from the first {} of {} points extend (|C| <= {s})\n",
                spec.name, r.extended, r.instances, r.source_size, r.top_size
            );
            for f in r.failures.iter().take(10) {
                writeln!(text, "  pair {}: {} on {} does not extend", f.pair, map1(&f.g), map1(&f.subset)).unwrap();
            }
            if r.failures_total > 10 {
                writeln!(text, "  ... {} failures in all", r.failures_total).unwrap();
            }
            if let Some(h) = &h {
                writeln!(text, "  back-and-forth to depth {depth}: {}/{} partial isomorphisms", h.successes, h.partial_isos).unwrap();
            }
            Ok(Outcome::new(n, status, code, json!({ "extension": r, "homogeneity": h }), text))
        }
        Cmd::Arrow { q } => arrow(n, &query(q)?, cache),
        Cmd::Degree { class: cl, a, top, prefix, r_max, b_bound, witness_bound, s } => {
            let spec = class(cl)?;
            let a = member_of(&spec, a)?;
            let top = top_for(&spec, top, prefix)?;
            let cfg = DegreeConfig { r_max: *r_max, b_bound: *b_bound, witness_bound: *witness_bound, s: *s };
            let r = degree_report(&spec, &a, &cfg, &top)?;
            let (status, code) = match r.status {
                DegreeStatus::Exact => ("exact", EXIT_VERDICT),
                DegreeStatus::Inconsistent => ("inconsistent", EXIT_VERDICT),
                DegreeStatus::InconclusiveAtBound => ("inconclusive-at-bound", EXIT_INCONCLUSIVE),
            };
            let b_bound = b_bound.unwrap_or(a.size() + 1);
            let mut text = format!("degree of A in {}: {status}\n", spec.name);
            match r.upper {
                Some(u) => writeln!(
                    text,
                    "  upper: {u} (every B up to size {b_bound} has a witness up to size {witness_bound} for r = {})",
                    u + 1
                )
                .unwrap(),
                None => writeln!(
                    text,
                    "  upper: none found with r < {r_max}, B up to size {b_bound}, witnesses up to size {witness_bound}"
                )
                .unwrap(),
            }
            writeln!(
                text,
                "  lower: {} ({} of {} order classes syndetic at horizon {s} in a {}-point target)",
                r.lower,
                r.lower_evidence.classes.iter().filter(|c| c.syndetic).count(),
                r.lower_evidence.classes.len(),
                top.size()
            )
            .unwrap();
            let su = r.structural_upper.map_or("-".to_string(), |x| x.to_string());
            writeln!(text, "  |Aut(A)| = {}; structural lower {}, upper {su}", r.aut_size, r.structural_lower).unwrap();
            Ok(Outcome::new(n, status, code, json!({ "degree": r }), text))
        }
        Cmd::Thick { set } | Cmd::Syndetic { set } => {
            let thick = matches!(cmd, Cmd::Thick { .. });
            let spec = class(&set.class)?;
            let es = embedding_set(&spec, set)?;
            let (yes, rep) = if thick {
                let r = thick_at_horizon(&spec, &es, set.s)?;
                (r.thick, r)
            } else {
                let r = syndetic_at_horizon(&spec, &es, set.s)?;
                (r.syndetic, r.complement)
            };
            let word = if thick { "thick" } else { "syndetic" };
            let status = if yes { word.to_string() } else { format!("not-{word}") };
            let mut text = format!(
                "{} of the embeddings of A into a {}-point target: {status} at horizon {}\n",
                es.members.len(),
                es.target.size(),
                set.s
            );
            describe_thick(&mut text, &rep, thick);
            Ok(Outcome::new(n, &status, EXIT_VERDICT, json!({ "members": es.members.len(), word: yes, "report": rep }), text))
        }
        Cmd::CnfExport { q, out } => {
            let q = query(q)?;
            let ex = match export_bad_coloring_cnf(&q) {
                Err(Error::TriviallyHolds(m)) => return Ok(trivial(n, &m)),
                r => r?,
            };
            let mut text = String::new();
            if let Some(path) = out {
                std::fs::write(path, &ex.text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
                writeln!(text, "wrote {} variables, {} clauses to {}", ex.vars, ex.clauses, path.display()).unwrap();
            } else {
                text.push_str(&ex.text);
            }
            Ok(Outcome::new(n, "exported", EXIT_VERDICT, json!({ "cnf": ex }), text))
        }
        Cmd::ImportModel { q, model } => {
            let q = query(q)?;
            let text = input::text_file(model)?;
            let res = import_sat_model(&q, &text)?;
            Ok(arrow_outcome(n, &res))
        }
        Cmd::Expansions { expansion, a, reasonable, precompact } => {
            let spec = input::expansion(expansion)?;
            let a = input::structure(a)?;
            let ex = expansions_of(&spec, &a)?;
            let iso = ex.iter().map(|s| canonical_form(s).code).collect::<std::collections::BTreeSet<_>>().len();
            let mut text = format!("{} expansion(s) of A in {} ({iso} up to isomorphism)\n", ex.len(), spec.name);
            for e in &ex {
                writeln!(text, "  {}", structure_text(e)).unwrap();
            }
            let rr = reasonable.map(|b| check_reasonable(&spec, b, None)).transpose()?;
            if let Some(r) = &rr {
                writeln!(text, "reasonable up to size {}: {} ({} expansions checked)", r.bound, r.reasonable, r.checked).unwrap();
            }
            let pc = precompact.map(|b| check_precompact(&spec, b)).transpose()?;
            if let Some(p) = &pc {
                let counts: Vec<usize> = p.rows.iter().map(|r| r.labeled).collect();
                writeln!(text, "expansion counts up to size {}: {counts:?}", p.bound).unwrap();
            }
            Ok(Outcome::new(
                n,
                "ok",
                EXIT_VERDICT,
                json!({ "count": ex.len(), "iso_types": iso, "expansions": ex, "reasonable": rr, "precompact": pc }),
                text,
            ))
        }
        Cmd::CheckExpp { expansion, star_bound, bound } => {
            let spec = input::expansion(expansion)?;
            let r = check_expp(&spec, *star_bound, *bound)?;
            let refuted = r.rows.iter().any(|x| x.verdict == ExpPVerdict::Refuted);
            let (status, code) = if r.holds_at_bound {
                ("holds-at-bound", EXIT_VERDICT)
            } else if refuted {
                ("refuted", EXIT_VERDICT)
            } else {
                ("inconclusive-at-bound", EXIT_INCONCLUSIVE)
            };
            let mut text = format!("{}: expansion property {status} (A* up to {star_bound}, B up to {bound})\n", spec.name);
            for row in &r.rows {
                let what = match row.verdict {
                    ExpPVerdict::Witness => format!("witness {}", structure_text(row.witness.as_ref().unwrap())),
                    ExpPVerdict::Refuted => format!("refuted by constant pattern {:?}", row.refutation.as_ref().unwrap().pattern),
                    ExpPVerdict::Exhausted => format!("no witness among {} candidates", row.candidates),
                };
                writeln!(text, "  A* = {}: {what}", structure_text(&row.a_star)).unwrap();
            }
            Ok(Outcome::new(n, status, code, json!({ "expansion": spec.to_doc(), "report": r }), text))
        }
        Cmd::Consistency { expansion, a, prefix, r_max, witness_bound, s } => {
            let spec = input::expansion(expansion)?;
            let a = input::structure(a)?;
            let dcfg = DegreeConfig { r_max: *r_max, b_bound: None, witness_bound: *witness_bound, s: *s };
            let r = degree_equals_expansion_count(&spec, &a, &dcfg, &flim_config(prefix))?;
            let (status, code) = match r.status {
                ConsistencyStatus::Consistent => ("consistent", EXIT_VERDICT),
                ConsistencyStatus::Inconsistent => ("inconsistent", EXIT_VERDICT),
                ConsistencyStatus::InconclusiveAtBound => ("inconclusive-at-bound", EXIT_INCONCLUSIVE),
            };
            let mut text = format!("{}: {} expansion(s) of A; {status}\n", spec.name, r.count);
            for c in &r.classes {
                writeln!(
                    text,
                    "  {} embedding(s) pull back to {}: {}",
                    c.size,
                    structure_text(&c.expansion),
                    if c.syndetic { "syndetic" } else { "not syndetic" }
                )
                .unwrap();
            }
            let up = r.degree.upper.map_or("none within bounds".to_string(), |u| u.to_string());
            writeln!(
                text,
                "  degree evidence: lower {}, upper {up}, structural lower {} (|Aut(A)| = {})",
                r.degree.lower, r.degree.structural_lower, r.degree.aut_size
            )
            .unwrap();
            Ok(Outcome::new(n, status, code, json!({ "consistency": r }), text))
        }
        Cmd::LogicAction { expansion, top_star, prefix, m } => {
            let spec = input::expansion(expansion)?;
            let top = match top_star {
                Some(t) => {
                    let s = input::structure(t)?;
                    spec.extended.check_sig(&s)?;
                    s
                }
                None => flim_prefix(&spec.extended, &flim_config(prefix))?.top,
            };
            let r = reachable_points(&spec, &top, *m)?;
            let all = expansions_of(&spec, &spec.reduct(&top)?.pull(&(0..*m).collect::<Vec<_>>()))?;
            let mut text = format!(
                "{} of {} expansions of the first {m} point(s) reached by {} partial isomorphisms\n",
                r.points.len(),
                all.len(),
                r.maps
            );
            for p in &r.points {
                writeln!(text, "  {}", structure_text(p)).unwrap();
            }
            Ok(Outcome::new(n, "ok", EXIT_VERDICT, json!({ "reachable": r, "expansions": all.len() }), text))
        }
        Cmd::Tree { a, b, top, depth, r, k, limit } => {
            let (a, b, top) = (input::structure(a)?, input::structure(b)?, input::structure(top)?);
            let t = bad_coloring_tree(&a, &b, &top, *depth, *r, *k, *limit)?;
            let mut text = String::new();
            for l in &t.levels {
                writeln!(text, "level {}: {} item(s), {} bad coloring(s)", l.t, l.items, l.count).unwrap();
            }
            if let Some(e) = t.first_empty_level {
                writeln!(text, "no bad coloring from level {e} on").unwrap();
            }
            let levels = &t.levels;
            Ok(Outcome::new(n, "ok", EXIT_VERDICT, json!({ "levels": levels, "first_empty_level": t.first_empty_level }), text))
        }
        Cmd::Verify { report } => {
            let rep = crate::report::parse_report(&input::text_file(report)?, report)?;
            match crate::verify::verify_report(&rep) {
                Ok(lines) => {
                    let mut text = format!("verified `{}` report\n", rep.command);
                    for l in &lines {
                        writeln!(text, "  {l}").unwrap();
                    }
                    Ok(Outcome::new(n, "verified", EXIT_VERDICT, json!({ "command": rep.command, "checks": lines }), text))
                }
                Err(why) => {
                    let text = format!("rejected `{}` report: {why}\n", rep.command);
                    Ok(Outcome::new(n, "rejected", EXIT_INPUT, json!({ "command": rep.command, "reason": why }), text))
                }
            }
        }
    }
}

fn embedding_set(spec: &ClassSpec, set: &SetArgs) -> Input<EmbeddingSet> {
    let a = member_of(spec, &set.a)?;
    let top = top_for(spec, &set.top, &set.prefix)?;
    let es = match &set.pattern {
        None => EmbeddingSet::full(&a, &top)?,
        Some(p) => {
            let ranks: Vec<usize> = p
                .split(',')
                .map(|x| x.trim().parse::<usize>().ok().filter(|&v| v >= 1).map(|v| v - 1))
                .collect::<Option<_>>()
                .ok_or_else(|| InputError(format!("--pattern {p}: expected 1-based ranks like 2,1")))?;
            if ranks.len() != a.size() {
                return Err(InputError(format!("--pattern has {} ranks, A has {} points", ranks.len(), a.size())));
            }
            EmbeddingSet::filter(&a, &top, &|e| order_pattern(e) == ranks)?
        }
    };
    Ok(if set.complement { es.complement() } else { es })
}

fn describe_thick(text: &mut String, r: &ThickReport, thick: bool) {
    let subject = if thick { "the set" } else { "the complement" };
    if r.thick {
        writeln!(text, "  {subject} contains a full copy of each of the {} members B checked", r.checked).unwrap();
    } else if let Some(b) = &r.blocking {
        let emb = if r.blocking_embeds == Some(false) { " (B does not embed in the target at all)" } else { "" };
        writeln!(text, "  {subject} contains no full copy of B = {}{emb}", structure_text(b)).unwrap();
    }
}

fn trivial(n: &str, msg: &str) -> Outcome {
    Outcome::new(n, "trivially-holds", EXIT_VERDICT, json!({ "reason": msg }), format!("holds trivially: {msg}\n"))
}

fn arrow_outcome(n: &str, res: &ArrowResult) -> Outcome {
    let q = &res.query;
    let status = match res.verdict {
        ArrowVerdict::Holds => "holds",
        ArrowVerdict::Fails => "fails",
    };
    let kind = if q.structural { "copies" } else { "embeddings" };
    let mut text = format!(
        "arrow {status}: C ↪ (B)^A_{{{},{}}} over {} {kind} of A and {} constraints\n  fingerprint {}\n",
        q.r, q.k, res.items, res.constraints, res.fingerprint
    );
    if let Some(col) = &res.coloring {
        writeln!(text, "  bad coloring:").unwrap();
        let items = instance(q).map(|i| i.items).unwrap_or_default();
        for (i, c) in col.iter().enumerate() {
            let item = items.get(i).map_or(String::new(), |m| map1(m));
            writeln!(text, "    {} {item} -> color {c}", i + 1).unwrap();
        }
    }
    writeln!(text, "  search: {} nodes, {} prunings", res.nodes, res.prunings).unwrap();
    Outcome::new(n, status, EXIT_VERDICT, json!({ "arrow": res }), text)
}

fn arrow(n: &str, q: &ArrowQuery, cache: &mut Cache) -> Input<Outcome> {
    let canonical = json!({ "c": q.c, "b": q.b, "a": q.a, "r": q.r, "k": q.k, "structural": q.structural });
    let key = Cache::key(n, &canonical);
    let verify = |res: &ArrowResult| res.query == *q && res.verify().unwrap_or(false);
    if let Some(res) = cache.get::<ArrowResult>(&key, &verify) {
        return Ok(arrow_outcome(n, &res));
    }
    let run = if q.structural {
        fraisse::ramsey::structural_arrow_check(&q.c, &q.b, &q.a, q.r, q.k)
    } else {
        fraisse::ramsey::arrow_check(&q.c, &q.b, &q.a, q.r, q.k)
    };
    let res = match run {
        Err(Error::TriviallyHolds(m)) => return Ok(trivial(n, &m)),
        r => r?,
    };
    cache.put(&key, &res);
    Ok(arrow_outcome(n, &res))
}
