//! Independent re-checking of the certificates carried by saved reports.
//! Failing arrows, amalgams, extension witnesses and limit prefixes are
//! checked with embedding enumeration and membership tests only.

use std::collections::{BTreeSet, HashMap};

use fraisse::classes::{ApCertificate, ApReport, ClassSpec, ClassSpecDoc, FlimPrefix, FlimPrefixDoc, Verdict};
use fraisse::expansions::{ExpPReport, ExpPVerdict, ExpansionSpec, ExpansionSpecDoc};
use fraisse::ramsey::{arrow_check, ArrowResult, ArrowVerdict};
use fraisse::structures::{all_tuples, compose, embeds, enumerate_copies, enumerate_embeddings, is_embedding, Structure};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::report::Report;

type Checked = Result<Vec<String>, String>;

fn field<T: DeserializeOwned>(r: &Report, name: &str) -> Result<T, String> {
    let v = r.result.get(name).ok_or_else(|| format!("report has no result.{name}"))?;
    serde_json::from_value(v.clone()).map_err(|e| format!("result.{name}: {e}"))
}

fn err(e: fraisse::Error) -> String {
    e.to_string()
}

fn member(spec: &ClassSpec, s: &Structure) -> Result<bool, String> {
    for f in spec.forbidden() {
        if embeds(f, s).map_err(err)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn verify_report(r: &Report) -> Checked {
    match r.command.as_str() {
        "arrow" | "import-model" => verify_arrow(&field::<ArrowResult>(r, "arrow")?),
        "check-ap" => {
            let spec = ClassSpec::from_doc(&field::<ClassSpecDoc>(r, "class")?).map_err(err)?;
            let rep: ApReport = field(r, "report")?;
            let mut out = Vec::new();
            for cert in rep.first_failure.iter().chain(rep.first_inconclusive.iter()) {
                out.extend(verify_amalgam(&spec, cert)?);
            }
            if out.is_empty() {
                out.push(format!("verdict {:?} carries no certificate; nothing to check", rep.verdict));
            }
            Ok(out)
        }
        "check-age" => {
            let spec = ClassSpec::from_doc(&field::<ClassSpecDoc>(r, "class")?).map_err(err)?;
            #[derive(Deserialize)]
            struct Age {
                jep_counterexample: Option<ApCertificate>,
            }
            let rep: Age = field(r, "report")?;
            match &rep.jep_counterexample {
                Some(c) => verify_amalgam(&spec, c),
                None => Ok(vec!["no joint-embedding certificate; nothing to check".into()]),
            }
        }
        "check-expp" => {
            let spec = ExpansionSpec::from_doc(&field::<ExpansionSpecDoc>(r, "expansion")?).map_err(err)?;
            verify_expp(&spec, &field(r, "report")?)
        }
        "flim" => verify_flim(&field(r, "prefix")?),
        other => Err(format!("reports of `{other}` carry no certificate")),
    }
}

fn verify_arrow(res: &ArrowResult) -> Checked {
    let q = &res.query;
    match res.verdict {
        ArrowVerdict::Fails => {
            let col = res.coloring.as_ref().ok_or("failing result without a coloring")?;
            let (items, cons) = if q.structural {
                let items = enumerate_copies(&q.a, &q.c).map_err(err)?;
                let pos: HashMap<Vec<usize>, usize> = items.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
                let mut cons = Vec::new();
                for bc in enumerate_copies(&q.b, &q.c).map_err(err)? {
                    let inside = enumerate_copies(&q.a, &q.c.pull(&bc)).map_err(err)?;
                    cons.push(inside.iter().map(|s| pos[&s.iter().map(|&x| bc[x]).collect::<Vec<_>>()]).collect::<Vec<_>>());
                }
                (items.len(), cons)
            } else {
                let items = enumerate_embeddings(&q.a, &q.c).map_err(err)?;
                let pos: HashMap<Vec<usize>, usize> = items.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
                let inner = enumerate_embeddings(&q.a, &q.b).map_err(err)?;
                let mut cons = Vec::new();
                for f in enumerate_embeddings(&q.b, &q.c).map_err(err)? {
                    cons.push(inner.iter().map(|e| pos[&compose(&f, e)]).collect::<Vec<_>>());
                }
                (items.len(), cons)
            };
            if col.len() != items {
                return Err(format!("coloring has {} entries, C has {items} items", col.len()));
            }
            if let Some(&bad) = col.iter().find(|&&c| c == 0 || c > q.r) {
                return Err(format!("color {bad} outside 1..={}", q.r));
            }
            for (i, con) in cons.iter().enumerate() {
                let used: BTreeSet<usize> = con.iter().map(|&e| col[e]).collect();
                if used.len() <= q.k {
                    return Err(format!("copy {i} of B sees only {} color(s)", used.len()));
                }
            }
            Ok(vec![format!("bad coloring of {items} items checked against {} copies of B", cons.len())])
        }
        ArrowVerdict::Holds => {
            let again = if q.structural {
                fraisse::ramsey::structural_arrow_check(&q.c, &q.b, &q.a, q.r, q.k)
            } else {
                arrow_check(&q.c, &q.b, &q.a, q.r, q.k)
            }
            .map_err(err)?;
            if again.verdict != ArrowVerdict::Holds || again.fingerprint != res.fingerprint {
                return Err("search rerun does not confirm the arrow".into());
            }
            Ok(vec![format!("arrow confirmed by a fresh search ({} nodes)", again.nodes)])
        }
    }
}

fn verify_amalgam(spec: &ClassSpec, c: &ApCertificate) -> Checked {
    if !is_embedding(&c.f, &c.a, &c.b).map_err(err)? || !is_embedding(&c.g, &c.a, &c.c).map_err(err)? {
        return Err("f or g is not an embedding".into());
    }
    match c.verdict {
        Verdict::Holds => {
            let (Some(d), Some(r), Some(s)) = (&c.d, &c.r, &c.s) else {
                return Err("amalgam certificate is incomplete".into());
            };
            if !is_embedding(r, &c.b, d).map_err(err)? || !is_embedding(s, &c.c, d).map_err(err)? {
                return Err("r or s is not an embedding".into());
            }
            if compose(r, &c.f) != compose(s, &c.g) {
                return Err("square does not commute".into());
            }
            if !member(spec, d)? {
                return Err("amalgam is not a member".into());
            }
            Ok(vec![format!("amalgam of size {} commutes and is a member", d.size())])
        }
        Verdict::Fails | Verdict::Inconclusive => {
            let mut out = vec![];
            if let Some(hit) = &c.free_violation {
                if !spec.forbidden().contains(&hit.forbidden) || !is_embedding(&hit.map, &hit.forbidden, &c.free_amalgam).map_err(err)? {
                    return Err("listed forbidden copy is not in the free amalgam".into());
                }
                out.push(format!("free amalgam contains forbidden structure of size {}", hit.forbidden.size()));
            }
            let again = fraisse::classes::amalgamate(spec, &c.a, &c.b, &c.c, &c.f, &c.g, c.size_bound).map_err(err)?;
            if again.verdict != c.verdict || again.free_amalgam != c.free_amalgam {
                return Err("amalgam search rerun disagrees".into());
            }
            out.push(format!("no amalgam up to size {} confirmed by rerun", c.size_bound));
            Ok(out)
        }
    }
}

/// All expansions of `b`, by trying every assignment of the new tuples.
fn brute_expansions(spec: &ExpansionSpec, b: &Structure) -> Result<Vec<Structure>, String> {
    let base = b.widen_to(spec.extended.sig()).map_err(err)?;
    let free: Vec<(usize, Vec<usize>)> = spec
        .new_symbols()
        .flat_map(|sym| all_tuples(b.size(), spec.extended.sig().arity(sym)).map(move |t| (sym, t)))
        .collect();
    if free.len() > 20 {
        return Err(format!("{} free tuples: too many to enumerate", free.len()));
    }
    let mut out = Vec::new();
    for bits in 0u32..1 << free.len() {
        let mut s = base.clone();
        for (i, (sym, t)) in free.iter().enumerate() {
            if bits >> i & 1 == 1 {
                s.set(*sym, t, true);
            }
        }
        if member(&spec.extended, &s)? {
            out.push(s);
        }
    }
    Ok(out)
}

fn verify_expp(spec: &ExpansionSpec, rep: &ExpPReport) -> Checked {
    let mut out = Vec::new();
    for (i, row) in rep.rows.iter().enumerate() {
        match row.verdict {
            ExpPVerdict::Witness => {
                let b = row.witness.as_ref().ok_or(format!("row {i}: witness missing"))?;
                if !member(&spec.base, b)? {
                    return Err(format!("row {i}: witness is not a base member"));
                }
                let ex = brute_expansions(spec, b)?;
                for e in &ex {
                    if !embeds(&row.a_star, e).map_err(err)? {
                        return Err(format!("row {i}: an expansion of the witness misses A*"));
                    }
                }
                out.push(format!("row {i}: all {} expansions of the witness embed A*", ex.len()));
            }
            ExpPVerdict::Refuted => {
                let rf = row.refutation.as_ref().ok_or(format!("row {i}: refutation missing"))?;
                if !rf.verify(spec, &row.a_star).map_err(err)? {
                    return Err(format!("row {i}: constant-pattern refutation does not check"));
                }
                out.push(format!("row {i}: refuted by constant pattern {:?}", rf.pattern));
            }
            ExpPVerdict::Exhausted => out.push(format!("row {i}: exhausted, nothing to check")),
        }
    }
    Ok(out)
}

fn verify_flim(doc: &FlimPrefixDoc) -> Checked {
    let spec = ClassSpec::from_doc(&doc.class).map_err(err)?;
    for (t, m) in doc.chain.iter().enumerate() {
        if !member(&spec, m)? {
            return Err(format!("chain member {t} is not in the class"));
        }
        if t > 0 {
            let prev = &doc.chain[t - 1];
            let incl: Vec<usize> = (0..prev.size()).collect();
            if !is_embedding(&incl, prev, m).map_err(err)? {
                return Err(format!("chain member {} is not an initial segment of member {t}", t - 1));
            }
        }
    }
    FlimPrefix::replay(doc).map_err(err)?;
    Ok(vec![format!("{} chain members are members, nested, and replay from the seed", doc.chain.len())])
}
