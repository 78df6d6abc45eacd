//! DIMACS export of the bad-coloring problem and import of solver models.
//!
//! Variable `e·r + c` (c in `1..=r`) says item `e` has color `c`. The formula
//! is satisfiable iff the arrow fails.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::arrow::{instance, ArrowQuery, ArrowResult, ArrowVerdict};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfExport {
    pub vars: usize,
    pub clauses: usize,
    pub fingerprint: String,
    pub text: String,
}

pub fn var(e: usize, c: usize, r: usize) -> usize {
    e * r + c
}

fn k_subsets(r: usize, k: usize) -> Vec<Vec<usize>> {
    crate::structures::subsets(r, k)
        .into_iter()
        .map(|s| s.into_iter().map(|c| c + 1).collect())
        .collect()
}

pub fn export_bad_coloring_cnf(q: &ArrowQuery) -> Result<CnfExport> {
    let inst = instance(q)?;
    let (n, r) = (inst.items.len(), q.r);
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    for e in 0..n {
        clauses.push((1..=r).map(|c| var(e, c, r) as i64).collect());
        for c1 in 1..=r {
            for c2 in c1 + 1..=r {
                clauses.push(vec![-(var(e, c1, r) as i64), -(var(e, c2, r) as i64)]);
            }
        }
    }
    let ts = k_subsets(r, q.k);
    for con in &inst.constraints {
        for t in &ts {
            let mut cl = Vec::new();
            for &e in con {
                for c in (1..=r).filter(|c| !t.contains(c)) {
                    cl.push(var(e, c, r) as i64);
                }
            }
            clauses.push(cl);
        }
    }
    let fingerprint = inst.fingerprint();
    let mut text = String::new();
    let kind = if q.structural { "copies" } else { "embeddings" };
    writeln!(text, "c bad {r}-colorings of {kind} of A in C, no copy of B within {} colors", q.k).unwrap();
    writeln!(text, "c fingerprint {fingerprint}").unwrap();
    for e in 0..n {
        for c in 1..=r {
            writeln!(text, "c x {} = emb {e} color {c}", var(e, c, r)).unwrap();
        }
    }
    writeln!(text, "p cnf {} {}", n * r, clauses.len()).unwrap();
    for cl in &clauses {
        for l in cl {
            write!(text, "{l} ").unwrap();
        }
        text.push_str("0\n");
    }
    Ok(CnfExport { vars: n * r, clauses: clauses.len(), fingerprint, text })
}

/// Read a solver's answer: competition output (`s …` / `v …` lines) or
/// MiniSat's result file (`SAT` / `UNSAT` then literals). A satisfying
/// model is decoded into a coloring and verified.
pub fn import_sat_model(q: &ArrowQuery, model: &str) -> Result<ArrowResult> {
    let inst = instance(q)?;
    let (n, r) = (inst.items.len(), q.r);
    let mut status: Option<bool> = None;
    let mut lits: Vec<i64> = Vec::new();
    for (ln, line) in model.lines().enumerate() {
        let line = line.trim();
        let body = match line.split_whitespace().next() {
            None | Some("c") => continue,
            Some("s") => {
                status = Some(parse_status(line[1..].trim(), ln)?);
                continue;
            }
            Some("SAT") | Some("SATISFIABLE") | Some("UNSAT") | Some("UNSATISFIABLE") | Some("INDET") => {
                status = Some(parse_status(line, ln)?);
                continue;
            }
            Some("v") => &line[1..],
            Some(_) => line,
        };
        for tok in body.split_whitespace() {
            let l: i64 = tok
                .parse()
                .map_err(|_| Error::malformed(format!("line {}", ln + 1), format!("not a literal: {tok}")))?;
            if l != 0 {
                lits.push(l);
            }
        }
    }
    let sat = match status {
        Some(s) => s,
        None if !lits.is_empty() => true,
        None => return Err(Error::malformed("model", "no status line and no literals")),
    };
    let base = ArrowResult {
        query: q.clone(),
        verdict: ArrowVerdict::Holds,
        coloring: None,
        items: n,
        constraints: inst.constraints.len(),
        nodes: 0,
        prunings: 0,
        fingerprint: inst.fingerprint(),
    };
    if !sat {
        return Ok(base);
    }
    let mut colors = vec![0usize; n];
    for l in lits.into_iter().filter(|&l| l > 0) {
        let v = l as usize;
        if v > n * r {
            return Err(Error::SolverIntegration(format!("variable {v} beyond the {} exported", n * r)));
        }
        let (e, c) = ((v - 1) / r, (v - 1) % r + 1);
        if colors[e] != 0 {
            return Err(Error::SolverIntegration(format!("item {e} has two colors")));
        }
        colors[e] = c;
    }
    if let Some(e) = colors.iter().position(|&c| c == 0) {
        return Err(Error::SolverIntegration(format!("item {e} has no color")));
    }
    let zero: Vec<usize> = colors.iter().map(|c| c - 1).collect();
    if let Some(ci) = inst.good_constraint(&zero) {
        return Err(Error::SolverIntegration(format!(
            "model is not a bad coloring: constraint {ci} uses at most {} colors",
            q.k
        )));
    }
    Ok(ArrowResult { verdict: ArrowVerdict::Fails, coloring: Some(colors), ..base })
}

fn parse_status(s: &str, ln: usize) -> Result<bool> {
    match s {
        "SAT" | "SATISFIABLE" => Ok(true),
        "UNSAT" | "UNSATISFIABLE" => Ok(false),
        other => Err(Error::malformed(format!("line {}", ln + 1), format!("solver gave no answer: {other}"))),
    }
}
