use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: &str = "fraisse-report";
pub const SCHEMA_VERSION: u32 = 1;

/// Exit codes: a verdict was reached, no verdict within the bounds, or the
/// input was rejected.
pub const EXIT_VERDICT: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema: String,
    pub version: u32,
    pub command: String,
    pub status: String,
    pub exit_code: i32,
    pub result: Value,
}

/// A finished command: the structured report plus its text rendering.
pub struct Outcome {
    pub report: Report,
    pub text: String,
}

impl Outcome {
    pub fn new(command: &str, status: &str, exit_code: i32, result: impl Serialize, text: String) -> Self {
        Outcome {
            report: Report {
                schema: SCHEMA.into(),
                version: SCHEMA_VERSION,
                command: command.into(),
                status: status.into(),
                exit_code,
                result: serde_json::to_value(result).expect("reports serialize"),
            },
            text,
        }
    }
}

pub fn emit_json(r: &Report) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("reports serialize");
    s.push('\n');
    s
}

pub fn parse_report(text: &str, origin: &str) -> Result<Report, crate::input::InputError> {
    let r: Report = crate::input::parse_json(text, origin)?;
    if r.schema != SCHEMA || r.version != SCHEMA_VERSION {
        return Err(crate::input::InputError(format!(
            "{origin}: report schema {} v{} is not {SCHEMA} v{SCHEMA_VERSION}",
            r.schema, r.version
        )));
    }
    Ok(r)
}

/// 1-based rendering of a vertex map.
pub fn map1(m: &[usize]) -> String {
    let parts: Vec<String> = m.iter().map(|x| (x + 1).to_string()).collect();
    format!("[{}]", parts.join(" "))
}

/// One line per relation, 1-based tuples.
pub fn structure_text(s: &fraisse::structures::Structure) -> String {
    let mut out = format!("size {}", s.size());
    for (i, sym) in s.sig().symbols().iter().enumerate() {
        let ts: Vec<String> = s.tuples(i).iter().map(|t| map1(t)).collect();
        out.push_str(&format!("; {}: {}", sym.name, if ts.is_empty() { "-".to_string() } else { ts.join(" ") }));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let o = Outcome::new("gen", "ok", 0, serde_json::json!({"counts": [1, 2], "x": 0.5}), String::new());
        let text = emit_json(&o.report);
        assert_eq!(parse_report(&text, "r").unwrap(), o.report);
    }
}
