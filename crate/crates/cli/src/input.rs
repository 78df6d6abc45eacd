//! Structures, classes and expansion specs from built-in names or files.

use std::fs;
use std::path::Path;

use fraisse::classes::{library, ClassSpec, ClassSpecDoc};
use fraisse::expansions::{expansion_by_name, expansion_names, ExpansionSpec, ExpansionSpecDoc};
use fraisse::structures::{named, Structure, StructureDoc};
use serde::de::DeserializeOwned;

#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<fraisse::Error> for InputError {
    fn from(e: fraisse::Error) -> Self {
        InputError(e.to_string())
    }
}

pub type Input<T> = Result<T, InputError>;

/// Parse JSON, reporting the field path on failure.
pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> Input<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            InputError(format!("{origin}: {inner}"))
        } else {
            InputError(format!("{origin}: at {path}: {inner}"))
        }
    })
}

fn read(path: &Path) -> Input<String> {
    fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn is_file(arg: &str) -> bool {
    Path::new(arg).is_file()
}

pub fn structure_from_text(text: &str, origin: &str) -> Input<Structure> {
    let doc: StructureDoc = parse_json(text, origin)?;
    Structure::from_doc(&doc).map_err(|e| InputError(format!("{origin}: {e}")))
}

/// A file path, or a name such as `lo6`, `k3`, `c5`, `p4`, `i3`, `set2`.
pub fn structure(arg: &str) -> Input<Structure> {
    if is_file(arg) {
        return structure_from_text(&read(Path::new(arg))?, arg);
    }
    named::by_name(arg).ok_or_else(|| InputError(format!("{arg}: no such file and not a structure name (lo<n>, k<n>, i<n>, c<n>, p<n>, set<n>)")))
}

pub struct LoadedClass {
    pub spec: ClassSpec,
    pub warnings: Vec<String>,
}

pub fn class_from_text(text: &str, origin: &str) -> Input<LoadedClass> {
    let doc: ClassSpecDoc = parse_json(text, origin)?;
    let spec = ClassSpec::from_doc(&doc).map_err(|e| InputError(format!("{origin}: {e}")))?;
    let mut warnings = Vec::new();
    if spec.duplicates_dropped() > 0 {
        warnings.push(format!(
            "{origin}: {} forbidden structure(s) isomorphic to an earlier one were dropped",
            spec.duplicates_dropped()
        ));
    }
    Ok(LoadedClass { spec, warnings })
}

pub fn class(arg: &str) -> Input<LoadedClass> {
    if is_file(arg) {
        return class_from_text(&read(Path::new(arg))?, arg);
    }
    library::by_name(arg).map(|spec| LoadedClass { spec, warnings: Vec::new() }).ok_or_else(|| {
        InputError(format!("{arg}: no such file and not a built-in class ({})", library::class_names().join(", ")))
    })
}

pub fn expansion(arg: &str) -> Input<ExpansionSpec> {
    if is_file(arg) {
        let doc: ExpansionSpecDoc = parse_json(&read(Path::new(arg))?, arg)?;
        return ExpansionSpec::from_doc(&doc).map_err(|e| InputError(format!("{arg}: {e}")));
    }
    expansion_by_name(arg).ok_or_else(|| {
        InputError(format!("{arg}: no such file and not a built-in expansion ({})", expansion_names().join(", ")))
    })
}

pub fn text_file(arg: &str) -> Input<String> {
    read(Path::new(arg))
}
