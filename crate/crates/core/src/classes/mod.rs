//! Classes given by forbidden induced substructures: membership, generation,
//! amalgamation with certificates, limit prefixes and coverage reports.

mod age;
mod amalgam;
mod complete;
mod coverage;
mod flim;
mod generate;
pub mod library;
mod spec;

pub(crate) use complete::Completion;
pub use age::{check_age_class, check_ap, AgeReport, ApReport};
pub use amalgam::{amalgamate, amalgamate_seeded, ApCertificate, ForbiddenHit, Verdict};
pub use coverage::{
    check_extension_from, check_extension_property, check_ultrahomogeneity, extends, ExtensionFailure,
    ExtensionReport, HomogeneityFailure, HomogeneityReport, PartialIso,
};
pub use flim::{
    flim_prefix, inclusion_pairs, inhabited_sizes, schedule, FlimConfig, FlimPrefix, FlimPrefixDoc, InclusionPair,
    LogEntry, StepKind,
};
pub use generate::{generate_structures, generate_up_to};
pub use spec::{minimal_forbidden, ClassSpec, ClassSpecDoc};
